use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Range used when none is given.
pub const DEFAULT_RANGE: (i64, i64) = (-64, 64);

/// Tag marking an entry reflected by [`mirror`](super::mirror).
pub const MIRRORED: &str = "mirrored";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Lower,
    Upper,
}

impl Bound {
    fn prefix(self) -> &'static str {
        match self {
            Bound::Lower => "lower:",
            Bound::Upper => "upper:",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WindowError {
    #[error("empty range {k_min}..={k_max}")]
    EmptyRange { k_min: i64, k_max: i64 },
    #[error("k = {k} outside {k_min}..={k_max}")]
    OutOfRange { k: i64, k_min: i64, k_max: i64 },
    #[error("contradiction at k = {k}: lower {lower} > upper {upper} (lower from {lower_sources:?}, upper from {upper_sources:?})")]
    Contradiction {
        k: i64,
        lower: i64,
        upper: i64,
        lower_sources: Vec<String>,
        upper_sources: Vec<String>,
    },
    #[error("invalid entry at k = {k}: {reason}")]
    Invalid { k: i64, reason: String },
    #[error("{side} tail is not certified")]
    UncertifiedTail { side: &'static str },
    #[error("window file: {0}")]
    File(String),
}

/// Bounds on `n(k)` at one `k`. Provenance tags are `lower:<source>`,
/// `upper:<source>` or [`MIRRORED`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowEntry {
    pub k: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<i64>,
    #[serde(default)]
    pub provenance: Vec<String>,
}

impl WindowEntry {
    pub fn empty(k: i64) -> WindowEntry {
        WindowEntry { k, lower: None, upper: None, provenance: Vec::new() }
    }

    pub fn get(&self, b: Bound) -> Option<i64> {
        match b {
            Bound::Lower => self.lower,
            Bound::Upper => self.upper,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.lower.is_some() && self.lower == self.upper
    }

    /// Sources of one bound, without the prefix.
    pub fn sources(&self, b: Bound) -> Vec<String> {
        self.provenance
            .iter()
            .filter_map(|t| t.strip_prefix(b.prefix()))
            .map(str::to_string)
            .collect()
    }

    pub fn is_mirrored(&self) -> bool {
        self.provenance.iter().any(|t| t == MIRRORED)
    }

    fn set(&mut self, b: Bound, value: i64, sources: &[String]) {
        match b {
            Bound::Lower => self.lower = Some(value),
            Bound::Upper => self.upper = Some(value),
        }
        let prefix = b.prefix();
        self.provenance.retain(|t| !t.starts_with(prefix));
        self.provenance.extend(sources.iter().map(|s| format!("{prefix}{s}")));
        self.provenance.sort();
        self.provenance.dedup();
    }

    fn add_sources(&mut self, b: Bound, sources: &[String]) {
        self.provenance.extend(sources.iter().map(|s| format!("{}{s}", b.prefix())));
        self.provenance.sort();
        self.provenance.dedup();
    }

    /// Replaces the bound if `value` is strictly better.
    pub(crate) fn improve(&mut self, b: Bound, value: i64, sources: &[String]) -> bool {
        let better = match (b, self.get(b)) {
            (_, None) => true,
            (Bound::Lower, Some(v)) => value > v,
            (Bound::Upper, Some(v)) => value < v,
        };
        if better {
            self.set(b, value, sources);
        }
        better
    }
}

/// Lower and upper bounds on a framing function over `k_min..=k_max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "Vec<WindowEntry>", try_from = "Vec<WindowEntry>")]
pub struct FramingWindow {
    k_min: i64,
    k_max: i64,
    entries: Vec<WindowEntry>,
}

impl From<FramingWindow> for Vec<WindowEntry> {
    fn from(w: FramingWindow) -> Vec<WindowEntry> {
        w.entries
    }
}

impl TryFrom<Vec<WindowEntry>> for FramingWindow {
    type Error = WindowError;

    /// Entries may be listed in any order and may skip values of `k`; the
    /// range is the span of the listed ones.
    fn try_from(list: Vec<WindowEntry>) -> Result<FramingWindow, WindowError> {
        let k_min = list.iter().map(|e| e.k).min().ok_or(WindowError::File("no entries".into()))?;
        let k_max = list.iter().map(|e| e.k).max().unwrap();
        let mut w = FramingWindow::new(k_min, k_max)?;
        let mut seen = vec![false; w.entries.len()];
        for e in list {
            let i = (e.k - k_min) as usize;
            if seen[i] {
                return Err(WindowError::File(format!("duplicate entry for k = {}", e.k)));
            }
            seen[i] = true;
            w.entries[i] = e;
        }
        Ok(w)
    }
}

impl FramingWindow {
    pub fn new(k_min: i64, k_max: i64) -> Result<FramingWindow, WindowError> {
        if k_min > k_max {
            return Err(WindowError::EmptyRange { k_min, k_max });
        }
        Ok(FramingWindow { k_min, k_max, entries: (k_min..=k_max).map(WindowEntry::empty).collect() })
    }

    pub fn with_default_range() -> FramingWindow {
        FramingWindow::new(DEFAULT_RANGE.0, DEFAULT_RANGE.1).unwrap()
    }

    pub fn k_min(&self) -> i64 {
        self.k_min
    }

    pub fn k_max(&self) -> i64 {
        self.k_max
    }

    pub fn contains(&self, k: i64) -> bool {
        (self.k_min..=self.k_max).contains(&k)
    }

    pub fn entries(&self) -> &[WindowEntry] {
        &self.entries
    }

    pub(crate) fn entries_mut(&mut self) -> &mut [WindowEntry] {
        &mut self.entries
    }

    pub fn entry(&self, k: i64) -> Option<&WindowEntry> {
        self.contains(k).then(|| &self.entries[(k - self.k_min) as usize])
    }

    pub fn lower(&self, k: i64) -> Option<i64> {
        self.entry(k).and_then(|e| e.lower)
    }

    pub fn upper(&self, k: i64) -> Option<i64> {
        self.entry(k).and_then(|e| e.upper)
    }

    fn entry_mut(&mut self, k: i64) -> Result<&mut WindowEntry, WindowError> {
        if !self.contains(k) {
            return Err(WindowError::OutOfRange { k, k_min: self.k_min, k_max: self.k_max });
        }
        Ok(&mut self.entries[(k - self.k_min) as usize])
    }

    /// Records `n(k) <= value`. An equal bound only adds the source.
    pub fn add_upper(&mut self, k: i64, value: i64, source: &str) -> Result<(), WindowError> {
        self.add(Bound::Upper, k, value, source)
    }

    /// Records `n(k) >= value`. An equal bound only adds the source.
    pub fn add_lower(&mut self, k: i64, value: i64, source: &str) -> Result<(), WindowError> {
        self.add(Bound::Lower, k, value, source)
    }

    fn add(&mut self, b: Bound, k: i64, value: i64, source: &str) -> Result<(), WindowError> {
        let e = self.entry_mut(k)?;
        let src = [source.to_string()];
        if e.get(b) == Some(value) {
            e.add_sources(b, &src);
        } else {
            e.improve(b, value, &src);
        }
        Ok(())
    }

    /// Checks the stated invariants: `lower <= upper`, set values at least
    /// `|k|` and of the parity of `k`.
    pub fn validate(&self) -> Result<(), WindowError> {
        for e in &self.entries {
            for (name, v) in [("lower", e.lower), ("upper", e.upper)] {
                let Some(v) = v else { continue };
                if v < e.k.abs() {
                    return Err(WindowError::Invalid { k: e.k, reason: format!("{name} {v} < |k|") });
                }
                if (v - e.k).rem_euclid(2) != 0 {
                    return Err(WindowError::Invalid { k: e.k, reason: format!("{name} {v} has the wrong parity") });
                }
            }
            if let (Some(l), Some(u)) = (e.lower, e.upper) {
                if l > u {
                    return Err(contradiction(e));
                }
            }
        }
        Ok(())
    }

    /// Points where exact values break one of the four pointwise rules.
    pub fn rule_violations(&self) -> Vec<(i64, &'static str)> {
        let exact = |k: i64| self.entry(k).filter(|e| e.is_exact()).and_then(|e| e.lower);
        let mut out = Vec::new();
        for k in self.k_min..=self.k_max {
            let Some(n) = exact(k) else { continue };
            if n < k.abs() {
                out.push((k, "n(k) >= |k|"));
            }
            if (n - k).rem_euclid(2) != 0 {
                out.push((k, "parity"));
            }
            if let Some(n1) = exact(k + 1) {
                if (n1 - n).abs() != 1 {
                    out.push((k, "n(k+1) = n(k) ± 1"));
                }
            }
            if k.rem_euclid(2) == 1 {
                if let (Some(a), Some(b)) = (exact(k - 1), exact(k + 1)) {
                    if n != a.min(b) + 1 {
                        out.push((k, "odd rule"));
                    }
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.entries).expect("window serializes")
    }

    pub fn from_json(text: &str) -> Result<FramingWindow, WindowError> {
        serde_json::from_str(text).map_err(|e| WindowError::File(e.to_string()))
    }
}

pub(crate) fn contradiction(e: &WindowEntry) -> WindowError {
    WindowError::Contradiction {
        k: e.k,
        lower: e.lower.unwrap_or_default(),
        upper: e.upper.unwrap_or_default(),
        lower_sources: e.sources(Bound::Lower),
        upper_sources: e.sources(Bound::Upper),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let mut w = FramingWindow::new(-3, 3).unwrap();
        w.add_upper(2, 2, "certificate:a").unwrap();
        w.add_lower(-1, 1, "abs").unwrap();
        let back = FramingWindow::from_json(&w.to_json()).unwrap();
        assert_eq!(back, w);
        assert!(!w.to_json().contains("null"));
    }

    #[test]
    fn sparse_file() {
        let w = FramingWindow::from_json(r#"[{"k": -2, "upper": 2, "provenance": ["upper:x"]}, {"k": 2}]"#).unwrap();
        assert_eq!((w.k_min(), w.k_max()), (-2, 2));
        assert_eq!(w.upper(-2), Some(2));
        assert_eq!(w.upper(0), None);
        assert!(FramingWindow::from_json("[]").is_err());
        assert!(FramingWindow::from_json(r#"[{"k": 1}, {"k": 1}]"#).is_err());
        assert!(FramingWindow::from_json(r#"[{"k": 1, "bogus": 3}]"#).is_err());
    }

    #[test]
    fn add_keeps_best_bound() {
        let mut w = FramingWindow::new(0, 4).unwrap();
        w.add_upper(4, 8, "first").unwrap();
        w.add_upper(4, 6, "second").unwrap();
        w.add_upper(4, 10, "third").unwrap();
        w.add_upper(4, 6, "fourth").unwrap();
        assert_eq!(w.upper(4), Some(6));
        assert_eq!(w.entry(4).unwrap().sources(Bound::Upper), vec!["fourth", "second"]);
        assert!(matches!(w.add_upper(5, 5, "x"), Err(WindowError::OutOfRange { .. })));
    }

    #[test]
    fn validate_flags_bad_values() {
        let mut w = FramingWindow::new(0, 4).unwrap();
        w.add_upper(3, 2, "x").unwrap();
        assert!(w.validate().is_err());
        let mut w = FramingWindow::new(0, 4).unwrap();
        w.add_upper(3, 4, "x").unwrap();
        assert!(w.validate().is_err());
        assert!(FramingWindow::new(1, 0).is_err());
    }
}
