use serde::{Deserialize, Serialize};

use super::window::{contradiction, Bound, FramingWindow, WindowEntry, WindowError, MIRRORED};

fn union(a: &[String], b: &[String]) -> Vec<String> {
    let mut v: Vec<String> = a.iter().chain(b).cloned().collect();
    v.sort();
    v.dedup();
    v
}

/// One sweep of the local rules at index `i`. Returns whether anything
/// changed.
fn sweep_at(w: &mut FramingWindow, i: usize) -> bool {
    let n = w.entries().len();
    let e = w.entries()[i].clone();
    let k = e.k;
    let odd = k.rem_euclid(2) == 1;
    let mut changed = false;
    let entries = w.entries_mut();

    let cur = &mut entries[i];
    changed |= cur.improve(Bound::Lower, k.abs(), &["abs".to_string()]);
    if let Some(l) = cur.lower {
        if (l - k).rem_euclid(2) != 0 {
            let s = cur.sources(Bound::Lower);
            changed |= cur.improve(Bound::Lower, l + 1, &s);
        }
    }
    if let Some(u) = cur.upper {
        if (u - k).rem_euclid(2) != 0 {
            let s = cur.sources(Bound::Upper);
            changed |= cur.improve(Bound::Upper, u - 1, &s);
        }
    }

    let mut neighbours = Vec::new();
    if i > 0 {
        neighbours.push(i - 1);
    }
    if i + 1 < n {
        neighbours.push(i + 1);
    }
    for &j in &neighbours {
        let nb = entries[j].clone();
        if let Some(l) = nb.lower {
            changed |= entries[i].improve(Bound::Lower, l - 1, &nb.sources(Bound::Lower));
        }
        if let Some(u) = nb.upper {
            changed |= entries[i].improve(Bound::Upper, u + 1, &nb.sources(Bound::Upper));
        }
    }

    if odd && i > 0 && i + 1 < n {
        let (left, right) = (entries[i - 1].clone(), entries[i + 1].clone());
        // n(k) = min(n(k-1), n(k+1)) + 1
        if let (Some(a), Some(b)) = (left.lower, right.lower) {
            let s = union(&left.sources(Bound::Lower), &right.sources(Bound::Lower));
            changed |= entries[i].improve(Bound::Lower, a.min(b) + 1, &s);
        }
        // one neighbour equals n(k) - 1; if one side cannot, the other must
        let me = entries[i].clone();
        if let Some(u) = me.upper {
            for (this, other) in [(&left, i + 1), (&right, i - 1)] {
                if let Some(l) = this.lower {
                    if l > u - 1 {
                        let s = union(&me.sources(Bound::Upper), &this.sources(Bound::Lower));
                        changed |= entries[other].improve(Bound::Upper, u - 1, &s);
                    }
                }
            }
        }
    }
    changed
}

fn check(w: &FramingWindow) -> Result<(), WindowError> {
    for e in w.entries() {
        if let (Some(l), Some(u)) = (e.lower, e.upper) {
            if l > u {
                return Err(contradiction(e));
            }
        }
    }
    Ok(())
}

/// Closes a window under `n(k) >= |k|`, parity, `n(k±1) = n(k) ± 1` and
/// `n(k) = min(n(k-1), n(k+1)) + 1` for odd `k`, applied to both bounds.
/// Never loosens a bound. A lower bound above an upper bound is returned as
/// an error carrying the sources of both.
pub fn tighten(w: &FramingWindow) -> Result<FramingWindow, WindowError> {
    let mut out = w.clone();
    let n = out.entries().len();
    loop {
        let mut changed = false;
        for i in 0..n {
            changed |= sweep_at(&mut out, i);
        }
        for i in (0..n).rev() {
            changed |= sweep_at(&mut out, i);
        }
        check(&out)?;
        if !changed {
            return Ok(out);
        }
    }
}

/// `n_{mK}(k) = n_K(-k)`.
pub fn mirror(w: &FramingWindow) -> FramingWindow {
    let mut out = FramingWindow::new(-w.k_max(), -w.k_min()).unwrap();
    for (slot, e) in out.entries_mut().iter_mut().zip(w.entries().iter().rev()) {
        let mut provenance = e.provenance.clone();
        if let Some(pos) = provenance.iter().position(|t| t == MIRRORED) {
            provenance.remove(pos);
        } else {
            provenance.push(MIRRORED.to_string());
            provenance.sort();
        }
        *slot = WindowEntry { k: -e.k, lower: e.lower, upper: e.upper, provenance };
    }
    out
}

/// Sources whose lower bounds hold with slope one beyond any window.
fn is_global_source(s: &str) -> bool {
    s.starts_with("theorem") || s.starts_with("convolve")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

/// The intercept `n(k) - |k|` of a tail, if the tail is known to be linear
/// from the window edge onwards. That holds when the last three values are
/// exact with slope one and either the edge value is `|k|` or the edge
/// lower bound comes from a source valid for every `k`.
pub fn tail_intercept(w: &FramingWindow, side: Side) -> Option<i64> {
    let (edge, step) = match side {
        Side::Left => (w.k_min(), 1),
        Side::Right => (w.k_max(), -1),
    };
    let pts: Vec<&WindowEntry> = (0..3).filter_map(|d| w.entry(edge + step * d)).collect();
    if pts.len() < 3 || !pts.iter().all(|e| e.is_exact()) {
        return None;
    }
    let v: Vec<i64> = pts.iter().map(|e| e.lower.unwrap()).collect();
    if v[0] != v[1] + 1 || v[1] != v[2] + 1 {
        return None;
    }
    let anchored = v[0] == edge.abs() || pts[0].sources(Bound::Lower).iter().any(|s| is_global_source(s));
    if !anchored || edge * step > 0 {
        return None;
    }
    Some(v[0] - edge.abs())
}

/// Bounds on the natural framing. `None` means unbounded on that side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NaturalFramingEstimate {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
    pub certified: bool,
}

impl NaturalFramingEstimate {
    pub fn exact(value: i64) -> NaturalFramingEstimate {
        NaturalFramingEstimate { lo: Some(value), hi: Some(value), certified: true }
    }

    pub fn value(&self) -> Option<i64> {
        match (self.lo, self.hi) {
            (Some(a), Some(b)) if a == b => Some(a),
            _ => None,
        }
    }

    pub fn negate(&self) -> NaturalFramingEstimate {
        NaturalFramingEstimate { lo: self.hi.map(|v| -v), hi: self.lo.map(|v| -v), certified: self.certified }
    }

    pub fn contains(&self, v: i64) -> bool {
        self.lo.is_none_or(|lo| lo <= v) && self.hi.is_none_or(|hi| v <= hi)
    }

    pub fn render(&self) -> String {
        match self.value() {
            Some(v) => v.to_string(),
            None => {
                let lo = self.lo.map_or("-inf".to_string(), |v| v.to_string());
                let hi = self.hi.map_or("inf".to_string(), |v| v.to_string());
                format!("[{lo},{hi}]")
            }
        }
    }
}

/// The axis `(c₋ - c₊)/2` from the tail intercepts `c₋ = lim n(-k) - k` and
/// `c₊ = lim n(k) - k`. Both sequences decrease and are non-negative, so an
/// open tail still gives `0 <= c <= min(upper(k) - |k|)`.
pub fn natural_framing(w: &FramingWindow) -> Result<NaturalFramingEstimate, WindowError> {
    let w = tighten(w)?;
    let bound = |sign: i64| -> (Option<i64>, Option<i64>) {
        let side = if sign > 0 { Side::Right } else { Side::Left };
        if let Some(c) = tail_intercept(&w, side) {
            return (Some(c), Some(c));
        }
        let hi = w.entries().iter().filter_map(|e| e.upper.map(|u| u - sign * e.k)).min();
        (Some(0), hi)
    };
    let (a_lo, a_hi) = bound(-1);
    let (b_lo, b_hi) = bound(1);
    let half = |x: i64| x.div_euclid(2);
    let lo = match (a_lo, b_hi) {
        (Some(a), Some(b)) => Some(half(a - b)),
        _ => None,
    };
    let hi = match (a_hi, b_lo) {
        (Some(a), Some(b)) => Some(half(a - b)),
        _ => None,
    };
    let certified = lo.is_some() && lo == hi && a_lo == a_hi && b_lo == b_hi;
    Ok(NaturalFramingEstimate { lo, hi, certified })
}

/// Bounds on the minimum of the framing function; needs both tails.
pub fn knottedness(w: &FramingWindow) -> Result<(i64, i64), WindowError> {
    let w = tighten(w)?;
    for side in [Side::Left, Side::Right] {
        if tail_intercept(&w, side).is_none() {
            return Err(WindowError::UncertifiedTail { side: side.name() });
        }
    }
    let lo = w.entries().iter().filter_map(|e| e.lower).min().unwrap();
    let hi = w.entries().iter().filter_map(|e| e.upper).min().unwrap();
    Ok((lo, hi))
}

/// Extends a window with certified tails to all of `Z`.
fn extended(w: &FramingWindow, b: Bound, k: i64) -> i64 {
    let clamped = k.clamp(w.k_min(), w.k_max());
    w.entry(clamped).unwrap().get(b).unwrap() + (k - clamped).abs()
}

/// `n_{K₁#K₂}(k) = min_{k'} n_{K₁}(k') + n_{K₂}(k - k')`, on lower and upper
/// bounds separately. Both windows need certified tails; then the minimum
/// over `Z` is attained in a finite range and the result covers the sum of
/// the two ranges.
pub fn convolve(w1: &FramingWindow, w2: &FramingWindow) -> Result<FramingWindow, WindowError> {
    let w1 = tighten(w1)?;
    let w2 = tighten(w2)?;
    for w in [&w1, &w2] {
        for side in [Side::Left, Side::Right] {
            if tail_intercept(w, side).is_none() {
                return Err(WindowError::UncertifiedTail { side: side.name() });
            }
        }
    }
    let (lo, hi) = (w1.k_min() + w2.k_min(), w1.k_max() + w2.k_max());
    let mut out = FramingWindow::new(lo, hi)?;
    for k in lo..=hi {
        // outside this range both summands grow with slope one
        let from = w1.k_min().min(k - w2.k_max());
        let to = w1.k_max().max(k - w2.k_min());
        for (b, tag) in [(Bound::Lower, "convolve"), (Bound::Upper, "convolve")] {
            let v = (from..=to).map(|j| extended(&w1, b, j) + extended(&w2, b, k - j)).min().unwrap();
            match b {
                Bound::Lower => out.add_lower(k, v, tag)?,
                Bound::Upper => out.add_upper(k, v, tag)?,
            }
        }
    }
    tighten(&out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(lo: i64, hi: i64, f: impl Fn(i64) -> i64, source: &str) -> FramingWindow {
        let mut w = FramingWindow::new(lo, hi).unwrap();
        for k in lo..=hi {
            w.add_lower(k, f(k), source).unwrap();
            w.add_upper(k, f(k), source).unwrap();
        }
        w
    }

    fn trefoil(lo: i64, hi: i64) -> FramingWindow {
        exact(lo, hi, |k| 2 + (k + 2).abs(), "theorem:test")
    }

    #[test]
    fn empty_window_gets_abs() {
        let w = tighten(&FramingWindow::new(-5, 5).unwrap()).unwrap();
        for e in w.entries() {
            assert_eq!(e.lower, Some(e.k.abs()));
            assert_eq!(e.upper, None);
        }
    }

    #[test]
    fn odd_rule_on_uppers() {
        let mut w = FramingWindow::new(-6, 6).unwrap();
        w.add_upper(-2, 2, "a").unwrap();
        w.add_upper(0, 4, "b").unwrap();
        let t = tighten(&w).unwrap();
        assert_eq!(t.upper(-1), Some(3));
        assert_eq!(t.upper(0), Some(4));
    }

    #[test]
    fn odd_rule_forces_other_neighbour() {
        // n(1) <= 3 and n(0) >= 4 force n(2) <= 2
        let mut w = FramingWindow::new(-4, 4).unwrap();
        w.add_upper(1, 3, "u").unwrap();
        w.add_lower(0, 4, "l").unwrap();
        let t = tighten(&w).unwrap();
        assert_eq!(t.upper(2), Some(2));
        assert_eq!(t.entry(2).unwrap().sources(Bound::Upper), vec!["l", "u"]);
    }

    #[test]
    fn contradiction_carries_sources() {
        let mut w = FramingWindow::new(-4, 4).unwrap();
        w.add_upper(0, 2, "cert").unwrap();
        w.add_lower(2, 6, "theorem:x").unwrap();
        match tighten(&w) {
            Err(WindowError::Contradiction { lower_sources, upper_sources, .. }) => {
                assert!(lower_sources.contains(&"theorem:x".to_string()));
                assert!(upper_sources.contains(&"cert".to_string()));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn consistent_exact_data_is_fixed() {
        let w = tighten(&trefoil(-10, 10)).unwrap();
        assert_eq!(tighten(&w).unwrap(), w);
        for e in w.entries() {
            assert_eq!(e.upper, Some(2 + (e.k + 2).abs()));
        }
    }

    #[test]
    fn mirror_moves_minimum() {
        let w = mirror(&trefoil(-10, 10));
        assert_eq!(w.upper(2), Some(2));
        assert!(w.entries().iter().all(|e| e.is_mirrored()));
        assert_eq!(mirror(&w), trefoil(-10, 10));
    }

    #[test]
    fn trefoil_axis() {
        let nf = natural_framing(&trefoil(-10, 10)).unwrap();
        assert_eq!(nf, NaturalFramingEstimate::exact(-2));
        assert_eq!(knottedness(&trefoil(-10, 10)).unwrap(), (2, 2));
    }

    #[test]
    fn open_tail_gives_interval() {
        let mut w = FramingWindow::new(-8, 8).unwrap();
        w.add_upper(-4, 4, "c1").unwrap();
        w.add_upper(0, 4, "c2").unwrap();
        let nf = natural_framing(&w).unwrap();
        assert_eq!((nf.lo, nf.hi, nf.certified), (Some(-2), Some(0), false));
        let unbounded = natural_framing(&FramingWindow::new(-8, 8).unwrap()).unwrap();
        assert_eq!((unbounded.lo, unbounded.hi), (None, None));
    }

    #[test]
    fn exact_but_unanchored_tail_is_open() {
        let w = exact(-8, 8, |k| 2 + (k + 2).abs(), "certificate:x");
        let nf = natural_framing(&w).unwrap();
        assert!(!nf.certified);
        assert_eq!((nf.lo, nf.hi), (Some(-2), Some(0)));
    }

    #[test]
    fn convolve_two_trefoils() {
        let c = convolve(&trefoil(-10, 10), &trefoil(-10, 10)).unwrap();
        assert_eq!((c.k_min(), c.k_max()), (-20, 20));
        for e in c.entries() {
            assert_eq!((e.lower, e.upper), (Some(4 + (e.k + 4).abs()), Some(4 + (e.k + 4).abs())));
        }
        assert_eq!(natural_framing(&c).unwrap(), NaturalFramingEstimate::exact(-4));
    }

    #[test]
    fn unknot_is_identity() {
        let unknot = exact(-6, 6, |k| k.abs(), "unknot");
        let c = convolve(&trefoil(-10, 10), &unknot).unwrap();
        for k in -16..=16 {
            assert_eq!(c.upper(k), Some(2 + (k + 2).abs()));
        }
    }

    #[test]
    fn convolve_needs_tails() {
        let mut w = FramingWindow::new(-8, 8).unwrap();
        w.add_upper(0, 4, "c").unwrap();
        assert!(matches!(convolve(&w, &trefoil(-4, 4)), Err(WindowError::UncertifiedTail { .. })));
    }
}
