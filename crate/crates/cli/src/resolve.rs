use std::path::Path;

use natframe_core::notation::{
    braid_closure_presentation, builtin_knot, parse_braid, torus_presentation, two_bridge_presentation, Presentation,
    TorusParams, TwoBridgeFraction,
};

/// A bad argument or input file; reported with exit code 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

pub fn read_file(path: &str) -> Result<String, UsageError> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))
}

fn pair(text: &str, sep: char, what: &str) -> Result<(i64, i64), UsageError> {
    let (a, b) = text.split_once(sep).ok_or_else(|| usage(format!("expected {what}, got {text:?}")))?;
    let parse = |s: &str| s.trim().parse::<i64>().map_err(|_| usage(format!("expected {what}, got {text:?}")));
    Ok((parse(a)?, parse(b)?))
}

/// Accepts a file path, a table knot id (`6_2`, `6₂`), `torus:P,Q`,
/// `two-bridge:P/Q`, `braid:<word>` or `unknot`.
pub fn presentation(spec: &str) -> Result<Presentation, UsageError> {
    if Path::new(spec).is_file() {
        return Presentation::from_json(&read_file(spec)?).map_err(|e| usage(format!("{spec}: {e}")));
    }
    if let Some(rest) = spec.strip_prefix("torus:") {
        let (p, q) = pair(rest, ',', "torus:P,Q")?;
        return TorusParams::new(p, q).map(torus_presentation).map_err(|e| usage(e.to_string()));
    }
    if let Some(rest) = spec.strip_prefix("two-bridge:") {
        let (p, q) = pair(rest, '/', "two-bridge:P/Q")?;
        return TwoBridgeFraction::new(p, q).map(two_bridge_presentation).map_err(|e| usage(e.to_string()));
    }
    if let Some(rest) = spec.strip_prefix("braid:") {
        let braid = parse_braid(rest).map_err(|e| usage(e.to_string()))?;
        return braid_closure_presentation(&braid).map_err(|e| usage(e.to_string()));
    }
    if spec == "unknot" {
        let braid = parse_braid("s1").expect("fixed braid");
        return Ok(braid_closure_presentation(&braid).expect("one-strand closure"));
    }
    match builtin_knot(spec) {
        Some(k) => Ok(k.presentation()),
        None => Err(usage(format!("unknown presentation {spec:?}: not a file, knot id or torus:/two-bridge:/braid: spec"))),
    }
}

pub fn window_range(text: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = pair(text, ',', "LO,HI").map_err(|e| e.0)?;
    if lo > hi {
        return Err(format!("empty window {lo},{hi}"));
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specs() {
        assert_eq!(presentation("torus:3,2").unwrap().relators.len(), 2);
        assert_eq!(presentation("two-bridge:3/1").unwrap().relators.len(), 1);
        assert_eq!(presentation("6₂").unwrap(), builtin_knot("6_2").unwrap().presentation());
        assert_eq!(presentation("unknot").unwrap().generator_count(), 1);
        assert!(presentation("braid:s1 s1 s1").is_ok());
        assert!(presentation("torus:3").is_err());
        assert!(presentation("torus:4,2").is_err());
        assert!(presentation("nope").is_err());
    }

    #[test]
    fn windows() {
        assert_eq!(window_range("-8,8"), Ok((-8, 8)));
        assert!(window_range("3,1").is_err());
        assert!(window_range("x").is_err());
    }
}
