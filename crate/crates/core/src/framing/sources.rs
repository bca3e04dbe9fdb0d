use thiserror::Error;

use super::calculus::tighten;
use super::window::{FramingWindow, WindowError};
use crate::freeprod::{torus_certificate, torus_framing_function};
use crate::group::{check_certificate, Budget, CertificateReport, DeletionCertificate};
use crate::notation::{torus_presentation, Presentation, TorusParams};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SourceError {
    #[error("unknown knot {0:?}")]
    UnknownKnot(String),
    #[error(transparent)]
    Window(#[from] WindowError),
    #[error("certificate {name}: {reason}")]
    Certificate { name: String, reason: String },
}

/// A certificate shipped with the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fixture {
    pub knot: &'static str,
    pub name: &'static str,
    pub text: &'static str,
}

impl Fixture {
    pub fn certificate(&self) -> Result<DeletionCertificate, SourceError> {
        DeletionCertificate::from_json(self.text, 2)
            .map_err(|e| SourceError::Certificate { name: self.name.to_string(), reason: e.to_string() })
    }
}

macro_rules! fixture {
    ($knot:literal, $name:literal) => {
        Fixture { knot: $knot, name: $name, text: include_str!(concat!("../../fixtures/", $name, ".json")) }
    };
}

/// Deletion certificates for the two-bridge knots of the table, in the
/// presentations returned by [`BuiltinKnot::presentation`](crate::notation::BuiltinKnot::presentation).
pub const CERTIFICATE_FIXTURES: &[Fixture] = &[
    fixture!("4_1", "4_1_k2"),
    fixture!("4_1", "4_1_km2"),
    fixture!("5_2", "5_2_km2"),
    fixture!("5_2", "5_2_k0"),
    fixture!("6_1", "6_1_k2"),
    fixture!("6_1", "6_1_km4"),
    fixture!("6_2", "6_2_cert1"),
    fixture!("6_2", "6_2_cert2"),
    fixture!("6_3", "6_3_k4"),
    fixture!("6_3", "6_3_km4"),
    fixture!("7_2", "7_2_km2"),
    fixture!("7_2", "7_2_k0"),
    fixture!("7_3", "7_3_k4"),
    fixture!("7_4", "7_4_km4"),
    fixture!("7_5", "7_5_k4"),
    fixture!("7_6", "7_6_k4"),
    fixture!("7_6", "7_6_k0"),
    fixture!("7_7", "7_7_cert1"),
    fixture!("7_7", "7_7_cert2"),
];

/// Presentation files matching the 6₂ and 7₇ certificates.
pub const PRESENTATION_FIXTURES: &[(&str, &str)] = &[
    ("6_2", include_str!("../../fixtures/6_2.json")),
    ("7_7", include_str!("../../fixtures/7_7.json")),
];

pub fn fixtures_for(knot: &str) -> impl Iterator<Item = &'static Fixture> + '_ {
    CERTIFICATE_FIXTURES.iter().filter(move |f| f.knot == knot)
}

/// `n(k) = |k|`.
pub fn unknot_window(k_min: i64, k_max: i64) -> Result<FramingWindow, SourceError> {
    let mut w = FramingWindow::new(k_min, k_max)?;
    for k in k_min..=k_max {
        w.add_upper(k, k.abs(), "unknot")?;
    }
    Ok(tighten(&w)?)
}

/// Lower bounds from the closed form, upper bounds from checked explicit
/// certificates at every `k`.
pub fn torus_window(params: TorusParams, k_min: i64, k_max: i64) -> Result<FramingWindow, SourceError> {
    let pres = torus_presentation(params);
    let mut w = FramingWindow::new(k_min, k_max)?;
    let tag = format!("({},{})", params.p(), params.q());
    for k in k_min..=k_max {
        w.add_lower(k, torus_framing_function(params, k), &format!("theorem:torus{tag}"))?;
        let cert = torus_certificate(params, k);
        let r = check_certificate(&cert, &pres, Budget::default());
        if !r.ok {
            return Err(SourceError::Certificate { name: format!("torus{tag} k={k}"), reason: format!("{:?}", r.failure) });
        }
        w.add_upper(k, r.m as i64, &format!("certificate:torus{tag}"))?;
    }
    Ok(tighten(&w)?)
}

/// Checks each certificate and records `n(k) <= m`. Every certificate must
/// verify.
pub fn certificate_window(
    pres: &Presentation,
    certs: &[(String, DeletionCertificate)],
    k_min: i64,
    k_max: i64,
    budget: Budget,
) -> Result<(FramingWindow, Vec<CertificateReport>), SourceError> {
    let mut w = FramingWindow::new(k_min, k_max)?;
    let mut reports = Vec::new();
    for (name, cert) in certs {
        let r = check_certificate(cert, pres, budget);
        if !r.ok {
            return Err(SourceError::Certificate { name: name.clone(), reason: format!("{:?}", r.failure) });
        }
        w.add_upper(r.k, r.m as i64, &format!("certificate:{name}"))?;
        reports.push(r);
    }
    Ok((tighten(&w)?, reports))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framing::natural_framing;
    use crate::notation::builtin_knot;

    #[test]
    fn fixtures_parse_and_verify() {
        for f in CERTIFICATE_FIXTURES {
            let pres = builtin_knot(f.knot).unwrap().presentation();
            let r = check_certificate(&f.certificate().unwrap(), &pres, Budget::default());
            assert!(r.ok, "{}: {r:?}", f.name);
        }
    }

    #[test]
    fn presentation_fixtures_match_builtin() {
        for (id, text) in PRESENTATION_FIXTURES {
            let p = Presentation::from_json(text).unwrap();
            assert_eq!(p, builtin_knot(id).unwrap().presentation());
        }
    }

    #[test]
    fn torus_five_three() {
        let w = torus_window(TorusParams::new(5, 3).unwrap(), -64, 64).unwrap();
        assert!(w.entries().iter().all(|e| e.is_exact()));
        assert_eq!(natural_framing(&w).unwrap().value(), Some(-8));
        assert!(natural_framing(&w).unwrap().certified);
    }

    #[test]
    fn unknot() {
        let w = unknot_window(-5, 5).unwrap();
        assert_eq!(natural_framing(&w).unwrap().value(), Some(0));
    }

    #[test]
    fn bad_certificate_rejected() {
        let pres = builtin_knot("4_1").unwrap().presentation();
        let mut cert = CERTIFICATE_FIXTURES[0].certificate().unwrap();
        cert.deleted.pop();
        let e = certificate_window(&pres, &[("bad".into(), cert)], -8, 8, Budget::default());
        assert!(matches!(e, Err(SourceError::Certificate { .. })));
    }
}
