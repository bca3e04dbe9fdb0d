use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::calculus::{natural_framing, NaturalFramingEstimate};
use super::sources::{certificate_window, fixtures_for, torus_window, SourceError};
use super::window::{FramingWindow, DEFAULT_RANGE};
use crate::group::Budget;
use crate::notation::{builtin_knot, BUILTIN_KNOTS};

/// Published columns for one knot. `range` is the natural framing range,
/// `alternating` the writhe of an alternating diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KnotMetadata {
    pub id: &'static str,
    pub range: (i64, i64),
    pub conjecture: Option<i64>,
    pub signature: i64,
    pub alternating: i64,
    pub unknotting: i64,
    pub amphicheiral: bool,
}

const fn meta(
    id: &'static str,
    range: (i64, i64),
    conjecture: Option<i64>,
    signature: i64,
    alternating: i64,
    unknotting: i64,
    amphicheiral: bool,
) -> KnotMetadata {
    KnotMetadata { id, range, conjecture, signature, alternating, unknotting, amphicheiral }
}

pub const TABLE_METADATA: [KnotMetadata; 14] = [
    meta("3_1", (2, 2), None, -2, 3, 1, false),
    meta("4_1", (0, 0), None, 0, 0, 1, true),
    meta("5_1", (4, 4), None, -4, 5, 2, false),
    meta("5_2", (0, 2), Some(2), -2, 5, 1, false),
    meta("6_1", (0, 0), None, 0, 2, 1, false),
    meta("6_2", (0, 2), Some(2), -2, 2, 1, false),
    meta("6_3", (0, 0), None, 0, 0, 1, true),
    meta("7_1", (6, 6), None, -6, 7, 3, false),
    meta("7_2", (0, 2), Some(2), -2, 7, 1, false),
    meta("7_3", (0, 4), Some(4), -4, 7, 2, false),
    meta("7_4", (0, 4), Some(4), -2, 7, 2, false),
    meta("7_5", (0, 4), Some(4), -4, 7, 2, false),
    meta("7_6", (0, 2), Some(2), -2, 3, 1, false),
    meta("7_7", (0, 0), None, 0, 1, 1, false),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Certified,
    Bounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Direct,
    Mirrored,
}

/// How a computed row compares with the published one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Agreement {
    /// Same range.
    Exact,
    /// The computed range contains the published one.
    Contains,
    Disagrees,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowCertificate {
    pub name: String,
    pub k: i64,
    pub m: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub id: String,
    pub natural_framing: NaturalFramingEstimate,
    pub status: RowStatus,
    /// Where the value comes from: `torus`, `certificates`, `amphicheiral`.
    pub basis: Vec<String>,
    pub certificates: Vec<RowCertificate>,
    pub orientation: Option<Orientation>,
    pub agreement: Agreement,
    pub metadata: KnotMetadata,
    #[serde(skip)]
    pub window: FramingWindow,
}

impl TableRow {
    /// The range in the orientation used for the comparison.
    pub fn oriented(&self) -> NaturalFramingEstimate {
        match self.orientation {
            Some(Orientation::Mirrored) => self.natural_framing.negate(),
            _ => self.natural_framing.clone(),
        }
    }
}

fn agreement(est: &NaturalFramingEstimate, published: (i64, i64)) -> Agreement {
    if est.lo == Some(published.0) && est.hi == Some(published.1) {
        Agreement::Exact
    } else if est.contains(published.0) && est.contains(published.1) {
        Agreement::Contains
    } else {
        Agreement::Disagrees
    }
}

/// Compares in both orientations and keeps the better one; exact agreement
/// first, then the direct orientation.
fn compare(est: &NaturalFramingEstimate, published: (i64, i64)) -> (Option<Orientation>, Agreement) {
    let direct = agreement(est, published);
    let mirrored = agreement(&est.negate(), published);
    let rank = |a: Agreement| match a {
        Agreement::Exact => 0,
        Agreement::Contains => 1,
        Agreement::Disagrees => 2,
    };
    match (rank(direct), rank(mirrored)) {
        (2, 2) => (None, Agreement::Disagrees),
        (d, m) if d <= m => (Some(Orientation::Direct), direct),
        _ => (Some(Orientation::Mirrored), mirrored),
    }
}

/// Recomputes one row from the torus theorem, the shipped certificates and
/// amphicheirality. Published values are only used for the comparison.
pub fn table(id: &str) -> Result<TableRow, SourceError> {
    table_in(id, DEFAULT_RANGE.0, DEFAULT_RANGE.1)
}

/// [`table`] with windows over `k_min..=k_max`.
pub fn table_in(id: &str, k_min: i64, k_max: i64) -> Result<TableRow, SourceError> {
    let knot = builtin_knot(id).ok_or_else(|| SourceError::UnknownKnot(id.to_string()))?;
    let metadata = *TABLE_METADATA.iter().find(|m| m.id == knot.id).expect("metadata for every knot");
    let (lo, hi) = (k_min, k_max);
    let mut basis = Vec::new();
    let mut certificates = Vec::new();
    let window = match knot.torus_params() {
        Some(params) => {
            basis.push("torus".to_string());
            torus_window(params, lo, hi)?
        }
        None => {
            let pres = knot.presentation();
            let certs = fixtures_for(knot.id)
                .map(|f| Ok((f.name.to_string(), f.certificate()?)))
                .collect::<Result<Vec<_>, SourceError>>()?;
            let (w, reports) = certificate_window(&pres, &certs, lo, hi, Budget::default())?;
            if !certs.is_empty() {
                basis.push("certificates".to_string());
            }
            certificates = certs
                .iter()
                .zip(&reports)
                .map(|((name, _), r)| RowCertificate { name: name.clone(), k: r.k, m: r.m })
                .collect();
            w
        }
    };
    let mut estimate = natural_framing(&window)?;
    if metadata.amphicheiral {
        // ν(K) = -ν(mK) = -ν(K)
        basis.push("amphicheiral".to_string());
        if !estimate.contains(0) {
            return Err(SourceError::Certificate {
                name: knot.id.to_string(),
                reason: format!("window gives {} for an amphicheiral knot", estimate.render()),
            });
        }
        estimate = NaturalFramingEstimate::exact(0);
    }
    let status = if estimate.certified { RowStatus::Certified } else { RowStatus::Bounded };
    let (orientation, agreement) = compare(&estimate, metadata.range);
    Ok(TableRow {
        id: knot.id.to_string(),
        natural_framing: estimate,
        status,
        basis,
        certificates,
        orientation,
        agreement,
        metadata,
        window,
    })
}

/// All fourteen rows, in table order.
pub fn full_table() -> Result<Vec<TableRow>, SourceError> {
    full_table_in(DEFAULT_RANGE.0, DEFAULT_RANGE.1)
}

pub fn full_table_in(k_min: i64, k_max: i64) -> Result<Vec<TableRow>, SourceError> {
    BUILTIN_KNOTS.par_iter().map(|k| table_in(k.id, k_min, k_max)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metadata_covers_builtin_table() {
        for (m, k) in TABLE_METADATA.iter().zip(BUILTIN_KNOTS.iter()) {
            assert_eq!(m.id, k.id);
        }
    }

    #[test]
    fn trefoil_row() {
        let row = table("3_1").unwrap();
        assert_eq!(row.natural_framing.value(), Some(-2));
        assert_eq!(row.status, RowStatus::Certified);
        assert_eq!(row.orientation, Some(Orientation::Mirrored));
        assert_eq!(row.agreement, Agreement::Exact);
    }

    #[test]
    fn figure_eight_row() {
        let row = table("4₁").unwrap();
        assert_eq!(row.natural_framing.value(), Some(0));
        assert_eq!(row.agreement, Agreement::Exact);
        assert_eq!(row.certificates.len(), 2);
    }

    #[test]
    fn seven_four_row() {
        let row = table("7_4").unwrap();
        assert_eq!(row.metadata.range, (0, 4));
        assert_eq!(row.metadata.conjecture, Some(4));
        assert_eq!(row.metadata.signature, -2);
        assert_eq!(row.status, RowStatus::Bounded);
        assert_ne!(row.agreement, Agreement::Disagrees);
    }

    #[test]
    fn unknown_knot() {
        assert_eq!(table("8_1"), Err(SourceError::UnknownKnot("8_1".into())));
    }

    #[test]
    fn comparison_prefers_exact() {
        let est = NaturalFramingEstimate { lo: Some(-2), hi: Some(0), certified: false };
        assert_eq!(compare(&est, (0, 2)), (Some(Orientation::Mirrored), Agreement::Exact));
        let open = NaturalFramingEstimate { lo: Some(0), hi: None, certified: false };
        assert_eq!(compare(&open, (0, 4)), (Some(Orientation::Direct), Agreement::Contains));
        assert_eq!(compare(&NaturalFramingEstimate::exact(3), (0, 2)), (None, Agreement::Disagrees));
    }
}
