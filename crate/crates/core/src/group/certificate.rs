//! Deletion certificates: a word for `l_k` together with letters whose
//! removal leaves a word trivial in the group. Such a certificate shows
//! `n(k) <= m` where `m` is the number of deleted letters.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::trace::{verify_trace, RewritingTrace, Step, TraceError};
use super::triviality::{bounded_triviality, Budget, BudgetReport, TrivialityVerdict, Witness};
use super::word::{Letter, Word};
use crate::notation::{longitude_word, NotationError, Presentation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeletionCertificate {
    pub word: Word,
    pub deleted: Vec<usize>,
    pub trace: Option<RewritingTrace>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InvariantFailure {
    #[error("deleted positions are not strictly increasing and in range")]
    BadPositions,
    #[error("deleted letters have exponent sum {deleted}, word has {word}")]
    ExponentMismatch { deleted: i64, word: i64 },
    #[error("m = {m} is smaller than |k| = {k_abs}")]
    BelowAbsK { m: usize, k_abs: i64 },
    #[error("m = {m} and k = {k} have different parity")]
    Parity { m: usize, k: i64 },
    #[error("trace does not start at the remainder or does not end at the empty word")]
    TraceEndpoints,
    #[error("word does not represent the longitude l_k")]
    NotLongitude,
    #[error("presentation has no longitude rule")]
    NoLongitude,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateFailure {
    #[error("invariant: {0}")]
    Invariant(InvariantFailure),
    #[error("trace: {0}")]
    Trace(TraceError),
    #[error("remainder is nontrivial")]
    RemainderNontrivial(Witness),
    #[error("remainder undecided within budget")]
    Undecided(BudgetReport),
}

impl CertificateFailure {
    pub fn category(&self) -> &'static str {
        match self {
            CertificateFailure::Invariant(_) => "invariant",
            CertificateFailure::Trace(_) | CertificateFailure::RemainderNontrivial(_) => "trace",
            CertificateFailure::Undecided(_) => "undecided",
        }
    }
}

/// How the word was matched against `l_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LongitudeMatch {
    /// Freely equal to the canonical `l_k`.
    Free,
    /// Freely equal to `l_k` with padding moved into a slot.
    Slot,
    /// Equal to `l_k` via a relator rewriting.
    Rewriting,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateReport {
    pub m: usize,
    pub k: i64,
    pub ok: bool,
    pub failure: Option<CertificateFailure>,
    pub longitude: Option<LongitudeMatch>,
    /// The trace that proved the remainder trivial.
    pub trace: Option<RewritingTrace>,
}

impl DeletionCertificate {
    pub fn m(&self) -> usize {
        self.deleted.len()
    }

    pub fn k(&self) -> i64 {
        self.word.exponent_sum()
    }

    pub fn remainder(&self) -> Word {
        self.word.without_positions(&self.deleted)
    }

    /// Parses the underlined-letter notation: `_` marks the next letter as
    /// deleted, e.g. `"aa bA_BaBAbA_Ba"`.
    pub fn from_marked(text: &str, generator_count: usize) -> Result<DeletionCertificate, NotationError> {
        let mut deleted = Vec::new();
        let mut clean = String::new();
        let mut marked = false;
        let mut count = 0;
        for c in text.chars() {
            if c == '_' {
                marked = true;
                continue;
            }
            if c.is_whitespace() {
                continue;
            }
            if marked {
                deleted.push(count);
                marked = false;
            }
            clean.push(c);
            count += 1;
        }
        let word = Word::parse(&clean, generator_count)?;
        Ok(DeletionCertificate { word, deleted, trace: None })
    }

    pub fn to_marked(&self, generator_count: usize) -> String {
        let mut out = String::new();
        let mut d = self.deleted.iter().peekable();
        for (i, l) in self.word.letters().iter().enumerate() {
            if d.peek() == Some(&&i) {
                out.push('_');
                d.next();
            }
            out.push_str(&Word::from_letters(vec![*l]).render(generator_count));
        }
        out
    }
}

fn invariant(f: InvariantFailure, m: usize, k: i64) -> CertificateReport {
    CertificateReport { m, k, ok: false, failure: Some(CertificateFailure::Invariant(f)), longitude: None, trace: None }
}

/// Decides whether `word` represents `l_k` in `pres`.
pub fn match_longitude(word: &Word, pres: &Presentation, budget: Budget) -> Result<LongitudeMatch, InvariantFailure> {
    let k = word.exponent_sum();
    let lk = longitude_word(pres, k).map_err(|_| InvariantFailure::NoLongitude)?;
    let reduced = word.free_reduce();
    if reduced == lk.free_reduce() {
        return Ok(LongitudeMatch::Free);
    }
    let t = pres.template().map_err(|_| InvariantFailure::NoLongitude)?;
    let total = k - t.fixture_k;
    let span = (word.len() + lk.len()) as i64;
    for slot in 0..t.slots.len() {
        for beta in -span..=span {
            let cand = pres
                .longitude_placement(total - beta, Some((slot, beta)))
                .map_err(|_| InvariantFailure::NoLongitude)?;
            if cand.free_reduce() == reduced {
                return Ok(LongitudeMatch::Slot);
            }
        }
    }
    match bounded_triviality(&word.concat(&lk.inverse()), pres, budget) {
        TrivialityVerdict::Trivial(_) => Ok(LongitudeMatch::Rewriting),
        _ => Err(InvariantFailure::NotLongitude),
    }
}

/// Checks every certificate invariant and the triviality of the remainder.
/// Without a stored trace, one is searched for within `budget`.
pub fn check_certificate(cert: &DeletionCertificate, pres: &Presentation, budget: Budget) -> CertificateReport {
    let m = cert.m();
    let k = cert.k();
    let n = cert.word.len();
    if cert.deleted.windows(2).any(|w| w[0] >= w[1]) || cert.deleted.last().is_some_and(|&d| d >= n) {
        return invariant(InvariantFailure::BadPositions, m, k);
    }
    let deleted_sum: i64 = cert.deleted.iter().map(|&i| cert.word.letters()[i].exponent()).sum();
    if deleted_sum != k {
        return invariant(InvariantFailure::ExponentMismatch { deleted: deleted_sum, word: k }, m, k);
    }
    // m >= |k| and parity follow from the deleted letters carrying sum k,
    // but are checked independently
    if (m as i64) < k.abs() {
        return invariant(InvariantFailure::BelowAbsK { m, k_abs: k.abs() }, m, k);
    }
    if (m as i64 - k).rem_euclid(2) != 0 {
        return invariant(InvariantFailure::Parity { m, k }, m, k);
    }
    let longitude = match match_longitude(&cert.word, pres, budget) {
        Ok(l) => l,
        Err(f) => return invariant(f, m, k),
    };
    let remainder = cert.remainder();
    let trace = match &cert.trace {
        Some(t) => {
            if t.start != remainder || !t.end.is_empty() {
                return invariant(InvariantFailure::TraceEndpoints, m, k);
            }
            if let Err(e) = verify_trace(t, pres) {
                return CertificateReport {
                    m,
                    k,
                    ok: false,
                    failure: Some(CertificateFailure::Trace(e)),
                    longitude: Some(longitude),
                    trace: None,
                };
            }
            t.clone()
        }
        None => match bounded_triviality(&remainder, pres, budget) {
            TrivialityVerdict::Trivial(t) => {
                if verify_trace(&t, pres).is_err() || !t.end.is_empty() {
                    unreachable!("bounded_triviality produced an invalid trace");
                }
                t
            }
            TrivialityVerdict::Nontrivial(w) => {
                return CertificateReport {
                    m,
                    k,
                    ok: false,
                    failure: Some(CertificateFailure::RemainderNontrivial(w)),
                    longitude: Some(longitude),
                    trace: None,
                }
            }
            TrivialityVerdict::Unknown(r) => {
                return CertificateReport {
                    m,
                    k,
                    ok: false,
                    failure: Some(CertificateFailure::Undecided(r)),
                    longitude: Some(longitude),
                    trace: None,
                }
            }
        },
    };
    CertificateReport { m, k, ok: true, failure: None, longitude: Some(longitude), trace: Some(trace) }
}

/// The product of conjugates `∏ P_i y_i P_i⁻¹ · R` read off a certificate:
/// `y_i` is the `i`th deleted letter, `P_i` the remainder letters before it,
/// and `R` the full remainder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugateDecomposition {
    pub factors: Vec<(Word, Letter)>,
    pub remainder: Word,
}

impl ConjugateDecomposition {
    pub fn from_certificate(cert: &DeletionCertificate) -> ConjugateDecomposition {
        let mut factors = Vec::new();
        let mut prefix = Word::new();
        let mut d = cert.deleted.iter().peekable();
        for (i, &l) in cert.word.letters().iter().enumerate() {
            if d.peek() == Some(&&i) {
                factors.push((prefix.clone(), l));
                d.next();
            } else {
                prefix.push(l);
            }
        }
        ConjugateDecomposition { factors, remainder: prefix }
    }

    /// The product written out letter by letter, not reduced.
    pub fn product(&self) -> Word {
        let mut out = Word::new();
        for (p, y) in &self.factors {
            out.extend(p);
            out.push(*y);
            out.extend(&p.inverse());
        }
        out.extend(&self.remainder);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub word: String,
    pub deleted: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<Step>>,
}

impl DeletionCertificate {
    pub fn to_file(&self, generator_count: usize) -> CertificateFile {
        CertificateFile {
            word: self.word.render(generator_count),
            deleted: self.deleted.clone(),
            trace: self.trace.as_ref().map(|t| t.steps.clone()),
        }
    }

    pub fn from_file(file: &CertificateFile, generator_count: usize) -> Result<DeletionCertificate, NotationError> {
        let word = Word::parse(&file.word, generator_count)?;
        let trace = file.trace.as_ref().map(|steps| {
            let start = word.without_positions(
                &file.deleted.iter().copied().filter(|&d| d < word.len()).collect::<Vec<_>>(),
            );
            RewritingTrace { start, steps: steps.clone(), end: Word::new() }
        });
        Ok(DeletionCertificate { word, deleted: file.deleted.clone(), trace })
    }

    pub fn to_json(&self, generator_count: usize) -> String {
        serde_json::to_string_pretty(&self.to_file(generator_count)).expect("serializable")
    }

    pub fn from_json(text: &str, generator_count: usize) -> Result<DeletionCertificate, NotationError> {
        let file: CertificateFile =
            serde_json::from_str(text).map_err(|e| NotationError::File(e.to_string()))?;
        DeletionCertificate::from_file(&file, generator_count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::{torus_presentation, TorusParams};

    fn trefoil() -> Presentation {
        torus_presentation(TorusParams::new(3, 2).unwrap())
    }

    #[test]
    fn trefoil_minus_two() {
        // l_{-2} = x0 X1 X0 X2; deleting X1 and X2 leaves x0 X0
        let pres = trefoil();
        let cert = DeletionCertificate::from_marked("a_BA_C", 3).unwrap();
        assert_eq!(cert.word, longitude_word(&pres, -2).unwrap());
        let r = check_certificate(&cert, &pres, Budget::default());
        assert!(r.ok, "{r:?}");
        assert_eq!((r.m, r.k), (2, -2));
        assert_eq!(r.longitude, Some(LongitudeMatch::Free));
    }

    #[test]
    fn wrong_position_fails() {
        let pres = trefoil();
        let cert = DeletionCertificate::from_marked("a_B_AC", 3).unwrap();
        let r = check_certificate(&cert, &pres, Budget::default());
        assert!(!r.ok);
        assert_eq!(r.failure.unwrap().category(), "trace");
    }

    #[test]
    fn exponent_mismatch_is_an_invariant_failure() {
        let pres = trefoil();
        let cert = DeletionCertificate::from_marked("_aBA_C", 3).unwrap();
        let r = check_certificate(&cert, &pres, Budget::default());
        assert_eq!(
            r.failure,
            Some(CertificateFailure::Invariant(InvariantFailure::ExponentMismatch { deleted: 0, word: -2 }))
        );
    }

    #[test]
    fn unsorted_positions_rejected() {
        let pres = trefoil();
        let mut cert = DeletionCertificate::from_marked("a_BA_C", 3).unwrap();
        cert.deleted = vec![3, 1];
        let r = check_certificate(&cert, &pres, Budget::default());
        assert_eq!(r.failure, Some(CertificateFailure::Invariant(InvariantFailure::BadPositions)));
    }

    #[test]
    fn stored_trace_is_replayed() {
        let pres = trefoil();
        let mut cert = DeletionCertificate::from_marked("a_BA_C", 3).unwrap();
        cert.trace = Some(RewritingTrace {
            start: cert.remainder(),
            steps: vec![Step::FreeDelete { position: 1 }],
            end: Word::new(),
        });
        let r = check_certificate(&cert, &pres, Budget::default());
        assert!(matches!(r.failure, Some(CertificateFailure::Trace(_))));
        cert.trace.as_mut().unwrap().steps = vec![Step::FreeDelete { position: 0 }];
        assert!(check_certificate(&cert, &pres, Budget::default()).ok);
    }

    #[test]
    fn marked_round_trip_and_json() {
        let cert = DeletionCertificate::from_marked("aa bA_BaBAbA_Ba BB a_BAbABa_BAb", 2).unwrap();
        assert_eq!(cert.deleted.len(), 4);
        assert_eq!(cert.to_marked(2), "aabA_BaBAbA_BaBBa_BAbABa_BAb");
        let back = DeletionCertificate::from_json(&cert.to_json(2), 2).unwrap();
        assert_eq!(back, cert);
    }

    #[test]
    fn conjugate_form_multiplies_out() {
        let cert = DeletionCertificate::from_marked("a_BA_C", 3).unwrap();
        let d = ConjugateDecomposition::from_certificate(&cert);
        assert_eq!(d.factors.len(), 2);
        assert_eq!(d.product().free_reduce(), cert.word.free_reduce());
    }
}
