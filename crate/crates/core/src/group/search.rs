//! Iterative-deepening search for deletion certificates.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::certificate::{check_certificate, DeletionCertificate};
use super::perm::perm_reps;
use super::trace::RewritingTrace;
use super::triviality::{bounded_triviality, Budget, TrivialityVerdict};
use super::word::Word;
use crate::freeprod::{theta_standard_form, FreeProdParams};
use crate::notation::{Presentation, PresentationKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Budget for each remainder that survives the cheap filters.
    pub triviality: Budget,
    /// Deletion sets examined per placement and `m` before giving up on it.
    pub max_candidates: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { triviality: Budget::small(), max_candidates: 2_000_000 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Values of `m` fully examined without a certificate.
    pub exhausted_m: Vec<usize>,
    pub candidates: u64,
    /// Remainders neither proved trivial nor refuted.
    pub unknowns: u64,
    /// Placements skipped because their candidate count exceeded the budget.
    pub skipped_placements: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub certificate: Option<DeletionCertificate>,
    pub stats: SearchStats,
}

impl SearchOutcome {
    /// True when some candidate could not be decided, so a missing or larger
    /// certificate is not evidence of a lower bound.
    pub fn had_unknowns(&self) -> bool {
        self.stats.unknowns > 0 || self.stats.skipped_placements > 0
    }
}

/// Words representing `l_k` with `m` as the deletion count in mind: the
/// canonical word first, then padding split between the front and each slot.
pub fn placements(pres: &Presentation, k: i64, m: usize) -> Vec<Word> {
    let Ok(t) = pres.template() else { return Vec::new() };
    let total = k - t.fixture_k;
    let mut out = vec![pres.longitude_placement(total, None).expect("template")];
    let m = m as i64;
    for slot in 0..t.slots.len() {
        for alpha in (total.min(0) - m)..=(total.max(0) + m) {
            if alpha == total {
                continue;
            }
            let w = pres.longitude_placement(alpha, Some((slot, total - alpha))).expect("template");
            if !out.contains(&w) {
                out.push(w);
            }
        }
    }
    out
}

fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// All position sets with `pos` positive and `neg` negative letters, in
/// lexicographic order.
fn deletion_sets(word: &Word, pos: usize, neg: usize) -> Vec<Vec<usize>> {
    let signs: Vec<bool> = word.letters().iter().map(|l| l.exponent() > 0).collect();
    let n = signs.len();
    // suffix counts of positive / negative letters
    let mut pos_after = vec![0usize; n + 1];
    let mut neg_after = vec![0usize; n + 1];
    for i in (0..n).rev() {
        pos_after[i] = pos_after[i + 1] + signs[i] as usize;
        neg_after[i] = neg_after[i + 1] + (!signs[i]) as usize;
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        start: usize,
        p: usize,
        q: usize,
        signs: &[bool],
        pa: &[usize],
        na: &[usize],
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if p == 0 && q == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..signs.len() {
            if pa[i] < p || na[i] < q {
                break;
            }
            let (np, nq) = if signs[i] {
                if p == 0 {
                    continue;
                }
                (p - 1, q)
            } else {
                if q == 0 {
                    continue;
                }
                (p, q - 1)
            };
            cur.push(i);
            rec(i + 1, np, nq, signs, pa, na, cur, out);
            cur.pop();
        }
    }
    rec(0, pos, neg, &signs, &pos_after, &neg_after, &mut cur, &mut out);
    out
}

enum Eval {
    Found(RewritingTrace),
    Refuted,
    Unknown,
}

struct Filters {
    reps: Vec<(super::perm::PermRep, Vec<super::perm::Perm>)>,
    torus: Option<FreeProdParams>,
}

impl Filters {
    fn new(pres: &Presentation) -> Filters {
        let reps = perm_reps(pres).iter().map(|r| (r.clone(), r.inverses())).collect();
        let torus = match &pres.kind {
            PresentationKind::Torus(t) => Some(FreeProdParams::new(t.p(), t.q()).expect("torus params")),
            _ => None,
        };
        Filters { reps, torus }
    }

    fn evaluate(&self, remainder: &Word, pres: &Presentation, budget: Budget) -> Eval {
        let reduced = remainder.free_reduce();
        if reduced.is_empty() {
            return Eval::Found(RewritingTrace::free_reduction(remainder));
        }
        if self.reps.iter().any(|(r, inv)| !r.kills(&reduced, inv)) {
            return Eval::Refuted;
        }
        if let Some(fp) = self.torus {
            if !theta_standard_form(&reduced, fp).expect("torus letters").is_identity() {
                return Eval::Refuted;
            }
        }
        match bounded_triviality(remainder, pres, budget) {
            TrivialityVerdict::Trivial(t) => Eval::Found(t),
            TrivialityVerdict::Nontrivial(_) => Eval::Refuted,
            TrivialityVerdict::Unknown(_) => Eval::Unknown,
        }
    }
}

const CHUNK: usize = 4096;

/// Searches `m = |k|, |k|+2, ..., max_m` for a certificate of `n(k) <= m`.
/// The first certificate in (m, placement, deletion set) order is returned,
/// independent of the number of worker threads.
pub fn search_certificate(pres: &Presentation, k: i64, max_m: usize, budget: SearchBudget) -> SearchOutcome {
    let mut stats = SearchStats::default();
    if pres.template().is_err() {
        return SearchOutcome { certificate: None, stats };
    }
    let filters = Filters::new(pres);
    let mut m = k.unsigned_abs() as usize;
    while m <= max_m {
        let pos = (m as i64 + k) as usize / 2;
        let neg = (m as i64 - k) as usize / 2;
        let mut unknown_here = false;
        for word in placements(pres, k, m) {
            let np = word.letters().iter().filter(|l| l.exponent() > 0).count();
            let nn = word.len() - np;
            let count = binomial(np, pos) * binomial(nn, neg);
            if count == 0 {
                continue;
            }
            if count > budget.max_candidates as u128 {
                stats.skipped_placements += 1;
                unknown_here = true;
                continue;
            }
            let sets = deletion_sets(&word, pos, neg);
            for chunk in sets.chunks(CHUNK) {
                let results: Vec<Eval> = chunk
                    .par_iter()
                    .map(|d| filters.evaluate(&word.without_positions(d), pres, budget.triviality))
                    .collect();
                for (d, r) in chunk.iter().zip(results) {
                    stats.candidates += 1;
                    match r {
                        Eval::Found(trace) => {
                            let cert = DeletionCertificate { word: word.clone(), deleted: d.clone(), trace: Some(trace) };
                            let report = check_certificate(&cert, pres, budget.triviality);
                            assert!(report.ok, "search produced an invalid certificate: {report:?}");
                            return SearchOutcome { certificate: Some(cert), stats };
                        }
                        Eval::Refuted => {}
                        Eval::Unknown => {
                            stats.unknowns += 1;
                            unknown_here = true;
                        }
                    }
                }
            }
        }
        if !unknown_here {
            stats.exhausted_m.push(m);
        }
        m += 2;
    }
    SearchOutcome { certificate: None, stats }
}
