//! Budget-bounded word problem: a certificate-producing search for
//! triviality, plus abelian and permutation witnesses for nontriviality.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use serde::{Deserialize, Serialize};

use super::perm::{perm_reps, Perm, PermRep};
use super::trace::{reduce_recording, RewritingTrace, Step};
use super::word::{Letter, Word};
use crate::notation::Presentation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Longest intermediate word; `None` means `4 * input + 8`.
    pub max_len: Option<usize>,
    /// Number of distinct words stored before giving up.
    pub max_states: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_len: None, max_states: 100_000 }
    }
}

impl Budget {
    pub fn small() -> Budget {
        Budget { max_len: None, max_states: 2_000 }
    }

    pub fn len_limit(&self, input: usize) -> usize {
        self.max_len.unwrap_or(4 * input + 8)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetReport {
    pub states: usize,
    pub max_len: usize,
    pub max_states: usize,
}

/// Homomorphism under which the word survives while all relators die.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    /// Abelianization to Z sending every generator to 1.
    Abelian { exponent_sum: i64 },
    Permutation { rep: PermRep, image: Perm },
}

impl Witness {
    /// Re-checks the witness from scratch.
    pub fn check(&self, w: &Word, pres: &Presentation) -> bool {
        match self {
            Witness::Abelian { exponent_sum } => {
                *exponent_sum != 0
                    && w.exponent_sum() == *exponent_sum
                    && pres.relators.iter().all(|r| r.exponent_sum() == 0)
            }
            Witness::Permutation { rep, image } => {
                rep.images.len() == pres.generator_count()
                    && rep.satisfies(&pres.relators)
                    && !image.is_identity()
                    && &rep.evaluate(w) == image
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrivialityVerdict {
    Trivial(RewritingTrace),
    Nontrivial(Witness),
    Unknown(BudgetReport),
}

impl TrivialityVerdict {
    pub fn is_trivial(&self) -> bool {
        matches!(self, TrivialityVerdict::Trivial(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, TrivialityVerdict::Unknown(_))
    }
}

/// Cheap nontriviality test: exponent sum, then the cached permutation
/// representations.
pub fn nontriviality_witness(w: &Word, pres: &Presentation) -> Option<Witness> {
    let e = w.exponent_sum();
    if e != 0 {
        return Some(Witness::Abelian { exponent_sum: e });
    }
    for rep in perm_reps(pres).iter() {
        let image = rep.evaluate(w);
        if !image.is_identity() {
            return Some(Witness::Permutation { rep: rep.clone(), image });
        }
    }
    None
}

/// One relator rotation `c`, ready for matching.
struct Piece {
    relator: usize,
    inverse: bool,
    rotation: usize,
    letters: Vec<Letter>,
}

fn pieces(pres: &Presentation) -> Vec<Piece> {
    let mut out = Vec::new();
    for (ri, r) in pres.relators.iter().enumerate() {
        let r = r.free_reduce();
        if r.is_empty() {
            continue;
        }
        for inverse in [false, true] {
            let base = if inverse { r.inverse() } else { r.clone() };
            for rotation in 0..base.len() {
                out.push(Piece { relator: ri, inverse, rotation, letters: base.rotate(rotation).into_letters() });
            }
        }
    }
    out
}

#[derive(Clone)]
struct Node {
    parent: usize,
    steps: Vec<Step>,
}

/// Best-first search over relator replacements `u -> v⁻¹` (for rotations
/// `c = u v` of relators and their inverses). Words are kept freely
/// reduced. The first phase only allows moves with `|u| >= |v|`; if it
/// stalls the second phase allows all moves.
fn replacement_search(
    start: &Word,
    pres: &Presentation,
    max_len: usize,
    max_states: usize,
    states_used: &mut usize,
) -> Option<Vec<Step>> {
    let pcs = pieces(pres);
    // relator lengths after free reduction must match the stored relators
    // for the splice steps to replay
    let pcs: Vec<Piece> = pcs
        .into_iter()
        .filter(|p| pres.relators[p.relator].len() == p.letters.len())
        .collect();
    for shrinking_only in [true, false] {
        let mut nodes: Vec<Node> = vec![Node { parent: usize::MAX, steps: Vec::new() }];
        let mut index: HashMap<Word, usize> = HashMap::new();
        index.insert(start.clone(), 0);
        let mut words = vec![start.clone()];
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((start.len(), 0usize)));
        while let Some(Reverse((_, id))) = heap.pop() {
            let word = words[id].clone();
            let letters = word.letters();
            for pc in &pcs {
                let l = pc.letters.len();
                for i in 0..letters.len() {
                    let mut m = 0;
                    while m < l && i + m < letters.len() && letters[i + m] == pc.letters[m] {
                        m += 1;
                    }
                    for t in 1..=m {
                        if shrinking_only && 2 * t < l {
                            continue;
                        }
                        let v_len = l - t;
                        let mut next: Vec<Letter> = letters[..i].to_vec();
                        next.extend(pc.letters[t..].iter().rev().map(|x| x.inverse()));
                        next.extend_from_slice(&letters[i + t..]);
                        if next.len() > max_len {
                            continue;
                        }
                        let mut steps = vec![Step::Splice {
                            relator: pc.relator,
                            inverse: !pc.inverse,
                            rotation: (l - pc.rotation) % l,
                            position: i,
                        }];
                        for d in (0..t).rev() {
                            steps.push(Step::FreeDelete { position: i + v_len + d });
                        }
                        let reduced = Word::from_letters(reduce_recording(&next, &mut steps));
                        if index.contains_key(&reduced) {
                            continue;
                        }
                        let nid = nodes.len();
                        nodes.push(Node { parent: id, steps });
                        if reduced.is_empty() {
                            let mut chain = Vec::new();
                            let mut cur = nid;
                            while cur != 0 {
                                chain.push(cur);
                                cur = nodes[cur].parent;
                            }
                            chain.reverse();
                            return Some(chain.into_iter().flat_map(|c| nodes[c].steps.clone()).collect());
                        }
                        *states_used += 1;
                        if *states_used >= max_states {
                            return None;
                        }
                        index.insert(reduced.clone(), nid);
                        heap.push(Reverse((reduced.len(), nid)));
                        words.push(reduced);
                    }
                }
            }
        }
    }
    None
}

/// Splits a freely reduced word as `u · core · u⁻¹` with `core` cyclically
/// reduced.
fn cyclic_core(w: &Word) -> (Word, Word) {
    let l = w.letters();
    let mut a = 0;
    let mut b = l.len();
    while b >= a + 2 && l[a].cancels(l[b - 1]) {
        a += 1;
        b -= 1;
    }
    (Word::from_letters(l[..a].to_vec()), Word::from_letters(l[a..b].to_vec()))
}

/// Decides triviality of `w` in `pres` within `budget`. Both decided
/// answers carry a checkable proof.
pub fn bounded_triviality(w: &Word, pres: &Presentation, budget: Budget) -> TrivialityVerdict {
    if w.exponent_sum() != 0 {
        return TrivialityVerdict::Nontrivial(Witness::Abelian { exponent_sum: w.exponent_sum() });
    }
    let reduction = RewritingTrace::free_reduction(w);
    if reduction.end.is_empty() {
        return TrivialityVerdict::Trivial(reduction);
    }
    if let Some(wit) = nontriviality_witness(&reduction.end, pres) {
        return TrivialityVerdict::Nontrivial(wit);
    }
    let (outer, core) = cyclic_core(&reduction.end);
    let max_len = budget.len_limit(w.len());
    let mut states = 0;
    match replacement_search(&core, pres, max_len, budget.max_states, &mut states) {
        Some(steps) => {
            let core_trace = RewritingTrace { start: core, steps, end: Word::new() };
            let lifted = core_trace.embed(&outer, &outer.inverse());
            let finish = RewritingTrace::free_reduction(&lifted.end);
            TrivialityVerdict::Trivial(reduction.then(lifted).then(finish))
        }
        None => TrivialityVerdict::Unknown(BudgetReport { states, max_len, max_states: budget.max_states }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::verify_trace;
    use crate::notation::{
        braid_closure_presentation, parse_braid, torus_presentation, two_bridge_presentation,
        TorusParams, TwoBridgeFraction,
    };

    fn trefoil() -> Presentation {
        torus_presentation(TorusParams::new(3, 2).unwrap())
    }

    #[test]
    fn relator_is_trivial() {
        let pres = trefoil();
        for r in &pres.relators {
            match bounded_triviality(r, &pres, Budget::default()) {
                TrivialityVerdict::Trivial(t) => {
                    assert_eq!(verify_trace(&t, &pres), Ok(()));
                    assert!(t.end.is_empty());
                }
                v => panic!("{v:?}"),
            }
        }
    }

    #[test]
    fn generator_is_nontrivial() {
        let pres = trefoil();
        let w = Word::parse("a", 3).unwrap();
        assert_eq!(
            bounded_triviality(&w, &pres, Budget::default()),
            TrivialityVerdict::Nontrivial(Witness::Abelian { exponent_sum: 1 })
        );
    }

    #[test]
    fn commutator_of_generators_is_nontrivial() {
        let pres = trefoil();
        let w = Word::parse("abAB", 3).unwrap();
        match bounded_triviality(&w, &pres, Budget::default()) {
            TrivialityVerdict::Nontrivial(wit) => assert!(wit.check(&w, &pres)),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn conjugated_relator_is_trivial() {
        let pres = trefoil();
        let w = Word::parse("ca", 3).unwrap().concat(&pres.relators[1].rotate(2)).concat(&Word::parse("AC", 3).unwrap());
        match bounded_triviality(&w, &pres, Budget::default()) {
            TrivialityVerdict::Trivial(t) => assert_eq!(verify_trace(&t, &pres), Ok(())),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn two_bridge_trefoil_relator_holds_in_braid_closure() {
        // a -> x0, b -> x1 identifies the two meridians of the closure of s1^3
        let tb = two_bridge_presentation(TwoBridgeFraction::new(3, 1).unwrap());
        assert_eq!(tb.relators[0].len(), 6);
        let braid = braid_closure_presentation(&parse_braid("s1 s1 s1").unwrap()).unwrap();
        let r = Word::parse(&tb.render(&tb.relators[0]), braid.generator_count()).unwrap();
        match bounded_triviality(&r, &braid, Budget::default()) {
            TrivialityVerdict::Trivial(t) => assert_eq!(verify_trace(&t, &braid), Ok(())),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn tiny_budget_reports_unknown() {
        let pres = trefoil();
        // needs two relator moves
        let w = pres.relators[0].concat(&pres.relators[1]);
        let v = bounded_triviality(&w, &pres, Budget { max_len: None, max_states: 1 });
        assert!(v.is_unknown());
    }
}
