//! Small permutation representations used as nontriviality witnesses.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::word::{Sign, Word};
use crate::notation::Presentation;

/// A permutation of `0..n` acting on the right: `(s * t)(x) = t(s(x))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm(pub Vec<u8>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n as u8).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut out = vec![0u8; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            out[x as usize] = i as u8;
        }
        Perm(out)
    }

    /// `c⁻¹ self c`.
    pub fn conjugate_by(&self, c: &Perm) -> Perm {
        c.inverse().then(self).then(c)
    }

    /// Cycle lengths in decreasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x] as usize;
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }
}

/// Images of the generators in a symmetric group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PermRep {
    pub degree: usize,
    pub images: Vec<Perm>,
}

impl PermRep {
    pub fn evaluate(&self, w: &Word) -> Perm {
        let inv: Vec<Perm> = self.images.iter().map(|p| p.inverse()).collect();
        let mut cur: Vec<u8> = (0..self.degree as u8).collect();
        for l in w.letters() {
            let p = match l.sign() {
                Sign::Pos => &self.images[l.gen()],
                Sign::Neg => &inv[l.gen()],
            };
            for x in cur.iter_mut() {
                *x = p.0[*x as usize];
            }
        }
        Perm(cur)
    }

    /// True when `w` maps to the identity, evaluated letter by letter on a
    /// single orbit vector for speed.
    pub fn kills(&self, w: &Word, inverses: &[Perm]) -> bool {
        let mut cur: [u8; 8] = [0, 1, 2, 3, 4, 5, 6, 7];
        let n = self.degree;
        for l in w.letters() {
            let p = match l.sign() {
                Sign::Pos => &self.images[l.gen()],
                Sign::Neg => &inverses[l.gen()],
            };
            for x in cur[..n].iter_mut() {
                *x = p.0[*x as usize];
            }
        }
        cur[..n].iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn inverses(&self) -> Vec<Perm> {
        self.images.iter().map(|p| p.inverse()).collect()
    }

    pub fn satisfies(&self, relators: &[Word]) -> bool {
        relators.iter().all(|r| self.evaluate(r).is_identity())
    }

    pub fn is_transitive(&self) -> bool {
        let mut seen = vec![false; self.degree];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for p in &self.images {
                let y = p.0[x] as usize;
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_abelian(&self) -> bool {
        self.images.iter().enumerate().all(|(i, a)| {
            self.images[i + 1..].iter().all(|b| a.then(b) == b.then(a))
        })
    }
}

fn permutations(n: usize) -> Vec<Perm> {
    fn rec(cur: &mut Vec<u8>, used: &mut Vec<bool>, out: &mut Vec<Perm>) {
        if cur.len() == used.len() {
            out.push(Perm(cur.clone()));
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i as u8);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// The permutation with cycles `(0 1 .. l1-1)(l1 ..)...` for a partition.
fn canonical_with_cycle_type(parts: &[usize]) -> Perm {
    let n: usize = parts.iter().sum();
    let mut out = vec![0u8; n];
    let mut start = 0;
    for &len in parts {
        for j in 0..len {
            out[start + j] = (start + (j + 1) % len) as u8;
        }
        start += len;
    }
    Perm(out)
}

fn partitions(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if n == 0 {
        out.push(cur.clone());
        return;
    }
    for part in (1..=n.min(max)).rev() {
        cur.push(part);
        partitions(n - part, part, cur, out);
        cur.pop();
    }
}

/// Limits for the representation search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RepSearchLimits {
    pub max_degree: usize,
    pub max_reps: usize,
    pub max_nodes: usize,
}

impl Default for RepSearchLimits {
    fn default() -> Self {
        RepSearchLimits { max_degree: 6, max_reps: 12, max_nodes: 200_000 }
    }
}

struct Backtrack<'a> {
    relators: &'a [Word],
    candidates: &'a [Perm],
    conj_class: Option<Vec<usize>>,
    nodes: usize,
    max_nodes: usize,
    found: Vec<Vec<Perm>>,
    max_found: usize,
}

impl Backtrack<'_> {
    fn allowed(&self, p: &Perm) -> bool {
        self.conj_class.as_ref().is_none_or(|c| &p.cycle_type() == c)
    }

    /// Fills in generators forced by relators with a single unknown letter.
    /// Returns false on a contradiction.
    fn propagate(&self, assign: &mut [Option<Perm>]) -> bool {
        loop {
            let mut changed = false;
            for r in self.relators {
                let mut unknown: Option<(usize, usize)> = None;
                let mut count = 0;
                for (pos, l) in r.letters().iter().enumerate() {
                    if assign[l.gen()].is_none() {
                        count += 1;
                        if unknown.is_none_or(|(g, _)| g == l.gen()) {
                            unknown = Some((l.gen(), pos));
                        } else {
                            count = usize::MAX / 2;
                        }
                    }
                }
                match (unknown, count) {
                    (None, _) => {
                        if !eval_assigned(r.letters(), assign).is_identity() {
                            return false;
                        }
                    }
                    (Some((g, pos)), 1) => {
                        let letters = r.letters();
                        let before = eval_assigned(&letters[..pos], assign);
                        let after = eval_assigned(&letters[pos + 1..], assign);
                        // before · g^ε · after = 1
                        let mut img = before.inverse().then(&after.inverse());
                        if letters[pos].sign() == Sign::Neg {
                            img = img.inverse();
                        }
                        if !self.allowed(&img) {
                            return false;
                        }
                        assign[g] = Some(img);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn search(&mut self, assign: &mut Vec<Option<Perm>>) {
        if self.found.len() >= self.max_found || self.nodes >= self.max_nodes {
            return;
        }
        self.nodes += 1;
        let mut local = assign.clone();
        if !self.propagate(&mut local) {
            return;
        }
        match local.iter().position(|a| a.is_none()) {
            None => self.found.push(local.into_iter().map(|p| p.unwrap()).collect()),
            Some(g) => {
                for c in self.candidates {
                    local[g] = Some(c.clone());
                    self.search(&mut local);
                    if self.found.len() >= self.max_found || self.nodes >= self.max_nodes {
                        return;
                    }
                }
            }
        }
    }
}

fn eval_assigned(letters: &[super::word::Letter], assign: &[Option<Perm>]) -> Perm {
    let n = assign.iter().flatten().next().map_or(0, |p| p.degree());
    let mut cur = Perm::identity(n);
    for l in letters {
        let p = assign[l.gen()].as_ref().expect("assigned");
        cur = match l.sign() {
            Sign::Pos => cur.then(p),
            Sign::Neg => cur.then(&p.inverse()),
        };
    }
    cur
}

/// Canonical representative of a representation up to conjugation in `S_n`.
fn canonical_rep(images: &[Perm], all: &[Perm]) -> Vec<Perm> {
    all.iter()
        .map(|c| images.iter().map(|p| p.conjugate_by(c)).collect::<Vec<_>>())
        .min()
        .expect("nonempty")
}

/// Transitive representations of degree `2..=max_degree`, distinct up to
/// conjugation. For Wirtinger presentations all generators share the cycle
/// type of the first one; those that factor through an abelian group are
/// skipped since they only see the exponent sum.
pub fn find_perm_reps(
    relators: &[Word],
    generator_count: usize,
    wirtinger: bool,
    limits: RepSearchLimits,
) -> Vec<PermRep> {
    let mut reps = Vec::new();
    let mut seen = HashSet::new();
    if generator_count == 0 {
        return reps;
    }
    let mut nodes_left = limits.max_nodes;
    for degree in 2..=limits.max_degree.min(8) {
        let all = permutations(degree);
        let mut parts = Vec::new();
        partitions(degree, degree, &mut Vec::new(), &mut parts);
        for cycle_type in parts.into_iter().filter(|p| p[0] > 1) {
            let g0 = canonical_with_cycle_type(&cycle_type);
            let candidates: Vec<Perm> = if wirtinger {
                all.iter().filter(|p| p.cycle_type() == cycle_type).cloned().collect()
            } else {
                all.clone()
            };
            let mut bt = Backtrack {
                relators,
                candidates: &candidates,
                conj_class: wirtinger.then(|| cycle_type.clone()),
                nodes: 0,
                max_nodes: nodes_left,
                found: Vec::new(),
                max_found: 64,
            };
            let mut assign = vec![None; generator_count];
            assign[0] = Some(g0);
            bt.search(&mut assign);
            nodes_left = nodes_left.saturating_sub(bt.nodes);
            for images in bt.found {
                let rep = PermRep { degree, images };
                if !rep.is_transitive() || (wirtinger && rep.is_abelian()) {
                    continue;
                }
                if rep.images.iter().all(|p| p.is_identity()) {
                    continue;
                }
                let key = canonical_rep(&rep.images, &all);
                if seen.insert(key) {
                    reps.push(rep);
                    if reps.len() >= limits.max_reps {
                        return reps;
                    }
                }
            }
            if nodes_left == 0 {
                return reps;
            }
        }
    }
    reps
}

type CacheKey = (Vec<Word>, usize, bool);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<Vec<PermRep>>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<Vec<PermRep>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Cached [`find_perm_reps`] with default limits.
pub fn perm_reps(pres: &Presentation) -> Arc<Vec<PermRep>> {
    let key = (pres.relators.clone(), pres.generator_count(), pres.kind.is_wirtinger());
    if let Some(r) = cache().lock().expect("cache").get(&key) {
        return r.clone();
    }
    let reps = Arc::new(find_perm_reps(&key.0, key.1, key.2, RepSearchLimits::default()));
    cache().lock().expect("cache").insert(key, reps.clone());
    reps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::{torus_presentation, two_bridge_presentation, TorusParams, TwoBridgeFraction};

    #[test]
    fn composition_is_right_action() {
        let s = Perm(vec![1, 0, 2]);
        let t = Perm(vec![0, 2, 1]);
        // 0 -s-> 1 -t-> 2
        assert_eq!(s.then(&t).0[0], 2);
        assert!(s.then(&s.inverse()).is_identity());
    }

    #[test]
    fn trefoil_maps_onto_s3() {
        let pres = torus_presentation(TorusParams::new(3, 2).unwrap());
        let reps = perm_reps(&pres);
        assert!(reps.iter().any(|r| r.degree == 3));
        for r in reps.iter() {
            assert!(r.satisfies(&pres.relators));
            assert!(r.is_transitive());
        }
    }

    #[test]
    fn figure_eight_has_dihedral_rep() {
        let pres = two_bridge_presentation(TwoBridgeFraction::new(5, 2).unwrap());
        let reps = perm_reps(&pres);
        assert!(reps.iter().any(|r| r.degree == 5));
        assert!(reps.iter().all(|r| r.satisfies(&pres.relators)));
    }

    #[test]
    fn kills_agrees_with_evaluate() {
        let pres = torus_presentation(TorusParams::new(5, 3).unwrap());
        let reps = perm_reps(&pres);
        assert!(!reps.is_empty());
        let w = Word::parse("abCdE", 5).unwrap();
        for r in reps.iter() {
            assert_eq!(r.kills(&w, &r.inverses()), r.evaluate(&w).is_identity());
        }
    }
}
