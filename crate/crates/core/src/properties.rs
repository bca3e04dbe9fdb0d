//! Seeded randomized checks of the algebraic laws the crate relies on.
//! Each suite draws its cases from a ChaCha stream derived from the seed
//! and the suite name, so runs are reproducible and independent of order.

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::framing::{convolve, mirror, natural_framing, tighten, torus_window, unknot_window, FramingWindow};
use crate::freeprod::{
    angle, angle_report, c_potential, classify_step, standardize, theta_standard_form,
    FreeProdParams, StandardForm, StepKind, Syllable,
};
use crate::group::{bounded_triviality, nontriviality_witness, Letter, TrivialityVerdict, Word};
use crate::notation::{builtin_knot, torus_presentation, Presentation, TorusParams};

const KEPT_FAILURES: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub failed: usize,
    /// The first few failing cases.
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

type Case = fn(&mut ChaCha8Rng) -> Result<(), String>;

pub const SUITES: &[(&str, Case)] = &[
    ("theta_well_defined", theta_well_defined),
    ("standardize_unique", standardize_unique),
    ("excess_divisible", excess_divisible),
    ("a_prime_antisymmetric", a_prime_antisymmetric),
    ("angle_cyclic", angle_cyclic),
    ("step_bounds", step_bounds),
    ("tighten_monotone_idempotent", tighten_monotone_idempotent),
    ("convolve_comm_assoc", convolve_comm_assoc),
    ("nu_additive_mirror", nu_additive_mirror),
    ("witnesses_sound", witnesses_sound),
];

fn suite_seed(seed: u64, name: &str) -> u64 {
    // FNV-1a over the name, mixed with the seed
    let mut h = 0xcbf2_9ce4_8422_2325u64 ^ seed;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

pub fn run_suite(name: &'static str, case: Case, seed: u64, cases: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(suite_seed(seed, name));
    let mut failures = Vec::new();
    let mut failed = 0;
    for i in 0..cases {
        if let Err(e) = case(&mut rng) {
            failed += 1;
            if failures.len() < KEPT_FAILURES {
                failures.push(format!("case {i}: {e}"));
            }
        }
    }
    SuiteReport { name, cases, failed, failures }
}

/// Runs every suite, in parallel, with `cases` cases each.
pub fn run_all(seed: u64, cases: usize) -> Vec<SuiteReport> {
    SUITES.par_iter().map(|&(name, case)| run_suite(name, case, seed, cases)).collect()
}

const THETA_GRID: [(usize, usize); 4] = [(3, 2), (5, 2), (5, 3), (7, 3)];

fn random_word(rng: &mut ChaCha8Rng, gens: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| {
            let g = rng.gen_range(0..gens);
            if rng.gen_bool(0.5) {
                Letter::pos(g)
            } else {
                Letter::neg(g)
            }
        })
        .collect()
}

fn fp(p: usize, q: usize) -> FreeProdParams {
    FreeProdParams::new(p, q).expect("grid parameters")
}

fn torus(p: usize, q: usize) -> Presentation {
    torus_presentation(TorusParams::new(p as i64, q as i64).expect("grid parameters"))
}

fn insert(w: &Word, at: usize, piece: &Word) -> Word {
    let l = w.letters();
    Word::from_letters(l[..at].iter().chain(piece.letters()).chain(&l[at..]).copied().collect())
}

fn theta_well_defined(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let (p, q) = THETA_GRID[rng.gen_range(0..THETA_GRID.len())];
    let pres = torus(p, q);
    let params = fp(p, q);
    let w = random_word(rng, p, 14);
    let at = rng.gen_range(0..=w.len());
    let piece = if rng.gen_bool(0.5) {
        let g = rng.gen_range(0..p);
        let l = if rng.gen_bool(0.5) { Letter::pos(g) } else { Letter::neg(g) };
        Word::from_letters(vec![l, l.inverse()])
    } else {
        let r = &pres.relators[rng.gen_range(0..pres.relators.len())];
        let r = if rng.gen_bool(0.5) { r.inverse() } else { r.clone() };
        r.rotate(rng.gen_range(0..r.len()))
    };
    let w2 = insert(&w, at, &piece);
    let a = theta_standard_form(&w, params).map_err(|e| e.to_string())?;
    let b = theta_standard_form(&w2, params).map_err(|e| e.to_string())?;
    if a != b {
        return Err(format!("({p},{q}) {} vs {}", a.render(), b.render()));
    }
    Ok(())
}

fn random_raw(rng: &mut ChaCha8Rng, p: usize, q: usize, max_len: usize) -> Vec<Syllable> {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| Syllable { index: rng.gen_range(0..p), exponent: rng.gen_range(-(q as i64)..=q as i64) })
        .collect()
}

fn is_normal(sf: &StandardForm) -> bool {
    let q = sf.params.q as i64;
    sf.syllables.iter().all(|s| (1..q).contains(&s.exponent) && s.index < sf.params.p)
        && sf.syllables.windows(2).all(|w| w[0].index != w[1].index)
}

fn standardize_unique(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let (p, q) = THETA_GRID[rng.gen_range(0..THETA_GRID.len())];
    let params = fp(p, q);
    let raw = random_raw(rng, p, q, 12);
    let sf = standardize(&raw, params);
    if !is_normal(&sf) {
        return Err(format!("not normal: {}", sf.render()));
    }
    if standardize(&sf.as_raw(), params) != sf {
        return Err(format!("not idempotent: {}", sf.render()));
    }
    // an equivalent raw sequence: split a syllable, insert z^q or z^a z^-a
    let mut other = raw.clone();
    let at = rng.gen_range(0..=other.len());
    let z = rng.gen_range(0..p);
    match rng.gen_range(0..3) {
        0 => other.insert(at, Syllable { index: z, exponent: q as i64 }),
        1 => {
            let a = rng.gen_range(1..q as i64 + 1);
            other.insert(at, Syllable { index: z, exponent: -a });
            other.insert(at, Syllable { index: z, exponent: a });
        }
        _ => {
            if at < other.len() {
                let s = other[at];
                other[at].exponent = 1;
                other.insert(at + 1, Syllable { index: s.index, exponent: s.exponent - 1 });
            }
        }
    }
    let sf2 = standardize(&other, params);
    if sf2 != sf {
        return Err(format!("{} vs {}", sf.render(), sf2.render()));
    }
    Ok(())
}

fn excess_divisible(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let (p, q) = THETA_GRID[rng.gen_range(0..THETA_GRID.len())];
    let w = random_word(rng, p, 20);
    let r = angle_report(&w, fp(p, q)).map_err(|e| e.to_string())?;
    if r.e % q as i64 != 0 || !r.a_prime.is_integer() {
        return Err(format!("({p},{q}) e = {} a' = {}", r.e, r.a_prime));
    }
    Ok(())
}

fn a_prime_antisymmetric(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let (p, q) = THETA_GRID[rng.gen_range(0..THETA_GRID.len())];
    let params = fp(p, q);
    let w = random_word(rng, p, 20);
    let a = angle_report(&w, params).map_err(|e| e.to_string())?.a_prime;
    let b = angle_report(&w.inverse(), params).map_err(|e| e.to_string())?.a_prime;
    if a != -b {
        return Err(format!("({p},{q}) a'(w) = {a}, a'(w⁻¹) = {b}"));
    }
    Ok(())
}

fn angle_cyclic(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let (p, q) = THETA_GRID[rng.gen_range(0..THETA_GRID.len())];
    let params = fp(p, q);
    let sf = standardize(&random_raw(rng, p, q, 14), params);
    let shift = rng.gen_range(1..p as i64);
    let moved = sf.shifted(shift);
    if angle(&sf) != angle(&moved) {
        return Err(format!("{} -> {}", sf.render(), moved.render()));
    }
    Ok(())
}

fn step_bounds(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let (p, q) = THETA_GRID[rng.gen_range(0..THETA_GRID.len())];
    let params = fp(p, q);
    let conj = random_word(rng, p, 6);
    let mut tail = random_word(rng, p, 10).free_reduce().into_letters();
    let cut = tail.iter().take_while(|&&l| l == Letter::neg(0)).count();
    tail.drain(..cut);
    let pad = q * (conj.len() + tail.len()) + q + rng.gen_range(0..3);
    let prefix = Word::power(0, pad as i64).concat(&Word::from_letters(tail));
    let gen = rng.gen_range(0..p);
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    let c = classify_step(&prefix, &conj, gen, sign, params)
        .map_err(|e| format!("({p},{q}) prefix {} conj {} gen {gen} sign {sign}: {e}", prefix.render(p), conj.render(p)))?;
    let ctx = || format!("({p},{q}) prefix {} conj {} gen {gen} sign {sign}: {c:?}", prefix.render(p), conj.render(p));
    if c.segment_a_prime != c.case.segment_a_prime() {
        return Err(format!("segment: {}", ctx()));
    }
    if c.segment_a_prime + c.junction_delta != c.total_delta {
        return Err(format!("segment + junction != total: {}", ctx()));
    }
    if c.total_delta > c.case.bound(p as i64) {
        return Err(format!("bound: {}", ctx()));
    }
    if q == 2 {
        let y = if sign > 0 { Letter::pos(gen) } else { Letter::neg(gen) };
        let step = conj.inverse().concat(&Word::from_letters(vec![y])).concat(&conj);
        let before = c_potential(&prefix, params).map_err(|e| e.to_string())?;
        let after = c_potential(&prefix.concat(&step), params).map_err(|e| e.to_string())?;
        let cap = match c.case {
            StepKind::A | StepKind::B => 0,
            StepKind::C => 2 * p as i64 - 4,
            StepKind::D => 2 * p as i64,
        };
        if after - before > cap {
            return Err(format!("c increased by {}: {}", after - before, ctx()));
        }
    }
    Ok(())
}

/// A framing function: the minimum of V-shapes `c + |k - d|` with even
/// vertices `d` and `c >= |d|`, `c ≡ d`.
fn random_framing_function(rng: &mut ChaCha8Rng) -> Vec<(i64, i64)> {
    (0..rng.gen_range(1..4))
        .map(|_| {
            let d = 2 * rng.gen_range(-6i64..=6);
            (d.abs() + 2 * rng.gen_range(0..4), d)
        })
        .collect()
}

fn eval(vs: &[(i64, i64)], k: i64) -> i64 {
    vs.iter().map(|&(c, d)| c + (k - d).abs()).min().unwrap()
}

fn tighten_monotone_idempotent(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let f = random_framing_function(rng);
    let (lo, hi) = (-rng.gen_range(4..20), rng.gen_range(4..20));
    let mut w = FramingWindow::new(lo, hi).unwrap();
    for k in lo..=hi {
        if rng.gen_bool(0.3) {
            w.add_upper(k, eval(&f, k) + 2 * rng.gen_range(0..3), "random").unwrap();
        }
        if rng.gen_bool(0.3) {
            w.add_lower(k, (eval(&f, k) - 2 * rng.gen_range(0..3)).max(k.abs()), "random").unwrap();
        }
    }
    let t = tighten(&w).map_err(|e| e.to_string())?;
    for (a, b) in w.entries().iter().zip(t.entries()) {
        let looser_lower = matches!((a.lower, b.lower), (Some(x), Some(y)) if y < x) || (a.lower.is_some() && b.lower.is_none());
        let looser_upper = matches!((a.upper, b.upper), (Some(x), Some(y)) if y > x) || (a.upper.is_some() && b.upper.is_none());
        if looser_lower || looser_upper {
            return Err(format!("loosened at k = {}", a.k));
        }
        let v = eval(&f, a.k);
        if b.lower.is_some_and(|l| l > v) || b.upper.is_some_and(|u| u < v) {
            return Err(format!("excludes n({}) = {v}", a.k));
        }
    }
    if tighten(&t).map_err(|e| e.to_string())? != t {
        return Err("not idempotent".into());
    }
    Ok(())
}

fn certified_windows() -> &'static [FramingWindow] {
    static WINDOWS: OnceLock<Vec<FramingWindow>> = OnceLock::new();
    WINDOWS.get_or_init(|| {
        let mut ws: Vec<FramingWindow> = [(3, 2), (5, 2), (7, 2), (5, 3), (7, 3), (4, 3)]
            .iter()
            .map(|&(p, q)| torus_window(TorusParams::new(p, q).unwrap(), -24, 24).unwrap())
            .collect();
        let mirrored: Vec<FramingWindow> = ws.iter().map(mirror).collect();
        ws.extend(mirrored);
        ws.push(unknot_window(-24, 24).unwrap());
        for id in ["4_1", "6_1", "7_7"] {
            let row = crate::framing::table(id).unwrap();
            ws.push(row.window);
        }
        ws
    })
}

fn values(w: &FramingWindow) -> Vec<(i64, Option<i64>, Option<i64>)> {
    w.entries().iter().map(|e| (e.k, e.lower, e.upper)).collect()
}

fn convolve_comm_assoc(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let ws = &certified_windows()[..13];
    let pick = |rng: &mut ChaCha8Rng| &ws[rng.gen_range(0..ws.len())];
    let (a, b, c) = (pick(rng), pick(rng), pick(rng));
    let e = |r: Result<FramingWindow, _>| r.map_err(|e: crate::framing::WindowError| e.to_string());
    let ab = e(convolve(a, b))?;
    if values(&ab) != values(&e(convolve(b, a))?) {
        return Err("not commutative".into());
    }
    let left = e(convolve(&ab, c))?;
    let right = e(convolve(a, &e(convolve(b, c))?))?;
    if values(&left) != values(&right) {
        return Err("not associative".into());
    }
    Ok(())
}

fn nu_additive_mirror(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let ws = certified_windows();
    let a = &ws[rng.gen_range(0..ws.len())];
    let b = &ws[rng.gen_range(0..ws.len())];
    let nu = |w: &FramingWindow| -> Result<i64, String> {
        let est = natural_framing(w).map_err(|e| e.to_string())?;
        match (est.certified, est.value()) {
            (true, Some(v)) => Ok(v),
            _ => Err(format!("uncertified estimate {}", est.render())),
        }
    };
    let (na, nb) = (nu(a)?, nu(b)?);
    let sum = nu(&convolve(a, b).map_err(|e| e.to_string())?)?;
    if sum != na + nb {
        return Err(format!("ν(a # b) = {sum}, ν(a) + ν(b) = {}", na + nb));
    }
    if nu(&mirror(a))? != -na {
        return Err(format!("ν(mirror) != -{na}"));
    }
    Ok(())
}

fn witness_presentations() -> &'static [Presentation] {
    static PRES: OnceLock<Vec<Presentation>> = OnceLock::new();
    PRES.get_or_init(|| {
        let mut v = vec![torus(3, 2), torus(5, 3)];
        for id in ["4_1", "5_2", "6_2", "7_7"] {
            v.push(builtin_knot(id).unwrap().presentation());
        }
        v
    })
}

/// A witness must really be one, and products of conjugated relators must
/// never get one.
fn witnesses_sound(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let ps = witness_presentations();
    let pres = &ps[rng.gen_range(0..ps.len())];
    let n = pres.generator_count();
    let w = random_word(rng, n, 16);
    if let Some(wit) = nontriviality_witness(&w, pres) {
        if !wit.check(&w, pres) {
            return Err(format!("bogus witness for {}", pres.render(&w)));
        }
    }
    let mut t = Word::new();
    for _ in 0..rng.gen_range(1..3) {
        let c = random_word(rng, n, 4);
        let r = &pres.relators[rng.gen_range(0..pres.relators.len())];
        let r = if rng.gen_bool(0.5) { r.inverse() } else { r.clone() };
        t = t.concat(&c.inverse()).concat(&r).concat(&c);
    }
    if nontriviality_witness(&t, pres).is_some() {
        return Err(format!("witness for trivial {}", pres.render(&t)));
    }
    if let TrivialityVerdict::Nontrivial(_) = bounded_triviality(&t.free_reduce(), pres, crate::group::Budget::small()) {
        return Err(format!("trivial word judged nontrivial: {}", pres.render(&t)));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_small() {
        for r in run_all(7, 50) {
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = run_suite("standardize_unique", standardize_unique, 3, 20);
        let b = run_suite("standardize_unique", standardize_unique, 3, 20);
        assert_eq!(a, b);
    }

    #[test]
    fn failing_case_is_reported() {
        fn always(_: &mut ChaCha8Rng) -> Result<(), String> {
            Err("no".into())
        }
        let r = run_suite("always", always, 0, 10);
        assert_eq!((r.failed, r.failures.len()), (10, KEPT_FAILURES));
    }
}
