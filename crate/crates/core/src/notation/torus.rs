use serde::{Deserialize, Serialize};

use super::presentation::{LongitudeTemplate, NotationError, Presentation, PresentationKind};
use crate::group::{Letter, Word};

/// Coprime torus-knot parameters, canonicalized so that `p > q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusParams {
    p: u32,
    q: u32,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl TorusParams {
    pub fn new(p: i64, q: i64) -> Result<TorusParams, NotationError> {
        let bad = NotationError::InvalidTorus { p, q };
        if p < 2 || q < 2 || p == q || gcd(p as u64, q as u64) != 1 {
            return Err(bad);
        }
        let (p, q) = if p > q { (p, q) } else { (q, p) };
        Ok(TorusParams { p: p as u32, q: q as u32 })
    }

    pub fn p(self) -> usize {
        self.p as usize
    }

    pub fn q(self) -> usize {
        self.q as usize
    }

    /// `(p-1)(q-1)`.
    pub fn genus_term(self) -> i64 {
        (self.p as i64 - 1) * (self.q as i64 - 1)
    }
}

/// `x_{i+q-1} ... x_{i+1} x_i`, indices mod p.
fn descending_block(p: usize, q: usize, i: usize) -> Word {
    (0..q).rev().map(|j| Letter::pos((i + j) % p)).collect()
}

/// The negative tail of the longitude: `x_j⁻¹` for `j = 1..pq-1` skipping
/// multiples of `q`, indices mod p.
fn longitude_tail(p: usize, q: usize) -> Word {
    (1..p * q).filter(|j| j % q != 0).map(|j| Letter::neg(j % p)).collect()
}

/// Presentation `< x_0..x_{p-1} | B_0 = B_1 = ... = B_{p-1} >` where
/// `B_i = x_{i+q-1} ... x_i`, written as the relators `B_0 B_i⁻¹`.
pub fn torus_presentation(params: TorusParams) -> Presentation {
    let (p, q) = (params.p(), params.q());
    let base = descending_block(p, q, 0);
    let relators = (1..p)
        .map(|i| base.concat(&descending_block(p, q, i).inverse()))
        .collect();
    let fixture = longitude_tail(p, q);
    let fixture_k = fixture.exponent_sum();
    Presentation {
        generators: (0..p).map(|i| format!("x{i}")).collect(),
        relators,
        padding: 0,
        kind: PresentationKind::Torus(params),
        longitude: Some(LongitudeTemplate { fixture, fixture_k, slots: Vec::new() }),
    }
}
