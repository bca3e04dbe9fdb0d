use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::standard::{theta_standard_form, FreeProdError, FreeProdParams, StandardForm};
use crate::group::Word;

/// `d` with `from + d ≡ to (mod p)`, `d` in `1..p` (0 when equal).
pub(crate) fn turn(from: usize, to: usize, p: usize) -> i64 {
    ((to + p - from) % p) as i64
}

/// `Σ_{j>=1} (p - 2 d_j)` over adjacent syllables.
pub fn angle(sf: &StandardForm) -> i64 {
    let p = sf.params.p;
    sf.syllables
        .windows(2)
        .map(|w| p as i64 - 2 * turn(w[0].index, w[1].index, p))
        .sum()
}

/// `Σ (e_j - 1)`.
pub fn internal_angle(sf: &StandardForm) -> i64 {
    sf.syllables.iter().map(|s| s.exponent - 1).sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AngleReport {
    pub form: StandardForm,
    pub a: i64,
    pub iota: i64,
    /// Excess exponent: pseudo-exponent minus exponent sum.
    pub e: i64,
    pub esum: i64,
    pub a_prime: Ratio<i64>,
}

impl AngleReport {
    /// `a'` as an integer. Panics if it is not integral, which would mean
    /// `q` does not divide `e`.
    pub fn a_prime_int(&self) -> i64 {
        assert!(self.a_prime.is_integer(), "non-integral a' = {}", self.a_prime);
        self.a_prime.to_integer()
    }
}

/// `a - p·ι + (q-2)p·e/q` for a standard form and exponent sum.
pub fn a_prime_of(form: &StandardForm, esum: i64) -> Ratio<i64> {
    let (p, q) = (form.params.p as i64, form.params.q as i64);
    let e = form.pseudo_exponent() - esum;
    Ratio::from_integer(angle(form) - p * internal_angle(form)) + Ratio::new((q - 2) * p * e, q)
}

pub fn angle_report(w: &Word, params: FreeProdParams) -> Result<AngleReport, FreeProdError> {
    let form = theta_standard_form(w, params)?;
    let esum = w.exponent_sum();
    let a = angle(&form);
    let iota = internal_angle(&form);
    let e = form.pseudo_exponent() - esum;
    let a_prime = a_prime_of(&form, esum);
    Ok(AngleReport { form, a, iota, e, esum, a_prime })
}

/// `c = a - (p-2)(esum - 1)`, defined for `q = 2`.
pub fn c_potential(w: &Word, params: FreeProdParams) -> Result<i64, FreeProdError> {
    if params.q != 2 {
        return Err(FreeProdError::NeedsQTwo { q: params.q });
    }
    let r = angle_report(w, params)?;
    Ok(r.a - (params.p as i64 - 2) * (r.esum - 1))
}
