use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::Word;

/// The free product of `p` cyclic groups of order `q`, generated by
/// `0, 1, ..., p-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FreeProdParams {
    pub p: usize,
    pub q: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreeProdError {
    #[error("need p >= 2 and q >= 2, got p = {p}, q = {q}")]
    BadParams { p: usize, q: usize },
    #[error("letter {position} uses generator {gen}, which is not below p = {p}")]
    IndexOutOfRange { position: usize, gen: usize, p: usize },
    #[error("k = {k} is not a non-negative multiple of p = {p}")]
    NotMultiple { k: i64, p: usize },
    #[error("c potential needs q = 2, got q = {q}")]
    NeedsQTwo { q: usize },
    #[error("prefix needs at least {needed} leading padding letters, has {found}")]
    PaddingTooSmall { needed: usize, found: usize },
}

impl FreeProdParams {
    pub fn new(p: usize, q: usize) -> Result<FreeProdParams, FreeProdError> {
        if p < 2 || q < 2 {
            return Err(FreeProdError::BadParams { p, q });
        }
        Ok(FreeProdParams { p, q })
    }
}

/// A syllable `index^exponent`; raw syllables carry exponent ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Syllable {
    pub index: usize,
    pub exponent: i64,
}

/// Normal form `i_0^{e_0} ... i_{s-1}^{e_{s-1}}` with adjacent indices
/// distinct and every `e_j` in `1..q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StandardForm {
    pub params: FreeProdParams,
    pub syllables: Vec<Syllable>,
}

impl StandardForm {
    pub fn identity(params: FreeProdParams) -> StandardForm {
        StandardForm { params, syllables: Vec::new() }
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Sum of the exponents.
    pub fn pseudo_exponent(&self) -> i64 {
        self.syllables.iter().map(|s| s.exponent).sum()
    }

    /// Every index moved by `shift` (mod p).
    pub fn shifted(&self, shift: i64) -> StandardForm {
        let p = self.params.p as i64;
        StandardForm {
            params: self.params,
            syllables: self
                .syllables
                .iter()
                .map(|s| Syllable { index: (s.index as i64 + shift).rem_euclid(p) as usize, exponent: s.exponent })
                .collect(),
        }
    }

    /// Digits with exponents written out, e.g. `0²1` as `"001"`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.syllables {
            for _ in 0..s.exponent {
                if self.params.p <= 10 {
                    out.push_str(&s.index.to_string());
                } else {
                    out.push_str(&format!("{} ", s.index));
                }
            }
        }
        out.trim_end().to_string()
    }

    pub fn as_raw(&self) -> Vec<Syllable> {
        self.syllables.clone()
    }
}

/// Letter-by-letter image `(i_j + h_j)^{ε_j}` where the height is
/// `h_j = (ε_j - 1)/2 + Σ_{k<j} ε_k` (mod p).
pub fn theta(w: &Word, params: FreeProdParams) -> Result<Vec<Syllable>, FreeProdError> {
    let p = params.p as i64;
    let mut running = 0i64;
    let mut out = Vec::with_capacity(w.len());
    for (position, l) in w.letters().iter().enumerate() {
        if l.gen() >= params.p {
            return Err(FreeProdError::IndexOutOfRange { position, gen: l.gen(), p: params.p });
        }
        let eps = l.exponent();
        let h = (eps - 1) / 2 + running;
        out.push(Syllable { index: (l.gen() as i64 + h).rem_euclid(p) as usize, exponent: eps });
        running += eps;
    }
    Ok(out)
}

/// Reduces raw syllables to the standard form: merge equal neighbours,
/// reduce exponents into `1..q`, drop trivial syllables.
pub fn standardize(raw: &[Syllable], params: FreeProdParams) -> StandardForm {
    let q = params.q as i64;
    let mut stack: Vec<Syllable> = Vec::with_capacity(raw.len());
    for s in raw {
        let e = s.exponent.rem_euclid(q);
        if e == 0 {
            continue;
        }
        match stack.last_mut() {
            Some(top) if top.index == s.index => {
                let merged = (top.exponent + e) % q;
                if merged == 0 {
                    stack.pop();
                } else {
                    top.exponent = merged;
                }
            }
            _ => stack.push(Syllable { index: s.index, exponent: e }),
        }
    }
    StandardForm { params, syllables: stack }
}

/// `standardize(theta(w))`.
pub fn theta_standard_form(w: &Word, params: FreeProdParams) -> Result<StandardForm, FreeProdError> {
    Ok(standardize(&theta(w, params)?, params))
}

/// `(0 1 ... p-1)^{k/p + q}`, the image of the longitude `l_k`.
pub fn theta_longitude_closed_form(params: FreeProdParams, k: i64) -> Result<StandardForm, FreeProdError> {
    let p = params.p as i64;
    if k < 0 || k % p != 0 {
        return Err(FreeProdError::NotMultiple { k, p: params.p });
    }
    let reps = (k / p) as usize + params.q;
    let syllables = (0..reps * params.p).map(|i| Syllable { index: i % params.p, exponent: 1 }).collect();
    Ok(StandardForm { params, syllables })
}
