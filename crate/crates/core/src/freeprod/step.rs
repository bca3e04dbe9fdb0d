//! How `a'` changes when a conjugate `w⁻¹ y^ε w` is appended to a prefix.

use serde::{Deserialize, Serialize};

use super::angle::{a_prime_of, turn};
use super::standard::{theta_standard_form, FreeProdError, FreeProdParams, StandardForm, Syllable};
use crate::group::{Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StepKind {
    /// `ε = +1`, the conjugate's image is a single letter.
    A,
    /// `ε = +1`, longer image.
    B,
    /// `ε = -1`, the image is `z^{q-1}`.
    C,
    /// `ε = -1`, longer image.
    D,
}

impl StepKind {
    /// The `a'` of the conjugate taken alone.
    pub fn segment_a_prime(self) -> i64 {
        match self {
            StepKind::A | StepKind::C => 0,
            StepKind::B => -2,
            StepKind::D => 2,
        }
    }

    /// Upper bound on the total change of `a'`.
    pub fn bound(self, p: i64) -> i64 {
        match self {
            StepKind::A | StepKind::B => p - 2,
            StepKind::C => p,
            StepKind::D => p + 2,
        }
    }
}

/// One rule applied at the boundary between the two standard forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JunctionRule {
    /// Last and first index differ: a new turn appears.
    Distinct,
    /// Same index, `j + k < q`: syllables merge.
    Merge,
    /// Same index, `j + k > q`: a `q`th power is removed.
    Overflow,
    /// Same index, `j + k = q`, nothing left on the right.
    CancelEnd,
    /// Same index, `j + k = q`, the neighbours differ.
    CancelTurn,
    /// Same index, `j + k = q`, the neighbours agree: continue inward.
    CancelRecurse,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepCase {
    pub case: StepKind,
    /// `a'` of the conjugate alone, computed directly.
    pub segment_a_prime: i64,
    /// Change at the boundary from the case analysis.
    pub junction_delta: i64,
    pub rules: Vec<JunctionRule>,
    /// `a'(prefix · step) - a'(prefix)`, computed directly.
    pub total_delta: i64,
}

/// Case analysis at the boundary of `first · second` (both standard forms).
/// Returns the change in `a'` relative to the two parts taken alone.
pub fn junction(
    first: &StandardForm,
    second: &StandardForm,
) -> Result<(i64, Vec<JunctionRule>), FreeProdError> {
    let p = first.params.p as i64;
    let q = first.params.q as i64;
    let f = &first.syllables;
    let s = &second.syllables;
    let mut rules = Vec::new();
    let mut delta = 0i64;
    let mut fi = f.len();
    let mut si = 0usize;
    let absorbed = |found: usize| FreeProdError::PaddingTooSmall { needed: found + 1, found };
    loop {
        if si == s.len() {
            return Ok((delta, rules));
        }
        if fi == 0 {
            return Err(absorbed(0));
        }
        let Syllable { index: x, exponent: j } = f[fi - 1];
        let Syllable { index: y, exponent: k } = s[si];
        if x != y {
            rules.push(JunctionRule::Distinct);
            return Ok((delta + p - 2 * turn(x, y, first.params.p), rules));
        }
        if j + k < q {
            rules.push(JunctionRule::Merge);
            return Ok((delta - p, rules));
        }
        if j + k > q {
            rules.push(JunctionRule::Overflow);
            return Ok((delta + p, rules));
        }
        // j + k = q: both syllables vanish, a' unchanged so far
        if fi < 2 {
            return Err(absorbed(fi));
        }
        let x1 = f[fi - 2].index;
        let d_left = p - 2 * turn(x1, x, first.params.p);
        if si + 1 == s.len() {
            rules.push(JunctionRule::CancelEnd);
            return Ok((delta - d_left, rules));
        }
        let x2 = s[si + 1].index;
        let d_right = p - 2 * turn(x, x2, first.params.p);
        if x1 != x2 {
            rules.push(JunctionRule::CancelTurn);
            let d_new = p - 2 * turn(x1, x2, first.params.p);
            return Ok((delta + d_new - d_left - d_right, rules));
        }
        rules.push(JunctionRule::CancelRecurse);
        delta -= d_left + d_right;
        fi -= 1;
        si += 1;
    }
}

fn leading_padding(prefix: &Word, padding: usize) -> usize {
    prefix.letters().iter().take_while(|&&l| l == Letter::pos(padding)).count()
}

/// Classifies appending `conjugator⁻¹ · x_gen^sign · conjugator` to
/// `prefix`. The freely reduced prefix must start with at least
/// `q·(len(conjugator) + len(rest)) + q` copies of `x_0`, where `rest` is
/// what follows them.
pub fn classify_step(
    prefix: &Word,
    conjugator: &Word,
    gen: usize,
    sign: i64,
    params: FreeProdParams,
) -> Result<StepCase, FreeProdError> {
    let reduced = prefix.free_reduce();
    let found = leading_padding(&reduced, 0);
    let rest = reduced.len() - found;
    let needed = params.q * (conjugator.len() + rest) + params.q;
    if found < needed {
        return Err(FreeProdError::PaddingTooSmall { needed, found });
    }
    let y = if sign > 0 { Letter::pos(gen) } else { Letter::neg(gen) };
    let step = conjugator.inverse().concat(&Word::from_letters(vec![y])).concat(conjugator);

    let step_form = theta_standard_form(&step, params)?;
    let case = match (sign > 0, step_form.len() == 1) {
        (true, true) => StepKind::A,
        (true, false) => StepKind::B,
        (false, true) => StepKind::C,
        (false, false) => StepKind::D,
    };
    let seg = a_prime_of(&step_form, step.exponent_sum());
    assert!(seg.is_integer());
    let segment_a_prime = seg.to_integer();

    let first = theta_standard_form(prefix, params)?;
    let second = step_form.shifted(prefix.exponent_sum());
    let (junction_delta, rules) = junction(&first, &second)?;

    let whole = prefix.concat(&step);
    let before = a_prime_of(&first, prefix.exponent_sum());
    let after = a_prime_of(&theta_standard_form(&whole, params)?, whole.exponent_sum());
    let total = after - before;
    assert!(total.is_integer());
    Ok(StepCase { case, segment_a_prime, junction_delta, rules, total_delta: total.to_integer() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: usize, q: usize) -> FreeProdParams {
        FreeProdParams::new(p, q).unwrap()
    }

    #[test]
    fn positive_bare_generator_is_case_a() {
        let prefix = Word::power(0, 10);
        let c = classify_step(&prefix, &Word::new(), 2, 1, fp(5, 3)).unwrap();
        assert_eq!(c.case, StepKind::A);
        assert_eq!(c.segment_a_prime, 0);
        assert_eq!(c.segment_a_prime + c.junction_delta, c.total_delta);
    }

    #[test]
    fn negative_conjugated_generator_is_case_d() {
        let prefix = Word::power(0, 20);
        let conj = Word::parse("bc", 5).unwrap();
        let c = classify_step(&prefix, &conj, 3, -1, fp(5, 3)).unwrap();
        assert_eq!(c.case, StepKind::D);
        assert_eq!(c.segment_a_prime, 2);
        assert_eq!(c.segment_a_prime + c.junction_delta, c.total_delta);
        assert!(c.total_delta <= 5 + 2);
    }

    #[test]
    fn short_padding_rejected() {
        let conj = Word::parse("bc", 5).unwrap();
        assert_eq!(
            classify_step(&Word::power(0, 3), &conj, 3, -1, fp(5, 3)),
            Err(FreeProdError::PaddingTooSmall { needed: 9, found: 3 })
        );
    }

    #[test]
    fn segment_values_match_table() {
        let params = fp(5, 3);
        for w in ["", "b", "bC", "dAe", "ccB"] {
            let conj = Word::parse(w, 5).unwrap();
            for gen in 0..5 {
                for sign in [1, -1] {
                    let c = classify_step(&Word::power(0, 40), &conj, gen, sign, params).unwrap();
                    assert_eq!(c.segment_a_prime, c.case.segment_a_prime(), "{w} {gen} {sign}");
                }
            }
        }
    }
}
