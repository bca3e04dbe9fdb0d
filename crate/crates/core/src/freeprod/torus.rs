//! Closed forms and explicit certificates for torus knots.

use crate::group::{DeletionCertificate, Letter, RewritingTrace, Word};
use crate::notation::{longitude_word, torus_presentation, TorusParams};

/// `n(k) = (p-1)(q-1) + |k + (p-1)(q-1)|`.
pub fn torus_framing_function(params: TorusParams, k: i64) -> i64 {
    let m0 = params.genus_term();
    m0 + (k + m0).abs()
}

/// `-(p-1)(q-1)`.
pub fn torus_natural_framing(params: TorusParams) -> i64 {
    -params.genus_term()
}

/// Certificate for `n(k) <= (p-1)(q-1) + |k + (p-1)(q-1)|`.
///
/// The word is `x_0^j · x_0^{q-1} · tail` with `j = k + (p-1)(q-1)`, i.e. a
/// free rewriting of `l_k`. The `|j|` leading letters and every inverse
/// letter of the tail other than `x_0⁻¹` are deleted; what remains is
/// `x_0^{q-1} x_0^{-(q-1)}`.
pub fn torus_certificate(params: TorusParams, k: i64) -> DeletionCertificate {
    let m0 = params.genus_term();
    let j = k + m0;
    let q = params.q() as i64;
    let canonical = longitude_word(&torus_presentation(params), -m0).expect("torus longitude");
    // canonical = x_0^{q-1} · tail
    let tail = &canonical.letters()[(q - 1) as usize..];
    let mut word = Word::power(0, j);
    word.extend(&Word::power(0, q - 1));
    let offset = word.len();
    word.extend(&Word::from_letters(tail.to_vec()));
    let mut deleted: Vec<usize> = (0..j.unsigned_abs() as usize).collect();
    deleted.extend(
        tail.iter()
            .enumerate()
            .filter(|(_, l)| l.gen() != 0)
            .map(|(i, _)| offset + i),
    );
    let remainder = word.without_positions(&deleted);
    let trace = RewritingTrace::free_reduction(&remainder);
    DeletionCertificate { word, deleted, trace: Some(trace) }
}

/// The certificate at the minimum `k = -(p-1)(q-1)`: only the inverse
/// letters `x_i⁻¹` with `i != 0` are deleted.
pub fn negative_decomposition(params: TorusParams) -> DeletionCertificate {
    torus_certificate(params, -params.genus_term())
}

/// The deleted letters of [`negative_decomposition`] as conjugates
/// `x_0^{c} x_i⁻¹ x_0^{-c}`, where `c` counts the `x_0⁻¹` after the letter.
/// Returns `(c, i)` in word order.
pub fn negative_conjugates(params: TorusParams) -> Vec<(usize, usize)> {
    let cert = negative_decomposition(params);
    let letters = cert.word.letters();
    cert.deleted
        .iter()
        .map(|&d| {
            let c = letters[d + 1..].iter().filter(|&&l| l == Letter::neg(0)).count();
            (c, letters[d].gen())
        })
        .collect()
}

/// The product of [`negative_conjugates`] as a word. It freely reduces to
/// `l_{-(p-1)(q-1)}`.
pub fn negative_conjugate_product(params: TorusParams) -> Word {
    let mut w = Word::new();
    for (c, i) in negative_conjugates(params) {
        w.extend(&Word::power(0, c as i64));
        w.push(Letter::neg(i));
        w.extend(&Word::power(0, -(c as i64)));
    }
    w
}
