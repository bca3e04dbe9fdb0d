use serde::{Deserialize, Serialize};

use super::presentation::{
    LongitudeTemplate, NotationError, PaddingSlot, Presentation, PresentationKind,
};
use super::torus::TorusParams;
use crate::group::{Letter, Sign, Word};

const A: usize = 0;
const B: usize = 1;

/// Schubert fraction `p/q` of a two-bridge knot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwoBridgeFraction {
    p: u32,
    q: u32,
}

impl TwoBridgeFraction {
    pub fn new(p: i64, q: i64) -> Result<TwoBridgeFraction, NotationError> {
        let bad = NotationError::InvalidFraction { p, q };
        if p <= 0 || p % 2 == 0 || q <= 0 || q >= p {
            return Err(bad);
        }
        let (mut x, mut y) = (p, q);
        while y != 0 {
            (x, y) = (y, x % y);
        }
        if x != 1 {
            return Err(bad);
        }
        Ok(TwoBridgeFraction { p: p as u32, q: q as u32 })
    }

    pub fn numerator(self) -> i64 {
        self.p as i64
    }

    pub fn denominator(self) -> i64 {
        self.q as i64
    }
}

/// The word `w = b^{ε_1} a^{ε_2} b^{ε_3} ...` of length `p-1` with
/// `ε_i = (-1)^{⌊iq/p⌋}`, where `q` is replaced by the odd representative
/// `q - p` when it is even.
pub fn schubert_word(frac: TwoBridgeFraction) -> Word {
    let p = frac.p as i64;
    let q = if frac.q % 2 == 0 { frac.q as i64 - p } else { frac.q as i64 };
    (1..p)
        .map(|i| {
            let gen = if i % 2 == 1 { B } else { A };
            let sign = if (i * q).div_euclid(p) % 2 == 0 { Sign::Pos } else { Sign::Neg };
            Letter::new(gen, sign)
        })
        .collect()
}

fn reversed(w: &Word) -> Word {
    w.letters().iter().rev().copied().collect()
}

/// `< a, b | a w = w b >` with the longitude `a^* · w · b^* · w'`, where
/// `w'` is `w` read backwards. The slot between `w` and `w'` absorbs
/// `b`-padding because `a^j w = w b^j` in the group.
pub fn two_bridge_presentation(frac: TwoBridgeFraction) -> Presentation {
    let w = schubert_word(frac);
    let relator = Word::from_letters(vec![Letter::pos(A)])
        .concat(&w)
        .concat(&Word::from_letters(vec![Letter::neg(B)]))
        .concat(&w.inverse());
    let fixture = w.concat(&reversed(&w));
    let fixture_k = fixture.exponent_sum();
    Presentation {
        generators: vec!["a".into(), "b".into()],
        relators: vec![relator],
        padding: A,
        kind: PresentationKind::TwoBridge(frac),
        longitude: Some(LongitudeTemplate {
            fixture,
            fixture_k,
            slots: vec![PaddingSlot { position: w.len(), gen: B }],
        }),
    }
}

/// A prime knot from the built-in table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuiltinKnot {
    pub id: &'static str,
    pub fraction: (i64, i64),
    /// Torus parameters for the torus knots in the table.
    pub torus: Option<(i64, i64)>,
    /// Fraction taken from standard tables rather than derived here; checked
    /// against the determinant before use.
    pub externally_sourced: bool,
}

impl BuiltinKnot {
    pub fn fraction(&self) -> TwoBridgeFraction {
        TwoBridgeFraction::new(self.fraction.0, self.fraction.1).expect("table fraction")
    }

    pub fn torus_params(&self) -> Option<TorusParams> {
        self.torus.map(|(p, q)| TorusParams::new(p, q).expect("table torus"))
    }

    /// The presentation used for this knot: the torus presentation for torus
    /// knots, the two-bridge one otherwise.
    pub fn presentation(&self) -> Presentation {
        match self.torus_params() {
            Some(t) => super::torus::torus_presentation(t),
            None => two_bridge_presentation(self.fraction()),
        }
    }
}

const fn knot(id: &'static str, p: i64, q: i64, torus: Option<(i64, i64)>) -> BuiltinKnot {
    BuiltinKnot { id, fraction: (p, q), torus, externally_sourced: true }
}

/// The prime knots with at most seven crossings. The 6₂ and 7₇ fractions are
/// the ones whose Schubert words match the certificate words shipped in
/// `fixtures/`.
pub const BUILTIN_KNOTS: [BuiltinKnot; 14] = [
    knot("3_1", 3, 1, Some((3, 2))),
    knot("4_1", 5, 2, None),
    knot("5_1", 5, 1, Some((5, 2))),
    knot("5_2", 7, 2, None),
    knot("6_1", 9, 2, None),
    knot("6_2", 11, 7, None),
    knot("6_3", 13, 5, None),
    knot("7_1", 7, 1, Some((7, 2))),
    knot("7_2", 11, 2, None),
    knot("7_3", 13, 3, None),
    knot("7_4", 15, 4, None),
    knot("7_5", 17, 5, None),
    knot("7_6", 19, 7, None),
    knot("7_7", 21, 13, None),
];

pub fn builtin_knot(id: &str) -> Option<BuiltinKnot> {
    let mut norm: String = id
        .chars()
        .map(|c| match c {
            '₀'..='₉' => char::from_digit(c as u32 - '₀' as u32, 10).unwrap(),
            '.' => '_',
            c => c,
        })
        .collect();
    if !norm.contains('_') && norm.len() == 2 {
        norm.insert(1, '_');
    }
    BUILTIN_KNOTS.iter().copied().find(|k| k.id == norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::knot_determinant;

    #[test]
    fn trefoil_relator() {
        let pres = two_bridge_presentation(TwoBridgeFraction::new(3, 1).unwrap());
        assert_eq!(pres.relators.len(), 1);
        assert_eq!(pres.relators[0].len(), 6);
        assert_eq!(pres.render(&pres.relators[0]), "abaBAB");
    }

    #[test]
    fn figure_eight_abelianizes_to_z() {
        let pres = two_bridge_presentation(TwoBridgeFraction::new(5, 2).unwrap());
        // the relator abelianizes to a - b
        let r = &pres.relators[0];
        let count = |g: usize| -> i64 {
            r.letters().iter().filter(|l| l.gen() == g).map(|l| l.exponent()).sum()
        };
        assert_eq!(count(0), 1);
        assert_eq!(count(1), -1);
        assert_eq!(knot_determinant(&pres), 5);
    }

    #[test]
    fn longitude_commutes_with_a() {
        use crate::group::{bounded_triviality, verify_trace, Budget, TrivialityVerdict};
        for knot in BUILTIN_KNOTS.iter() {
            let pres = two_bridge_presentation(knot.fraction());
            let l = pres.template().unwrap().fixture.clone();
            let a = Word::power(A, 1);
            let c = a.concat(&l).concat(&a.inverse()).concat(&l.inverse()).free_reduce();
            match bounded_triviality(&c, &pres, Budget::default()) {
                TrivialityVerdict::Trivial(t) => assert!(verify_trace(&t, &pres).is_ok(), "{}", knot.id),
                v => panic!("{}: {v:?}", knot.id),
            }
        }
    }

    #[test]
    fn invalid_fractions() {
        assert!(TwoBridgeFraction::new(4, 1).is_err());
        assert!(TwoBridgeFraction::new(9, 3).is_err());
        assert!(TwoBridgeFraction::new(5, 5).is_err());
        assert!(TwoBridgeFraction::new(5, 0).is_err());
    }

    #[test]
    fn six_two_fixture_word() {
        let pres = builtin_knot("6_2").unwrap().presentation();
        let word = pres.longitude_placement(2, Some((0, -2))).unwrap();
        assert_eq!(pres.render(&word), "aabABaBAbABaBBaBAbABaBAb");
        assert_eq!(word.exponent_sum(), -4);
    }

    #[test]
    fn seven_seven_words_match_certificate_text() {
        let pres = builtin_knot("7_7").unwrap().presentation();
        let w = pres.render(&schubert_word(builtin_knot("7_7").unwrap().fraction()));
        assert_eq!(w, "bABaBAbaBabAbaBAbABa");
    }

    #[test]
    fn table_fractions_match_determinants() {
        for k in BUILTIN_KNOTS {
            let det = knot_determinant(&two_bridge_presentation(k.fraction()));
            assert_eq!(det as i64, k.fraction.0, "{}", k.id);
        }
    }

    #[test]
    fn lookup_accepts_subscripts() {
        assert_eq!(builtin_knot("6₂").unwrap().id, "6_2");
        assert_eq!(builtin_knot("7_7").unwrap().fraction, (21, 13));
        assert!(builtin_knot("8_1").is_none());
    }
}
