use std::collections::HashMap;

use thiserror::Error;

use super::presentation::{LongitudeTemplate, Presentation, PresentationKind};
use crate::group::{Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BraidLetter {
    /// Artin generator index, 1-based.
    pub index: usize,
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    pub strands: usize,
    pub letters: Vec<BraidLetter>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: &'static str },
    #[error("generator index 0 at byte {offset}; indices start at 1")]
    ZeroIndex { offset: usize },
    #[error("empty braid word")]
    Empty,
    #[error("braid closure has {components} components; only knots are supported")]
    NotAKnot { components: usize },
}

impl BraidWord {
    pub fn writhe(&self) -> i64 {
        self.letters.iter().map(|l| l.sign as i64).sum()
    }

    /// Space-separated tokens, one per letter.
    pub fn render(&self) -> String {
        self.letters
            .iter()
            .map(|l| if l.sign > 0 { format!("s{}", l.index) } else { format!("s{}^-1", l.index) })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn digits(bytes: &[u8], start: usize) -> usize {
    let mut j = start;
    while j < bytes.len() && bytes[j].is_ascii_digit() {
        j += 1;
    }
    j
}

fn number(text: &str, from: usize, to: usize) -> Result<usize, BraidError> {
    text[from..to]
        .parse()
        .map_err(|_| BraidError::Syntax { offset: from, message: "number too large" })
}

/// Parses `s<i>` and `s<i>^<e>` tokens. Exponents expand into repeated
/// letters.
pub fn parse_braid(text: &str) -> Result<BraidWord, BraidError> {
    let bytes = text.as_bytes();
    let mut letters = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if bytes[i] != b's' {
            return Err(BraidError::Syntax { offset: i, message: "expected 's'" });
        }
        let start = i;
        let end = digits(bytes, i + 1);
        if end == i + 1 {
            return Err(BraidError::Syntax { offset: i + 1, message: "expected generator index" });
        }
        let index = number(text, i + 1, end)?;
        if index == 0 {
            return Err(BraidError::ZeroIndex { offset: start });
        }
        i = end;
        let mut exp: i64 = 1;
        if i < bytes.len() && bytes[i] == b'^' {
            i += 1;
            let neg = i < bytes.len() && bytes[i] == b'-';
            if neg {
                i += 1;
            }
            let end = digits(bytes, i);
            if end == i {
                return Err(BraidError::Syntax { offset: i, message: "expected exponent" });
            }
            exp = number(text, i, end)? as i64;
            if neg {
                exp = -exp;
            }
            i = end;
        }
        let sign = if exp < 0 { -1 } else { 1 };
        for _ in 0..exp.unsigned_abs() {
            letters.push(BraidLetter { index, sign });
        }
    }
    if letters.is_empty() {
        return Err(BraidError::Empty);
    }
    let strands = 1 + letters.iter().map(|l| l.index).max().unwrap_or(0);
    Ok(BraidWord { strands, letters })
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Wirtinger presentation of the closure of `braid`, read top to bottom.
///
/// At `σ_i^ε` the strand moving left to right passes over when `ε = +1`.
/// The under-arc `a` continues as `b = o^{-ε} a o^{ε}` where `o` is the
/// over-arc. The longitude is the blackboard-framed product of `o^{ε}` over
/// the under-crossings met while travelling along the knot from the top of
/// position 0; its exponent sum is the writhe.
pub fn braid_closure_presentation(braid: &BraidWord) -> Result<Presentation, BraidError> {
    let n = braid.strands;
    let mut arc: Vec<usize> = (0..n).collect();
    let mut strand_at: Vec<usize> = (0..n).collect();
    let mut next_arc = n;
    let mut raw_relators: Vec<(usize, usize, usize, i8)> = Vec::new();
    let mut events: Vec<Vec<(usize, i8)>> = vec![Vec::new(); n];
    for l in &braid.letters {
        let (left, right) = (l.index - 1, l.index);
        let (over, under) = if l.sign > 0 { (right, left) } else { (left, right) };
        let o = arc[over];
        let a = arc[under];
        let b = next_arc;
        next_arc += 1;
        raw_relators.push((b, o, a, l.sign));
        events[strand_at[under]].push((o, l.sign));
        arc[under] = b;
        arc.swap(left, right);
        strand_at.swap(left, right);
    }
    let mut uf = UnionFind((0..next_arc).collect());
    for (j, &bottom) in arc.iter().enumerate() {
        uf.union(bottom, j);
    }
    // strand s ends at position end_pos[s] and continues as strand end_pos[s]
    let mut end_pos = vec![0; n];
    for (pos, &s) in strand_at.iter().enumerate() {
        end_pos[s] = pos;
    }
    let mut order = vec![0usize];
    let mut s = end_pos[0];
    while s != 0 {
        order.push(s);
        s = end_pos[s];
    }
    if order.len() != n {
        let mut seen = vec![false; n];
        let mut components = 0;
        for start in 0..n {
            if !seen[start] {
                components += 1;
                let mut s = start;
                while !seen[s] {
                    seen[s] = true;
                    s = end_pos[s];
                }
            }
        }
        return Err(BraidError::NotAKnot { components });
    }

    let mut label: HashMap<usize, usize> = HashMap::new();
    let root0 = uf.find(0);
    label.insert(root0, 0);
    let mut gen_of = |x: usize, uf: &mut UnionFind| -> usize {
        let r = uf.find(x);
        let next = label.len();
        *label.entry(r).or_insert(next)
    };
    let mut relators: Vec<Word> = Vec::new();
    for &(b, o, a, sign) in &raw_relators {
        let (b, o, a) = (gen_of(b, &mut uf), gen_of(o, &mut uf), gen_of(a, &mut uf));
        let (oe, oinv) = if sign > 0 { (Letter::pos(o), Letter::neg(o)) } else { (Letter::neg(o), Letter::pos(o)) };
        let r = Word::from_letters(vec![Letter::neg(b), oinv, Letter::pos(a), oe]).free_reduce();
        if !r.is_empty() && !relators.contains(&r) {
            relators.push(r);
        }
    }
    let mut fixture = Word::new();
    for &s in &order {
        for &(o, sign) in &events[s] {
            let g = gen_of(o, &mut uf);
            fixture.push(if sign > 0 { Letter::pos(g) } else { Letter::neg(g) });
        }
    }
    let count = label.len();
    Ok(Presentation {
        generators: (0..count).map(|i| format!("x{i}")).collect(),
        relators,
        padding: 0,
        kind: PresentationKind::BraidClosure(braid.clone()),
        longitude: Some(LongitudeTemplate { fixture_k: braid.writhe(), fixture, slots: Vec::new() }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let b = parse_braid("s1 s1 s1").unwrap();
        assert_eq!(b.strands, 2);
        assert_eq!(b.letters, vec![BraidLetter { index: 1, sign: 1 }; 3]);
        let b = parse_braid("s1^-1 s2").unwrap();
        assert_eq!(b.strands, 3);
        assert_eq!(
            b.letters,
            vec![BraidLetter { index: 1, sign: -1 }, BraidLetter { index: 2, sign: 1 }]
        );
        assert_eq!(parse_braid("s0"), Err(BraidError::ZeroIndex { offset: 0 }));
        assert_eq!(parse_braid("s1^3").unwrap().letters.len(), 3);
    }

    #[test]
    fn parse_errors_carry_offsets() {
        assert_eq!(
            parse_braid("s1 t2"),
            Err(BraidError::Syntax { offset: 3, message: "expected 's'" })
        );
        assert!(matches!(parse_braid("s1 s"), Err(BraidError::Syntax { offset: 4, .. })));
        assert!(matches!(parse_braid("s2^"), Err(BraidError::Syntax { offset: 3, .. })));
        assert_eq!(parse_braid("  "), Err(BraidError::Empty));
    }

    #[test]
    fn render_round_trips() {
        let b = parse_braid("s1^2 s2^-1 s1 s2^-1").unwrap();
        assert_eq!(parse_braid(&b.render()).unwrap(), b);
    }

    #[test]
    fn trefoil_closure() {
        let pres = braid_closure_presentation(&parse_braid("s1 s1 s1").unwrap()).unwrap();
        assert_eq!(pres.generator_count(), 3);
        assert_eq!(pres.template().unwrap().fixture_k, 3);
        for r in &pres.relators {
            assert_eq!(r.exponent_sum(), 0);
        }
    }

    #[test]
    fn link_closure_rejected() {
        let err = braid_closure_presentation(&parse_braid("s1 s1").unwrap()).unwrap_err();
        assert_eq!(err, BraidError::NotAKnot { components: 2 });
    }

    #[test]
    fn single_crossing_closes_to_unknot() {
        let pres = braid_closure_presentation(&parse_braid("s1").unwrap()).unwrap();
        assert_eq!(pres.generator_count(), 1);
        assert!(pres.relators.is_empty());
    }
}
