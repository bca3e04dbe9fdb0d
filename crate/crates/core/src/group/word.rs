//! Letters and words over a presentation's generators.
//!
//! A letter packs a generator index and a sign into one `u32` (low bit set
//! for inverses), so words are cheap to hash and compare during rewriting.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn from_value(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Pos),
            -1 => Some(Sign::Neg),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u32);

impl Letter {
    pub fn new(gen: usize, sign: Sign) -> Letter {
        let bit = match sign {
            Sign::Pos => 0,
            Sign::Neg => 1,
        };
        Letter(((gen as u32) << 1) | bit)
    }

    pub fn pos(gen: usize) -> Letter {
        Letter::new(gen, Sign::Pos)
    }

    pub fn neg(gen: usize) -> Letter {
        Letter::new(gen, Sign::Neg)
    }

    pub fn gen(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn sign(self) -> Sign {
        if self.0 & 1 == 0 {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    pub fn exponent(self) -> i64 {
        self.sign().value()
    }

    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.0 ^ other.0 == 1
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign() {
            Sign::Pos => write!(f, "x{}", self.gen()),
            Sign::Neg => write!(f, "X{}", self.gen()),
        }
    }
}

/// A word in the generators and their inverses. Words are not assumed to be
/// freely reduced.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new() -> Word {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    /// Builds a word from `(generator, exponent)` pairs, expanding powers.
    pub fn from_powers(powers: &[(usize, i64)]) -> Word {
        let mut letters = Vec::new();
        for &(gen, e) in powers {
            let sign = if e >= 0 { Sign::Pos } else { Sign::Neg };
            letters.extend(std::iter::repeat(Letter::new(gen, sign)).take(e.unsigned_abs() as usize));
        }
        Word(letters)
    }

    pub fn power(gen: usize, e: i64) -> Word {
        Word::from_powers(&[(gen, e)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    pub fn extend(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        out.extend_from_slice(&other.0);
        Word(out)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn exponent_sum(&self) -> i64 {
        self.0.iter().map(|l| l.exponent()).sum()
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.gen()).max()
    }

    /// Cancels adjacent inverse pairs until none remain.
    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            match out.last() {
                Some(&top) if top.cancels(l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word(out)
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    /// Cyclic rotation: `w[r..] w[..r]`.
    pub fn rotate(&self, r: usize) -> Word {
        let n = self.0.len();
        if n == 0 {
            return Word::new();
        }
        let r = r % n;
        let mut out = self.0[r..].to_vec();
        out.extend_from_slice(&self.0[..r]);
        Word(out)
    }

    /// Removes the given positions (which must be valid indices).
    pub fn without_positions(&self, positions: &[usize]) -> Word {
        let mut skip = vec![false; self.0.len()];
        for &p in positions {
            skip[p] = true;
        }
        Word(
            self.0
                .iter()
                .zip(skip)
                .filter(|(_, s)| !s)
                .map(|(l, _)| *l)
                .collect(),
        )
    }

    /// Renders the word in the letter-string convention: lowercase letters
    /// for generators and uppercase for inverses when there are at most 26
    /// generators, `x<i>` / `X<i>` tokens otherwise.
    pub fn render(&self, generator_count: usize) -> String {
        if generator_count <= 26 {
            self.0
                .iter()
                .map(|l| {
                    let c = (b'a' + l.gen() as u8) as char;
                    match l.sign() {
                        Sign::Pos => c,
                        Sign::Neg => c.to_ascii_uppercase(),
                    }
                })
                .collect()
        } else {
            self.0
                .iter()
                .map(|l| match l.sign() {
                    Sign::Pos => format!("x{}", l.gen()),
                    Sign::Neg => format!("X{}", l.gen()),
                })
                .collect::<Vec<_>>()
                .join(" ")
        }
    }

    /// Parses a letter string. Accepts single letters (`a`..`z`, uppercase
    /// for inverses) and `x<i>` / `X<i>` tokens; whitespace is ignored.
    /// Every generator index must be below `generator_count`.
    pub fn parse(text: &str, generator_count: usize) -> Result<Word, WordParseError> {
        let bytes = text.as_bytes();
        let mut letters = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            if c.is_ascii_whitespace() {
                i += 1;
                continue;
            }
            if !c.is_ascii_alphabetic() {
                return Err(WordParseError::UnexpectedChar { offset: i, ch: c as char });
            }
            let sign = if c.is_ascii_uppercase() { Sign::Neg } else { Sign::Pos };
            let (gen, next) = if (c == b'x' || c == b'X')
                && bytes.get(i + 1).is_some_and(|d| d.is_ascii_digit())
            {
                let mut j = i + 1;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                let gen: usize = text[i + 1..j]
                    .parse()
                    .map_err(|_| WordParseError::UnexpectedChar { offset: i, ch: c as char })?;
                (gen, j)
            } else {
                ((c.to_ascii_lowercase() - b'a') as usize, i + 1)
            };
            if gen >= generator_count {
                return Err(WordParseError::GeneratorOutOfRange { offset: i, gen, generator_count });
            }
            letters.push(Letter::new(gen, sign));
            i = next;
        }
        Ok(Word(letters))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        for l in &self.0 {
            write!(f, "{l:?}")?;
        }
        Ok(())
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Word {
        Word(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordParseError {
    #[error("unexpected character {ch:?} at byte {offset}")]
    UnexpectedChar { offset: usize, ch: char },
    #[error("generator {gen} at byte {offset} is out of range (presentation has {generator_count})")]
    GeneratorOutOfRange { offset: usize, gen: usize, generator_count: usize },
}

/// Free reduction (see [`Word::free_reduce`]).
pub fn free_reduce(w: &Word) -> Word {
    w.free_reduce()
}

/// Sum of the exponents of all letters.
pub fn exponent_sum(w: &Word) -> i64 {
    w.exponent_sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x(i: usize) -> Letter {
        Letter::pos(i)
    }
    fn xi(i: usize) -> Letter {
        Letter::neg(i)
    }

    #[test]
    fn cancelling_pair_reduces_to_empty() {
        let w = Word::from_letters(vec![x(0), xi(0)]);
        assert!(free_reduce(&w).is_empty());
    }

    #[test]
    fn single_cascade() {
        let w = Word::from_letters(vec![x(1), x(2), xi(2), x(2)]);
        assert_eq!(free_reduce(&w), Word::from_letters(vec![x(1), x(2)]));
    }

    #[test]
    fn reduced_word_is_fixed() {
        let w = Word::from_letters(vec![x(1), xi(0), x(2), x(2)]);
        assert_eq!(free_reduce(&w), w);
    }

    #[test]
    fn exponent_sums() {
        let w = Word::from_letters(vec![x(0), x(0), x(0), xi(1), xi(0), xi(2)]);
        assert_eq!(exponent_sum(&w), 0);
        assert_eq!(exponent_sum(&Word::new()), 0);
    }

    #[test]
    fn parse_and_render_letters() {
        let w = Word::parse("aBc A", 3).unwrap();
        assert_eq!(w, Word::from_letters(vec![x(0), xi(1), x(2), xi(0)]));
        assert_eq!(w.render(3), "aBcA");
        let t = Word::parse("x27 X3", 30).unwrap();
        assert_eq!(t.render(30), "x27 X3");
        assert!(matches!(
            Word::parse("abz", 3),
            Err(WordParseError::GeneratorOutOfRange { offset: 2, .. })
        ));
        assert!(matches!(Word::parse("a1", 3), Err(WordParseError::UnexpectedChar { offset: 1, .. })));
    }

    fn arb_word(gens: usize, max_len: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec((0..gens, any::<bool>()), 0..max_len).prop_map(|v| {
            v.into_iter()
                .map(|(g, neg)| if neg { Letter::neg(g) } else { Letter::pos(g) })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn free_reduce_is_idempotent_and_shortening(w in arb_word(4, 40)) {
            let r = w.free_reduce();
            prop_assert!(r.len() <= w.len());
            prop_assert!(r.is_freely_reduced());
            prop_assert_eq!(r.free_reduce(), r.clone());
            prop_assert_eq!(r.exponent_sum(), w.exponent_sum());
        }

        #[test]
        fn word_times_inverse_is_freely_trivial(w in arb_word(5, 30)) {
            prop_assert!(w.concat(&w.inverse()).free_reduce().is_empty());
        }

        #[test]
        fn render_parse_round_trip(w in arb_word(30, 20)) {
            prop_assert_eq!(Word::parse(&w.render(30), 30).unwrap(), w.clone());
            prop_assert_eq!(Word::parse(&w.render(5.max(w.max_generator().map_or(0, |g| g + 1))), 26).ok(),
                if w.max_generator().map_or(true, |g| g < 26) { Some(w.clone()) } else { None });
        }
    }
}
