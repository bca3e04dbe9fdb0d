use thiserror::Error;

use super::braid::BraidWord;
use super::torus::TorusParams;
use super::two_bridge::TwoBridgeFraction;
use crate::group::Word;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PresentationKind {
    Torus(TorusParams),
    TwoBridge(TwoBridgeFraction),
    BraidClosure(BraidWord),
    Custom,
}

impl PresentationKind {
    pub fn name(&self) -> &'static str {
        match self {
            PresentationKind::Torus(_) => "torus",
            PresentationKind::TwoBridge(_) => "two-bridge",
            PresentationKind::BraidClosure(_) => "braid-closure",
            PresentationKind::Custom => "custom",
        }
    }

    /// True when every generator is a Wirtinger generator, so all generators
    /// are conjugate in the group.
    pub fn is_wirtinger(&self) -> bool {
        !matches!(self, PresentationKind::Custom)
    }
}

/// Place in the longitude fixture where padding may be absorbed instead of
/// being prepended: inserting `gen^j` at `position` represents the same
/// element as prepending `padding^j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PaddingSlot {
    pub position: usize,
    pub gen: usize,
}

/// Rule producing `l_k`: `padding^(k - fixture_k) · fixture`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LongitudeTemplate {
    pub fixture: Word,
    pub fixture_k: i64,
    pub slots: Vec<PaddingSlot>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
    pub padding: usize,
    pub kind: PresentationKind,
    pub longitude: Option<LongitudeTemplate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NotationError {
    #[error("torus parameters ({p},{q}) are invalid: need p, q >= 2, p != q, gcd(p,q) = 1")]
    InvalidTorus { p: i64, q: i64 },
    #[error("two-bridge fraction {p}/{q} is invalid: need odd numerator and 0 < q < p, gcd = 1")]
    InvalidFraction { p: i64, q: i64 },
    #[error("no longitude rule for this {0} presentation")]
    NoLongitude(&'static str),
    #[error("relator {index} has exponent sum {esum}, expected 0")]
    UnbalancedRelator { index: usize, esum: i64 },
    #[error("padding generator {padding} out of range ({count} generators)")]
    BadPadding { padding: usize, count: usize },
    #[error("letter string: {0}")]
    Word(#[from] crate::group::WordParseError),
    #[error("presentation file: {0}")]
    File(String),
    #[error("stored {kind} data does not match regenerated presentation")]
    KindMismatch { kind: &'static str },
}

impl Presentation {
    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    /// Checks the structural invariants: balanced relators, valid padding,
    /// letters in range.
    pub fn validate(&self) -> Result<(), NotationError> {
        let n = self.generator_count();
        if self.padding >= n {
            return Err(NotationError::BadPadding { padding: self.padding, count: n });
        }
        for (index, r) in self.relators.iter().enumerate() {
            let esum = r.exponent_sum();
            if esum != 0 {
                return Err(NotationError::UnbalancedRelator { index, esum });
            }
            if r.max_generator().is_some_and(|g| g >= n) {
                return Err(NotationError::File(format!("relator {index} uses an unknown generator")));
            }
        }
        if let Some(t) = &self.longitude {
            if t.fixture.max_generator().is_some_and(|g| g >= n) {
                return Err(NotationError::File("longitude fixture uses an unknown generator".into()));
            }
            for s in &t.slots {
                if s.gen >= n || s.position > t.fixture.len() {
                    return Err(NotationError::File("padding slot out of range".into()));
                }
            }
        }
        Ok(())
    }

    pub fn render(&self, w: &Word) -> String {
        w.render(self.generator_count())
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, NotationError> {
        Ok(Word::parse(text, self.generator_count())?)
    }

    /// `l_k` with padding placed as `prefix` letters in front and `slot_power`
    /// letters at `slot` (when given). `prefix + slot_power` must equal
    /// `k - fixture_k`.
    pub fn longitude_placement(
        &self,
        prefix: i64,
        slot: Option<(usize, i64)>,
    ) -> Result<Word, NotationError> {
        let t = self.template()?;
        let mut w = Word::power(self.padding, prefix);
        match slot {
            None => w.extend(&t.fixture),
            Some((idx, power)) => {
                let s = t.slots[idx];
                let letters = t.fixture.letters();
                w.extend(&Word::from_letters(letters[..s.position].to_vec()));
                w.extend(&Word::power(s.gen, power));
                w.extend(&Word::from_letters(letters[s.position..].to_vec()));
            }
        }
        Ok(w)
    }

    pub fn template(&self) -> Result<&LongitudeTemplate, NotationError> {
        self.longitude.as_ref().ok_or(NotationError::NoLongitude(self.kind.name()))
    }
}

/// The longitude `l_k` as a word: the template's fixture with the padding
/// generator prepended so that the exponent sum is exactly `k`.
pub fn longitude_word(pres: &Presentation, k: i64) -> Result<Word, NotationError> {
    let t = pres.template()?;
    pres.longitude_placement(k - t.fixture_k, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::{torus_presentation, two_bridge_presentation};

    #[test]
    fn longitude_exponent_sum_is_k_for_builtins() {
        let mut pres = vec![
            torus_presentation(TorusParams::new(3, 2).unwrap()),
            torus_presentation(TorusParams::new(5, 3).unwrap()),
            torus_presentation(TorusParams::new(7, 5).unwrap()),
            two_bridge_presentation(TwoBridgeFraction::new(5, 2).unwrap()),
            two_bridge_presentation(TwoBridgeFraction::new(11, 7).unwrap()),
        ];
        pres.push(
            crate::notation::braid_closure_presentation(&crate::notation::parse_braid("s1 s2^-1 s1 s2^-1").unwrap())
                .unwrap(),
        );
        for p in &pres {
            for k in -50..=50 {
                assert_eq!(longitude_word(p, k).unwrap().exponent_sum(), k);
            }
        }
    }

    #[test]
    fn custom_without_fixture_has_no_longitude() {
        let p = Presentation {
            generators: vec!["a".into()],
            relators: vec![],
            padding: 0,
            kind: PresentationKind::Custom,
            longitude: None,
        };
        assert_eq!(longitude_word(&p, 3), Err(NotationError::NoLongitude("custom")));
    }
}
