//! Rewriting traces: replayable proofs that two words are equal in a
//! finitely presented group.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::word::{Letter, Word};
use crate::notation::Presentation;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Step {
    /// Insert `letter letter⁻¹` before `position`.
    FreeInsert { position: usize, letter: TraceLetter },
    /// Delete the cancelling pair at `position`, `position + 1`.
    FreeDelete { position: usize },
    /// Insert the cyclic rotation `rotation` of relator `relator` (or of its
    /// inverse when `inverse` is set) before `position`.
    Splice {
        relator: usize,
        inverse: bool,
        rotation: usize,
        position: usize,
    },
}

/// Letter as stored in trace files: generator index and ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceLetter {
    pub gen: usize,
    pub sign: i8,
}

impl TraceLetter {
    pub fn from_letter(l: Letter) -> TraceLetter {
        TraceLetter { gen: l.gen(), sign: l.exponent() as i8 }
    }

    pub fn to_letter(self) -> Option<Letter> {
        match self.sign {
            1 => Some(Letter::pos(self.gen)),
            -1 => Some(Letter::neg(self.gen)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewritingTrace {
    pub start: Word,
    pub steps: Vec<Step>,
    pub end: Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {step}: {kind}")]
pub struct TraceError {
    pub step: usize,
    pub kind: TraceErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceErrorKind {
    #[error("position {position} out of range for word of length {len}")]
    PositionOutOfRange { position: usize, len: usize },
    #[error("letters at {position} and {} do not cancel", position + 1)]
    NotCancelling { position: usize },
    #[error("relator {0} does not exist")]
    UnknownRelator(usize),
    #[error("rotation {rotation} out of range for relator of length {len}")]
    RotationOutOfRange { rotation: usize, len: usize },
    #[error("letter has invalid sign or generator")]
    BadLetter,
    #[error("replay ends at a different word than recorded")]
    EndMismatch,
}

/// The word inserted by a splice step.
pub fn splice_word(
    relators: &[Word],
    relator: usize,
    inverse: bool,
    rotation: usize,
) -> Result<Word, TraceErrorKind> {
    let r = relators.get(relator).ok_or(TraceErrorKind::UnknownRelator(relator))?;
    let base = if inverse { r.inverse() } else { r.clone() };
    if rotation >= base.len().max(1) {
        return Err(TraceErrorKind::RotationOutOfRange { rotation, len: base.len() });
    }
    Ok(base.rotate(rotation))
}

/// Applies a single step to `word` in place.
pub fn apply_step(
    word: &mut Vec<Letter>,
    step: &Step,
    relators: &[Word],
    generator_count: usize,
) -> Result<(), TraceErrorKind> {
    match *step {
        Step::FreeInsert { position, letter } => {
            if position > word.len() {
                return Err(TraceErrorKind::PositionOutOfRange { position, len: word.len() });
            }
            let l = letter.to_letter().ok_or(TraceErrorKind::BadLetter)?;
            if l.gen() >= generator_count {
                return Err(TraceErrorKind::BadLetter);
            }
            word.splice(position..position, [l, l.inverse()]);
        }
        Step::FreeDelete { position } => {
            if position + 1 >= word.len() {
                return Err(TraceErrorKind::PositionOutOfRange { position, len: word.len() });
            }
            if !word[position].cancels(word[position + 1]) {
                return Err(TraceErrorKind::NotCancelling { position });
            }
            word.drain(position..position + 2);
        }
        Step::Splice { relator, inverse, rotation, position } => {
            if position > word.len() {
                return Err(TraceErrorKind::PositionOutOfRange { position, len: word.len() });
            }
            let ins = splice_word(relators, relator, inverse, rotation)?;
            word.splice(position..position, ins.letters().iter().copied());
        }
    }
    Ok(())
}

/// Replays the trace against `pres`; fails with the index of the first bad
/// step (or `steps.len()` when only the end word disagrees).
pub fn verify_trace(t: &RewritingTrace, pres: &Presentation) -> Result<(), TraceError> {
    let mut word = t.start.letters().to_vec();
    for (i, step) in t.steps.iter().enumerate() {
        apply_step(&mut word, step, &pres.relators, pres.generator_count())
            .map_err(|kind| TraceError { step: i, kind })?;
    }
    if word != t.end.letters() {
        return Err(TraceError { step: t.steps.len(), kind: TraceErrorKind::EndMismatch });
    }
    Ok(())
}

impl RewritingTrace {
    /// The trivial trace on a word.
    pub fn identity(w: Word) -> RewritingTrace {
        RewritingTrace { start: w.clone(), steps: Vec::new(), end: w }
    }

    /// Free reduction of `w` recorded as deletions.
    pub fn free_reduction(w: &Word) -> RewritingTrace {
        let mut steps = Vec::new();
        let end = reduce_recording(w.letters(), &mut steps);
        RewritingTrace { start: w.clone(), steps, end: Word::from_letters(end) }
    }

    /// Appends `other`, which must start where `self` ends.
    pub fn then(mut self, other: RewritingTrace) -> RewritingTrace {
        debug_assert_eq!(self.end, other.start);
        self.steps.extend(other.steps);
        self.end = other.end;
        self
    }

    /// Lifts a trace on `core` to one on `prefix · core · suffix`.
    pub fn embed(&self, prefix: &Word, suffix: &Word) -> RewritingTrace {
        let off = prefix.len();
        let steps = self
            .steps
            .iter()
            .map(|s| match *s {
                Step::FreeInsert { position, letter } => {
                    Step::FreeInsert { position: position + off, letter }
                }
                Step::FreeDelete { position } => Step::FreeDelete { position: position + off },
                Step::Splice { relator, inverse, rotation, position } => {
                    Step::Splice { relator, inverse, rotation, position: position + off }
                }
            })
            .collect();
        RewritingTrace {
            start: prefix.concat(&self.start).concat(suffix),
            steps,
            end: prefix.concat(&self.end).concat(suffix),
        }
    }
}

/// Stack-based free reduction that records each deletion position relative
/// to the word as it stands at that moment.
pub(crate) fn reduce_recording(letters: &[Letter], steps: &mut Vec<Step>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for &l in letters {
        match out.last() {
            Some(&top) if top.cancels(l) => {
                steps.push(Step::FreeDelete { position: out.len() - 1 });
                out.pop();
            }
            _ => out.push(l),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::{torus_presentation, TorusParams};

    fn trefoil() -> Presentation {
        torus_presentation(TorusParams::new(3, 2).unwrap())
    }

    #[test]
    fn empty_trace_on_empty_word() {
        let t = RewritingTrace::identity(Word::new());
        assert!(verify_trace(&t, &trefoil()).is_ok());
    }

    #[test]
    fn relator_splice_then_reduction() {
        // relator 0 of the (3,2) presentation is x1 x0 x1⁻¹ x2⁻¹; splicing its
        // inverse x2 x1 x0⁻¹ x1⁻¹ in front rewrites x1 x0 to x2 x1.
        let pres = trefoil();
        assert_eq!(pres.relators[0], Word::parse("baBC", 3).unwrap());
        let start = Word::parse("ba", 3).unwrap();
        let steps = vec![
            Step::Splice { relator: 0, inverse: true, rotation: 0, position: 0 },
            Step::FreeDelete { position: 3 },
            Step::FreeDelete { position: 2 },
        ];
        let t = RewritingTrace { start, steps, end: Word::parse("cb", 3).unwrap() };
        assert_eq!(verify_trace(&t, &pres), Ok(()));
    }

    #[test]
    fn off_by_one_splice_is_reported() {
        let pres = trefoil();
        let start = Word::parse("ba", 3).unwrap();
        let steps = vec![
            Step::Splice { relator: 0, inverse: true, rotation: 0, position: 1 },
            Step::FreeDelete { position: 3 },
            Step::FreeDelete { position: 2 },
        ];
        let t = RewritingTrace { start, steps, end: Word::parse("cb", 3).unwrap() };
        let err = verify_trace(&t, &pres).unwrap_err();
        assert_eq!(err.step, 1);
    }

    #[test]
    fn free_reduction_trace_replays() {
        let w = Word::parse("abBcCAab", 3).unwrap();
        let t = RewritingTrace::free_reduction(&w);
        assert_eq!(t.end, Word::parse("ab", 3).unwrap());
        assert!(verify_trace(&t, &trefoil()).is_ok());
    }

    #[test]
    fn embedded_trace_replays() {
        let core = Word::parse("cC", 3).unwrap();
        let t = RewritingTrace::free_reduction(&core).embed(&Word::parse("a", 3).unwrap(), &Word::parse("A", 3).unwrap());
        assert_eq!(t.end, Word::parse("aA", 3).unwrap());
        assert!(verify_trace(&t, &trefoil()).is_ok());
    }
}
