//! Knot inputs and their Wirtinger presentations.

mod braid;
mod determinant;
mod file;
mod presentation;
mod torus;
mod two_bridge;

pub use braid::{braid_closure_presentation, parse_braid, BraidError, BraidLetter, BraidWord};
pub use determinant::{fox_matrix_at_minus_one, knot_determinant};
pub use file::{PresentationFile, SlotFile};
pub use presentation::{
    longitude_word, LongitudeTemplate, NotationError, PaddingSlot, Presentation, PresentationKind,
};
pub use torus::{torus_presentation, TorusParams};
pub use two_bridge::{
    builtin_knot, schubert_word, two_bridge_presentation, BuiltinKnot, TwoBridgeFraction,
    BUILTIN_KNOTS,
};
