//! Bound windows on framing functions and the operations on them.

mod calculus;
mod sources;
mod table;
mod window;

pub use calculus::{
    convolve, knottedness, mirror, natural_framing, tail_intercept, tighten, NaturalFramingEstimate, Side,
};
pub use sources::{
    certificate_window, fixtures_for, torus_window, unknot_window, Fixture, SourceError, CERTIFICATE_FIXTURES,
    PRESENTATION_FIXTURES,
};
pub use table::{
    full_table, full_table_in, table, table_in, Agreement, KnotMetadata, Orientation, RowCertificate, RowStatus, TableRow, TABLE_METADATA,
};
pub use window::{Bound, FramingWindow, WindowEntry, WindowError, DEFAULT_RANGE, MIRRORED};
