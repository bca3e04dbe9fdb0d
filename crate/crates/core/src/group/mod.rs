//! Words, rewriting traces, the bounded word problem, and deletion
//! certificates.

mod certificate;
mod perm;
mod search;
mod trace;
mod triviality;
mod word;

pub use certificate::{
    check_certificate, match_longitude, CertificateFailure, CertificateFile, CertificateReport,
    ConjugateDecomposition, DeletionCertificate, InvariantFailure, LongitudeMatch,
};
pub use perm::{find_perm_reps, perm_reps, Perm, PermRep, RepSearchLimits};
pub use search::{placements, search_certificate, SearchBudget, SearchOutcome, SearchStats};
pub use trace::{apply_step, splice_word, verify_trace, RewritingTrace, Step, TraceError, TraceErrorKind, TraceLetter};
pub use triviality::{
    bounded_triviality, nontriviality_witness, Budget, BudgetReport, TrivialityVerdict, Witness,
};
pub use word::{exponent_sum, free_reduce, Letter, Sign, Word, WordParseError};
