//! Natural density on ultimately periodic sets and certificate-backed null
//! sets, generated algebras, d-system checks and the diagonal join of
//! increasing chains.

mod algebra;
mod diagonal;
mod dsystem;
mod oracle;
mod parse;
mod set;
mod upset;

pub use algebra::{
    generate_algebra, AdditivityFailure, AdditivityReport, GeneratedAlgebra, MAX_ATOMS,
    MAX_MEMBER_ATOMS,
};
pub use diagonal::{
    default_schedule, diagonal_join, diagonal_join_with_cutoffs, dyadic_chain, DiagonalJoin,
    DiagonalReport,
};
pub use dsystem::{dsystem_check, DSystemReport, DSystemViolation};
pub use oracle::{is_prime, isqrt, NullOracle};
pub use parse::parse_set;
pub use set::DensitySet;
pub use upset::{UPSet, MODULUS_CAP};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DensityError {
    #[error("invalid set: {0}")]
    InvalidSet(String),
    #[error("unsupported combination: {0}")]
    UnsupportedCombination(String),
    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("algebra has {count} atoms, above the limit")]
    AtomExplosion { count: usize },
    #[error("chain is not increasing modulo null sets at step {0}")]
    NotIncreasing(usize),
    #[error("invalid epsilon schedule: {0}")]
    ScheduleInvalid(String),
}
