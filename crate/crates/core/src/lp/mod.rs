//! The L^p(L, φ) semi-norm on the quotient space and the structures built
//! from it: kernel, derived submeasure `φ*`, complementation projections
//! and ordered-space checks.

mod convex;
mod kernel;
mod norm;
mod order;
mod phistar;
mod projection;
mod submeasure;
mod verify;

use std::fmt;

use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::lattice::{Lattice, LatticeError};
use crate::quotient::QuotientError;
use crate::rational::{format_rational, parse_rational, ratio, Rational};

pub use convex::{solve_power_program, PowerProgram, PowerSolution};
pub use kernel::kernel_basis;
pub use norm::{
    default_family_cap, meet_zero_families, NormContext, NormResult, NormValue, WitnessTerm,
    DEFAULT_FAMILY_CAP, FAMILY_CAP_ENV, P_GT1_RELATIVE_GAP,
};
pub use order::{ordered_space_check, OrderFailure, OrderedSpaceReport};
pub use phistar::derive_phistar;
pub use projection::{
    build_projections, check_contractivity, check_pythagoras, ContractivityReport, HypothesisEntry,
    ProjectionPair, PythagorasReport, SampleFailure,
};
pub use submeasure::{catalog_submeasure, check_submeasure, Submeasure, SubmeasureFlags};
pub use verify::{verify_examples, ExampleCheck, EXAMPLE_PAIRS};

/// Relative tolerance for comparisons between p > 1 norm values.
pub const P_GT1_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NormError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error("submeasure value for {0:?} is missing")]
    MissingElement(String),
    #[error("submeasure value {value} for {element:?} is outside [0, 1]")]
    ValueOutOfRange { element: String, value: String },
    #[error("submeasure must satisfy φ(0) = 0 and φ(1) = 1")]
    BadEndpoints,
    #[error("exponent {0} is outside the supported range [1, 16]")]
    BadExponent(String),
    #[error("`any` dominating families are only supported at p = 1")]
    SemanticsUnsupported,
    #[error("more than {cap} maximal meet-zero families")]
    FamilyExplosion { cap: usize },
    #[error("projection basis for {0:?} does not span X")]
    NoSplitBasis(String),
    #[error("lattice is not orthomodular")]
    NotOrthomodular,
    #[error("convex solver failed to reach the requested gap")]
    SolverStalled,
}

/// Exponent `p`, a rational in `[1, 16]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exponent(Rational);

impl Exponent {
    pub fn new(p: Rational) -> Result<Self, NormError> {
        if p < Rational::one() || p > ratio(16, 1) {
            return Err(NormError::BadExponent(format_rational(&p)));
        }
        Ok(Exponent(p))
    }

    pub fn one() -> Self {
        Exponent(Rational::one())
    }

    pub fn integer(p: i64) -> Result<Self, NormError> {
        Self::new(ratio(p, 1))
    }

    pub fn parse(text: &str) -> Result<Self, NormError> {
        let q = parse_rational(text).map_err(|_| NormError::BadExponent(text.to_string()))?;
        Self::new(q)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn as_f64(&self) -> f64 {
        self.0.to_f64().expect("exponent in [1, 16]")
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}", format_rational(&self.0))
        }
    }
}

/// Which dominating families the norm infimum ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    /// Distinct elements with pairwise meet `0`.
    #[default]
    Disjoint,
    /// Any distinct elements (p = 1 only).
    Any,
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Semantics::Disjoint => "disjoint",
            Semantics::Any => "any",
        })
    }
}

impl std::str::FromStr for Semantics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "disjoint" => Ok(Semantics::Disjoint),
            "any" => Ok(Semantics::Any),
            other => Err(format!("unknown semantics {other:?}")),
        }
    }
}

pub(crate) fn require_orthomodular(l: &Lattice) -> Result<(), NormError> {
    if l.is_orthomodular() {
        Ok(())
    } else {
        Err(NormError::NotOrthomodular)
    }
}
