//! Non-distributive L^p spaces over finite submeasured lattices, together
//! with an exact natural-density engine for ultimately periodic sets.
//!
//! The crate is organised bottom-up:
//!
//! * [`lattice`]: finite bounded lattices, law checks and a catalog.
//! * [`quotient`]: the quotient space `c00(L)/Δ`, its order cone and
//!   disjoint refinement of vectors.
//! * [`lp`]: submeasures, the L^p semi-norm, kernel, derived submeasure and
//!   the complementation projections.
//! * [`morphisms`]: embedding isometry checks and algebrification search.
//! * [`density`]: ultimately periodic sets, null oracles, generated
//!   algebras and the diagonal join of increasing chains.
//! * [`framework`]: ordered group models and filter-limit families with
//!   the counting-density family as the reference instance.

pub mod cone;
pub mod density;
pub mod framework;
pub mod lattice;
pub mod linalg;
pub mod lp;
pub mod morphisms;
pub mod quotient;
pub mod rational;
pub mod sample;
pub mod simplex;

pub use lattice::{catalog, Elem, Lattice, LatticeError, LatticeFile, LatticeReport};
pub use quotient::{QuotientError, QuotientSpace, XVector};
pub use rational::Rational;
