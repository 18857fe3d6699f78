//! Exact arithmetic for cotangent-product sums over prime moduli, Dirichlet
//! L-values at s = 1, and the rational kernel spaces of the associated
//! vanishing problems, together with the structured-determinant and moment
//! verifications built on them.

pub mod analytics;
pub mod arith;
pub mod cotsum;
pub mod error;
pub mod exactalg;
pub mod lseries;
pub mod par;
pub mod structmat;
pub mod suites;
pub mod vanish;

pub use error::{Error, Result};
pub use exactalg::{ComplexApprox, Ctx, CycloElem, GaloisMap, Rational};

/// Default working decimal precision.
pub const DEFAULT_DIGITS: usize = 50;
