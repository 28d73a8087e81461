//! Exact computation of the pole-order and Hodge filtrations on the
//! cohomology of the complement of a projective hypersurface.
//!
//! Everything reduces to finite-dimensional linear algebra over `Q` on the
//! graded pieces of three objects attached to a reduced homogeneous
//! polynomial `f` of degree `d` in `n + 1` variables:
//!
//! * the Brieskorn module `H_f = Ω^{n+1} / df ∧ dΩ^{n-1}` and its
//!   torsion-free quotient ([`brieskorn`]),
//! * the Jacobian ring `C[x] / (∂f)` ([`jacobian`]),
//! * the local ideals attached to weighted-homogeneous singular points
//!   ([`singularities`]).
//!
//! [`families`] adds one-parameter deformations. The supporting layers are
//! [`gradedpoly`] (polynomials, parser), [`exterior`] (differential forms)
//! and [`linalg`] (exact sparse elimination).

pub mod brieskorn;
pub mod exterior;
pub mod families;
pub mod gradedpoly;
pub mod jacobian;
pub mod linalg;
pub mod singularities;

use thiserror::Error;

pub use gradedpoly::{Monomial, Poly, Rational, WeightVector};
pub use linalg::{ExactMatrix, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Poly(#[from] gradedpoly::PolyError),
    #[error(transparent)]
    Linalg(#[from] linalg::LinalgError),
    #[error(transparent)]
    Exterior(#[from] exterior::ExteriorError),
    #[error("need at least three variables (n >= 2), got {0}")]
    TooFewVariables(usize),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("polynomial is zero or constant")]
    Degenerate,
    #[error("polynomial is not reduced (has a repeated factor)")]
    NotReduced,
    #[error("no stabilization at degree {k}: rank trace {trace:?} after {max_power} powers of f")]
    NoStabilization {
        k: i64,
        max_power: u32,
        trace: Vec<usize>,
    },
    #[error("eigenspace index {i} outside 0..{d}")]
    EigenIndexOutOfRange { i: i64, d: u32 },
    #[error("milnor cross-check failed for i = {i}: {first} vs {second}")]
    MilnorMismatch { i: i64, first: usize, second: usize },
    #[error("jacobian dimensions did not stabilize up to degree {max_degree}; singularities are not isolated")]
    NonIsolated { max_degree: i64 },
    #[error("point {0} is not on the hypersurface")]
    PointNotOnHypersurface(String),
    #[error("point {0} is a smooth point of the hypersurface")]
    SmoothPoint(String),
    #[error("chart validation failed: {0}")]
    ChartValidation(String),
    #[error("hypersurface is singular but no singular points were supplied")]
    MissingCharts,
    #[error("family is not homogeneous of a fixed degree")]
    BadFamily,
    #[error("pole-order dimensions are not constant over the samples")]
    PoleDimsNotConstant,
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
