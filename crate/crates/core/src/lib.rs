//! Exact characteristic numbers of Hamiltonian circle actions on toric
//! manifolds presented as symplectic quotients of `C^m`.
//!
//! A manifold is given by an integer weight matrix `W` (columns `w_j ∈ Z^r`)
//! and a rational level `τ ∈ Q^r`. [`delzant`] turns that into a moment
//! polytope with one affine function per homogeneous coordinate,
//! [`polytope`] integrates affine functions over the polytope and its facets,
//! and [`invariant`] assembles the characteristic number of each coordinate
//! rotation loop. A nonzero value certifies that `π₁(Ham(M, ω))` contains an
//! infinite cyclic subgroup.
//!
//! ```
//! use toric_ham::{build_model, invariant_coordinate, rat, IntMatrix};
//!
//! // one-point blow-up of CP³ at τ = 2, μ = 1
//! let w = IntMatrix::from_rows(&[[1, 1, 1, 0, 1], [0, 0, 1, 1, 0]]);
//! let model = build_model(&w, &[rat(2, 1), rat(1, 1)]).unwrap();
//! let report = invariant_coordinate(&model, 0).unwrap();
//! assert_eq!(report.invariant, rat(-1, 2));
//! ```

pub mod cli;
pub mod delzant;
pub mod feasibility;
pub mod invariant;
pub mod linalg;
pub mod oracles;
pub mod polytope;
pub mod report;
pub mod selftest;

pub use delzant::{build_model, build_model_with, check_assumptions, DelzantModel, ModelError};
pub use invariant::{
    invariant_coordinate, invariant_loop, normalized_constant, InvariantReport, LoopSpec, Verdict,
};
pub use linalg::{format_rational, parse_rational, rat, IntMatrix, Rational};
pub use polytope::{AffineForm, Polytope};
