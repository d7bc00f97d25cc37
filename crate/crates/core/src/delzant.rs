//! Moment polytopes of symplectic quotients `{z ∈ C^m : π Σ |z_j|² w_j = τ} / T^r`.
//!
//! Coordinates on the polytope are kernel-slice coordinates: with `Q` a basis
//! of the integer kernel of `W` and `s0` any solution of `W·s0 = τ`, the moment
//! coordinate `π|z_k|²` is the affine function `s_k(x) = s0[k] + <row_k(Q), x>`
//! and the polytope is `{x : s_k(x) >= 0 for all k}`. Inequality `k` always
//! corresponds to coordinate `z_k`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::feasibility;
use crate::linalg::{self, format_rational, rat_int, IntMatrix, LinalgError, Rational};
use crate::polytope::{Facet, Inequality, Polytope, PolytopeError};

pub use crate::polytope::AffineForm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("weight vectors do not satisfy the standing assumptions: {0}")]
    Assumptions(AssumptionReport),
    #[error("level tau is not in the span of the weights (no solution of W·s = tau)")]
    NoSolution,
    #[error("moment polytope is empty for this level")]
    EmptyPolytope,
    #[error("moment polytope is unbounded")]
    UnboundedPolytope,
    #[error("level is not a regular value: {detail}")]
    NotFullDimensional { detail: String },
    #[error("{0}")]
    Shape(String),
}

/// Outcome of checking the weight matrix: full row rank, and all weights in
/// an open half space (witnessed by `xi` with `<w_j, xi> > 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssumptionReport {
    pub rows: usize,
    pub rank: usize,
    pub half_space_witness: Option<Vec<Rational>>,
}

impl AssumptionReport {
    pub fn rank_ok(&self) -> bool {
        self.rank == self.rows
    }

    pub fn half_space_ok(&self) -> bool {
        self.half_space_witness.is_some()
    }

    pub fn passed(&self) -> bool {
        self.rank_ok() && self.half_space_ok()
    }
}

impl fmt::Display for AssumptionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut problems = Vec::new();
        if !self.rank_ok() {
            problems.push(format!(
                "weights do not span R^{} (rank {})",
                self.rows, self.rank
            ));
        }
        if !self.half_space_ok() {
            problems.push("weights do not lie in an open half space".to_string());
        }
        if problems.is_empty() {
            write!(f, "ok")
        } else {
            write!(f, "{}", problems.join("; "))
        }
    }
}

pub fn check_assumptions(w: &IntMatrix) -> AssumptionReport {
    let columns: Vec<Vec<Rational>> = (0..w.cols())
        .map(|j| w.column(j).iter().map(rat_int).collect())
        .collect();
    AssumptionReport {
        rows: w.rows(),
        rank: w.rank(),
        half_space_witness: feasibility::open_half_space_witness(&columns, w.rows()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Smoothness {
    /// Simple, and the primitive normals at every vertex form a lattice basis.
    Delzant,
    /// Simple but some vertex cone is not unimodular (orbifold point).
    SimpleOnly,
    NonSimple,
}

impl fmt::Display for Smoothness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Smoothness::Delzant => "delzant",
            Smoothness::SimpleOnly => "simple-only",
            Smoothness::NonSimple => "non-simple",
        })
    }
}

/// A quotient `(W, τ)` together with a concrete slice chart and its polytope.
#[derive(Debug, Clone)]
pub struct DelzantModel {
    weights: IntMatrix,
    tau: Vec<Rational>,
    kernel: IntMatrix,
    s0: Vec<Rational>,
    slices: Vec<AffineForm>,
    /// content of `row_k(Q)`; zero for a row that vanishes identically
    scales: Vec<BigInt>,
    polytope: Polytope,
}

/// Builds the model with the default kernel basis and particular solution.
pub fn build_model(w: &IntMatrix, tau: &[Rational]) -> Result<DelzantModel, ModelError> {
    let report = check_assumptions(w);
    if !report.passed() {
        return Err(ModelError::Assumptions(report));
    }
    let s0 = linalg::solve_rational(w, tau).map_err(|e| match e {
        LinalgError::NoSolution => ModelError::NoSolution,
        other => ModelError::Shape(other.to_string()),
    })?;
    let kernel = linalg::integer_kernel(w);
    assemble(w, tau, kernel, s0)
}

/// Builds the model from a caller-chosen kernel basis and particular solution.
/// Both are validated: `W·Q = 0`, `Q` has `m - r` independent columns, and
/// `W·s0 = τ`.
pub fn build_model_with(
    w: &IntMatrix,
    tau: &[Rational],
    kernel: IntMatrix,
    s0: Vec<Rational>,
) -> Result<DelzantModel, ModelError> {
    let report = check_assumptions(w);
    if !report.passed() {
        return Err(ModelError::Assumptions(report));
    }
    let m = w.cols();
    if kernel.rows() != m || kernel.cols() != m - w.rows() || s0.len() != m {
        return Err(ModelError::Shape(format!(
            "kernel must be {m}x{} and s0 of length {m}",
            m - w.rows()
        )));
    }
    if !w
        .mul(&kernel)
        .map_err(|e| ModelError::Shape(e.to_string()))?
        .is_zero()
        || kernel.rank() != kernel.cols()
    {
        return Err(ModelError::Shape(
            "columns of Q do not form a kernel basis of W".into(),
        ));
    }
    let ws0: Vec<Rational> = (0..w.rows())
        .map(|i| linalg::dot_int_rat(w.row(i), &s0))
        .collect();
    if ws0 != tau {
        return Err(ModelError::NoSolution);
    }
    assemble(w, tau, kernel, s0)
}

fn assemble(
    w: &IntMatrix,
    tau: &[Rational],
    kernel: IntMatrix,
    s0: Vec<Rational>,
) -> Result<DelzantModel, ModelError> {
    let m = w.cols();
    let n = kernel.cols();
    let mut slices = Vec::with_capacity(m);
    let mut scales = Vec::with_capacity(m);
    let mut inequalities = Vec::with_capacity(m);
    for (k, s) in s0.iter().enumerate() {
        let row = kernel.row(k);
        slices.push(AffineForm::new(
            s.clone(),
            row.iter().map(rat_int).collect(),
        ));
        match linalg::primitive(row) {
            Ok((normal, g)) => {
                inequalities.push(Inequality::new(normal, s / rat_int(&g)));
                scales.push(g);
            }
            Err(_) => {
                // |z_k|² is constant on the level set
                if s.is_zero() {
                    return Err(ModelError::NotFullDimensional {
                        detail: format!("|z_{}|² vanishes identically", k + 1),
                    });
                }
                inequalities.push(Inequality::new(vec![BigInt::zero(); n], s.clone()));
                scales.push(BigInt::zero());
            }
        }
    }
    let polytope = Polytope::new(n, inequalities).map_err(|e| match e {
        PolytopeError::Empty => ModelError::EmptyPolytope,
        PolytopeError::Unbounded(_) => ModelError::UnboundedPolytope,
        other => ModelError::Shape(other.to_string()),
    })?;
    if !polytope.is_full_dimensional() {
        return Err(ModelError::NotFullDimensional {
            detail: format!(
                "moment polytope has dimension {} < {n}",
                polytope.affine_dim()
            ),
        });
    }
    Ok(DelzantModel {
        weights: w.clone(),
        tau: tau.to_vec(),
        kernel,
        s0,
        slices,
        scales,
        polytope,
    })
}

impl DelzantModel {
    /// Number of homogeneous coordinates `m`.
    pub fn coordinates(&self) -> usize {
        self.weights.cols()
    }

    /// Rank `r` of the quotient torus.
    pub fn torus_rank(&self) -> usize {
        self.weights.rows()
    }

    /// Polytope dimension `n = m - r`; the manifold has real dimension `2n`.
    pub fn dim(&self) -> usize {
        self.kernel.cols()
    }

    pub fn weights(&self) -> &IntMatrix {
        &self.weights
    }

    pub fn tau(&self) -> &[Rational] {
        &self.tau
    }

    pub fn kernel(&self) -> &IntMatrix {
        &self.kernel
    }

    pub fn particular_solution(&self) -> &[Rational] {
        &self.s0
    }

    pub fn slices(&self) -> &[AffineForm] {
        &self.slices
    }

    pub fn slice(&self, k: usize) -> &AffineForm {
        &self.slices[k]
    }

    /// Content of the kernel row behind facet `k` (`s_k = scale · (offset + <u, x>)`).
    pub fn scale(&self, k: usize) -> &BigInt {
        &self.scales[k]
    }

    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }

    pub fn facet(&self, k: usize) -> Facet {
        self.polytope.facet(k)
    }

    /// Facets that never become active (their coordinate never vanishes).
    pub fn redundant_facets(&self) -> Vec<usize> {
        self.polytope
            .facets()
            .into_iter()
            .filter(|f| f.kind != crate::polytope::FacetKind::Regular)
            .map(|f| f.index)
            .collect()
    }

    pub fn smoothness_class(&self) -> Smoothness {
        let n = self.dim();
        let ineqs = self.polytope.inequalities();
        let mut simple = true;
        let mut unimodular = true;
        for tight in self.polytope.incidence() {
            if tight.len() != n {
                simple = false;
                continue;
            }
            let rows: Vec<Vec<Rational>> = tight
                .iter()
                .map(|&k| ineqs[k].normal.iter().map(rat_int).collect())
                .collect();
            let det = linalg::determinant(&rows).expect("square");
            if !det.abs().is_one() {
                unimodular = false;
            }
        }
        match (simple, unimodular) {
            (false, _) => Smoothness::NonSimple,
            (true, true) => Smoothness::Delzant,
            (true, false) => Smoothness::SimpleOnly,
        }
    }

    pub fn describe(&self) -> String {
        let tau: Vec<String> = self.tau.iter().map(format_rational).collect();
        format!(
            "m = {}, r = {}, n = {}, tau = ({})",
            self.coordinates(),
            self.torus_rank(),
            self.dim(),
            tau.join(", ")
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn blowup_w() -> IntMatrix {
        IntMatrix::from_rows(&[[1, 1, 1, 0, 1], [0, 0, 1, 1, 0]])
    }

    #[test]
    fn assumption_examples() {
        let r = check_assumptions(&IntMatrix::from_rows(&[[1, 1, 1]]));
        assert!(r.passed());
        assert_eq!(r.half_space_witness, Some(vec![rat(1, 1)]));

        let r = check_assumptions(&blowup_w());
        assert!(r.passed());
        let xi = r.half_space_witness.unwrap();
        for j in 0..5 {
            let w = blowup_w().column(j);
            assert!(linalg::dot_int_rat(&w, &xi).is_positive());
        }

        let r = check_assumptions(&IntMatrix::from_rows(&[[1, -1]]));
        assert!(r.rank_ok());
        assert!(!r.half_space_ok());
        assert!(r.to_string().contains("half space"));

        let r = check_assumptions(&IntMatrix::from_rows(&[[1, 1], [2, 2]]));
        assert!(!r.rank_ok());
    }

    #[test]
    fn cp1_segment() {
        let m = build_model(&IntMatrix::from_rows(&[[1, 1]]), &[rat(1, 1)]).unwrap();
        assert_eq!(m.dim(), 1);
        assert_eq!(m.polytope().vertices().len(), 2);
        assert_eq!(m.polytope().volume().unwrap(), rat(1, 1));
    }

    #[test]
    fn blowup_slices_with_reference_chart() {
        let q = IntMatrix::from_rows(&[[1, 0, 0], [0, 1, 0], [0, 0, 1], [0, 0, -1], [-1, -1, -1]]);
        let s0: Vec<Rational> = [0, 0, 0, 1, 2].iter().map(|&v| rat(v, 1)).collect();
        let m = build_model_with(&blowup_w(), &[rat(2, 1), rat(1, 1)], q, s0).unwrap();
        assert_eq!(m.dim(), 3);
        let x: Vec<Rational> = vec![rat(1, 3), rat(1, 5), rat(1, 2)];
        let values: Vec<Rational> = m.slices().iter().map(|s| s.eval(&x)).collect();
        assert_eq!(
            values,
            vec![
                rat(1, 3),
                rat(1, 5),
                rat(1, 2),
                rat(1, 2),
                rat(2, 1) - rat(1, 3) - rat(1, 5) - rat(1, 2)
            ]
        );
        assert_eq!(m.polytope().vertices().len(), 6);
        assert_eq!(m.smoothness_class(), Smoothness::Delzant);
    }

    #[test]
    fn default_chart_blowup() {
        let m = build_model(&blowup_w(), &[rat(2, 1), rat(1, 1)]).unwrap();
        assert_eq!(m.dim(), 3);
        assert_eq!(m.polytope().volume().unwrap(), rat(7, 6));
        assert_eq!(m.smoothness_class(), Smoothness::Delzant);
        assert!(m.redundant_facets().is_empty());
    }

    #[test]
    fn negative_level_is_empty() {
        let err = build_model(&IntMatrix::from_rows(&[[1, 1]]), &[rat(-1, 1)]).unwrap_err();
        assert_eq!(err, ModelError::EmptyPolytope);
    }

    #[test]
    fn non_regular_level() {
        // blow-up with mu = 0: the truncation slab collapses
        let err = build_model(&blowup_w(), &[rat(1, 1), rat(0, 1)]).unwrap_err();
        assert!(matches!(err, ModelError::NotFullDimensional { .. }));
    }

    #[test]
    fn half_space_failure_rejected() {
        let err = build_model(&IntMatrix::from_rows(&[[1, -1]]), &[rat(1, 1)]).unwrap_err();
        assert!(matches!(err, ModelError::Assumptions(_)));
    }

    #[test]
    fn inconsistent_level() {
        let w = IntMatrix::from_rows(&[[1, 1, 0], [2, 2, 0]]);
        // rank-deficient weights are rejected before solving
        assert!(matches!(
            build_model(&w, &[rat(1, 1), rat(3, 1)]),
            Err(ModelError::Assumptions(_))
        ));
    }

    #[test]
    fn weighted_projective_line_and_plane() {
        // W = (1, 1, 2): weighted projective plane, orbifold vertex
        let m = build_model(&IntMatrix::from_rows(&[[1, 1, 2]]), &[rat(1, 1)]).unwrap();
        assert_eq!(m.smoothness_class(), Smoothness::SimpleOnly);
        // W = (1, 2) is a weighted projective line; all 1-d polytopes are smooth
        let m = build_model(&IntMatrix::from_rows(&[[1, 2]]), &[rat(1, 1)]).unwrap();
        assert_eq!(m.smoothness_class(), Smoothness::Delzant);
    }

    #[test]
    fn scales_are_retained() {
        let m = build_model(&IntMatrix::from_rows(&[[1, 1, 2]]), &[rat(2, 1)]).unwrap();
        for k in 0..3 {
            let u = &m.polytope().inequalities()[k].normal;
            let scaled: Vec<BigInt> = u.iter().map(|x| x * m.scale(k)).collect();
            assert_eq!(scaled, m.kernel().row(k));
        }
    }

    #[test]
    fn constant_coordinate_is_an_empty_facet() {
        // z3 has its own circle factor: |z3|² is pinned to tau_2
        let w = IntMatrix::from_rows(&[[1, 1, 0], [0, 0, 1]]);
        let m = build_model(&w, &[rat(1, 1), rat(3, 1)]).unwrap();
        assert_eq!(m.redundant_facets(), vec![2]);
        let err = build_model(&w, &[rat(1, 1), rat(0, 1)]).unwrap_err();
        assert!(matches!(err, ModelError::NotFullDimensional { .. }));
    }
}
