//! Characteristic numbers of coordinate-rotation loops.
//!
//! For the loop rotating `z_a`, with normalized Hamiltonian `s_a - κ_a`, the
//! number is a sum over the toric divisors `{z_k = 0}`:
//!
//! ```text
//! I_a = Σ_k N_k,   N_k = -n! · ( ∫_{F_k} s_a dm - κ_a · ∫_{F_k} dm )
//! ```
//!
//! where `dm` is the lattice-normalized measure on facet `F_k` and
//! `κ_a = ∫_Δ s_a / vol(Δ)`. Loops with general integer weights are handled by
//! linearity over the coordinate loops.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::delzant::DelzantModel;
use crate::linalg::{rat_int, Rational};
use crate::polytope::{factorial, AffineForm, Apex, FacetMeasure, PolytopeError, Simplex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("coordinate index {index} out of range for {m} coordinates")]
    CoordinateOutOfRange { index: usize, m: usize },
    #[error("loop has {got} weights, model has {m} coordinates")]
    LoopLength { got: usize, m: usize },
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// Integer weights `c ∈ Z^m`: the loop `t ↦ [e^{2πi c_1 t} z_1, ..., e^{2πi c_m t} z_m]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopSpec {
    weights: Vec<BigInt>,
}

impl LoopSpec {
    pub fn new(weights: Vec<BigInt>) -> Self {
        Self { weights }
    }

    pub fn from_i64(weights: &[i64]) -> Self {
        Self::new(weights.iter().map(|&w| BigInt::from(w)).collect())
    }

    /// Rotation of the single coordinate `a` (0-based).
    pub fn coordinate(a: usize, m: usize) -> Self {
        let mut w = vec![BigInt::zero(); m];
        w[a] = BigInt::from(1);
        Self::new(w)
    }

    pub fn weights(&self) -> &[BigInt] {
        &self.weights
    }

    /// The coordinate index when this is a unit vector.
    pub fn as_coordinate(&self) -> Option<usize> {
        let mut nonzero = self
            .weights
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero());
        let (a, w) = nonzero.next()?;
        (nonzero.next().is_none() && *w == BigInt::from(1)).then_some(a)
    }
}

impl fmt::Display for LoopSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(a) = self.as_coordinate() {
            return write!(f, "e{}", a + 1);
        }
        let parts: Vec<String> = self.weights.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    InfiniteCyclicSubgroup,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::InfiniteCyclicSubgroup => "infinite cyclic subgroup in pi_1(Ham)",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A nonzero characteristic number certifies an infinite cyclic subgroup;
/// zero proves nothing.
pub fn verdict(invariant: &Rational) -> Verdict {
    if invariant.is_zero() {
        Verdict::Inconclusive
    } else {
        Verdict::InfiniteCyclicSubgroup
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantReport {
    pub loop_spec: LoopSpec,
    pub kappa: Rational,
    /// `N_k` in coordinate order.
    pub facet_contributions: Vec<Rational>,
    pub invariant: Rational,
    pub verdict: Verdict,
}

/// Multiplier applied to each facet term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AggregateFactor {
    /// `-n!`
    #[default]
    Factorial,
    /// `-n`; a deliberately wrong variant for mutation checks.
    Linear,
}

/// Measure conventions. `Conventions::default()` is the correct one; the
/// other settings exist so the self-test can confirm it detects them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Conventions {
    pub facet_measure: FacetMeasure,
    pub aggregate: AggregateFactor,
}

/// Triangulations of the polytope and its facets, computed once per model.
pub struct Evaluator<'a> {
    model: &'a DelzantModel,
    conventions: Conventions,
    cells: Vec<(Rational, Simplex)>,
    volume: Rational,
    facet_cells: Vec<Vec<(Rational, Simplex)>>,
    facet_volumes: Vec<Rational>,
}

impl<'a> Evaluator<'a> {
    pub fn new(model: &'a DelzantModel) -> Result<Self, InvariantError> {
        Self::with_conventions(model, Conventions::default())
    }

    pub fn with_conventions(
        model: &'a DelzantModel,
        conventions: Conventions,
    ) -> Result<Self, InvariantError> {
        let polytope = model.polytope();
        let cells: Vec<(Rational, Simplex)> = polytope
            .triangulate()?
            .into_iter()
            .map(|s| (s.volume(), s))
            .collect();
        let volume = cells.iter().fold(Rational::zero(), |acc, (v, _)| acc + v);
        let mut facet_cells = Vec::with_capacity(model.coordinates());
        let mut facet_volumes = Vec::with_capacity(model.coordinates());
        for facet in polytope.facets() {
            let weighted: Vec<(Rational, Simplex)> = polytope
                .triangulate_facet(&facet, Apex::LexMin)
                .into_iter()
                .map(|s| (s.facet_volume(&facet.normal, conventions.facet_measure), s))
                .collect();
            facet_volumes.push(
                weighted
                    .iter()
                    .fold(Rational::zero(), |acc, (v, _)| acc + v),
            );
            facet_cells.push(weighted);
        }
        Ok(Self {
            model,
            conventions,
            cells,
            volume,
            facet_cells,
            facet_volumes,
        })
    }

    fn check_coordinate(&self, a: usize) -> Result<(), InvariantError> {
        let m = self.model.coordinates();
        if a >= m {
            return Err(InvariantError::CoordinateOutOfRange { index: a, m });
        }
        Ok(())
    }

    fn integrate(cells: &[(Rational, Simplex)], f: &AffineForm) -> Rational {
        cells
            .iter()
            .fold(Rational::zero(), |acc, (w, s)| acc + w * s.mean(f))
    }

    /// `κ_a`: mean of `s_a` over the polytope.
    pub fn kappa(&self, a: usize) -> Result<Rational, InvariantError> {
        self.check_coordinate(a)?;
        Ok(Self::integrate(&self.cells, self.model.slice(a)) / &self.volume)
    }

    fn factor(&self) -> Rational {
        let n = self.model.dim();
        match self.conventions.aggregate {
            AggregateFactor::Factorial => -factorial(n),
            AggregateFactor::Linear => -Rational::from_integer(n.into()),
        }
    }

    fn contribution_with_kappa(&self, a: usize, k: usize, kappa: &Rational) -> Rational {
        let moment = Self::integrate(&self.facet_cells[k], self.model.slice(a));
        self.factor() * (moment - kappa * &self.facet_volumes[k])
    }

    pub fn facet_contribution(&self, a: usize, k: usize) -> Result<Rational, InvariantError> {
        self.check_coordinate(k)?;
        let kappa = self.kappa(a)?;
        Ok(self.contribution_with_kappa(a, k, &kappa))
    }

    pub fn coordinate_report(&self, a: usize) -> Result<InvariantReport, InvariantError> {
        let kappa = self.kappa(a)?;
        let facet_contributions: Vec<Rational> = (0..self.model.coordinates())
            .map(|k| self.contribution_with_kappa(a, k, &kappa))
            .collect();
        let invariant = facet_contributions
            .iter()
            .fold(Rational::zero(), |acc, v| acc + v);
        Ok(InvariantReport {
            loop_spec: LoopSpec::coordinate(a, self.model.coordinates()),
            kappa,
            verdict: verdict(&invariant),
            facet_contributions,
            invariant,
        })
    }

    pub fn loop_report(&self, spec: &LoopSpec) -> Result<InvariantReport, InvariantError> {
        let m = self.model.coordinates();
        if spec.weights().len() != m {
            return Err(InvariantError::LoopLength {
                got: spec.weights().len(),
                m,
            });
        }
        let mut kappa = Rational::zero();
        let mut facets = vec![Rational::zero(); m];
        for (a, c) in spec.weights().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = rat_int(c);
            let part = self.coordinate_report(a)?;
            kappa += &c * &part.kappa;
            for (acc, n_k) in facets.iter_mut().zip(&part.facet_contributions) {
                *acc += &c * n_k;
            }
        }
        let invariant = facets.iter().fold(Rational::zero(), |acc, v| acc + v);
        Ok(InvariantReport {
            loop_spec: spec.clone(),
            kappa,
            verdict: verdict(&invariant),
            facet_contributions: facets,
            invariant,
        })
    }

    pub fn volume(&self) -> &Rational {
        &self.volume
    }

    pub fn facet_volume(&self, k: usize) -> &Rational {
        &self.facet_volumes[k]
    }
}

/// `κ_a = ∫_Δ s_a / vol(Δ)` (the `n!` factors of the Liouville measure cancel).
pub fn normalized_constant(model: &DelzantModel, a: usize) -> Result<Rational, InvariantError> {
    let m = model.coordinates();
    if a >= m {
        return Err(InvariantError::CoordinateOutOfRange { index: a, m });
    }
    let p = model.polytope();
    Ok(p.integrate_affine(model.slice(a))? / p.volume()?)
}

/// `N_k` for the loop rotating coordinate `a`.
pub fn facet_contribution(
    model: &DelzantModel,
    a: usize,
    k: usize,
) -> Result<Rational, InvariantError> {
    let m = model.coordinates();
    if k >= m {
        return Err(InvariantError::CoordinateOutOfRange { index: k, m });
    }
    let kappa = normalized_constant(model, a)?;
    let p = model.polytope();
    let facet = model.facet(k);
    let moment = p.integrate_affine_facet(&facet, model.slice(a));
    let measure = p.facet_lattice_volume(&facet);
    Ok(-factorial(model.dim()) * (moment - kappa * measure))
}

pub fn invariant_coordinate(
    model: &DelzantModel,
    a: usize,
) -> Result<InvariantReport, InvariantError> {
    Evaluator::new(model)?.coordinate_report(a)
}

pub fn invariant_loop(
    model: &DelzantModel,
    spec: &LoopSpec,
) -> Result<InvariantReport, InvariantError> {
    Evaluator::new(model)?.loop_report(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delzant::build_model;
    use crate::linalg::{rat, IntMatrix};

    fn blowup() -> DelzantModel {
        build_model(
            &IntMatrix::from_rows(&[[1, 1, 1, 0, 1], [0, 0, 1, 1, 0]]),
            &[rat(2, 1), rat(1, 1)],
        )
        .unwrap()
    }

    fn cpn(n: usize, tau: Rational) -> DelzantModel {
        build_model(&IntMatrix::from_rows(&[vec![1i64; n + 1]]), &[tau]).unwrap()
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(
            normalized_constant(&cpn(1, rat(1, 1)), 0).unwrap(),
            rat(1, 2)
        );
        assert_eq!(
            normalized_constant(&cpn(2, rat(1, 1)), 0).unwrap(),
            rat(1, 3)
        );
        assert_eq!(normalized_constant(&blowup(), 0).unwrap(), rat(15, 28));
    }

    #[test]
    fn blowup_facet_examples() {
        let m = blowup();
        assert_eq!(facet_contribution(&m, 0, 2).unwrap(), rat(-11, 7));
        assert_eq!(facet_contribution(&m, 0, 0).unwrap(), rat(135, 28));
        assert_eq!(facet_contribution(&m, 0, 3).unwrap(), rat(17, 28));
    }

    #[test]
    fn coordinate_invariants() {
        for tau in [rat(1, 1), rat(7, 3)] {
            assert!(invariant_coordinate(&cpn(1, tau.clone()), 0)
                .unwrap()
                .invariant
                .is_zero());
            assert!(invariant_coordinate(&cpn(2, tau), 0)
                .unwrap()
                .invariant
                .is_zero());
        }
        let r = invariant_coordinate(&blowup(), 0).unwrap();
        assert_eq!(r.invariant, rat(-1, 2));
        assert_eq!(r.verdict, Verdict::InfiniteCyclicSubgroup);
    }

    #[test]
    fn evaluator_agrees_with_direct_route() {
        let m = blowup();
        let ev = Evaluator::new(&m).unwrap();
        for a in 0..5 {
            assert_eq!(ev.kappa(a).unwrap(), normalized_constant(&m, a).unwrap());
            for k in 0..5 {
                assert_eq!(
                    ev.facet_contribution(a, k).unwrap(),
                    facet_contribution(&m, a, k).unwrap()
                );
            }
        }
    }

    #[test]
    fn loop_examples() {
        let m = blowup();
        let r3 = invariant_loop(&m, &LoopSpec::coordinate(2, 5)).unwrap();
        assert_eq!(r3.invariant, rat(3, 2));
        let r4 = invariant_loop(&m, &LoopSpec::coordinate(3, 5)).unwrap();
        assert_eq!(r4.invariant, rat(-3, 2));
        let row = invariant_loop(&m, &LoopSpec::from_i64(&[1, 1, 1, 0, 1])).unwrap();
        assert!(row.invariant.is_zero());
        assert_eq!(row.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn verdict_examples() {
        assert_eq!(verdict(&rat(-1, 2)), Verdict::InfiniteCyclicSubgroup);
        assert_eq!(verdict(&rat(0, 1)), Verdict::Inconclusive);
        assert_eq!(verdict(&rat(7, 3)), Verdict::InfiniteCyclicSubgroup);
        assert_eq!(
            Verdict::InfiniteCyclicSubgroup.to_string(),
            "infinite cyclic subgroup in pi_1(Ham)"
        );
    }

    #[test]
    fn bad_indices() {
        let m = cpn(1, rat(1, 1));
        assert!(matches!(
            normalized_constant(&m, 2),
            Err(InvariantError::CoordinateOutOfRange { .. })
        ));
        assert!(matches!(
            invariant_loop(&m, &LoopSpec::from_i64(&[1])),
            Err(InvariantError::LoopLength { .. })
        ));
    }

    #[test]
    fn loop_spec_display() {
        assert_eq!(LoopSpec::coordinate(2, 5).to_string(), "e3");
        assert_eq!(LoopSpec::from_i64(&[1, 0, -2]).to_string(), "(1,0,-2)");
        assert_eq!(LoopSpec::from_i64(&[0, 2]).as_coordinate(), None);
    }
}
