//! Lasserre's recursive volume formula
//!
//! `vol_n(P) = (1/n) Σ_k b_k · vol_{n-1}(F_k) / ‖a_k‖` for `P = {a_k·x <= b_k}`.
//! Each facet is measured by projecting out one coordinate `j` with
//! `a_kj != 0`, which scales its area by `|a_kj| / ‖a_k‖`; so the square roots
//! cancel and the whole recursion stays rational. It works from the
//! inequality description alone and shares nothing with the triangulation
//! code.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::{Polytope, PolytopeError};
use crate::linalg::{rat_int, Rational};

/// `coeffs · x <= rhs`.
#[derive(Debug, Clone)]
struct Halfspace {
    coeffs: Vec<Rational>,
    rhs: Rational,
}

/// Normalizes every row (leading coefficient ±1), merges parallel rows of the
/// same orientation keeping the tighter bound, drops `0 <= b` rows. `None`
/// signals an infeasible `0 <= negative` row.
fn canonical(rows: Vec<Halfspace>) -> Option<Vec<Halfspace>> {
    let mut best: BTreeMap<Vec<Rational>, Rational> = BTreeMap::new();
    for h in rows {
        let Some(lead) = h.coeffs.iter().find(|c| !c.is_zero()).map(Signed::abs) else {
            if h.rhs.is_negative() {
                return None;
            }
            continue;
        };
        let coeffs: Vec<Rational> = h.coeffs.iter().map(|c| c / &lead).collect();
        let rhs = &h.rhs / &lead;
        best.entry(coeffs)
            .and_modify(|b| {
                if rhs < *b {
                    *b = rhs.clone();
                }
            })
            .or_insert(rhs);
    }
    Some(
        best.into_iter()
            .map(|(coeffs, rhs)| Halfspace { coeffs, rhs })
            .collect(),
    )
}

fn volume_rec(dim: usize, rows: Vec<Halfspace>) -> Result<Rational, PolytopeError> {
    let Some(rows) = canonical(rows) else {
        return Ok(Rational::zero());
    };
    if dim == 1 {
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for h in &rows {
            let bound = &h.rhs / &h.coeffs[0];
            if h.coeffs[0].is_positive() {
                if hi.as_ref().is_none_or(|v| bound < *v) {
                    hi = Some(bound);
                }
            } else if lo.as_ref().is_none_or(|v| bound > *v) {
                lo = Some(bound);
            }
        }
        return match (lo, hi) {
            (Some(lo), Some(hi)) => Ok(if hi > lo { hi - lo } else { Rational::zero() }),
            _ => Err(PolytopeError::Unbounded(vec!["1".into()])),
        };
    }

    let mut total = Rational::zero();
    for (k, facet) in rows.iter().enumerate() {
        if facet.rhs.is_zero() {
            continue;
        }
        // after canonicalization the leading coefficient is ±1
        let j = facet
            .coeffs
            .iter()
            .position(|c| !c.is_zero())
            .expect("nonzero row");
        let pivot = &facet.coeffs[j];
        // x_j = (rhs - Σ_{i≠j} a_i x_i) / a_j
        let projected: Vec<Halfspace> = rows
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != k)
            .map(|(_, h)| {
                let f = &h.coeffs[j] / pivot;
                let coeffs = (0..dim)
                    .filter(|&i| i != j)
                    .map(|i| &h.coeffs[i] - &f * &facet.coeffs[i])
                    .collect();
                Halfspace {
                    coeffs,
                    rhs: &h.rhs - &f * &facet.rhs,
                }
            })
            .collect();
        let area = volume_rec(dim - 1, projected)?;
        total += &facet.rhs * area / pivot.abs();
    }
    Ok(total / Rational::from_integer(dim.into()))
}

/// Volume of the polytope from its inequalities by Lasserre recursion.
pub fn lasserre_volume(polytope: &Polytope) -> Result<Rational, PolytopeError> {
    polytope.require_full_dim()?;
    let rows = polytope
        .inequalities()
        .iter()
        .map(|ineq| Halfspace {
            coeffs: ineq.normal.iter().map(|c| -rat_int(c)).collect(),
            rhs: ineq.offset.clone(),
        })
        .collect();
    if polytope.dim() == 0 {
        return Ok(Rational::from_integer(1.into()));
    }
    volume_rec(polytope.dim(), rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;
    use crate::polytope::Inequality;

    #[test]
    fn simplex_and_cube() {
        let tri = Polytope::new(
            2,
            vec![
                Inequality::from_ints(&[1, 0], rat(0, 1)),
                Inequality::from_ints(&[0, 1], rat(0, 1)),
                Inequality::from_ints(&[-1, -1], rat(1, 1)),
            ],
        )
        .unwrap();
        assert_eq!(lasserre_volume(&tri).unwrap(), rat(1, 2));

        let mut cube = Vec::new();
        for i in 0..3 {
            let mut e = [0i64; 3];
            e[i] = 1;
            cube.push(Inequality::from_ints(&e, rat(0, 1)));
            e[i] = -1;
            cube.push(Inequality::from_ints(&e, rat(1, 1)));
        }
        let cube = Polytope::new(3, cube).unwrap();
        assert_eq!(lasserre_volume(&cube).unwrap(), rat(1, 1));
    }

    #[test]
    fn blowup_volume() {
        let p = Polytope::new(
            3,
            vec![
                Inequality::from_ints(&[1, 0, 0], rat(0, 1)),
                Inequality::from_ints(&[0, 1, 0], rat(0, 1)),
                Inequality::from_ints(&[0, 0, 1], rat(0, 1)),
                Inequality::from_ints(&[0, 0, -1], rat(1, 1)),
                Inequality::from_ints(&[-1, -1, -1], rat(2, 1)),
            ],
        )
        .unwrap();
        assert_eq!(lasserre_volume(&p).unwrap(), rat(7, 6));
    }

    #[test]
    fn duplicate_and_redundant_rows() {
        // square with a repeated side and a redundant cut
        let p = Polytope::new(
            2,
            vec![
                Inequality::from_ints(&[1, 0], rat(0, 1)),
                Inequality::from_ints(&[1, 0], rat(0, 1)),
                Inequality::from_ints(&[0, 1], rat(0, 1)),
                Inequality::from_ints(&[-1, 0], rat(1, 1)),
                Inequality::from_ints(&[0, -1], rat(1, 1)),
                Inequality::from_ints(&[-1, -1], rat(3, 1)),
            ],
        )
        .unwrap();
        assert_eq!(lasserre_volume(&p).unwrap(), rat(1, 1));
    }

    #[test]
    fn segment() {
        let p = Polytope::new(
            1,
            vec![
                Inequality::from_ints(&[1], rat(-1, 3)),
                Inequality::from_ints(&[-1], rat(2, 1)),
            ],
        )
        .unwrap();
        assert_eq!(lasserre_volume(&p).unwrap(), rat(5, 3));
    }
}
