//! Exact feasibility of small linear inequality systems by Fourier–Motzkin
//! elimination, with back-substitution for a witness point.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::linalg::{dot, Rational};

/// `coeffs · x >= rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Self { coeffs, rhs }
    }

    fn holds(&self, x: &[Rational]) -> bool {
        dot(&self.coeffs, x) >= self.rhs
    }
}

/// Scales so the first nonzero coefficient has absolute value one; `None`
/// for an all-zero row.
fn normalize(c: &Constraint) -> Option<Constraint> {
    let lead = c.coeffs.iter().find(|v| !v.is_zero())?.abs();
    Some(Constraint {
        coeffs: c.coeffs.iter().map(|v| v / &lead).collect(),
        rhs: &c.rhs / &lead,
    })
}

/// Drops trivially true rows, keeps only the tightest of parallel rows.
/// Returns `None` when some row reads `0 >= positive`.
fn prune(system: Vec<Constraint>) -> Option<Vec<Constraint>> {
    let mut best: BTreeMap<Vec<Rational>, Rational> = BTreeMap::new();
    for c in system {
        match normalize(&c) {
            None => {
                if c.rhs.is_positive() {
                    return None;
                }
            }
            Some(n) => {
                best.entry(n.coeffs)
                    .and_modify(|r| {
                        if n.rhs > *r {
                            *r = n.rhs.clone();
                        }
                    })
                    .or_insert(n.rhs);
            }
        }
    }
    Some(
        best.into_iter()
            .map(|(coeffs, rhs)| Constraint { coeffs, rhs })
            .collect(),
    )
}

/// Eliminates the last variable.
fn eliminate_last(system: &[Constraint]) -> Vec<Constraint> {
    let k = system[0].coeffs.len() - 1;
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut out = Vec::new();
    for c in system {
        let a = &c.coeffs[k];
        if a.is_positive() {
            lower.push(c);
        } else if a.is_negative() {
            upper.push(c);
        } else {
            out.push(Constraint {
                coeffs: c.coeffs[..k].to_vec(),
                rhs: c.rhs.clone(),
            });
        }
    }
    for p in &lower {
        for q in &upper {
            let sp = -&q.coeffs[k];
            let sq = p.coeffs[k].clone();
            let coeffs = (0..k)
                .map(|i| &sp * &p.coeffs[i] + &sq * &q.coeffs[i])
                .collect();
            out.push(Constraint {
                coeffs,
                rhs: &sp * &p.rhs + &sq * &q.rhs,
            });
        }
    }
    out
}

/// A point satisfying every constraint, or `None` if the system is empty.
///
/// All constraints must share one dimension. Exponential in the worst case;
/// intended for the handful of variables that occur here.
pub fn feasible_point(system: &[Constraint], dim: usize) -> Option<Vec<Rational>> {
    debug_assert!(system.iter().all(|c| c.coeffs.len() == dim));
    let mut stages = Vec::with_capacity(dim + 1);
    let mut current = prune(system.to_vec())?;
    for _ in 0..dim {
        let next = if current.is_empty() {
            Vec::new()
        } else {
            eliminate_last(&current)
        };
        stages.push(current);
        current = prune(next)?;
    }
    // zero variables left: prune has already rejected `0 >= positive`
    let mut x: Vec<Rational> = Vec::with_capacity(dim);
    // stage for variable k is the one that still has k + 1 variables
    for (k, stage) in stages.iter().rev().enumerate() {
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for c in stage {
            let a = &c.coeffs[k];
            if a.is_zero() {
                continue;
            }
            let rest = dot(&c.coeffs[..k], &x);
            let bound = (&c.rhs - rest) / a;
            if a.is_positive() {
                if lo.as_ref().is_none_or(|l| bound > *l) {
                    lo = Some(bound);
                }
            } else if hi.as_ref().is_none_or(|h| bound < *h) {
                hi = Some(bound);
            }
        }
        x.push(pick_between(lo.as_ref(), hi.as_ref())?);
    }
    debug_assert!(system.iter().all(|c| c.holds(&x)));
    Some(x)
}

/// A simple value in `[lo, hi]`: an integer near zero when one fits.
fn pick_between(lo: Option<&Rational>, hi: Option<&Rational>) -> Option<Rational> {
    match (lo, hi) {
        (None, None) => Some(Rational::zero()),
        (Some(l), None) => Some(if l.is_positive() {
            Rational::from_integer(l.ceil().to_integer())
        } else {
            Rational::zero()
        }),
        (None, Some(h)) => Some(if h.is_negative() {
            Rational::from_integer(h.floor().to_integer())
        } else {
            Rational::zero()
        }),
        (Some(l), Some(h)) => {
            if l > h {
                return None;
            }
            let zero = Rational::zero();
            if *l <= zero && zero <= *h {
                return Some(zero);
            }
            let candidate = if l.is_positive() { l.ceil() } else { h.floor() };
            if *l <= candidate && candidate <= *h {
                Some(candidate)
            } else {
                Some((l + h) / Rational::from_integer(2.into()))
            }
        }
    }
}

pub fn is_feasible(system: &[Constraint], dim: usize) -> bool {
    feasible_point(system, dim).is_some()
}

/// Some `xi` with `<v, xi> > 0` for every `v`, i.e. all vectors lie in an
/// open half space. Decided via the equivalent system `<v, xi> >= 1`.
pub fn open_half_space_witness(vectors: &[Vec<Rational>], dim: usize) -> Option<Vec<Rational>> {
    let system: Vec<Constraint> = vectors
        .iter()
        .map(|v| Constraint::new(v.clone(), Rational::one()))
        .collect();
    let xi = feasible_point(&system, dim)?;
    Some(clear_denominators(xi))
}

fn clear_denominators(v: Vec<Rational>) -> Vec<Rational> {
    let l = v
        .iter()
        .fold(num_bigint::BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<_> = v.iter().map(|x| (x * &l).to_integer()).collect();
    let g = scaled
        .iter()
        .fold(num_bigint::BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v;
    }
    scaled
        .into_iter()
        .map(|x| Rational::from_integer(x / &g))
        .collect()
}

/// A nonzero `y` with `<a, y> >= 0` for all rows `a`, if one exists.
pub fn nonzero_cone_point(rows: &[Vec<Rational>], dim: usize) -> Option<Vec<Rational>> {
    let base: Vec<Constraint> = rows
        .iter()
        .map(|a| Constraint::new(a.clone(), Rational::zero()))
        .collect();
    for i in 0..dim {
        for sign in [1i64, -1] {
            let mut e = vec![Rational::zero(); dim];
            e[i] = Rational::from_integer(sign.into());
            let mut sys = base.clone();
            sys.push(Constraint::new(e, Rational::one()));
            if let Some(y) = feasible_point(&sys, dim) {
                return Some(y);
            }
        }
    }
    None
}
