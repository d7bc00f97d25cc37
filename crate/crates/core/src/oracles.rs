//! Closed-form reference values for the one-point blow-up of CP³ and for
//! CPⁿ, transcribed as formulas in `τ`, `μ`, `λ = τ - μ`.
//!
//! Nothing here touches the polytope engine; these functions are what the
//! pipeline is checked against.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::linalg::{IntMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

/// Parameters of the blow-up: level `τ` of the big sphere, `μ` of the
/// exceptional one, `λ = τ - μ` the side of the removed corner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupParams {
    tau: Rational,
    mu: Rational,
    lambda: Rational,
}

impl BlowupParams {
    pub fn new(tau: Rational, mu: Rational) -> Result<Self, OracleError> {
        if !tau.is_positive() {
            return Err(OracleError::BadParams("τ > 0 required".into()));
        }
        if !mu.is_positive() {
            return Err(OracleError::BadParams("μ > 0 required".into()));
        }
        if mu >= tau {
            return Err(OracleError::BadParams("μ < τ required".into()));
        }
        let lambda = &tau - &mu;
        Ok(Self { tau, mu, lambda })
    }

    pub fn tau(&self) -> &Rational {
        &self.tau
    }

    pub fn mu(&self) -> &Rational {
        &self.mu
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }
}

/// Which of the three blow-up loops: rotating `z_1`, `z_3`, or `z_4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlowupLoop {
    Psi,
    PsiTilde,
    PsiHat,
}

impl BlowupLoop {
    /// The coordinate (0-based) the loop rotates.
    pub fn coordinate(&self) -> usize {
        match self {
            BlowupLoop::Psi => 0,
            BlowupLoop::PsiTilde => 2,
            BlowupLoop::PsiHat => 3,
        }
    }
}

fn n(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

fn pow(x: &Rational, e: u32) -> Rational {
    (0..e).fold(n(1), |acc, _| acc * x)
}

/// Weights `w1 = w2 = w5 = (1,0)`, `w3 = (1,1)`, `w4 = (0,1)` and level `(τ, μ)`.
pub fn blowup_model(p: &BlowupParams) -> (IntMatrix, Vec<Rational>) {
    (
        IntMatrix::from_rows(&[[1, 1, 1, 0, 1], [0, 0, 1, 1, 0]]),
        vec![p.tau.clone(), p.mu.clone()],
    )
}

/// `|z_1|² + ... + |z_{n+1}|² = τ/π` modulo the diagonal circle.
pub fn cpn_model(dim: usize, tau: &Rational) -> Result<(IntMatrix, Vec<Rational>), OracleError> {
    if dim == 0 {
        return Err(OracleError::BadParams("n >= 1 required".into()));
    }
    if !tau.is_positive() {
        return Err(OracleError::BadParams("τ > 0 required".into()));
    }
    Ok((
        IntMatrix::from_rows(&[vec![1i64; dim + 1]]),
        vec![tau.clone()],
    ))
}

/// `κ = ¼ (τ⁴ - λ⁴) / (τ³ - λ³)`
pub fn oracle_kappa(p: &BlowupParams) -> Rational {
    let (t, l) = (&p.tau, &p.lambda);
    (pow(t, 4) - pow(l, 4)) / (n(4) * (pow(t, 3) - pow(l, 3)))
}

/// `κ̃ = ¼ (τ⁴ - 4τλ³ + 3λ⁴) / (τ³ - λ³)`
pub fn oracle_kappa_tilde(p: &BlowupParams) -> Rational {
    let (t, l) = (&p.tau, &p.lambda);
    (pow(t, 4) - n(4) * t * pow(l, 3) + n(3) * pow(l, 4)) / (n(4) * (pow(t, 3) - pow(l, 3)))
}

/// `κ̂ = ¼ (λ⁴ - 4λτ³ + 3τ⁴) / (τ³ - λ³)`
pub fn oracle_kappa_hat(p: &BlowupParams) -> Rational {
    let (t, l) = (&p.tau, &p.lambda);
    (pow(l, 4) - n(4) * l * pow(t, 3) + n(3) * pow(t, 4)) / (n(4) * (pow(t, 3) - pow(l, 3)))
}

/// Closed rational form `λ²(-3τ⁴ + 8τ³λ - 6τ²λ² + λ⁴) / (2(τ³ - λ³))`.
pub fn oracle_i_closed(p: &BlowupParams) -> Rational {
    let (t, l) = (&p.tau, &p.lambda);
    let num = pow(l, 2)
        * (n(-3) * pow(t, 4) + n(8) * pow(t, 3) * l - n(6) * pow(t, 2) * pow(l, 2) + pow(l, 4));
    num / (n(2) * (pow(t, 3) - pow(l, 3)))
}

/// Intermediate form `6κ(2τ² - λ²) + λ³ - 3τ³` with `κ` from [`oracle_kappa`].
pub fn oracle_i_via_kappa(p: &BlowupParams) -> Rational {
    let (t, l) = (&p.tau, &p.lambda);
    n(6) * oracle_kappa(p) * (n(2) * pow(t, 2) - pow(l, 2)) + pow(l, 3) - n(3) * pow(t, 3)
}

/// `I_ψ`, required to agree between the two routes.
pub fn oracle_i(p: &BlowupParams) -> Result<Rational, OracleError> {
    let closed = oracle_i_closed(p);
    let via = oracle_i_via_kappa(p);
    if closed != via {
        return Err(OracleError::InternalInconsistency(format!(
            "I_psi closed form {closed} != kappa form {via}"
        )));
    }
    Ok(closed)
}

/// `6κ̃(2τ² - λ²) - 3(τ³ - 2τλ² + λ³)`
pub fn oracle_i_tilde_via_kappa(p: &BlowupParams) -> Rational {
    let (t, l) = (&p.tau, &p.lambda);
    n(6) * oracle_kappa_tilde(p) * (n(2) * pow(t, 2) - pow(l, 2))
        - n(3) * (pow(t, 3) - n(2) * t * pow(l, 2) + pow(l, 3))
}

/// `I_ψ̃ = -3 I_ψ`, cross-checked against the `κ̃` form.
pub fn oracle_i_tilde(p: &BlowupParams) -> Result<Rational, OracleError> {
    let via = oracle_i_tilde_via_kappa(p);
    let relation = n(-3) * oracle_i(p)?;
    if via != relation {
        return Err(OracleError::InternalInconsistency(format!(
            "I_psi_tilde kappa form {via} != -3 I_psi = {relation}"
        )));
    }
    Ok(via)
}

/// `I_ψ̂ = 3 I_ψ`
pub fn oracle_i_hat(p: &BlowupParams) -> Result<Rational, OracleError> {
    Ok(n(3) * oracle_i(p)?)
}

/// Per-divisor contributions `N'_{0k}`, `k = 1..5`, as closed forms.
pub fn oracle_facets(p: &BlowupParams, which: BlowupLoop) -> [Rational; 5] {
    let (t, l, mu) = (&p.tau, &p.lambda, &p.mu);
    let t2l2 = pow(t, 2) - pow(l, 2);
    let t3l3 = pow(t, 3) - pow(l, 3);
    match which {
        BlowupLoop::Psi => {
            let k = oracle_kappa(p);
            let n1 = n(3) * &k * &t2l2;
            let n2 = -t3l3 + n(3) * &k * &t2l2;
            let n3 = pow(t, 2) * (n(3) * &k - t);
            let n4 = pow(l, 2) * (n(3) * &k - l);
            [n1, n2.clone(), n3, n4, n2]
        }
        BlowupLoop::PsiTilde => {
            let k = oracle_kappa_tilde(p);
            let a = n(-3) * (t - &k) * &t2l2 + n(2) * &t3l3;
            let n3 = n(3) * &k * pow(t, 2);
            let n4 = n(3) * pow(l, 2) * (&k - mu);
            [a.clone(), a.clone(), n3, n4, a]
        }
        BlowupLoop::PsiHat => {
            let k = oracle_kappa_hat(p);
            let b = n(3) * (l + &k) * &t2l2 - n(2) * &t3l3;
            let n3 = n(3) * pow(t, 2) * (&k - mu);
            let n4 = n(3) * &k * pow(l, 2);
            [b.clone(), b.clone(), n3, n4, b]
        }
    }
}

/// `κ` for a coordinate loop on CPⁿ: `τ / (n + 1)`.
pub fn cpn_kappa(dim: usize, tau: &Rational) -> Rational {
    tau / Rational::from_integer((dim + 1).into())
}

/// Facet sum for a coordinate loop on CPⁿ with a given `κ`:
/// the divisor `z_1 = 0` contributes `n!·κ·τ^{n-1}/(n-1)!`, each of the other
/// `n` divisors `-n!·(τⁿ/n! - κ τ^{n-1}/(n-1)!)`, giving
/// `n τ^{n-1} ((n+1)κ - τ)`. For `n = 1` this is `2κ - τ`, for `n = 2`
/// `-2(τ² - 3κτ)`.
pub fn cpn_invariant(dim: usize, tau: &Rational, kappa: &Rational) -> Rational {
    let d = dim as i64;
    n(d) * pow(tau, (dim - 1) as u32) * (n(d + 1) * kappa - tau)
}

/// All oracle values for one parameter point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupTable {
    pub params: BlowupParams,
    pub kappa: Rational,
    pub kappa_tilde: Rational,
    pub kappa_hat: Rational,
    pub i_psi: Rational,
    pub i_psi_tilde: Rational,
    pub i_psi_hat: Rational,
    pub facets_psi: [Rational; 5],
    pub facets_psi_tilde: [Rational; 5],
    pub facets_psi_hat: [Rational; 5],
}

pub fn blowup_table(p: &BlowupParams) -> Result<BlowupTable, OracleError> {
    let table = BlowupTable {
        params: p.clone(),
        kappa: oracle_kappa(p),
        kappa_tilde: oracle_kappa_tilde(p),
        kappa_hat: oracle_kappa_hat(p),
        i_psi: oracle_i(p)?,
        i_psi_tilde: oracle_i_tilde(p)?,
        i_psi_hat: oracle_i_hat(p)?,
        facets_psi: oracle_facets(p, BlowupLoop::Psi),
        facets_psi_tilde: oracle_facets(p, BlowupLoop::PsiTilde),
        facets_psi_hat: oracle_facets(p, BlowupLoop::PsiHat),
    };
    for (name, facets, total) in [
        ("psi", &table.facets_psi, &table.i_psi),
        ("psi_tilde", &table.facets_psi_tilde, &table.i_psi_tilde),
        ("psi_hat", &table.facets_psi_hat, &table.i_psi_hat),
    ] {
        let sum = facets.iter().fold(Rational::zero(), |acc, v| acc + v);
        if sum != *total {
            return Err(OracleError::InternalInconsistency(format!(
                "{name}: facet sum {sum} != {total}"
            )));
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn p(t: (i64, i64), m: (i64, i64)) -> BlowupParams {
        BlowupParams::new(rat(t.0, t.1), rat(m.0, m.1)).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(BlowupParams::new(rat(1, 1), rat(2, 1)).is_err());
        assert!(BlowupParams::new(rat(1, 1), rat(1, 1)).is_err());
        assert!(BlowupParams::new(rat(-1, 1), rat(-2, 1)).is_err());
        let err = BlowupParams::new(rat(1, 1), rat(2, 1)).unwrap_err();
        assert!(err.to_string().contains("μ < τ"));
        assert_eq!(p((1, 1), (1, 2)).lambda(), &rat(1, 2));
    }

    #[test]
    fn models() {
        let (w, level) = blowup_model(&p((2, 1), (1, 1)));
        assert_eq!(w, IntMatrix::from_rows(&[[1, 1, 1, 0, 1], [0, 0, 1, 1, 0]]));
        assert_eq!(level, vec![rat(2, 1), rat(1, 1)]);
        let (_, level) = blowup_model(&p((1, 1), (1, 2)));
        assert_eq!(level, vec![rat(1, 1), rat(1, 2)]);
        assert_eq!(
            cpn_model(1, &rat(3, 1)).unwrap().0,
            IntMatrix::from_rows(&[[1, 1]])
        );
        assert_eq!(
            cpn_model(3, &rat(1, 1)).unwrap().0,
            IntMatrix::from_rows(&[[1, 1, 1, 1]])
        );
        assert!(cpn_model(0, &rat(1, 1)).is_err());
        assert!(cpn_model(2, &rat(0, 1)).is_err());
    }

    #[test]
    fn kappas_at_two_one() {
        let q = p((2, 1), (1, 1));
        assert_eq!(oracle_kappa(&q), rat(15, 28));
        assert_eq!(oracle_kappa_tilde(&q), rat(11, 28));
        assert_eq!(oracle_kappa_hat(&q), rat(17, 28));
        assert_eq!(oracle_kappa_tilde(&q) + oracle_kappa_hat(&q), rat(1, 1));
    }

    #[test]
    fn invariants_at_sample_points() {
        let q = p((2, 1), (1, 1));
        assert_eq!(oracle_i(&q).unwrap(), rat(-1, 2));
        assert_eq!(oracle_i_tilde(&q).unwrap(), rat(3, 2));
        assert_eq!(oracle_i_hat(&q).unwrap(), rat(-3, 2));
        // λ = 1/2: λ²(-3 + 4 - 3/2 + 1/16) / (2 · 7/8) = -1/16
        let half = p((1, 1), (1, 2));
        assert_eq!(oracle_i_closed(&half), rat(-1, 16));
        assert_eq!(oracle_i_via_kappa(&half), rat(-1, 16));
    }

    #[test]
    fn facet_lists_at_two_one() {
        let q = p((2, 1), (1, 1));
        assert_eq!(
            oracle_facets(&q, BlowupLoop::Psi),
            [
                rat(135, 28),
                rat(-61, 28),
                rat(-44, 28),
                rat(17, 28),
                rat(-61, 28)
            ]
        );
        let t = blowup_table(&q).unwrap();
        assert_eq!(t.i_psi_tilde + t.i_psi_hat, rat(0, 1));
    }

    #[test]
    fn nonvanishing_on_grid() {
        for tn in 1..8 {
            for md in 2..7 {
                for mn in 1..md {
                    let tau = rat(tn, 1);
                    let mu = rat(tn * mn, md);
                    let q = BlowupParams::new(tau, mu).unwrap();
                    assert!(!oracle_i(&q).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn cpn_closed_forms() {
        let tau = rat(5, 2);
        assert_eq!(cpn_invariant(1, &tau, &rat(5, 4)), rat(0, 1));
        // -τ + 2κ and -2(τ² - 3κτ) at arbitrary κ
        let k = rat(1, 7);
        assert_eq!(cpn_invariant(1, &tau, &k), -tau.clone() + rat(2, 1) * &k);
        assert_eq!(
            cpn_invariant(2, &tau, &k),
            rat(-2, 1) * (&tau * &tau - rat(3, 1) * &k * &tau)
        );
        for d in 1..6 {
            assert!(cpn_invariant(d, &tau, &cpn_kappa(d, &tau)).is_zero());
        }
    }
}
