//! Oracle-vs-pipeline grid and property suites, runnable from the CLI.
//!
//! Every suite returns the number of checks performed or the first
//! counterexample with its exact inputs. Random instances come from a fixed
//! ChaCha seed, so runs are reproducible.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::delzant::{build_model, build_model_with, DelzantModel};
use crate::invariant::{Conventions, Evaluator, LoopSpec};
use crate::linalg::{self, format_rational, rat, rat_int, IntMatrix, Rational};
use crate::oracles::{self, BlowupLoop, BlowupParams};
use crate::polytope::{lasserre_volume, AffineForm, Apex, Inequality, Polytope, PolytopeError};

pub const DEFAULT_SEED: u64 = 0x7031_c0de;

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub result: Result<usize, String>,
    pub elapsed: Duration,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.result.is_ok()
    }
}

type SuiteResult = Result<usize, String>;

fn fmt_vec(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

fn check(cond: bool, checks: &mut usize, msg: impl FnOnce() -> String) -> Result<(), String> {
    *checks += 1;
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// 25 rational points with `0 < μ < τ`.
pub fn blowup_grid() -> Vec<BlowupParams> {
    let taus = [rat(1, 1), rat(2, 1), rat(3, 1), rat(5, 2), rat(7, 3)];
    let ratios = [rat(1, 5), rat(1, 3), rat(1, 2), rat(2, 3), rat(4, 5)];
    let mut out = Vec::new();
    for t in &taus {
        for f in &ratios {
            out.push(BlowupParams::new(t.clone(), t * f).expect("0 < mu < tau"));
        }
    }
    out
}

pub fn blowup_pipeline(p: &BlowupParams) -> DelzantModel {
    let (w, level) = oracles::blowup_model(p);
    build_model(&w, &level).expect("blow-up parameters give a valid model")
}

pub fn cpn_pipeline(dim: usize, tau: &Rational) -> DelzantModel {
    let (w, level) = oracles::cpn_model(dim, tau).expect("valid CP^n parameters");
    build_model(&w, &level).expect("CP^n is a valid model")
}

/// Pipeline κ, per-facet values and totals against the closed forms, for the
/// three blow-up loops, plus the loop relations and the nonvanishing verdict.
pub fn blowup_oracle_grid(conv: Conventions) -> SuiteResult {
    let mut checks = 0;
    for p in blowup_grid() {
        let at = || {
            format!(
                "tau = {}, mu = {}",
                format_rational(p.tau()),
                format_rational(p.mu())
            )
        };
        let model = blowup_pipeline(&p);
        let ev = Evaluator::with_conventions(&model, conv).map_err(|e| e.to_string())?;
        let table = oracles::blowup_table(&p).map_err(|e| format!("{}: {e}", at()))?;
        let cases = [
            (
                BlowupLoop::Psi,
                &table.kappa,
                &table.i_psi,
                &table.facets_psi,
            ),
            (
                BlowupLoop::PsiTilde,
                &table.kappa_tilde,
                &table.i_psi_tilde,
                &table.facets_psi_tilde,
            ),
            (
                BlowupLoop::PsiHat,
                &table.kappa_hat,
                &table.i_psi_hat,
                &table.facets_psi_hat,
            ),
        ];
        let mut totals = Vec::new();
        for (which, kappa, total, facets) in cases {
            let r = ev
                .coordinate_report(which.coordinate())
                .map_err(|e| e.to_string())?;
            check(r.kappa == *kappa, &mut checks, || {
                format!(
                    "{which:?} at {}: kappa {} != oracle {}",
                    at(),
                    format_rational(&r.kappa),
                    format_rational(kappa)
                )
            })?;
            check(
                r.facet_contributions == facets.to_vec(),
                &mut checks,
                || {
                    format!(
                        "{which:?} at {}: facets {} != oracle {}",
                        at(),
                        fmt_vec(&r.facet_contributions),
                        fmt_vec(facets)
                    )
                },
            )?;
            check(r.invariant == *total, &mut checks, || {
                format!(
                    "{which:?} at {}: I {} != oracle {}",
                    at(),
                    format_rational(&r.invariant),
                    format_rational(total)
                )
            })?;
            totals.push(r.invariant);
        }
        let (i1, i3, i4) = (&totals[0], &totals[1], &totals[2]);
        check(
            *i4 == -i3.clone() && *i4 == rat(3, 1) * i1,
            &mut checks,
            || {
                format!(
                    "loop relation fails at {}: I(e1)={i1}, I(e3)={i3}, I(e4)={i4}",
                    at()
                )
            },
        )?;
        check(!i1.is_zero(), &mut checks, || {
            format!("I(e1) vanishes at {}", at())
        })?;
    }
    Ok(checks)
}

/// Coordinate loops on CPⁿ, n = 1..5: `κ = τ/(n+1)` and `I = 0`.
pub fn cpn_vanishing(conv: Conventions) -> SuiteResult {
    let mut checks = 0;
    let taus = [rat(1, 1), rat(2, 1), rat(3, 1), rat(5, 2), rat(7, 3)];
    for dim in 1..=5 {
        for tau in &taus {
            let model = cpn_pipeline(dim, tau);
            let r = Evaluator::with_conventions(&model, conv)
                .and_then(|ev| ev.coordinate_report(0))
                .map_err(|e| e.to_string())?;
            let kappa = oracles::cpn_kappa(dim, tau);
            check(r.kappa == kappa, &mut checks, || {
                format!("CP^{dim}, tau = {tau}: kappa {} != {}", r.kappa, kappa)
            })?;
            check(r.invariant.is_zero(), &mut checks, || {
                format!("CP^{dim}, tau = {tau}: I = {} != 0", r.invariant)
            })?;
            check(
                r.invariant == oracles::cpn_invariant(dim, tau, &r.kappa),
                &mut checks,
                || format!("CP^{dim}, tau = {tau}: facet sum disagrees with closed form"),
            )?;
        }
    }
    Ok(checks)
}

/// A unimodular `n x n` matrix and its inverse, as a product of random
/// elementary column operations and sign flips.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> (IntMatrix, IntMatrix) {
    let mut u = IntMatrix::identity(n);
    let mut inv = IntMatrix::identity(n);
    if n == 0 {
        return (u, inv);
    }
    for _ in 0..(2 * n + 2) {
        let mut e = IntMatrix::identity(n);
        let mut e_inv = IntMatrix::identity(n);
        if n >= 2 && rng.gen_bool(0.8) {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let c: i64 = *[-2, -1, 1, 2].choose(rng).unwrap();
            // column i += c · column j
            e[(j, i)] = BigInt::from(c);
            e_inv[(j, i)] = BigInt::from(-c);
        } else {
            let i = rng.gen_range(0..n);
            e[(i, i)] = BigInt::from(-1);
            e_inv[(i, i)] = BigInt::from(-1);
        }
        u = u.mul(&e).expect("square");
        inv = e_inv.mul(&inv).expect("square");
    }
    (u, inv)
}

fn random_positive<R: Rng>(rng: &mut R) -> Rational {
    rat(rng.gen_range(1..=5), rng.gen_range(1..=3))
}

/// A valid quotient `(W, τ)` with `r ∈ {1, 2}` and `n = m - r ∈ {1, 2, 3}`.
/// The first row of `W` is positive (so `e_1` witnesses the half-space
/// condition) and `τ = W·s` for a strictly positive `s`, so the level set
/// has interior.
pub fn random_quotient<R: Rng>(rng: &mut R) -> (IntMatrix, Vec<Rational>) {
    loop {
        let r = rng.gen_range(1..=2);
        let m = r + rng.gen_range(1..=3);
        let rows: Vec<Vec<i64>> = (0..r)
            .map(|i| {
                (0..m)
                    .map(|_| {
                        if i == 0 {
                            rng.gen_range(1..=2)
                        } else {
                            rng.gen_range(0..=2)
                        }
                    })
                    .collect()
            })
            .collect();
        let w = IntMatrix::from_rows(&rows);
        if w.rank() < r {
            continue;
        }
        let s: Vec<Rational> = (0..m).map(|_| random_positive(rng)).collect();
        let tau = (0..r).map(|i| linalg::dot_int_rat(w.row(i), &s)).collect();
        return (w, tau);
    }
}

/// A bounded full-dimensional polytope in dimension `1..=max_dim` with at most
/// `max_ineqs` inequalities, containing the origin in its interior.
pub fn random_polytope<R: Rng>(rng: &mut R, max_dim: usize, max_ineqs: usize) -> Polytope {
    loop {
        let dim = rng.gen_range(1..=max_dim);
        let count = rng.gen_range(dim + 1..=max_ineqs.max(dim + 1));
        let mut ineqs = Vec::with_capacity(count);
        while ineqs.len() < count {
            let normal: Vec<BigInt> = (0..dim)
                .map(|_| BigInt::from(rng.gen_range(-3..=3)))
                .collect();
            let Ok((normal, _)) = linalg::primitive(&normal) else {
                continue;
            };
            ineqs.push(Inequality::new(normal, random_positive(rng)));
        }
        match Polytope::new(dim, ineqs) {
            Ok(p) => return p,
            Err(PolytopeError::Unbounded(_)) => continue,
            Err(e) => panic!("origin is interior, cannot fail with {e}"),
        }
    }
}

/// Every model built from a row `w` of `W` as loop weights gives `I = 0`.
pub fn torus_relation_nullity(conv: Conventions, seed: u64) -> SuiteResult {
    let mut checks = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut instances: Vec<(String, IntMatrix, Vec<Rational>)> = Vec::new();
    for p in blowup_grid().iter().step_by(6) {
        let (w, t) = oracles::blowup_model(p);
        instances.push((format!("blow-up tau={} mu={}", p.tau(), p.mu()), w, t));
    }
    for dim in 1..=3 {
        let (w, t) = oracles::cpn_model(dim, &rat(3, 2)).expect("valid");
        instances.push((format!("CP^{dim}"), w, t));
    }
    for i in 0..4 {
        let (w, t) = random_quotient(&mut rng);
        instances.push((format!("random #{i}"), w, t));
    }
    for (name, w, tau) in instances {
        let model = build_model(&w, &tau).map_err(|e| format!("{name}: {e}"))?;
        let ev = Evaluator::with_conventions(&model, conv).map_err(|e| e.to_string())?;
        for i in 0..w.rows() {
            let spec = LoopSpec::new(w.row(i).to_vec());
            let r = ev.loop_report(&spec).map_err(|e| e.to_string())?;
            check(r.invariant.is_zero(), &mut checks, || {
                format!(
                    "{name} W={w:?} tau={}: loop {spec} gives I = {}",
                    fmt_vec(&tau),
                    r.invariant
                )
            })?;
            let expected = tau[i].clone();
            check(r.kappa == expected, &mut checks, || {
                format!(
                    "{name}: relation constant {} != tau_{} = {expected}",
                    r.kappa,
                    i + 1
                )
            })?;
        }
    }
    Ok(checks)
}

/// Triangulation volume equals Lasserre volume on random polytopes and on
/// the blow-up grid.
pub fn volume_equivalence(seed: u64) -> SuiteResult {
    let mut checks = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..16 {
        let p = random_polytope(&mut rng, 4, 10);
        let a = p.volume().map_err(|e| e.to_string())?;
        let b = lasserre_volume(&p).map_err(|e| e.to_string())?;
        check(a == b, &mut checks, || {
            format!(
                "triangulation {a} != lasserre {b} for {:?}",
                p.inequalities()
            )
        })?;
    }
    for p in blowup_grid() {
        let model = blowup_pipeline(&p);
        let a = model.polytope().volume().map_err(|e| e.to_string())?;
        let b = lasserre_volume(model.polytope()).map_err(|e| e.to_string())?;
        let closed = (oracles_pow3(p.tau()) - oracles_pow3(p.lambda())) / rat(6, 1);
        check(a == b && a == closed, &mut checks, || {
            format!(
                "blow-up tau={} mu={}: volumes {a}, {b}, closed {closed}",
                p.tau(),
                p.mu()
            )
        })?;
    }
    Ok(checks)
}

fn oracles_pow3(x: &Rational) -> Rational {
    x * x * x
}

fn compare_models(
    name: &str,
    a: &DelzantModel,
    b: &DelzantModel,
    checks: &mut usize,
) -> Result<(), String> {
    let (pa, pb) = (a.polytope(), b.polytope());
    check(pa.vertices().len() == pb.vertices().len(), checks, || {
        format!("{name}: vertex counts differ")
    })?;
    let (va, vb) = (
        pa.volume().map_err(|e| e.to_string())?,
        pb.volume().map_err(|e| e.to_string())?,
    );
    check(va == vb, checks, || format!("{name}: volumes {va} != {vb}"))?;
    check(a.smoothness_class() == b.smoothness_class(), checks, || {
        format!("{name}: smoothness differs")
    })?;
    let ea = Evaluator::new(a).map_err(|e| e.to_string())?;
    let eb = Evaluator::new(b).map_err(|e| e.to_string())?;
    for k in 0..a.coordinates() {
        check(ea.facet_volume(k) == eb.facet_volume(k), checks, || {
            format!("{name}: facet {k} lattice volume differs")
        })?;
    }
    for c in 0..a.coordinates() {
        let ra = ea.coordinate_report(c).map_err(|e| e.to_string())?;
        let rb = eb.coordinate_report(c).map_err(|e| e.to_string())?;
        check(ra == rb, checks, || {
            format!("{name}: report for e{} differs: {ra:?} vs {rb:?}", c + 1)
        })?;
    }
    Ok(())
}

/// Reports are unchanged by `Q -> Q·U` (U unimodular) and `s0 -> s0 + Q·v`.
pub fn choice_independence(seed: u64) -> SuiteResult {
    let mut checks = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut instances: Vec<(String, IntMatrix, Vec<Rational>)> = Vec::new();
    let (w, t) = oracles::blowup_model(&BlowupParams::new(rat(2, 1), rat(1, 1)).expect("valid"));
    instances.push(("blow-up".into(), w, t));
    let (w, t) = oracles::blowup_model(&BlowupParams::new(rat(7, 3), rat(3, 5)).expect("valid"));
    instances.push(("blow-up 7/3,3/5".into(), w, t));
    let (w, t) = oracles::cpn_model(2, &rat(5, 2)).expect("valid");
    instances.push(("CP^2".into(), w, t));
    for i in 0..2 {
        let (w, t) = random_quotient(&mut rng);
        instances.push((format!("random #{i}"), w, t));
    }
    for (name, w, tau) in instances {
        let base = build_model(&w, &tau).map_err(|e| format!("{name}: {e}"))?;
        let n = base.dim();
        for trial in 0..5 {
            let (u, _) = random_unimodular(&mut rng, n);
            let q2 = base.kernel().mul(&u).expect("shapes");
            let v: Vec<Rational> = (0..n)
                .map(|_| rat(rng.gen_range(-4..=4), rng.gen_range(1..=3)))
                .collect();
            let s2: Vec<Rational> = (0..base.coordinates())
                .map(|k| {
                    &base.particular_solution()[k] + linalg::dot_int_rat(base.kernel().row(k), &v)
                })
                .collect();
            let other = build_model_with(&w, &tau, q2.clone(), s2)
                .map_err(|e| format!("{name} trial {trial}: {e}"))?;
            compare_models(
                &format!("{name} trial {trial} (Q' = {q2:?})"),
                &base,
                &other,
                &mut checks,
            )?;
        }
    }
    Ok(checks)
}

/// `I(γτ) = γⁿ I(τ)`, including `γ ∈ {2, 1/3}` on the blow-up grid.
pub fn scaling_degree(conv: Conventions, seed: u64) -> SuiteResult {
    let mut checks = 0;
    let gammas = [rat(2, 1), rat(1, 3)];
    for p in blowup_grid() {
        let base = Evaluator::with_conventions(&blowup_pipeline(&p), conv)
            .and_then(|ev| ev.coordinate_report(0))
            .map_err(|e| e.to_string())?
            .invariant;
        for g in &gammas {
            let q = BlowupParams::new(p.tau() * g, p.mu() * g).expect("scaled params");
            let scaled = Evaluator::with_conventions(&blowup_pipeline(&q), conv)
                .and_then(|ev| ev.coordinate_report(0))
                .map_err(|e| e.to_string())?
                .invariant;
            check(scaled == g * g * g * &base, &mut checks, || {
                format!(
                    "tau={} mu={} gamma={g}: {scaled} != gamma^3 * {base}",
                    p.tau(),
                    p.mu()
                )
            })?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..4 {
        let (w, tau) = random_quotient(&mut rng);
        let g = rat(rng.gen_range(1..=4), rng.gen_range(1..=4));
        let scaled_tau: Vec<Rational> = tau.iter().map(|t| t * &g).collect();
        let a = build_model(&w, &tau).map_err(|e| e.to_string())?;
        let b = build_model(&w, &scaled_tau).map_err(|e| e.to_string())?;
        let gn = (0..a.dim()).fold(rat(1, 1), |acc, _| acc * &g);
        let ea = Evaluator::with_conventions(&a, conv).map_err(|e| e.to_string())?;
        let eb = Evaluator::with_conventions(&b, conv).map_err(|e| e.to_string())?;
        for c in 0..a.coordinates() {
            let ia = ea
                .coordinate_report(c)
                .map_err(|e| e.to_string())?
                .invariant;
            let ib = eb
                .coordinate_report(c)
                .map_err(|e| e.to_string())?
                .invariant;
            check(ib == &gn * &ia, &mut checks, || {
                format!(
                    "W={w:?} tau={} gamma={g}: e{} gives {ib} != gamma^n {ia}",
                    fmt_vec(&tau),
                    c + 1
                )
            })?;
        }
    }
    Ok(checks)
}

fn random_form<R: Rng>(rng: &mut R, dim: usize) -> AffineForm {
    AffineForm::new(
        rat(rng.gen_range(-5..=5), rng.gen_range(1..=3)),
        (0..dim)
            .map(|_| rat(rng.gen_range(-5..=5), rng.gen_range(1..=3)))
            .collect(),
    )
}

/// Maps `P` by `x -> U x + t`: normals go to `U^{-T} u`.
pub fn transform_polytope(p: &Polytope, u_inv: &IntMatrix, t: &[Rational]) -> Polytope {
    let ut = u_inv.transpose();
    let ineqs = p
        .inequalities()
        .iter()
        .map(|ineq| {
            let col = IntMatrix::new(ineq.normal.len(), 1, ineq.normal.clone()).expect("column");
            let normal = ut.mul(&col).expect("shapes").column(0);
            let offset = &ineq.offset - linalg::dot_int_rat(&normal, t);
            Inequality::new(normal, offset)
        })
        .collect();
    Polytope::new(p.dim(), ineqs).expect("image of a polytope")
}

/// `f'(x') = f(U^{-1}(x' - t))`.
pub fn transform_form(f: &AffineForm, u_inv: &IntMatrix, t: &[Rational]) -> AffineForm {
    let ut: Vec<Vec<Rational>> = u_inv.transpose().to_rational_rows();
    let gradient: Vec<Rational> = ut.iter().map(|row| linalg::dot(row, &f.gradient)).collect();
    let constant = &f.constant - linalg::dot(&gradient, t);
    AffineForm::new(constant, gradient)
}

/// Linearity, apex independence, the mean-value bound, dilation, and
/// unimodular invariance of the integrals on random polytopes.
pub fn integral_properties(seed: u64) -> SuiteResult {
    let mut checks = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e = |e: PolytopeError| e.to_string();
    for _ in 0..10 {
        let p = random_polytope(&mut rng, 3, 8);
        let n = p.dim();
        let desc = format!("{:?}", p.inequalities());
        let (f, g) = (random_form(&mut rng, n), random_form(&mut rng, n));
        let (alpha, beta) = (random_positive(&mut rng), -random_positive(&mut rng));
        let combo = f.scale(&alpha).add(&g.scale(&beta));
        let lhs = p.integrate_affine(&combo).map_err(e)?;
        let rhs = &alpha * p.integrate_affine(&f).map_err(e)?
            + &beta * p.integrate_affine(&g).map_err(e)?;
        check(lhs == rhs, &mut checks, || {
            format!("linearity fails on {desc}")
        })?;

        check(
            p.volume().map_err(e)? == p.volume_with(Apex::LexMax).map_err(e)?
                && p.integrate_affine(&f).map_err(e)?
                    == p.integrate_affine_with(&f, Apex::LexMax).map_err(e)?,
            &mut checks,
            || format!("apex dependence on {desc}"),
        )?;

        let vol = p.volume().map_err(e)?;
        let mean = p.integrate_affine(&f).map_err(e)? / &vol;
        let values: Vec<Rational> = p.vertices().iter().map(|v| f.eval(v)).collect();
        let lo = values.iter().min().expect("vertices");
        let hi = values.iter().max().expect("vertices");
        check(*lo <= mean && mean <= *hi, &mut checks, || {
            format!("mean bound fails on {desc}")
        })?;

        let gamma = random_positive(&mut rng);
        let dilated = Polytope::new(
            n,
            p.inequalities()
                .iter()
                .map(|i| Inequality::new(i.normal.clone(), &i.offset * &gamma))
                .collect(),
        )
        .map_err(e)?;
        let gn = (0..n).fold(rat(1, 1), |acc, _| acc * &gamma);
        let gn1 = &gn / &gamma;
        check(
            dilated.volume().map_err(e)? == &gn * &vol,
            &mut checks,
            || format!("dilation by {gamma} fails on {desc}"),
        )?;
        for k in 0..p.inequalities().len() {
            let a = p.facet_lattice_volume(&p.facet(k));
            let b = dilated.facet_lattice_volume(&dilated.facet(k));
            check(b == &gn1 * &a, &mut checks, || {
                format!("facet {k} dilation fails on {desc}")
            })?;
        }

        let (_, u_inv) = random_unimodular(&mut rng, n);
        let t: Vec<Rational> = (0..n)
            .map(|_| rat(rng.gen_range(-3..=3), rng.gen_range(1..=2)))
            .collect();
        let image = transform_polytope(&p, &u_inv, &t);
        let f2 = transform_form(&f, &u_inv, &t);
        check(image.volume().map_err(e)? == vol, &mut checks, || {
            format!("unimodular volume fails on {desc}")
        })?;
        check(
            image.integrate_affine(&f2).map_err(e)? == p.integrate_affine(&f).map_err(e)?,
            &mut checks,
            || format!("unimodular integral fails on {desc}"),
        )?;
        for k in 0..p.inequalities().len() {
            let (fa, fb) = (p.facet(k), image.facet(k));
            check(
                p.facet_lattice_volume(&fa) == image.facet_lattice_volume(&fb)
                    && p.integrate_affine_facet(&fa, &f) == image.integrate_affine_facet(&fb, &f2),
                &mut checks,
                || format!("unimodular facet {k} fails on {desc}"),
            )?;
        }
    }
    Ok(checks)
}

/// `∫_Δ (s_a - κ_a) = 0`, `Σ_k W_ik κ_k = τ_i`, and equal weights giving
/// equal reports.
pub fn normalization_and_symmetry(seed: u64) -> SuiteResult {
    let mut checks = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut models = vec![blowup_pipeline(
        &BlowupParams::new(rat(5, 2), rat(2, 3)).expect("valid"),
    )];
    for _ in 0..3 {
        let (w, tau) = random_quotient(&mut rng);
        models.push(build_model(&w, &tau).map_err(|e| e.to_string())?);
    }
    for model in &models {
        let ev = Evaluator::new(model).map_err(|e| e.to_string())?;
        let p = model.polytope();
        let kappas: Vec<Rational> = (0..model.coordinates())
            .map(|a| ev.kappa(a))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        for (a, kappa) in kappas.iter().enumerate() {
            let centered = model.slice(a).sub_constant(kappa);
            let integral = p.integrate_affine(&centered).map_err(|e| e.to_string())?;
            check(integral.is_zero(), &mut checks, || {
                format!("{}: ∫(s_{} - κ) = {integral}", model.describe(), a + 1)
            })?;
        }
        let w = model.weights();
        for i in 0..w.rows() {
            let lhs = w
                .row(i)
                .iter()
                .zip(&kappas)
                .fold(Rational::zero(), |acc, (c, k)| acc + rat_int(c) * k);
            let rhs = model.tau()[i].clone();
            check(lhs == rhs, &mut checks, || {
                format!("{}: Σ w κ = {lhs} != {rhs}", model.describe())
            })?;
        }
        for a in 0..model.coordinates() {
            for b in a + 1..model.coordinates() {
                if w.column(a) != w.column(b) {
                    continue;
                }
                let (ra, rb) = (
                    ev.coordinate_report(a).map_err(|e| e.to_string())?,
                    ev.coordinate_report(b).map_err(|e| e.to_string())?,
                );
                check(
                    ra.invariant == rb.invariant && ra.kappa == rb.kappa,
                    &mut checks,
                    || {
                        format!(
                            "{}: equal weights z{} z{} disagree",
                            model.describe(),
                            a + 1,
                            b + 1
                        )
                    },
                )?;
            }
        }
    }
    // the defining relation Σ_k W_ik s_k(x) = τ_i at random points
    for model in &models {
        let w = model.weights();
        for _ in 0..3 {
            let x: Vec<Rational> = (0..model.dim())
                .map(|_| rat(rng.gen_range(-6..=6), rng.gen_range(1..=5)))
                .collect();
            for i in 0..w.rows() {
                let lhs = (0..model.coordinates()).fold(Rational::zero(), |acc, k| {
                    acc + rat_int(&w[(i, k)]) * model.slice(k).eval(&x)
                });
                let rhs = model.tau()[i].clone();
                check(lhs == rhs, &mut checks, || {
                    format!(
                        "{}: slice relation fails at {}",
                        model.describe(),
                        fmt_vec(&x)
                    )
                })?;
            }
        }
    }
    Ok(checks)
}

fn timed(name: &'static str, f: impl FnOnce() -> SuiteResult) -> SuiteOutcome {
    let start = Instant::now();
    let result = f();
    SuiteOutcome {
        name,
        result,
        elapsed: start.elapsed(),
    }
}

/// Suites that depend on the measure conventions; used for mutation checks.
pub fn run_convention_suites(conv: Conventions) -> Vec<SuiteOutcome> {
    vec![
        timed("blow-up oracle grid", || blowup_oracle_grid(conv)),
        timed("CP^n vanishing", || cpn_vanishing(conv)),
        timed("torus-relation nullity", || {
            torus_relation_nullity(conv, DEFAULT_SEED)
        }),
        timed("scaling degree", || scaling_degree(conv, DEFAULT_SEED)),
    ]
}

pub fn run_all() -> Vec<SuiteOutcome> {
    let mut out = run_convention_suites(Conventions::default());
    out.push(timed("volume: triangulation = Lasserre", || {
        volume_equivalence(DEFAULT_SEED)
    }));
    out.push(timed("choice independence", || {
        choice_independence(DEFAULT_SEED)
    }));
    out.push(timed("integral properties", || {
        integral_properties(DEFAULT_SEED)
    }));
    out.push(timed("normalization and symmetry", || {
        normalization_and_symmetry(DEFAULT_SEED)
    }));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariant::AggregateFactor;
    use crate::polytope::FacetMeasure;

    #[test]
    fn unimodular_pairs_are_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 0..5 {
            let (u, inv) = random_unimodular(&mut rng, n);
            assert_eq!(u.mul(&inv).unwrap(), IntMatrix::identity(n));
        }
    }

    #[test]
    fn random_quotients_build() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let (w, tau) = random_quotient(&mut rng);
            let m = build_model(&w, &tau).unwrap();
            assert!(m.polytope().is_full_dimensional());
        }
    }

    #[test]
    fn unnormalized_facets_are_caught() {
        let conv = Conventions {
            facet_measure: FacetMeasure::Unnormalized,
            ..Conventions::default()
        };
        let err = blowup_oracle_grid(conv).unwrap_err();
        assert!(err.contains("facets"), "{err}");
        // CP^n facets have <u,u> = 1 except the slanted one, which still matters
        assert!(cpn_vanishing(conv).is_err());
    }

    #[test]
    fn linear_factor_is_caught_by_blowup_only() {
        let conv = Conventions {
            aggregate: AggregateFactor::Linear,
            ..Conventions::default()
        };
        // n! = n for n = 1, 2, so CP^1 and CP^2 cannot tell; n = 3 can
        assert!(blowup_oracle_grid(conv).is_err());
        let cp12 = (1..=2).all(|d| {
            let m = cpn_pipeline(d, &rat(2, 1));
            Evaluator::with_conventions(&m, conv)
                .unwrap()
                .coordinate_report(0)
                .unwrap()
                .invariant
                .is_zero()
        });
        assert!(cp12);
    }
}
