//! Exact integer and rational linear algebra.
//!
//! Everything downstream (kernel lattices, moment polytopes, integrals) is
//! computed over `BigRational` / `BigInt`; there is no floating point in
//! this crate.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational scalar. Always reduced with a positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("no rational solution: right-hand side is not in the column space")]
    NoSolution,
    #[error("zero vector has no primitive representative")]
    ZeroVector,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cannot parse rational {0:?}")]
    BadRational(String),
}

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: &BigInt) -> Rational {
    Rational::from_integer(v.clone())
}

/// Parses `"p/q"` or `"p"` (optional sign, surrounding whitespace allowed).
pub fn parse_rational(s: &str) -> Result<Rational, LinalgError> {
    let bad = || LinalgError::BadRational(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Reduced `"p/q"`, or `"p"` when the denominator is 1.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_int_rat(a: &[BigInt], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + y * x)
}

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from small integer rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            entries.extend(r.iter().map(|&v| BigInt::from(v)));
        }
        Self {
            rows: rows.len(),
            cols,
            entries,
        }
    }

    pub fn from_big_rows(rows: &[Vec<BigInt>], cols: usize) -> Result<Self, LinalgError> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            entries.extend(r.iter().cloned());
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn to_rational_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(rat_int).collect())
            .collect()
    }

    pub fn rank(&self) -> usize {
        rank(&self.to_rational_rows())
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Replaces columns (a, b) by (x·a + y·b, u·a + v·b).
    fn combine_cols(&mut self, a: usize, b: usize, coeffs: [&BigInt; 4]) {
        let [x, y, u, v] = coeffs;
        for i in 0..self.rows {
            let ca = self[(i, a)].clone();
            let cb = self[(i, b)].clone();
            self[(i, a)] = x * &ca + y * &cb;
            self[(i, b)] = u * &ca + v * &cb;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Basis of the saturated integer kernel of `w` (an `m x (m - rank)` matrix).
///
/// Integer column reduction `W·U = [H | 0]` with `U` unimodular; the trailing
/// columns of `U` generate `ker(W) ∩ Z^m` because `U` is invertible over Z.
pub fn integer_kernel(w: &IntMatrix) -> IntMatrix {
    let m = w.cols();
    let mut h = w.clone();
    let mut u = IntMatrix::identity(m);
    let mut pivot = 0;
    for i in 0..h.rows() {
        if pivot == m {
            break;
        }
        for j in pivot + 1..m {
            if h[(i, j)].is_zero() {
                continue;
            }
            if h[(i, pivot)].is_zero() {
                h.swap_cols(pivot, j);
                u.swap_cols(pivot, j);
                continue;
            }
            let a = h[(i, pivot)].clone();
            let b = h[(i, j)].clone();
            let eg = a.extended_gcd(&b);
            let g = eg.gcd;
            // [x -b/g; y a/g] has determinant 1
            let nb = -(&b / &g);
            let na = &a / &g;
            let coeffs = [&eg.x, &eg.y, &nb, &na];
            h.combine_cols(pivot, j, coeffs);
            u.combine_cols(pivot, j, coeffs);
            debug_assert!(h[(i, j)].is_zero());
        }
        if !h[(i, pivot)].is_zero() {
            pivot += 1;
        }
    }
    let n = m - pivot;
    let mut q = IntMatrix::zeros(m, n);
    for r in 0..m {
        for c in 0..n {
            q[(r, c)] = u[(r, pivot + c)].clone();
        }
    }
    size_reduce_columns(&mut q);
    q
}

/// Cosmetic unimodular clean-up of a kernel basis: bring `Qᵀ` to Hermite form
/// so that small inputs produce small, stable bases.
fn size_reduce_columns(q: &mut IntMatrix) {
    let mut t = q.transpose();
    let (rows, cols) = (t.rows(), t.cols());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // gcd-eliminate column c below row r
        for i in r + 1..rows {
            if t[(i, c)].is_zero() {
                continue;
            }
            if t[(r, c)].is_zero() {
                swap_rows(&mut t, r, i);
                continue;
            }
            let a = t[(r, c)].clone();
            let b = t[(i, c)].clone();
            let eg = a.extended_gcd(&b);
            let nb = -(&b / &eg.gcd);
            let na = &a / &eg.gcd;
            for k in 0..cols {
                let ra = t[(r, k)].clone();
                let rb = t[(i, k)].clone();
                t[(r, k)] = &eg.x * &ra + &eg.y * &rb;
                t[(i, k)] = &nb * &ra + &na * &rb;
            }
        }
        if t[(r, c)].is_zero() {
            continue;
        }
        if t[(r, c)].is_negative() {
            for k in 0..cols {
                t[(r, k)] = -t[(r, k)].clone();
            }
        }
        let p = t[(r, c)].clone();
        for i in 0..r {
            let f = t[(i, c)].div_floor(&p);
            if f.is_zero() {
                continue;
            }
            for k in 0..cols {
                let v = &f * &t[(r, k)];
                t[(i, k)] -= v;
            }
        }
        r += 1;
    }
    *q = t.transpose();
}

fn swap_rows(m: &mut IntMatrix, a: usize, b: usize) {
    for k in 0..m.cols() {
        let tmp = m[(a, k)].clone();
        m[(a, k)] = m[(b, k)].clone();
        m[(b, k)] = tmp;
    }
}

/// Divides out the content of a nonzero integer vector.
pub fn primitive(v: &[BigInt]) -> Result<(Vec<BigInt>, BigInt), LinalgError> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return Err(LinalgError::ZeroVector);
    }
    Ok((v.iter().map(|x| x / &g).collect(), g))
}

/// Reduces `rows` in place to row echelon form; returns the pivot columns and
/// the number of row swaps performed.
fn echelon(rows: &mut [Vec<Rational>]) -> (Vec<usize>, usize) {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut swaps = 0;
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            rows.swap(p, r);
            swaps += 1;
        }
        let (top, rest) = rows.split_at_mut(r + 1);
        let prow = &top[r];
        for row in rest.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &prow[c];
            for k in c..ncols {
                let d = &f * &prow[k];
                row[k] -= d;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (pivots, swaps)
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    echelon(&mut m).0.len()
}

/// Exact determinant by rational Gaussian elimination.
pub fn determinant(m: &[Vec<Rational>]) -> Result<Rational, LinalgError> {
    let n = m.len();
    if let Some(bad) = m.iter().find(|r| r.len() != n) {
        return Err(LinalgError::NotSquare {
            rows: n,
            cols: bad.len(),
        });
    }
    let mut a = m.to_vec();
    let (pivots, swaps) = echelon(&mut a);
    if pivots.len() < n {
        return Ok(Rational::zero());
    }
    let mut det = (0..n).fold(Rational::one(), |acc, i| acc * &a[i][i]);
    if swaps % 2 == 1 {
        det = -det;
    }
    Ok(det)
}

/// Some `x` with `a·x = b`, free variables set to zero.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
    if a.len() != b.len() {
        return Err(LinalgError::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    let ncols = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let (pivots, _) = echelon(&mut aug);
    if pivots.last() == Some(&ncols) {
        return Err(LinalgError::NoSolution);
    }
    let mut x = vec![Rational::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate().rev() {
        let mut acc = aug[r][ncols].clone();
        for k in c + 1..ncols {
            acc -= &aug[r][k] * &x[k];
        }
        x[c] = acc / &aug[r][c];
    }
    Ok(x)
}

/// Particular solution `s0` of `W·s0 = tau`.
pub fn solve_rational(w: &IntMatrix, tau: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
    if tau.len() != w.rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: w.rows(),
            got: tau.len(),
        });
    }
    solve(&w.to_rational_rows(), tau)
}

/// Unique solution of a square system, `None` when singular.
pub fn solve_unique(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return None;
    }
    let mut check = a.to_vec();
    if echelon(&mut check).0.len() < n {
        return None;
    }
    solve(a, b).ok()
}
