//! Exact polyhedral engine: brute-force vertex enumeration, pulling
//! triangulations, and integrals of affine functions over the polytope and
//! over its facets with lattice-normalized measure.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::feasibility::{self, Constraint};
use crate::linalg::{self, dot, dot_int_rat, rat_int, Rational};

pub mod lasserre;

pub use lasserre::lasserre_volume;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("polytope is unbounded (recession direction {0:?})")]
    Unbounded(Vec<String>),
    #[error("polytope is empty")]
    Empty,
    #[error("polytope is not full-dimensional (affine dimension {affine_dim} < {dim})")]
    DegenerateInput { dim: usize, affine_dim: usize },
    #[error("inequality {index} has {got} coefficients, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("simplex vertices are affinely dependent")]
    DegenerateSimplex,
}

/// `offset + <normal, x> >= 0`. The normal is primitive, or zero for a
/// constant constraint that never defines a facet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inequality {
    pub normal: Vec<BigInt>,
    pub offset: Rational,
}

impl Inequality {
    pub fn new(normal: Vec<BigInt>, offset: Rational) -> Self {
        Self { normal, offset }
    }

    pub fn from_ints(normal: &[i64], offset: Rational) -> Self {
        Self::new(normal.iter().map(|&v| BigInt::from(v)).collect(), offset)
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        &self.offset + dot_int_rat(&self.normal, x)
    }

    fn normal_rat(&self) -> Vec<Rational> {
        self.normal.iter().map(rat_int).collect()
    }
}

/// `constant + <gradient, x>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineForm {
    pub constant: Rational,
    pub gradient: Vec<Rational>,
}

impl AffineForm {
    pub fn new(constant: Rational, gradient: Vec<Rational>) -> Self {
        Self { constant, gradient }
    }

    pub fn constant(value: Rational, dim: usize) -> Self {
        Self::new(value, vec![Rational::zero(); dim])
    }

    pub fn coordinate(i: usize, dim: usize) -> Self {
        let mut g = vec![Rational::zero(); dim];
        g[i] = Rational::from_integer(1.into());
        Self::new(Rational::zero(), g)
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        &self.constant + dot(&self.gradient, x)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(
            &self.constant * s,
            self.gradient.iter().map(|g| g * s).collect(),
        )
    }

    pub fn add(&self, other: &AffineForm) -> Self {
        Self::new(
            &self.constant + &other.constant,
            self.gradient
                .iter()
                .zip(&other.gradient)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub_constant(&self, c: &Rational) -> Self {
        Self::new(&self.constant - c, self.gradient.clone())
    }
}

/// Which vertex each face cones from during triangulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Apex {
    #[default]
    LexMin,
    LexMax,
}

/// How a facet simplex is weighted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FacetMeasure {
    /// `|det[E | u]| / ((d-1)! <u,u>)`: the lattice-normalized measure.
    #[default]
    Lattice,
    /// `|det[E | u]| / (d-1)!` without the `<u,u>` normalization. Only
    /// meaningful as a deliberately wrong variant for mutation checks.
    Unnormalized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FacetKind {
    /// (n-1)-dimensional.
    Regular,
    /// No vertex of the polytope is tight on the inequality.
    Empty,
    /// Tight vertices span a face of dimension < n-1.
    Degenerate,
}

#[derive(Debug, Clone)]
pub struct Facet {
    pub index: usize,
    pub vertices: Vec<usize>,
    pub normal: Vec<BigInt>,
    pub normal_norm_sq: BigInt,
    pub kind: FacetKind,
}

#[derive(Debug, Clone)]
pub struct Simplex {
    vertices: Vec<Vec<Rational>>,
}

impl Simplex {
    /// Rejects affinely dependent vertex lists.
    pub fn new(vertices: Vec<Vec<Rational>>) -> Result<Self, PolytopeError> {
        let d = vertices.len().saturating_sub(1);
        if vertices.is_empty() || affine_rank(&vertices) != d {
            return Err(PolytopeError::DegenerateSimplex);
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    fn edges(&self) -> Vec<Vec<Rational>> {
        let v0 = &self.vertices[0];
        self.vertices[1..]
            .iter()
            .map(|v| v.iter().zip(v0).map(|(a, b)| a - b).collect())
            .collect()
    }

    /// Lebesgue volume of a full-dimensional simplex.
    pub fn volume(&self) -> Rational {
        let d = self.vertices.len() - 1;
        let det = linalg::determinant(&self.edges()).expect("square edge matrix");
        det.abs() / factorial(d)
    }

    /// Measure of a codimension-one simplex lying in a hyperplane with
    /// primitive normal `u`.
    pub fn facet_volume(&self, u: &[BigInt], measure: FacetMeasure) -> Rational {
        let d = self.vertices.len() - 1;
        let mut rows = self.edges();
        rows.push(u.iter().map(rat_int).collect());
        let det = linalg::determinant(&rows).expect("square matrix");
        let base = det.abs() / factorial(d);
        match measure {
            FacetMeasure::Lattice => {
                let nsq: BigInt = u.iter().map(|x| x * x).sum();
                base / rat_int(&nsq)
            }
            FacetMeasure::Unnormalized => base,
        }
    }

    /// Mean of an affine form over the simplex (its value at the barycenter).
    pub fn mean(&self, f: &AffineForm) -> Rational {
        let sum = self
            .vertices
            .iter()
            .fold(Rational::zero(), |acc, v| acc + f.eval(v));
        sum / Rational::from_integer(self.vertices.len().into())
    }
}

pub fn factorial(n: usize) -> Rational {
    Rational::from_integer((1..=n).fold(BigInt::from(1), |acc, k| acc * k))
}

fn affine_rank(points: &[Vec<Rational>]) -> usize {
    let Some((p0, rest)) = points.split_first() else {
        return 0;
    };
    let diffs: Vec<Vec<Rational>> = rest
        .iter()
        .map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect())
        .collect();
    linalg::rank(&diffs)
}

/// Vertex list and, per vertex, the indices of the inequalities tight there.
pub type VertexIncidence = (Vec<Vec<Rational>>, Vec<BTreeSet<usize>>);

/// All vertices of `{x : offset_k + <normal_k, x> >= 0}` by brute force over
/// `dim`-subsets of inequalities, with full tight-set incidence.
pub fn enumerate_vertices(
    dim: usize,
    inequalities: &[Inequality],
) -> Result<VertexIncidence, PolytopeError> {
    for (index, ineq) in inequalities.iter().enumerate() {
        if ineq.normal.len() != dim {
            return Err(PolytopeError::DimensionMismatch {
                index,
                expected: dim,
                got: ineq.normal.len(),
            });
        }
    }
    let normals: Vec<Vec<Rational>> = inequalities.iter().map(Inequality::normal_rat).collect();
    if let Some(ray) = feasibility::nonzero_cone_point(&normals, dim) {
        let system: Vec<Constraint> = inequalities
            .iter()
            .zip(&normals)
            .map(|(ineq, n)| Constraint::new(n.clone(), -ineq.offset.clone()))
            .collect();
        if !feasibility::is_feasible(&system, dim) {
            return Err(PolytopeError::Empty);
        }
        return Err(PolytopeError::Unbounded(
            ray.iter().map(linalg::format_rational).collect(),
        ));
    }

    let mut found: BTreeSet<Vec<Rational>> = BTreeSet::new();
    let usable: Vec<usize> = (0..inequalities.len())
        .filter(|&k| inequalities[k].normal.iter().any(|x| !x.is_zero()))
        .collect();
    for subset in combinations(usable.len(), dim) {
        let rows: Vec<Vec<Rational>> = subset.iter().map(|&i| normals[usable[i]].clone()).collect();
        let rhs: Vec<Rational> = subset
            .iter()
            .map(|&i| -inequalities[usable[i]].offset.clone())
            .collect();
        let Some(x) = linalg::solve_unique(&rows, &rhs) else {
            continue;
        };
        if inequalities.iter().all(|ineq| !ineq.eval(&x).is_negative()) {
            found.insert(x);
        }
    }
    if found.is_empty() {
        return Err(PolytopeError::Empty);
    }
    let vertices: Vec<Vec<Rational>> = found.into_iter().collect();
    let incidence = vertices
        .iter()
        .map(|v| {
            (0..inequalities.len())
                .filter(|&k| inequalities[k].eval(v).is_zero())
                .collect()
        })
        .collect();
    Ok((vertices, incidence))
}

/// Index subsets of size `k` from `0..n`, lexicographic.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Bounded, nonempty H-polytope with its vertices (sorted lexicographically)
/// and vertex/inequality incidence.
#[derive(Debug, Clone)]
pub struct Polytope {
    dim: usize,
    inequalities: Vec<Inequality>,
    vertices: Vec<Vec<Rational>>,
    incidence: Vec<BTreeSet<usize>>,
    affine_dim: usize,
}

impl Polytope {
    pub fn new(dim: usize, inequalities: Vec<Inequality>) -> Result<Self, PolytopeError> {
        let (vertices, incidence) = enumerate_vertices(dim, &inequalities)?;
        let affine_dim = affine_rank(&vertices);
        Ok(Self {
            dim,
            inequalities,
            vertices,
            incidence,
            affine_dim,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inequalities(&self) -> &[Inequality] {
        &self.inequalities
    }

    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    pub fn incidence(&self) -> &[BTreeSet<usize>] {
        &self.incidence
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == self.dim
    }

    fn require_full_dim(&self) -> Result<(), PolytopeError> {
        if self.is_full_dimensional() {
            Ok(())
        } else {
            Err(PolytopeError::DegenerateInput {
                dim: self.dim,
                affine_dim: self.affine_dim,
            })
        }
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.inequalities
            .iter()
            .all(|ineq| !ineq.eval(x).is_negative())
    }

    fn tight_vertices(&self, k: usize) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| self.incidence[v].contains(&k))
            .collect()
    }

    fn face_dim(&self, face: &[usize]) -> usize {
        let pts: Vec<Vec<Rational>> = face.iter().map(|&v| self.vertices[v].clone()).collect();
        affine_rank(&pts)
    }

    pub fn facet(&self, k: usize) -> Facet {
        let ineq = &self.inequalities[k];
        let normal_norm_sq = ineq.normal.iter().map(|x| x * x).sum();
        let vertices = if ineq.normal.iter().all(Zero::is_zero) {
            Vec::new()
        } else {
            self.tight_vertices(k)
        };
        let kind = if vertices.is_empty() {
            FacetKind::Empty
        } else if self.face_dim(&vertices) + 1 == self.dim {
            FacetKind::Regular
        } else {
            FacetKind::Degenerate
        };
        Facet {
            index: k,
            vertices,
            normal: ineq.normal.clone(),
            normal_norm_sq,
            kind,
        }
    }

    pub fn facets(&self) -> Vec<Facet> {
        (0..self.inequalities.len())
            .map(|k| self.facet(k))
            .collect()
    }

    /// Pulling triangulation of a face given by its vertex indices.
    fn triangulate_face(&self, face: &[usize], dim: usize, apex: Apex) -> Vec<Vec<usize>> {
        if dim == 0 {
            return vec![vec![face[0]]];
        }
        // vertices are stored sorted, so index order is lexicographic order
        let v0 = match apex {
            Apex::LexMin => *face.iter().min().expect("nonempty face"),
            Apex::LexMax => *face.iter().max().expect("nonempty face"),
        };
        let mut subfaces: BTreeSet<Vec<usize>> = BTreeSet::new();
        for k in 0..self.inequalities.len() {
            let sub: Vec<usize> = face
                .iter()
                .copied()
                .filter(|&v| self.incidence[v].contains(&k))
                .collect();
            if sub.is_empty() || sub.len() == face.len() || sub.contains(&v0) {
                continue;
            }
            if self.face_dim(&sub) + 1 == dim {
                subfaces.insert(sub);
            }
        }
        let mut cells = Vec::new();
        for sub in subfaces {
            for mut cell in self.triangulate_face(&sub, dim - 1, apex) {
                cell.insert(0, v0);
                cells.push(cell);
            }
        }
        cells
    }

    fn to_simplices(&self, cells: Vec<Vec<usize>>) -> Vec<Simplex> {
        cells
            .into_iter()
            .map(|cell| {
                Simplex::new(cell.iter().map(|&v| self.vertices[v].clone()).collect())
                    .expect("pulling triangulation yields proper simplices")
            })
            .collect()
    }

    pub fn triangulate(&self) -> Result<Vec<Simplex>, PolytopeError> {
        self.triangulate_with(Apex::LexMin)
    }

    pub fn triangulate_with(&self, apex: Apex) -> Result<Vec<Simplex>, PolytopeError> {
        self.require_full_dim()?;
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        Ok(self.to_simplices(self.triangulate_face(&all, self.dim, apex)))
    }

    /// Triangulation of a regular facet; empty for empty or degenerate ones.
    pub fn triangulate_facet(&self, facet: &Facet, apex: Apex) -> Vec<Simplex> {
        if facet.kind != FacetKind::Regular {
            return Vec::new();
        }
        if self.dim == 0 {
            return Vec::new();
        }
        self.to_simplices(self.triangulate_face(&facet.vertices, self.dim - 1, apex))
    }

    pub fn volume(&self) -> Result<Rational, PolytopeError> {
        self.volume_with(Apex::LexMin)
    }

    pub fn volume_with(&self, apex: Apex) -> Result<Rational, PolytopeError> {
        Ok(self
            .triangulate_with(apex)?
            .iter()
            .fold(Rational::zero(), |acc, s| acc + s.volume()))
    }

    /// Exact `∫_Δ f dx` for affine `f`.
    pub fn integrate_affine(&self, f: &AffineForm) -> Result<Rational, PolytopeError> {
        self.integrate_affine_with(f, Apex::LexMin)
    }

    pub fn integrate_affine_with(
        &self,
        f: &AffineForm,
        apex: Apex,
    ) -> Result<Rational, PolytopeError> {
        Ok(self
            .triangulate_with(apex)?
            .iter()
            .fold(Rational::zero(), |acc, s| acc + s.volume() * s.mean(f)))
    }

    pub fn facet_lattice_volume(&self, facet: &Facet) -> Rational {
        self.facet_volume_with(facet, FacetMeasure::Lattice)
    }

    pub fn facet_volume_with(&self, facet: &Facet, measure: FacetMeasure) -> Rational {
        self.triangulate_facet(facet, Apex::LexMin)
            .iter()
            .fold(Rational::zero(), |acc, s| {
                acc + s.facet_volume(&facet.normal, measure)
            })
    }

    pub fn integrate_affine_facet(&self, facet: &Facet, f: &AffineForm) -> Rational {
        self.integrate_affine_facet_with(facet, f, FacetMeasure::Lattice)
    }

    pub fn integrate_affine_facet_with(
        &self,
        facet: &Facet,
        f: &AffineForm,
        measure: FacetMeasure,
    ) -> Rational {
        self.triangulate_facet(facet, Apex::LexMin)
            .iter()
            .fold(Rational::zero(), |acc, s| {
                acc + s.facet_volume(&facet.normal, measure) * s.mean(f)
            })
    }
}
