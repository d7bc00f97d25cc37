//! JSON manifold descriptions and report files.
//!
//! Rationals travel as reduced `"p/q"` strings (or `"p"`), never as JSON
//! numbers, so values survive any JSON toolchain unchanged. Integer
//! entries of weights and loops may be JSON integers or decimal strings.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::delzant::{AssumptionReport, DelzantModel};
use crate::invariant::{Evaluator, InvariantReport, LoopSpec};
use crate::linalg::{format_rational, parse_rational, IntMatrix, Rational};
use crate::polytope::FacetKind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
}

fn field_err(field: impl Into<String>, message: impl Into<String>) -> SpecError {
    SpecError::Field {
        field: field.into(),
        message: message.into(),
    }
}

/// An integer given either as a JSON number or as a decimal string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntEntry {
    Number(i64),
    Text(String),
}

impl IntEntry {
    fn to_bigint(&self) -> Option<BigInt> {
        match self {
            IntEntry::Number(v) => Some(BigInt::from(*v)),
            IntEntry::Text(s) => s.trim().parse().ok(),
        }
    }
}

impl From<i64> for IntEntry {
    fn from(v: i64) -> Self {
        IntEntry::Number(v)
    }
}

/// On-disk manifold description: `weights[j]` is the weight vector `w_j`
/// (so the array is `m x r`), `tau` has `r` rational strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldSpecFile {
    pub name: String,
    pub weights: Vec<Vec<IntEntry>>,
    pub tau: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loops: Option<Vec<Vec<IntEntry>>>,
}

/// Validated manifold description.
#[derive(Debug, Clone)]
pub struct ManifoldSpec {
    pub name: String,
    /// `r x m`, columns are the weight vectors.
    pub weights: IntMatrix,
    pub tau: Vec<Rational>,
    pub loops: Vec<LoopSpec>,
}

impl ManifoldSpecFile {
    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        serde_json::from_str(text).map_err(|e| SpecError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn validate(&self) -> Result<ManifoldSpec, SpecError> {
        let m = self.weights.len();
        let r = self.tau.len();
        if r == 0 {
            return Err(field_err("tau", "must have at least one entry (r >= 1)"));
        }
        if m < r {
            return Err(field_err(
                "weights",
                format!("need at least r = {r} weight vectors, got {m}"),
            ));
        }
        let mut rows = Vec::with_capacity(m);
        for (j, w) in self.weights.iter().enumerate() {
            if w.len() != r {
                return Err(field_err(
                    format!("weights[{j}]"),
                    format!("has {} entries, expected r = {r} (length of tau)", w.len()),
                ));
            }
            let parsed: Option<Vec<BigInt>> = w.iter().map(IntEntry::to_bigint).collect();
            rows.push(parsed.ok_or_else(|| field_err(format!("weights[{j}]"), "not an integer"))?);
        }
        // rows are w_j; the model wants them as columns
        let weights = IntMatrix::from_big_rows(&rows, r)
            .map_err(|e| field_err("weights", e.to_string()))?
            .transpose();
        let tau = self
            .tau
            .iter()
            .enumerate()
            .map(|(i, s)| {
                parse_rational(s).map_err(|_| {
                    field_err(format!("tau[{i}]"), format!("{s:?} is not a rational p/q"))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut loops = Vec::new();
        for (i, c) in self.loops.iter().flatten().enumerate() {
            if c.len() != m {
                return Err(field_err(
                    format!("loops[{i}]"),
                    format!("has {} weights, expected m = {m}", c.len()),
                ));
            }
            let parsed: Option<Vec<BigInt>> = c.iter().map(IntEntry::to_bigint).collect();
            loops.push(LoopSpec::new(parsed.ok_or_else(|| {
                field_err(format!("loops[{i}]"), "not an integer")
            })?));
        }
        Ok(ManifoldSpec {
            name: self.name.clone(),
            weights,
            tau,
            loops,
        })
    }
}

/// A rational serialized as a reduced `"p/q"` string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ExactRational(pub Rational);

impl TryFrom<String> for ExactRational {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        parse_rational(&s)
            .map(ExactRational)
            .map_err(|e| e.to_string())
    }
}

impl From<ExactRational> for String {
    fn from(q: ExactRational) -> String {
        format_rational(&q.0)
    }
}

impl From<&Rational> for ExactRational {
    fn from(q: &Rational) -> Self {
        ExactRational(q.clone())
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

fn exact_vec(v: &[Rational]) -> Vec<ExactRational> {
    v.iter().map(ExactRational::from).collect()
}

fn int_strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifoldSummary {
    pub coordinates: usize,
    pub torus_rank: usize,
    pub dimension: usize,
    pub tau: Vec<ExactRational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssumptionSummary {
    pub rank: usize,
    pub rank_ok: bool,
    pub half_space_ok: bool,
    pub half_space_witness: Option<Vec<ExactRational>>,
}

impl From<&AssumptionReport> for AssumptionSummary {
    fn from(r: &AssumptionReport) -> Self {
        Self {
            rank: r.rank,
            rank_ok: r.rank_ok(),
            half_space_ok: r.half_space_ok(),
            half_space_witness: r.half_space_witness.as_deref().map(exact_vec),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetSummary {
    /// 1-based coordinate `k` with `F_k = {z_k = 0}`.
    pub coordinate: usize,
    pub normal: Vec<String>,
    pub offset: ExactRational,
    pub scale: String,
    pub kind: String,
    pub vertex_count: usize,
    pub lattice_volume: ExactRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeSummary {
    pub dimension: usize,
    pub vertices: Vec<Vec<ExactRational>>,
    pub facets: Vec<FacetSummary>,
    pub volume: ExactRational,
    pub smoothness: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetValue {
    pub coordinate: usize,
    pub value: ExactRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopBlock {
    pub label: String,
    pub weights: Vec<String>,
    pub kappa: ExactRational,
    pub facet_contributions: Vec<FacetValue>,
    pub invariant: ExactRational,
    pub verdict: String,
}

impl From<&InvariantReport> for LoopBlock {
    fn from(r: &InvariantReport) -> Self {
        Self {
            label: r.loop_spec.to_string(),
            weights: int_strings(r.loop_spec.weights()),
            kappa: (&r.kappa).into(),
            facet_contributions: r
                .facet_contributions
                .iter()
                .enumerate()
                .map(|(k, v)| FacetValue {
                    coordinate: k + 1,
                    value: v.into(),
                })
                .collect(),
            invariant: (&r.invariant).into(),
            verdict: r.verdict.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportFile {
    pub name: String,
    pub manifold: ManifoldSummary,
    pub assumptions: AssumptionSummary,
    pub polytope: PolytopeSummary,
    pub loops: Vec<LoopBlock>,
    pub warnings: Vec<String>,
}

fn kind_name(kind: FacetKind) -> &'static str {
    match kind {
        FacetKind::Regular => "regular",
        FacetKind::Empty => "empty",
        FacetKind::Degenerate => "degenerate",
    }
}

impl ReportFile {
    pub fn build(
        name: &str,
        assumptions: &AssumptionReport,
        model: &DelzantModel,
        evaluator: &Evaluator<'_>,
        loops: &[InvariantReport],
    ) -> Self {
        let polytope = model.polytope();
        let facets = polytope
            .facets()
            .into_iter()
            .map(|f| FacetSummary {
                coordinate: f.index + 1,
                normal: int_strings(&f.normal),
                offset: (&polytope.inequalities()[f.index].offset).into(),
                scale: model.scale(f.index).to_string(),
                kind: kind_name(f.kind).to_string(),
                vertex_count: f.vertices.len(),
                lattice_volume: evaluator.facet_volume(f.index).into(),
            })
            .collect();
        let smoothness = model.smoothness_class();
        let mut warnings = Vec::new();
        if smoothness != crate::delzant::Smoothness::Delzant {
            warnings.push(format!(
                "polytope is {smoothness}, not Delzant: the quotient is an orbifold or singular; values are computed from the polytope anyway"
            ));
        }
        for k in model.redundant_facets() {
            warnings.push(format!(
                "coordinate z{} never vanishes on the level set; its facet is empty and contributes 0",
                k + 1
            ));
        }
        Self {
            name: name.to_string(),
            manifold: ManifoldSummary {
                coordinates: model.coordinates(),
                torus_rank: model.torus_rank(),
                dimension: model.dim(),
                tau: exact_vec(model.tau()),
            },
            assumptions: assumptions.into(),
            polytope: PolytopeSummary {
                dimension: model.dim(),
                vertices: polytope.vertices().iter().map(|v| exact_vec(v)).collect(),
                facets,
                volume: evaluator.volume().into(),
                smoothness: smoothness.to_string(),
            },
            loops: loops.iter().map(LoopBlock::from).collect(),
            warnings,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        serde_json::from_str(text).map_err(|e| SpecError::Json(e.to_string()))
    }

    /// Plain-text rendering for the terminal.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let m = &self.manifold;
        let tau: Vec<String> = m.tau.iter().map(ToString::to_string).collect();
        out.push_str(&format!("manifold: {}\n", self.name));
        out.push_str(&format!(
            "  m = {}, r = {}, real dimension {} (polytope dimension {}), tau = ({})\n",
            m.coordinates,
            m.torus_rank,
            2 * m.dimension,
            m.dimension,
            tau.join(", ")
        ));
        let a = &self.assumptions;
        let witness = a
            .half_space_witness
            .as_ref()
            .map(|xi| {
                let parts: Vec<String> = xi.iter().map(ToString::to_string).collect();
                format!(" (xi = ({}))", parts.join(", "))
            })
            .unwrap_or_default();
        out.push_str(&format!(
            "assumptions: rank {} [{}], open half space [{}]{}\n",
            a.rank,
            if a.rank_ok { "ok" } else { "FAIL" },
            if a.half_space_ok { "ok" } else { "FAIL" },
            witness
        ));
        let p = &self.polytope;
        out.push_str(&format!(
            "polytope: {} vertices, {} facets, volume {}, {}\n",
            p.vertices.len(),
            p.facets.len(),
            p.volume,
            p.smoothness
        ));
        for f in &p.facets {
            out.push_str(&format!(
                "  z{} = 0: normal ({}), offset {}, {} ({} vertices), lattice volume {}\n",
                f.coordinate,
                f.normal.join(", "),
                f.offset,
                f.kind,
                f.vertex_count,
                f.lattice_volume
            ));
        }
        for l in &self.loops {
            out.push_str(&format!(
                "loop {}: kappa = {}, I = {} -> {}\n",
                l.label, l.kappa, l.invariant, l.verdict
            ));
            let parts: Vec<String> = l
                .facet_contributions
                .iter()
                .map(|f| format!("N{} = {}", f.coordinate, f.value))
                .collect();
            out.push_str(&format!("  {}\n", parts.join(", ")));
        }
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out
    }
}
