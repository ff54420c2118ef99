//! JSON documents for custom problems and solver output.

use std::sync::Arc;

use qhatm_core::{
    AffineExponent, EvolutionVar, ExactSolution, Factor, FactorCatalog, FactorMatrix, FracSeries, LowerTerm,
    ProblemSpec, QhatmError, QhatmParams, Solution, Term,
};
use qhatm_core::problem::ProblemDef;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentDoc {
    pub p: i32,
    pub q: i32,
}

impl From<AffineExponent> for ExponentDoc {
    fn from(e: AffineExponent) -> Self {
        Self { p: e.p, q: e.q }
    }
}

impl From<ExponentDoc> for AffineExponent {
    fn from(e: ExponentDoc) -> Self {
        AffineExponent::new(e.p, e.q)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LowerTermDoc {
    pub coeff: f64,
    pub order: ExponentDoc,
}

/// `coeff · z^(p + qγ) · factor`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub coeff: f64,
    pub p: i32,
    pub q: i32,
    pub factor: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDoc {
    pub name: String,
    pub evolution_var: String,
    pub order_range: [f64; 2],
    pub leading_order: ExponentDoc,
    pub lower_terms: Vec<LowerTermDoc>,
    pub factors: Vec<String>,
    pub bracket_matrix: Vec<Vec<f64>>,
    pub source: Vec<TermDoc>,
    pub initial_guess: Vec<TermDoc>,
    pub coordinates: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

pub fn series_to_docs(s: &FracSeries) -> Vec<TermDoc> {
    let cat = s.catalog();
    s.terms()
        .iter()
        .map(|t| TermDoc {
            coeff: t.coeff,
            p: t.exponent.p,
            q: t.exponent.q,
            factor: cat.get(t.factor).map(Factor::id).unwrap_or("?").to_string(),
        })
        .collect()
}

pub fn docs_to_series(catalog: &Arc<FactorCatalog>, docs: &[TermDoc]) -> Result<FracSeries> {
    let terms = docs
        .iter()
        .map(|d| {
            let factor = Factor::from_id(&d.factor)
                .ok_or_else(|| Error::Usage(format!("unknown factor id `{}`", d.factor)))?;
            let idx = catalog
                .index_of(factor)
                .ok_or_else(|| Error::Usage(format!("factor `{}` is not listed in `factors`", d.factor)))?;
            Ok(Term::new(d.coeff, AffineExponent::new(d.p, d.q), idx))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FracSeries::from_terms(catalog.clone(), terms)?)
}

impl ProblemDoc {
    pub fn from_spec(spec: &ProblemSpec) -> Self {
        let def = spec.def();
        Self {
            name: def.name.clone(),
            evolution_var: def.evolution_var.name().to_string(),
            order_range: [def.order_range.0, def.order_range.1],
            leading_order: def.leading_order.into(),
            lower_terms: def
                .lower_terms
                .iter()
                .map(|l| LowerTermDoc { coeff: l.coeff, order: l.order.into() })
                .collect(),
            factors: def.catalog.factors().iter().map(|f| f.id().to_string()).collect(),
            bracket_matrix: def.bracket_matrix.rows(),
            source: series_to_docs(&def.source),
            initial_guess: series_to_docs(&def.initial_guess),
            coordinates: def.coordinates.clone(),
            exact: def.exact.map(|e| e.id().to_string()),
        }
    }

    pub fn into_spec(self) -> Result<ProblemSpec> {
        let evolution_var = EvolutionVar::from_name(&self.evolution_var)
            .ok_or_else(|| Error::Usage(format!("evolution_var must be \"t\" or \"x\", got `{}`", self.evolution_var)))?;
        let factors = self
            .factors
            .iter()
            .map(|id| Factor::from_id(id).ok_or_else(|| Error::Usage(format!("unknown factor id `{id}`"))))
            .collect::<Result<Vec<_>>>()?;
        let catalog = Arc::new(FactorCatalog::new(factors)?);
        if self.bracket_matrix.len() != catalog.len() {
            return Err(QhatmError::DimensionMismatch { expected: catalog.len(), found: self.bracket_matrix.len() }.into());
        }
        let bracket_matrix = FactorMatrix::from_rows(&self.bracket_matrix)?;
        let exact = match &self.exact {
            None => None,
            Some(id) => Some(
                ExactSolution::from_id(id).ok_or_else(|| Error::Usage(format!("unknown exact solution id `{id}`")))?,
            ),
        };
        let def = ProblemDef {
            name: self.name,
            evolution_var,
            order_range: (self.order_range[0], self.order_range[1]),
            leading_order: self.leading_order.into(),
            lower_terms: self
                .lower_terms
                .iter()
                .map(|l| LowerTerm { coeff: l.coeff, order: l.order.into() })
                .collect(),
            source: docs_to_series(&catalog, &self.source)?,
            initial_guess: docs_to_series(&catalog, &self.initial_guess)?,
            catalog,
            bracket_matrix,
            coordinates: self.coordinates,
            exact,
        };
        Ok(ProblemSpec::new(def)?)
    }
}

/// Parses and validates a custom-problem document.
pub fn load_custom(text: &str) -> Result<ProblemSpec> {
    let doc: ProblemDoc = serde_json::from_str(text)?;
    doc.into_spec()
}

pub fn serialize_spec(spec: &ProblemSpec) -> String {
    serde_json::to_string_pretty(&ProblemDoc::from_spec(spec)).expect("problem documents always serialize")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsDoc {
    pub gamma: f64,
    pub h: f64,
    pub n: u32,
    pub order: usize,
}

impl From<&QhatmParams> for ParamsDoc {
    fn from(p: &QhatmParams) -> Self {
        Self { gamma: p.gamma, h: p.h, n: p.n, order: p.order }
    }
}

/// Output of `solve --format json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveReport {
    pub tool: String,
    pub version: String,
    pub problem: String,
    pub params: ParamsDoc,
    pub factors: Vec<String>,
    pub iterates: Vec<Vec<TermDoc>>,
    pub assembled: Vec<TermDoc>,
}

impl SolveReport {
    pub fn new(spec: &ProblemSpec, sol: &Solution) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            problem: spec.name().to_string(),
            params: (&sol.params).into(),
            factors: spec.catalog().factors().iter().map(|f| f.id().to_string()).collect(),
            iterates: sol.iterates.iter().map(series_to_docs).collect(),
            assembled: series_to_docs(&sol.assembled),
        }
    }
}
