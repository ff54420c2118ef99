//! Problem definitions and the built-in telegraph examples.
//!
//! A problem is written in bracket form
//!
//! ```text
//! D^{γ₀} v + Σ cᵢ D^{γᵢ} v + M·v + f̃ = 0
//! ```
//!
//! where `D` acts on the evolution variable, `M` is the action of the
//! remaining (integer-order) operator on the factor catalog, and `f̃` is the
//! source as it appears on the zero side of the equation. Time-fractional
//! examples carry the Laplacian and the potential term in `M`;
//! space-fractional ones carry the negated temporal operator.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::factor::{Factor, FactorCatalog, FactorMatrix};
use crate::series::{AffineExponent, FracSeries, Term, EXPONENT_TOL};
use crate::{Coords, QhatmError, Result};

pub const BUILTIN_NAMES: [&str; 5] = ["ex41", "ex42", "ex43", "ex44", "ex45"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvolutionVar {
    T,
    X,
}

impl EvolutionVar {
    pub fn name(self) -> &'static str {
        match self {
            EvolutionVar::T => "t",
            EvolutionVar::X => "x",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "t" => Some(EvolutionVar::T),
            "x" => Some(EvolutionVar::X),
            _ => None,
        }
    }
}

/// A lower-order fractional derivative `coeff · D^order v` inside the bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerTerm {
    pub coeff: f64,
    pub order: AffineExponent,
}

/// Closed-form solutions available for the built-in problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactSolution {
    /// `e^(x − 2t)`
    ExpXMinus2T,
    /// `e^(x − t)`
    ExpXMinusT,
    /// `t + x²`
    TPlusXSq,
    /// `e^(x + y − 3t)`
    ExpXPlusYMinus3T,
    /// `e^(−2t) · sinh(x) sinh(y) sinh(z)`
    ExpNeg2TSinhXyz,
}

impl ExactSolution {
    pub const ALL: [ExactSolution; 5] = [
        ExactSolution::ExpXMinus2T,
        ExactSolution::ExpXMinusT,
        ExactSolution::TPlusXSq,
        ExactSolution::ExpXPlusYMinus3T,
        ExactSolution::ExpNeg2TSinhXyz,
    ];

    pub fn id(self) -> &'static str {
        match self {
            ExactSolution::ExpXMinus2T => "exp_x_minus_2t",
            ExactSolution::ExpXMinusT => "exp_x_minus_t",
            ExactSolution::TPlusXSq => "t_plus_x_sq",
            ExactSolution::ExpXPlusYMinus3T => "exp_x_plus_y_minus_3t",
            ExactSolution::ExpNeg2TSinhXyz => "exp_neg_2t_sinh_xyz",
        }
    }

    pub fn from_id(id: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.id() == id)
    }

    /// The order value at which the closed form solves the problem.
    pub fn classical_order(self) -> f64 {
        match self {
            ExactSolution::ExpXMinusT => 2.0,
            _ => 1.0,
        }
    }

    pub fn evolution_var(self) -> EvolutionVar {
        match self {
            ExactSolution::ExpXMinusT | ExactSolution::TPlusXSq => EvolutionVar::X,
            _ => EvolutionVar::T,
        }
    }

    pub fn variables(self) -> &'static [&'static str] {
        match self {
            ExactSolution::ExpXMinus2T | ExactSolution::ExpXMinusT | ExactSolution::TPlusXSq => &["x", "t"],
            ExactSolution::ExpXPlusYMinus3T => &["x", "y", "t"],
            ExactSolution::ExpNeg2TSinhXyz => &["x", "y", "z", "t"],
        }
    }

    /// Evaluates the closed form; `coords` must include the evolution variable.
    pub fn eval(self, coords: &Coords) -> Result<f64> {
        let x = coords.require("x")?;
        let t = coords.require("t")?;
        Ok(match self {
            ExactSolution::ExpXMinus2T => libm::exp(x - 2.0 * t),
            ExactSolution::ExpXMinusT => libm::exp(x - t),
            ExactSolution::TPlusXSq => t + x * x,
            ExactSolution::ExpXPlusYMinus3T => libm::exp(x + coords.require("y")? - 3.0 * t),
            ExactSolution::ExpNeg2TSinhXyz => {
                libm::exp(-2.0 * t)
                    * libm::sinh(x)
                    * libm::sinh(coords.require("y")?)
                    * libm::sinh(coords.require("z")?)
            }
        })
    }

    /// `(factor, rate)` when the closed form is `F · e^(rate·z)`.
    fn exponential_form(self) -> Option<(Factor, f64)> {
        match self {
            ExactSolution::ExpXMinus2T => Some((Factor::ExpX, -2.0)),
            ExactSolution::ExpXMinusT => Some((Factor::ExpNegT, 1.0)),
            ExactSolution::ExpXPlusYMinus3T => Some((Factor::ExpXPlusY, -3.0)),
            ExactSolution::ExpNeg2TSinhXyz => Some((Factor::SinhXyz, -2.0)),
            ExactSolution::TPlusXSq => None,
        }
    }

    /// First `k_max + 1` Taylor coefficients of the evolution factor, for
    /// closed forms `F · e^(rate·z)`.
    pub fn taylor_coeffs(self, k_max: usize) -> Result<Vec<f64>> {
        let (_, rate) = self.exponential_form().ok_or_else(|| {
            QhatmError::UnsupportedExactForm(format!("`{}` is not a separable exponential", self.id()))
        })?;
        let mut out = Vec::with_capacity(k_max + 1);
        let mut c = 1.0;
        for k in 0..=k_max {
            if k > 0 {
                c *= rate / k as f64;
            }
            out.push(c);
        }
        Ok(out)
    }

    /// Taylor polynomial of degree `k_max` in the evolution variable, as a
    /// series over `catalog`.
    pub fn taylor_series(self, catalog: &Arc<FactorCatalog>, k_max: usize) -> Result<FracSeries> {
        let index = |f: Factor| {
            catalog.index_of(f).ok_or_else(|| {
                QhatmError::UnsupportedExactForm(format!("catalog lacks factor `{}`", f.id()))
            })
        };
        let terms = match self.exponential_form() {
            Some((factor, _)) => {
                let j = index(factor)?;
                self.taylor_coeffs(k_max)?
                    .into_iter()
                    .enumerate()
                    .map(|(k, c)| Term::new(c, AffineExponent::int(k as i32), j))
                    .collect()
            }
            None => {
                // t·x⁰ + 1·x²
                let mut terms = vec![Term::new(1.0, AffineExponent::ZERO, index(Factor::T)?)];
                if k_max >= 2 {
                    terms.push(Term::new(1.0, AffineExponent::int(2), index(Factor::One)?));
                }
                terms
            }
        };
        FracSeries::from_terms(catalog.clone(), terms)
    }
}

/// Unvalidated problem description; turn it into a [`ProblemSpec`] with
/// [`ProblemSpec::new`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemDef {
    pub name: String,
    pub evolution_var: EvolutionVar,
    /// Admissible γ interval `(low, high]`.
    pub order_range: (f64, f64),
    pub leading_order: AffineExponent,
    pub lower_terms: Vec<LowerTerm>,
    pub catalog: Arc<FactorCatalog>,
    pub bracket_matrix: FactorMatrix,
    /// `f̃`, added to the bracket as is.
    pub source: FracSeries,
    pub initial_guess: FracSeries,
    /// Non-evolution variables read by the factors.
    pub coordinates: Vec<String>,
    pub exact: Option<ExactSolution>,
}

/// A validated linear fractional telegraph problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    def: ProblemDef,
}

fn invalid(msg: String) -> QhatmError {
    QhatmError::InvalidSpec(msg)
}

impl ProblemSpec {
    pub fn new(def: ProblemDef) -> Result<Self> {
        let (low, high) = def.order_range;
        if !(low.is_finite() && high.is_finite() && low < high) {
            return Err(invalid(format!("order range ({low}, {high}] is empty")));
        }
        let lead_low = def.leading_order.value(low);
        let lead_high = def.leading_order.value(high);
        if !(lead_low >= 0.0 && lead_high > 0.0) {
            return Err(invalid(format!(
                "leading order {} is not positive on ({low}, {high}]",
                def.leading_order
            )));
        }
        for lt in &def.lower_terms {
            if !lt.coeff.is_finite() {
                return Err(QhatmError::NonFiniteCoefficient(lt.coeff));
            }
            let at_low = lt.order.value(low);
            let at_high = lt.order.value(high);
            // affine in γ: endpoint checks cover the open interval
            let ok = at_low >= 0.0 && at_low <= lead_low && at_high > 0.0 && at_high < lead_high;
            if !ok {
                return Err(invalid(format!(
                    "lower-order term D^({}) is not strictly between 0 and the leading order {}",
                    lt.order, def.leading_order
                )));
            }
        }
        if def.bracket_matrix.dim() != def.catalog.len() {
            return Err(QhatmError::DimensionMismatch {
                expected: def.catalog.len(),
                found: def.bracket_matrix.dim(),
            });
        }
        for (label, s) in [("source", &def.source), ("initial guess", &def.initial_guess)] {
            if s.catalog().as_ref() != def.catalog.as_ref() {
                return Err(invalid(format!("{label} is built over a different factor catalog")));
            }
            for t in s.terms() {
                if t.exponent.value(low) < -EXPONENT_TOL || t.exponent.value(high) < -EXPONENT_TOL {
                    return Err(invalid(format!("{label} has a negative exponent {}", t.exponent)));
                }
            }
        }
        let evo = def.evolution_var.name();
        for (i, c) in def.coordinates.iter().enumerate() {
            if c == evo {
                return Err(invalid(format!("evolution variable `{evo}` listed as a coordinate")));
            }
            if def.coordinates[..i].contains(c) {
                return Err(invalid(format!("coordinate `{c}` listed twice")));
            }
        }
        let known = |v: &str| def.coordinates.iter().any(|c| c == v);
        for f in def.catalog.factors() {
            if let Some(v) = f.variables().iter().find(|v| !known(v)) {
                return Err(invalid(format!("factor `{}` reads undeclared coordinate `{v}`", f.id())));
            }
        }
        if let Some(exact) = def.exact {
            if exact.evolution_var() != def.evolution_var {
                return Err(invalid(format!(
                    "exact solution `{}` evolves in `{}`",
                    exact.id(),
                    exact.evolution_var().name()
                )));
            }
            if let Some(v) = exact.variables().iter().find(|v| **v != evo && !known(v)) {
                return Err(invalid(format!("exact solution reads undeclared coordinate `{v}`")));
            }
        }
        Ok(Self { def })
    }

    pub fn def(&self) -> &ProblemDef {
        &self.def
    }

    pub fn name(&self) -> &str {
        &self.def.name
    }

    pub fn evolution_var(&self) -> EvolutionVar {
        self.def.evolution_var
    }

    pub fn order_range(&self) -> (f64, f64) {
        self.def.order_range
    }

    pub fn leading_order(&self) -> AffineExponent {
        self.def.leading_order
    }

    pub fn lower_terms(&self) -> &[LowerTerm] {
        &self.def.lower_terms
    }

    pub fn catalog(&self) -> &Arc<FactorCatalog> {
        &self.def.catalog
    }

    pub fn bracket_matrix(&self) -> &FactorMatrix {
        &self.def.bracket_matrix
    }

    pub fn source(&self) -> &FracSeries {
        &self.def.source
    }

    pub fn initial_guess(&self) -> &FracSeries {
        &self.def.initial_guess
    }

    pub fn coordinates(&self) -> &[String] {
        &self.def.coordinates
    }

    pub fn exact(&self) -> Option<ExactSolution> {
        self.def.exact
    }

    /// Checks `gamma ∈ (low, high]`.
    pub fn check_gamma(&self, gamma: f64) -> Result<()> {
        let (low, high) = self.def.order_range;
        if gamma > low && gamma <= high {
            Ok(())
        } else {
            Err(QhatmError::OrderOutOfRange { gamma, low, high })
        }
    }

    /// Evaluates `series` at a point that names every coordinate and the
    /// evolution variable.
    pub fn eval_series(&self, series: &FracSeries, gamma: f64, point: &Coords) -> Result<f64> {
        let z = point.require(self.def.evolution_var.name())?;
        series.evaluate(z, gamma, point)
    }

    /// Closed-form value at `point` (coordinates plus evolution variable).
    pub fn exact_eval(&self, point: &Coords) -> Result<f64> {
        self.def
            .exact
            .ok_or_else(|| QhatmError::NoExactSolution(self.def.name.clone()))?
            .eval(point)
    }

    pub fn taylor_coeffs(&self, k_max: usize) -> Result<Vec<f64>> {
        self.def
            .exact
            .ok_or_else(|| QhatmError::NoExactSolution(self.def.name.clone()))?
            .taylor_coeffs(k_max)
    }

    pub fn taylor_series(&self, k_max: usize) -> Result<FracSeries> {
        self.def
            .exact
            .ok_or_else(|| QhatmError::NoExactSolution(self.def.name.clone()))?
            .taylor_series(&self.def.catalog, k_max)
    }
}

fn series(catalog: &Arc<FactorCatalog>, terms: &[(f64, i32, Factor)]) -> FracSeries {
    let terms = terms
        .iter()
        .map(|&(c, p, f)| Term::new(c, AffineExponent::int(p), catalog.index_of(f).expect("factor in catalog")))
        .collect();
    FracSeries::from_terms(catalog.clone(), terms).expect("built-in series")
}

fn catalog(factors: &[Factor]) -> Arc<FactorCatalog> {
    Arc::new(FactorCatalog::new(factors.to_vec()).expect("built-in catalog"))
}

fn coords(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Time-fractional damped problem `D^{2γ}v + 2a·D^γ v + b²v = Δv` whose
/// factor is a Laplacian eigenfunction with eigenvalue `b²`, so the matrix
/// part vanishes. `u₀ = F·(1 + slope·t)`.
fn damped_time_problem(name: &str, factor: Factor, damping: f64, slope: f64, vars: &[&str], exact: ExactSolution) -> ProblemDef {
    let cat = catalog(&[factor]);
    ProblemDef {
        name: name.to_string(),
        evolution_var: EvolutionVar::T,
        order_range: (0.0, 1.0),
        leading_order: AffineExponent::gamma_multiple(2),
        lower_terms: vec![LowerTerm { coeff: damping, order: AffineExponent::gamma_multiple(1) }],
        source: FracSeries::zero(cat.clone()),
        initial_guess: series(&cat, &[(1.0, 0, factor), (slope, 1, factor)]),
        bracket_matrix: FactorMatrix::scalar(0.0),
        catalog: cat,
        coordinates: coords(vars),
        exact: Some(exact),
    }
}

fn builtin_def(name: &str) -> Option<ProblemDef> {
    Some(match name {
        "ex41" => damped_time_problem(name, Factor::ExpX, 2.0, -2.0, &["x"], ExactSolution::ExpXMinus2T),
        "ex42" => {
            // D^β_x v = (∂²_t + ∂_t + 1) v; on e^(-t) the operator is 1.
            let cat = catalog(&[Factor::ExpNegT]);
            ProblemDef {
                name: name.to_string(),
                evolution_var: EvolutionVar::X,
                order_range: (1.0, 2.0),
                leading_order: AffineExponent::gamma_multiple(1),
                lower_terms: Vec::new(),
                source: FracSeries::zero(cat.clone()),
                initial_guess: series(&cat, &[(1.0, 0, Factor::ExpNegT), (1.0, 1, Factor::ExpNegT)]),
                bracket_matrix: FactorMatrix::scalar(-1.0),
                catalog: cat,
                coordinates: coords(&["t"]),
                exact: Some(ExactSolution::ExpXMinusT),
            }
        }
        "ex43" => {
            // D^{2β}_x v = (∂²_t + ∂_t + 1) v − x² − t + 1 over {1, t}:
            // T(1) = 1, T(t) = 1 + t.
            let cat = catalog(&[Factor::One, Factor::T]);
            ProblemDef {
                name: name.to_string(),
                evolution_var: EvolutionVar::X,
                order_range: (0.0, 1.0),
                leading_order: AffineExponent::gamma_multiple(2),
                lower_terms: Vec::new(),
                source: series(&cat, &[(-1.0, 0, Factor::One), (1.0, 0, Factor::T), (1.0, 2, Factor::One)]),
                initial_guess: series(&cat, &[(1.0, 0, Factor::T)]),
                bracket_matrix: FactorMatrix::from_rows(&[vec![-1.0, -1.0], vec![0.0, -1.0]]).expect("2x2"),
                catalog: cat,
                coordinates: coords(&["t"]),
                exact: Some(ExactSolution::TPlusXSq),
            }
        }
        "ex44" => damped_time_problem(name, Factor::ExpXPlusY, 3.0, -3.0, &["x", "y"], ExactSolution::ExpXPlusYMinus3T),
        "ex45" => damped_time_problem(name, Factor::SinhXyz, 2.0, -2.0, &["x", "y", "z"], ExactSolution::ExpNeg2TSinhXyz),
        _ => return None,
    })
}

/// One of the built-in problems, by name (`ex41` … `ex45`).
pub fn builtin(name: &str) -> Result<ProblemSpec> {
    let def = builtin_def(name).ok_or_else(|| QhatmError::UnknownProblem(name.to_string()))?;
    ProblemSpec::new(def)
}
