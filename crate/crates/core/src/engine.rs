//! The q-HATM recurrence.
//!
//! With `H = 1` and the Laplace-domain operator rewritten in the evolution
//! domain (`L⁻¹[s^(−γ₀) L[z^β]] = J^{γ₀} z^β` on power terms), the m-th order
//! deformation equation becomes
//!
//! ```text
//! v_m = k_m v_{m−1} + h [ v_{m−1} + J^{γ₀}(G v_{m−1}) + w_m (J^{γ₀} f̃ − u₀) ]
//! ```
//!
//! with `G` the linear bracket, `w_m = 1 − k_m/n` and `k_m` zero for `m ≤ 1`
//! and `n` otherwise. The solution is assembled at `q = 1/n` as
//! `Σ v_m (1/n)^m`.

use alloc::vec::Vec;

use crate::problem::ProblemSpec;
use crate::series::FracSeries;
use crate::{QhatmError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QhatmParams {
    /// Numeric value of the fractional order symbol (α or β).
    pub gamma: f64,
    /// Convergence-control parameter.
    pub h: f64,
    /// Asymptotic parameter, `n ≥ 1`.
    pub n: u32,
    /// Truncation order `M`.
    pub order: usize,
}

impl QhatmParams {
    pub fn new(gamma: f64, h: f64, n: u32, order: usize) -> Self {
        Self { gamma, h, n, order }
    }

    pub fn validate(&self, spec: &ProblemSpec) -> Result<()> {
        if self.n < 1 {
            return Err(QhatmError::InvalidParams("n must be at least 1".into()));
        }
        if !self.h.is_finite() {
            return Err(QhatmError::InvalidParams(alloc::format!("h must be finite, got {}", self.h)));
        }
        spec.check_gamma(self.gamma)
    }
}

/// Iterates `v₀..v_M` and the assembled truncation `S_M`.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub iterates: Vec<FracSeries>,
    pub assembled: FracSeries,
    pub params: QhatmParams,
}

pub fn k_m(m: usize, n: u32) -> u32 {
    if m <= 1 {
        0
    } else {
        n
    }
}

/// Linear bracket `Σ cᵢ D^{γᵢ} v + M·v`, plus `f̃` when `with_source`.
pub fn bracket(v: &FracSeries, spec: &ProblemSpec, params: &QhatmParams, with_source: bool) -> Result<FracSeries> {
    let mut acc = v.apply_matrix(spec.bracket_matrix())?;
    for lt in spec.lower_terms() {
        let d = v.caputo(lt.order, params.gamma)?.scale(lt.coeff);
        acc = acc.add(&d)?;
    }
    if with_source {
        acc = acc.add(spec.source())?;
    }
    Ok(acc)
}

/// The m-th iterate from `v_{m−1}`.
pub fn deformation_step(v_prev: &FracSeries, m: usize, spec: &ProblemSpec, params: &QhatmParams) -> Result<FracSeries> {
    if m < 1 {
        return Err(QhatmError::InvalidParams("deformation step index must be >= 1".into()));
    }
    let k = k_m(m, params.n);
    let weight = 1.0 - k as f64 / params.n as f64;
    let lead = spec.leading_order();

    let mut g = bracket(v_prev, spec, params, false)?;
    if weight != 0.0 {
        g = g.add(&spec.source().scale(weight))?;
    }
    let mut r = v_prev.add(&g.rl_integral(lead, params.gamma)?)?;
    if weight != 0.0 {
        r = r.sub(&spec.initial_guess().scale(weight))?;
    }
    v_prev.scale(k as f64).add(&r.scale(params.h))
}

/// `Σ_{m} iterates[m] · (1/n)^m`.
pub fn assemble(iterates: &[FracSeries], n: u32) -> Result<FracSeries> {
    let first = iterates
        .first()
        .ok_or_else(|| QhatmError::InvalidParams("no iterates to assemble".into()))?;
    if n < 1 {
        return Err(QhatmError::InvalidParams("n must be at least 1".into()));
    }
    let q = 1.0 / n as f64;
    let mut weight = 1.0;
    let mut acc = FracSeries::zero(first.catalog().clone());
    for v in iterates {
        acc = acc.add(&v.scale(weight))?;
        weight *= q;
    }
    Ok(acc)
}

pub fn solve(spec: &ProblemSpec, params: &QhatmParams) -> Result<Solution> {
    params.validate(spec)?;
    let mut iterates = Vec::with_capacity(params.order + 1);
    iterates.push(spec.initial_guess().clone());
    for m in 1..=params.order {
        let next = deformation_step(&iterates[m - 1], m, spec, params)?;
        iterates.push(next);
    }
    let assembled = assemble(&iterates, params.n)?;
    Ok(Solution { iterates, assembled, params: *params })
}

/// `D^{γ₀} v + G v + f̃`: zero wherever `v` solves the equation.
pub fn residual_series(v: &FracSeries, spec: &ProblemSpec, params: &QhatmParams) -> Result<FracSeries> {
    let lead = v.caputo(spec.leading_order(), params.gamma)?;
    lead.add(&bracket(v, spec, params, true)?)
}
