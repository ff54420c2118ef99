//! Diagnostics built on the engine: h-curves, error grids, residual sweeps
//! and the ex45 comparison table.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::engine::{residual_series, solve, QhatmParams};
use crate::problem::{builtin, ProblemSpec};
use crate::{Coords, QhatmError, Result};

/// Curve values with magnitude above this are reported as divergent.
pub const DIVERGENCE_THRESHOLD: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub h: f64,
    /// NaN when `divergent` is set.
    pub value: f64,
    pub divergent: bool,
}

impl CurvePoint {
    fn new(h: f64, raw: f64) -> Self {
        if raw.is_finite() && raw.abs() <= DIVERGENCE_THRESHOLD {
            Self { h, value: raw, divergent: false }
        } else {
            Self { h, value: f64::NAN, divergent: true }
        }
    }
}

/// Value of `S_M(h)` at `point`.
pub fn series_value_at(spec: &ProblemSpec, params: &QhatmParams, point: &Coords) -> Result<f64> {
    let sol = solve(spec, params)?;
    spec.eval_series(&sol.assembled, params.gamma, point)
}

/// Samples `S_M` at a fixed point over a uniform grid of `h`.
#[allow(clippy::too_many_arguments)]
pub fn h_curve(
    spec: &ProblemSpec,
    gamma: f64,
    n: u32,
    order: usize,
    point: &Coords,
    h_min: f64,
    h_max: f64,
    steps: usize,
) -> Result<Vec<CurvePoint>> {
    if steps < 2 {
        return Err(QhatmError::InvalidGrid("an h-curve needs at least 2 steps".into()));
    }
    if !(h_min < h_max) || !h_min.is_finite() || !h_max.is_finite() {
        return Err(QhatmError::InvalidGrid(alloc::format!("h range [{h_min}, {h_max}] is empty")));
    }
    let span = h_max - h_min;
    (0..steps)
        .map(|i| {
            let h = if i + 1 == steps { h_max } else { h_min + span * i as f64 / (steps - 1) as f64 };
            let v = series_value_at(spec, &QhatmParams::new(gamma, h, n, order), point)?;
            Ok(CurvePoint::new(h, v))
        })
        .collect()
}

/// One axis of a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridAxis {
    pub name: String,
    pub values: Vec<f64>,
}

impl GridAxis {
    /// `start, start+step, …` up to and including `stop` (within 1e-9 of a step).
    pub fn uniform(name: &str, start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(QhatmError::InvalidGrid(alloc::format!("axis `{name}` has non-finite bounds")));
        }
        if start == stop {
            return Ok(Self { name: name.to_string(), values: alloc::vec![start] });
        }
        if !(step > 0.0) || stop < start {
            return Err(QhatmError::InvalidGrid(alloc::format!(
                "axis `{name}` needs start <= stop and step > 0"
            )));
        }
        let count = libm::floor((stop - start) / step + 1e-9) as usize + 1;
        let values = (0..count).map(|k| start + step * k as f64).collect();
        Ok(Self { name: name.to_string(), values })
    }

    pub fn points(name: &str, values: Vec<f64>) -> Self {
        Self { name: name.to_string(), values }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Grid {
    pub axes: Vec<GridAxis>,
}

impl Grid {
    pub fn new(axes: Vec<GridAxis>) -> Self {
        Self { axes }
    }

    fn axis(&self, name: &str) -> Result<&GridAxis> {
        self.axes
            .iter()
            .find(|a| a.name == name)
            .ok_or_else(|| QhatmError::InvalidGrid(alloc::format!("grid has no axis `{name}`")))
    }

    /// Cartesian product over `names`, first name outermost.
    pub fn nodes(&self, names: &[String]) -> Result<Vec<Coords>> {
        let axes: Vec<&GridAxis> = names.iter().map(|n| self.axis(n)).collect::<Result<_>>()?;
        let mut nodes = alloc::vec![Coords::new()];
        for axis in axes {
            let mut next = Vec::with_capacity(nodes.len() * axis.values.len());
            for node in &nodes {
                for &v in &axis.values {
                    next.push(node.clone().with(&axis.name, v));
                }
            }
            nodes = next;
        }
        Ok(nodes)
    }
}

/// Column names of a point: the spec's coordinates, then the evolution variable.
pub fn point_columns(spec: &ProblemSpec) -> Vec<String> {
    let mut cols: Vec<String> = spec.coordinates().to_vec();
    cols.push(spec.evolution_var().name().to_string());
    cols
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRecord {
    /// Values in [`point_columns`] order.
    pub point: Vec<f64>,
    pub approx: f64,
    pub exact: f64,
    pub abs_err: f64,
}

pub fn error_grid(spec: &ProblemSpec, params: &QhatmParams, grid: &Grid) -> Result<Vec<ErrorRecord>> {
    let exact = spec
        .exact()
        .ok_or_else(|| QhatmError::NoExactSolution(spec.name().to_string()))?;
    let required = exact.classical_order();
    if (params.gamma - required).abs() > 1e-12 {
        return Err(QhatmError::ExactNotValid { gamma: params.gamma, required });
    }
    let sol = solve(spec, params)?;
    let cols = point_columns(spec);
    grid.nodes(&cols)?
        .into_iter()
        .map(|node| {
            let approx = spec.eval_series(&sol.assembled, params.gamma, &node)?;
            let exact = exact.eval(&node)?;
            let point = cols.iter().map(|c| node.get(c).unwrap_or(f64::NAN)).collect();
            Ok(ErrorRecord { point, approx, exact, abs_err: (approx - exact).abs() })
        })
        .collect()
}

/// `|residual(S_M)|` at each point.
pub fn residual_sweep(spec: &ProblemSpec, params: &QhatmParams, points: &[Coords]) -> Result<Vec<(Coords, f64)>> {
    let sol = solve(spec, params)?;
    let res = residual_series(&sol.assembled, spec, params)?;
    points
        .iter()
        .map(|p| Ok((p.clone(), spec.eval_series(&res, params.gamma, p)?.abs())))
        .collect()
}

/// Evolution-variable Taylor coefficients of the problem's exact solution.
pub fn taylor_coeffs(spec: &ProblemSpec, k_max: usize) -> Result<Vec<f64>> {
    spec.taylor_coeffs(k_max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    pub xyz: f64,
    pub t: f64,
    pub qhatm: f64,
    pub exact: f64,
    pub abs_err: f64,
    pub paper_qhatm: f64,
    pub paper_exact: f64,
}

/// Reference `(xyz, t, q-HATM, exact)` values for ex45 at α = 1, h = −1,
/// n = 1, t outer.
pub const PAPER_TABLE_EX45: [(f64, f64, f64, f64); 16] = [
    (0.25, 0.25, 0.009_776_9, 0.009_777_2),
    (0.50, 0.25, 0.085_820_2, 0.085_823_1),
    (0.75, 0.25, 0.337_252_7, 0.337_264_1),
    (1.00, 0.25, 0.984_407_5, 0.984_440_4),
    (0.25, 0.50, 0.005_91, 0.005_93),
    (0.50, 0.50, 0.051_88, 0.052_05),
    (0.75, 0.50, 0.203_88, 0.204_56),
    (1.00, 0.50, 0.595_12, 0.597_09),
    (0.25, 0.75, 0.003_38, 0.003_59),
    (0.50, 0.75, 0.029_73, 0.031_57),
    (0.75, 0.75, 0.116_85, 0.124_07),
    (1.00, 0.75, 0.341_09, 0.362_15),
    (0.25, 1.00, 0.002_17, 0.002_181),
    (0.50, 1.00, 0.019_12, 0.019_149),
    (0.75, 1.00, 0.075_12, 0.075_25),
    (1.00, 1.00, 0.219_27, 0.219_65),
];

/// The ex45 comparison table at α = 1, h = −1, n = 1 and truncation `order`.
pub fn table_ex45(order: usize) -> Result<Vec<TableRow>> {
    if order < 3 {
        return Err(QhatmError::InvalidParams("table order must be at least 3".into()));
    }
    let spec = builtin("ex45")?;
    let params = QhatmParams::new(1.0, -1.0, 1, order);
    let sol = solve(&spec, &params)?;
    PAPER_TABLE_EX45
        .iter()
        .map(|&(xyz, t, paper_qhatm, paper_exact)| {
            let p = Coords::new().with("x", xyz).with("y", xyz).with("z", xyz).with("t", t);
            let qhatm = spec.eval_series(&sol.assembled, 1.0, &p)?;
            let exact = spec.exact_eval(&p)?;
            Ok(TableRow { xyz, t, qhatm, exact, abs_err: (qhatm - exact).abs(), paper_qhatm, paper_exact })
        })
        .collect()
}
