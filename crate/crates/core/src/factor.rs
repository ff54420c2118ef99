//! Separable factor functions of the non-evolution variables.
//!
//! Every series coefficient is a real multiple of one factor from a fixed
//! built-in enumeration. Operators that act on the non-evolution variables
//! (Laplacians, the temporal operator of the space-fractional problems) are
//! represented by a [`FactorMatrix`] giving their action on the catalog.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Coords, QhatmError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factor {
    /// `e^x`
    ExpX,
    /// `e^(x+y)`
    ExpXPlusY,
    /// `sinh(x)·sinh(y)·sinh(z)`
    SinhXyz,
    /// `e^(-t)`
    ExpNegT,
    /// the constant 1
    One,
    /// `t`
    T,
}

impl Factor {
    pub const ALL: [Factor; 6] = [
        Factor::ExpX,
        Factor::ExpXPlusY,
        Factor::SinhXyz,
        Factor::ExpNegT,
        Factor::One,
        Factor::T,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Factor::ExpX => "exp_x",
            Factor::ExpXPlusY => "exp_x_plus_y",
            Factor::SinhXyz => "sinh_xyz",
            Factor::ExpNegT => "exp_neg_t",
            Factor::One => "one",
            Factor::T => "t",
        }
    }

    pub fn from_id(id: &str) -> Option<Factor> {
        Factor::ALL.into_iter().find(|f| f.id() == id)
    }

    pub fn description(self) -> &'static str {
        match self {
            Factor::ExpX => "e^x",
            Factor::ExpXPlusY => "e^(x+y)",
            Factor::SinhXyz => "sinh(x) sinh(y) sinh(z)",
            Factor::ExpNegT => "e^(-t)",
            Factor::One => "1",
            Factor::T => "t",
        }
    }

    /// Variables the evaluator reads.
    pub fn variables(self) -> &'static [&'static str] {
        match self {
            Factor::ExpX => &["x"],
            Factor::ExpXPlusY => &["x", "y"],
            Factor::SinhXyz => &["x", "y", "z"],
            Factor::ExpNegT => &["t"],
            Factor::One => &[],
            Factor::T => &["t"],
        }
    }

    pub fn eval(self, coords: &Coords) -> Result<f64> {
        Ok(match self {
            Factor::ExpX => libm::exp(coords.require("x")?),
            Factor::ExpXPlusY => libm::exp(coords.require("x")? + coords.require("y")?),
            Factor::SinhXyz => {
                libm::sinh(coords.require("x")?)
                    * libm::sinh(coords.require("y")?)
                    * libm::sinh(coords.require("z")?)
            }
            Factor::ExpNegT => libm::exp(-coords.require("t")?),
            Factor::One => 1.0,
            Factor::T => coords.require("t")?,
        })
    }
}

/// Ordered list of factors; a factor's index is its id within series terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorCatalog {
    factors: Vec<Factor>,
}

impl FactorCatalog {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(QhatmError::InvalidSpec("factor catalog is empty".into()));
        }
        for (i, f) in factors.iter().enumerate() {
            if factors[..i].contains(f) {
                return Err(QhatmError::InvalidSpec(alloc::format!(
                    "factor `{}` listed twice",
                    f.id()
                )));
            }
        }
        Ok(Self { factors })
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<Factor> {
        self.factors.get(index).copied()
    }

    pub fn index_of(&self, factor: Factor) -> Option<usize> {
        self.factors.iter().position(|f| *f == factor)
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn eval(&self, index: usize, coords: &Coords) -> Result<f64> {
        self.get(index)
            .ok_or(QhatmError::UnknownFactor(index))?
            .eval(coords)
    }
}

/// Square real matrix over a factor catalog.
///
/// Column `j` is the image of factor `j`: a term carrying factor `j` maps to
/// terms carrying factor `i` with weight `entry(i, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl FactorMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![0.0; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1.0;
        }
        m
    }

    pub fn scalar(value: f64) -> Self {
        Self { dim: 1, data: vec![value] }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(QhatmError::DimensionMismatch { expected: dim, found: row.len() });
            }
            if let Some(bad) = row.iter().find(|v| !v.is_finite()) {
                return Err(QhatmError::NonFiniteCoefficient(*bad));
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.dim + col]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.dim.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| *v == 0.0)
    }
}
