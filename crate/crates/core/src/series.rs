//! Finite fractional power series `Σ c · z^(p + q·γ) · F_j`.
//!
//! `z` is the evolution variable, `γ` the problem's single fractional order
//! symbol and `F_j` a factor from the owning [`FactorCatalog`]. Exponents are
//! integer pairs, so like-term merging and structural comparison are exact
//! and independent of the numeric γ. The numeric γ only enters when an
//! operator has to pick a branch or evaluate a Gamma ratio.
//!
//! Series are immutable; every operation returns a new value in canonical
//! form (terms sorted by `(p, q, factor)`, like terms merged, coefficients
//! below `1e-14 · max|c|` pruned).

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, Neg, Sub};

use crate::factor::{FactorCatalog, FactorMatrix};
use crate::special::gamma_ratio;
use crate::{Coords, QhatmError, Result};

/// Relative pruning threshold for canonical form.
pub const PRUNE_REL: f64 = 1e-14;

/// Tolerance used for numeric exponent and order comparisons.
pub const EXPONENT_TOL: f64 = 1e-12;

/// Exponent `p + q·γ` over the single fractional order symbol γ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AffineExponent {
    pub p: i32,
    pub q: i32,
}

impl AffineExponent {
    pub const ZERO: AffineExponent = AffineExponent { p: 0, q: 0 };

    pub const fn new(p: i32, q: i32) -> Self {
        Self { p, q }
    }

    /// Pure integer exponent `p`.
    pub const fn int(p: i32) -> Self {
        Self { p, q: 0 }
    }

    /// `q · γ`.
    pub const fn gamma_multiple(q: i32) -> Self {
        Self { p: 0, q }
    }

    pub fn value(self, gamma: f64) -> f64 {
        self.p as f64 + self.q as f64 * gamma
    }
}

impl Add for AffineExponent {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.p + rhs.p, self.q + rhs.q)
    }
}

impl Sub for AffineExponent {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.p - rhs.p, self.q - rhs.q)
    }
}

impl Neg for AffineExponent {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.p, -self.q)
    }
}

impl core::fmt::Display for AffineExponent {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match (self.p, self.q) {
            (p, 0) => write!(f, "{p}"),
            (0, q) => write!(f, "{q}γ"),
            (p, q) if q < 0 => write!(f, "{p}{q}γ"),
            (p, q) => write!(f, "{p}+{q}γ"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub exponent: AffineExponent,
    /// Index into the owning catalog.
    pub factor: usize,
}

impl Term {
    pub fn new(coeff: f64, exponent: AffineExponent, factor: usize) -> Self {
        Self { coeff, exponent, factor }
    }

    fn key(&self) -> (AffineExponent, usize) {
        (self.exponent, self.factor)
    }
}

/// A term after substituting the numeric γ: exponent is a plain real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericTerm {
    pub exponent: f64,
    pub factor: usize,
    pub coeff: f64,
}

#[derive(Debug, Clone)]
pub struct FracSeries {
    catalog: Arc<FactorCatalog>,
    terms: Vec<Term>,
}

impl PartialEq for FracSeries {
    fn eq(&self, other: &Self) -> bool {
        self.same_catalog(other) && self.terms == other.terms
    }
}

fn canonicalize(mut terms: Vec<Term>) -> Vec<Term> {
    terms.sort_by_key(Term::key);
    let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
    for t in terms {
        match merged.last_mut() {
            Some(last) if last.key() == t.key() => last.coeff += t.coeff,
            _ => merged.push(t),
        }
    }
    let max = merged.iter().fold(0.0f64, |m, t| m.max(t.coeff.abs()));
    let floor = PRUNE_REL * max;
    merged.retain(|t| t.coeff != 0.0 && t.coeff.abs() >= floor);
    merged
}

/// `n = ⌈order⌉`, snapping orders within tolerance of an integer.
fn caputo_integer_part(order: f64) -> f64 {
    let nearest = libm::round(order);
    if (order - nearest).abs() <= EXPONENT_TOL {
        nearest
    } else {
        libm::ceil(order)
    }
}

impl FracSeries {
    pub fn zero(catalog: Arc<FactorCatalog>) -> Self {
        Self { catalog, terms: Vec::new() }
    }

    /// Builds a canonical series, validating factor indices and coefficients.
    pub fn from_terms(catalog: Arc<FactorCatalog>, terms: Vec<Term>) -> Result<Self> {
        for t in &terms {
            if t.factor >= catalog.len() {
                return Err(QhatmError::UnknownFactor(t.factor));
            }
            if !t.coeff.is_finite() {
                return Err(QhatmError::NonFiniteCoefficient(t.coeff));
            }
        }
        Ok(Self { catalog, terms: canonicalize(terms) })
    }

    fn with_terms(&self, terms: Vec<Term>) -> Result<Self> {
        if let Some(bad) = terms.iter().find(|t| !t.coeff.is_finite()) {
            return Err(QhatmError::NonFiniteCoefficient(bad.coeff));
        }
        Ok(Self { catalog: self.catalog.clone(), terms: canonicalize(terms) })
    }

    pub fn catalog(&self) -> &Arc<FactorCatalog> {
        &self.catalog
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `z^exponent · F_factor`, zero if absent.
    pub fn coefficient(&self, exponent: AffineExponent, factor: usize) -> f64 {
        self.terms
            .binary_search_by(|t| t.key().cmp(&(exponent, factor)))
            .map(|i| self.terms[i].coeff)
            .unwrap_or(0.0)
    }

    pub fn same_catalog(&self, other: &FracSeries) -> bool {
        Arc::ptr_eq(&self.catalog, &other.catalog) || self.catalog == other.catalog
    }

    fn check_catalog(&self, other: &FracSeries) -> Result<()> {
        if self.same_catalog(other) {
            Ok(())
        } else {
            Err(QhatmError::CatalogMismatch)
        }
    }

    pub fn add(&self, other: &FracSeries) -> Result<FracSeries> {
        self.check_catalog(other)?;
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        self.with_terms(terms)
    }

    pub fn sub(&self, other: &FracSeries) -> Result<FracSeries> {
        self.add(&other.scale(-1.0))
    }

    /// Multiplies every coefficient by `c`.
    ///
    /// # Panics
    /// If `c` is not finite.
    pub fn scale(&self, c: f64) -> FracSeries {
        assert!(c.is_finite(), "scale factor must be finite, got {c}");
        let terms = self
            .terms
            .iter()
            .map(|t| Term { coeff: t.coeff * c, ..*t })
            .collect();
        Self { catalog: self.catalog.clone(), terms: canonicalize(terms) }
    }

    /// Term-wise Caputo derivative of order `order` (affine in γ).
    ///
    /// `D^α z^β = Γ(β+1)/Γ(β−α+1) · z^(β−α)` when `β > n−1`, zero when
    /// `β ≤ n−1`, with `n = ⌈α⌉`.
    pub fn caputo(&self, order: AffineExponent, gamma: f64) -> Result<FracSeries> {
        let alpha = order.value(gamma);
        if !(alpha > 0.0) {
            return Err(QhatmError::InvalidParams(alloc::format!(
                "caputo order must be positive, got {alpha}"
            )));
        }
        let n = caputo_integer_part(alpha);
        let mut out = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let beta = t.exponent.value(gamma);
            if beta < -EXPONENT_TOL {
                return Err(QhatmError::NegativeExponent { exponent: beta });
            }
            if beta <= n - 1.0 + EXPONENT_TOL {
                continue;
            }
            let den = beta - alpha + 1.0;
            assert!(den > 0.0, "caputo pole: Γ argument {den} for β={beta}, α={alpha}");
            let exponent = t.exponent - order;
            let shifted = exponent.value(gamma);
            if shifted < -EXPONENT_TOL {
                return Err(QhatmError::ExponentUnderflow { exponent: shifted });
            }
            let ratio = gamma_ratio(beta + 1.0, den)?;
            out.push(Term { coeff: t.coeff * ratio, exponent, factor: t.factor });
        }
        self.with_terms(out)
    }

    /// Term-wise Riemann–Liouville integral of order `order` (affine in γ):
    /// `J^α z^β = Γ(β+1)/Γ(β+α+1) · z^(β+α)`.
    pub fn rl_integral(&self, order: AffineExponent, gamma: f64) -> Result<FracSeries> {
        let alpha = order.value(gamma);
        if !(alpha > 0.0) {
            return Err(QhatmError::InvalidParams(alloc::format!(
                "integral order must be positive, got {alpha}"
            )));
        }
        let mut out = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let beta = t.exponent.value(gamma);
            if beta < -EXPONENT_TOL {
                return Err(QhatmError::NegativeExponent { exponent: beta });
            }
            let ratio = gamma_ratio(beta + 1.0, beta + alpha + 1.0)?;
            out.push(Term { coeff: t.coeff * ratio, exponent: t.exponent + order, factor: t.factor });
        }
        self.with_terms(out)
    }

    /// Replaces each factor component by its image under `matrix`.
    pub fn apply_matrix(&self, matrix: &FactorMatrix) -> Result<FracSeries> {
        if matrix.dim() != self.catalog.len() {
            return Err(QhatmError::DimensionMismatch {
                expected: self.catalog.len(),
                found: matrix.dim(),
            });
        }
        let mut out = Vec::with_capacity(self.terms.len() * matrix.dim());
        for t in &self.terms {
            for i in 0..matrix.dim() {
                let w = matrix.entry(i, t.factor);
                if w != 0.0 {
                    out.push(Term { coeff: w * t.coeff, exponent: t.exponent, factor: i });
                }
            }
        }
        self.with_terms(out)
    }

    /// `Σ c · z^(p+q·γ) · F_j(coords)`, with `0^0 = 1`.
    pub fn evaluate(&self, z: f64, gamma: f64, coords: &Coords) -> Result<f64> {
        if !(z >= 0.0) {
            return Err(QhatmError::NegativeEvolution { value: z });
        }
        let mut factor_values: Vec<Option<f64>> = alloc::vec![None; self.catalog.len()];
        let mut sum = 0.0;
        for t in &self.terms {
            let f = match factor_values[t.factor] {
                Some(v) => v,
                None => {
                    let v = self.catalog.eval(t.factor, coords)?;
                    factor_values[t.factor] = Some(v);
                    v
                }
            };
            sum += t.coeff * libm::pow(z, t.exponent.value(gamma)) * f;
        }
        Ok(sum)
    }

    /// Substitutes the numeric γ and merges terms whose numeric exponents
    /// coincide within [`EXPONENT_TOL`]. Sorted by (exponent, factor).
    pub fn specialize(&self, gamma: f64) -> Vec<NumericTerm> {
        let mut numeric: Vec<NumericTerm> = self
            .terms
            .iter()
            .map(|t| NumericTerm { exponent: t.exponent.value(gamma), factor: t.factor, coeff: t.coeff })
            .collect();
        numeric.sort_by(|a, b| {
            a.exponent
                .partial_cmp(&b.exponent)
                .unwrap_or(Ordering::Equal)
                .then(a.factor.cmp(&b.factor))
        });
        let mut merged: Vec<NumericTerm> = Vec::with_capacity(numeric.len());
        for t in numeric {
            match merged.iter_mut().rev().find(|m| {
                m.factor == t.factor && (m.exponent - t.exponent).abs() <= EXPONENT_TOL
            }) {
                Some(m) => m.coeff += t.coeff,
                None => merged.push(t),
            }
        }
        merged
    }
}
