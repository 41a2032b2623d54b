//! Diagonal linear vector fields `z' = Az`, their integral curves, and the
//! exact level grid `{λ_j}` of values `(α,k) + (α,m)`.
//!
//! Eigenvalues are `α_j = r_j τ` with rational rates `r_j` and a shared unit
//! `τ`, so that level coincidences are decided exactly. Integral curves use
//! the contracting orientation `s_c(ζ) = (c_j e^{-α_j ζ})`: with positive
//! rates, `Re ζ -> ∞` flows to the origin. The expanding form
//! `c_j e^{α_j ζ}` with negative eigenvalues describes the same curves
//! under `α -> -α`.

use std::collections::BTreeSet;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SpectrumClass {
    /// All eigenvalue ratios are positive reals.
    PositiveRatios,
    /// Not all ratios are positive, but one rotation puts every eigenvalue in
    /// the open left half-plane.
    CommonHalfPlane,
    Mixed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalField {
    rates: Vec<Rational64>,
    time_unit: Complex64,
}

impl DiagonalField {
    pub fn new(rates: Vec<Rational64>, time_unit: Complex64) -> Result<Self> {
        if rates.is_empty() {
            return Err(Error::EmptyDimension);
        }
        if let Some(index) = rates.iter().position(Zero::is_zero) {
            return Err(Error::ZeroRate { index });
        }
        let modulus = time_unit.norm();
        if (modulus - 1.0).abs() > 1e-12 {
            return Err(Error::TimeUnitNotUnimodular { modulus });
        }
        Ok(Self { rates, time_unit })
    }

    /// Field with `τ = 1`.
    pub fn real(rates: Vec<Rational64>) -> Result<Self> {
        Self::new(rates, Complex64::new(1.0, 0.0))
    }

    /// Parses rates written as exact fractions, e.g. `["1/2", "3"]`.
    pub fn parse_rates<S: AsRef<str>>(rates: &[S]) -> Result<Vec<Rational64>> {
        rates
            .iter()
            .map(|s| {
                s.as_ref()
                    .trim()
                    .parse::<Rational64>()
                    .map_err(|e| Error::InvalidParameter(format!("bad rate '{}': {e}", s.as_ref())))
            })
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.rates.len()
    }

    pub fn rates(&self) -> &[Rational64] {
        &self.rates
    }

    pub fn time_unit(&self) -> Complex64 {
        self.time_unit
    }

    /// `α_j = r_j τ`.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.rates.iter().map(|r| self.time_unit * to_f64(*r)).collect()
    }

    pub fn is_normalized(&self) -> bool {
        self.time_unit == Complex64::new(1.0, 0.0) && self.rates.iter().all(Signed::is_positive)
    }
}

pub(crate) fn to_f64(r: Rational64) -> f64 {
    r.to_f64().unwrap_or_else(|| *r.numer() as f64 / *r.denom() as f64)
}

/// A point of the open unit polydisk.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BasePoint(Vec<Complex64>);

impl BasePoint {
    pub fn new(c: Vec<Complex64>) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::EmptyDimension);
        }
        if let Some((index, z)) = c.iter().enumerate().find(|(_, z)| !(z.norm() < 1.0)) {
            return Err(Error::OutsidePolydisk { index, modulus: z.norm() });
        }
        Ok(Self(c))
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

pub fn classify_spectrum(field: &DiagonalField) -> SpectrumClass {
    let first = field.rates[0].is_positive();
    if field.rates.iter().all(|r| r.is_positive() == first) {
        SpectrumClass::PositiveRatios
    } else {
        // Opposite real multiples of one unit never fit in an open half-plane.
        SpectrumClass::Mixed
    }
}

/// Classification for raw complex eigenvalues (fields that do not share a unit).
///
/// The eigenvalues lie in a common open half-plane through the origin iff
/// their arguments fit in an arc shorter than π, i.e. the largest circular
/// gap between consecutive arguments exceeds π.
pub fn classify_eigenvalues(eigenvalues: &[Complex64]) -> SpectrumClass {
    if eigenvalues.is_empty() || eigenvalues.iter().any(|a| a.norm() == 0.0) {
        return SpectrumClass::Mixed;
    }
    let base = eigenvalues[0];
    let positive_ratios = eigenvalues.iter().all(|a| {
        let q = a / base;
        q.re > 0.0 && q.im.abs() <= 1e-12 * q.norm()
    });
    if positive_ratios {
        return SpectrumClass::PositiveRatios;
    }
    let mut args: Vec<f64> = eigenvalues.iter().map(|a| a.arg()).collect();
    args.sort_by(f64::total_cmp);
    let tau = std::f64::consts::TAU;
    let mut max_gap = args[0] + tau - args[args.len() - 1];
    for w in args.windows(2) {
        max_gap = max_gap.max(w[1] - w[0]);
    }
    if max_gap > std::f64::consts::PI + 1e-12 {
        SpectrumClass::CommonHalfPlane
    } else {
        SpectrumClass::Mixed
    }
}

/// `s_c(ζ)_j = c_j e^{-α_j ζ}` for arbitrary complex eigenvalues.
pub fn curve_point(eigenvalues: &[Complex64], c: &[Complex64], zeta: Complex64) -> Vec<Complex64> {
    eigenvalues.iter().zip(c).map(|(a, cj)| cj * (-a * zeta).exp()).collect()
}

pub fn integral_curve(field: &DiagonalField, c: &BasePoint, zeta: Complex64) -> Result<Vec<Complex64>> {
    if c.dim() != field.dim() {
        return Err(Error::DimensionMismatch { expected: field.dim(), actual: c.dim() });
    }
    Ok(curve_point(&field.eigenvalues(), c.coords(), zeta))
}

/// Ascending levels `0 = λ_0 < λ_1 < …`, truncated at a bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelGrid {
    /// Rates the grid was generated from; `None` for explicitly listed grids.
    #[serde(serialize_with = "serialize_opt_rationals")]
    pub rates: Option<Vec<Rational64>>,
    #[serde(serialize_with = "serialize_rationals")]
    pub levels: Vec<Rational64>,
}

pub(crate) fn serialize_rationals<S: serde::Serializer>(
    v: &[Rational64],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

fn serialize_opt_rationals<S: serde::Serializer>(
    v: &Option<Vec<Rational64>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => serialize_rationals(v, s),
        None => s.serialize_none(),
    }
}

impl LevelGrid {
    /// Grid from explicit levels; they are sorted, deduplicated and `0` is added.
    pub fn from_levels(levels: impl IntoIterator<Item = Rational64>) -> Result<Self> {
        let mut set: BTreeSet<Rational64> = levels.into_iter().collect();
        if set.iter().any(Signed::is_negative) {
            return Err(Error::BadLevelGrid);
        }
        set.insert(Rational64::zero());
        Ok(Self { rates: None, levels: set.into_iter().collect() })
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn max_level(&self) -> Rational64 {
        *self.levels.last().expect("grid always contains 0")
    }

    pub fn contains(&self, level: &Rational64) -> bool {
        self.levels.binary_search(level).is_ok()
    }

    pub fn index_of(&self, level: &Rational64) -> Option<usize> {
        self.levels.binary_search(level).ok()
    }
}

/// All values `(α,k) + (α,m) <= lambda_max`.
///
/// Since `(α,k) + (α,m) = Σ r_j (k_j + m_j)`, the grid is the set of
/// non-negative integer combinations of the (normalized) rates.
pub fn level_grid(field: &DiagonalField, lambda_max: Rational64) -> Result<LevelGrid> {
    if !lambda_max.is_positive() {
        return Err(Error::NonPositiveLevelBound(lambda_max));
    }
    let (normalized, _) = normalize_time(field)?;
    let mut rates = normalized.rates.clone();
    rates.sort();
    rates.dedup();
    let mut levels = BTreeSet::new();
    enumerate_combinations(&rates, Rational64::zero(), lambda_max, &mut levels);
    Ok(LevelGrid { rates: Some(normalized.rates), levels: levels.into_iter().collect() })
}

fn enumerate_combinations(
    rates: &[Rational64],
    acc: Rational64,
    bound: Rational64,
    out: &mut BTreeSet<Rational64>,
) {
    match rates.split_first() {
        None => {
            out.insert(acc);
        }
        Some((r, rest)) => {
            let mut v = acc;
            while v <= bound {
                enumerate_combinations(rest, v, bound, out);
                v += r;
            }
        }
    }
}

/// Rescales time so that `τ = 1` and every rate is positive.
///
/// Returns the new field and the factor `f` with `α_j = f α'_j`; the curve
/// `s_c(ζ)` of the input equals the normalized curve at time `f ζ`.
pub fn normalize_time(field: &DiagonalField) -> Result<(DiagonalField, Complex64)> {
    if classify_spectrum(field) != SpectrumClass::PositiveRatios {
        return Err(Error::MixedSpectrum);
    }
    let sign = if field.rates[0].is_positive() { 1.0 } else { -1.0 };
    let rates = field.rates.iter().map(|r| r.abs()).collect();
    Ok((DiagonalField { rates, time_unit: Complex64::new(1.0, 0.0) }, field.time_unit * sign))
}
