//! The staged reconstruction pipeline: a function on the unit polydisk that
//! is holomorphic along every integral curve of a field with positive
//! eigenvalue ratios, and has a Taylor series at the origin, is the sum of
//! the holomorphic part of that series.
//!
//! Stages, in order:
//!
//! 1. the spectrum has positive ratios and the jet is the oracle's Taylor series;
//! 2. the oracle is holomorphic along sampled integral curves;
//! 3. for each `(μ, ν)` with `ν > 0`, `Σ a_{km} c^k conj(c)^m` vanishes, where
//!    the sum runs over `(α,k) = μ`, `(α,m) = ν`;
//! 4. the holomorphic part `ψ` respects the Cauchy bounds implied by `sup |φ|`
//!    and agrees with the oracle on a polydisk of radius `1/2`.
//!
//! Everything happens in the linear chart on the polydisk.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::{classify_spectrum, curve_point, normalize_time, DiagonalField, SpectrumClass};
use crate::numeric::{dbar, polydisk_sup, PolydiskFn, SupSearch, FD_STEP};
use crate::report::Verdict;
use crate::series::{remainder_check_through, MultiIndex, RemainderParams, TaylorSeries};

/// An oracle together with its asserted Taylor jet and sup bound.
pub struct JetOracle {
    oracle: Box<PolydiskFn>,
    jet: TaylorSeries,
    bound: f64,
}

impl JetOracle {
    /// Computes the bound as the sampled sup of `|oracle|` on the polydisk.
    pub fn new(oracle: impl Fn(&[Complex64]) -> Complex64 + Send + Sync + 'static, jet: TaylorSeries) -> Self {
        let dim = jet.dim();
        let bound = polydisk_sup(&|z: &[Complex64]| oracle(z).norm(), dim, &SupSearch::default()).value;
        Self { oracle: Box::new(oracle), jet, bound }
    }

    pub fn with_bound(
        oracle: impl Fn(&[Complex64]) -> Complex64 + Send + Sync + 'static,
        jet: TaylorSeries,
        bound: f64,
    ) -> Self {
        Self { oracle: Box::new(oracle), jet, bound }
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        (self.oracle)(z)
    }

    pub fn oracle(&self) -> &PolydiskFn {
        &*self.oracle
    }

    pub fn jet(&self) -> &TaylorSeries {
        &self.jet
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn dim(&self) -> usize {
        self.jet.dim()
    }

    /// Remainder check at every order up to the jet degree; returns the
    /// first failing order.
    pub fn validate(&self) -> Result<Option<u32>> {
        let params = RemainderParams::new(self.dim());
        match remainder_check_through(self.oracle(), &self.jet, self.jet.degree(), &params)? {
            Ok(()) => Ok(None),
            Err(report) => Ok(Some(report.rate as u32)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ForelliConfig {
    pub seed: u64,
    pub curves: usize,
    pub zetas_per_curve: usize,
    pub fd_step: f64,
    /// Curve restrictions pass when `|∂g/∂ζ̄| < fd_tol (1 + |g|)`.
    pub fd_tol: f64,
    pub trials: usize,
    pub vanishing_tol: f64,
    pub bound_tol: f64,
    pub compare_radius: f64,
    /// Comparison passes when `|φ - ψ| <= compare_tol · M`.
    pub compare_tol: f64,
    /// Largest level inspected in stage 3; the jet's top level when `None`.
    pub lambda_max: Option<Rational64>,
}

impl Default for ForelliConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            curves: 8,
            zetas_per_curve: 8,
            fd_step: FD_STEP,
            fd_tol: 1e-6,
            trials: 16,
            vanishing_tol: 1e-10,
            bound_tol: 1e-6,
            compare_radius: 0.5,
            compare_tol: 1e-10,
            lambda_max: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveWitness {
    pub base_point: Vec<Complex64>,
    pub zeta: Complex64,
    pub value: Complex64,
    /// `|∂g/∂ζ̄| / (1 + |g|)`.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FHolomorphyReport {
    pub samples: usize,
    pub max_residual: f64,
    pub witness: Option<CurveWitness>,
    pub tolerance: f64,
    pub verdict: Verdict,
}

/// Checks that `ζ ↦ oracle(s_c(ζ))` is holomorphic at the given samples.
///
/// Curves are `s_c(ζ)_j = c_j e^{-α_j ζ}` for the given eigenvalues.
pub fn f_holomorphy_check(
    oracle: &dyn Fn(&[Complex64]) -> Complex64,
    eigenvalues: &[Complex64],
    curves: &[Vec<Complex64>],
    zetas: &[Complex64],
    step: f64,
    tol: f64,
) -> Result<FHolomorphyReport> {
    let mut report = FHolomorphyReport { samples: 0, max_residual: 0.0, witness: None, tolerance: tol, verdict: Verdict::Pass };
    for c in curves {
        if c.len() != eigenvalues.len() {
            return Err(Error::DimensionMismatch { expected: eigenvalues.len(), actual: c.len() });
        }
        let g = |zeta: Complex64| oracle(&curve_point(eigenvalues, c, zeta));
        for &zeta in zetas {
            for d in [Complex64::new(0.0, 0.0), Complex64::new(step, 0.0), Complex64::new(0.0, step)] {
                for s in [zeta + d, zeta - d] {
                    if let Some(index) = curve_point(eigenvalues, c, s).iter().position(|z| z.norm() >= 1.0) {
                        return Err(Error::CurveLeavesPolydisk { zeta: s.to_string(), index });
                    }
                }
            }
            let value = g(zeta);
            let d = dbar(g, zeta, step);
            report.samples += 1;
            if !value.is_finite() || !d.is_finite() {
                report.verdict = Verdict::Inconclusive;
                report.witness = Some(CurveWitness { base_point: c.clone(), zeta, value, residual: f64::NAN });
                return Ok(report);
            }
            let residual = d.norm() / (1.0 + value.norm());
            if residual > report.max_residual || report.witness.is_none() {
                report.max_residual = report.max_residual.max(residual);
                report.witness = Some(CurveWitness { base_point: c.clone(), zeta, value, residual });
            }
        }
    }
    if report.max_residual >= tol {
        report.verdict = Verdict::Fail;
    }
    Ok(report)
}

fn random_point(rng: &mut ChaCha8Rng, dim: usize, r_lo: f64, r_hi: f64) -> Vec<Complex64> {
    (0..dim).map(|_| Complex64::from_polar(rng.gen_range(r_lo..r_hi), rng.gen_range(0.0..TAU))).collect()
}

/// Random base points and curve times that keep the curves inside the
/// polydisk. Positive-ratio fields use `Re ζ ∈ [0.05, 2]` in the normalized
/// time; other spectra use `|ζ| <= 0.3 / max|α|`.
pub fn sample_curves(
    eigenvalues: &[Complex64],
    curves: usize,
    zetas_per_curve: usize,
    rng: &mut ChaCha8Rng,
) -> (Vec<Vec<Complex64>>, Vec<Complex64>) {
    let dim = eigenvalues.len();
    let contracting = eigenvalues.iter().all(|a| a.im == 0.0 && a.re > 0.0);
    let base: Vec<Vec<Complex64>> = if contracting {
        (0..curves).map(|_| random_point(rng, dim, 0.2, 0.9)).collect()
    } else {
        (0..curves).map(|_| random_point(rng, dim, 0.1, 0.6)).collect()
    };
    let zetas = if contracting {
        (0..zetas_per_curve).map(|_| Complex64::new(rng.gen_range(0.05..2.0), rng.gen_range(-3.0..3.0))).collect()
    } else {
        let scale = 0.3 / eigenvalues.iter().map(|a| a.norm()).fold(0.0, f64::max);
        (0..zetas_per_curve)
            .map(|_| Complex64::from_polar(scale * rng.gen_range(0.0..1.0f64).sqrt(), rng.gen_range(0.0..TAU)))
            .collect()
    };
    (base, zetas)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObstructionWitness {
    pub level: String,
    pub mu: String,
    pub nu: String,
    pub c: Vec<Complex64>,
    pub value: Complex64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VanishingReport {
    /// Every `a_{km}` with `m != 0` (up to the level bound) is zero.
    pub exact_pass: bool,
    /// Every `(μ, ν)` sum evaluated below tolerance at every trial point.
    pub randomized_pass: bool,
    pub pairs_checked: usize,
    pub trials: usize,
    pub worst: Option<ObstructionWitness>,
    pub tolerance: f64,
}

impl VanishingReport {
    pub fn passed(&self) -> bool {
        self.exact_pass && self.randomized_pass
    }

    pub fn agree(&self) -> bool {
        self.exact_pass == self.randomized_pass
    }
}

/// `Σ a_{km} c^k conj(c)^m` over the terms with `(α,k) = μ`, `(α,m) = ν`.
pub fn level_sum(series: &TaylorSeries, rates: &[Rational64], mu: Rational64, nu: Rational64, c: &[Complex64]) -> Complex64 {
    let conj: Vec<Complex64> = c.iter().map(Complex64::conj).collect();
    series
        .terms()
        .filter(|t| t.k.weight(rates) == mu && t.m.weight(rates) == nu)
        .map(|t| t.coefficient * t.k.monomial(c) * t.m.monomial(&conj))
        .sum()
}

fn normalized_field(field: &DiagonalField) -> Result<DiagonalField> {
    if classify_spectrum(field) != SpectrumClass::PositiveRatios {
        return Err(Error::MixedSpectrum);
    }
    if !field.is_normalized() {
        return Err(Error::NotNormalized);
    }
    Ok(field.clone())
}

pub fn antiholomorphic_vanishing(
    series: &TaylorSeries,
    field: &DiagonalField,
    lambda_max: Rational64,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<VanishingReport> {
    let field = normalized_field(field)?;
    if series.dim() != field.dim() {
        return Err(Error::DimensionMismatch { expected: field.dim(), actual: series.dim() });
    }
    let rates = field.rates();
    let mut pairs: BTreeMap<(Rational64, Rational64), ()> = BTreeMap::new();
    for t in series.terms() {
        let (mu, nu) = (t.k.weight(rates), t.m.weight(rates));
        if !t.m.is_zero() && mu + nu <= lambda_max {
            pairs.insert((mu, nu), ());
        }
    }
    let exact_pass = pairs.is_empty();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Vec<Complex64>> = (0..trials).map(|_| random_point(&mut rng, field.dim(), 0.6, 0.95)).collect();
    let mut worst: Option<ObstructionWitness> = None;
    let mut worst_abs = 0.0f64;
    for &(mu, nu) in pairs.keys() {
        for c in &points {
            let value = level_sum(series, rates, mu, nu, c);
            if value.norm() > worst_abs || worst.is_none() {
                worst_abs = worst_abs.max(value.norm());
                worst = Some(ObstructionWitness {
                    level: (mu + nu).to_string(),
                    mu: mu.to_string(),
                    nu: nu.to_string(),
                    c: c.clone(),
                    value,
                });
            }
        }
    }
    Ok(VanishingReport {
        exact_pass,
        randomized_pass: worst_abs < tol,
        pairs_checked: pairs.len(),
        trials,
        worst,
        tolerance: tol,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelBound {
    pub level: String,
    /// Sampled sup over the polydisk of `|Σ_{(α,k)=λ} a_{k0} c^k|`.
    pub sup: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Reconstruction {
    pub psi: TaylorSeries,
    pub bound: f64,
    pub level_bounds: Vec<LevelBound>,
    pub max_coefficient: f64,
    pub tolerance: f64,
}

/// `ψ = Σ a_{k0} z^k`, certified against the Cauchy bounds `|P_λ(c)| <= M`
/// and `|a_{k0}| <= M`.
pub fn reconstruct(jo: &JetOracle, field: &DiagonalField, tol: f64) -> Result<Reconstruction> {
    let field = normalized_field(field)?;
    let psi = jo.jet().holomorphic_part();
    let limit = jo.bound() * (1.0 + tol);
    let rates = field.rates();
    let mut by_level: BTreeMap<Rational64, Vec<(MultiIndex, Complex64)>> = BTreeMap::new();
    let mut max_coefficient = 0.0f64;
    for t in psi.terms() {
        let level = t.k.weight(rates);
        if t.coefficient.norm() > limit {
            return Err(Error::BoundViolation { level, sup: t.coefficient.norm(), bound: jo.bound() });
        }
        max_coefficient = max_coefficient.max(t.coefficient.norm());
        by_level.entry(level).or_default().push((t.k.clone(), t.coefficient));
    }
    let mut level_bounds = Vec::with_capacity(by_level.len());
    for (level, terms) in by_level {
        let poly = |c: &[Complex64]| terms.iter().map(|(k, a)| a * k.monomial(c)).sum::<Complex64>().norm();
        let sup = polydisk_sup(&poly, psi.dim(), &SupSearch::torus()).value;
        if sup > limit {
            return Err(Error::BoundViolation { level, sup, bound: jo.bound() });
        }
        level_bounds.push(LevelBound { level: level.to_string(), sup });
    }
    Ok(Reconstruction { psi, bound: jo.bound(), level_bounds, max_coefficient, tolerance: tol })
}

/// Grid on the polydisk of radius `r`: per coordinate the origin and 8
/// angles on the circles of radius `r/2` and `r`.
pub fn comparison_grid(dim: usize, r: f64) -> Vec<Vec<Complex64>> {
    let mut axis = vec![Complex64::new(0.0, 0.0)];
    for radius in [r / 2.0, r] {
        axis.extend((0..8).map(|i| Complex64::from_polar(radius, TAU * i as f64 / 8.0)));
    }
    let mut points = vec![Vec::with_capacity(dim)];
    for _ in 0..dim {
        points = points
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |a| {
                    let mut q = p.clone();
                    q.push(*a);
                    q
                })
            })
            .collect();
    }
    points
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "tag")]
pub enum ForelliVerdict {
    Holomorphic { psi: TaylorSeries },
    HypothesisViolated { reason: String },
    NotFHolomorphic { witness: Option<CurveWitness> },
    AntiHolomorphicObstruction { witness: Option<ObstructionWitness> },
}

impl ForelliVerdict {
    pub fn is_holomorphic(&self) -> bool {
        matches!(self, ForelliVerdict::Holomorphic { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ForelliReport {
    pub verdict: ForelliVerdict,
    pub spectrum: SpectrumClass,
    pub bound: f64,
    /// First order at which the jet failed the remainder check, if any.
    pub jet_failure_order: Option<u32>,
    pub f_holomorphy: Option<FHolomorphyReport>,
    pub vanishing: Option<VanishingReport>,
    pub reconstruction: Option<Reconstruction>,
    pub comparison_residual: Option<f64>,
}

fn jet_top_level(jet: &TaylorSeries, rates: &[Rational64]) -> Rational64 {
    jet.terms()
        .map(|t| t.k.weight(rates) + t.m.weight(rates))
        .max()
        .unwrap_or_else(|| Rational64::from_integer(1))
        .max(Rational64::from_integer(1))
}

pub fn forelli_pipeline(jo: &JetOracle, field: &DiagonalField, cfg: &ForelliConfig) -> Result<ForelliReport> {
    if jo.dim() != field.dim() {
        return Err(Error::DimensionMismatch { expected: field.dim(), actual: jo.dim() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let spectrum = classify_spectrum(field);
    let mut report = ForelliReport {
        verdict: ForelliVerdict::HypothesisViolated { reason: String::new() },
        spectrum,
        bound: jo.bound(),
        jet_failure_order: None,
        f_holomorphy: None,
        vanishing: None,
        reconstruction: None,
        comparison_residual: None,
    };

    if spectrum != SpectrumClass::PositiveRatios {
        // Still record the curve check: it documents what the hypothesis rules out.
        let eigs = field.eigenvalues();
        let (curves, zetas) = sample_curves(&eigs, cfg.curves, cfg.zetas_per_curve, &mut rng);
        report.f_holomorphy = Some(f_holomorphy_check(jo.oracle(), &eigs, &curves, &zetas, cfg.fd_step, cfg.fd_tol)?);
        report.verdict = ForelliVerdict::HypothesisViolated {
            reason: format!("spectrum is {spectrum:?}: eigenvalue ratios are not all positive"),
        };
        return Ok(report);
    }
    if let Some(order) = jo.validate()? {
        report.jet_failure_order = Some(order);
        report.verdict = ForelliVerdict::HypothesisViolated {
            reason: format!("jet is not the Taylor series of the oracle: remainder fails at order {order}"),
        };
        return Ok(report);
    }

    let (field, _) = normalize_time(field)?;
    let eigs = field.eigenvalues();
    let (curves, zetas) = sample_curves(&eigs, cfg.curves, cfg.zetas_per_curve, &mut rng);
    let fh = f_holomorphy_check(jo.oracle(), &eigs, &curves, &zetas, cfg.fd_step, cfg.fd_tol)?;
    let fh_verdict = fh.verdict;
    let witness = fh.witness.clone();
    report.f_holomorphy = Some(fh);
    match fh_verdict {
        Verdict::Pass => {}
        Verdict::Fail => {
            report.verdict = ForelliVerdict::NotFHolomorphic { witness };
            return Ok(report);
        }
        Verdict::Inconclusive => {
            report.verdict =
                ForelliVerdict::HypothesisViolated { reason: "oracle returned non-finite values along a curve".into() };
            return Ok(report);
        }
    }

    let lambda_max = cfg.lambda_max.unwrap_or_else(|| jet_top_level(jo.jet(), field.rates()));
    let vanishing = antiholomorphic_vanishing(jo.jet(), &field, lambda_max, cfg.trials, rng.gen(), cfg.vanishing_tol)?;
    let vanished = vanishing.passed();
    let witness = vanishing.worst.clone();
    report.vanishing = Some(vanishing);
    if !vanished {
        report.verdict = ForelliVerdict::AntiHolomorphicObstruction { witness };
        return Ok(report);
    }

    let recon = match reconstruct(jo, &field, cfg.bound_tol) {
        Ok(r) => r,
        Err(e @ Error::BoundViolation { .. }) => {
            report.verdict = ForelliVerdict::HypothesisViolated { reason: format!("jet incompatible with sup bound: {e}") };
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    let mut residual = 0.0f64;
    for z in comparison_grid(jo.dim(), cfg.compare_radius) {
        let d = (jo.eval(&z) - recon.psi.eval_unchecked(&z)).norm();
        residual = if d.is_nan() { f64::INFINITY } else { residual.max(d) };
    }
    report.comparison_residual = Some(residual);
    let psi = recon.psi.clone();
    report.reconstruction = Some(recon);
    report.verdict = if residual <= cfg.compare_tol * jo.bound() {
        ForelliVerdict::Holomorphic { psi }
    } else {
        ForelliVerdict::HypothesisViolated {
            reason: format!("reconstruction differs from the oracle by {residual:e} on the radius-{} grid", cfg.compare_radius),
        }
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn field(rates: &[(i64, i64)]) -> DiagonalField {
        DiagonalField::real(rates.iter().map(|&(n, d)| q(n, d)).collect()).unwrap()
    }

    fn z1_plus_z2_sq() -> TaylorSeries {
        TaylorSeries::from_exponents(2, &[(&[1, 0], &[0, 0], c(1.0, 0.0)), (&[0, 2], &[0, 0], c(1.0, 0.0))]).unwrap()
    }

    fn flat(z: &[Complex64]) -> Complex64 {
        let p = z[0].norm() * z[1].norm();
        if p == 0.0 {
            c(0.0, 0.0)
        } else {
            c((-1.0 / p).exp(), 0.0)
        }
    }

    fn samples(f: &DiagonalField, seed: u64) -> (Vec<Vec<Complex64>>, Vec<Complex64>) {
        sample_curves(&f.eigenvalues(), 6, 6, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    #[test]
    fn f_holomorphy_examples() {
        let f = field(&[(1, 1), (2, 1)]);
        let (curves, zetas) = samples(&f, 1);
        let sq = |z: &[Complex64]| z[0] * z[0];
        let r = f_holomorphy_check(&sq, &f.eigenvalues(), &curves, &zetas, FD_STEP, 1e-6).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);

        let mixed = field(&[(1, 1), (-1, 1)]);
        let (curves, zetas) = samples(&mixed, 2);
        let r = f_holomorphy_check(&flat, &mixed.eigenvalues(), &curves, &zetas, FD_STEP, 1e-6).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");

        let unit = field(&[(1, 1), (1, 1)]);
        let (curves, zetas) = samples(&unit, 3);
        let zbar = |z: &[Complex64]| z[0].conj();
        let r = f_holomorphy_check(&zbar, &unit.eigenvalues(), &curves, &zetas, FD_STEP, 1e-6).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        // ∂/∂ζ̄ conj(c e^{-ζ}) = -conj(c) e^{-conj ζ}.
        let w = r.witness.unwrap();
        let expected = w.base_point[0].norm() * (-w.zeta.re).exp() / (1.0 + w.value.norm());
        assert!((w.residual - expected).abs() < 1e-8);
    }

    #[test]
    fn curve_leaving_polydisk_is_an_error() {
        let f = field(&[(1, 1)]);
        let r = f_holomorphy_check(&|z| z[0], &f.eigenvalues(), &[vec![c(0.9, 0.0)]], &[c(-1.0, 0.0)], FD_STEP, 1e-6);
        assert!(matches!(r, Err(Error::CurveLeavesPolydisk { .. })));
    }

    #[test]
    fn vanishing_examples() {
        let f = field(&[(1, 1), (1, 1)]);
        let hol = z1_plus_z2_sq();
        let r = antiholomorphic_vanishing(&hol, &f, q(4, 1), 8, 0, 1e-10).unwrap();
        assert!(r.passed() && r.agree());

        let zz = TaylorSeries::from_exponents(2, &[(&[0, 0], &[1, 1], c(1.0, 0.0))]).unwrap();
        let r = antiholomorphic_vanishing(&zz, &f, q(4, 1), 8, 0, 1e-10).unwrap();
        assert!(!r.passed() && r.agree());
        let w = r.worst.unwrap();
        assert_eq!((w.mu.as_str(), w.nu.as_str()), ("0", "2"));
        let v = level_sum(&zz, f.rates(), q(0, 1), q(2, 1), &[c(0.5, 0.0), c(0.5, 0.0)]);
        assert!((v - c(0.25, 0.0)).norm() < 1e-16);

        let mixed = field(&[(1, 1), (-1, 1)]);
        assert_eq!(antiholomorphic_vanishing(&zz, &mixed, q(4, 1), 8, 0, 1e-10).unwrap_err(), Error::MixedSpectrum);
    }

    #[test]
    fn reconstruct_examples() {
        let f = field(&[(1, 1), (2, 1)]);
        let jet = z1_plus_z2_sq();
        let psi = jet.clone();
        let jo = JetOracle::new(move |z| psi.eval_unchecked(z), jet.clone());
        assert!((jo.bound() - 2.0).abs() < 1e-6);
        assert_eq!(reconstruct(&jo, &f, 1e-6).unwrap().psi, jet);

        let one = field(&[(1, 1)]);
        let z = TaylorSeries::from_exponents(1, &[(&[1], &[0], c(1.0, 0.0))]).unwrap();
        let jo = JetOracle::with_bound(|z| z[0], z, 1.0);
        assert!(reconstruct(&jo, &one, 1e-6).is_ok());

        let two = TaylorSeries::from_exponents(1, &[(&[1], &[0], c(2.0, 0.0))]).unwrap();
        let jo = JetOracle::with_bound(|z| 2.0 * z[0], two, 1.0);
        assert!(matches!(reconstruct(&jo, &one, 1e-6), Err(Error::BoundViolation { .. })));
    }

    #[test]
    fn level_polynomial_bound_catches_combined_coefficients() {
        // Each coefficient is below 1 but z1 + z2 reaches 1.6 on the torus.
        let f = field(&[(1, 1), (1, 1)]);
        let jet =
            TaylorSeries::from_exponents(2, &[(&[1, 0], &[0, 0], c(0.8, 0.0)), (&[0, 1], &[0, 0], c(0.8, 0.0))]).unwrap();
        let jo = JetOracle::with_bound(|z| 0.8 * (z[0] + z[1]), jet, 1.0);
        match reconstruct(&jo, &f, 1e-6) {
            Err(Error::BoundViolation { sup, .. }) => assert!((sup - 1.6).abs() < 1e-6),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn pipeline_holomorphic_input() {
        let f = field(&[(1, 1), (2, 1)]);
        let jet = z1_plus_z2_sq();
        let psi = jet.clone();
        let jo = JetOracle::new(move |z| psi.eval_unchecked(z), jet.clone());
        let r = forelli_pipeline(&jo, &f, &ForelliConfig::default()).unwrap();
        assert_eq!(r.verdict, ForelliVerdict::Holomorphic { psi: jet });
        assert!(r.comparison_residual.unwrap() < 1e-10);
    }

    #[test]
    fn pipeline_remark_field_violates_hypothesis() {
        let f = field(&[(1, 1), (-1, 1)]);
        let jet = TaylorSeries::from_exponents(2, &[(&[0, 0], &[1, 1], c(1.0, 0.0))]).unwrap();
        let jo = JetOracle::new(|z| z[0].conj() * z[1].conj(), jet);
        let r = forelli_pipeline(&jo, &f, &ForelliConfig::default()).unwrap();
        assert!(matches!(r.verdict, ForelliVerdict::HypothesisViolated { .. }));
        assert!(r.f_holomorphy.unwrap().max_residual < 1e-8);
    }

    #[test]
    fn pipeline_flat_function() {
        let zero = TaylorSeries::zero(2).unwrap();
        let jo = JetOracle::new(flat, zero);
        let mixed = field(&[(1, 1), (-1, 1)]);
        let r = forelli_pipeline(&jo, &mixed, &ForelliConfig::default()).unwrap();
        assert!(matches!(r.verdict, ForelliVerdict::HypothesisViolated { .. }));
        assert_eq!(r.f_holomorphy.unwrap().verdict, Verdict::Pass);

        let unit = field(&[(1, 1), (1, 1)]);
        let r = forelli_pipeline(&jo, &unit, &ForelliConfig::default()).unwrap();
        assert!(matches!(r.verdict, ForelliVerdict::NotFHolomorphic { .. }), "{:?}", r.verdict);
    }

    #[test]
    fn pipeline_antiholomorphic_input() {
        let unit = field(&[(1, 1), (1, 1)]);
        let jet = TaylorSeries::from_exponents(2, &[(&[0, 0], &[1, 0], c(1.0, 0.0))]).unwrap();
        let jo = JetOracle::new(|z| z[0].conj(), jet);
        let r = forelli_pipeline(&jo, &unit, &ForelliConfig::default()).unwrap();
        assert!(
            matches!(r.verdict, ForelliVerdict::NotFHolomorphic { .. } | ForelliVerdict::AntiHolomorphicObstruction { .. })
        );
    }

    #[test]
    fn pipeline_rejects_wrong_jet() {
        let f = field(&[(1, 1), (2, 1)]);
        let jet = TaylorSeries::from_exponents(2, &[(&[1, 0], &[0, 0], c(1.0, 0.0))]).unwrap();
        let jo = JetOracle::new(|z| z[0] + 0.5 * z[1], jet);
        let r = forelli_pipeline(&jo, &f, &ForelliConfig::default()).unwrap();
        assert_eq!(r.jet_failure_order, Some(1));
    }

    #[test]
    fn pipeline_is_deterministic() {
        let f = field(&[(1, 1), (1, 1)]);
        let jet = TaylorSeries::from_exponents(2, &[(&[0, 0], &[1, 0], c(1.0, 0.0))]).unwrap();
        let jo = JetOracle::new(|z| z[0].conj(), jet);
        let cfg = ForelliConfig { seed: 42, ..ForelliConfig::default() };
        let a = serde_json::to_string(&forelli_pipeline(&jo, &f, &cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&forelli_pipeline(&jo, &f, &cfg).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn comparison_grid_size() {
        assert_eq!(comparison_grid(2, 0.5).len(), 17 * 17);
        assert!(comparison_grid(3, 0.5).iter().flatten().all(|z| z.norm() <= 0.5 + 1e-15));
    }
}
