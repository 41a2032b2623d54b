//! Asymptotic expansions `Σ_j Σ_k p_{jk} e^{-μ_{jk} ζ - ν_{jk} conj(ζ)}` on the
//! right half-plane, with `μ + ν = λ_j` exactly.
//!
//! Limits "`-> 0` as `Re ζ -> ∞`" are certified on a finite abscissa ladder;
//! see [`crate::report`] for the verdict protocol.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::{classify_spectrum, level_grid, serialize_rationals, to_f64, BasePoint, DiagonalField, SpectrumClass};
use crate::numeric::{linear_fit, linspace, rounding_floor};
use crate::report::{log_slope, tail_verdict, DecayReport, DecaySample, Verdict};
use crate::series::TaylorSeries;

/// Merged coefficients with modulus below this are treated as cancelled.
pub const PRUNE_THRESHOLD: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpTerm {
    pub mu: Rational64,
    pub nu: Rational64,
    pub p: Complex64,
}

impl ExpTerm {
    pub fn level(&self) -> Rational64 {
        self.mu + self.nu
    }

    pub fn eval(&self, zeta: Complex64) -> Complex64 {
        self.p * (-to_f64(self.mu) * zeta - to_f64(self.nu) * zeta.conj()).exp()
    }
}

/// Canonical expansion: levels ascend from 0, terms are keyed by `(μ, ν)`
/// and never zero.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticExpansion {
    levels: Vec<Rational64>,
    terms: BTreeMap<(Rational64, Rational64), Complex64>,
}

impl AsymptoticExpansion {
    pub fn empty() -> Self {
        Self { levels: vec![Rational64::zero()], terms: BTreeMap::new() }
    }

    /// Builds the canonical form: levels are sorted and deduplicated, `0` and
    /// every term level are added to the ladder, coinciding `(μ, ν)` are
    /// summed and exact zeros dropped.
    pub fn new(levels: impl IntoIterator<Item = Rational64>, terms: impl IntoIterator<Item = ExpTerm>) -> Result<Self> {
        let mut ladder: BTreeSet<Rational64> = levels.into_iter().collect();
        if ladder.iter().any(Signed::is_negative) {
            return Err(Error::BadLevelGrid);
        }
        ladder.insert(Rational64::zero());
        let mut map: BTreeMap<(Rational64, Rational64), Complex64> = BTreeMap::new();
        for t in terms {
            if t.mu.is_negative() || t.nu.is_negative() {
                return Err(Error::NegativeExponent { mu: t.mu, nu: t.nu });
            }
            ladder.insert(t.level());
            *map.entry((t.mu, t.nu)).or_default() += t.p;
        }
        map.retain(|_, p| *p != Complex64::zero());
        Ok(Self { levels: ladder.into_iter().collect(), terms: map })
    }

    pub fn levels(&self) -> &[Rational64] {
        &self.levels
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in `(μ, ν)` order.
    pub fn terms(&self) -> impl Iterator<Item = ExpTerm> + '_ {
        self.terms.iter().map(|(&(mu, nu), &p)| ExpTerm { mu, nu, p })
    }

    /// Terms at level index `j`.
    pub fn terms_at(&self, j: usize) -> Vec<ExpTerm> {
        let lambda = self.levels[j];
        self.terms().filter(|t| t.level() == lambda).collect()
    }

    /// Same nonzero terms; the level ladders may differ.
    pub fn equals(&self, other: &Self) -> bool {
        self.terms == other.terms
    }

    fn check_level(&self, n: usize) -> Result<Rational64> {
        self.levels.get(n).copied().ok_or(Error::LevelIndex { index: n, len: self.levels.len() })
    }

    /// Partial sum through level index `n`.
    pub fn eval(&self, zeta: Complex64, n: usize) -> Result<Complex64> {
        let lambda = self.check_level(n)?;
        Ok(self.terms().filter(|t| t.level() <= lambda).map(|t| t.eval(zeta)).sum())
    }

    /// Sum of `|term|` through level `n`, the magnitude scale for rounding.
    fn abs_scale(&self, zeta: Complex64, lambda: Rational64) -> f64 {
        self.terms().filter(|t| t.level() <= lambda).map(|t| t.eval(zeta).norm()).sum()
    }
}

impl Serialize for AsymptoticExpansion {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View {
            level: String,
            mu: String,
            nu: String,
            re: f64,
            im: f64,
        }
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for t in self.terms() {
            seq.serialize_element(&View {
                level: t.level().to_string(),
                mu: t.mu.to_string(),
                nu: t.nu.to_string(),
                re: t.p.re,
                im: t.p.im,
            })?;
        }
        seq.end()
    }
}

/// `Σ_j c_j e^{-λ_j ζ}` with `λ_0 = 0 < λ_1 < …`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HolomorphicExpansion {
    #[serde(serialize_with = "serialize_rationals")]
    levels: Vec<Rational64>,
    coeffs: Vec<Complex64>,
}

impl HolomorphicExpansion {
    /// Sorts the pairs, sums repeated levels and adds `λ = 0` with a zero
    /// coefficient when absent.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Rational64, Complex64)>) -> Result<Self> {
        let mut map: BTreeMap<Rational64, Complex64> = BTreeMap::new();
        map.insert(Rational64::zero(), Complex64::zero());
        for (lambda, c) in pairs {
            if lambda.is_negative() {
                return Err(Error::BadLevelGrid);
            }
            *map.entry(lambda).or_default() += c;
        }
        let (levels, coeffs) = map.into_iter().unzip();
        Ok(Self { levels, coeffs })
    }

    pub fn levels(&self) -> &[Rational64] {
        &self.levels
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Rational64, Complex64)> + '_ {
        self.levels.iter().copied().zip(self.coeffs.iter().copied())
    }

    /// Partial sum `Σ_{j≤n} c_j e^{-λ_j ζ}`; `n` is clamped to the top index.
    pub fn eval(&self, zeta: Complex64, n: usize) -> Complex64 {
        self.pairs().take(n + 1).map(|(l, c)| c * (-to_f64(l) * zeta).exp()).sum()
    }

    fn abs_scale(&self, zeta: Complex64, n: usize) -> f64 {
        self.pairs().take(n + 1).map(|(l, c)| c.norm() * (-to_f64(l) * zeta.re).exp()).sum()
    }

    pub fn to_asymptotic(&self) -> AsymptoticExpansion {
        AsymptoticExpansion::new(
            self.levels.iter().copied(),
            self.pairs().map(|(mu, p)| ExpTerm { mu, nu: Rational64::zero(), p }),
        )
        .expect("holomorphic expansions have non-negative levels")
    }
}

/// Expansion of `φ(s_c(ζ))` for a jet `φ`, truncated at `lambda_max`.
///
/// Substituting `s_c(ζ) = c e^{-αζ}` turns `z^k conj(z)^m` into
/// `c^k conj(c)^m e^{-(α,k)ζ - (α,m) conj(ζ)}`, so the expansion is exact for a
/// finite jet.
pub fn pushforward(
    series: &TaylorSeries,
    field: &DiagonalField,
    c: &BasePoint,
    lambda_max: Rational64,
) -> Result<AsymptoticExpansion> {
    if classify_spectrum(field) != SpectrumClass::PositiveRatios {
        return Err(Error::MixedSpectrum);
    }
    if !field.is_normalized() {
        return Err(Error::NotNormalized);
    }
    if series.dim() != field.dim() {
        return Err(Error::DimensionMismatch { expected: field.dim(), actual: series.dim() });
    }
    if c.dim() != field.dim() {
        return Err(Error::DimensionMismatch { expected: field.dim(), actual: c.dim() });
    }
    let grid = level_grid(field, lambda_max)?;
    let conj_c: Vec<Complex64> = c.coords().iter().map(Complex64::conj).collect();
    let mut merged: BTreeMap<(Rational64, Rational64), Complex64> = BTreeMap::new();
    for t in series.terms() {
        let mu = t.k.weight(field.rates());
        let nu = t.m.weight(field.rates());
        if mu + nu > lambda_max {
            continue;
        }
        let p = t.coefficient * t.k.monomial(c.coords()) * t.m.monomial(&conj_c);
        if p != Complex64::zero() {
            *merged.entry((mu, nu)).or_default() += p;
        }
    }
    merged.retain(|_, p| p.norm() >= PRUNE_THRESHOLD);
    AsymptoticExpansion::new(grid.levels, merged.into_iter().map(|((mu, nu), p)| ExpTerm { mu, nu, p }))
}

/// Sampling plan for half-plane decay claims.
#[derive(Clone, Debug)]
pub struct HalfPlaneGrid {
    /// Increasing abscissas `x = Re ζ`.
    pub abscissas: Vec<f64>,
    /// Ordinates `y = Im ζ` sampled at each abscissa.
    pub ordinates: Vec<f64>,
    pub tolerance: f64,
    /// Slack in the ε-form rate `λ_{n+1} - ε`.
    pub epsilon: f64,
}

impl Default for HalfPlaneGrid {
    fn default() -> Self {
        Self {
            abscissas: vec![1.0, 2.0, 4.0, 8.0, 12.0],
            ordinates: linspace(-8.0, 8.0, 33),
            tolerance: 1e-8,
            epsilon: 0.25,
        }
    }
}

impl HalfPlaneGrid {
    fn validate(&self) -> Result<()> {
        if self.abscissas.is_empty() || self.ordinates.is_empty() {
            return Err(Error::InvalidParameter("half-plane grid needs abscissas and ordinates".into()));
        }
        if self.abscissas.windows(2).any(|w| w[1] <= w[0]) || self.abscissas[0] <= 0.0 {
            return Err(Error::InvalidParameter("abscissas must be positive and increasing".into()));
        }
        Ok(())
    }
}

/// Ladder of `sup_y |residual| e^{rate x}`. `residual` returns the residual
/// and the magnitude of the quantities it was computed from.
fn weighted_ladder(
    claim: String,
    rate: f64,
    grid: &HalfPlaneGrid,
    residual: &dyn Fn(Complex64) -> (Complex64, f64),
) -> DecayReport {
    let mut samples = Vec::with_capacity(grid.abscissas.len());
    for &x in &grid.abscissas {
        let weight = (rate * x).exp();
        let mut resolved: Option<f64> = None;
        let mut floor_max = 0.0f64;
        for &y in &grid.ordinates {
            let zeta = Complex64::new(x, y);
            let (r, scale) = residual(zeta);
            if !r.is_finite() {
                return DecayReport::inconclusive(claim, rate, grid.tolerance, format!("non-finite residual at {zeta}"));
            }
            let floor = rounding_floor(scale);
            if r.norm() > floor {
                resolved = Some(resolved.unwrap_or(0.0).max(r.norm() * weight));
            } else {
                floor_max = floor_max.max(floor * weight);
            }
        }
        samples.push(match resolved {
            Some(m) => DecaySample { abscissa: x, measured: m, resolved: true },
            None => DecaySample { abscissa: x, measured: floor_max, resolved: false },
        });
    }
    let slope = log_slope(&samples, |x| x);
    let verdict = tail_verdict(&samples, grid.tolerance);
    DecayReport { claim, rate, samples, slope, tolerance: grid.tolerance, verdict, note: None }
}

/// Both forms of the decay claim for one truncation level.
#[derive(Clone, Debug, Serialize)]
pub struct TailBoundReport {
    /// `|f - S_n| e^{λ_n x} -> 0`.
    pub at_level: DecayReport,
    /// `|f - S_n| e^{(λ_{n+1} - ε) x} -> 0`, when a next level exists.
    pub eps_form: Option<DecayReport>,
}

impl TailBoundReport {
    pub fn passed(&self) -> bool {
        self.at_level.passed() && self.eps_form.as_ref().is_none_or(DecayReport::passed)
    }
}

pub fn tail_bound_check(
    oracle: &dyn Fn(Complex64) -> Complex64,
    e: &AsymptoticExpansion,
    n: usize,
    grid: &HalfPlaneGrid,
) -> Result<TailBoundReport> {
    grid.validate()?;
    let lambda = e.check_level(n)?;
    let residual = |zeta: Complex64| {
        let v = oracle(zeta);
        let s = e.eval(zeta, n).expect("level index checked");
        (v - s, v.norm() + e.abs_scale(zeta, lambda))
    };
    let at_level = weighted_ladder(format!("o(exp(-{lambda} x))"), to_f64(lambda), grid, &residual);
    let eps_form = e.levels.get(n + 1).map(|next| {
        let rate = to_f64(*next) - grid.epsilon;
        weighted_ladder(format!("o(exp(-({next} - {}) x))", grid.epsilon), rate, grid, &residual)
    });
    Ok(TailBoundReport { at_level, eps_form })
}

/// Succeeds iff no term carries `conj(ζ)`.
pub fn restrict_holomorphic(e: &AsymptoticExpansion) -> Result<HolomorphicExpansion> {
    let mut offending: Option<ExpTerm> = None;
    for t in e.terms() {
        if t.nu.is_positive() && offending.is_none_or(|o| t.level() < o.level()) {
            offending = Some(t);
        }
    }
    if let Some(t) = offending {
        return Err(Error::NotHolomorphic { level: t.level(), mu: t.mu, nu: t.nu });
    }
    let mut coeffs = vec![Complex64::zero(); e.levels.len()];
    for t in e.terms() {
        let j = e.levels.binary_search(&t.mu).expect("term level is on the ladder");
        coeffs[j] = t.p;
    }
    Ok(HolomorphicExpansion { levels: e.levels.clone(), coeffs })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub bound: f64,
    pub rate: f64,
    pub x_lo: f64,
    /// Largest `|f(z)| / (M e^{-λ(x - x_lo)})` seen.
    pub worst_ratio: f64,
    /// `(x, y)` of the worst sample.
    pub witness: (f64, f64),
    pub tolerance: f64,
    pub passed: bool,
}

/// Sampled sup of `|f|` on the vertical segment `Re z = x_lo`.
pub fn boundary_sup(oracle: &dyn Fn(Complex64) -> Complex64, x_lo: f64, ordinates: &[f64]) -> f64 {
    ordinates.iter().map(|&y| oracle(Complex64::new(x_lo, y)).norm()).fold(0.0, f64::max)
}

/// Checks `|f(z)| <= M e^{-λ(Re z - x_lo)} (1 + tol)` on the grid (only
/// abscissas `>= x_lo` are used).
pub fn max_principle_bound(
    oracle: &dyn Fn(Complex64) -> Complex64,
    m: f64,
    lambda: f64,
    x_lo: f64,
    grid: &HalfPlaneGrid,
) -> Result<BoundReport> {
    bound_with_floor(oracle, &|_| 0.0, m, lambda, x_lo, grid)
}

/// The max-principle bound for the residual `f_n`, with `M` its sampled sup
/// on `Re z = x_lo` and rate `λ_{n+1}`. A sample may exceed
/// the bound by at most the rounding floor of `|f| + Σ_{j≤n} |c_j e^{-λ_j z}|`,
/// since `f_n` is formed by cancellation.
pub fn residual_bound_check(
    oracle: &dyn Fn(Complex64) -> Complex64,
    e: &HolomorphicExpansion,
    n: usize,
    x_lo: f64,
    grid: &HalfPlaneGrid,
) -> Result<BoundReport> {
    let f_n = residual(oracle, e, n)?;
    let lambda = to_f64(e.levels()[n + 1]);
    let m = boundary_sup(&f_n, x_lo, &grid.ordinates);
    let floor = |z: Complex64| rounding_floor(oracle(z).norm() + e.abs_scale(z, n));
    bound_with_floor(&f_n, &floor, m, lambda, x_lo, grid)
}

fn bound_with_floor(
    oracle: &dyn Fn(Complex64) -> Complex64,
    floor: &dyn Fn(Complex64) -> f64,
    m: f64,
    lambda: f64,
    x_lo: f64,
    grid: &HalfPlaneGrid,
) -> Result<BoundReport> {
    if lambda < 0.0 || m < 0.0 {
        return Err(Error::InvalidParameter("bound and rate must be non-negative".into()));
    }
    let mut worst = (0.0f64, (x_lo, 0.0));
    let xs = std::iter::once(x_lo).chain(grid.abscissas.iter().copied().filter(|&x| x > x_lo));
    for x in xs {
        let envelope = m * (-lambda * (x - x_lo)).exp();
        for &y in &grid.ordinates {
            let z = Complex64::new(x, y);
            let v = oracle(z).norm();
            if !v.is_finite() {
                return Err(Error::NonFiniteSample { point: format!("{x}+{y}i") });
            }
            let excess = (v - floor(z)).max(0.0);
            let ratio = if excess == 0.0 {
                0.0
            } else if envelope > 0.0 {
                excess / envelope
            } else {
                f64::INFINITY
            };
            if ratio > worst.0 {
                worst = (ratio, (x, y));
            }
        }
    }
    Ok(BoundReport {
        bound: m,
        rate: lambda,
        x_lo,
        worst_ratio: worst.0,
        witness: worst.1,
        tolerance: grid.tolerance,
        passed: worst.0 <= 1.0 + grid.tolerance,
    })
}

/// The remainder `f_n = f - Σ_{j≤n} c_j e^{-λ_j z}`.
pub fn residual<'a>(
    oracle: &'a dyn Fn(Complex64) -> Complex64,
    e: &'a HolomorphicExpansion,
    n: usize,
) -> Result<impl Fn(Complex64) -> Complex64 + 'a> {
    if n >= e.len() {
        return Err(Error::LevelIndex { index: n, len: e.len() });
    }
    Ok(move |z| oracle(z) - e.eval(z, n))
}

/// Truncation audit for `Σ e^{-λ_j d} < ∞`, which can only be inspected on
/// the stored levels.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceAudit {
    /// `Σ_j e^{-λ_j d}` over stored levels.
    pub mass: f64,
    /// Contribution of levels above `λ_max / 2`.
    pub tail_mass: f64,
    /// Levels per unit length in the upper half of the ladder.
    pub tail_density: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub audit: ConvergenceAudit,
    /// Abscissa is the truncation index; measured is the sup error on `ℍ_d`.
    pub decay: DecayReport,
}

impl ConvergenceReport {
    pub fn passed(&self) -> bool {
        self.decay.passed()
    }
}

pub fn convergence_audit(e: &HolomorphicExpansion, d: f64) -> ConvergenceAudit {
    let top = to_f64(*e.levels.last().expect("at least one level"));
    let half = top / 2.0;
    let mass: f64 = e.levels.iter().map(|l| (-to_f64(*l) * d).exp()).sum();
    let upper: Vec<f64> = e.levels.iter().map(|l| to_f64(*l)).filter(|&l| l > half).collect();
    let tail_mass: f64 = upper.iter().map(|l| (-l * d).exp()).sum();
    let tail_density = if top > 0.0 { upper.len() as f64 / (top - half) } else { 0.0 };
    ConvergenceAudit { mass, tail_mass, tail_density, passed: tail_mass < 0.5 * mass }
}

/// Checks that the partial sums converge uniformly to `oracle` on
/// `ℍ_d = {Re z >= d}`, sampled at abscissas `d · grid.abscissas`.
///
/// A failing truncation audit makes the verdict inconclusive.
pub fn uniform_convergence_check(
    e: &HolomorphicExpansion,
    d: f64,
    oracle: &dyn Fn(Complex64) -> Complex64,
    grid: &HalfPlaneGrid,
) -> Result<ConvergenceReport> {
    if d <= 0.0 {
        return Err(Error::InvalidParameter(format!("d must be positive (got {d})")));
    }
    grid.validate()?;
    let audit = convergence_audit(e, d);
    let mut points = Vec::new();
    for &x in &grid.abscissas {
        for &y in &grid.ordinates {
            points.push(Complex64::new(d * x, y));
        }
    }
    let values: Vec<Complex64> = points.iter().map(|&z| oracle(z)).collect();
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteSample { point: points[i].to_string() });
    }
    let mut samples = Vec::with_capacity(e.len());
    for n in 0..e.len() {
        let mut resolved: Option<f64> = None;
        let mut floor_max = 0.0f64;
        for (z, v) in points.iter().zip(&values) {
            let r = (v - e.eval(*z, n)).norm();
            let floor = rounding_floor(v.norm() + e.abs_scale(*z, n));
            if r > floor {
                resolved = Some(resolved.unwrap_or(0.0).max(r));
            } else {
                floor_max = floor_max.max(floor);
            }
        }
        samples.push(match resolved {
            Some(m) => DecaySample { abscissa: n as f64, measured: m, resolved: true },
            None => DecaySample { abscissa: n as f64, measured: floor_max, resolved: false },
        });
    }
    let slope = log_slope(&samples, |n| n);
    let verdict = if audit.passed { tail_verdict(&samples, grid.tolerance) } else { Verdict::Inconclusive };
    let note = (!audit.passed).then(|| "stored levels do not show a summable tail at this d".to_string());
    Ok(ConvergenceReport {
        audit,
        decay: DecayReport {
            claim: format!("uniform convergence on Re z >= {d}"),
            rate: d,
            samples,
            slope,
            tolerance: grid.tolerance,
            verdict,
            note,
        },
    })
}

/// Decay rate of `f_j = f - Σ_{i≤j} c_i e^{-λ_i z}` fitted on `x ∈ [0.25, 3]`.
///
/// The size of `f_j` on the line `Re z = x` is measured by its Gaussian-weighted
/// mean square over `y ∈ [-half_width, half_width]`. For an expansion this is
/// `Σ_{i>j} |c_i|^2 e^{-2λ_i x}` up to cross terms that the window suppresses,
/// so its log is convex in `x` with slope at most `-2λ_{j+1}`. Returns `None`
/// when fewer than two abscissas are above rounding.
pub fn residual_decay_rate(
    oracle: &dyn Fn(Complex64) -> Complex64,
    e: &HolomorphicExpansion,
    j: usize,
    half_width: f64,
    nodes: usize,
) -> Result<Option<f64>> {
    let f_j = residual(oracle, e, j)?;
    let sigma = half_width / 6.0;
    let ys = linspace(-half_width, half_width, nodes.max(2));
    let weights: Vec<f64> = ys.iter().map(|y| (-0.5 * (y / sigma).powi(2)).exp()).collect();
    let total: f64 = weights.iter().sum();
    let mut xs = Vec::new();
    let mut logs = Vec::new();
    for i in 1..=12 {
        let x = 0.25 * i as f64;
        let mut mean_sq = 0.0;
        let mut scale = 0.0f64;
        for (y, w) in ys.iter().zip(&weights) {
            let z = Complex64::new(x, *y);
            let r = f_j(z);
            if !r.is_finite() {
                return Err(Error::NonFiniteSample { point: z.to_string() });
            }
            mean_sq += w * r.norm_sqr();
            scale = scale.max(oracle(z).norm() + e.abs_scale(z, j));
        }
        let rms = (mean_sq / total).sqrt();
        if rms > rounding_floor(scale) {
            xs.push(x);
            logs.push(rms.ln());
        }
    }
    Ok(linear_fit(&xs, &logs).map(|(slope, _)| -slope))
}
