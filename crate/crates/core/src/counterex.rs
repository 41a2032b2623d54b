//! Functions that are smooth, flat at the coordinate axes and holomorphic
//! along every integral curve of a field whose eigenvalue ratio is not a
//! positive real, yet are not holomorphic.
//!
//! - [`ResonantExample`]: field `(z_1, -t z_2)`, where `|z_1|^t |z_2|` is a
//!   first integral and `φ = exp(-1/(|z_1|^t |z_2|))`.
//! - [`SpiralExample`]: field `(α z_1, β z_2)` with `β = t conj(α)`, where
//!   `γ log|z_1| + (conj(γ)/t) log|z_2|` moves along curves by a translation
//!   of the curve time, and `φ = exp(ξ^b)` for a branch of `ξ^b` with
//!   negative real part on the relevant sector.
//! - The polynomial `conj(z_1) conj(z_2)`, constant on curves of `(z_1, -z_2)`.
//!
//! Curves are parametrized as in [`crate::flow::curve_point`],
//! `c_j e^{-e_j ζ}`, so the field `(α z_1, β z_2)` uses `e = (-α, -β)`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::curve_point;
use crate::forelli::{f_holomorphy_check, FHolomorphyReport};
use crate::numeric::{dbar_residual, FD_STEP};
use crate::report::Verdict;
use crate::series::{remainder_check_through, RemainderParams, TaylorSeries};

/// Modulus `|ξ|` at which candidate exponents are compared in
/// [`choose_branch_exponent`].
pub const BRANCH_REFERENCE_MODULUS: f64 = 16.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResonantExample {
    pub t: f64,
}

impl ResonantExample {
    pub fn new(t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter(format!("t must be positive (got {t})")));
        }
        Ok(Self { t })
    }

    /// Eigenvalues for [`curve_point`]: curves `(c_1 e^ζ, c_2 e^{-tζ})`.
    pub fn curve_eigenvalues(&self) -> [Complex64; 2] {
        [Complex64::new(-1.0, 0.0), Complex64::new(self.t, 0.0)]
    }

    pub fn invariant(&self, z: &[Complex64]) -> f64 {
        z[0].norm().powf(self.t) * z[1].norm()
    }

    pub fn phi(&self, z: &[Complex64]) -> f64 {
        let p = self.invariant(z);
        if p == 0.0 {
            0.0
        } else {
            (-1.0 / p).exp()
        }
    }

    /// `ln φ` from `ln|z_1|` and `ln|z_2|`, without underflow.
    pub fn log_phi(&self, log_z1: f64, log_z2: f64) -> f64 {
        -(-self.t * log_z1 - log_z2).exp()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BranchChoice {
    pub b: f64,
    pub branch_offset: i32,
    /// Angular distance from `b (Arg S + 2πk)` to the boundary of the
    /// half-plane `cos < 0`.
    pub margin: f64,
    pub theta_min: f64,
    pub theta_max: f64,
}

/// Argument range `[θ_min, θ_max]` of the sector `{rγ + s conj(γ) : r, s < 0}`.
pub fn sector_arguments(gamma: Complex64) -> (f64, f64) {
    let a = (-gamma).arg();
    let b = (-gamma.conj()).arg();
    (a.min(b), a.max(b))
}

fn containment_margin(b: f64, k: i32, theta_min: f64, theta_max: f64) -> f64 {
    let shift = TAU * f64::from(k);
    let lo = b * (theta_min + shift);
    let hi = b * (theta_max + shift);
    let j = ((lo - FRAC_PI_2) / TAU).floor();
    let left = FRAC_PI_2 + TAU * j;
    let right = left + PI;
    (lo - left).min(right - hi)
}

/// Searches `b ∈ (1, 4]` in steps of `1e-3` and `k ∈ {0, …, 3}` for a branch
/// with `b (Arg ξ + 2πk) ∈ (π/2, 3π/2) mod 2π` on the whole sector.
///
/// Among admissible pairs the one maximizing `sin(margin) · 16^b` is chosen:
/// this is the guaranteed value of `-Re ξ^b` at `|ξ| = 16`, so the choice
/// trades angular margin against the strength of the decay it produces.
pub fn choose_branch_exponent(alpha: Complex64, t: f64) -> Result<BranchChoice> {
    if !(alpha.re < 0.0 && alpha.im > 0.0 && t > 0.0) {
        return Err(Error::InvalidParameter(format!("need Re α < 0, Im α > 0, t > 0 (got α = {alpha}, t = {t})")));
    }
    let gamma = spiral_gamma(alpha);
    let (theta_min, theta_max) = sector_arguments(gamma);
    let mut best: Option<(f64, BranchChoice)> = None;
    for step in 1..=3000 {
        let b = 1.0 + 1e-3 * f64::from(step);
        for k in 0..=3 {
            let margin = containment_margin(b, k, theta_min, theta_max);
            if margin <= 0.0 {
                continue;
            }
            let score = margin.sin() * BRANCH_REFERENCE_MODULUS.powf(b);
            if best.is_none_or(|(s, _)| score > s) {
                best = Some((score, BranchChoice { b, branch_offset: k, margin, theta_min, theta_max }));
            }
        }
    }
    best.map(|(_, choice)| choice).ok_or(Error::NoBranchExponent { theta_min, theta_max })
}

/// `γ = 1/(2α_1) - i/(2α_2)` for `α = α_1 + iα_2`.
pub fn spiral_gamma(alpha: Complex64) -> Complex64 {
    Complex64::new(1.0 / (2.0 * alpha.re), -1.0 / (2.0 * alpha.im))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpiralExample {
    pub alpha: Complex64,
    pub t: f64,
    pub beta: Complex64,
    pub gamma: Complex64,
    pub b: f64,
    pub branch_offset: i32,
}

impl SpiralExample {
    /// Uses [`choose_branch_exponent`] for `b` and the branch offset.
    pub fn new(alpha: Complex64, t: f64) -> Result<Self> {
        let choice = choose_branch_exponent(alpha, t)?;
        Self::with_branch(alpha, t, choice.b, choice.branch_offset)
    }

    pub fn with_branch(alpha: Complex64, t: f64, b: f64, branch_offset: i32) -> Result<Self> {
        if !(alpha.re < 0.0 && alpha.im > 0.0 && t > 0.0) {
            return Err(Error::InvalidParameter(format!("need Re α < 0, Im α > 0, t > 0 (got α = {alpha}, t = {t})")));
        }
        if !(b > 1.0) {
            return Err(Error::InvalidParameter(format!("branch exponent must exceed 1 (got {b})")));
        }
        Ok(Self { alpha, t, beta: t * alpha.conj(), gamma: spiral_gamma(alpha), b, branch_offset })
    }

    /// Eigenvalues for [`curve_point`]: curves `(c_1 e^{αζ}, c_2 e^{βζ})`.
    pub fn curve_eigenvalues(&self) -> [Complex64; 2] {
        [-self.alpha, -self.beta]
    }

    pub fn xi(&self, log_z1: f64, log_z2: f64) -> Complex64 {
        self.gamma * log_z1 + self.gamma.conj() / self.t * log_z2
    }

    /// `ξ^b = exp(b (ln|ξ| + i(Arg ξ + 2πk)))`.
    pub fn power(&self, xi: Complex64) -> Complex64 {
        let arg = xi.arg() + TAU * f64::from(self.branch_offset);
        (self.b * Complex64::new(xi.norm().ln(), arg)).exp()
    }

    pub fn phi(&self, z: &[Complex64]) -> Complex64 {
        if z[0] == Complex64::new(0.0, 0.0) || z[1] == Complex64::new(0.0, 0.0) {
            return Complex64::new(0.0, 0.0);
        }
        self.power(self.xi(z[0].norm().ln(), z[1].norm().ln())).exp()
    }

    /// `ln|φ| = Re ξ^b` from `ln|z_1|` and `ln|z_2|`.
    pub fn log_modulus(&self, log_z1: f64, log_z2: f64) -> f64 {
        self.power(self.xi(log_z1, log_z2)).re
    }

    /// `|γ Re(αζ) + (conj(γ)/t) Re(βζ) - ζ|`.
    pub fn time_identity_error(&self, zeta: Complex64) -> f64 {
        (self.gamma * (self.alpha * zeta).re + self.gamma.conj() / self.t * (self.beta * zeta).re - zeta).norm()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubCheck {
    pub name: String,
    pub passed: bool,
    /// The measured quantity the check compares against its threshold.
    pub value: f64,
    pub threshold: f64,
    pub detail: String,
}

impl SubCheck {
    fn below(name: &str, value: f64, threshold: f64, detail: String) -> Self {
        Self { name: name.into(), passed: value < threshold, value, threshold, detail }
    }

    fn above(name: &str, value: f64, threshold: f64, detail: String) -> Self {
        Self { name: name.into(), passed: value > threshold, value, threshold, detail }
    }
}

pub fn verify_time_identity(ex: &SpiralExample, zetas: &[Complex64]) -> SubCheck {
    let worst = zetas.iter().map(|&z| ex.time_identity_error(z)).fold(0.0, f64::max);
    SubCheck::below("time_identity", worst, 1e-12, format!("{} samples", zetas.len()))
}

/// Samples `ξ = a(-γ) + s(-conj γ)` with `a, s` log-uniform in `[1e-3, 1e3]`
/// and reports the largest `Re ξ^b / |ξ|^b` (must be negative).
pub fn sector_sign_check(ex: &SpiralExample, samples: usize, rng: &mut ChaCha8Rng) -> SubCheck {
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..samples {
        let a = 10f64.powf(rng.gen_range(-3.0..3.0));
        let s = 10f64.powf(rng.gen_range(-3.0..3.0));
        let xi = -a * ex.gamma - s * ex.gamma.conj();
        let p = ex.power(xi);
        worst = worst.max(p.re / p.norm());
    }
    SubCheck::below("sector_sign", worst, 0.0, format!("max Re(ξ^b)/|ξ^b| over {samples} sector points"))
}

/// `-ln|φ| / (-ln|z_1|)` along `|z_1| = e^{-L}`, `L = 2, 4, …, 2^12`, with
/// `|z_2|` fixed: the exponent `n` in `|φ| ≈ |z_1|^n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayFit {
    pub log_inverse_modulus: Vec<f64>,
    pub exponent: Vec<f64>,
    /// Smallest `-ln|φ| / L^b` seen, an estimate of the constant in
    /// `|φ| <= exp(-c L^b)` (`b = 1` reports the plain exponent).
    pub constant: f64,
}

impl DecayFit {
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "log_inverse_modulus,exponent")?;
        for (l, e) in self.log_inverse_modulus.iter().zip(&self.exponent) {
            writeln!(out, "{l:e},{e:e}")?;
        }
        Ok(())
    }
}

fn decay_fit(log_phi: impl Fn(f64) -> f64, b: f64) -> DecayFit {
    let ls: Vec<f64> = (1..=12).map(|k| 2f64.powi(k)).collect();
    let exponent: Vec<f64> = ls.iter().map(|&l| -log_phi(-l) / l).collect();
    let constant = ls.iter().zip(&exponent).map(|(l, e)| e * l / l.powf(b)).fold(f64::INFINITY, f64::min);
    DecayFit { log_inverse_modulus: ls, exponent, constant }
}

fn decay_check(fit: &DecayFit, order: f64) -> SubCheck {
    let increasing = fit.exponent.windows(2).all(|w| w[1] >= w[0]);
    let last = *fit.exponent.last().expect("non-empty ladder");
    let value = if increasing { last } else { f64::NEG_INFINITY };
    SubCheck::above(
        "flat_at_axis",
        value,
        order,
        format!("exponent of |z_1| at L = 2^12 is {last:e}; increasing along the ladder: {increasing}"),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "example")]
pub enum Which {
    Resonant { t: f64 },
    Spiral { alpha: Complex64, t: f64 },
    RemarkZbarZbar,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub which: Which,
    pub checks: Vec<SubCheck>,
    pub f_holomorphy: FHolomorphyReport,
    pub decay: Option<DecayFit>,
    pub branch: Option<BranchChoice>,
    pub all_pass: bool,
}

impl SuiteReport {
    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }
}

/// Base points of modulus at most `r_hi` and curve times `|ζ| <= zeta_max`.
fn curve_samples(rng: &mut ChaCha8Rng, count: usize, r_hi: f64, zeta_max: f64) -> Vec<(Vec<Complex64>, Complex64)> {
    (0..count)
        .map(|_| {
            let c = (0..2).map(|_| Complex64::from_polar(rng.gen_range(0.1..r_hi), rng.gen_range(0.0..TAU))).collect();
            let zeta = Complex64::from_polar(zeta_max * rng.gen_range(0.0..1.0f64).sqrt(), rng.gen_range(0.0..TAU));
            (c, zeta)
        })
        .collect()
}

/// One `ζ` per curve, checked by [`f_holomorphy_check`].
fn paired_f_holomorphy(
    oracle: &dyn Fn(&[Complex64]) -> Complex64,
    eigenvalues: &[Complex64],
    samples: &[(Vec<Complex64>, Complex64)],
) -> Result<FHolomorphyReport> {
    let mut total: Option<FHolomorphyReport> = None;
    for (c, zeta) in samples {
        let r = f_holomorphy_check(oracle, eigenvalues, std::slice::from_ref(c), &[*zeta], FD_STEP, 1e-6)?;
        total = Some(match total {
            None => r,
            Some(mut acc) => {
                acc.samples += r.samples;
                if r.verdict == Verdict::Inconclusive || (acc.verdict != Verdict::Inconclusive && r.max_residual > acc.max_residual) {
                    acc.max_residual = r.max_residual;
                    acc.witness = r.witness;
                }
                acc.verdict = match (acc.verdict, r.verdict) {
                    (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
                    (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
                    _ => Verdict::Pass,
                };
                acc
            }
        });
    }
    total.ok_or_else(|| Error::InvalidParameter("no curve samples".into()))
}

fn remainder_sub_check(name: &str, oracle: &dyn Fn(&[Complex64]) -> Complex64, jet: &TaylorSeries, order: u32) -> Result<SubCheck> {
    let outcome = remainder_check_through(oracle, jet, order, &RemainderParams::new(2))?;
    let (passed, detail) = match outcome {
        Ok(()) => (true, format!("o(|z|^n) holds for n = 0..={order}")),
        Err(r) => (false, format!("fails at order {} ({:?})", r.rate, r.verdict)),
    };
    Ok(SubCheck { name: name.into(), passed, value: f64::from(order), threshold: f64::from(order), detail })
}

/// Runs every check for one example. `seed` drives all random sampling.
pub fn counterexample_suite(which: Which, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let witness_point = [Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0)];
    let zero_jet = TaylorSeries::zero(2)?;
    let mut checks = Vec::new();
    let (f_holomorphy, decay, branch) = match which {
        Which::Resonant { t } => {
            let ex = ResonantExample::new(t)?;
            let eigs = ex.curve_eigenvalues();
            let oracle = move |z: &[Complex64]| Complex64::new(ex.phi(z), 0.0);
            let samples = curve_samples(&mut rng, 100, 0.7, 0.3 / t.max(1.0));
            let mut worst_inv = 0.0f64;
            let mut worst_phi = 0.0f64;
            for (c, zeta) in &samples {
                let p = curve_point(&eigs, c, *zeta);
                let i0 = ex.invariant(c);
                worst_inv = worst_inv.max((ex.invariant(&p) - i0).abs() / i0);
                worst_phi = worst_phi.max((ex.phi(&p) - ex.phi(c)).abs());
            }
            checks.push(SubCheck::below("curve_invariance", worst_inv, 1e-12, "relative change of |z1|^t |z2|".into()));
            checks.push(SubCheck::below("phi_constant_on_curves", worst_phi, 1e-12, "absolute change of φ".into()));
            let fh = paired_f_holomorphy(&oracle, &eigs, &samples)?;
            checks.push(SubCheck::below("f_holomorphy", fh.max_residual, 1e-6, format!("{} curve samples", fh.samples)));
            let w = dbar_residual(&oracle, &witness_point, FD_STEP);
            checks.push(SubCheck::above("non_holomorphy_witness", w, 1e-3, "max_j |∂φ/∂z̄_j| at (1/2, 1/2)".into()));
            checks.push(remainder_sub_check("zero_jet_remainder", &oracle, &zero_jet, 8)?);
            let fit = decay_fit(|l1| ex.log_phi(l1, 0.5f64.ln()), 1.0);
            checks.push(decay_check(&fit, 8.0));
            (fh, Some(fit), None)
        }
        Which::Spiral { alpha, t } => {
            let choice = choose_branch_exponent(alpha, t)?;
            let ex = SpiralExample::with_branch(alpha, t, choice.b, choice.branch_offset)?;
            let eigs = ex.curve_eigenvalues();
            let oracle = move |z: &[Complex64]| ex.phi(z);
            let zetas: Vec<Complex64> = (0..100)
                .map(|_| Complex64::from_polar(10.0 * rng.gen_range(0.0..1.0f64).sqrt(), rng.gen_range(0.0..TAU)))
                .collect();
            checks.push(verify_time_identity(&ex, &zetas));
            checks.push(sector_sign_check(&ex, 10_000, &mut rng));
            let speed = ex.alpha.norm().max(ex.beta.norm());
            let samples = curve_samples(&mut rng, 100, 0.5, 0.3 / speed);
            let fh = paired_f_holomorphy(&oracle, &eigs, &samples)?;
            checks.push(SubCheck::below("f_holomorphy", fh.max_residual, 1e-6, format!("{} curve samples", fh.samples)));
            let w = dbar_residual(&oracle, &witness_point, FD_STEP);
            checks.push(SubCheck::above("non_holomorphy_witness", w, 1e-3, "max_j |∂φ/∂z̄_j| at (1/2, 1/2)".into()));
            checks.push(remainder_sub_check("zero_jet_remainder", &oracle, &zero_jet, 8)?);
            let fit = decay_fit(|l1| ex.log_modulus(l1, 0.5f64.ln()), ex.b);
            checks.push(decay_check(&fit, 8.0));
            (fh, Some(fit), Some(choice))
        }
        Which::RemarkZbarZbar => {
            let eigs = [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)];
            let oracle = |z: &[Complex64]| z[0].conj() * z[1].conj();
            let samples = curve_samples(&mut rng, 100, 0.7, 0.3);
            let fh = paired_f_holomorphy(&oracle, &eigs, &samples)?;
            checks.push(SubCheck::below("f_holomorphy", fh.max_residual, 1e-6, format!("{} curve samples", fh.samples)));
            let w = dbar_residual(&oracle, &witness_point, FD_STEP);
            checks.push(SubCheck::above("non_holomorphy_witness", w, 1e-3, "max_j |∂φ/∂z̄_j| at (1/2, 1/2)".into()));
            let jet = TaylorSeries::from_exponents(2, &[(&[0, 0], &[1, 1], Complex64::new(1.0, 0.0))])?;
            checks.push(remainder_sub_check("jet_remainder", &oracle, &jet, 8)?);
            let anti = jet.antiholomorphic_part().len() as f64;
            checks.push(SubCheck::above(
                "antiholomorphic_jet",
                anti,
                0.0,
                "the Taylor series is conj(z1) conj(z2), so no holomorphic reconstruction exists".into(),
            ));
            (fh, None, None)
        }
    };
    let all_pass = checks.iter().all(|c| c.passed);
    Ok(SuiteReport { which, checks, f_holomorphy, decay, branch, all_pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn resonant_values() {
        let ex = ResonantExample::new(1.0).unwrap();
        assert_eq!(ex.phi(&[c(0.0, 0.0), c(0.4, 0.1)]), 0.0);
        let e = std::f64::consts::E;
        let v = ex.phi(&[c(1.0 / e, 0.0), c(0.0, 1.0 / e)]);
        assert!((v - (-e * e).exp()).abs() < 1e-16);
        assert!(ResonantExample::new(0.0).is_err());
    }

    #[test]
    fn gamma_and_sector_for_unit_diagonal_alpha() {
        let alpha = c(-1.0, 1.0);
        let g = spiral_gamma(alpha);
        assert_eq!(g, c(-0.5, -0.5));
        let (lo, hi) = sector_arguments(g);
        assert!((lo + PI / 4.0).abs() < 1e-15 && (hi - PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn branch_choice_is_admissible() {
        let choice = choose_branch_exponent(c(-1.0, 1.0), 1.0).unwrap();
        assert!(choice.b > 1.0 && choice.b <= 4.0 && choice.margin > 0.0);
        // Independent check of the containment on a fine θ grid.
        let k = f64::from(choice.branch_offset);
        for i in 0..=1000 {
            let theta = choice.theta_min + (choice.theta_max - choice.theta_min) * f64::from(i) / 1000.0;
            assert!((choice.b * (theta + TAU * k)).cos() < 0.0);
        }
        assert!(choose_branch_exponent(c(-1.0, 0.0), 1.0).is_err());
        assert!(choose_branch_exponent(c(1.0, 1.0), 1.0).is_err());
    }

    #[test]
    fn time_identity_examples() {
        let ex = SpiralExample::new(c(-1.0, 1.0), 1.0).unwrap();
        assert_eq!(ex.time_identity_error(c(0.0, 0.0)), 0.0);
        assert!(ex.time_identity_error(c(1.0, 0.0)) < 1e-15);
        let ex = SpiralExample::new(c(-0.3, 2.0), 2.5).unwrap();
        assert!(ex.time_identity_error(c(3.0, -7.0)) < 1e-12);
    }

    #[test]
    fn spiral_phase_along_curve_is_a_translation() {
        // Along z = (C1 e^{αζ}, C2 e^{βζ}), ξ(ζ) = ζ + ξ(0).
        let ex = SpiralExample::new(c(-1.0, 1.0), 1.0).unwrap();
        let base = [c(0.3, 0.2), c(-0.1, 0.4)];
        let xi0 = ex.xi(base[0].norm().ln(), base[1].norm().ln());
        let zeta = c(0.1, -0.2);
        let p = curve_point(&ex.curve_eigenvalues(), &base, zeta);
        let xi = ex.xi(p[0].norm().ln(), p[1].norm().ln());
        assert!((xi - xi0 - zeta).norm() < 1e-14);
    }

    #[test]
    fn spiral_is_zero_on_axes() {
        let ex = SpiralExample::new(c(-1.0, 1.0), 1.0).unwrap();
        assert_eq!(ex.phi(&[c(0.0, 0.0), c(0.3, 0.0)]), c(0.0, 0.0));
        assert!(ex.phi(&[c(0.3, 0.0), c(0.3, 0.0)]).norm() < 1.0);
    }

    #[test]
    fn resonant_suite_passes() {
        let r = counterexample_suite(Which::Resonant { t: 1.0 }, 7).unwrap();
        assert!(r.all_pass, "{:?}", r.failures());
    }

    #[test]
    fn spiral_suite_passes() {
        let r = counterexample_suite(Which::Spiral { alpha: c(-1.0, 1.0), t: 1.0 }, 7).unwrap();
        assert!(r.all_pass, "{:?}", r.checks);
    }

    #[test]
    fn remark_suite_passes() {
        let r = counterexample_suite(Which::RemarkZbarZbar, 7).unwrap();
        assert!(r.all_pass, "{:?}", r.checks);
    }

    #[test]
    fn suite_is_deterministic() {
        let a = counterexample_suite(Which::Resonant { t: 2.0 }, 3).unwrap();
        let b = counterexample_suite(Which::Resonant { t: 2.0 }, 3).unwrap();
        assert_eq!(a, b);
    }
}
