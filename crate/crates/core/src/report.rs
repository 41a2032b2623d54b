//! Finite certificates for "tends to zero" claims.
//!
//! A claim such as `|f(z) - partial sum| e^{λ Re z} -> 0` is checked on a
//! ladder of abscissas (or radii). At each rung the sampled supremum is
//! recorded together with a flag saying whether the residual stood above
//! the floating-point rounding floor. Rungs where the residual is lost in
//! rounding carry no information and are left out of the verdict.

use std::io::Write;

use serde::Serialize;

/// Rounding floor multiplier: residuals below `ROUNDING_GUARD * eps * scale`
/// are indistinguishable from cancellation noise.
pub const ROUNDING_GUARD: f64 = 64.0;

/// Two neighbouring measurements both below `NEGLIGIBLE * tol` are not
/// required to be ordered.
const NEGLIGIBLE: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

/// One rung of a decay ladder.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DecaySample {
    pub abscissa: f64,
    pub measured: f64,
    pub resolved: bool,
}

/// Outcome of a decay claim checked on a ladder.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayReport {
    pub claim: String,
    /// Claimed rate (λ for half-plane claims, the order n for Taylor remainders).
    pub rate: f64,
    pub samples: Vec<DecaySample>,
    /// Least-squares slope of `ln(measured)` against the ladder variable
    /// over resolved rungs.
    pub slope: Option<f64>,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub note: Option<String>,
}

impl DecayReport {
    pub fn inconclusive(claim: impl Into<String>, rate: f64, tolerance: f64, note: String) -> Self {
        Self {
            claim: claim.into(),
            rate,
            samples: Vec::new(),
            slope: None,
            tolerance,
            verdict: Verdict::Inconclusive,
            note: Some(note),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }

    pub fn last_resolved(&self) -> Option<f64> {
        self.samples.iter().rev().find(|s| s.resolved).map(|s| s.measured)
    }

    /// Writes `abscissa,measured,resolved,verdict` rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "claim,abscissa,measured,resolved,verdict")?;
        for s in &self.samples {
            writeln!(
                out,
                "{},{:e},{:e},{},{:?}",
                self.claim, s.abscissa, s.measured, s.resolved, self.verdict
            )?;
        }
        Ok(())
    }
}

/// The last (up to) three resolved measurements, in ladder order.
fn resolved_tail(samples: &[DecaySample]) -> Vec<f64> {
    let resolved: Vec<f64> = samples.iter().filter(|s| s.resolved).map(|s| s.measured).collect();
    let start = resolved.len().saturating_sub(3);
    resolved[start..].to_vec()
}

fn non_increasing(tail: &[f64], tol: f64) -> bool {
    tail.windows(2)
        .all(|w| w[1] <= w[0] * (1.0 + 1e-9) || w[0].max(w[1]) < NEGLIGIBLE * tol)
}

/// The final rung is lost in rounding and its rounding bound is below `tol`.
fn ends_in_rounding(samples: &[DecaySample], tol: f64) -> bool {
    samples.last().is_some_and(|s| !s.resolved && s.measured < tol)
}

/// Pass iff the resolved tail decreases monotonically and ends below `tol`,
/// or the last rung sits at rounding level with a bound below `tol`.
/// A ladder with no resolved rung passes.
pub fn tail_verdict(samples: &[DecaySample], tol: f64) -> Verdict {
    if ends_in_rounding(samples, tol) {
        return Verdict::Pass;
    }
    let tail = resolved_tail(samples);
    match tail.last() {
        None => Verdict::Pass,
        Some(&last) if non_increasing(&tail, tol) && last < tol => Verdict::Pass,
        Some(_) => Verdict::Fail,
    }
}

/// Like [`tail_verdict`] but also accepts a monotone tail whose fitted
/// power-law exponent is at least `min_slope`.
pub fn power_tail_verdict(samples: &[DecaySample], tol: f64, slope: Option<f64>, min_slope: f64) -> Verdict {
    if ends_in_rounding(samples, tol) {
        return Verdict::Pass;
    }
    let tail = resolved_tail(samples);
    match tail.last() {
        None => Verdict::Pass,
        Some(&last) => {
            let decaying = slope.is_some_and(|s| s >= min_slope);
            if non_increasing(&tail, tol) && (last < tol || decaying) {
                Verdict::Pass
            } else {
                Verdict::Fail
            }
        }
    }
}

/// Least-squares slope of `ln(measured)` against `f(abscissa)` over resolved,
/// strictly positive rungs.
pub fn log_slope(samples: &[DecaySample], f: impl Fn(f64) -> f64) -> Option<f64> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = samples
        .iter()
        .filter(|s| s.resolved && s.measured > 0.0 && s.measured.is_finite())
        .map(|s| (f(s.abscissa), s.measured.ln()))
        .unzip();
    crate::numeric::linear_fit(&xs, &ys).map(|(slope, _)| slope)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ladder(values: &[f64]) -> Vec<DecaySample> {
        values
            .iter()
            .enumerate()
            .map(|(i, &v)| DecaySample { abscissa: i as f64, measured: v, resolved: true })
            .collect()
    }

    #[test]
    fn monotone_tail_below_tolerance_passes() {
        assert_eq!(tail_verdict(&ladder(&[1.0, 1e-3, 1e-9, 1e-12]), 1e-8), Verdict::Pass);
    }

    #[test]
    fn growing_tail_fails() {
        assert_eq!(tail_verdict(&ladder(&[1e-12, 1e-10, 1e-9]), 1e-8), Verdict::Fail);
    }

    #[test]
    fn flat_tail_above_tolerance_fails() {
        assert_eq!(tail_verdict(&ladder(&[1.0, 1.0, 1.0]), 1e-8), Verdict::Fail);
    }

    #[test]
    fn unresolved_ladder_passes() {
        let mut s = ladder(&[1e-17, 1e-17]);
        s.iter_mut().for_each(|x| x.resolved = false);
        assert_eq!(tail_verdict(&s, 1e-8), Verdict::Pass);
    }

    #[test]
    fn rounding_level_final_rung_passes() {
        let mut s = ladder(&[0.5, 0.2, 1e-20]);
        s[2].resolved = false;
        assert_eq!(tail_verdict(&s, 1e-8), Verdict::Pass);
        s[2].measured = 1.0;
        assert_eq!(tail_verdict(&s, 1e-8), Verdict::Fail);
    }

    #[test]
    fn negligible_jitter_is_not_a_failure() {
        assert_eq!(tail_verdict(&ladder(&[1e-3, 1e-15, 2e-15]), 1e-8), Verdict::Pass);
    }

    #[test]
    fn power_verdict_accepts_decaying_slope() {
        let s = ladder(&[0.5, 0.25, 0.125]);
        assert_eq!(power_tail_verdict(&s, 1e-8, Some(1.0), 0.5), Verdict::Pass);
        assert_eq!(power_tail_verdict(&s, 1e-8, Some(0.1), 0.5), Verdict::Fail);
    }
}
