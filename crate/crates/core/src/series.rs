//! Finite mixed Taylor jets `Σ a_{km} z^k conj(z)^m` at the origin of `C^N`.
//!
//! Coefficients are stored sparsely and zero coefficients are never kept, so
//! two series are equal exactly when their coefficient maps are.
//!
//! # Text format
//!
//! One term per line, `k-exponents | m-exponents | re | im`, e.g.
//!
//! ```text
//! 1 0 | 0 1 | 2.0 | -0.5
//! ```
//!
//! is `(2 - 0.5i) z_1 conj(z_2)`. Blank lines and `#` comments are skipped.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::Rational64;
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::rounding_floor;
use crate::report::{log_slope, power_tail_verdict, DecayReport, DecaySample, Verdict};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyDimension);
        }
        Ok(Self(entries))
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    /// `e_j` in dimension `dim`.
    pub fn unit(dim: usize, j: usize) -> Self {
        let mut v = vec![0; dim];
        v[j] = 1;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// `|k|`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// `(α, k)` for rational rates.
    pub fn weight(&self, rates: &[Rational64]) -> Rational64 {
        self.0.iter().zip(rates).map(|(&e, r)| r * i64::from(e)).sum()
    }

    /// `z^k`.
    pub fn monomial(&self, z: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for (&e, &zj) in self.0.iter().zip(z) {
            for _ in 0..e {
                acc *= zj;
            }
        }
        acc
    }

    /// `|z^k|` without forming the complex product.
    fn monomial_abs(&self, z: &[Complex64]) -> f64 {
        self.0.iter().zip(z).map(|(&e, zj)| zj.norm().powi(e as i32)).product()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TaylorSeries {
    dim: usize,
    terms: BTreeMap<(MultiIndex, MultiIndex), Complex64>,
}

/// Borrowed view of a stored coefficient `a_{km}`.
#[derive(Clone, Copy, Debug)]
pub struct Term<'a> {
    pub k: &'a MultiIndex,
    pub m: &'a MultiIndex,
    pub coefficient: Complex64,
}

impl TaylorSeries {
    pub fn zero(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        Ok(Self { dim, terms: BTreeMap::new() })
    }

    /// Builds a series from `(k, m, a_{km})` triples, summing repeated keys
    /// and dropping zero coefficients.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, MultiIndex, Complex64)>,
    {
        let mut s = Self::zero(dim)?;
        for (k, m, a) in terms {
            s.add_term(k, m, a)?;
        }
        Ok(s)
    }

    /// Convenience constructor from raw exponent vectors.
    pub fn from_exponents(dim: usize, terms: &[(&[u32], &[u32], Complex64)]) -> Result<Self> {
        Self::from_terms(
            dim,
            terms
                .iter()
                .map(|(k, m, a)| Ok((MultiIndex::new(k.to_vec())?, MultiIndex::new(m.to_vec())?, *a)))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    fn add_term(&mut self, k: MultiIndex, m: MultiIndex, a: Complex64) -> Result<()> {
        for idx in [&k, &m] {
            if idx.dim() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, actual: idx.dim() });
            }
        }
        let key = (k, m);
        let sum = self.terms.get(&key).copied().unwrap_or_default() + a;
        if sum == Complex64::new(0.0, 0.0) {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Maximum `|k| + |m|` over stored terms (0 for the empty series).
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|(k, m)| k.order() + m.order()).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = Term<'_>> {
        self.terms.iter().map(|((k, m), &coefficient)| Term { k, m, coefficient })
    }

    pub fn coefficient(&self, k: &MultiIndex, m: &MultiIndex) -> Complex64 {
        self.terms.get(&(k.clone(), m.clone())).copied().unwrap_or_default()
    }

    fn check_point(&self, z: &[Complex64]) -> Result<()> {
        if z.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, actual: z.len() });
        }
        Ok(())
    }

    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        self.check_point(z)?;
        Ok(self.eval_unchecked(z))
    }

    pub(crate) fn eval_unchecked(&self, z: &[Complex64]) -> Complex64 {
        let zbar: Vec<Complex64> = z.iter().map(|c| c.conj()).collect();
        self.terms
            .iter()
            .map(|((k, m), a)| a * k.monomial(z) * m.monomial(&zbar))
            .sum()
    }

    /// `Σ |a_{km}| |z^k| |z^m|`, the natural scale for rounding error in [`Self::eval`].
    fn abs_scale(&self, z: &[Complex64]) -> f64 {
        self.terms
            .iter()
            .map(|((k, m), a)| a.norm() * k.monomial_abs(z) * m.monomial_abs(z))
            .sum()
    }

    fn filtered(&self, keep: impl Fn(&MultiIndex, &MultiIndex) -> bool) -> Self {
        Self {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|((k, m), _)| keep(k, m))
                .map(|(key, a)| (key.clone(), *a))
                .collect(),
        }
    }

    /// All terms with `m != 0`.
    pub fn antiholomorphic_part(&self) -> Self {
        self.filtered(|_, m| !m.is_zero())
    }

    /// All terms with `m = 0`.
    pub fn holomorphic_part(&self) -> Self {
        self.filtered(|_, m| m.is_zero())
    }

    /// Partial sum through total degree `n`.
    pub fn truncate(&self, n: u32) -> Self {
        self.filtered(|k, m| k.order() + m.order() <= n)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for t in other.terms() {
            out.add_term(t.k.clone(), t.m.clone(), t.coefficient)?;
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for t in other.terms() {
            out.add_term(t.k.clone(), t.m.clone(), -t.coefficient)?;
        }
        Ok(out)
    }

    /// Jet of `∇_{F̄} φ = Σ_j ∂φ/∂z̄_j · conj(α_j z_j)` for `F(z) = (α_1 z_1, …, α_N z_N)`.
    ///
    /// Differentiating `z̄_j^{m_j}` and multiplying back by `z̄_j` leaves the
    /// monomial unchanged, so each term is scaled by `Σ_j m_j conj(α_j)`.
    pub fn wirtinger_f_derivative(&self, alpha: &[Complex64]) -> Result<Self> {
        if alpha.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, actual: alpha.len() });
        }
        Self::from_terms(
            self.dim,
            self.terms.iter().map(|((k, m), a)| {
                let factor: Complex64 = m
                    .entries()
                    .iter()
                    .zip(alpha)
                    .map(|(&mj, aj)| aj.conj() * f64::from(mj))
                    .sum();
                (k.clone(), m.clone(), a * factor)
            }),
        )
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for ((k, m), a) in &self.terms {
            out.push_str(&format!("{k} | {m} | {:?} | {:?}\n", a.re, a.im));
        }
        out
    }

    pub fn parse_text(dim: usize, text: &str) -> Result<Self> {
        let mut s = Self::zero(dim)?;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, m, a) = parse_term_line(line).map_err(|message| Error::Parse { line: i + 1, message })?;
            s.add_term(k, m, a).map_err(|e| Error::Parse { line: i + 1, message: e.to_string() })?;
        }
        Ok(s)
    }
}

/// Parses `k-exponents | m-exponents | re | im`.
pub fn parse_term_line(line: &str) -> std::result::Result<(MultiIndex, MultiIndex, Complex64), String> {
    let fields: Vec<&str> = line.split('|').map(str::trim).collect();
    if fields.len() != 4 {
        return Err(format!("expected 4 '|'-separated fields, found {}", fields.len()));
    }
    let exps = |s: &str| -> std::result::Result<MultiIndex, String> {
        let v = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<u32>().map_err(|e| format!("bad exponent '{t}': {e}")))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        MultiIndex::new(v).map_err(|e| e.to_string())
    };
    let k = exps(fields[0])?;
    let m = exps(fields[1])?;
    if k.dim() != m.dim() {
        return Err(format!("k has {} entries but m has {}", k.dim(), m.dim()));
    }
    let num = |s: &str| s.parse::<f64>().map_err(|e| format!("bad number '{s}': {e}"));
    Ok((k, m, Complex64::new(num(fields[2])?, num(fields[3])?)))
}

#[derive(Serialize)]
struct TermView<'a> {
    k: &'a [u32],
    m: &'a [u32],
    re: f64,
    im: f64,
}

impl Serialize for TaylorSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for ((k, m), a) in &self.terms {
            seq.serialize_element(&TermView { k: k.entries(), m: m.entries(), re: a.re, im: a.im })?;
        }
        seq.end()
    }
}

/// Sampling plan for [`taylor_remainder_check`].
#[derive(Clone, Debug)]
pub struct RemainderParams {
    /// Strictly decreasing radii; sample points are `r * u` for each direction `u`.
    pub radii: Vec<f64>,
    pub directions: Vec<Vec<Complex64>>,
    pub tolerance: f64,
    /// A monotone tail whose fitted exponent `q ~ r^s` has `s >= min_slope`
    /// also counts as tending to zero.
    pub min_slope: f64,
}

impl RemainderParams {
    /// Radii `2^{-1}, …, 2^{-30}` along torus directions (`|u_j| = 1`) with a few phase patterns.
    pub fn new(dim: usize) -> Self {
        let radii = (1..=30).map(|k| 0.5f64.powi(k)).collect();
        let directions = (0..4)
            .map(|p| {
                (0..dim)
                    .map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * (p * j) as f64 / (dim as f64 + 2.0)))
                    .collect()
            })
            .collect();
        Self { radii, directions, tolerance: 1e-6, min_slope: 0.5 }
    }
}

/// Checks `|φ(z) - Σ_{|k|+|m|≤n} a_{km} z^k z̄^m| = o(|z|^n)` along the radii.
///
/// The series is read as claiming zero coefficients above its stored degree,
/// so `n` may exceed [`TaylorSeries::degree`]. Samples whose residual is below
/// the rounding floor of the compared values are reported as unresolved.
pub fn taylor_remainder_check(
    oracle: &dyn Fn(&[Complex64]) -> Complex64,
    series: &TaylorSeries,
    n: u32,
    params: &RemainderParams,
) -> Result<DecayReport> {
    let claim = format!("o(|z|^{n})");
    if params.radii.windows(2).any(|w| w[1] >= w[0]) || params.radii.iter().any(|&r| r <= 0.0) {
        return Err(Error::InvalidParameter("remainder radii must be positive and strictly decreasing".into()));
    }
    for u in &params.directions {
        series.check_point(u)?;
    }
    let partial = series.truncate(n);
    let mut samples = Vec::with_capacity(params.radii.len());
    for &r in &params.radii {
        let mut best_resolved: Option<f64> = None;
        let mut best_bound = 0.0f64;
        for u in &params.directions {
            let z: Vec<Complex64> = u.iter().map(|c| c * r).collect();
            let value = oracle(&z);
            if !value.is_finite() {
                return Ok(DecayReport::inconclusive(
                    claim,
                    f64::from(n),
                    params.tolerance,
                    format!("oracle returned {value} at {z:?}"),
                ));
            }
            let norm = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            let scale = norm.powi(n as i32);
            let residual = (value - partial.eval_unchecked(&z)).norm();
            let floor = rounding_floor(value.norm() + partial.abs_scale(&z));
            if residual > floor {
                let q = residual / scale;
                best_resolved = Some(best_resolved.map_or(q, |b| b.max(q)));
            } else {
                best_bound = best_bound.max(floor / scale);
            }
        }
        samples.push(match best_resolved {
            Some(q) => DecaySample { abscissa: r, measured: q, resolved: true },
            None => DecaySample { abscissa: r, measured: best_bound, resolved: false },
        });
    }
    // q ~ r^s  <=>  ln q = s ln r + c
    let slope = log_slope(&samples, f64::ln);
    let verdict = power_tail_verdict(&samples, params.tolerance, slope, params.min_slope);
    Ok(DecayReport {
        claim,
        rate: f64::from(n),
        samples,
        slope,
        tolerance: params.tolerance,
        verdict,
        note: None,
    })
}

/// Runs the remainder check at every order `0..=max_order`, returning the
/// first failing order if any.
pub fn remainder_check_through(
    oracle: &dyn Fn(&[Complex64]) -> Complex64,
    series: &TaylorSeries,
    max_order: u32,
    params: &RemainderParams,
) -> Result<std::result::Result<(), DecayReport>> {
    for n in 0..=max_order {
        let report = taylor_remainder_check(oracle, series, n, params)?;
        if report.verdict != Verdict::Pass {
            return Ok(Err(report));
        }
    }
    Ok(Ok(()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn empty_series_evaluates_to_zero() {
        let s = TaylorSeries::zero(2).unwrap();
        assert_eq!(s.eval(&[c(0.3, 0.0), c(0.0, -0.7)]).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn single_monomial_evaluation() {
        let s = TaylorSeries::from_exponents(2, &[(&[1, 0], &[0, 1], c(1.0, 0.0))]).unwrap();
        assert_eq!(s.eval(&[c(2.0, 0.0), c(0.0, 1.0)]).unwrap(), c(0.0, -2.0));

        let s = TaylorSeries::from_exponents(2, &[(&[0, 0], &[1, 1], c(1.0, 0.0))]).unwrap();
        assert_eq!(s.eval(&[c(1.0, 1.0), c(1.0, -1.0)]).unwrap(), c(2.0, 0.0));
    }

    #[test]
    fn eval_rejects_wrong_dimension() {
        let s = TaylorSeries::zero(2).unwrap();
        assert!(matches!(s.eval(&[c(0.0, 0.0)]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn zero_dimension_rejected() {
        assert_eq!(TaylorSeries::zero(0).unwrap_err(), Error::EmptyDimension);
        assert!(MultiIndex::new(vec![]).is_err());
    }

    #[test]
    fn zero_coefficients_are_pruned() {
        let s = TaylorSeries::from_exponents(
            1,
            &[(&[1], &[0], c(1.0, 0.0)), (&[1], &[0], c(-1.0, 0.0)), (&[2], &[0], c(0.0, 0.0))],
        )
        .unwrap();
        assert!(s.is_empty());
        assert_eq!(s, TaylorSeries::zero(1).unwrap());
    }

    #[test]
    fn antiholomorphic_part_filters() {
        let hol = TaylorSeries::from_exponents(2, &[(&[1, 0], &[0, 0], c(1.0, 0.0))]).unwrap();
        assert!(hol.antiholomorphic_part().is_empty());

        let zz = TaylorSeries::from_exponents(2, &[(&[0, 0], &[1, 1], c(1.0, 0.0))]).unwrap();
        assert_eq!(zz.antiholomorphic_part(), zz);

        let mixed =
            TaylorSeries::from_exponents(2, &[(&[1, 0], &[0, 0], c(1.0, 0.0)), (&[1, 0], &[0, 1], c(2.0, 0.0))])
                .unwrap();
        let expect = TaylorSeries::from_exponents(2, &[(&[1, 0], &[0, 1], c(2.0, 0.0))]).unwrap();
        assert_eq!(mixed.antiholomorphic_part(), expect);
        assert_eq!(mixed.len(), 2);
    }

    #[test]
    fn f_derivative_examples() {
        let hol = TaylorSeries::from_exponents(2, &[(&[2, 1], &[0, 0], c(1.0, 2.0))]).unwrap();
        assert!(hol.wirtinger_f_derivative(&[c(3.0, 1.0), c(-1.0, 0.5)]).unwrap().is_empty());

        // z̄1 z̄2 is annihilated by the field (z1, -z2).
        let zz = TaylorSeries::from_exponents(2, &[(&[0, 0], &[1, 1], c(1.0, 0.0))]).unwrap();
        assert!(zz.wirtinger_f_derivative(&[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap().is_empty());

        // ∂z̄1/∂z̄1 · z̄1 = z̄1
        let zb = TaylorSeries::from_exponents(2, &[(&[0, 0], &[1, 0], c(1.0, 0.0))]).unwrap();
        assert_eq!(zb.wirtinger_f_derivative(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap(), zb);
    }

    #[test]
    fn text_format_parses_documented_layout() {
        let s = TaylorSeries::parse_text(2, "# comment\n1 0 | 0 1 | 2.0 | -0.5\n\n0,2|0,0|1|0\n").unwrap();
        assert_eq!(s.len(), 2);
        let k = MultiIndex::new(vec![1, 0]).unwrap();
        let m = MultiIndex::new(vec![0, 1]).unwrap();
        assert_eq!(s.coefficient(&k, &m), c(2.0, -0.5));
    }

    #[test]
    fn text_format_reports_line() {
        let err = TaylorSeries::parse_text(2, "1 0 | 0 0 | 1 | 0\n1 0 0 | 0 0 0 | 1 | 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn remainder_of_exact_polynomial_passes() {
        let s = TaylorSeries::from_exponents(2, &[(&[1, 0], &[0, 0], c(1.0, 0.0)), (&[0, 2], &[0, 0], c(0.5, 1.0))])
            .unwrap();
        let oracle = |z: &[Complex64]| s.eval(z).unwrap();
        for n in 0..=2 {
            let r = taylor_remainder_check(&oracle, &s, n, &RemainderParams::new(2)).unwrap();
            assert_eq!(r.verdict, Verdict::Pass);
            if n == s.degree() {
                assert!(r.samples.iter().all(|x| !x.resolved));
            }
        }
    }

    #[test]
    fn remainder_of_flat_function_passes_every_order() {
        let zero = TaylorSeries::zero(2).unwrap();
        let oracle = |z: &[Complex64]| {
            let p = z[0].norm() * z[1].norm();
            if p == 0.0 {
                c(0.0, 0.0)
            } else {
                c((-1.0 / p).exp(), 0.0)
            }
        };
        for n in 0..=8 {
            let r = taylor_remainder_check(&oracle, &zero, n, &RemainderParams::new(2)).unwrap();
            assert_eq!(r.verdict, Verdict::Pass, "order {n}: {r:?}");
        }
    }

    #[test]
    fn remainder_detects_cubic_modulus_term() {
        // φ = z1 + |z1|^3 against the jet z1: o(|z|^2) holds, o(|z|^3) does not.
        let jet = TaylorSeries::from_exponents(1, &[(&[1], &[0], c(1.0, 0.0))]).unwrap();
        let oracle = |z: &[Complex64]| z[0] + z[0].norm().powi(3);
        let p = RemainderParams::new(1);
        assert_eq!(taylor_remainder_check(&oracle, &jet, 2, &p).unwrap().verdict, Verdict::Pass);
        assert_eq!(taylor_remainder_check(&oracle, &jet, 3, &p).unwrap().verdict, Verdict::Fail);
    }

    #[test]
    fn remainder_non_finite_is_inconclusive() {
        let jet = TaylorSeries::zero(1).unwrap();
        let oracle = |_: &[Complex64]| c(f64::NAN, 0.0);
        let r = taylor_remainder_check(&oracle, &jet, 1, &RemainderParams::new(1)).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }
}
