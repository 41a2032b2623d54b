//! Scenario files: a `key = value` text format naming one pipeline and its
//! inputs, and a runner producing a JSON report plus CSV tables.
//!
//! ```text
//! # forelli check of z1 + z2^2
//! kind = forelli
//! rates = 1/1, 2/1
//! term = 1 0 | 0 0 | 1 | 0
//! term = 0 2 | 0 0 | 1 | 0
//! seed = 7
//! ```
//!
//! Keys (`term`, `coef` and `zeta` may repeat):
//!
//! | key | value |
//! |-----|-------|
//! | `kind` | `pushforward`, `extraction`, `forelli`, `counterexample`, `bounds` |
//! | `rates` | comma-separated fractions `p/q` |
//! | `time_unit` | `re im`, modulus 1 (default `1 0`) |
//! | `term` | jet term `k | m | re | im` |
//! | `coef` | expansion term `λ | re | im` |
//! | `base_point` | `re im; re im; …` |
//! | `zeta` | `re im` sample(s), `;`-separated |
//! | `levels` | comma-separated fractions (extraction grid) |
//! | `oracle` | expression, see [`oracle`] |
//! | `example` | `resonant`, `spiral`, `zbar_zbar` |
//! | `t`, `alpha` | counterexample parameters (`alpha` as `re im`) |
//! | `expect` | forelli verdict: `holomorphic`, `hypothesis_violated`, `not_f_holomorphic`, `obstruction` |
//! | `seed`, `tolerance`, `max_level` | run controls |
//! | `shift`, `x0`, `half_width`, `nodes` | extraction parameters |
//! | `radius`, `d`, `x_lo` | comparison radius, convergence abscissa, boundary abscissa |

pub mod oracle;

use std::collections::HashMap;

use num_complex::Complex64;
use num_rational::Rational64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::asympt::{
    pushforward, residual_bound_check, restrict_holomorphic, tail_bound_check,
    uniform_convergence_check, HalfPlaneGrid, HolomorphicExpansion,
};
use crate::counterex::{counterexample_suite, Which};
use crate::error::{Error, Result};
use crate::extract::{
    extract_coefficients, sampled_sup_half_plane, shift_difference, shift_factor, verify_cauchy_bound,
    ExtractionParams,
};
use crate::flow::{curve_point, normalize_time, to_f64, BasePoint, DiagonalField, LevelGrid};
use crate::forelli::{forelli_pipeline, ForelliConfig, ForelliVerdict, JetOracle};
use crate::numeric::linspace;
use crate::report::DecayReport;
use crate::series::{parse_term_line, MultiIndex, TaylorSeries};
use oracle::{Bindings, Domain, Expr};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Pushforward,
    Extraction,
    Forelli,
    Counterexample,
    Bounds,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Example {
    Resonant,
    Spiral,
    ZbarZbar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    Holomorphic,
    HypothesisViolated,
    NotFHolomorphic,
    Obstruction,
}

/// A parsed scenario. Every field carries the values as written; checks that
/// need several keys happen in [`run`].
#[derive(Clone, Debug, Default)]
pub struct Scenario {
    pub kind: Option<Kind>,
    pub rates: Option<Vec<Rational64>>,
    pub time_unit: Option<Complex64>,
    pub terms: Vec<(MultiIndex, MultiIndex, Complex64)>,
    pub coefs: Vec<(Rational64, Complex64)>,
    pub base_point: Option<Vec<Complex64>>,
    pub zetas: Vec<Complex64>,
    pub levels: Option<Vec<Rational64>>,
    pub oracle: Option<String>,
    pub example: Option<Example>,
    pub t: Option<f64>,
    pub alpha: Option<Complex64>,
    pub expect: Option<Expect>,
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
    pub max_level: Option<Rational64>,
    pub shift: Option<f64>,
    pub x0: Option<f64>,
    pub half_width: Option<f64>,
    pub nodes: Option<usize>,
    pub radius: Option<f64>,
    pub d: Option<f64>,
    pub x_lo: Option<f64>,
    /// Line of the first occurrence of each key.
    lines: HashMap<String, usize>,
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub tolerance: Option<f64>,
    pub seed: Option<u64>,
    pub max_level: Option<Rational64>,
}

fn parse_f64(s: &str) -> std::result::Result<f64, String> {
    s.trim().parse::<f64>().map_err(|_| format!("expected a number, found '{}'", s.trim()))
}

fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let parts: Vec<&str> = s.split(|c: char| c.is_whitespace() || c == ',').filter(|p| !p.is_empty()).collect();
    match parts.as_slice() {
        [re] => Ok(Complex64::new(parse_f64(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(parse_f64(re)?, parse_f64(im)?)),
        _ => Err(format!("expected 're im', found '{}'", s.trim())),
    }
}

fn parse_fraction(s: &str) -> std::result::Result<Rational64, String> {
    s.trim().parse::<Rational64>().map_err(|_| format!("expected a fraction p/q, found '{}'", s.trim()))
}

fn parse_fractions(s: &str) -> std::result::Result<Vec<Rational64>, String> {
    s.split(',').map(parse_fraction).collect()
}

fn parse_points(s: &str) -> std::result::Result<Vec<Complex64>, String> {
    s.split(';').map(parse_complex).collect()
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self> {
        let mut sc = Scenario::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| Error::Parse { line, message: format!("expected 'key = value', found '{content}'") })?;
            let (key, value) = (key.trim(), value.trim());
            let repeatable = matches!(key, "term" | "coef" | "zeta");
            if !repeatable && sc.lines.contains_key(key) {
                return Err(Error::Parse { line, message: format!("duplicate key '{key}'") });
            }
            sc.set(key, value).map_err(|message| Error::Parse { line, message })?;
            sc.lines.entry(key.to_string()).or_insert(line);
        }
        if sc.kind.is_none() {
            return Err(Error::Parse { line: 1, message: "missing 'kind'".into() });
        }
        Ok(sc)
    }

    fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        match key {
            "kind" => {
                self.kind = Some(match value {
                    "pushforward" => Kind::Pushforward,
                    "extraction" => Kind::Extraction,
                    "forelli" => Kind::Forelli,
                    "counterexample" => Kind::Counterexample,
                    "bounds" => Kind::Bounds,
                    other => return Err(format!("unknown kind '{other}'")),
                })
            }
            "rates" => self.rates = Some(parse_fractions(value)?),
            "time_unit" => self.time_unit = Some(parse_complex(value)?),
            "term" => self.terms.push(parse_term_line(value)?),
            "coef" => {
                let fields: Vec<&str> = value.split('|').collect();
                if fields.len() != 3 {
                    return Err("expected 'λ | re | im'".into());
                }
                let c = Complex64::new(parse_f64(fields[1])?, parse_f64(fields[2])?);
                self.coefs.push((parse_fraction(fields[0])?, c));
            }
            "base_point" => self.base_point = Some(parse_points(value)?),
            "zeta" => self.zetas.extend(parse_points(value)?),
            "levels" => self.levels = Some(parse_fractions(value)?),
            "oracle" => self.oracle = Some(value.to_string()),
            "example" => {
                self.example = Some(match value {
                    "resonant" => Example::Resonant,
                    "spiral" => Example::Spiral,
                    "zbar_zbar" => Example::ZbarZbar,
                    other => return Err(format!("unknown example '{other}'")),
                })
            }
            "t" => self.t = Some(parse_f64(value)?),
            "alpha" => self.alpha = Some(parse_complex(value)?),
            "expect" => {
                self.expect = Some(match value {
                    "holomorphic" => Expect::Holomorphic,
                    "hypothesis_violated" => Expect::HypothesisViolated,
                    "not_f_holomorphic" => Expect::NotFHolomorphic,
                    "obstruction" => Expect::Obstruction,
                    other => return Err(format!("unknown expected verdict '{other}'")),
                })
            }
            "seed" => self.seed = Some(value.parse().map_err(|_| format!("expected an integer seed, found '{value}'"))?),
            "tolerance" => self.tolerance = Some(positive(parse_f64(value)?)?),
            "max_level" => self.max_level = Some(parse_fraction(value)?),
            "shift" => self.shift = Some(parse_f64(value)?),
            "x0" => self.x0 = Some(positive(parse_f64(value)?)?),
            "half_width" => self.half_width = Some(positive(parse_f64(value)?)?),
            "nodes" => self.nodes = Some(value.parse().map_err(|_| format!("expected a node count, found '{value}'"))?),
            "radius" => self.radius = Some(positive(parse_f64(value)?)?),
            "d" => self.d = Some(positive(parse_f64(value)?)?),
            "x_lo" => self.x_lo = Some(positive(parse_f64(value)?)?),
            other => return Err(format!("unknown key '{other}'")),
        }
        Ok(())
    }

    fn line(&self, key: &str) -> usize {
        self.lines.get(key).copied().unwrap_or(1)
    }

    fn invalid(&self, key: &str, message: impl Into<String>) -> Error {
        Error::Parse { line: self.line(key), message: message.into() }
    }

    fn require<T: Clone>(&self, key: &str, value: &Option<T>) -> Result<T> {
        value.clone().ok_or_else(|| self.invalid("kind", format!("this kind requires '{key}'")))
    }

    fn field(&self) -> Result<DiagonalField> {
        let rates = self.require("rates", &self.rates)?;
        let tau = self.time_unit.unwrap_or(Complex64::new(1.0, 0.0));
        DiagonalField::new(rates, tau).map_err(|e| self.invalid("rates", e.to_string()))
    }

    fn jet(&self, dim: usize) -> Result<TaylorSeries> {
        TaylorSeries::from_terms(dim, self.terms.iter().cloned()).map_err(|e| self.invalid("term", e.to_string()))
    }

    fn expansion(&self) -> Result<Option<HolomorphicExpansion>> {
        if self.coefs.is_empty() {
            return Ok(None);
        }
        HolomorphicExpansion::from_pairs(self.coefs.iter().copied()).map(Some).map_err(|e| self.invalid("coef", e.to_string()))
    }

    fn oracle_expr(&self, default: &str, bindings: &Bindings<'_>, domain: Domain) -> Result<Expr> {
        let text = self.oracle.as_deref().unwrap_or(default);
        let e = Expr::parse(text, bindings).map_err(|m| self.invalid("oracle", m))?;
        match e.domain().map_err(|m| self.invalid("oracle", m))? {
            Some(d) if d != domain => Err(self.invalid("oracle", format!("oracle must be a {domain:?} expression"))),
            _ => Ok(e),
        }
    }
}

fn positive(v: f64) -> std::result::Result<f64, String> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("expected a positive number, found {v}"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

/// Result of running a scenario: the report body and named CSV tables.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub kind: Kind,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub details: Value,
    pub tables: Vec<(String, String)>,
}

impl Outcome {
    /// The JSON report; `generated_at` is the only run-dependent field.
    pub fn report(&self, seed: u64, generated_at: u64) -> Value {
        json!({
            "kind": self.kind,
            "seed": seed,
            "generated_at": generated_at,
            "passed": self.passed,
            "checks": self.checks,
            "details": self.details,
        })
    }
}

fn check(name: &str, passed: bool) -> Check {
    Check { name: name.into(), passed }
}

fn decay_csv(reports: &[&DecayReport]) -> String {
    let mut out = Vec::new();
    for (i, r) in reports.iter().enumerate() {
        let mut buf = Vec::new();
        r.write_csv(&mut buf).expect("writing to memory");
        let text = String::from_utf8(buf).expect("utf-8 csv");
        let body = if i == 0 { text.as_str() } else { text.split_once('\n').map_or("", |(_, b)| b) };
        out.extend_from_slice(body.as_bytes());
    }
    String::from_utf8(out).expect("utf-8 csv")
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize to JSON")
}

pub fn seed_of(sc: &Scenario, ov: &Overrides) -> u64 {
    ov.seed.or(sc.seed).unwrap_or(0)
}

pub fn run(sc: &Scenario, ov: &Overrides) -> Result<Outcome> {
    let kind = sc.kind.expect("parse guarantees a kind");
    let seed = seed_of(sc, ov);
    let tolerance = ov.tolerance.or(sc.tolerance);
    let max_level = ov.max_level.or(sc.max_level);
    let (checks, details, tables) = match kind {
        Kind::Pushforward => run_pushforward(sc, tolerance.unwrap_or(1e-10), max_level)?,
        Kind::Extraction => run_extraction(sc, tolerance.unwrap_or(1e-6), max_level)?,
        Kind::Forelli => run_forelli(sc, seed, tolerance, max_level)?,
        Kind::Counterexample => run_counterexample(sc, seed)?,
        Kind::Bounds => run_bounds(sc, tolerance.unwrap_or(1e-8))?,
    };
    let passed = checks.iter().all(|c| c.passed);
    Ok(Outcome { kind, passed, checks, details, tables })
}

type Parts = (Vec<Check>, Value, Vec<(String, String)>);

fn run_pushforward(sc: &Scenario, tol: f64, max_level: Option<Rational64>) -> Result<Parts> {
    let field = sc.field()?;
    let (normalized, factor) = normalize_time(&field).map_err(|e| sc.invalid("rates", e.to_string()))?;
    let jet = sc.jet(field.dim())?;
    let c = sc.require("base_point", &sc.base_point)?;
    let base = BasePoint::new(c).map_err(|e| sc.invalid("base_point", e.to_string()))?;
    if base.dim() != field.dim() {
        return Err(sc.invalid("base_point", format!("expected {} coordinates", field.dim())));
    }
    let top = jet
        .terms()
        .map(|t| t.k.weight(normalized.rates()) + t.m.weight(normalized.rates()))
        .max()
        .unwrap_or(Rational64::from_integer(1))
        .max(Rational64::from_integer(1));
    let lambda_max = max_level.unwrap_or(top);
    let e = pushforward(&jet, &normalized, &base, lambda_max)?;
    let zetas = if sc.zetas.is_empty() {
        linspace(0.0, 5.0, 11).into_iter().flat_map(|x| [-2.0, 0.0, 2.0].map(|y| Complex64::new(x, y))).collect()
    } else {
        sc.zetas.clone()
    };
    let eigs = normalized.eigenvalues();
    let mut max_error = 0.0f64;
    for &zeta in &zetas {
        let p = curve_point(&eigs, base.coords(), zeta);
        let err = (jet.eval_unchecked(&p) - e.eval(zeta, e.top())?).norm();
        max_error = if err.is_nan() { f64::INFINITY } else { max_error.max(err) };
    }
    let exact = lambda_max >= top;
    let restriction = match restrict_holomorphic(&e) {
        Ok(h) => json!({ "holomorphic": true, "expansion": h }),
        Err(err) => json!({ "holomorphic": false, "reason": err.to_string() }),
    };
    let mut checks = Vec::new();
    if exact {
        checks.push(check("pushforward_exact", max_error < tol));
    }
    let details = json!({
        "normalized_rates": normalized.rates().iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        "time_factor": factor,
        "lambda_max": lambda_max.to_string(),
        "levels": e.levels().iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        "expansion": e,
        "max_error": max_error,
        "tolerance": tol,
        "restriction": restriction,
    });
    Ok((checks, details, Vec::new()))
}

fn run_extraction(sc: &Scenario, tol: f64, max_level: Option<Rational64>) -> Result<Parts> {
    let expansion = sc.expansion()?;
    let bindings = Bindings { jet: None, expansion: expansion.as_ref() };
    let f = sc.oracle_expr("expansion", &bindings, Domain::HalfPlane)?;
    let levels = match (&sc.levels, &expansion) {
        (Some(l), _) => l.clone(),
        (None, Some(e)) => e.levels().to_vec(),
        (None, None) => return Err(sc.invalid("kind", "extraction needs 'levels' or 'coef' lines")),
    };
    let mut levels: Vec<Rational64> = levels;
    if let Some(m) = max_level {
        levels.retain(|l| *l <= m);
    }
    let grid = LevelGrid::from_levels(levels).map_err(|e| sc.invalid("levels", e.to_string()))?;
    let mut params = ExtractionParams::new(grid);
    params.x0 = sc.x0.unwrap_or(params.x0);
    params.half_width = sc.half_width.unwrap_or(params.half_width);
    params.nodes = sc.nodes.or(params.nodes);
    params.tol = tol.min(params.tol);
    let oracle = |z: Complex64| f.eval_half_plane(z);
    let shifted;
    let target: &dyn Fn(Complex64) -> Complex64 = match sc.shift {
        Some(a) => {
            shifted = shift_difference(&oracle, a);
            &shifted
        }
        None => &oracle,
    };
    let out = extract_coefficients(target, &params, params.grid.len())?;
    let m = sampled_sup_half_plane(target, &params)?;
    let cauchy = verify_cauchy_bound(&out.expansion, m, 1e-6);
    let mut checks = vec![check("cauchy_bound", cauchy.passed)];
    let mut max_error = None;
    if let Some(e) = &expansion {
        let mut worst = 0.0f64;
        for (level, got) in out.expansion.pairs() {
            let want = e.pairs().find(|(l, _)| *l == level).map_or(Complex64::new(0.0, 0.0), |(_, c)| c);
            let want = match sc.shift {
                Some(a) => shift_factor(a, to_f64(level)) * want,
                None => want,
            };
            worst = worst.max((got - want).norm());
        }
        checks.push(check("coefficients_recovered", worst < tol));
        max_error = Some(worst);
    }
    let mut trace = String::from("level,coefficient_re,coefficient_im,residual_rms\n");
    for row in &out.trace {
        trace.push_str(&format!("{},{:e},{:e},{:e}\n", row.level, row.coefficient.re, row.coefficient.im, row.residual_rms));
    }
    let details = json!({
        "x0": params.x0,
        "half_width": params.half_width,
        "nodes": params.node_count(),
        "shift": sc.shift,
        "extracted": out.expansion,
        "trace": out.trace,
        "sampled_sup": m,
        "cauchy": cauchy,
        "max_error": max_error,
        "tolerance": tol,
    });
    Ok((checks, details, vec![("extraction_trace.csv".into(), trace)]))
}

fn run_forelli(sc: &Scenario, seed: u64, tol: Option<f64>, max_level: Option<Rational64>) -> Result<Parts> {
    let field = sc.field()?;
    let jet = sc.jet(field.dim())?;
    let bindings = Bindings { jet: Some(&jet), expansion: None };
    let f = sc.oracle_expr("jet", &bindings, Domain::Polydisk)?;
    if f.min_dim() > field.dim() {
        return Err(sc.invalid("oracle", format!("oracle needs {} coordinates, field has {}", f.min_dim(), field.dim())));
    }
    let jo = JetOracle::new(move |z| f.eval_polydisk(z), jet);
    let mut cfg = ForelliConfig { seed, lambda_max: max_level, ..ForelliConfig::default() };
    if let Some(t) = tol {
        cfg.compare_tol = t;
    }
    if let Some(r) = sc.radius {
        cfg.compare_radius = r;
    }
    let report = forelli_pipeline(&jo, &field, &cfg)?;
    let expect = sc.expect.unwrap_or(Expect::Holomorphic);
    let got = match report.verdict {
        ForelliVerdict::Holomorphic { .. } => Expect::Holomorphic,
        ForelliVerdict::HypothesisViolated { .. } => Expect::HypothesisViolated,
        ForelliVerdict::NotFHolomorphic { .. } => Expect::NotFHolomorphic,
        ForelliVerdict::AntiHolomorphicObstruction { .. } => Expect::Obstruction,
    };
    let checks = vec![check("verdict_as_expected", got == expect)];
    let details = json!({ "expected": expect, "report": report });
    Ok((checks, details, Vec::new()))
}

fn run_counterexample(sc: &Scenario, seed: u64) -> Result<Parts> {
    let which = match sc.require("example", &sc.example)? {
        Example::Resonant => Which::Resonant { t: sc.t.unwrap_or(1.0) },
        Example::Spiral => Which::Spiral { alpha: sc.alpha.unwrap_or(Complex64::new(-1.0, 1.0)), t: sc.t.unwrap_or(1.0) },
        Example::ZbarZbar => Which::RemarkZbarZbar,
    };
    let suite = counterexample_suite(which, seed).map_err(|e| match e {
        Error::InvalidParameter(m) => sc.invalid("example", m),
        other => other,
    })?;
    let checks = suite.checks.iter().map(|c| check(&c.name, c.passed)).collect();
    let mut tables = Vec::new();
    if let Some(fit) = &suite.decay {
        let mut buf = Vec::new();
        fit.write_csv(&mut buf).expect("writing to memory");
        tables.push(("decay_fit.csv".into(), String::from_utf8(buf).expect("utf-8 csv")));
    }
    Ok((checks, to_value(&suite), tables))
}

fn run_bounds(sc: &Scenario, tol: f64) -> Result<Parts> {
    let e = sc.expansion()?.ok_or_else(|| sc.invalid("kind", "bounds needs 'coef' lines"))?;
    let bindings = Bindings { jet: None, expansion: Some(&e) };
    let f = sc.oracle_expr("expansion", &bindings, Domain::HalfPlane)?;
    let oracle = |z: Complex64| f.eval_half_plane(z);
    let grid = HalfPlaneGrid { tolerance: tol, ..HalfPlaneGrid::default() };
    let asym = e.to_asymptotic();
    let tail = tail_bound_check(&oracle, &asym, asym.top(), &grid)?;
    let x_lo = sc.x_lo.unwrap_or(0.5);
    let mut residual_bounds = Vec::new();
    for n in 0..e.top() {
        residual_bounds.push(residual_bound_check(&oracle, &e, n, x_lo, &grid)?);
    }
    let convergence = uniform_convergence_check(&e, sc.d.unwrap_or(1.0), &oracle, &grid)?;
    let params = ExtractionParams::new(LevelGrid::from_levels(e.levels().iter().copied())?);
    let m = sampled_sup_half_plane(&oracle, &params)?;
    let cauchy = verify_cauchy_bound(&e, m, 1e-6);
    let checks = vec![
        check("tail_bound", tail.passed()),
        check("residual_max_principle", residual_bounds.iter().all(|b| b.passed)),
        check("uniform_convergence", convergence.passed()),
        check("cauchy_bound", cauchy.passed),
    ];
    let mut reports = vec![&tail.at_level];
    reports.extend(tail.eps_form.as_ref());
    reports.push(&convergence.decay);
    let details = json!({
        "tail": tail,
        "residual_bounds": residual_bounds,
        "convergence": convergence,
        "cauchy": cauchy,
    });
    Ok((checks, details, vec![("decay.csv".into(), decay_csv(&reports))]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_errors_are_line_anchored() {
        let err = Scenario::parse("kind = forelli\nrates = 1/1, x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = Scenario::parse("# c\nkind = forelli\nbogus = 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = Scenario::parse("kind = forelli\nseed = 1\nseed = 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        assert!(Scenario::parse("rates = 1/1\n").is_err());
    }

    #[test]
    fn validation_errors_point_at_offending_key() {
        let sc = Scenario::parse("kind = forelli\n\nrates = 1/1, 0/1\nterm = 1 0 | 0 0 | 1 | 0\n").unwrap();
        let err = run(&sc, &Overrides::default()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let sc = Scenario::parse("kind = forelli\nrates = 1/1\noracle = z1 + exp(1)\nterm = 1 | 0 | 1 | 0\n").unwrap();
        assert!(matches!(run(&sc, &Overrides::default()).unwrap_err(), Error::Parse { line: 3, .. }));
    }

    #[test]
    fn forelli_scenario() {
        let sc = Scenario::parse(
            "kind = forelli\nrates = 1/1, 2/1\nterm = 1 0 | 0 0 | 1 | 0\nterm = 0 2 | 0 0 | 1 | 0\nseed = 3\n",
        )
        .unwrap();
        let out = run(&sc, &Overrides::default()).unwrap();
        assert!(out.passed, "{}", out.details);
        assert_eq!(out.details["report"]["verdict"]["tag"], "Holomorphic");
    }

    #[test]
    fn extraction_scenario() {
        let sc = Scenario::parse("kind = extraction\ncoef = 1 | 3 | 0\ncoef = 5/2 | 1 | 1\nlevels = 0, 1, 2, 5/2\ntolerance = 1e-8\n")
            .unwrap();
        let out = run(&sc, &Overrides::default()).unwrap();
        assert!(out.passed, "{}", out.details);
        assert!(out.details["max_error"].as_f64().unwrap() < 1e-8);
        assert_eq!(out.tables[0].0, "extraction_trace.csv");
    }

    #[test]
    fn shifted_extraction_scenario() {
        let sc = Scenario::parse("kind = extraction\ncoef = 1 | 1 | 0\ncoef = 3/2 | 0 | -0.5\nshift = 0.7\n").unwrap();
        assert!(run(&sc, &Overrides::default()).unwrap().passed);
    }

    #[test]
    fn pushforward_scenario() {
        let sc = Scenario::parse(
            "kind = pushforward\nrates = -1/1, -2/1\nterm = 1 0 | 0 1 | 1 | 0\nbase_point = 0.5 0; 0.3 0.2\n",
        )
        .unwrap();
        let out = run(&sc, &Overrides::default()).unwrap();
        assert!(out.passed, "{}", out.details);
        assert_eq!(out.details["restriction"]["holomorphic"], false);
    }

    #[test]
    fn bounds_scenario() {
        let sc = Scenario::parse("kind = bounds\ncoef = 1 | 0.5 | 0\ncoef = 2 | -0.5 | 0\n").unwrap();
        let out = run(&sc, &Overrides::default()).unwrap();
        assert!(out.passed, "{}", out.details);
    }

    #[test]
    fn counterexample_scenarios() {
        for text in ["kind = counterexample\nexample = resonant\nt = 1\n", "kind = counterexample\nexample = zbar_zbar\n"] {
            let out = run(&Scenario::parse(text).unwrap(), &Overrides::default()).unwrap();
            assert!(out.passed, "{}", out.details);
        }
    }

    #[test]
    fn overrides_take_precedence() {
        let sc = Scenario::parse("kind = counterexample\nexample = resonant\nseed = 1\n").unwrap();
        assert_eq!(seed_of(&sc, &Overrides { seed: Some(9), ..Overrides::default() }), 9);
        assert_eq!(seed_of(&sc, &Overrides::default()), 1);
    }
}
