//! Small numerical helpers shared by the verification modules.

use num_complex::Complex64;

use crate::report::ROUNDING_GUARD;

/// Default central-difference step for Wirtinger derivatives.
pub const FD_STEP: f64 = 1e-5;

pub type PolydiskFn = dyn Fn(&[Complex64]) -> Complex64 + Send + Sync;

/// Rounding floor for a difference of quantities of size `scale`.
pub fn rounding_floor(scale: f64) -> f64 {
    ROUNDING_GUARD * f64::EPSILON * scale
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Ordinary least squares `y = slope * x + intercept`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let n = xs.len();
    if n < 2 || n != ys.len() {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Central-difference `∂g/∂ζ̄ = ½(∂_x + i ∂_y) g`.
pub fn dbar(g: impl Fn(Complex64) -> Complex64, zeta: Complex64, h: f64) -> Complex64 {
    let hx = Complex64::new(h, 0.0);
    let hy = Complex64::new(0.0, h);
    let dx = (g(zeta + hx) - g(zeta - hx)) / (2.0 * h);
    let dy = (g(zeta + hy) - g(zeta - hy)) / (2.0 * h);
    0.5 * (dx + Complex64::i() * dy)
}

/// Central-difference `∂f/∂z̄_j` at `z`.
pub fn dbar_partial(f: &dyn Fn(&[Complex64]) -> Complex64, z: &[Complex64], j: usize, h: f64) -> Complex64 {
    dbar(
        |zj| {
            let mut w = z.to_vec();
            w[j] = zj;
            f(&w)
        },
        z[j],
        h,
    )
}

/// Largest `|∂f/∂z̄_j|` over all coordinates; zero for holomorphic `f`.
pub fn dbar_residual(f: &dyn Fn(&[Complex64]) -> Complex64, z: &[Complex64], h: f64) -> f64 {
    (0..z.len()).map(|j| dbar_partial(f, z, j, h).norm()).fold(0.0, f64::max)
}

/// Grid-plus-refinement search for the supremum of a real function on the
/// closed unit polydisk.
#[derive(Clone, Debug)]
pub struct SupSearch {
    pub radii: Vec<f64>,
    pub angles_per_axis: usize,
    pub refine_starts: usize,
    pub max_radius: f64,
}

impl Default for SupSearch {
    fn default() -> Self {
        Self { radii: vec![0.5, 1.0 - 1e-9], angles_per_axis: 12, refine_starts: 6, max_radius: 1.0 - 1e-9 }
    }
}

impl SupSearch {
    /// Torus-only search, for holomorphic functions whose modulus peaks on
    /// the distinguished boundary.
    pub fn torus() -> Self {
        Self { radii: vec![1.0 - 1e-9], ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SupEstimate {
    pub value: f64,
    pub point: Vec<Complex64>,
}

fn to_point(polar: &[(f64, f64)]) -> Vec<Complex64> {
    polar.iter().map(|&(r, t)| Complex64::from_polar(r, t)).collect()
}

pub fn polydisk_sup(f: &dyn Fn(&[Complex64]) -> f64, dim: usize, search: &SupSearch) -> SupEstimate {
    let nr = search.radii.len().max(1);
    let na = search.angles_per_axis.max(1);
    let per_axis = nr * na;
    let total = per_axis.pow(dim as u32);
    let dtheta = std::f64::consts::TAU / na as f64;

    let mut scored: Vec<(f64, Vec<(f64, f64)>)> = Vec::new();
    let mut polar = vec![(0.0, 0.0); dim];
    for mut idx in 0..total {
        for p in polar.iter_mut() {
            let cell = idx % per_axis;
            idx /= per_axis;
            *p = (search.radii[cell / na].min(search.max_radius), dtheta * (cell % na) as f64);
        }
        let v = f(&to_point(&polar));
        if v.is_finite() {
            scored.push((v, polar.clone()));
        }
    }
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    scored.truncate(search.refine_starts.max(1));

    let mut best = SupEstimate { value: f64::NEG_INFINITY, point: vec![Complex64::new(0.0, 0.0); dim] };
    for (start_value, start) in scored {
        let (value, polar) = coordinate_ascent(f, start_value, start, dtheta / 2.0, search.max_radius);
        if value > best.value {
            best = SupEstimate { value, point: to_point(&polar) };
        }
    }
    if !best.value.is_finite() {
        best.value = 0.0;
    }
    best
}

fn coordinate_ascent(
    f: &dyn Fn(&[Complex64]) -> f64,
    mut value: f64,
    mut polar: Vec<(f64, f64)>,
    mut dtheta: f64,
    max_radius: f64,
) -> (f64, Vec<(f64, f64)>) {
    let mut dr = 0.25;
    while dtheta > 1e-10 || dr > 1e-10 {
        let mut improved = false;
        for j in 0..polar.len() {
            let (r, t) = polar[j];
            let candidates = [
                (r, t + dtheta),
                (r, t - dtheta),
                ((r + dr).min(max_radius), t),
                ((r - dr).max(0.0), t),
            ];
            for c in candidates {
                polar[j] = c;
                let v = f(&to_point(&polar));
                if v.is_finite() && v > value {
                    value = v;
                    improved = true;
                    break;
                }
                polar[j] = (r, t);
            }
        }
        if !improved {
            dtheta *= 0.5;
            dr *= 0.5;
        }
    }
    (value, polar)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| -2.5 * x + 1.0).collect();
        let (s, c) = linear_fit(&xs, &ys).unwrap();
        assert!((s + 2.5).abs() < 1e-12 && (c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dbar_of_holomorphic_is_small() {
        let g = |z: Complex64| z * z * z;
        assert!(dbar(g, Complex64::new(0.3, 0.2), FD_STEP).norm() < 1e-9);
    }

    #[test]
    fn dbar_of_conjugate_is_one() {
        let g = |z: Complex64| z.conj();
        assert!((dbar(g, Complex64::new(0.3, 0.2), FD_STEP) - 1.0).norm() < 1e-9);
    }

    #[test]
    fn sup_of_polynomial_on_torus() {
        // |z1 + z2| peaks at 2 when the phases align.
        let f = |z: &[Complex64]| (z[0] + z[1]).norm();
        let s = polydisk_sup(&f, 2, &SupSearch::torus());
        assert!((s.value - 2.0).abs() < 1e-8, "{}", s.value);
    }

    #[test]
    fn sup_finds_interior_maximum() {
        // r(1-r) on each axis peaks at r = 1/2.
        let f = |z: &[Complex64]| z[0].norm() * (1.0 - z[0].norm());
        let s = polydisk_sup(&f, 1, &SupSearch { radii: vec![0.1, 0.9], ..SupSearch::default() });
        assert!((s.value - 0.25).abs() < 1e-10);
    }
}
