use holoflow::asympt::{pushforward, restrict_holomorphic, AsymptoticExpansion, ExpTerm, HolomorphicExpansion};
use holoflow::extract::shift_factor;
use holoflow::flow::{curve_point, level_grid, normalize_time, BasePoint, DiagonalField};
use holoflow::report::{tail_verdict, DecaySample, Verdict};
use holoflow::series::TaylorSeries;
use holoflow::{Complex64, Rational64};
use proptest::prelude::*;

fn complex(r_max: f64) -> impl Strategy<Value = Complex64> {
    (0.0..r_max, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn rate() -> impl Strategy<Value = Rational64> {
    (1i64..=5, 1i64..=4).prop_map(|(p, q)| Rational64::new(p, q))
}

fn field(dim: usize) -> impl Strategy<Value = DiagonalField> {
    (prop::collection::vec(rate(), dim), any::<bool>()).prop_map(|(rates, neg)| {
        let rates = rates.into_iter().map(|r| if neg { -r } else { r }).collect();
        DiagonalField::real(rates).unwrap()
    })
}

type RawTerm = (Vec<u32>, Vec<u32>, Complex64);

fn jet(dim: usize) -> impl Strategy<Value = Vec<RawTerm>> {
    prop::collection::vec((prop::collection::vec(0u32..3, dim), prop::collection::vec(0u32..3, dim), complex(1.0)), 1..6)
}

fn series(dim: usize, terms: &[RawTerm]) -> TaylorSeries {
    let view: Vec<(&[u32], &[u32], Complex64)> = terms.iter().map(|(k, m, a)| (k.as_slice(), m.as_slice(), *a)).collect();
    TaylorSeries::from_exponents(dim, &view).unwrap()
}

fn as_f64(q: Rational64) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn curves_satisfy_the_flow_property(f in field(3), c in prop::collection::vec(complex(0.9), 3),
                                        a in complex(1.0), b in complex(1.0)) {
        let eigs = f.eigenvalues();
        let direct = curve_point(&eigs, &c, a + b);
        let composed = curve_point(&eigs, &curve_point(&eigs, &c, a), b);
        for (x, y) in direct.iter().zip(&composed) {
            prop_assert!((x - y).norm() <= 1e-12 * (1.0 + x.norm()));
        }
    }

    #[test]
    fn curves_solve_the_linear_equation(f in field(2), c in prop::collection::vec(complex(0.9), 2), z in complex(1.0)) {
        // d/dζ s_c(ζ) = -α s_c(ζ) in the contracting parametrization.
        let eigs = f.eigenvalues();
        let h = 1e-6;
        let ahead = curve_point(&eigs, &c, z + h);
        let behind = curve_point(&eigs, &c, z - h);
        let here = curve_point(&eigs, &c, z);
        for j in 0..2 {
            let d = (ahead[j] - behind[j]) / (2.0 * h);
            prop_assert!((d + eigs[j] * here[j]).norm() <= 1e-6 * (1.0 + here[j].norm()));
        }
    }

    #[test]
    fn level_grid_is_closed_and_generated(f in field(2), bound in 1i64..8) {
        let lambda_max = Rational64::from_integer(bound);
        let grid = level_grid(&f, lambda_max).unwrap();
        let (normalized, _) = normalize_time(&f).unwrap();
        prop_assert_eq!(grid.levels[0], Rational64::from_integer(0));
        prop_assert!(grid.levels.windows(2).all(|w| w[0] < w[1]));
        for &l in &grid.levels {
            for &r in normalized.rates() {
                if l + r <= lambda_max {
                    prop_assert!(grid.contains(&(l + r)));
                }
            }
            let zero = Rational64::from_integer(0);
            prop_assert!(l == zero || normalized.rates().iter().any(|&r| l - r >= zero && grid.contains(&(l - r))));
        }
    }

    #[test]
    fn pushforward_matches_the_jet_on_curves(f in field(2), raw in jet(2), c in prop::collection::vec(complex(0.9), 2),
                                             x in 0.0..5.0f64, y in -5.0..5.0f64) {
        let s = series(2, &raw);
        let (normalized, _) = normalize_time(&f).unwrap();
        let e = pushforward(&s, &normalized, &BasePoint::new(c.clone()).unwrap(), Rational64::from_integer(40)).unwrap();
        let zeta = Complex64::new(x, y);
        let z = curve_point(&normalized.eigenvalues(), &c, zeta);
        let want = s.eval(&z).unwrap();
        prop_assert!((e.eval(zeta, e.top()).unwrap() - want).norm() < 1e-10);
    }

    #[test]
    fn holomorphic_jets_restrict(f in field(2), raw in jet(2), c in prop::collection::vec(complex(0.9), 2)) {
        let holo: Vec<RawTerm> = raw.into_iter().map(|(k, _, a)| (k, vec![0, 0], a)).collect();
        let s = series(2, &holo);
        let (normalized, _) = normalize_time(&f).unwrap();
        let e = pushforward(&s, &normalized, &BasePoint::new(c).unwrap(), Rational64::from_integer(40)).unwrap();
        let h = restrict_holomorphic(&e).unwrap();
        prop_assert!(h.to_asymptotic().equals(&e));
    }

    #[test]
    fn equals_ignores_term_order(terms in prop::collection::vec((0i64..10, 0i64..10, complex(1.0)), 1..8), seed in any::<u64>()) {
        let terms: Vec<ExpTerm> = terms
            .into_iter()
            .map(|(m, n, p)| ExpTerm { mu: Rational64::new(m, 2), nu: Rational64::new(n, 3), p })
            .collect();
        let mut rotated = terms.clone();
        let len = rotated.len();
        rotated.rotate_left((seed as usize) % len);
        let a = AsymptoticExpansion::new(Vec::new(), terms).unwrap();
        let b = AsymptoticExpansion::new(Vec::new(), rotated).unwrap();
        // Summation order of repeated keys can differ in the last bit.
        let close = a.len() == b.len() && a.terms().zip(b.terms()).all(|(s, t)| {
            s.mu == t.mu && s.nu == t.nu && (s.p - t.p).norm() <= 1e-15
        });
        prop_assert!(close);
    }

    #[test]
    fn holomorphic_expansion_partial_sums(pairs in prop::collection::vec((1i64..30, complex(1.0)), 1..6), x in 0.0..3.0f64) {
        let e = HolomorphicExpansion::from_pairs(pairs.iter().map(|&(k, a)| (Rational64::new(k, 3), a))).unwrap();
        let zeta = Complex64::new(x, 0.7);
        let mut direct = Complex64::new(0.0, 0.0);
        for (n, (l, a)) in e.pairs().enumerate() {
            direct += a * (-as_f64(l) * zeta).exp();
            prop_assert!((e.eval(zeta, n) - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn series_text_round_trip(raw in jet(3)) {
        let s = series(3, &raw);
        prop_assert_eq!(TaylorSeries::parse_text(3, &s.to_text()).unwrap(), s);
    }

    #[test]
    fn holomorphic_and_antiholomorphic_parts_split(raw in jet(2), z in prop::collection::vec(complex(0.9), 2)) {
        let s = series(2, &raw);
        let whole = s.eval(&z).unwrap();
        let split = s.holomorphic_part().eval(&z).unwrap() + s.antiholomorphic_part().eval(&z).unwrap();
        prop_assert!((whole - split).norm() < 1e-12);
        prop_assert!(s.holomorphic_part().terms().all(|t| t.m.is_zero()));
    }

    #[test]
    fn shift_factor_is_bounded(a in -10.0..10.0f64, lambda in 0.0..10.0f64) {
        let f = shift_factor(a, lambda);
        prop_assert!(f.norm() <= 2.0 + 1e-15);
        prop_assert!((f + 1.0).norm() - 1.0 < 1e-15);
    }

    #[test]
    fn tail_below_tolerance_passes(start in 1e-9..1e-7f64, ratio in 0.1..1.0f64) {
        let samples: Vec<DecaySample> = (0..8)
            .map(|i| DecaySample { abscissa: f64::from(i), measured: start * ratio.powi(i), resolved: true })
            .collect();
        prop_assert_eq!(tail_verdict(&samples, 1e-6), Verdict::Pass);
    }
}
