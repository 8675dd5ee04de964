use proptest::prelude::*;
use scalekit::catalog;
use scalekit::maxent::{self, Constraint};
use scalekit::scale::ScaleExpr;
use scalekit::sim;

fn t_values() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0f64..5.0, 2..64).prop_filter("needs spread", |t| {
        let lo = t.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = t.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        hi - lo > 0.1
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The maximizer is a distribution with the requested mean whose log
    /// probabilities are affine in T.
    #[test]
    fn oracle_is_exponential_family(t in t_values(), frac in 0.05f64..0.95) {
        let lo = t.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = t.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let target = lo + frac * (hi - lo);
        let p = maxent::discrete_maxent_oracle(&t, target).unwrap();
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let mean: f64 = p.iter().zip(&t).map(|(p, t)| p * t).sum();
        prop_assert!((mean - target).abs() < 1e-8 * (1.0 + target.abs()));
        // slope of log p against T through the extreme points
        let (i_lo, i_hi) = (
            t.iter().position(|&x| x == lo).unwrap(),
            t.iter().position(|&x| x == hi).unwrap(),
        );
        let slope = (p[i_hi].ln() - p[i_lo].ln()) / (hi - lo);
        for (pi, ti) in p.iter().zip(&t) {
            let predicted = p[i_lo].ln() + slope * (ti - lo);
            prop_assert!((pi.ln() - predicted).abs() < 1e-6 * (1.0 + predicted.abs()));
        }
    }

    /// A target outside the range of T can not be met.
    #[test]
    fn oracle_rejects_infeasible_targets(t in t_values(), over in 0.01f64..10.0) {
        let hi = t.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(maxent::discrete_maxent_oracle(&t, hi + over).is_err());
    }

    #[test]
    fn ks_statistic_is_a_probability_distance(mut xs in prop::collection::vec(-10.0f64..10.0, 1..200)) {
        xs.sort_by(f64::total_cmp);
        let logistic = |x: f64| 1.0 / (1.0 + (-x).exp());
        let d = sim::ks_statistic_sorted(&xs, logistic);
        prop_assert!((0.0..=1.0).contains(&d));
        prop_assert!(d >= 0.5 / xs.len() as f64);
    }

    #[test]
    fn scenarios_are_deterministic_in_the_seed(idx in 0usize..6, seed in any::<u64>()) {
        let name = sim::SCENARIOS[idx];
        let a = sim::run_scenario_with(name, 1000, seed).unwrap();
        let b = sim::run_scenario_with(name, 1000, seed).unwrap();
        prop_assert_eq!(a.fit.ks_statistic.to_bits(), b.fit.ks_statistic.to_bits());
        prop_assert_eq!(a.mismatch.ks_statistic.to_bits(), b.mismatch.ks_statistic.to_bits());
    }

    /// Derivatives of composed scales agree with central differences.
    #[test]
    fn scale_derivative_matches_difference(c in 0.1f64..3.0, gamma in 0.3f64..3.0, a in 0.2f64..2.0, v in 0.2f64..20.0) {
        let e = ScaleExpr::combination(vec![
            (a, ScaleExpr::log_deform(c, ScaleExpr::Linear)),
            (1.0, ScaleExpr::power(gamma)),
        ]);
        let (w, d) = e.eval_with_derivative(v).unwrap();
        prop_assert_eq!(w, e.eval(v).unwrap());
        let h = 1e-5 * v;
        let fd = (e.eval(v + h).unwrap() - e.eval(v - h).unwrap()) / (2.0 * h);
        prop_assert!((d - fd).abs() < 1e-6 * (1.0 + d.abs()), "{} vs {}", d, fd);
        let (_, log_d, sign) = e.eval_with_log_derivative(v).unwrap();
        prop_assert!((sign * log_d.exp() - d).abs() < 1e-12 * (1.0 + d.abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Replacing T by a + bT and re-solving λ leaves the density unchanged.
    #[test]
    fn affine_rescaling_leaves_density_unchanged(
        idx in prop::sample::select(vec!["exponential", "gauss", "gamma", "lomax", "gumbel"]),
        a in -3.0f64..3.0,
        b in 0.2f64..5.0,
    ) {
        let e = catalog::lookup(idx).unwrap();
        let spec = e.instantiate(&e.setting(0)).unwrap();
        let target = a + b * maxent::mean_scale(&spec).unwrap();
        let mut rescaled = spec.clone();
        rescaled.scale = spec.scale.affinely_rescaled(a, b);
        let lambda = maxent::solve_lambda(&rescaled, &Constraint::new(target, 1e-12 * target.abs().max(1.0)).unwrap()).unwrap();
        prop_assert!((lambda * b / spec.lambda - 1.0).abs() < 1e-9, "{} vs {}", lambda, spec.lambda / b);
        let p = maxent::normalize(&spec).unwrap();
        let q = maxent::normalize(&rescaled.with_lambda(lambda)).unwrap();
        for &y in p.grid.iter().filter(|&&y| y >= p.quantile(0.01) && y <= p.quantile(0.99)) {
            let (u, v) = (p.density_at(y), q.density_at(y));
            prop_assert!((u - v).abs() <= 1e-8 * u, "{} vs {} at {}", u, v, y);
        }
    }
}
