//! Property tests: special-function identities over random samples,
//! Mittag-Leffler monotonicity, power-law fit recovery, quadrature weight
//! consistency, and parser robustness.

use num_complex::Complex64;
use proptest::prelude::*;

use hypervolt::asymptotics::estimate_power_law;
use hypervolt::resolvent::{Provenance, Route, SolutionGrid};
use hypervolt::special::{gamma, mittag_leffler_capped};
use hypervolt::*;

fn away_from_poles(re: f64, im: f64) -> bool {
    im.abs() > 1e-3 || re > 0.5 || (re - re.round()).abs() > 1e-3
}

fn away_from_integers(re: f64, im: f64) -> bool {
    im.abs() > 1e-3 || (re - re.round()).abs() > 1e-3
}

proptest! {
    #[test]
    fn gamma_recurrence_holds(re in -20.0..20.0f64, im in -20.0..20.0f64) {
        prop_assume!(away_from_poles(re, im) && away_from_poles(re + 1.0, im));
        let z = Complex64::new(re, im);
        let lhs = gamma(z + 1.0).unwrap();
        let rhs = z * gamma(z).unwrap();
        prop_assert!(
            (lhs - rhs).norm() <= 1e-12 * lhs.norm(),
            "z = {z}: {lhs} vs {rhs}"
        );
    }

    #[test]
    fn gamma_reflection_holds(re in -20.0..20.0f64, im in -20.0..20.0f64) {
        prop_assume!(away_from_integers(re, im));
        let z = Complex64::new(re, im);
        let product = gamma(z).unwrap() * gamma(Complex64::new(1.0, 0.0) - z).unwrap()
            * (std::f64::consts::PI * z).sin()
            / std::f64::consts::PI;
        prop_assert!(
            (product - 1.0).norm() <= 1e-12,
            "z = {z}: {product}"
        );
    }

    #[test]
    fn mittag_leffler_monotone_for_positive_z(
        alpha in 0.2..2.0f64,
        beta in 0.1..3.0f64,
        z1 in 0.0..2.5f64,
        dz in 0.001..0.5f64,
    ) {
        // all series terms positive, so E is increasing on z >= 0; the
        // explicit cap covers the slow-decay corner of small alpha
        let lo = mittag_leffler_capped(alpha, beta, z1, 20_000).unwrap();
        let hi = mittag_leffler_capped(alpha, beta, z1 + dz, 20_000).unwrap();
        prop_assert!(hi > lo, "E({alpha},{beta}) at {z1} -> {lo}, at {} -> {hi}", z1 + dz);
    }

    #[test]
    fn power_law_fit_recovers_exact_data(
        amplitude in 0.1..10.0f64,
        exponent in -2.0..2.0f64,
        lo_exp in -4.0..1.0f64,
        decades in 0.5..3.0f64,
    ) {
        let lo = 10.0f64.powf(lo_exp);
        let hi = lo * 10.0f64.powf(decades);
        let times = GridSpec::new(lo, hi, 16, Spacing::Geometric).unwrap().times();
        let values: Vec<f64> = times.iter().map(|&t| amplitude * t.powf(exponent)).collect();
        let grid = SolutionGrid::new(
            times,
            values,
            Provenance { route: Route::Direct, detail: "synthetic".into() },
            None,
        ).unwrap();
        let fit = estimate_power_law(&grid, (lo, hi)).unwrap();
        prop_assert!((fit.exponent - exponent).abs() < 1e-8, "{} vs {exponent}", fit.exponent);
        prop_assert!((fit.amplitude - amplitude).abs() < 1e-6 * amplitude, "{} vs {amplitude}", fit.amplitude);
    }

    #[test]
    fn product_weights_integrate_constants_exactly(
        lambda in 0.05..1.0f64,
        steps in 8usize..200,
    ) {
        // sum of the product weights applied to v == 1 telescopes to the
        // finite-part primitive t_n^lambda / lambda
        let h = 0.03;
        let t_n = steps as f64 * h;
        let total: f64 = (1..=steps)
            .map(|m| {
                h.powf(lambda) * ((m as f64).powf(lambda) - ((m - 1) as f64).powf(lambda))
                    / lambda
            })
            .sum();
        let want = t_n.powf(lambda) / lambda;
        prop_assert!((total - want).abs() <= 1e-13 * want.abs() * steps as f64);
    }

    #[test]
    fn grid_times_strictly_increasing(
        lo in 1e-6..1.0f64,
        ratio in 1.001..1e6f64,
        points in 2usize..300,
        geometric in any::<bool>(),
    ) {
        let spacing = if geometric { Spacing::Geometric } else { Spacing::Linear };
        let spec = GridSpec::new(lo, lo * ratio, points, spacing).unwrap();
        let ts = spec.times();
        prop_assert_eq!(ts.len(), points);
        prop_assert_eq!(ts[0], lo);
        prop_assert_eq!(ts[points - 1], lo * ratio);
        for w in ts.windows(2) {
            prop_assert!(w[1] > w[0]);
        }
    }

    #[test]
    fn grid_spec_parser_never_panics(s in "\\PC*") {
        let _ = parse_grid_spec(&s);
    }

    #[test]
    fn sample_parser_never_panics(s in "\\PC*") {
        let _ = parse_sample_file(&s);
    }

    #[test]
    fn sample_parser_accepts_valid_and_interpolates_inside_hull(
        rows in prop::collection::vec((0.001..10.0f64, -100.0..100.0f64), 2..40),
    ) {
        let mut t_acc = 0.0;
        let mut text = String::new();
        let mut first = true;
        for (dt, v) in &rows {
            if first {
                text.push_str(&format!("0 {v}\n"));
                first = false;
            } else {
                t_acc += dt;
                text.push_str(&format!("{t_acc} {v}\n"));
            }
        }
        let parsed = parse_sample_file(&text).unwrap();
        let data_min = parsed.values.iter().cloned().fold(f64::INFINITY, f64::min);
        let data_max = parsed.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let probe = 0.5 * parsed.last_time();
        let v = parsed.interpolate(probe);
        prop_assert!(v >= data_min - 1e-9 && v <= data_max + 1e-9);
    }
}
