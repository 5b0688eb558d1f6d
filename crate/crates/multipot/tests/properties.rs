//! Property tests for the periodic building blocks.

use multipot::kernels::hilbert_transform;
use multipot::spectral::{analyze, TrigPoly};
use multipot::TrigCurve;
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn coeff() -> impl Strategy<Value = f64> {
    (-2.0..2.0f64).prop_map(|x| (x * 64.0).round() / 64.0)
}

fn trig_poly(order: usize) -> impl Strategy<Value = TrigPoly> {
    (
        coeff(),
        prop::collection::vec(coeff(), order),
        prop::collection::vec(coeff(), order),
    )
        .prop_map(|(mean, cos, sin)| TrigPoly::new(mean, cos, sin))
}

/// Near-circular perturbed curves: d_1 = 1 plus small higher harmonics,
/// plenty to stay simple and counterclockwise.
fn perturbed_circle() -> impl Strategy<Value = TrigCurve> {
    prop::collection::vec(-0.04..0.04f64, 8).prop_map(|c| {
        TrigCurve::new([
            (1, Complex64::new(1.0, 0.0)),
            (-1, Complex64::new(c[0], c[1])),
            (2, Complex64::new(c[2], c[3])),
            (-2, Complex64::new(c[4], c[5])),
            (3, Complex64::new(c[6], c[7])),
            (0, Complex64::new(2.0 * c[0], -c[5])),
        ])
        .expect("perturbed circle stays simple")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn curve_is_periodic(curve in perturbed_circle(), t in 0.0..2.0 * PI) {
        let diff = (curve.point(t + 2.0 * PI) - curve.point(t)).norm();
        prop_assert!(diff < 1e-12);
    }

    #[test]
    fn curve_derivative_matches_finite_differences(
        curve in perturbed_circle(),
        t in 0.0..2.0 * PI,
    ) {
        let h = 1e-5;
        let fd = (curve.point(t + h) - curve.point(t - h)) / (2.0 * h);
        prop_assert!((fd - curve.derivative(t, 1)).norm() < 1e-8);
    }

    #[test]
    fn interior_point_winds_once(curve in perturbed_circle()) {
        let p = curve.interior_point().unwrap();
        prop_assert_eq!(curve.winding_number(p).unwrap(), 1);
    }

    #[test]
    fn analyze_synthesize_roundtrip(poly in trig_poly(6)) {
        let samples = poly.sample(64);
        let back = analyze(&samples, 6).unwrap();
        prop_assert!((back.mean() - poly.mean()).abs() < 1e-12);
        for l in 0..6 {
            prop_assert!((back.cos_coeffs()[l] - poly.cos_coeffs()[l]).abs() < 1e-12);
            prop_assert!((back.sin_coeffs()[l] - poly.sin_coeffs()[l]).abs() < 1e-12);
        }
    }

    #[test]
    fn antiderivative_derivative_roundtrip(poly in trig_poly(5)) {
        let zero_mean = TrigPoly::new(
            0.0,
            poly.cos_coeffs().to_vec(),
            poly.sin_coeffs().to_vec(),
        );
        let back = zero_mean.antiderivative().unwrap().derivative();
        for l in 0..5 {
            prop_assert!((back.cos_coeffs()[l] - zero_mean.cos_coeffs()[l]).abs() < 1e-13);
            prop_assert!((back.sin_coeffs()[l] - zero_mean.sin_coeffs()[l]).abs() < 1e-13);
        }
    }

    #[test]
    fn parseval_for_band_limited_samples(poly in trig_poly(5)) {
        let n = 64;
        let samples = poly.sample(n);
        let q = analyze(&samples, 5).unwrap();
        let mean_square = samples.iter().map(|f| f * f).sum::<f64>() / n as f64;
        let coeff_square = q.mean().powi(2)
            + 0.5 * q
                .cos_coeffs()
                .iter()
                .zip(q.sin_coeffs())
                .map(|(a, b)| a * a + b * b)
                .sum::<f64>();
        prop_assert!((mean_square - coeff_square).abs() < 1e-12);
    }

    #[test]
    fn hilbert_transform_is_an_anti_involution(poly in trig_poly(7)) {
        // On zero-mean input, applying the transform twice negates.
        let zero_mean = TrigPoly::new(
            0.0,
            poly.cos_coeffs().to_vec(),
            poly.sin_coeffs().to_vec(),
        );
        let samples = zero_mean.sample(64);
        let twice = hilbert_transform(&hilbert_transform(&samples).unwrap()).unwrap();
        for (a, b) in twice.iter().zip(&samples) {
            prop_assert!((a + b).abs() < 1e-12);
        }
    }
}
