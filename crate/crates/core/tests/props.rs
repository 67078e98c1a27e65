//! Property tests for the algebraic invariants of the operators.

use dehaze_core::refine::{shrink, soft_threshold};
use dehaze_core::spectral::{gradient_transfer_spectrum, Spectral};
use dehaze_core::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjoint_identity_holds(
        (h, w) in (2usize..=10, 2usize..=10),
        data in prop::collection::vec(-1.0f64..1.0, 300),
    ) {
        let n = h * w;
        prop_assume!(data.len() >= 3 * n);
        let f = ScalarField::from_data(h, w, data[..n].to_vec()).unwrap();
        let g = GradientPair {
            dx: ScalarField::from_data(h, w, data[n..2 * n].to_vec()).unwrap(),
            dy: ScalarField::from_data(h, w, data[2 * n..3 * n].to_vec()).unwrap(),
        };
        let grad_f = gradient(&f);
        let lhs = grad_f.dx.dot(&g.dx) + grad_f.dy.dot(&g.dy);
        let rhs = -f.dot(&divergence(&g));
        let scale = lhs.abs().max(rhs.abs()).max(1.0);
        prop_assert!((lhs - rhs).abs() / scale < 1e-10);
    }

    #[test]
    fn fft_round_trip_is_identity(
        (h, w) in (1usize..=48, 1usize..=48),
        seed in 0u64..10_000,
    ) {
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15) | 1;
        let f = ScalarField::from_fn(h, w, |_, _| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 100_000) as f64 / 50_000.0 - 1.0
        });
        let sp = Spectral::new(h, w);
        let back = sp.inverse(&sp.forward(&f));
        let err: f64 = f
            .data()
            .iter()
            .zip(back.data())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        prop_assert!(err / f.norm_l2().max(1e-9) < 1e-10);
    }

    #[test]
    fn spectral_gradient_equals_spatial(
        (h, w) in (2usize..=16, 2usize..=16),
        seed in 0u64..10_000,
    ) {
        let mut state = seed | 1;
        let f = ScalarField::from_fn(h, w, |_, _| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 10_000) as f64 / 10_000.0
        });
        let sp = Spectral::new(h, w);
        let (tx, ty) = gradient_transfer_spectrum(h, w);
        let fhat = sp.forward(&f);
        let dx = sp.inverse(&fhat.iter().zip(&tx).map(|(a, b)| a * b).collect::<Vec<_>>());
        let dy = sp.inverse(&fhat.iter().zip(&ty).map(|(a, b)| a * b).collect::<Vec<_>>());
        let g = gradient(&f);
        for k in 0..h * w {
            prop_assert!((dx.data()[k] - g.dx.data()[k]).abs() < 1e-8);
            prop_assert!((dy.data()[k] - g.dy.data()[k]).abs() < 1e-8);
        }
    }

    #[test]
    fn clamp_is_idempotent_and_bounded(
        data in prop::collection::vec(-3.0f64..3.0, 1..64),
        lo in -1.0f64..0.5,
        span in 0.0f64..2.0,
    ) {
        let hi = lo + span;
        let w = data.len();
        let f = ScalarField::from_data(1, w, data).unwrap();
        let c = f.clamp(lo, hi);
        prop_assert_eq!(c.clamp(lo, hi), c.clone());
        for &v in c.data() {
            prop_assert!(v >= lo && v <= hi);
        }
        // Values already inside the interval pass through untouched.
        for (orig, clamped) in f.data().iter().zip(c.data()) {
            if *orig >= lo && *orig <= hi {
                prop_assert_eq!(orig, clamped);
            }
        }
    }

    #[test]
    fn soft_threshold_is_the_l1_prox(a in -5.0f64..5.0, b in 0.0f64..3.0) {
        // prox of b|x| + (x - a)^2 / 2 located by grid search.
        let direct = soft_threshold(a, b);
        let mut best = f64::INFINITY;
        let mut best_x = 0.0;
        let mut x = -10.0f64;
        while x <= 10.0 {
            let v = b * x.abs() + 0.5 * (x - a) * (x - a);
            if v < best {
                best = v;
                best_x = x;
            }
            x += 1e-3;
        }
        prop_assert!((direct - best_x).abs() < 2e-3);
    }

    #[test]
    fn shrink_never_exceeds_argument(
        data in prop::collection::vec(-2.0f64..2.0, 32),
        th in prop::collection::vec(0.0f64..1.5, 16),
    ) {
        let arg = GradientPair {
            dx: ScalarField::from_data(4, 4, data[..16].to_vec()).unwrap(),
            dy: ScalarField::from_data(4, 4, data[16..].to_vec()).unwrap(),
        };
        let thr = GradientPair {
            dx: ScalarField::from_data(4, 4, th.clone()).unwrap(),
            dy: ScalarField::from_data(4, 4, th).unwrap(),
        };
        let out = shrink(&arg, &thr);
        for (o, a) in out.dx.data().iter().zip(arg.dx.data()) {
            prop_assert!(o.abs() <= a.abs() + 1e-15);
            prop_assert!(o.signum() * a.signum() >= 0.0);
        }
    }

    #[test]
    fn fusion_weight_is_scale_and_shift_invariant(
        data in prop::collection::vec(0.0f64..1.0, 16),
        shift in -0.4f64..0.4,
        scale in 0.1f64..5.0,
    ) {
        let f = ScalarField::from_data(4, 4, data).unwrap();
        prop_assume!(f.max_value() - f.min_value() > 1e-6);
        let chi = coarse::fusion_weight(&f);
        let chi_shift = coarse::fusion_weight(&f.map(|v| v + shift));
        let chi_scale = coarse::fusion_weight(&f.map(|v| scale * v));
        for k in 0..16 {
            prop_assert!((chi.data()[k] - chi_shift.data()[k]).abs() < 1e-8);
            prop_assert!((chi.data()[k] - chi_scale.data()[k]).abs() < 1e-8);
            prop_assert!(chi.data()[k] > 0.0 && chi.data()[k] < 1.0);
        }
    }

    #[test]
    fn synthesis_recovery_round_trip(
        data in prop::collection::vec(0.0f64..1.0, 48),
        tvals in prop::collection::vec(0.1f64..1.0, 48),
        ar in 0.3f64..1.0,
        ag in 0.3f64..1.0,
        ab in 0.3f64..1.0,
    ) {
        let clean = ColorImage::from_data(4, 4, data).unwrap();
        let t = [
            ScalarField::from_data(4, 4, tvals[..16].to_vec()).unwrap(),
            ScalarField::from_data(4, 4, tvals[16..32].to_vec()).unwrap(),
            ScalarField::from_data(4, 4, tvals[32..].to_vec()).unwrap(),
        ];
        let a = AtmosphericLight::new(ar, ag, ab).unwrap();
        let hazy = synthesize(&clean, &t, &a).unwrap();
        let back = recover(&hazy, &t, &a, 0.1).unwrap();
        for (x, y) in clean.data().iter().zip(back.data()) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn airlight_estimate_stays_in_bounds(
        data in prop::collection::vec(0.0f64..1.0, 75),
        frac in 0.001f64..1.0,
    ) {
        let img = ColorImage::from_data(5, 5, data).unwrap();
        let a = estimate_airlight(&img, 3, frac).unwrap();
        for c in 0..3 {
            prop_assert!(a.channel(c) >= 0.05 && a.channel(c) <= 1.0);
        }
    }
}
