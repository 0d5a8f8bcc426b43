use std::sync::Arc;

use logsl_core::diagnostics::{fit_power_law, mass, profile_l1_distance};
use logsl_core::splitting::{dissipation_flow, log_flow, unwrap_phase};
use logsl_core::{gaussian_field, Grid1D, LieTrotter, PhysParams, SpectralPlan, WaveField};
use num_complex::Complex64;
use proptest::prelude::*;

fn grid() -> Arc<Grid1D> {
    Arc::new(Grid1D::new(-16.0, 16.0, 128).unwrap())
}

// Two chirped bumps; smooth and effectively periodic on the grid above.
fn bumps() -> impl Strategy<Value = WaveField> {
    (0.3f64..2.0, -4.0f64..4.0, -1.0f64..1.0, 0.0f64..1.5, -4.0f64..4.0, -3.0f64..3.0).prop_map(
        |(w1, c1, k1, amp2, c2, k2)| {
            WaveField::from_fn(grid(), |x| {
                Complex64::from_polar((-w1 * (x - c1) * (x - c1)).exp(), k1 * x)
                    + Complex64::from_polar(amp2 * (-(x - c2) * (x - c2) / 2.0).exp(), k2 * x + 0.3 * x * x)
            })
            .unwrap()
        },
    )
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_sub_flow_preserves_mass(f in bumps(), dt in 1e-4f64..0.5, lambda in -2.0f64..2.0,
                                     mu in 0.0f64..10.0, eps in 0.0f64..1e-2) {
        let m0 = mass(&f);
        let plan = SpectralPlan::new(grid());
        let mut a = f.clone();
        plan.kinetic_flow(&mut a, dt).unwrap();
        prop_assert!(rel(mass(&a), m0) < 1e-12);
        let mut b = f.clone();
        log_flow(&mut b, dt, lambda, eps);
        prop_assert!(rel(mass(&b), m0) < 1e-12);
        let mut c = f.clone();
        dissipation_flow(&mut c, dt, mu);
        prop_assert!(rel(mass(&c), m0) < 1e-12);
        let mut d = f;
        let params = PhysParams::new(lambda, mu, eps).unwrap();
        LieTrotter::new(grid(), params, dt).unwrap().step(&mut d).unwrap();
        prop_assert!(rel(mass(&d), m0) < 1e-12);
    }

    #[test]
    fn pointwise_flows_keep_the_modulus(f in bumps(), dt in 1e-4f64..1.0, lambda in -2.0f64..2.0,
                                        mu in 0.0f64..10.0) {
        let mut b = f.clone();
        log_flow(&mut b, dt, lambda, 1e-3);
        let mut c = f.clone();
        dissipation_flow(&mut c, dt, mu);
        for ((u, v), w) in f.values().iter().zip(b.values()).zip(c.values()) {
            prop_assert!((u.norm() - v.norm()).abs() <= 1e-14 * (1.0 + u.norm()));
            prop_assert!((u.norm() - w.norm()).abs() <= 1e-14 * (1.0 + u.norm()));
        }
    }

    #[test]
    fn kinetic_flow_is_a_group(f in bumps(), dt1 in -1.0f64..1.0, dt2 in -1.0f64..1.0) {
        let plan = SpectralPlan::new(grid());
        let mut two = f.clone();
        plan.kinetic_flow(&mut two, dt1).unwrap();
        plan.kinetic_flow(&mut two, dt2).unwrap();
        let mut one = f.clone();
        plan.kinetic_flow(&mut one, dt1 + dt2).unwrap();
        for (a, b) in two.values().iter().zip(one.values()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
        plan.kinetic_flow(&mut one, -(dt1 + dt2)).unwrap();
        for (a, b) in one.values().iter().zip(f.values()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn parseval(f in bumps()) {
        let plan = SpectralPlan::new(grid());
        let spec = plan.forward(f.values()).unwrap();
        prop_assert!(rel(plan.spectral_norm_sqr(&spec), mass(&f)) < 1e-12);
    }

    #[test]
    fn l1_distance_is_a_metric(a in bumps(), b in bumps(), c in bumps()) {
        let g = grid();
        let (ra, rb, rc) = (a.density(), b.density(), c.density());
        let ab = profile_l1_distance(&g, &ra, &rb).unwrap();
        let bc = profile_l1_distance(&g, &rb, &rc).unwrap();
        let ac = profile_l1_distance(&g, &ra, &rc).unwrap();
        prop_assert!(ac <= ab + bc + 1e-12);
        prop_assert!((ab - profile_l1_distance(&g, &rb, &ra).unwrap()).abs() < 1e-15);
        prop_assert!(profile_l1_distance(&g, &ra, &ra).unwrap() == 0.0);
    }

    #[test]
    fn power_law_fit_recovers_constructed_laws(coeff in 0.01f64..100.0, p in -2.0f64..2.0) {
        let t: Vec<f64> = (1..=200).map(|k| k as f64 * 5.0).collect();
        let v: Vec<f64> = t.iter().map(|t| coeff * t.powf(p)).collect();
        let fit = fit_power_law(&t, &v, (10.0, 1000.0)).unwrap();
        prop_assert!((fit.exponent - p).abs() < 1e-10);
        prop_assert!(rel(fit.coeff, coeff) < 1e-9);
    }

    #[test]
    fn unwrap_recovers_a_smooth_phase_up_to_a_constant(k in -3.0f64..3.0, q in -0.3f64..0.3, s in -3.0f64..3.0) {
        // The phase increment per cell stays below π on this grid.
        let g = Arc::new(Grid1D::new(-4.0, 4.0, 256).unwrap());
        let phase = |x: f64| s + k * x + q * x * x;
        let f = WaveField::from_fn(g.clone(), |x| Complex64::from_polar((-x * x / 8.0).exp(), phase(x))).unwrap();
        let lift = unwrap_phase(&f);
        let offset = lift[0] - phase(g.points()[0]);
        prop_assert!((offset / std::f64::consts::TAU - (offset / std::f64::consts::TAU).round()).abs() < 1e-9);
        for (x, th) in g.points().iter().zip(&lift) {
            prop_assert!((th - phase(*x) - offset).abs() < 1e-9);
        }
    }

    // ε = 0: the logarithmic force of κψ differs from that of ψ by a
    // space-independent phase, so the modulus scales exactly.
    #[test]
    fn scaling_the_data_scales_the_modulus(kappa in 0.2f64..5.0, lambda in -1.0f64..1.0, mu in 0.0f64..2.0) {
        let g = Arc::new(Grid1D::new(-12.0, 12.0, 128).unwrap());
        let one = Complex64::new(1.0, 0.0);
        let f = gaussian_field(g.clone(), one, Complex64::new(1.0, 0.3), 0.0).unwrap();
        let params = PhysParams::new(lambda, mu, 0.0).unwrap();
        let mut a = f.clone();
        let mut b = f.scaled(kappa);
        let mut sa = LieTrotter::new(g.clone(), params, 1e-2).unwrap();
        let mut sb = LieTrotter::new(g, params, 1e-2).unwrap();
        for _ in 0..100 {
            sa.step(&mut a).unwrap();
            sb.step(&mut b).unwrap();
        }
        for (u, v) in a.values().iter().zip(b.values()) {
            if u.norm() > 1e-6 {
                prop_assert!(rel(v.norm(), kappa * u.norm()) < 1e-8);
            }
        }
    }
}
