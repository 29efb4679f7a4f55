use evanescent::fields::{linspace, Density, EvanescentField};
use evanescent::propagator::{correlation_quadrature, SpacetimeSeparation};
use evanescent::WaveguideConfig;
use num_complex::Complex64;
use proptest::prelude::*;

fn guide(kc_l: f64) -> WaveguideConfig {
    WaveguideConfig::normalized(kc_l, 0.5).unwrap()
}

proptest! {
    #[test]
    fn unitarity(frac in 0.001f64..0.999, kc_l in 0.01f64..60.0) {
        let s = guide(kc_l).mode_at_fraction(frac).unwrap().scatter();
        prop_assert!(s.t2 > 0.0 && s.t2 < 1.0);
        prop_assert!((s.t2 + s.r2 - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn amplitude_invariance_of_velocity(frac in 0.01f64..0.99, zf in 0.01f64..0.99, h0 in prop_oneof![-1e3f64..-1e-3, 1e-3f64..1e3]) {
        let f = EvanescentField::new(guide(2.0).mode_at_fraction(frac).unwrap());
        let g = f.with_amplitude(h0);
        for d in Density::ALL {
            let a = f.transport(2.0 * zf).unwrap().velocity(d);
            let b = g.transport(2.0 * zf).unwrap().velocity(d);
            prop_assert!((a - b).abs() <= 1e-14 * a.abs());
        }
    }

    #[test]
    fn full_density_is_slower_and_subluminal(frac in 0.001f64..0.999, zf in 0.001f64..0.999, kc_l in 0.05f64..20.0) {
        let f = EvanescentField::new(guide(kc_l).mode_at_fraction(frac).unwrap());
        let tr = f.transport(kc_l * zf).unwrap();
        let (full, variant) = (tr.velocity_ratio(Density::Full), tr.velocity_ratio(Density::Variant));
        prop_assert!(full > 0.0 && full <= variant);
        prop_assert!(variant <= 1.0 + 1e-9);
        prop_assert!(tr.energy_full >= tr.energy_variant && tr.energy_variant >= 0.0);
    }

    #[test]
    fn correlation_scaling_covariance(t in 0.0f64..20.0, z in 0.0f64..20.0, lambda in 0.25f64..4.0) {
        let tol = 1e-13;
        let base = correlation_quadrature(&SpacetimeSeparation::new(t, z).unwrap(), 1.0, tol).unwrap();
        let scaled = correlation_quadrature(&SpacetimeSeparation::new(t / lambda, z / lambda).unwrap(), lambda, tol).unwrap();
        let err = (scaled.g - base.g * (lambda * lambda)).norm();
        prop_assert!(err <= scaled.est_error + lambda * lambda * base.est_error + 1e-14 * scaled.g.norm());
    }
}

#[test]
fn continuity_identities_on_grid() {
    let i = Complex64::i();
    let mut checked = 0;
    for kc_l in [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 25.0] {
        for frac in linspace(0.01, 0.99, 25) {
            let m = guide(kc_l).mode_at_fraction(frac).unwrap();
            let s = m.scatter();
            let value = s.interior_sum(kc_l);
            let slope = -m.beta * s.interior_difference(kc_l);
            let exterior = s.transmitted(kc_l);
            assert!((value - exterior).norm() <= 1e-10 * exterior.norm(), "{kc_l} {frac}");
            let ext_slope = i * m.k * exterior;
            assert!((slope - ext_slope).norm() <= 1e-10 * ext_slope.norm(), "{kc_l} {frac}");
            checked += 1;
        }
    }
    assert!(checked >= 100);
}

#[test]
fn transmission_decreases_with_length() {
    for frac in linspace(0.02, 0.98, 25) {
        let mut last = 1.0;
        for kc_l in linspace(0.05, 30.0, 120) {
            let t2 = guide(kc_l).mode_at_fraction(frac).unwrap().scatter().t2;
            assert!(t2 < last, "frac={frac} kcL={kc_l}");
            last = t2;
        }
    }
}

#[test]
fn decay_constant_decreases_with_frequency() {
    let g = guide(1.0);
    let mut last = f64::INFINITY;
    for frac in linspace(1e-4, 1.0 - 1e-4, 500) {
        let beta = g.mode_at_fraction(frac).unwrap().beta;
        assert!(beta < last);
        last = beta;
    }
}

#[test]
fn velocity_peaks_at_exit() {
    for kc_l in [0.5, 2.0, 10.0] {
        for frac in [0.05, 0.5, 0.95] {
            let f = EvanescentField::new(guide(kc_l).mode_at_fraction(frac).unwrap());
            for d in Density::ALL {
                let mut last = 0.0;
                for zf in linspace(0.01, 0.99, 50) {
                    let v = f.transport(kc_l * zf).unwrap().velocity(d);
                    assert!(v >= last, "{kc_l} {frac} {d}");
                    last = v;
                }
            }
        }
    }
}

#[test]
fn field_integrated_power_is_constant_along_barrier() {
    for kc_l in [0.5, 5.0, 10.0] {
        for frac in [0.01, 0.5, 0.99] {
            let f = EvanescentField::new(guide(kc_l).mode_at_fraction(frac).unwrap());
            let p: Vec<f64> = linspace(0.01, 0.99, 20)
                .into_iter()
                .map(|zf| f.field_integrals(kc_l * zf, 64).unwrap().power)
                .collect();
            let (lo, hi) = p.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &x| (lo.min(x), hi.max(x)));
            assert!((hi - lo) / hi < 1e-10, "kcL={kc_l} frac={frac}");
        }
    }
}
