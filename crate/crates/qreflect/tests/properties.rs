//! Randomized invariants of the closed-form layer and the fit.

use proptest::prelude::*;
use qreflect::asymptotics::{fit_asymptote, r2_nonequilibrium_asymptote};
use qreflect::units::incidence_from_velocity;
use qreflect::{Catalog, Constants};

fn rb_si() -> (Constants, qreflect::Pair) {
    let c = Constants::new();
    let pair = Catalog::builtin(&c).pair(&c, "Rb87", "Si").unwrap();
    (c, pair)
}

proptest! {
    #[test]
    fn c2_antisymmetric_under_swap(a in 0.0..2000.0f64, b in 0.0..2000.0f64) {
        let (c, pair) = rb_si();
        let fwd = pair.c2(&c, a, b).unwrap();
        let rev = pair.c2(&c, b, a).unwrap();
        prop_assert_eq!(fwd, -rev);
    }

    #[test]
    fn c3_doubles_with_temperature(t in 1e-3..2000.0f64) {
        let (c, pair) = rb_si();
        let one = pair.c3(&c, t).unwrap();
        let two = pair.c3(&c, 2.0 * t).unwrap();
        prop_assert_eq!(two, 2.0 * one);
    }

    #[test]
    fn incidence_round_trips(v in 1e-8..10.0f64, m_u in 1.0..300.0f64) {
        let c = Constants::new();
        let m = m_u * c.atomic_mass_unit;
        let inc = incidence_from_velocity(&c, v, m).unwrap();
        let v_back = c.hbar * inc.wavenumber / m;
        prop_assert!((v_back / v - 1.0).abs() < 1e-12);
        let e_back = c.hbar * c.hbar * inc.wavenumber * inc.wavenumber / (2.0 * m);
        prop_assert!((e_back / inc.energy - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fit_inverts_its_model(b_s_per_mm in 0.1..10.0f64, gamma in 1.0..10.0f64) {
        let b = b_s_per_mm * 1e3; // s/m
        // keep (b·v)^γ within (1e-4, 5) so |R|² stays strictly inside (0, 1)
        let bv_lo = 1e-4f64.powf(1.0 / gamma);
        let bv_hi = 5.0f64.powf(1.0 / gamma);
        let pts: Vec<(f64, f64)> = (0..9)
            .map(|i| {
                let bv = bv_lo * (bv_hi / bv_lo).powf(i as f64 / 8.0);
                let v = bv / b;
                (v, r2_nonequilibrium_asymptote(v, b, gamma).unwrap())
            })
            .collect();
        let fit = fit_asymptote(&pts).unwrap();
        prop_assert!((fit.gamma_fit / gamma - 1.0).abs() < 1e-6, "gamma {}", fit.gamma_fit);
        prop_assert!((fit.b_fit / b - 1.0).abs() < 1e-6, "b {}", fit.b_fit);
    }
}
