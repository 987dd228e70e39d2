//! Shape and ordering regressions for the published curve families, which
//! are only available graphically: check ordering and monotonicity, not
//! point-wise values.

use qreflect::scattering::{reflection_coefficient, tabulated_for};
use qreflect::units::incidence_from_velocity;
use qreflect::{Catalog, Constants, Model, Problem, Settings};

fn model(t_s: f64, t_e: f64) -> Model {
    let c = Constants::new();
    let pair = Catalog::builtin(&c).pair(&c, "Rb87", "Si").unwrap();
    Model::new(c, pair, t_s, t_e).unwrap()
}

#[test]
fn potential_curves_stack_in_published_order() {
    // at 3 µm, top to bottom: (T_S=300, T_E=1200), (0,0), (300,300), (1200,300)
    let r = 3e-6;
    let u: Vec<f64> = [(300.0, 1200.0), (0.0, 0.0), (300.0, 300.0), (1200.0, 300.0)]
        .iter()
        .map(|&(ts, te)| model(ts, te).u_full(r).unwrap())
        .collect();
    assert!(u[0] > 0.0, "non-equilibrium curve repulsive at 3 µm");
    for w in u.windows(2) {
        assert!(w[0] > w[1], "ordering violated: {:?}", u);
    }
    // equilibrium curves attractive across the plotted range
    for ts_te in [(0.0, 0.0), (300.0, 300.0)] {
        let m = model(ts_te.0, ts_te.1);
        for r in [5e-8, 5e-7, 5e-6, 3e-5] {
            assert!(m.u_full(r).unwrap() < 0.0);
        }
    }
}

#[test]
fn reflection_curves_stack_and_fall() {
    let settings = Settings::default();
    let cases = [(300.0, 1200.0), (0.0, 0.0), (300.0, 300.0)];
    let m0 = model(300.0, 1200.0);
    let beta4 = m0.pair.beta4(&m0.constants);
    let mass = m0.pair.species.mass;
    let hbar = m0.constants.hbar;
    let velocities: Vec<f64> = [0.3, 0.8, 2.0]
        .iter()
        .map(|kb4| kb4 / beta4 * hbar / mass)
        .collect();
    let mut curves = Vec::new();
    for (ts, te) in cases {
        let m = tabulated_for(model(ts, te), velocities[0], &settings, 48).unwrap();
        let mut row = Vec::new();
        for &v in &velocities {
            let inc = incidence_from_velocity(&m.constants, v, mass).unwrap();
            let res =
                reflection_coefficient(&Problem::new(m.clone(), inc).unwrap(), &settings).unwrap();
            row.push(res.probability);
        }
        curves.push(row);
    }
    for j in 0..velocities.len() {
        // hotter environment above zero-temperature above room equilibrium
        assert!(
            curves[0][j] > curves[1][j] && curves[1][j] > curves[2][j],
            "ordering at v index {j}: {:?}",
            curves.iter().map(|c| c[j]).collect::<Vec<_>>()
        );
    }
    for row in &curves {
        // S-shape: each curve decreases with velocity
        assert!(row[0] > row[1] && row[1] > row[2], "{row:?}");
    }
}

#[test]
fn s_curve_passes_through_midrange_at_barrier_scale() {
    let settings = Settings::default();
    let m = model(300.0, 1200.0);
    let beta4 = m.pair.beta4(&m.constants);
    let mass = m.pair.species.mass;
    let v = 1.21 / beta4 * m.constants.hbar / mass;
    let m = tabulated_for(m, v, &settings, 48).unwrap();
    let inc = incidence_from_velocity(&m.constants, v, mass).unwrap();
    let res = reflection_coefficient(&Problem::new(m, inc).unwrap(), &settings).unwrap();
    assert!(
        res.probability > 0.05 && res.probability < 0.95,
        "|R|² = {} at (k_iβ₄)_bar",
        res.probability
    );
}

#[test]
fn reflection_approaches_unity_at_vanishing_velocity() {
    let settings = Settings::default();
    let m = model(0.0, 0.0);
    let beta4 = m.pair.beta4(&m.constants);
    let mass = m.pair.species.mass;
    let v = 1e-4 / beta4 * m.constants.hbar / mass;
    let m = tabulated_for(m, v, &settings, 48).unwrap();
    let inc = incidence_from_velocity(&m.constants, v, mass).unwrap();
    let res = reflection_coefficient(&Problem::new(m, inc).unwrap(), &settings).unwrap();
    assert!(res.probability > 0.999, "|R|² = {}", res.probability);
}

#[test]
fn lighter_species_reflect_more_efficiently() {
    let settings = Settings::default();
    let c = Constants::new();
    let cat = Catalog::builtin(&c);
    let rb = Model::new(c, cat.pair(&c, "Rb87", "Si").unwrap(), 300.0, 1200.0).unwrap();
    let hes = Model::new(c, cat.pair(&c, "He*", "Si").unwrap(), 300.0, 1200.0).unwrap();
    let e = 2.0 * rb.find_barrier().unwrap().u_bar;
    let mut probs = Vec::new();
    for m in [rb, hes] {
        let mass = m.pair.species.mass;
        let v = (2.0 * e / mass).sqrt();
        let m = tabulated_for(m, v, &settings, 48).unwrap();
        let inc = incidence_from_velocity(&c, v, mass).unwrap();
        let res = reflection_coefficient(&Problem::new(m, inc).unwrap(), &settings).unwrap();
        probs.push(res.probability);
    }
    assert!(probs[1] > probs[0], "He* {} vs Rb {}", probs[1], probs[0]);
}
