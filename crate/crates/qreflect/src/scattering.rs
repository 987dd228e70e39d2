//! One-dimensional Schrödinger scattering on the tabulated potential:
//! WKB boundary matching far outside and deep inside, exact integration in
//! between, quantum reflection amplitude from a 2×2 projection.

use crate::error::{Error, Result};
use crate::ode::integrate_wave;
use crate::potential::PotentialModel;
use crate::real::Real;
use crate::units::Incidence;
use num_complex::Complex;
use rayon::prelude::*;

#[derive(Debug, Clone, Copy)]
pub struct SolverSettings<R> {
    /// WKB-validity bound on |d(ħ/p)/dr| at the matching points
    pub badlands_threshold: R,
    /// r_inner requires U < −inner_depth_ratio·E
    pub inner_depth_ratio: R,
    /// r_outer requires |U| < outer_smallness·E
    pub outer_smallness: R,
    /// local relative tolerance of the wave integrator
    pub step_rel_tol: R,
}

impl<R: Real> Default for SolverSettings<R> {
    fn default() -> Self {
        SolverSettings {
            badlands_threshold: R::of(1e-3),
            inner_depth_ratio: R::of(100.0),
            outer_smallness: R::of(1e-6),
            step_rel_tol: R::of(1e-10),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScatteringProblem<R> {
    pub model: PotentialModel<R>,
    pub incidence: Incidence<R>,
}

#[derive(Debug, Clone, Copy)]
pub enum LocalMomentum<R> {
    /// classically allowed: p = √(2m(E−U))
    Allowed(R),
    /// under the barrier: magnitude √(2m(U−E))
    Forbidden(R),
}

#[derive(Debug, Clone, Copy)]
pub struct ReflectionResult<R> {
    pub amplitude: Complex<R>,
    /// |R|², clipped to [0, 1]
    pub probability: R,
    /// |R|² before the unitarity clip
    pub probability_raw: R,
    pub r_inner: R,
    pub r_outer: R,
    pub badlands_at_matches: (R, R),
    /// |Δ|R|²| under simultaneous matching-point and tolerance refinement
    pub convergence_estimate: R,
    pub converged: bool,
}

impl<R: Real> ScatteringProblem<R> {
    pub fn new(model: PotentialModel<R>, incidence: Incidence<R>) -> Result<Self> {
        if !(incidence.energy > R::zero()) {
            return Err(Error::domain(
                "scattering requires E > 0; the v → 0 limit is covered by the asymptotic laws",
            ));
        }
        Ok(ScatteringProblem { model, incidence })
    }

    pub fn mass(&self) -> R {
        self.model.pair.species.mass
    }

    pub fn local_momentum(&self, r: R) -> Result<LocalMomentum<R>> {
        let u = self.model.u_full(r)?;
        let p2 = R::of(2.0) * self.mass() * (self.incidence.energy - u);
        if p2 > R::zero() {
            Ok(LocalMomentum::Allowed(p2.sqrt()))
        } else {
            Ok(LocalMomentum::Forbidden((-p2).sqrt()))
        }
    }

    /// |d(ħ/p)/dr| = ħm|U′|/p³, the local-wavelength variation measure.
    pub fn badlands(&self, r: R) -> Result<R> {
        let table = self
            .model
            .table
            .as_ref()
            .ok_or_else(|| Error::Matching("potential not tabulated".into()))?;
        let (u, du) = table.value_and_derivative(r)?;
        badlands_from(self.mass(), self.model.constants.hbar, self.incidence.energy, u, du)
            .ok_or_else(|| Error::domain("badlands undefined in the classically forbidden region"))
    }
}

fn badlands_from<R: Real>(m: R, hbar: R, e: R, u: R, du: R) -> Option<R> {
    let p2 = R::of(2.0) * m * (e - u);
    if p2 <= R::zero() {
        return None;
    }
    Some(hbar * m * du.abs() / (p2 * p2.sqrt()))
}

/// Radius range a table must cover for the given lowest energy: the outer
/// bound is where the slowest-decaying tail falls below outer_smallness·E,
/// with margin for the matching-point scan and the convergence probe.
pub fn required_table_range<R: Real>(
    model: &PotentialModel<R>,
    min_energy: R,
    settings: &SolverSettings<R>,
) -> Result<(R, R)> {
    if !(min_energy > R::zero()) {
        return Err(Error::domain("required_table_range needs E > 0"));
    }
    let e_small = settings.outer_smallness * min_energy;
    let c4 = model.pair.c4;
    let c3 = model.pair.c3(&model.constants, model.t_e)?;
    let c2 = model.c2().abs();
    let r_c4 = (c4 / e_small).powf(R::of(0.25));
    let r_c3 = (c3 / e_small).powf(R::of(1.0 / 3.0));
    let r_c2 = if c2 > R::zero() {
        (c2 / e_small).sqrt()
    } else {
        R::zero()
    };
    let r_max = R::of(8.0) * r_c4.max(r_c3).max(r_c2).max(R::of(1e-4));
    // Deep in the vdW region the badlands measure grows like
    // (3/(2√2))·ħ√(lr)/√(mC4); the inner matching point must sit where it is
    // still below threshold, which moves inward for light or weakly
    // polarizable species.
    let l = model.pair.species.transition_length;
    let beta4 = model.pair.beta4(&model.constants);
    let r_badlands = (settings.badlands_threshold * beta4 / R::of(1.5)).powi(2) / l;
    let r_min = (r_badlands / R::of(32.0)).min(R::of(1e-12));
    Ok((r_min, r_max))
}

/// Tabulate `model` over the range needed for every velocity ≥ `min_velocity`.
pub fn tabulated_for<R: Real>(
    model: PotentialModel<R>,
    min_velocity: R,
    settings: &SolverSettings<R>,
    points_per_decade: usize,
) -> Result<PotentialModel<R>> {
    let m = model.pair.species.mass;
    let e_min = R::of(0.5) * m * min_velocity * min_velocity;
    let (r_min, r_max) = required_table_range(&model, e_min, settings)?;
    model.tabulated(r_min, r_max, points_per_decade)
}

struct WkbWave<R> {
    amp: R,
    /// logarithmic-derivative real part, −p′/(2p)
    env: R,
    /// local wavenumber p/ħ
    k: R,
}

fn wkb_at<R: Real>(m: R, hbar: R, e: R, u: R, du: R) -> Result<WkbWave<R>> {
    let p2 = R::of(2.0) * m * (e - u);
    if !(p2 > R::zero()) {
        return Err(Error::Matching(
            "matching point fell in a classically forbidden region".into(),
        ));
    }
    let p = p2.sqrt();
    let dp = -m * du / p;
    Ok(WkbWave {
        amp: R::one() / p.sqrt(),
        env: -dp / (R::of(2.0) * p),
        k: p / hbar,
    })
}

fn solve_once<R: Real>(
    model: &PotentialModel<R>,
    e: R,
    r_in: R,
    r_out: R,
    rel_tol: R,
) -> Result<(Complex<R>, R)> {
    let table = model
        .table
        .as_ref()
        .ok_or_else(|| Error::Matching("potential not tabulated".into()))?;
    let m = model.pair.species.mass;
    let hbar = model.constants.hbar;
    let fac = R::of(2.0) * m / (hbar * hbar);
    // incoming-only (surface-directed) WKB wave at r_in: full absorption
    let (u_in, du_in) = table.value_and_derivative(r_in)?;
    let w = wkb_at(m, hbar, e, u_in, du_in)?;
    let y0 = [
        Complex::new(w.amp, R::zero()),
        Complex::new(w.amp * w.env, -w.amp * w.k),
    ];
    let rhs = |r: R, y: &[Complex<R>; 2]| {
        let (u, _) = table
            .value_and_derivative(r)
            .unwrap_or((R::zero(), R::zero()));
        [y[1], Complex::new(fac * (u - e), R::zero()) * y[0]]
    };
    let y = integrate_wave(rhs, r_in, r_out, y0, rel_tol)?;
    // project (u, u') onto the local in/out WKB pair at r_out
    let (u_out, du_out) = table.value_and_derivative(r_out)?;
    let w = wkb_at(m, hbar, e, u_out, du_out)?;
    let f = Complex::new(w.amp, R::zero());
    let df_in = Complex::new(w.amp * w.env, -w.amp * w.k);
    let df_out = Complex::new(w.amp * w.env, w.amp * w.k);
    let det = f * df_out - f * df_in;
    let a_in = (y[0] * df_out - f * y[1]) / det;
    let a_out = (f * y[1] - y[0] * df_in) / det;
    if a_in.norm() == R::zero() {
        return Err(Error::Matching("vanishing incoming amplitude".into()));
    }
    let amp = a_out / a_in;
    Ok((amp, amp.norm_sqr()))
}

pub fn reflection_coefficient<R: Real>(
    problem: &ScatteringProblem<R>,
    settings: &SolverSettings<R>,
) -> Result<ReflectionResult<R>> {
    let model = &problem.model;
    let beta4 = model.pair.beta4(&model.constants);
    let kb4 = problem.incidence.wavenumber * beta4;
    if kb4 < R::of(1e-5) {
        return Err(Error::domain(format!(
            "k_i·β₄ = {:e} is below 1e-5; use the analytic low-velocity asymptote instead",
            kb4
        )));
    }
    let table = model
        .table
        .as_ref()
        .ok_or_else(|| Error::Matching("potential not tabulated".into()))?;
    let e = problem.incidence.energy;
    let m = problem.mass();
    let hbar = model.constants.hbar;
    let bl = settings.badlands_threshold;
    let n = table.len();
    // contiguous prefix of nodes that are deep and WKB-clean
    let mut i_in: Option<usize> = None;
    for i in 0..n {
        let r = table.radius(i);
        let (u, du) = table.value_and_derivative(r)?;
        let deep = u < -settings.inner_depth_ratio * e;
        let clean = badlands_from(m, hbar, e, u, du).map_or(false, |b| b < bl);
        if deep && clean {
            i_in = Some(i);
        } else {
            break;
        }
    }
    // contiguous suffix of nodes that are free and WKB-clean
    let mut i_out: Option<usize> = None;
    for i in (0..n).rev() {
        let r = table.radius(i);
        let (u, du) = table.value_and_derivative(r)?;
        let free = u.abs() < settings.outer_smallness * e;
        let clean = badlands_from(m, hbar, e, u, du).map_or(false, |b| b < bl);
        if free && clean {
            i_out = Some(i);
        } else {
            break;
        }
    }
    let (i_in, i_out) = match (i_in, i_out) {
        (Some(a), Some(b)) if a < b => (a, b),
        _ => {
            return Err(Error::Matching(format!(
                "no admissible matching points on the table grid \
                 (E = {:e} J; extend the tabulated range or adjust thresholds)",
                e
            )))
        }
    };
    let r_in = table.radius(i_in) / R::of(4.0);
    let r_out = table.radius(i_out) * R::of(2.0);
    if r_in / R::of(2.0) < table.r_min || r_out * R::of(2.0) > table.r_max {
        return Err(Error::Matching(
            "matching points too close to the table edges for the convergence probe".into(),
        ));
    }
    let (amp, raw) = solve_once(model, e, r_in, r_out, settings.step_rel_tol)?;
    let (_, raw_probe) = solve_once(
        model,
        e,
        r_in / R::of(2.0),
        r_out * R::of(2.0),
        settings.step_rel_tol * R::of(0.5),
    )?;
    let convergence_estimate = (raw - raw_probe).abs();
    let b_in = problem.badlands(r_in)?;
    let b_out = problem.badlands(r_out)?;
    Ok(ReflectionResult {
        amplitude: amp,
        probability: raw.min(R::one()).max(R::zero()),
        probability_raw: raw,
        r_inner: r_in,
        r_outer: r_out,
        badlands_at_matches: (b_in, b_out),
        convergence_estimate,
        converged: convergence_estimate < R::of(1e-4),
    })
}

/// Independent per-velocity solves; failures are collected, not fatal.
pub fn reflection_curve<R: Real>(
    model: &PotentialModel<R>,
    velocities: &[R],
    settings: &SolverSettings<R>,
) -> Result<Vec<(R, Result<ReflectionResult<R>>)>> {
    if velocities.is_empty() {
        return Err(Error::domain("velocity list is empty"));
    }
    if velocities.windows(2).any(|w| w[1] <= w[0]) || velocities[0] <= R::zero() {
        return Err(Error::domain("velocities must be positive and strictly increasing"));
    }
    let constants = model.constants;
    Ok(velocities
        .par_iter()
        .map(|&v| {
            let result = crate::units::incidence_from_velocity(
                &constants,
                v,
                model.pair.species.mass,
            )
            .and_then(|incidence| {
                let problem = ScatteringProblem {
                    model: model.clone(),
                    incidence,
                };
                reflection_coefficient(&problem, settings)
            });
            (v, result)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::Catalog;
    use crate::units::{incidence_from_velocity, PhysicalConstants};

    fn rb_model(t_s: f64, t_e: f64) -> PotentialModel<f64> {
        let c = PhysicalConstants::new();
        let pair = Catalog::builtin(&c).pair(&c, "Rb87", "Si").unwrap();
        PotentialModel::new(c, pair, t_s, t_e).unwrap()
    }

    fn velocity_for_kb4(model: &PotentialModel<f64>, kb4: f64) -> f64 {
        let beta4 = model.pair.beta4(&model.constants);
        kb4 / beta4 * model.constants.hbar / model.pair.species.mass
    }

    #[test]
    fn zero_temperature_exponential_law() {
        let settings = SolverSettings::default();
        let model = rb_model(0.0, 0.0);
        let v = velocity_for_kb4(&model, 0.02);
        let model = tabulated_for(model, v, &settings, 48).unwrap();
        let c = model.constants;
        let inc = incidence_from_velocity(&c, v, model.pair.species.mass).unwrap();
        let problem = ScatteringProblem::new(model, inc).unwrap();
        let res = reflection_coefficient(&problem, &settings).unwrap();
        assert!(res.converged, "estimate {:e}", res.convergence_estimate);
        let ln_r2 = res.probability_raw.ln();
        assert!(
            (ln_r2 / (-4.0 * 0.02) - 1.0).abs() < 0.05,
            "ln|R|² = {ln_r2}, expected ≈ {}",
            -4.0 * 0.02
        );
    }

    #[test]
    fn rejects_vanishing_velocity() {
        let settings = SolverSettings::default();
        let model = rb_model(0.0, 0.0);
        let v = velocity_for_kb4(&model, 0.02);
        let model = tabulated_for(model, v, &settings, 48).unwrap();
        let c = model.constants;
        let v_tiny = velocity_for_kb4(&model, 1e-6);
        let inc = incidence_from_velocity(&c, v_tiny, model.pair.species.mass).unwrap();
        let problem = ScatteringProblem::new(model, inc).unwrap();
        assert!(reflection_coefficient(&problem, &settings).is_err());
    }

    #[test]
    fn rejects_untabulated_model() {
        let settings = SolverSettings::default();
        let model = rb_model(0.0, 0.0);
        let v = velocity_for_kb4(&model, 0.1);
        let c = model.constants;
        let inc = incidence_from_velocity(&c, v, model.pair.species.mass).unwrap();
        let problem = ScatteringProblem::new(model, inc).unwrap();
        assert!(reflection_coefficient(&problem, &settings).is_err());
    }

    #[test]
    fn local_momentum_and_badlands() {
        let settings = SolverSettings::default();
        let model = rb_model(0.0, 0.0);
        let v = velocity_for_kb4(&model, 0.1);
        let model = tabulated_for(model, v, &settings, 48).unwrap();
        let c = model.constants;
        let m = model.pair.species.mass;
        let inc = incidence_from_velocity(&c, v, m).unwrap();
        let problem = ScatteringProblem::new(model, inc).unwrap();
        // far away: p ≈ ħ k_i, badlands tiny
        let r_far = 1e-3;
        match problem.local_momentum(r_far).unwrap() {
            LocalMomentum::Allowed(p) => {
                assert!((p / (c.hbar * inc.wavenumber) - 1.0).abs() < 1e-4)
            }
            LocalMomentum::Forbidden(_) => panic!("free region flagged forbidden"),
        }
        assert!(problem.badlands(r_far).unwrap() < 1e-6);
        // deep region: p ≫ ħ k_i; badlands ∝ √r makes WKB excellent again
        let r_deep = 1e-11;
        match problem.local_momentum(r_deep).unwrap() {
            LocalMomentum::Allowed(p) => assert!(p > 100.0 * c.hbar * inc.wavenumber),
            LocalMomentum::Forbidden(_) => panic!("deep well flagged forbidden"),
        }
        assert!(problem.badlands(r_deep).unwrap() < 1e-3);
    }

    #[test]
    fn forbidden_region_under_barrier() {
        let settings = SolverSettings::default();
        let model = rb_model(300.0, 1200.0);
        let bar = model.find_barrier().unwrap();
        assert!(bar.exists);
        // inject below the barrier: its top is classically forbidden
        let e = 0.5 * bar.u_bar;
        let m = model.pair.species.mass;
        let v = (2.0 * e / m).sqrt();
        let model = tabulated_for(model, v, &settings, 48).unwrap();
        let c = model.constants;
        let inc = incidence_from_velocity(&c, v, m).unwrap();
        let problem = ScatteringProblem::new(model, inc).unwrap();
        match problem.local_momentum(bar.r_bar).unwrap() {
            LocalMomentum::Forbidden(p) => assert!(p > 0.0),
            LocalMomentum::Allowed(_) => panic!("barrier top should be forbidden at E < U_bar"),
        }
        assert!(problem.badlands(bar.r_bar).is_err());
    }

    #[test]
    fn curve_matches_single_point_and_checks_input() {
        let settings = SolverSettings::default();
        let model = rb_model(0.0, 0.0);
        let v = velocity_for_kb4(&model, 0.1);
        let model = tabulated_for(model, v, &settings, 48).unwrap();
        let curve = reflection_curve(&model, &[v], &settings).unwrap();
        assert_eq!(curve.len(), 1);
        let single = curve[0].1.as_ref().unwrap();
        let c = model.constants;
        let inc = incidence_from_velocity(&c, v, model.pair.species.mass).unwrap();
        let problem = ScatteringProblem::new(model.clone(), inc).unwrap();
        let direct = reflection_coefficient(&problem, &settings).unwrap();
        assert_eq!(single.probability_raw, direct.probability_raw);
        assert!(reflection_curve(&model, &[], &settings).is_err());
        assert!(reflection_curve(&model, &[2e-3, 1e-3], &settings).is_err());
    }
}
