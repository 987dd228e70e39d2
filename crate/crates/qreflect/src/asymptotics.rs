//! Analytic low-velocity reflection laws, the exponent γ = √(1+4β₀), and
//! extraction of (γ, b) from numerical reflection curves.

use crate::error::{Error, Result};
use crate::materials::AtomSurfacePair;
use crate::potential::BarrierInfo;
use crate::real::Real;
use crate::units::PhysicalConstants;

#[derive(Debug, Clone, Copy)]
pub struct AsymptoteFit<R> {
    pub gamma_fit: R,
    /// s/m
    pub b_fit: R,
    /// velocity interval actually used (m/s)
    pub fit_window: (R, R),
    /// RMS residual in ln(−ln|R|²) space
    pub residual: R,
    pub n_points: usize,
}

/// Equilibrium low-velocity law |R|² = exp(−4 k_i β₄).
pub fn r2_equilibrium_asymptote<R: Real>(k_i_beta4: R) -> Result<R> {
    if k_i_beta4 < R::zero() {
        return Err(Error::domain("k_i·β₄ must be non-negative"));
    }
    Ok((-R::of(4.0) * k_i_beta4).exp())
}

/// γ = √(1+4β₀) for a hotter environment; 1 (the pure-exponential regime)
/// when T_E ≤ T_S, where the C2 tail is absent or attractive.
pub fn gamma_analytic<R: Real>(
    pair: &AtomSurfacePair<R>,
    constants: &PhysicalConstants<R>,
    t_s: R,
    t_e: R,
) -> Result<R> {
    if t_e <= t_s {
        return Ok(R::one());
    }
    let beta0 = pair.beta0(constants, t_s, t_e)?;
    Ok((R::one() + R::of(4.0) * beta0).sqrt())
}

/// Non-equilibrium low-velocity law |R|² = exp(−(b·v)^γ).
pub fn r2_nonequilibrium_asymptote<R: Real>(v: R, b: R, gamma: R) -> Result<R> {
    if v < R::zero() {
        return Err(Error::domain("velocity must be non-negative"));
    }
    if !(b > R::zero()) {
        return Err(Error::domain("b must be positive"));
    }
    if gamma < R::one() {
        return Err(Error::domain("gamma must be at least 1"));
    }
    if v == R::zero() {
        return Ok(R::one());
    }
    Ok((-(b * v).powf(gamma)).exp())
}

/// Least-squares line in (ln v, ln(−ln|R|²)): slope = γ, intercept = γ·ln b.
/// Points with |R|² at exactly 0 or 1 are excluded; at least 5 admissible
/// points are required.
pub fn fit_asymptote<R: Real>(points: &[(R, R)]) -> Result<AsymptoteFit<R>> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut v_lo = R::infinity();
    let mut v_hi = R::zero();
    for &(v, r2) in points {
        if !(v > R::zero()) || !(r2 > R::zero()) || !(r2 < R::one()) {
            continue;
        }
        xs.push(v.ln());
        ys.push((-r2.ln()).ln());
        v_lo = v_lo.min(v);
        v_hi = v_hi.max(v);
    }
    let n = xs.len();
    if n < 5 {
        return Err(Error::Fit(format!(
            "need at least 5 admissible points, got {n}"
        )));
    }
    let nf = R::of(n as f64);
    let mut sx = R::zero();
    let mut sy = R::zero();
    for i in 0..n {
        sx = sx + xs[i];
        sy = sy + ys[i];
    }
    let mx = sx / nf;
    let my = sy / nf;
    let mut sxx = R::zero();
    let mut sxy = R::zero();
    for i in 0..n {
        let dx = xs[i] - mx;
        sxx = sxx + dx * dx;
        sxy = sxy + dx * (ys[i] - my);
    }
    if !(sxx > R::zero()) {
        return Err(Error::Fit("degenerate fit: all velocities identical".into()));
    }
    let gamma = sxy / sxx;
    let intercept = my - gamma * mx;
    if !(gamma > R::zero()) {
        return Err(Error::Fit(format!(
            "non-physical fitted exponent gamma = {:e}",
            gamma
        )));
    }
    let b = (intercept / gamma).exp();
    let mut ss = R::zero();
    for i in 0..n {
        let d = ys[i] - (gamma * xs[i] + intercept);
        ss = ss + d * d;
    }
    Ok(AsymptoteFit {
        gamma_fit: gamma,
        b_fit: b,
        fit_window: (v_lo, v_hi),
        residual: (ss / nf).sqrt(),
        n_points: n,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct BarrierScales<R> {
    /// velocity with E = U_bar, m/s
    pub v_bar: R,
    /// k_i β₄ at that velocity
    pub k_beta4_bar: R,
    /// barrier height in temperature units, K
    pub t_bar: R,
}

pub fn barrier_scales<R: Real>(
    pair: &AtomSurfacePair<R>,
    constants: &PhysicalConstants<R>,
    barrier: &BarrierInfo<R>,
) -> Result<BarrierScales<R>> {
    if !barrier.exists {
        return Err(Error::domain("no barrier: scales undefined"));
    }
    let m = pair.species.mass;
    let v_bar = (R::of(2.0) * barrier.u_bar / m).sqrt();
    let k_beta4_bar = m * v_bar * pair.beta4(constants) / constants.hbar;
    let t_bar = constants.temperature_from_energy(barrier.u_bar);
    Ok(BarrierScales {
        v_bar,
        k_beta4_bar,
        t_bar,
    })
}

/// Default fit window in k_i β₄, scaled to the barrier of the system at hand:
/// heavy species with (k_iβ₄)_bar ≈ 1 are fit on [0.02, 0.3]; lighter species
/// reach the asymptotic regime only well below their (much smaller) barrier
/// scale, so the window shifts down proportionally (with a floor).
pub fn default_fit_window<R: Real>(k_beta4_bar: R) -> (R, R) {
    let s = (k_beta4_bar / R::of(1.21)).min(R::one()).max(R::of(5e-3));
    (R::of(0.02) * s, R::of(0.3) * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::Catalog;

    fn consts() -> PhysicalConstants<f64> {
        PhysicalConstants::new()
    }

    #[test]
    fn equilibrium_law_values() {
        assert_eq!(r2_equilibrium_asymptote(0.0_f64).unwrap(), 1.0);
        let r = r2_equilibrium_asymptote(0.25_f64).unwrap();
        assert!((r - (-1.0_f64).exp()).abs() < 1e-15);
        // ln-slope is −4 exactly
        let a = r2_equilibrium_asymptote(0.1_f64).unwrap().ln();
        let b = r2_equilibrium_asymptote(0.2_f64).unwrap().ln();
        assert!(((b - a) / 0.1 + 4.0).abs() < 1e-12);
        assert!(r2_equilibrium_asymptote(-0.1_f64).is_err());
    }

    #[test]
    fn gamma_analytic_catalog_values() {
        let c = consts();
        let cat = Catalog::builtin(&c);
        let cases = [("Rb87", 6.4818), ("He*", 1.6934), ("He", 1.00408)];
        for (name, expect) in cases {
            let pair = cat.pair(&c, name, "Si").unwrap();
            let g = gamma_analytic(&pair, &c, 300.0, 1200.0).unwrap();
            assert!((g / expect - 1.0).abs() < 1e-3, "{name}: {g}");
            assert_eq!(gamma_analytic(&pair, &c, 1200.0, 1200.0).unwrap(), 1.0);
            assert_eq!(gamma_analytic(&pair, &c, 1200.0, 300.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn gamma_monotone_in_environment_temperature() {
        let c = consts();
        let pair = Catalog::builtin(&c).pair(&c, "Rb87", "Si").unwrap();
        let mut prev = 1.0;
        for t_e in [400.0, 600.0, 800.0, 1000.0, 1200.0] {
            let g = gamma_analytic(&pair, &c, 300.0, t_e).unwrap();
            assert!(g > prev, "T_E={t_e}: {g}");
            prev = g;
        }
    }

    #[test]
    fn nonequilibrium_law_values() {
        assert_eq!(
            r2_nonequilibrium_asymptote(0.0_f64, 2e3, 6.5).unwrap(),
            1.0
        );
        // b = 2 s/mm, γ = 6.5, v = 0.3 mm/s
        let r = r2_nonequilibrium_asymptote(0.3e-3_f64, 2e3, 6.5).unwrap();
        assert!((r - (-0.6_f64.powf(6.5)).exp()).abs() < 1e-15);
        assert!((r - 0.965).abs() < 0.001, "{r}");
        // γ = 1 reduces to a pure exponential
        let r1 = r2_nonequilibrium_asymptote(1e-3_f64, 500.0, 1.0).unwrap();
        assert!((r1 - (-0.5_f64).exp()).abs() < 1e-15);
        assert!(r2_nonequilibrium_asymptote(1e-3_f64, 0.0, 2.0).is_err());
        assert!(r2_nonequilibrium_asymptote(1e-3_f64, 1.0, 0.5).is_err());
    }

    #[test]
    fn fit_recovers_its_own_model() {
        let b = 2e3_f64;
        let gamma = 6.5_f64;
        let pts: Vec<(f64, f64)> = (0..12)
            .map(|i| {
                let v = 5e-5 * 1.3_f64.powi(i);
                (v, r2_nonequilibrium_asymptote(v, b, gamma).unwrap())
            })
            .collect();
        let fit = fit_asymptote(&pts).unwrap();
        assert!((fit.gamma_fit / gamma - 1.0).abs() < 1e-10);
        assert!((fit.b_fit / b - 1.0).abs() < 1e-10);
        assert!(fit.residual < 1e-10);
        assert_eq!(fit.n_points, 12);
    }

    #[test]
    fn fit_rejects_sparse_input() {
        let pts = [(1e-4_f64, 0.9), (2e-4, 0.8), (4e-4, 0.6), (8e-4, 0.3)];
        assert!(fit_asymptote(&pts).is_err());
        // |R|² = 1 exactly is excluded, dropping below the minimum
        let pts = [
            (1e-4_f64, 1.0),
            (2e-4, 1.0),
            (3e-4, 0.9),
            (4e-4, 0.8),
            (5e-4, 0.7),
            (6e-4, 0.6),
        ];
        assert!(fit_asymptote(&pts).is_err());
    }

    #[test]
    fn barrier_scales_identities() {
        let c = consts();
        let pair = Catalog::builtin(&c).pair(&c, "Rb87", "Si").unwrap();
        let barrier = BarrierInfo {
            r_bar: 2e-6,
            u_bar: 1.26e-9 * c.k_b,
            exists: true,
        };
        let s = barrier_scales(&pair, &c, &barrier).unwrap();
        assert!((s.v_bar - 0.49e-3).abs() < 0.01e-3, "{:e}", s.v_bar);
        assert!((s.k_beta4_bar - 1.21).abs() < 0.03, "{}", s.k_beta4_bar);
        // T_bar is U_bar in kelvin by construction
        assert!((s.t_bar / (barrier.u_bar / c.k_b) - 1.0).abs() < 1e-12);
        // and equals ħ²(k_iβ₄)_bar²/(2 m k_B β₄²)
        let b4 = pair.beta4(&c);
        let t_alt =
            (c.hbar * s.k_beta4_bar / b4).powi(2) / (2.0 * pair.species.mass * c.k_b);
        assert!((t_alt / s.t_bar - 1.0).abs() < 1e-12);
        let none = BarrierInfo {
            r_bar: 0.0,
            u_bar: 0.0,
            exists: false,
        };
        assert!(barrier_scales(&pair, &c, &none).is_err());
    }

    #[test]
    fn fit_window_scaling() {
        let (lo, hi) = default_fit_window(1.21_f64);
        assert!((lo - 0.02).abs() < 1e-15 && (hi - 0.3).abs() < 1e-15);
        let (lo, hi) = default_fit_window(0.055_f64);
        assert!(lo < 0.0011 && hi < 0.015);
        // floor for very light species
        let (lo, _) = default_fit_window(2.4e-4_f64);
        assert!((lo - 0.02 * 5e-3).abs() < 1e-12);
    }
}
