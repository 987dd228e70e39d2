//! Atom-surface interaction potential at thermal non-equilibrium:
//! equilibrium vdWCP/Lifshitz part, non-equilibrium fluctuation term,
//! barrier search, and a fast tabulated form for the scattering solver.

use crate::error::{Error, Result};
use crate::materials::{fresnel_h, phi, AtomSurfacePair};
use crate::quad;
use crate::real::Real;
use crate::search::golden_max;
use crate::units::PhysicalConstants;
use rayon::prelude::*;

/// How the crossover function G between the retarded (CP) and thermal
/// (Lifshitz) regimes is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GStrategy {
    /// Matsubara-sum evaluation of G; reproduces the exact crossover shape.
    ExactLifshitz,
    /// Additive Padé interpolant −C3/r³ − C4/(r³(r+l)); exact in both limits,
    /// approximate near r ≈ λ_T.
    Pade,
}

#[derive(Debug, Clone)]
pub struct PotentialModel<R> {
    pub pair: AtomSurfacePair<R>,
    pub constants: PhysicalConstants<R>,
    pub t_s: R,
    pub t_e: R,
    pub quad_rel_tol: R,
    pub g_strategy: GStrategy,
    pub table: Option<PotentialTable<R>>,
    // cached coefficients
    c3_te: R,
    lambda_te: R,
    c2: R,
    /// stored C4 relative to the φ-quadrature closed form; rescales the
    /// Matsubara G so the vdWCP limit reproduces the pair's C4 exactly
    c4_scale: R,
    /// 2ħα₀/(πc³(ε₀−1)), prefactor of the non-equilibrium integral
    k_neq: R,
    tau: R,
}

impl<R: Real> PotentialModel<R> {
    pub fn new(
        constants: PhysicalConstants<R>,
        pair: AtomSurfacePair<R>,
        t_s: R,
        t_e: R,
    ) -> Result<Self> {
        if t_s < R::zero() || t_e < R::zero() {
            return Err(Error::domain("temperatures must be non-negative"));
        }
        let eps = pair.surface.epsilon0;
        let c3_te = pair.c3(&constants, t_e)?;
        let lambda_te = if t_e > R::zero() {
            constants.thermal_wavelength(t_e)?
        } else {
            R::zero()
        };
        let c2 = pair.c2(&constants, t_s, t_e)?;
        let c4_formula = R::of(3.0 / (8.0 * std::f64::consts::PI))
            * pair.species.alpha0
            * constants.hbar
            * constants.c
            * phi(eps)?;
        let c4_scale = pair.c4 / c4_formula;
        let k_neq = R::of(2.0) * constants.hbar * pair.species.alpha0
            / (R::of(std::f64::consts::PI)
                * constants.c.powi(3)
                * (eps - R::one()));
        let tau = (eps - R::one()).sqrt();
        Ok(PotentialModel {
            pair,
            constants,
            t_s,
            t_e,
            quad_rel_tol: R::of(1e-8),
            g_strategy: GStrategy::ExactLifshitz,
            table: None,
            c3_te,
            lambda_te,
            c2,
            c4_scale,
            k_neq,
            tau,
        })
    }

    pub fn with_quad_rel_tol(mut self, tol: R) -> Result<Self> {
        if !(tol > R::zero() && tol <= R::of(1e-3)) {
            return Err(Error::domain("quad_rel_tol must lie in (0, 1e-3]"));
        }
        self.quad_rel_tol = tol;
        Ok(self)
    }

    pub fn with_g_strategy(mut self, strategy: GStrategy) -> Self {
        self.g_strategy = strategy;
        self
    }

    /// Equilibrium thermal potential at environment temperature T_E.
    ///
    /// Short range: vdWCP form −C4 r⁻³/(r+l). Long range: classical Lifshitz
    /// −C3(T_E)/r³. The crossover follows the selected G strategy, with the
    /// transition-length substitution r → r+l inside G's argument.
    pub fn u_eq(&self, r: R) -> Result<R> {
        if !(r > R::zero()) {
            return Err(Error::domain("u_eq requires r > 0"));
        }
        let c4 = self.pair.c4;
        let l = self.pair.species.transition_length;
        if self.t_e == R::zero() {
            return Ok(-c4 / (r.powi(3) * (r + l)));
        }
        let r3 = r.powi(3);
        match self.g_strategy {
            GStrategy::Pade => Ok(-self.c3_te / r3 - c4 / (r3 * (r + l))),
            GStrategy::ExactLifshitz => {
                let x = (r + l) / self.lambda_te;
                let g = g_exact(x, self.pair.surface.epsilon0, self.quad_rel_tol * R::of(0.1))?;
                Ok(-self.c3_te / r3 * (R::one() + self.c4_scale * (g - R::one())))
            }
        }
    }

    /// Non-equilibrium fluctuation term: zero at equilibrium, repulsive when
    /// the environment is hotter than the surface, attractive otherwise.
    /// Evaluated as a nested adaptive quadrature over frequency and angle
    /// after the distance integral is done analytically.
    pub fn u_neq(&self, r: R) -> Result<R> {
        if !(r > R::zero()) {
            return Err(Error::domain("u_neq requires r > 0"));
        }
        if self.t_s == self.t_e {
            return Ok(R::zero());
        }
        let eps = self.pair.surface.epsilon0;
        let tau = self.tau;
        let t_max = self.t_s.max(self.t_e);
        let w_scale = self.constants.k_b * t_max / self.constants.hbar;
        let inner_tol = self.quad_rel_tol * R::of(0.1);
        let t_s = self.t_s;
        let t_e = self.t_e;
        let two_r_tau_over_c = R::of(2.0) * r * tau / self.constants.c;
        let outer = |x: R| {
            let w = x * w_scale;
            let bose = |t: R| {
                if t > R::zero() {
                    R::one() / (x * t_max / t).exp_m1()
                } else {
                    R::zero()
                }
            };
            let a = two_r_tau_over_c * w;
            let inner = angular_factor(a, eps, tau, inner_tol);
            w.powi(3) * (bose(t_s) - bose(t_e)) * inner
        };
        let est = quad::integrate(&outer, R::of(1e-10), R::of(40.0), self.quad_rel_tol)?;
        Ok(-self.k_neq * w_scale * est.value)
    }

    /// Full potential. Routes through the attached table when one exists.
    pub fn u_full(&self, r: R) -> Result<R> {
        if let Some(table) = &self.table {
            if r >= table.r_min && r <= table.r_max {
                return Ok(table.value(r)?);
            }
        }
        Ok(self.u_eq(r)? + self.u_neq(r)?)
    }

    /// Full potential evaluated directly, ignoring any attached table.
    pub fn u_full_direct(&self, r: R) -> Result<R> {
        Ok(self.u_eq(r)? + self.u_neq(r)?)
    }

    /// Long-range tail C2(T_S,T_E)/r² of the non-equilibrium term.
    pub fn c2_asymptote(&self, r: R) -> Result<R> {
        if !(r > R::zero()) {
            return Err(Error::domain("c2_asymptote requires r > 0"));
        }
        Ok(self.c2 / (r * r))
    }

    pub fn c2(&self) -> R {
        self.c2
    }

    /// Locate the repulsive barrier of the full potential, if any. Only a
    /// hotter environment (T_E > T_S) produces one.
    pub fn find_barrier(&self) -> Result<BarrierInfo<R>> {
        if !(self.t_e > self.t_s) {
            return Ok(BarrierInfo {
                r_bar: R::zero(),
                u_bar: R::zero(),
                exists: false,
            });
        }
        let l = self.pair.species.transition_length;
        // search window [l, 10³·λ_T] with the surface temperature setting the
        // thermal scale (fall back to T_E when the surface is at zero)
        let t_ref = if self.t_s > R::zero() { self.t_s } else { self.t_e };
        let r_hi = R::of(1e3) * self.constants.thermal_wavelength(t_ref)?;
        let ln_lo = l.ln();
        let ln_hi = r_hi.ln();
        let n = 160usize;
        let step = (ln_hi - ln_lo) / R::of(n as f64);
        let mut best_i = 0usize;
        let mut best_u = R::neg_infinity();
        let mut us = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let r = (ln_lo + step * R::of(i as f64)).exp();
            let u = self.u_full_direct(r)?;
            if u > best_u {
                best_u = u;
                best_i = i;
            }
            us.push(u);
        }
        if !(best_u > R::zero()) {
            return Ok(BarrierInfo {
                r_bar: R::zero(),
                u_bar: R::zero(),
                exists: false,
            });
        }
        let lo = ln_lo + step * R::of(best_i.saturating_sub(1) as f64);
        let hi = ln_lo + step * R::of((best_i + 1).min(n) as f64);
        let f = |y: R| self.u_full_direct(y.exp()).unwrap_or(R::neg_infinity());
        let (y_bar, u_bar) = golden_max(&f, lo, hi, R::of(1e-5));
        Ok(BarrierInfo {
            r_bar: y_bar.exp(),
            u_bar,
            exists: true,
        })
    }

    /// Tabulate the full potential on a log-uniform grid and return a model
    /// with the table attached.
    pub fn tabulated(self, r_min: R, r_max: R, points_per_decade: usize) -> Result<Self> {
        let table = self.tabulate(r_min, r_max, points_per_decade)?;
        Ok(PotentialModel {
            table: Some(table),
            ..self
        })
    }

    pub fn tabulate(
        &self,
        r_min: R,
        r_max: R,
        points_per_decade: usize,
    ) -> Result<PotentialTable<R>> {
        if !(r_min > R::zero() && r_max > r_min) {
            return Err(Error::domain("tabulate requires 0 < r_min < r_max"));
        }
        if points_per_decade < 16 {
            return Err(Error::domain("tabulate requires at least 16 points per decade"));
        }
        let decades = (r_max / r_min).log10();
        let n = (decades.as_f64() * points_per_decade as f64).ceil() as usize + 1;
        let ln_r0 = r_min.ln();
        let dln = (r_max.ln() - ln_r0) / R::of((n - 1) as f64);
        let radii: Vec<R> = (0..n)
            .map(|i| (ln_r0 + dln * R::of(i as f64)).exp())
            .collect();
        let eq_vals: Vec<R> = radii
            .par_iter()
            .map(|&r| self.u_eq(r))
            .collect::<Result<_>>()?;
        // the equilibrium part is attractive everywhere
        for (&r, &u) in radii.iter().zip(&eq_vals) {
            if !(u < R::zero()) {
                return Err(Error::domain(format!(
                    "equilibrium potential not negative at r = {:e}",
                    r
                )));
            }
        }
        let eq = TableComponent::from_values(
            -R::one(),
            eq_vals.iter().map(|u| u.abs().ln()).collect(),
            dln,
        );
        let neq = if self.t_s == self.t_e {
            None
        } else {
            let sign = if self.t_e > self.t_s { R::one() } else { -R::one() };
            let neq_vals: Vec<R> = radii
                .par_iter()
                .map(|&r| self.u_neq(r))
                .collect::<Result<_>>()?;
            for (&r, &u) in radii.iter().zip(&neq_vals) {
                if !(u * sign > R::zero()) {
                    return Err(Error::domain(format!(
                        "non-equilibrium term changed sign at r = {:e}",
                        r
                    )));
                }
            }
            Some(TableComponent::from_values(
                sign,
                neq_vals.iter().map(|u| u.abs().ln()).collect(),
                dln,
            ))
        };
        Ok(PotentialTable {
            ln_r0,
            dln,
            r_min,
            r_max,
            eq,
            neq,
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BarrierInfo<R> {
    pub r_bar: R,
    pub u_bar: R,
    pub exists: bool,
}

impl<R: Real> BarrierInfo<R> {
    /// Barrier height in temperature units (K).
    pub fn u_bar_kelvin(&self, constants: &PhysicalConstants<R>) -> R {
        constants.temperature_from_energy(self.u_bar)
    }
}

/// One single-signed potential component stored as ln|u| on a log-uniform
/// radius grid with precomputed slopes for cubic Hermite interpolation.
/// Storing the components separately keeps full relative accuracy through
/// the sign change of their sum.
#[derive(Debug, Clone)]
struct TableComponent<R> {
    sign: R,
    g: Vec<R>,
    /// d(ln|u|)/d(ln r) at the nodes, 4th-order finite differences
    dg: Vec<R>,
}

impl<R: Real> TableComponent<R> {
    fn from_values(sign: R, g: Vec<R>, h: R) -> Self {
        let n = g.len();
        let mut dg = vec![R::zero(); n];
        let c12h = R::one() / (R::of(12.0) * h);
        for i in 0..n {
            dg[i] = if i >= 2 && i + 2 < n {
                (R::of(8.0) * (g[i + 1] - g[i - 1]) - (g[i + 2] - g[i - 2])) * c12h
            } else if i == 0 {
                (R::of(-25.0) * g[0] + R::of(48.0) * g[1] - R::of(36.0) * g[2]
                    + R::of(16.0) * g[3]
                    - R::of(3.0) * g[4])
                    * c12h
            } else if i == 1 {
                (R::of(-3.0) * g[0] - R::of(10.0) * g[1] + R::of(18.0) * g[2]
                    - R::of(6.0) * g[3]
                    + g[4])
                    * c12h
            } else if i == n - 2 {
                -(R::of(-3.0) * g[n - 1] - R::of(10.0) * g[n - 2] + R::of(18.0) * g[n - 3]
                    - R::of(6.0) * g[n - 4]
                    + g[n - 5])
                    * c12h
            } else {
                -(R::of(-25.0) * g[n - 1] + R::of(48.0) * g[n - 2] - R::of(36.0) * g[n - 3]
                    + R::of(16.0) * g[n - 4]
                    - R::of(3.0) * g[n - 5])
                    * c12h
            };
        }
        TableComponent { sign, g, dg }
    }

    /// (u, du/dr) at ln-radius `y`, where `i` indexes the containing interval
    /// and `s` ∈ [0,1] is the position within it.
    fn eval(&self, i: usize, s: R, h: R, r: R) -> (R, R) {
        let (p0, p1) = (self.g[i], self.g[i + 1]);
        let (m0, m1) = (self.dg[i] * h, self.dg[i + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        let g = (R::of(2.0) * s3 - R::of(3.0) * s2 + R::one()) * p0
            + (s3 - R::of(2.0) * s2 + s) * m0
            + (R::of(-2.0) * s3 + R::of(3.0) * s2) * p1
            + (s3 - s2) * m1;
        let dg_ds = (R::of(6.0) * s2 - R::of(6.0) * s) * p0
            + (R::of(3.0) * s2 - R::of(4.0) * s + R::one()) * m0
            + (R::of(-6.0) * s2 + R::of(6.0) * s) * p1
            + (R::of(3.0) * s2 - R::of(2.0) * s) * m1;
        let u = self.sign * g.exp();
        let du_dr = u * (dg_ds / h) / r;
        (u, du_dr)
    }
}

#[derive(Debug, Clone)]
pub struct PotentialTable<R> {
    ln_r0: R,
    dln: R,
    pub r_min: R,
    pub r_max: R,
    eq: TableComponent<R>,
    neq: Option<TableComponent<R>>,
}

impl<R: Real> PotentialTable<R> {
    fn locate(&self, r: R) -> Result<(usize, R)> {
        // tolerate roundoff of exp(ln r) at the grid edges
        let slack = R::of(1e-12);
        if !(r >= self.r_min * (R::one() - slack) && r <= self.r_max * (R::one() + slack)) {
            return Err(Error::domain(format!(
                "r = {:e} outside tabulated range [{:e}, {:e}]",
                r, self.r_min, self.r_max
            )));
        }
        let y = r.ln();
        let t = ((y - self.ln_r0) / self.dln).max(R::zero());
        let mut i = t.floor().as_f64() as usize;
        let last = self.eq.g.len() - 2;
        if i > last {
            i = last;
        }
        let s = (t - R::of(i as f64)).min(R::one());
        Ok((i, s))
    }

    pub fn value(&self, r: R) -> Result<R> {
        Ok(self.value_and_derivative(r)?.0)
    }

    /// (U, dU/dr) by interpolation.
    pub fn value_and_derivative(&self, r: R) -> Result<(R, R)> {
        let (i, s) = self.locate(r)?;
        let (mut u, mut du) = self.eq.eval(i, s, self.dln, r);
        if let Some(neq) = &self.neq {
            let (un, dun) = neq.eval(i, s, self.dln, r);
            u = u + un;
            du = du + dun;
        }
        Ok((u, du))
    }

    pub fn len(&self) -> usize {
        self.eq.g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eq.g.is_empty()
    }

    pub fn radius(&self, i: usize) -> R {
        (self.ln_r0 + self.dln * R::of(i as f64)).exp()
    }

    pub fn value_at_node(&self, i: usize) -> R {
        let mut u = self.eq.sign * self.eq.g[i].exp();
        if let Some(neq) = &self.neq {
            u = u + neq.sign * neq.g[i].exp();
        }
        u
    }
}

/// Thermal crossover function G(x), x = r/λ_T, via the Matsubara sum.
/// G → 1 for x ≫ 1 (classical Lifshitz) and grows like 1/x for x ≪ 1
/// (retarded CP regime).
pub fn g_exact<R: Real>(x: R, eps: R, rel_tol: R) -> Result<R> {
    if !(x > R::zero()) {
        return Err(Error::domain("g_exact requires x > 0"));
    }
    let two_pi = R::of(2.0 * std::f64::consts::PI);
    let coeff = R::of(4.0) * (eps + R::one()) / (eps - R::one());
    let mut g = R::one();
    let mut n = 1u32;
    loop {
        let b = R::of(2.0) * two_pi * R::of(n as f64) * x;
        if b > R::of(60.0) {
            break;
        }
        g = g + coeff * (two_pi * R::of(n as f64) * x).powi(3) * matsubara_j(b, eps, rel_tol)?;
        n += 1;
    }
    Ok(g)
}

/// J(b) = ∫₁^∞ H(p) e^{−bp} dp, computed as (e^{−b}/b)∫₀^60 H(1+y/b)e^{−y}dy.
fn matsubara_j<R: Real>(b: R, eps: R, rel_tol: R) -> Result<R> {
    let integrand = |y: R| fresnel_h(R::one() + y / b, eps) * (-y).exp();
    let est = quad::integrate(&integrand, R::of(1e-12), R::of(60.0), rel_tol)?;
    Ok((-b).exp() / b * est.value)
}

/// Angular part of the non-equilibrium integrand at decay parameter
/// a = 2rωτ/c: ∫₀^{π/2} τ³ sinθ cos²θ · B(τ²sin²θ) · e^{−a sinθ} dθ with
/// B(t²) = 1 + ε(2t²+1)/(1+t²(ε+1)).
///
/// For large `a` the mass sits in a boundary layer of width 1/a at θ = 0 that
/// fixed-scale sampling misses, so the integral is recast via u = a·sinθ.
fn angular_factor<R: Real>(a: R, eps: R, tau: R, rel_tol: R) -> R {
    let bracket = |t2: R| {
        R::one() + eps * (R::of(2.0) * t2 + R::one()) / (R::one() + t2 * (eps + R::one()))
    };
    let tau3 = tau.powi(3);
    if a <= R::of(50.0) {
        let f = |theta: R| {
            let st = theta.sin();
            let ct = theta.cos();
            let t2 = tau * tau * st * st;
            tau3 * st * ct * ct * bracket(t2) * (-a * st).exp()
        };
        quad::integrate(&f, R::of(1e-12), R::of(std::f64::consts::FRAC_PI_2), rel_tol)
            .map(|e| e.value)
            .unwrap_or(R::zero())
    } else {
        // u = a sinθ: integrand (τ³/a²) u √(1−(u/a)²) B(τ²u²/a²) e^{−u}
        let inv_a = R::one() / a;
        let f = |u: R| {
            let w = u * inv_a;
            let t2 = tau * tau * w * w;
            tau3 * inv_a * inv_a * u * (R::one() - w * w).max(R::zero()).sqrt()
                * bracket(t2)
                * (-u).exp()
        };
        quad::integrate(&f, R::of(1e-12), R::of(50.0), rel_tol)
            .map(|e| e.value)
            .unwrap_or(R::zero())
    }
}
