//! Embedded Dormand-Prince 5(4) integrator for a two-component complex
//! linear system (the stationary wave equation u'' = f(r)·u).

use crate::error::{Error, Result};
use crate::real::Real;
use num_complex::Complex;

type State<R> = [Complex<R>; 2];

const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B5: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
// b5 − b4, the embedded error weights (include the 7th, FSAL stage)
const E: [f64; 7] = [
    35.0 / 384.0 - 5179.0 / 57600.0,
    0.0,
    500.0 / 1113.0 - 7571.0 / 16695.0,
    125.0 / 192.0 - 393.0 / 640.0,
    -2187.0 / 6784.0 + 92097.0 / 339200.0,
    11.0 / 84.0 - 187.0 / 2100.0,
    -1.0 / 40.0,
];

fn axpy<R: Real>(y: &State<R>, h: R, coeffs: &[f64], k: &[State<R>]) -> State<R> {
    let mut out = *y;
    for (c, ki) in coeffs.iter().zip(k) {
        let ch = Complex::new(h * R::of(*c), R::zero());
        out[0] = out[0] + ch * ki[0];
        out[1] = out[1] + ch * ki[1];
    }
    out
}

/// Integrate from `r0` to `r1` (r1 > r0) with adaptive steps.
///
/// The error per component is measured against `rel_tol` times the running
/// maximum of that component's magnitude: the wave oscillates through zeros,
/// where a pointwise relative criterion would force vanishing steps.
pub fn integrate_wave<R, F>(rhs: F, r0: R, r1: R, y0: State<R>, rel_tol: R) -> Result<State<R>>
where
    R: Real,
    F: Fn(R, &State<R>) -> State<R>,
{
    if !(r1 > r0) {
        return Err(Error::Integrator("integration range must be increasing".into()));
    }
    if !(rel_tol > R::zero()) {
        return Err(Error::Integrator("rel_tol must be positive".into()));
    }
    const MAX_STEPS: usize = 50_000_000;
    let span = r1 - r0;
    let mut r = r0;
    let mut y = y0;
    let mut h = span * R::of(1e-9);
    let mut running_max = [y0[0].norm(), y0[1].norm()];
    let tiny = R::min_positive_value().sqrt();
    let mut k1 = rhs(r, &y);
    let mut steps = 0usize;
    while r < r1 {
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::Integrator(format!(
                "step limit exceeded at r = {:e}",
                r
            )));
        }
        if r + h > r1 {
            h = r1 - r;
        }
        let k2 = rhs(r + h * R::of(1.0 / 5.0), &axpy(&y, h, &A2, &[k1]));
        let k3 = rhs(r + h * R::of(3.0 / 10.0), &axpy(&y, h, &A3, &[k1, k2]));
        let k4 = rhs(r + h * R::of(4.0 / 5.0), &axpy(&y, h, &A4, &[k1, k2, k3]));
        let k5 = rhs(r + h * R::of(8.0 / 9.0), &axpy(&y, h, &A5, &[k1, k2, k3, k4]));
        let k6 = rhs(r + h, &axpy(&y, h, &A6, &[k1, k2, k3, k4, k5]));
        let y5 = axpy(&y, h, &B5, &[k1, k2, k3, k4, k5, k6]);
        let k7 = rhs(r + h, &y5);
        let ks = [k1, k2, k3, k4, k5, k6, k7];
        let mut err = R::zero();
        for i in 0..2 {
            let mut e = Complex::new(R::zero(), R::zero());
            for (c, kj) in E.iter().zip(&ks) {
                e = e + Complex::new(h * R::of(*c), R::zero()) * kj[i];
            }
            let scale = rel_tol * running_max[i].max(tiny);
            err = err.max(e.norm() / scale);
        }
        if err <= R::one() {
            r = r + h;
            y = y5;
            k1 = k7; // FSAL
            for i in 0..2 {
                running_max[i] = running_max[i].max(y[i].norm());
            }
        }
        let factor = if err > R::zero() {
            (R::of(0.9) * err.powf(R::of(-0.2))).min(R::of(5.0)).max(R::of(0.2))
        } else {
            R::of(5.0)
        };
        h = h * factor;
        if !(h > R::zero()) || r + h == r {
            return Err(Error::Integrator(format!(
                "step size underflow at r = {:e}",
                r
            )));
        }
    }
    Ok(y)
}
