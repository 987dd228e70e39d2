//! Golden-section refinement of a bracketed extremum.

use crate::real::Real;

/// Maximize `f` on `[a, b]`, assuming a single interior maximum, until the
/// bracket shrinks below `rel_tol` relative to the midpoint. Returns (x, f(x)).
pub fn golden_max<R: Real, F: Fn(R) -> R>(f: &F, mut a: R, mut b: R, rel_tol: R) -> (R, R) {
    let inv_phi = R::of(0.618_033_988_749_894_9);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        let mid = R::of(0.5) * (a + b).abs().max(R::min_positive_value());
        if b - a <= rel_tol * mid {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_peak() {
        let (x, fx) = golden_max(&|x: f64| 3.0 - (x - 1.7).powi(2), 0.0, 5.0, 1e-10);
        // localization of a smooth peak is limited to ~sqrt(eps) by roundoff
        assert!((x - 1.7).abs() < 1e-7);
        assert!((fx - 3.0).abs() < 1e-12);
    }

    #[test]
    fn finds_skewed_peak() {
        // x e^{-x} peaks at x = 1
        let (x, _) = golden_max(&|x: f64| x * (-x).exp(), 0.01, 20.0, 1e-9);
        assert!((x - 1.0).abs() < 1e-6, "got {x}");
    }
}
