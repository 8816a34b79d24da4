//! Adaptive Simpson quadrature, used to validate densities and closed forms.

/// Integrates `f` over the finite interval `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(f, a, b, fa, fm, fb, whole, tol, 50, 0)
}

/// As [`adaptive_simpson`] but always splits at least `2^min_depth` times,
/// so narrow features between the first few nodes are not missed.
pub fn adaptive_simpson_min_depth<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, min_depth: u32) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(f, a, b, fa, fm, fb, whole, tol, 50, min_depth)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    min_depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || (min_depth == 0 && delta.abs() <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    let md = min_depth.saturating_sub(1);
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, md)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, md)
}

/// Integrates over a possibly infinite interval by the substitution
/// `x = t / (1 - t^2)`, `t ∈ (-1, 1)`.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a.is_finite() && b.is_finite() {
        return adaptive_simpson(f, a, b, tol);
    }
    let to_t = |x: f64| -> f64 {
        if x == f64::NEG_INFINITY {
            -1.0
        } else if x == f64::INFINITY {
            1.0
        } else if x == 0.0 {
            0.0
        } else {
            // inverse of x = t / (1 - t^2)
            (-1.0 + (1.0 + 4.0 * x * x).sqrt()) / (2.0 * x)
        }
    };
    let g = |t: f64| -> f64 {
        if t <= -1.0 || t >= 1.0 {
            return 0.0;
        }
        let d = 1.0 - t * t;
        let x = t / d;
        let jac = (1.0 + t * t) / (d * d);
        let v = f(x) * jac;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    adaptive_simpson_min_depth(&g, to_t(a), to_t(b), tol, 10)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_integral() {
        let f = |x: f64| (-0.5 * x * x).exp();
        let v = integrate(&f, f64::NEG_INFINITY, f64::INFINITY, 1e-13);
        assert!((v - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-10, "{v}");
    }

    #[test]
    fn polynomial_exact() {
        let v = adaptive_simpson(&|x: f64| x * x * x, 0.0, 2.0, 1e-12);
        assert!((v - 4.0).abs() < 1e-12);
    }
}
