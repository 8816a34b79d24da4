//! Small numerical building blocks shared by the solvers.

pub mod contour;
pub mod lowdisc;
pub mod quad;
pub mod root;
pub mod simplex;

/// Central finite difference of a scalar function.
pub fn central_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// `n` evenly spaced values covering `[lo, hi]` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}

/// `n` logarithmically spaced values covering `[lo, hi]`, both positive.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    linspace(lo.ln(), hi.ln(), n)
        .into_iter()
        .map(f64::exp)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_endpoints_are_exact() {
        let v = linspace(-3.0, 7.0, 11);
        assert_eq!(v.len(), 11);
        assert_eq!(v[0], -3.0);
        assert_eq!(v[10], 7.0);
        let l = logspace(1e-3, 1e3, 7);
        assert!((l[3] - 1.0).abs() < 1e-12);
    }
}
