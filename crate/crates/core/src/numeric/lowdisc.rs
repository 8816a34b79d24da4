//! Halton low-discrepancy points for deterministic multistart.

const PRIMES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Radical inverse of `index` in base `base`.
pub fn radical_inverse(mut index: u64, base: u32) -> f64 {
    let b = base as u64;
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut out = 0.0;
    while index > 0 {
        out += (index % b) as f64 * scale;
        index /= b;
        scale *= inv;
    }
    out
}

/// The `index`-th Halton point in `[0,1)^dim`. Index 0 is skipped by callers
/// that want to avoid the origin.
pub fn halton(index: u64, dim: usize) -> Vec<f64> {
    assert!(dim <= PRIMES.len(), "halton: dimension {dim} unsupported");
    PRIMES[..dim]
        .iter()
        .map(|&p| radical_inverse(index, p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base2_sequence() {
        let v: Vec<f64> = (1..5).map(|i| radical_inverse(i, 2)).collect();
        assert_eq!(v, vec![0.5, 0.25, 0.75, 0.125]);
    }

    #[test]
    fn points_in_unit_cube() {
        for i in 1..200 {
            assert!(halton(i, 4).iter().all(|&u| (0.0..1.0).contains(&u)));
        }
    }
}
