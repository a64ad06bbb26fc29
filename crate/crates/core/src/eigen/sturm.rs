//! Eigenvalues of a symmetric tridiagonal matrix by Sturm-count bisection.

/// Number of eigenvalues strictly below `x`, from the signs of the LDLᵀ
/// pivots of `T − xI`.
pub fn count_below(diag: &[f64], off: &[f64], x: f64) -> usize {
    let tiny = f64::MIN_POSITIVE.sqrt();
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        q = if i == 0 {
            diag[0] - x
        } else {
            diag[i] - x - off[i - 1] * off[i - 1] / q
        };
        if q.abs() < tiny {
            q = -tiny;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Gershgorin interval containing the whole spectrum.
pub fn gershgorin(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    (lo, hi)
}

/// The `k` smallest eigenvalues in ascending order.
pub fn smallest(diag: &[f64], off: &[f64], k: usize) -> Vec<f64> {
    let (lo, hi) = gershgorin(diag, off);
    let span = (hi - lo).max(f64::MIN_POSITIVE);
    let pad = 1e-12 * span + f64::MIN_POSITIVE;
    let (lo, hi) = (lo - pad, hi + pad);
    let scale = lo.abs().max(hi.abs());
    (0..k)
        .map(|j| {
            // smallest x with count_below(x) > j
            let (mut a, mut b) = (lo, hi);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                if count_below(diag, off, mid) > j {
                    b = mid;
                } else {
                    a = mid;
                }
                if b - a <= 2.0 * f64::EPSILON * (a.abs().max(b.abs())) || b - a < 1e-300 * scale {
                    break;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toeplitz_spectrum() {
        let n = 50;
        let d = vec![2.0; n];
        let e = vec![-1.0; n - 1];
        let got = smallest(&d, &e, n);
        for (j, v) in got.iter().enumerate() {
            let t = (j + 1) as f64 * std::f64::consts::PI / (n + 1) as f64;
            let exact = 2.0 - 2.0 * t.cos();
            assert!((v - exact).abs() < 1e-13, "{j}: {v} {exact}");
        }
    }

    #[test]
    fn counts() {
        let d = [3.0, 1.0, 2.0];
        let e = [0.0, 0.0];
        assert_eq!(count_below(&d, &e, 0.5), 0);
        assert_eq!(count_below(&d, &e, 1.5), 1);
        assert_eq!(count_below(&d, &e, 10.0), 3);
        for (v, want) in smallest(&d, &e, 3).iter().zip([1.0, 2.0, 3.0]) {
            assert!((v - want).abs() < 1e-14);
        }
    }
}
