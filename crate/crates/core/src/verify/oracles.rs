//! Brute-force eigenvalue oracle for small dense symmetric matrices,
//! independent of the banded solver: roots of det(A − λI) located by a
//! sign scan and refined by bisection, with the determinant taken from
//! Gaussian elimination with partial pivoting.

/// `det(A − λI)`.
pub fn characteristic(a: &[Vec<f64>], lambda: f64) -> f64 {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] -= lambda;
    }
    let mut det = 1.0;
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| m[i][k].abs().total_cmp(&m[j][k].abs())).unwrap();
        if m[p][k] == 0.0 {
            return 0.0;
        }
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        det *= m[k][k];
        for i in k + 1..n {
            let l = m[i][k] / m[k][k];
            for j in k..n {
                m[i][j] -= l * m[k][j];
            }
        }
    }
    det
}

fn bisect(a: &[Vec<f64>], mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = characteristic(a, lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f = characteristic(a, mid);
        if f == 0.0 {
            return mid;
        }
        if (f < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All eigenvalues in ascending order, or `None` if the scan cannot
/// separate them (a repeated or extremely close pair).
pub fn eigenvalues(a: &[Vec<f64>]) -> Option<Vec<f64>> {
    let n = a.len();
    let radius = a
        .iter()
        .enumerate()
        .map(|(i, row)| row.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v.abs()).sum::<f64>())
        .collect::<Vec<_>>();
    let lo = (0..n).map(|i| a[i][i] - radius[i]).fold(f64::INFINITY, f64::min) - 1.0;
    let hi = (0..n).map(|i| a[i][i] + radius[i]).fold(f64::NEG_INFINITY, f64::max) + 1.0;
    let mut steps = 4000;
    while steps <= 4_000_000 {
        let mut roots = Vec::new();
        let mut x0 = lo;
        let mut f0 = characteristic(a, x0);
        for s in 1..=steps {
            let x1 = lo + (hi - lo) * s as f64 / steps as f64;
            let f1 = characteristic(a, x1);
            if f1 == 0.0 {
                roots.push(x1);
            } else if f0 != 0.0 && (f0 < 0.0) != (f1 < 0.0) {
                roots.push(bisect(a, x0, x1));
            }
            x0 = x1;
            f0 = f1;
        }
        if roots.len() == n {
            return Some(roots);
        }
        steps *= 10;
    }
    None
}
