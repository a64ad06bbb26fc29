//! Orthogonal reduction of a symmetric band matrix to tridiagonal form by
//! Givens rotations with bulge chasing.

use crate::operator::SymmetricBandedMatrix;

/// Lower band storage with one spare diagonal for the bulge:
/// `data[d][j] = M[j + d][j]`.
struct Work {
    n: usize,
    width: usize,
    data: Vec<Vec<f64>>,
}

impl Work {
    fn get(&self, i: usize, j: usize) -> f64 {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        let d = r - c;
        if d <= self.width {
            self.data[d][c]
        } else {
            0.0
        }
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        let d = r - c;
        debug_assert!(d <= self.width || v == 0.0, "fill outside work band");
        if d <= self.width {
            self.data[d][c] = v;
        }
    }

    /// `M ← G M Gᵀ` for the rotation acting on rows/columns p and p + 1.
    fn rotate(&mut self, p: usize, c: f64, s: f64) {
        let q = p + 1;
        let lo = p.saturating_sub(self.width);
        let hi = (q + self.width).min(self.n - 1);
        for k in lo..=hi {
            if k == p || k == q {
                continue;
            }
            let a = self.get(p, k);
            let b = self.get(q, k);
            if a == 0.0 && b == 0.0 {
                continue;
            }
            self.set(p, k, c * a + s * b);
            self.set(q, k, -s * a + c * b);
        }
        let app = self.get(p, p);
        let aqq = self.get(q, q);
        let apq = self.get(p, q);
        let cs = c * s;
        self.set(p, p, c * c * app + 2.0 * cs * apq + s * s * aqq);
        self.set(q, q, s * s * app - 2.0 * cs * apq + c * c * aqq);
        self.set(p, q, cs * (aqq - app) + (c * c - s * s) * apq);
    }

    /// Rotation in plane (r − 1, r) that zeroes M[r][col].
    fn annihilate(&mut self, r: usize, col: usize) -> bool {
        let b = self.get(r, col);
        if b == 0.0 {
            return false;
        }
        let a = self.get(r - 1, col);
        let rho = a.hypot(b);
        self.rotate(r - 1, a / rho, b / rho);
        self.set(r, col, 0.0);
        self.set(r - 1, col, rho);
        true
    }
}

/// Diagonal and off-diagonal of a tridiagonal matrix orthogonally similar
/// to `m`.
pub fn tridiagonalize(m: &SymmetricBandedMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = m.dim();
    let b = m.bandwidth().min(n.saturating_sub(1));
    if b <= 1 {
        let off = if n > 1 && m.bandwidth() >= 1 {
            m.band(1).to_vec()
        } else {
            vec![0.0; n.saturating_sub(1)]
        };
        return (m.band(0).to_vec(), off);
    }
    let width = b + 1;
    let mut data: Vec<Vec<f64>> = (0..=width).map(|_| vec![0.0; n]).collect();
    for d in 0..=b {
        for (j, &v) in m.band(d).iter().enumerate() {
            data[d][j] = v;
        }
    }
    let mut w = Work { n, width, data };
    for j in 0..n.saturating_sub(2) {
        for d in (2..=b).rev() {
            let mut r = j + d;
            let mut col = j;
            while r < n {
                if !w.annihilate(r, col) {
                    break;
                }
                // the rotation spilled one entry to (r + b, r - 1)
                col = r - 1;
                r += b;
            }
        }
    }
    let diag = (0..n).map(|i| w.get(i, i)).collect();
    let off = (0..n - 1).map(|i| w.get(i + 1, i)).collect();
    (diag, off)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace_and_frobenius(d: &[f64], e: &[f64]) -> (f64, f64) {
        let t = d.iter().sum();
        let f = d.iter().map(|v| v * v).sum::<f64>() + 2.0 * e.iter().map(|v| v * v).sum::<f64>();
        (t, f)
    }

    #[test]
    fn invariants_preserved() {
        let n = 12;
        let mut m = SymmetricBandedMatrix::zeros(n, 2);
        for i in 0..n {
            m.set(i, i, 1.0 + (i as f64 * 0.7).sin());
            if i + 1 < n {
                m.set(i, i + 1, 0.3 + 0.1 * i as f64);
            }
            if i + 2 < n {
                m.set(i, i + 2, -0.2 * (i as f64).cos());
            }
        }
        let dense = m.to_dense();
        let trace: f64 = (0..n).map(|i| dense[i][i]).sum();
        let frob: f64 = dense.iter().flatten().map(|v| v * v).sum();
        let (d, e) = tridiagonalize(&m);
        let (t2, f2) = trace_and_frobenius(&d, &e);
        assert!((trace - t2).abs() < 1e-12);
        assert!((frob - f2).abs() < 1e-12);
    }

    #[test]
    fn tridiagonal_passthrough() {
        let m = SymmetricBandedMatrix::from_tridiagonal(&[1.0, 2.0, 3.0], &[4.0, 5.0]);
        assert_eq!(tridiagonalize(&m), (vec![1.0, 2.0, 3.0], vec![4.0, 5.0]));
    }
}
