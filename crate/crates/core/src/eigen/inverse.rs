//! Shifted banded LU with partial pivoting, used for inverse iteration on
//! the original band matrix.

use crate::operator::SymmetricBandedMatrix;

/// LU factors of `M − σI`. Row `i` of `rows` holds columns `i − b ..= i + 2b`
/// (index `j − i + b`); after factorization it holds U's row.
pub struct ShiftedLu {
    n: usize,
    b: usize,
    rows: Vec<Vec<f64>>,
    pivots: Vec<usize>,
    multipliers: Vec<Vec<f64>>,
}

impl ShiftedLu {
    pub fn new(m: &SymmetricBandedMatrix, shift: f64) -> ShiftedLu {
        let n = m.dim();
        let b = m.bandwidth();
        let width = 3 * b + 1;
        let mut rows = vec![vec![0.0; width]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            let lo = i.saturating_sub(b);
            let hi = (i + b).min(n - 1);
            for j in lo..=hi {
                row[j + b - i] = m.get(i, j);
            }
            row[b] -= shift;
        }
        let floor = f64::EPSILON * m.norm_inf().max(shift.abs()).max(f64::MIN_POSITIVE);
        let mut lu = ShiftedLu {
            n,
            b,
            rows,
            pivots: vec![0; n],
            multipliers: vec![vec![0.0; b]; n],
        };
        lu.factor(floor);
        lu
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.rows[i][j + self.b - i]
    }

    fn factor(&mut self, floor: f64) {
        let (n, b) = (self.n, self.b);
        for k in 0..n {
            let last = (k + b).min(n - 1);
            let mut p = k;
            for r in k + 1..=last {
                if self.at(r, k).abs() > self.at(p, k).abs() {
                    p = r;
                }
            }
            self.pivots[k] = p;
            let right = (k + 2 * b).min(n - 1);
            if p != k {
                for c in k..=right {
                    let a = self.at(k, c);
                    let v = self.at(p, c);
                    self.rows[k][c + b - k] = v;
                    self.rows[p][c + b - p] = a;
                }
            }
            if self.at(k, k).abs() < floor {
                self.rows[k][b] = if self.at(k, k) < 0.0 { -floor } else { floor };
            }
            let pivot = self.at(k, k);
            for r in k + 1..=last {
                let l = self.at(r, k) / pivot;
                self.multipliers[k][r - k - 1] = l;
                if l == 0.0 {
                    continue;
                }
                self.rows[r][k + b - r] = 0.0;
                for c in k + 1..=right {
                    let v = self.at(k, c);
                    self.rows[r][c + b - r] -= l * v;
                }
            }
        }
    }

    pub fn solve(&self, rhs: &mut [f64]) {
        let (n, b) = (self.n, self.b);
        for k in 0..n {
            rhs.swap(k, self.pivots[k]);
            let last = (k + b).min(n - 1);
            for r in k + 1..=last {
                rhs[r] -= self.multipliers[k][r - k - 1] * rhs[k];
            }
        }
        for k in (0..n).rev() {
            let right = (k + 2 * b).min(n - 1);
            let mut s = rhs[k];
            for c in k + 1..=right {
                s -= self.at(k, c) * rhs[c];
            }
            rhs[k] = s / self.at(k, k);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_shifted_system() {
        let n = 9;
        let mut m = SymmetricBandedMatrix::zeros(n, 2);
        for i in 0..n {
            m.set(i, i, 0.1 * i as f64);
            if i + 1 < n {
                m.set(i, i + 1, 1.0 + 0.2 * i as f64);
            }
            if i + 2 < n {
                m.set(i, i + 2, 0.5 - 0.1 * i as f64);
            }
        }
        let shift = 0.37;
        let x: Vec<f64> = (0..n).map(|i| (i as f64).sin() + 0.5).collect();
        let mut rhs = m.matvec(&x);
        for i in 0..n {
            rhs[i] -= shift * x[i];
        }
        ShiftedLu::new(&m, shift).solve(&mut rhs);
        for (a, b) in rhs.iter().zip(&x) {
            assert!((a - b).abs() < 1e-12, "{a} {b}");
        }
    }
}
