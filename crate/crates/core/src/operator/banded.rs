/// Real symmetric matrix stored as its diagonal and upper bands.
///
/// `bands[d][i]` holds `M[i][i + d]`; symmetry holds by construction
/// since the lower triangle is never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricBandedMatrix {
    n: usize,
    bands: Vec<Vec<f64>>,
}

impl SymmetricBandedMatrix {
    pub fn zeros(n: usize, bandwidth: usize) -> Self {
        assert!(n > 0, "empty matrix");
        let bands = (0..=bandwidth)
            .map(|d| vec![0.0; n.saturating_sub(d)])
            .collect();
        SymmetricBandedMatrix { n, bands }
    }

    pub fn from_tridiagonal(diagonal: &[f64], off: &[f64]) -> Self {
        assert_eq!(off.len() + 1, diagonal.len());
        SymmetricBandedMatrix {
            n: diagonal.len(),
            bands: vec![diagonal.to_vec(), off.to_vec()],
        }
    }

    /// Builds from a dense symmetric matrix, keeping `bandwidth` bands of
    /// the upper triangle.
    pub fn from_dense(dense: &[Vec<f64>], bandwidth: usize) -> Self {
        let n = dense.len();
        let mut m = Self::zeros(n, bandwidth);
        for d in 0..=bandwidth.min(n - 1) {
            for i in 0..n - d {
                m.bands[d][i] = dense[i][i + d];
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bands.len() - 1
    }

    pub fn band(&self, d: usize) -> &[f64] {
        &self.bands[d]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        let d = j - i;
        if d < self.bands.len() {
            self.bands[d][i]
        } else {
            0.0
        }
    }

    /// Sets `M[i][j]` and, implicitly, `M[j][i]`.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        let d = j - i;
        assert!(d < self.bands.len(), "({i}, {j}) outside the band");
        self.bands[d][i] = value;
    }

    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        let v = self.get(i, j);
        self.set(i, j, v + value);
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n);
        let mut out: Vec<f64> = self.bands[0].iter().zip(v).map(|(a, b)| a * b).collect();
        for (d, band) in self.bands.iter().enumerate().skip(1) {
            for (i, &m) in band.iter().enumerate() {
                out[i] += m * v[i + d];
                out[i + d] += m * v[i];
            }
        }
        out
    }

    /// Max absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.bandwidth());
                let hi = (i + self.bandwidth()).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j).abs()).sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.bands.iter().flatten().all(|v| v.is_finite())
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// Returns a copy with `shift` added to the diagonal.
    pub fn shifted(&self, shift: f64) -> Self {
        let mut m = self.clone();
        m.bands[0].iter_mut().for_each(|d| *d += shift);
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_access_and_matvec() {
        let mut m = SymmetricBandedMatrix::zeros(4, 2);
        for i in 0..4 {
            m.set(i, i, 2.0 + i as f64);
        }
        m.set(0, 1, -1.0);
        m.set(3, 1, 0.5);
        assert_eq!(m.get(1, 0), -1.0);
        assert_eq!(m.get(1, 3), 0.5);
        assert_eq!(m.get(0, 3), 0.0);
        let v = [1.0, 2.0, 3.0, 4.0];
        let dense = m.to_dense();
        let expect: Vec<f64> = dense
            .iter()
            .map(|row| row.iter().zip(&v).map(|(a, b)| a * b).sum())
            .collect();
        assert_eq!(m.matvec(&v), expect);
        assert_eq!(m.norm_inf(), 5.5);
    }

    #[test]
    #[should_panic]
    fn outside_band_panics() {
        let mut m = SymmetricBandedMatrix::zeros(4, 1);
        m.set(0, 2, 1.0);
    }
}
