use num_complex::Complex64;

use super::{Grid, OperatorError};

/// Complex samples on a grid, zero outside it.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    grid: Grid,
    samples: Vec<Complex64>,
    norm_squared: f64,
}

impl WaveFunction {
    pub fn new(grid: Grid, samples: Vec<Complex64>) -> Result<Self, OperatorError> {
        if samples.len() != grid.count {
            return Err(OperatorError::GridMismatch(format!(
                "{} samples for {} nodes",
                samples.len(),
                grid.count
            )));
        }
        if let Some(i) = samples.iter().position(|s| !(s.re.is_finite() && s.im.is_finite())) {
            return Err(OperatorError::NonFinite(format!("sample {i}")));
        }
        let norm_squared = grid.quadrature(samples.iter().map(|s| s.norm_sqr()));
        Ok(WaveFunction {
            grid,
            samples,
            norm_squared,
        })
    }

    pub fn from_real(grid: Grid, values: &[f64]) -> Result<Self, OperatorError> {
        Self::new(grid, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn from_fn<E: std::fmt::Display>(
        grid: Grid,
        f: impl Fn(f64) -> Result<Complex64, E>,
    ) -> Result<Self, OperatorError> {
        let samples = grid
            .nodes()
            .into_iter()
            .map(|x| f(x).map_err(|e| OperatorError::Evaluation(format!("at {x}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(grid, samples)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// `∫|ψ|²` by the grid rule.
    pub fn norm_squared(&self) -> f64 {
        self.norm_squared
    }

    pub fn is_real(&self) -> bool {
        self.samples.iter().all(|s| s.im == 0.0)
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.re).collect()
    }

    pub fn densities(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.norm_sqr()).collect()
    }

    pub fn normalized(&self) -> Result<Self, OperatorError> {
        if self.norm_squared <= 0.0 {
            return Err(OperatorError::ZeroNorm);
        }
        let scale = self.norm_squared.sqrt().recip();
        Self::new(self.grid, self.samples.iter().map(|s| s * scale).collect())
    }

    pub fn scaled(&self, factor: Complex64) -> Result<Self, OperatorError> {
        Self::new(self.grid, self.samples.iter().map(|s| s * factor).collect())
    }

    /// `⟨self, other⟩ = ∫ conj(self)·other`.
    pub fn inner(&self, other: &WaveFunction) -> Result<Complex64, OperatorError> {
        if self.grid != other.grid {
            return Err(OperatorError::GridMismatch("inner product".into()));
        }
        let sum: Complex64 = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(sum * self.grid.step)
    }

    /// Four-point cubic interpolation. Beyond the nodes the function is
    /// continued by the zero at the wall and an odd reflection across it,
    /// so values are defined on the closed span between the walls.
    pub fn interpolate(&self, at: f64) -> Result<Complex64, OperatorError> {
        let (lo, hi) = self.grid.walls();
        if !(at >= lo && at <= hi) {
            return Err(OperatorError::OutsideGrid { at, lo, hi });
        }
        let n = self.samples.len() as isize;
        let value = |j: isize| -> Complex64 {
            match j {
                -1 => Complex64::new(0.0, 0.0),
                j if j == n => Complex64::new(0.0, 0.0),
                j if j < -1 => -self.samples[(-2 - j) as usize],
                j if j > n => -self.samples[(2 * n - j) as usize],
                j => self.samples[j as usize],
            }
        };
        let t = (at - self.grid.start) / self.grid.step;
        let base = (t.floor() as isize).clamp(-1, n - 1);
        let u = t - base as f64;
        // Lagrange weights on nodes base-1 .. base+2
        let w = [
            -u * (u - 1.0) * (u - 2.0) / 6.0,
            (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0,
            -(u + 1.0) * u * (u - 2.0) / 2.0,
            (u + 1.0) * u * (u - 1.0) / 6.0,
        ];
        Ok((0..4).map(|k| value(base - 1 + k as isize) * w[k]).sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::Space;

    #[test]
    fn norm_and_inner() {
        let g = Grid::interior(0.0, 1.0, 3, Space::X).unwrap();
        let psi = WaveFunction::from_real(g, &[1.0, 2.0, 2.0]).unwrap();
        assert_eq!(psi.norm_squared(), 9.0 * 0.25);
        let n = psi.normalized().unwrap();
        assert!((n.norm_squared() - 1.0).abs() < 1e-15);
        let i = n.inner(&n).unwrap();
        assert!((i.re - 1.0).abs() < 1e-15 && i.im == 0.0);
    }

    #[test]
    fn rejects_bad_samples() {
        let g = Grid::interior(0.0, 1.0, 3, Space::X).unwrap();
        assert!(WaveFunction::from_real(g, &[1.0, 2.0]).is_err());
        assert!(WaveFunction::from_real(g, &[1.0, f64::NAN, 0.0]).is_err());
        let zero = WaveFunction::from_real(g, &[0.0; 3]).unwrap();
        assert_eq!(zero.normalized(), Err(OperatorError::ZeroNorm));
    }

    #[test]
    fn cubic_interpolation_is_exact_on_cubics_inside() {
        let g = Grid::spanning(-1.0, 2.0, 31, Space::Z).unwrap();
        let f = |x: f64| x * x * x - 2.0 * x + 0.5;
        let psi = WaveFunction::from_fn(g, |x| Ok::<_, String>(Complex64::new(f(x), 0.0))).unwrap();
        for at in [-0.87, 0.0, 0.333, 1.51] {
            let v = psi.interpolate(at).unwrap();
            assert!((v.re - f(at)).abs() < 1e-12, "{at}");
        }
        assert!(psi.interpolate(2.5).is_err());
    }

    #[test]
    fn odd_continuation_at_walls() {
        // sin vanishes at both walls, so the odd reflection is exact there
        let g = Grid::interior(0.0, std::f64::consts::PI, 400, Space::Z).unwrap();
        let psi =
            WaveFunction::from_fn(g, |z| Ok::<_, String>(Complex64::new(z.sin(), 0.0))).unwrap();
        for at in [0.0, 1e-3, 0.004, 3.14, std::f64::consts::PI] {
            let v = psi.interpolate(at).unwrap();
            assert!((v.re - at.sin()).abs() < 1e-10, "{at}: {}", v.re - at.sin());
        }
    }
}
