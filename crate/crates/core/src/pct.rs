//! Point canonical transformation `z(x) = z₀ + ∫_{x_ref}^x dy / (1 + μ(y))`
//! and the matching rescaling `φ(x) = χ(z(x)) / √(1 + μ(x))`.

use num_complex::Complex64;
use thiserror::Error;

use crate::deform::{DeformError, Deformation, Domain};
use crate::operator::{Grid, OperatorError, Space, WaveFunction};
use crate::quad::{self, QuadError};

/// Nodes in the cached (x, z) table.
const TABLE_SIZE: usize = 257;
const TABLE_TOL: f64 = 1e-13;
const MAP_TOL: f64 = 1e-12;
/// An improper integral beyond this is treated as divergent.
const DIVERGENT: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PctError {
    #[error(transparent)]
    Deform(#[from] DeformError),
    #[error("quadrature did not converge on [{lo}, {hi}]")]
    Quadrature { lo: f64, hi: f64 },
    #[error("x = {x} outside the deformation domain [{lo}, {hi}]")]
    OutsideDomain { x: f64, lo: f64, hi: f64 },
    #[error("z = {z} outside the image [{lo}, {hi}] of the domain")]
    OutsideImage { z: f64, lo: f64, hi: f64 },
    #[error("inversion did not converge at z = {z}")]
    Inversion { z: f64 },
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

impl From<QuadError<DeformError>> for PctError {
    fn from(e: QuadError<DeformError>) -> Self {
        match e {
            QuadError::Integrand(d) => PctError::Deform(d),
            QuadError::NotConverged { lo, hi } => PctError::Quadrature { lo, hi },
        }
    }
}

#[derive(Debug, Clone)]
pub struct CoordinateMap {
    deformation: Deformation,
    x_ref: f64,
    z0: f64,
    /// Finite nodes, strictly increasing in both columns.
    table: Vec<(f64, f64)>,
    image: Domain,
}

impl CoordinateMap {
    /// `x_ref = 0, z₀ = 0`, with `x_ref` clamped into the domain when 0
    /// lies outside it.
    pub fn new(deformation: Deformation) -> Result<CoordinateMap, PctError> {
        let d = deformation.domain();
        let x_ref = 0.0f64.clamp(d.lo, d.hi);
        CoordinateMap::with_reference(deformation, x_ref, 0.0)
    }

    pub fn with_reference(deformation: Deformation, x_ref: f64, z0: f64) -> Result<CoordinateMap, PctError> {
        let domain = deformation.domain();
        if !(x_ref.is_finite() && domain.contains(x_ref)) {
            return Err(PctError::OutsideDomain {
                x: x_ref,
                lo: domain.lo,
                hi: domain.hi,
            });
        }
        deformation.ensure_valid_on(domain, 4 * TABLE_SIZE)?;

        let mut xs: Vec<f64> = domain
            .sample_points(TABLE_SIZE)
            .into_iter()
            .filter(|x| x.is_finite() && x.abs() < 1e15)
            .collect();
        xs.push(x_ref);
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        let r = xs.iter().position(|&x| x == x_ref).unwrap_or(0);

        let inv = |y: f64| deformation.one_plus_mu(y).map(|g| 1.0 / g);
        let mut zs = vec![0.0; xs.len()];
        zs[r] = z0;
        for i in r + 1..xs.len() {
            zs[i] = zs[i - 1] + quad::integrate(inv, xs[i - 1], xs[i], TABLE_TOL)?;
        }
        for i in (0..r).rev() {
            zs[i] = zs[i + 1] - quad::integrate(inv, xs[i], xs[i + 1], TABLE_TOL)?;
        }
        let tail = |from: f64, to: f64| match quad::integrate(inv, from, to, MAP_TOL) {
            Ok(v) if v.abs() < DIVERGENT => v,
            _ => to,
        };
        let lo = if domain.lo.is_finite() {
            zs[0]
        } else {
            zs[0] + tail(xs[0], f64::NEG_INFINITY)
        };
        let last = xs.len() - 1;
        let hi = if domain.hi.is_finite() {
            zs[last]
        } else {
            zs[last] + tail(xs[last], f64::INFINITY)
        };
        let table = xs.into_iter().zip(zs).collect();
        Ok(CoordinateMap {
            deformation,
            x_ref,
            z0,
            table,
            image: Domain { lo, hi },
        })
    }

    pub fn deformation(&self) -> &Deformation {
        &self.deformation
    }

    pub fn reference(&self) -> (f64, f64) {
        (self.x_ref, self.z0)
    }

    /// Image of the deformation domain. Ends that correspond to an
    /// infinite x are open.
    pub fn image(&self) -> Domain {
        self.image
    }

    fn nearest(&self, x: f64) -> (f64, f64) {
        let i = self.table.partition_point(|&(t, _)| t < x);
        let candidates = [i.saturating_sub(1), i.min(self.table.len() - 1)];
        let j = candidates
            .into_iter()
            .min_by(|&a, &b| (self.table[a].0 - x).abs().total_cmp(&(self.table[b].0 - x).abs()))
            .unwrap();
        self.table[j]
    }

    pub fn forward_map(&self, x: f64) -> Result<f64, PctError> {
        let domain = self.deformation.domain();
        if !(x.is_finite() && domain.contains(x)) {
            return Err(PctError::OutsideDomain {
                x,
                lo: domain.lo,
                hi: domain.hi,
            });
        }
        let (xn, zn) = self.nearest(x);
        if xn == x {
            return Ok(zn);
        }
        let inv = |y: f64| self.deformation.one_plus_mu(y).map(|g| 1.0 / g);
        Ok(zn + quad::integrate(inv, xn, x, MAP_TOL)?)
    }

    pub fn inverse_map(&self, z: f64) -> Result<f64, PctError> {
        let domain = self.deformation.domain();
        let Domain { lo, hi } = self.image;
        let inside_lo = if domain.lo.is_finite() { z >= lo } else { z > lo };
        let inside_hi = if domain.hi.is_finite() { z <= hi } else { z < hi };
        if !(z.is_finite() && inside_lo && inside_hi) {
            return Err(PctError::OutsideImage { z, lo, hi });
        }
        let (mut a, mut b) = self.bracket(z)?;
        if a == b {
            return Ok(a);
        }
        let residual = |x: f64| self.forward_map(x).map(|v| v - z);
        // bisection until the bracket is small, then safeguarded Newton
        for _ in 0..60 {
            if b - a <= 1e-6 * (1.0 + a.abs().max(b.abs())) {
                break;
            }
            let m = 0.5 * (a + b);
            if residual(m)? < 0.0 {
                a = m;
            } else {
                b = m;
            }
        }
        let mut x = 0.5 * (a + b);
        for _ in 0..50 {
            let f = residual(x)?;
            if f == 0.0 {
                return Ok(x);
            }
            if f < 0.0 {
                a = x;
            } else {
                b = x;
            }
            let mut next = x - f * self.deformation.one_plus_mu(x)?;
            if !(next > a && next < b) {
                next = 0.5 * (a + b);
            }
            if (next - x).abs() <= 4.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) || next == x {
                return Ok(next);
            }
            x = next;
        }
        if residual(x)?.abs() <= 1e-10 {
            Ok(x)
        } else {
            Err(PctError::Inversion { z })
        }
    }

    /// x interval whose image contains z.
    fn bracket(&self, z: f64) -> Result<(f64, f64), PctError> {
        let i = self.table.partition_point(|&(_, t)| t < z);
        if i < self.table.len() && self.table[i].1 == z {
            return Ok((self.table[i].0, self.table[i].0));
        }
        if i > 0 && i < self.table.len() {
            return Ok((self.table[i - 1].0, self.table[i].0));
        }
        // beyond the table towards an infinite end: step outward, doubling
        let upward = i > 0;
        let (mut inner, _) = if upward { self.table[i - 1] } else { self.table[0] };
        let mut step = 1.0f64.max(inner.abs());
        for _ in 0..1100 {
            let outer = if upward { inner + step } else { inner - step };
            if !outer.is_finite() {
                break;
            }
            let v = self.forward_map(outer)?;
            if (upward && v >= z) || (!upward && v <= z) {
                return Ok(if upward { (inner, outer) } else { (outer, inner) });
            }
            inner = outer;
            step *= 2.0;
        }
        Err(PctError::Inversion { z })
    }

    /// `φ(xᵢ) = χ(z(xᵢ)) / √(1 + μ(xᵢ))`, with χ interpolated by cubics on
    /// its z-grid.
    pub fn pull_back_wavefunction(&self, chi: &WaveFunction, x_grid: Grid) -> Result<WaveFunction, PctError> {
        for (grid, space) in [(chi.grid(), Space::Z), (&x_grid, Space::X)] {
            if grid.space != space {
                return Err(OperatorError::WrongSpace {
                    expected: space,
                    found: grid.space,
                }
                .into());
            }
        }
        let samples = x_grid
            .nodes()
            .into_iter()
            .map(|x| {
                let z = self.forward_map(x)?;
                let value = chi.interpolate(z)?;
                let g = self.deformation.one_plus_mu(x)?;
                Ok(value / Complex64::new(g.sqrt(), 0.0))
            })
            .collect::<Result<Vec<_>, PctError>>()?;
        Ok(WaveFunction::new(x_grid, samples)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, LN_2};

    #[test]
    fn closed_form_examples() {
        let q = CoordinateMap::new(Deformation::quadratic(1.0).unwrap()).unwrap();
        assert!((q.forward_map(1.0).unwrap() - FRAC_PI_4).abs() < 1e-12);
        assert!((q.inverse_map(FRAC_PI_4).unwrap() - 1.0).abs() < 1e-10);
        assert!((q.image().hi - FRAC_PI_2).abs() < 1e-10);
        assert!(matches!(q.inverse_map(1.6), Err(PctError::OutsideImage { .. })));

        let z = CoordinateMap::new(Deformation::zero()).unwrap();
        assert!((z.forward_map(3.0).unwrap() - 3.0).abs() < 1e-12);
        assert!(z.image().hi.is_infinite());

        let e = CoordinateMap::new(Deformation::exponential(1.0).unwrap()).unwrap();
        assert!((e.forward_map(LN_2).unwrap() - 1.0).abs() < 1e-12);
        assert!((e.inverse_map(1.0).unwrap() - LN_2).abs() < 1e-10);
    }

    #[test]
    fn closed_forms_over_test_domain() {
        let q = CoordinateMap::new(Deformation::quadratic(2.0).unwrap()).unwrap();
        let e = CoordinateMap::new(Deformation::exponential(0.5).unwrap()).unwrap();
        for i in 0..=200 {
            let x = -10.0 + 0.1 * i as f64;
            assert!((q.forward_map(x).unwrap() - (2.0 * x).atan() / 2.0).abs() < 1e-9);
            let want = ((0.5 * x).exp() - 1.0) / 0.5;
            assert!((e.forward_map(x).unwrap() - want).abs() < 1e-9 * want.abs().max(1.0));
        }
    }

    #[test]
    fn round_trip_and_monotone() {
        for d in [
            Deformation::quadratic(1.0).unwrap(),
            Deformation::exponential(1.0).unwrap(),
            Deformation::zero(),
        ] {
            let m = CoordinateMap::new(d).unwrap();
            let mut previous = f64::NEG_INFINITY;
            for i in 0..1000 {
                let x = -9.99 + 19.98 * i as f64 / 999.0;
                let z = m.forward_map(x).unwrap();
                assert!(z > previous);
                previous = z;
                let back = m.inverse_map(z).unwrap();
                assert!((back - x).abs() <= 1e-9, "{x} {back}");
            }
        }
    }

    #[test]
    fn reference_offset() {
        let m = CoordinateMap::with_reference(Deformation::zero(), 1.0, 5.0).unwrap();
        assert_eq!(m.forward_map(1.0).unwrap(), 5.0);
        assert!((m.forward_map(2.5).unwrap() - 6.5).abs() < 1e-12);
        assert!(CoordinateMap::with_reference(Deformation::exponential(1.0).unwrap(), 20.0, 0.0).is_err());
    }

    #[test]
    fn far_tail_inversion() {
        let m = CoordinateMap::new(Deformation::quadratic(1.0).unwrap()).unwrap();
        let z = FRAC_PI_2 - 1e-6;
        let x = m.inverse_map(z).unwrap();
        // dx/dz = 1 + x² ≈ 1e12 here, so only ~1e-16 of z survives
        assert!((x - z.tan()).abs() < 1e-6 * z.tan(), "{x}");
        assert!(m.inverse_map(FRAC_PI_2 + 1e-9).is_err());
    }

    #[test]
    fn pull_back_box_ground_state() {
        let m = CoordinateMap::new(Deformation::quadratic(1.0).unwrap()).unwrap();
        let zg = Grid::interior(-FRAC_PI_2, FRAC_PI_2, 4001, Space::Z).unwrap();
        let chi = WaveFunction::from_fn(zg, |z| {
            Ok::<_, String>(Complex64::new((2.0 / std::f64::consts::PI).sqrt() * z.cos(), 0.0))
        })
        .unwrap();
        let xg = Grid::interior(-20.0, 20.0, 2001, Space::X).unwrap();
        let phi = m.pull_back_wavefunction(&chi, xg).unwrap();
        for (x, v) in xg.nodes().iter().zip(phi.samples()) {
            let want = (2.0 / std::f64::consts::PI).sqrt() / (1.0 + x * x);
            assert!((v.re - want).abs() < 1e-6, "{x}");
        }
        let zero = CoordinateMap::new(Deformation::zero()).unwrap();
        let zg = Grid::interior(0.0, 1.0, 9, Space::Z).unwrap();
        let chi = WaveFunction::from_real(zg, &[1.0, 2.0, 3.0, 4.0, 5.0, 4.0, 3.0, 2.0, 1.0]).unwrap();
        let xg = Grid::interior(0.0, 1.0, 9, Space::X).unwrap();
        let phi = zero.pull_back_wavefunction(&chi, xg).unwrap();
        for (a, b) in phi.samples().iter().zip(chi.samples()) {
            assert!((a - b).norm() < 1e-12);
        }
        let wide = Grid::interior(-2.0, 2.0, 9, Space::X).unwrap();
        assert!(zero.pull_back_wavefunction(&chi, wide).is_err());
    }
}
