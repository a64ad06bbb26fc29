//! Moments, uncertainties and the extended uncertainty bound for sampled
//! and closed-form states.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::analytic::{self, AnalyticError, AnalyticState};
use crate::deform::{DeformError, Deformation};
use crate::operator::{apply_momentum, Grid, OperatorError, Placement, WaveFunction};

/// Allowed deviation of the input norm from 1.
pub const NORM_TOLERANCE: f64 = 1e-6;
/// Slack below the bound before a violation is flagged.
pub const BOUND_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ObservableError {
    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),
    #[error("minimum-momentum scan needs a quadratic deformation")]
    NotQuadratic,
    #[error("scan needs n_max >= 2, got {0}")]
    ScanTooShort(u32),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
    #[error(transparent)]
    Deform(#[from] DeformError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PositionMoments {
    pub mean: f64,
    pub mean_square: f64,
    pub spread: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentumMoments {
    pub mean_re: f64,
    pub mean_im: f64,
    pub mean_square: f64,
    pub spread: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    /// `(ħ/2)(1 + α²⟨x²⟩)`
    Quadratic,
    /// `(ħ/2)|⟨1 + μ⟩|`
    Generic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UncertaintyReport {
    pub position: PositionMoments,
    pub momentum: MomentumMoments,
    pub product: f64,
    pub bound: f64,
    pub bound_kind: BoundKind,
    pub violated: bool,
}

fn spread(mean_square: f64, mean_abs2: f64) -> f64 {
    (mean_square - mean_abs2).max(0.0).sqrt()
}

/// Anything whose moments can be taken.
pub trait State {
    fn position_moments(&self) -> Result<PositionMoments, ObservableError>;
    fn momentum_moments(&self, d: &Deformation, hbar: f64) -> Result<MomentumMoments, ObservableError>;
    /// `⟨1 + μ⟩`
    fn mean_one_plus_mu(&self, d: &Deformation) -> Result<f64, ObservableError>;
}

fn check_norm(norm: f64) -> Result<(), ObservableError> {
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        Err(ObservableError::NotNormalized(norm))
    } else {
        Ok(())
    }
}

impl State for WaveFunction {
    fn position_moments(&self) -> Result<PositionMoments, ObservableError> {
        check_norm(self.norm_squared())?;
        let grid = self.grid();
        let rho = self.densities();
        let xs = grid.nodes();
        let mean = grid.quadrature(xs.iter().zip(&rho).map(|(x, r)| x * r));
        let mean_square = grid.quadrature(xs.iter().zip(&rho).map(|(x, r)| x * x * r));
        Ok(PositionMoments {
            mean,
            mean_square,
            spread: spread(mean_square, mean * mean),
        })
    }

    /// On an interior grid the state is extended by its zero wall values so
    /// that ‖pψ‖² picks up the wall slopes (trapezoid rule, half weights at
    /// the walls).
    fn momentum_moments(&self, d: &Deformation, hbar: f64) -> Result<MomentumMoments, ObservableError> {
        check_norm(self.norm_squared())?;
        let psi = match self.grid().placement {
            Placement::Interior => {
                let (lo, hi) = self.grid().walls();
                let grid = Grid::spanning(lo, hi, self.grid().count + 2, self.grid().space)?;
                let mut samples = Vec::with_capacity(grid.count);
                samples.push(Complex64::new(0.0, 0.0));
                samples.extend_from_slice(self.samples());
                samples.push(Complex64::new(0.0, 0.0));
                WaveFunction::new(grid, samples)?
            }
            Placement::Spanning => self.clone(),
        };
        let p = apply_momentum(d, &psi, hbar)?;
        let mean = psi.inner(&p)?;
        let q = p.samples();
        let ends = 0.5 * (q[0].norm_sqr() + q[q.len() - 1].norm_sqr());
        let mean_square = p.norm_squared() - psi.grid().step * ends;
        Ok(MomentumMoments {
            mean_re: mean.re,
            mean_im: mean.im,
            mean_square,
            spread: spread(mean_square, mean.norm_sqr()),
        })
    }

    fn mean_one_plus_mu(&self, d: &Deformation) -> Result<f64, ObservableError> {
        let grid = self.grid();
        let g = grid
            .nodes()
            .iter()
            .map(|&x| d.one_plus_mu(x))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(grid.quadrature(g.iter().zip(self.densities()).map(|(g, r)| g * r)))
    }
}

impl State for AnalyticState {
    fn position_moments(&self) -> Result<PositionMoments, ObservableError> {
        check_norm(self.integrate(|_, phi, _| phi * phi)?)?;
        let mean = self.integrate(|x, phi, _| x * phi * phi)?;
        let mean_square = self.integrate(|x, phi, _| x * x * phi * phi)?;
        Ok(PositionMoments {
            mean,
            mean_square,
            spread: spread(mean_square, mean * mean),
        })
    }

    /// For real φ, `pφ = −iħR` with `R = (1 + μ)φ′ + ½μ′φ`.
    fn momentum_moments(&self, d: &Deformation, hbar: f64) -> Result<MomentumMoments, ObservableError> {
        check_norm(self.integrate(|_, phi, _| phi * phi)?)?;
        let r = |x: f64, phi: f64, dphi: f64| match d.evaluate_triple(x) {
            Ok(t) => (1.0 + t.mu) * dphi + 0.5 * t.mu1 * phi,
            Err(_) => f64::NAN,
        };
        let mean = Complex64::new(0.0, -hbar * self.integrate(|x, phi, dphi| phi * r(x, phi, dphi))?);
        let mean_square = hbar * hbar * self.integrate(|x, phi, dphi| r(x, phi, dphi).powi(2))?;
        Ok(MomentumMoments {
            mean_re: mean.re,
            mean_im: mean.im,
            mean_square,
            spread: spread(mean_square, mean.norm_sqr()),
        })
    }

    fn mean_one_plus_mu(&self, d: &Deformation) -> Result<f64, ObservableError> {
        Ok(self.integrate(|x, phi, _| d.one_plus_mu(x).map_or(f64::NAN, |g| g * phi * phi))?)
    }
}

pub fn position_moments(psi: &impl State) -> Result<PositionMoments, ObservableError> {
    psi.position_moments()
}

pub fn momentum_moments(d: &Deformation, psi: &impl State, hbar: f64) -> Result<MomentumMoments, ObservableError> {
    psi.momentum_moments(d, hbar)
}

pub fn uncertainty_report(d: &Deformation, psi: &impl State, hbar: f64) -> Result<UncertaintyReport, ObservableError> {
    let position = psi.position_moments()?;
    let momentum = psi.momentum_moments(d, hbar)?;
    let (bound, bound_kind) = match d.quadratic_alpha() {
        Some(alpha) => (0.5 * hbar * (1.0 + alpha * alpha * position.mean_square), BoundKind::Quadratic),
        None => (0.5 * hbar * psi.mean_one_plus_mu(d)?.abs(), BoundKind::Generic),
    };
    let product = position.spread * momentum.spread;
    Ok(UncertaintyReport {
        position,
        momentum,
        product,
        bound,
        bound_kind,
        violated: product < bound - BOUND_TOLERANCE,
    })
}

/// δp over the closed-form box states n = 1..=n_max; returns the
/// minimizing n and its δp.
pub fn minimum_dp_scan(d: &Deformation, n_max: u32, hbar: f64) -> Result<(u32, f64), ObservableError> {
    let alpha = d.quadratic_alpha().ok_or(ObservableError::NotQuadratic)?;
    if n_max < 2 {
        return Err(ObservableError::ScanTooShort(n_max));
    }
    let mut best = (0, f64::INFINITY);
    for n in 1..=n_max {
        let dp = analytic::box_state(n, alpha)?.momentum_moments(d, hbar)?.spread;
        if dp < best.1 {
            best = (n, dp);
        }
    }
    Ok(best)
}
