//! Discretized operators: the x-space Hamiltonian of the deformed
//! momentum, the standard z-space Hamiltonian, and the momentum operator
//! itself applied to sampled states.

mod banded;
mod grid;
mod hamiltonian;
mod momentum;
mod potential;
mod wavefunction;

pub use banded::SymmetricBandedMatrix;
pub use grid::{Grid, Placement, Space};
pub use hamiltonian::{build_x_hamiltonian, build_x_hamiltonian_with, build_z_hamiltonian, KineticStencil};
pub use momentum::{apply_momentum, commutator_residual};
pub use potential::Potential;
pub use wavefunction::WaveFunction;

use serde::Serialize;
use thiserror::Error;

use crate::deform::DeformError;
use crate::expr::EvalError;

/// ħ and the particle mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Physics {
    pub hbar: f64,
    pub mass: f64,
}

impl Default for Physics {
    fn default() -> Self {
        Physics {
            hbar: 1.0,
            mass: 1.0,
        }
    }
}

impl Physics {
    pub fn check(&self) -> Result<(), OperatorError> {
        if !(self.mass.is_finite() && self.mass > 0.0) {
            return Err(OperatorError::BadConstant(format!("mass {}", self.mass)));
        }
        if !(self.hbar.is_finite() && self.hbar > 0.0) {
            return Err(OperatorError::BadConstant(format!("hbar {}", self.hbar)));
        }
        Ok(())
    }

    /// ħ²/2m
    pub fn kinetic_scale(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mass)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OperatorError {
    #[error("bad grid: {0}")]
    BadGrid(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("expected a {expected:?}-space grid, got {found:?}")]
    WrongSpace { expected: Space, found: Space },
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("wavefunction has zero norm")]
    ZeroNorm,
    #[error("{at} lies outside the grid span [{lo}, {hi}]")]
    OutsideGrid { at: f64, lo: f64, hi: f64 },
    #[error("evaluation failed {0}")]
    Evaluation(String),
    #[error("potential at {at}: {source}")]
    Potential { at: f64, source: EvalError },
    #[error(transparent)]
    Deform(#[from] DeformError),
    #[error("bad physical constant: {0}")]
    BadConstant(String),
}
