//! Data behind the two figures: box densities under the quadratic
//! deformation, and half-oscillator densities under the exponential one.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use serde::Serialize;

use crate::analytic::{self, AnalyticState};
use crate::error::StageError;
use crate::operator::{Grid, Potential, Space};
use crate::pipeline::{write_csv, write_json};

/// Default sample count; odd so that x = 0 is a node of the fig1 axis.
pub const DEFAULT_SAMPLES: usize = 513;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig1,
    Fig2,
}

impl Figure {
    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureOptions {
    /// α for fig1, γ for fig2.
    pub alpha: Option<f64>,
    pub grid_n: Option<usize>,
    pub space: Option<Space>,
    pub states: Option<usize>,
    pub out: PathBuf,
}

impl Default for FigureOptions {
    fn default() -> Self {
        FigureOptions {
            alpha: None,
            grid_n: None,
            space: None,
            states: None,
            out: PathBuf::from("out"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Level {
    pub n: u32,
    pub energy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Sidecar {
    pub figure: &'static str,
    pub space: Space,
    pub samples: usize,
    pub interval: [f64; 2],
    pub parameters: BTreeMap<&'static str, f64>,
    pub levels: Vec<Level>,
}

#[derive(Debug, Clone)]
pub struct FigureData {
    pub header: Vec<String>,
    pub columns: Vec<Vec<f64>>,
    pub sidecar: Sidecar,
}

fn analytic_error(e: impl std::fmt::Display) -> StageError {
    StageError::failure("analytic", e)
}

fn densities(states: &[(u32, AnalyticState)], axis: &[f64], header: &mut Vec<String>, columns: &mut Vec<Vec<f64>>) -> Result<(), StageError> {
    for (n, s) in states {
        header.push(format!("rho_{n}"));
        columns.push(
            axis.iter()
                .map(|&x| s.value(x).map(|v| v * v))
                .collect::<Result<_, _>>()
                .map_err(analytic_error)?,
        );
    }
    Ok(())
}

pub fn figure_data(which: Figure, opts: &FigureOptions) -> Result<FigureData, StageError> {
    let samples = opts.grid_n.unwrap_or(DEFAULT_SAMPLES);
    if samples < 3 {
        return Err(StageError::input("config", format!("figures need at least 3 samples, got {samples}")));
    }
    let param = opts.alpha.unwrap_or(1.0);
    if !(param.is_finite() && param > 0.0) {
        return Err(StageError::input("config", format!("alpha must be positive, got {param}")));
    }
    let count = opts.states.unwrap_or(match which {
        Figure::Fig1 => 4,
        Figure::Fig2 => 3,
    });
    if count < 1 {
        return Err(StageError::input("config", "states must be at least 1"));
    }
    let space = opts.space.unwrap_or(Space::X);
    let mut header = vec![space.label().to_string()];
    let mut columns = Vec::new();
    let mut parameters = BTreeMap::from([("hbar", 1.0), ("mass", 1.0)]);
    let (interval, levels) = match which {
        Figure::Fig1 => {
            let alpha = param;
            parameters.insert("alpha", alpha);
            let interval = match space {
                Space::X => (-6.0, 6.0),
                Space::Z => (-std::f64::consts::PI / (2.0 * alpha), std::f64::consts::PI / (2.0 * alpha)),
            };
            let grid = Grid::spanning(interval.0, interval.1, samples, space).map_err(|e| StageError::input("config", e))?;
            let axis = grid.nodes();
            let states = (1..=count as u32)
                .map(|n| {
                    let s = match space {
                        Space::X => analytic::box_state(n, alpha),
                        Space::Z => analytic::box_state_z(n, alpha),
                    };
                    s.map(|s| (n, s))
                })
                .collect::<Result<Vec<_>, _>>()
                .map_err(analytic_error)?;
            columns.push(axis.clone());
            densities(&states, &axis, &mut header, &mut columns)?;
            let levels = (1..=count as u32)
                .map(|n| {
                    analytic::box_energy(n, alpha, 1.0, 1.0).map(|energy| Level { n, energy })
                })
                .collect::<Result<Vec<_>, _>>()
                .map_err(analytic_error)?;
            (interval, levels)
        }
        Figure::Fig2 => {
            let (gamma, v0) = (param, 1.0);
            parameters.insert("gamma", gamma);
            parameters.insert("v0", v0);
            let omega = analytic::half_oscillator_omega(gamma, v0, 1.0).map_err(analytic_error)?;
            parameters.insert("omega", omega);
            let x_max = 2.5;
            let interval = match space {
                Space::X => (0.0, x_max),
                Space::Z => (0.0, ((gamma * x_max).exp() - 1.0) / gamma),
            };
            let grid = Grid::spanning(interval.0, interval.1, samples, space).map_err(|e| StageError::input("config", e))?;
            let axis = grid.nodes();
            let states = (0..count as u32)
                .map(|n| {
                    let s = match space {
                        Space::X => analytic::half_oscillator_state_x(n, gamma, v0, 1.0, 1.0),
                        Space::Z => analytic::half_oscillator_state_z(n, omega, 1.0, 1.0),
                    };
                    s.map(|s| (n, s))
                })
                .collect::<Result<Vec<_>, _>>()
                .map_err(analytic_error)?;
            columns.push(axis.clone());
            densities(&states, &axis, &mut header, &mut columns)?;
            let v = Potential::half_morse(v0, gamma);
            header.push("V".into());
            columns.push(
                axis.iter()
                    .map(|&t| {
                        let x = match space {
                            Space::X => t,
                            Space::Z => (gamma * t).ln_1p() / gamma,
                        };
                        v.evaluate(x)
                    })
                    .collect::<Result<_, _>>()
                    .map_err(analytic_error)?,
            );
            let levels = (0..count as u32)
                .map(|n| {
                    analytic::half_oscillator_energy(n, omega, 1.0).map(|energy| Level { n, energy })
                })
                .collect::<Result<Vec<_>, _>>()
                .map_err(analytic_error)?;
            (interval, levels)
        }
    };
    Ok(FigureData {
        header,
        columns,
        sidecar: Sidecar {
            figure: which.name(),
            space,
            samples,
            interval: [interval.0, interval.1],
            parameters,
            levels,
        },
    })
}

/// Writes `<out>/<fig>.csv` and the `<out>/<fig>.json` sidecar.
pub fn run_figures(which: Figure, opts: &FigureOptions) -> Result<FigureData, StageError> {
    let data = figure_data(which, opts)?;
    fs::create_dir_all(&opts.out)
        .map_err(|e| StageError::failure("output", format!("{}: {e}", opts.out.display())))?;
    write_csv(&opts.out.join(format!("{}.csv", which.name())), &data.header, &data.columns)?;
    write_json(&opts.out.join(format!("{}.json", which.name())), &data.sidecar)?;
    Ok(data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig1_center_values() {
        let d = figure_data(Figure::Fig1, &FigureOptions::default()).unwrap();
        assert_eq!(d.header, ["x", "rho_1", "rho_2", "rho_3", "rho_4"]);
        let mid = DEFAULT_SAMPLES / 2;
        assert_eq!(d.columns[0][mid], 0.0);
        assert!((d.columns[1][mid] - 2.0 / std::f64::consts::PI).abs() < 1e-12);
        assert!(d.columns[2][mid].abs() < 1e-30);
        assert_eq!(d.sidecar.levels[2].energy, 4.5);
    }

    #[test]
    fn fig2_walls_and_peaks() {
        let d = figure_data(Figure::Fig2, &FigureOptions::default()).unwrap();
        assert_eq!(d.header.last().unwrap(), "V");
        let argmax = |c: &[f64]| (0..c.len()).max_by(|&a, &b| c[a].total_cmp(&c[b])).unwrap();
        let peaks: Vec<usize> = (1..=3).map(|i| argmax(&d.columns[i])).collect();
        assert!(peaks.windows(2).all(|w| w[0] < w[1]), "{peaks:?}");
        for i in 1..=3 {
            assert_eq!(d.columns[i][0], 0.0);
        }
        let z = figure_data(Figure::Fig2, &FigureOptions { space: Some(Space::Z), ..Default::default() }).unwrap();
        assert_eq!(z.header[0], "z");
    }
}
