//! Config → deformation/potential → Hamiltonian → eigenpairs → oracle
//! comparison → `spectrum.json` and `states.csv`.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::analytic;
use crate::config::{DeformationSpec, PotentialSpec, RunConfig, SolveSpace};
use crate::deform::{Builtin, DeformError, Deformation, Domain};
use crate::eigen::{lowest_eigenpairs, EigenError};
use crate::error::{fmt_float, StageError};
use crate::operator::{build_x_hamiltonian, build_z_hamiltonian, Grid, OperatorError, Physics, Placement, Potential, Space};
use crate::pct::{CoordinateMap, PctError};

/// Samples used to validate 1 + μ over the configured domain.
const VALIDATION_SAMPLES: usize = 4097;

pub(crate) fn deform_error(e: DeformError) -> StageError {
    match e {
        DeformError::Expr(e) => StageError::input("expr.parse", e),
        DeformError::NotPositive { .. } => StageError::input("deform.validate", e),
        DeformError::Eval { .. } => StageError::input("deform.validate", e),
        e => StageError::input("deform", e),
    }
}

pub(crate) fn pct_error(e: PctError) -> StageError {
    match e {
        PctError::Deform(d) => deform_error(d),
        PctError::OutsideImage { .. } | PctError::OutsideDomain { .. } => StageError::input("pct", e),
        e => StageError::failure("pct", e),
    }
}

pub(crate) fn operator_error(e: OperatorError) -> StageError {
    match e {
        OperatorError::Deform(d) => deform_error(d),
        OperatorError::BadGrid(_) | OperatorError::BadConstant(_) => StageError::input("operator", e),
        e => StageError::failure("operator", e),
    }
}

fn eigen_error(e: EigenError) -> StageError {
    StageError::failure("eigen", e)
}

fn io_error(path: &Path, e: std::io::Error) -> StageError {
    StageError::failure("output", format!("{}: {e}", path.display()))
}

#[derive(Debug, Clone, Serialize)]
pub struct GridInfo {
    pub placement: Placement,
    pub count: usize,
    pub step: f64,
    pub first_node: f64,
    pub last_node: f64,
    pub walls: [f64; 2],
}

impl From<&Grid> for GridInfo {
    fn from(g: &Grid) -> Self {
        let (lo, hi) = g.walls();
        GridInfo {
            placement: g.placement,
            count: g.count,
            step: g.step,
            first_node: g.start,
            last_node: g.end(),
            walls: [lo, hi],
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub name: &'static str,
    pub values: Vec<f64>,
    pub relative_errors: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpaceSolve {
    pub space: Space,
    pub grid: GridInfo,
    pub eigenvalues: Vec<f64>,
    pub residuals: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
    #[serde(skip)]
    pub nodes: Vec<f64>,
    /// Eigenvectors normalized so that `h Σ v² = 1`.
    #[serde(skip)]
    pub vectors: Vec<Vec<f64>>,
}

impl SpaceSolve {
    pub fn max_relative_error(&self) -> Option<f64> {
        self.oracle
            .as_ref()
            .map(|o| o.relative_errors.iter().fold(0.0, |m: f64, e| m.max(e.abs())))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub config: BTreeMap<String, String>,
    pub solves: Vec<SpaceSolve>,
}

/// Closed-form spectrum a solve can be compared against.
#[derive(Debug, Clone, Copy)]
enum Oracle {
    /// Flat box of width `w` in z.
    Box { width: f64 },
    HalfOscillator { omega: f64 },
}

/// A resolved configuration with its physics objects built.
#[derive(Debug, Clone)]
pub struct Problem {
    pub config: RunConfig,
    pub deformation: Deformation,
    pub potential: Potential,
    pub physics: Physics,
}

impl Problem {
    pub fn build(config: RunConfig) -> Result<Problem, StageError> {
        let (lo, hi) = config.domain;
        let domain = Domain::new(lo, hi).map_err(deform_error)?;
        let deformation = match &config.deformation {
            DeformationSpec::Zero => Deformation::make_builtin(Builtin::Zero),
            DeformationSpec::Quadratic { alpha } => Deformation::quadratic(*alpha),
            DeformationSpec::Exponential { gamma } => Deformation::exponential(*gamma),
            DeformationSpec::Expression { text } => Deformation::from_expression(text, config.params.clone(), domain),
        }
        .map_err(deform_error)?
        .with_domain(domain);
        deformation
            .ensure_valid_on(domain, VALIDATION_SAMPLES)
            .map_err(deform_error)?;
        let potential = match &config.potential {
            PotentialSpec::Zero => Potential::zero(),
            PotentialSpec::HalfMorse { v0, gamma } => Potential::half_morse(*v0, *gamma),
            PotentialSpec::Expression { text } => Potential::from_expression(text, config.params.clone())
                .map_err(|e| StageError::input("expr.parse", e))?,
        };
        let physics = Physics {
            hbar: config.hbar,
            mass: config.mass,
        };
        Ok(Problem {
            config,
            deformation,
            potential,
            physics,
        })
    }

    pub fn coordinate_map(&self) -> Result<CoordinateMap, StageError> {
        CoordinateMap::new(self.deformation.clone()).map_err(pct_error)
    }

    fn oracle(&self, width: f64) -> Option<Oracle> {
        if self.potential.is_zero() && width.is_finite() {
            return Some(Oracle::Box { width });
        }
        if let (DeformationSpec::Exponential { gamma: g1 }, PotentialSpec::HalfMorse { v0, gamma: g2 }) =
            (&self.config.deformation, &self.config.potential)
        {
            let lower_wall_at_origin = self.config.domain.0 == 0.0 && self.config.z_domain.is_none_or(|z| z.0 == 0.0);
            if g1 == g2 && lower_wall_at_origin {
                if let Ok(omega) = analytic::half_oscillator_omega(*g1, *v0, self.config.mass) {
                    return Some(Oracle::HalfOscillator { omega });
                }
            }
        }
        None
    }

    fn oracle_values(&self, oracle: Oracle, k: usize) -> Vec<f64> {
        let Physics { hbar, mass } = self.physics;
        (0..k)
            .map(|i| match oracle {
                Oracle::Box { width } => {
                    let n = (i + 1) as f64;
                    n * n * hbar * hbar * std::f64::consts::PI.powi(2) / (2.0 * mass * width * width)
                }
                Oracle::HalfOscillator { omega } => hbar * omega * (2.0 * i as f64 + 1.5),
            })
            .collect()
    }

    fn finish(&self, grid: Grid, m: crate::operator::SymmetricBandedMatrix, oracle: Option<Oracle>) -> Result<SpaceSolve, StageError> {
        let pairs = lowest_eigenpairs(&m, self.config.states).map_err(eigen_error)?;
        let pairs: Vec<_> = pairs.into_iter().map(|p| p.quadrature_normalized(grid.step)).collect();
        let eigenvalues: Vec<f64> = pairs.iter().map(|p| p.eigenvalue).collect();
        let oracle = oracle.map(|o| {
            let values = self.oracle_values(o, eigenvalues.len());
            let relative_errors = eigenvalues.iter().zip(&values).map(|(e, v)| (e - v) / v).collect();
            OracleReport {
                name: match o {
                    Oracle::Box { .. } => "box",
                    Oracle::HalfOscillator { .. } => "half-oscillator",
                },
                values,
                relative_errors,
            }
        });
        Ok(SpaceSolve {
            space: grid.space,
            grid: GridInfo::from(&grid),
            eigenvalues,
            residuals: pairs.iter().map(|p| p.residual).collect(),
            oracle,
            nodes: grid.nodes(),
            vectors: pairs.into_iter().map(|p| p.eigenvector).collect(),
        })
    }

    /// z interval between the walls: `z_domain` when given, otherwise the
    /// image of the x domain.
    pub fn z_interval(&self, map: &CoordinateMap) -> Result<(f64, f64), StageError> {
        let (lo, hi) = match self.config.z_domain {
            Some(z) => z,
            None => {
                let image = map.image();
                (image.lo, image.hi)
            }
        };
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(StageError::input(
                "pct",
                format!("z-space solve needs a finite z interval, the domain maps to [{lo}, {hi}]; set z_domain"),
            ));
        }
        Ok((lo, hi))
    }

    pub fn solve_z(&self) -> Result<SpaceSolve, StageError> {
        let map = self.coordinate_map()?;
        let (lo, hi) = self.z_interval(&map)?;
        let grid = Grid::interior(lo, hi, self.config.grid_n, Space::Z).map_err(operator_error)?;
        let m = if self.potential.is_constant() {
            let v = self.potential.evaluate(0.0).map_err(|e| StageError::failure("operator", e))?;
            build_z_hamiltonian(&grid, |_| Ok::<_, String>(v), self.physics)
        } else {
            build_z_hamiltonian(
                &grid,
                |z| {
                    let x = map.inverse_map(z).map_err(|e| e.to_string())?;
                    self.potential.evaluate(x).map_err(|e| format!("at x = {x}: {e}"))
                },
                self.physics,
            )
        }
        .map_err(operator_error)?;
        self.finish(grid, m, self.oracle(hi - lo))
    }

    pub fn solve_x(&self) -> Result<SpaceSolve, StageError> {
        let (lo, hi) = self.config.domain;
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(StageError::input("config", "x-space solve needs a finite domain"));
        }
        let grid = Grid::interior(lo, hi, self.config.grid_n, Space::X).map_err(operator_error)?;
        let m = build_x_hamiltonian(&grid, &self.deformation, &self.potential, self.physics).map_err(operator_error)?;
        let oracle = if self.potential.is_zero() {
            let map = self.coordinate_map()?;
            let width = map.forward_map(hi).map_err(pct_error)? - map.forward_map(lo).map_err(pct_error)?;
            self.oracle(width)
        } else {
            self.oracle(f64::INFINITY)
        };
        self.finish(grid, m, oracle)
    }

    pub fn solve(&self) -> Result<SolveReport, StageError> {
        let solves = match self.config.space {
            SolveSpace::X => vec![self.solve_x()?],
            SolveSpace::Z => vec![self.solve_z()?],
            SolveSpace::Both => vec![self.solve_x()?, self.solve_z()?],
        };
        Ok(SolveReport {
            config: self.config.to_pairs(),
            solves,
        })
    }
}

/// Comma-separated, header row, LF endings, shortest round-trip floats.
pub fn write_csv(path: &Path, header: &[String], columns: &[Vec<f64>]) -> Result<(), StageError> {
    let rows = columns.first().map_or(0, Vec::len);
    let mut text = header.join(",");
    text.push('\n');
    for r in 0..rows {
        let row: Vec<String> = columns.iter().map(|c| fmt_float(c[r])).collect();
        text.push_str(&row.join(","));
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| io_error(path, e))
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<(), StageError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| StageError::failure("output", e))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| io_error(path, e))
}

fn write_states(path: &Path, solve: &SpaceSolve) -> Result<(), StageError> {
    let mut header = vec![solve.space.label().to_string()];
    let mut columns = vec![solve.nodes.clone()];
    for (i, v) in solve.vectors.iter().enumerate() {
        header.push(format!("rho_{}", i + 1));
        columns.push(v.iter().map(|a| a * a).collect());
    }
    write_csv(path, &header, &columns)
}

pub fn write_outputs(report: &SolveReport, out: &Path) -> Result<(), StageError> {
    fs::create_dir_all(out).map_err(|e| io_error(out, e))?;
    write_json(&out.join("spectrum.json"), report)?;
    for solve in &report.solves {
        let name = if report.solves.len() > 1 && solve.space == Space::Z {
            "states_z.csv"
        } else {
            "states.csv"
        };
        write_states(&out.join(name), solve)?;
    }
    Ok(())
}

/// Solve and write `spectrum.json` and `states.csv` under `cfg.out`.
pub fn run_solve(cfg: RunConfig) -> Result<SolveReport, StageError> {
    let out = cfg.out.clone();
    let report = Problem::build(cfg)?.solve()?;
    write_outputs(&report, &out)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(text: &str) -> Problem {
        Problem::build(RunConfig::parse(text).unwrap()).unwrap()
    }

    #[test]
    fn example_one_z_space() {
        let r = problem("grid_n = 1024\nstates = 4").solve().unwrap();
        let s = &r.solves[0];
        let o = s.oracle.as_ref().unwrap();
        assert_eq!(o.name, "box");
        for (v, want) in o.values.iter().zip([0.5, 2.0, 4.5, 8.0]) {
            assert!((v - want).abs() < 1e-9, "{v}");
        }
        assert!(s.max_relative_error().unwrap() < 1e-4);
    }

    #[test]
    fn example_two_both_spaces() {
        let r = problem(
            "deformation = exponential\ngamma = 1\npotential = half-morse\nv0 = 1\n\
             domain = 0, 2.2\nspace = both\nstates = 3\ngrid_n = 1024",
        )
        .solve()
        .unwrap();
        for s in &r.solves {
            assert_eq!(s.oracle.as_ref().unwrap().name, "half-oscillator");
            assert!(s.max_relative_error().unwrap() < 1e-3, "{:?} {:?}", s.space, s.oracle);
        }
    }

    #[test]
    fn stage_names() {
        let e = Problem::build(RunConfig::parse("deformation = expr\nmu = 1/(1+x").unwrap()).unwrap_err();
        assert_eq!((e.stage, e.exit_code()), ("expr.parse", 2));
        assert!(e.to_string().contains("at byte 7"), "{e}");
        let e = Problem::build(RunConfig::parse("deformation = expr\nmu = -2\ndomain = 0, 1").unwrap()).unwrap_err();
        assert_eq!(e.stage, "deform.validate");
        let e = problem("space = x").solve().unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = problem("deformation = zero").solve().unwrap_err();
        assert_eq!(e.stage, "pct");
    }
}
