//! The acceptance criteria as library checks. Each returns measured
//! values next to the tolerance they are held to.

pub mod oracles;

use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analytic::{self, AnalyticState};
use crate::config::RunConfig;
use crate::deform::Deformation;
use crate::eigen::lowest_eigenpairs;
use crate::error::StageError;
use crate::figures::{run_figures, Figure, FigureOptions};
use crate::observables::{minimum_dp_scan, uncertainty_report};
use crate::operator::{
    apply_momentum, build_x_hamiltonian, commutator_residual, Grid, Physics, Placement, Potential, Space, SymmetricBandedMatrix,
    WaveFunction,
};
use crate::pct::CoordinateMap;
use crate::pipeline::{pct_error, Problem, SpaceSolve};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
    pub passed: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, measured: f64, max: f64) -> Check {
        Check {
            name: name.into(),
            measured,
            min: None,
            max: Some(max),
            passed: measured <= max,
        }
    }

    pub fn within(name: impl Into<String>, measured: f64, min: f64, max: f64) -> Check {
        Check {
            name: name.into(),
            measured,
            min: Some(min),
            max: Some(max),
            passed: (min..=max).contains(&measured),
        }
    }

    /// Counts violations of a discrete property; passes at zero.
    pub fn none(name: impl Into<String>, violations: usize) -> Check {
        Check::at_most(name, violations as f64, 0.0)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub criteria: Vec<CriterionResult>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct VerifyOptions {
    /// Solve criterion 1 at this α while still comparing against the α = 1
    /// reference values.
    pub perturb_alpha: Option<f64>,
}

fn criterion(id: u8, title: &'static str, body: impl FnOnce() -> Result<Vec<Check>, StageError>) -> CriterionResult {
    match body() {
        Ok(checks) => CriterionResult {
            id,
            title,
            passed: !checks.is_empty() && checks.iter().all(|c| c.passed),
            checks,
            error: None,
        },
        Err(e) => CriterionResult {
            id,
            title,
            passed: false,
            checks: Vec::new(),
            error: Some(e.to_string()),
        },
    }
}

fn solve(text: &str, f: impl Fn(&Problem) -> Result<SpaceSolve, StageError>) -> Result<SpaceSolve, StageError> {
    f(&Problem::build(RunConfig::parse(text)?)?)
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

pub const BOX_REFERENCE: [f64; 4] = [0.5, 2.0, 4.5, 8.0];

/// Example 1 in z-space against the reference levels, with a refinement
/// ratio for each level.
pub fn criterion_1(opts: VerifyOptions) -> CriterionResult {
    criterion(1, "example-1 spectrum, z-space", || {
        let alpha = opts.perturb_alpha.unwrap_or(1.0);
        let config = |n: usize| format!("deformation = quadratic\nalpha = {alpha}\nspace = z\nstates = 4\ngrid_n = {n}");
        let start = Instant::now();
        let coarse = solve(&config(4096), Problem::solve_z)?;
        let seconds = start.elapsed().as_secs_f64();
        let fine = solve(&config(8193), Problem::solve_z)?;
        let mut checks = Vec::new();
        for (i, want) in BOX_REFERENCE.iter().enumerate() {
            let (e1, e2) = (rel(coarse.eigenvalues[i], *want), rel(fine.eigenvalues[i], *want));
            checks.push(Check::at_most(format!("E{} relative error (N=4096)", i + 1), e1, 1e-4));
            checks.push(Check::within(format!("E{} refinement ratio", i + 1), e1 / e2, 3.5, 4.5));
        }
        checks.push(Check::at_most("runtime of the N=4096 solve (s)", seconds, 10.0));
        Ok(checks)
    })
}

/// `Eₙ(L) = n²ħ²π²/(8m·z_L²)`, `z_L = atan(αL)/α`.
pub fn truncated_box_energy(n: u32, alpha: f64, l: f64) -> f64 {
    let z = (alpha * l).atan() / alpha;
    f64::from(n * n) * PI * PI / (8.0 * z * z)
}

pub fn criterion_2() -> CriterionResult {
    criterion(2, "example-1 spectrum, x-space", || {
        let s = solve(
            "deformation = quadratic\nalpha = 1\nspace = x\ndomain = -500, 500\nstates = 4\ngrid_n = 8000",
            Problem::solve_x,
        )?;
        let mut checks = Vec::new();
        for (i, e) in s.eigenvalues.iter().enumerate() {
            let want = truncated_box_energy(i as u32 + 1, 1.0, 500.0);
            checks.push(Check::at_most(format!("E{}(L=500) relative error", i + 1), rel(*e, want), 1e-3));
        }
        let oracle = s.oracle.ok_or_else(|| StageError::failure("verify", "no oracle attached"))?;
        let drift = oracle
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| rel(*v, truncated_box_energy(i as u32 + 1, 1.0, 500.0)))
            .fold(0.0, f64::max);
        checks.push(Check::at_most("pipeline oracle vs closed-form Eₙ(L)", drift, 1e-9));
        let mut violations = 0;
        for n in 1..=4u32 {
            let series: Vec<f64> = [50.0, 500.0, 5000.0].iter().map(|&l| truncated_box_energy(n, 1.0, l)).collect();
            let limit = analytic::box_energy(n, 1.0, 1.0, 1.0).map_err(|e| StageError::failure("analytic", e))?;
            if !(series[0] > series[1] && series[1] > series[2] && series[2] > limit) {
                violations += 1;
            }
        }
        checks.push(Check::none("Eₙ(L) decreasing to the L→∞ levels at L = 50, 500, 5000", violations));
        Ok(checks)
    })
}

pub fn criterion_3() -> CriterionResult {
    criterion(3, "example-2 spectrum", || {
        let omega = 2f64.sqrt();
        let z_max = 10.0 / omega.sqrt();
        let x_max = z_max.ln_1p();
        let common = "deformation = exponential\ngamma = 1\npotential = half-morse\nv0 = 1\nstates = 3\ngrid_n = 4096";
        let z = solve(&format!("{common}\nspace = z\ndomain = 0, {x_max}\nz_domain = 0, {z_max}"), Problem::solve_z)?;
        let x = solve(&format!("{common}\nspace = x\ndomain = 0, {x_max}"), Problem::solve_x)?;
        let mut checks = Vec::new();
        for n in 0..3 {
            let want = omega * (2.0 * n as f64 + 1.5);
            checks.push(Check::at_most(format!("E{n} relative error, z-space"), rel(z.eigenvalues[n], want), 1e-3));
            checks.push(Check::at_most(format!("E{n} relative error, x-space"), rel(x.eigenvalues[n], want), 5e-3));
        }
        Ok(checks)
    })
}

pub fn criterion_4() -> CriterionResult {
    criterion(4, "uncertainty chain on analytic box states", || {
        let err = |e: crate::observables::ObservableError| StageError::failure("observables", e);
        let (mut dx, mut dp, mut product) = (0.0f64, 0.0f64, 0.0f64);
        let mut violations = 0;
        let mut checks = Vec::new();
        for alpha in [0.5, 1.0, 2.0] {
            let d = Deformation::quadratic(alpha).map_err(|e| StageError::failure("deform", e))?;
            for n in 1..=6u32 {
                let s = analytic::box_state(n, alpha).map_err(|e| StageError::failure("analytic", e))?;
                let r = uncertainty_report(&d, &s, 1.0).map_err(err)?;
                let nf = f64::from(n);
                dx = dx.max(rel(r.position.spread, (2.0 * nf - 1.0).sqrt() / alpha));
                dp = dp.max(rel(r.momentum.spread, nf * alpha));
                product = product.max(rel(r.product, nf * (2.0 * nf - 1.0).sqrt()));
                violations += usize::from(r.violated);
            }
            let (n_star, dp_min) = minimum_dp_scan(&d, 6, 1.0).map_err(err)?;
            checks.push(Check::none(format!("argmin δp = 1 at α = {alpha}"), usize::from(n_star != 1)));
            checks.push(Check::at_most(format!("δp_min vs ħα at α = {alpha}"), rel(dp_min, alpha), 1e-9));
        }
        checks.insert(0, Check::at_most("max relative error of δx", dx, 1e-6));
        checks.insert(1, Check::at_most("max relative error of δp", dp, 1e-6));
        checks.insert(2, Check::at_most("max relative error of δx·δp", product, 1e-6));
        checks.insert(3, Check::none("bound violations", violations));
        Ok(checks)
    })
}

/// `|⟨u,Mv⟩ − ⟨Mu,v⟩|` divided by `|u|ᵀ|M||v|` and by `|⟨u,Mv⟩|`.
fn bilinear_asymmetry(m: &SymmetricBandedMatrix, rng: &mut ChaCha8Rng) -> (f64, f64) {
    let n = m.dim();
    let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let a = dot(&u, &m.matvec(&v));
    let b = dot(&m.matvec(&u), &v);
    let mut abs = SymmetricBandedMatrix::zeros(n, m.bandwidth());
    for i in 0..n {
        for j in i..(i + m.bandwidth() + 1).min(n) {
            abs.set(i, j, m.get(i, j).abs());
        }
    }
    let ua: Vec<f64> = u.iter().map(|x| x.abs()).collect();
    let va: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    let scale = dot(&ua, &abs.matvec(&va));
    ((a - b).abs() / scale, (a - b).abs() / a.abs())
}

fn bump(grid: Grid, center: f64) -> Result<WaveFunction, StageError> {
    WaveFunction::from_fn(grid, |x| Ok::<_, String>(Complex64::new((-4.0 * (x - center).powi(2)).exp(), 0.0)))
        .map_err(|e| StageError::failure("operator", e))
}

pub fn criterion_5() -> CriterionResult {
    criterion(5, "operator identities", || {
        let op = |e: crate::operator::OperatorError| StageError::failure("operator", e);
        let quadratic = Deformation::quadratic(1.0).map_err(|e| StageError::failure("deform", e))?;
        let exponential = Deformation::exponential(1.0).map_err(|e| StageError::failure("deform", e))?;
        let mut checks = Vec::new();

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let cases = [
            ("example 1", &quadratic, (-500.0, 500.0), Potential::zero()),
            ("example 2", &exponential, (0.0, 2.24), Potential::half_morse(1.0, 1.0)),
        ];
        for (label, d, (lo, hi), v) in &cases {
            let grid = Grid::interior(*lo, *hi, 8000, Space::X).map_err(op)?;
            let m = build_x_hamiltonian(&grid, d, v, Physics::default()).map_err(op)?;
            let (scaled, plain) = (0..4)
                .map(|_| bilinear_asymmetry(&m, &mut rng))
                .fold((0.0f64, 0.0f64), |(a, b), (x, y)| (a.max(x), b.max(y)));
            checks.push(Check::at_most(format!("⟨u,Hv⟩ − ⟨Hu,v⟩ relative to |u|ᵀ|H||v|, {label}"), scaled, 1e-13));
            // reported for reference: cancellation in ⟨u,Hv⟩ inflates this one
            checks.push(Check::at_most(format!("same, relative to |⟨u,Hv⟩| (informational), {label}"), plain, f64::INFINITY));
        }

        for (label, d, (lo, hi), center) in [
            ("quadratic(1)", &quadratic, (-4.0, 4.0), 0.0),
            ("exponential(1)", &exponential, (0.5, 4.0), 2.25),
        ] {
            let coarse = Grid::interior(lo, hi, 2047, Space::X).map_err(op)?;
            let r1 = commutator_residual(d, &bump(coarse, center)?, 1.0).map_err(op)?;
            let r2 = commutator_residual(d, &bump(coarse.refined(), center)?, 1.0).map_err(op)?;
            checks.push(Check::within(format!("commutator Richardson ratio, {label}"), r1 / r2, 3.5, 4.5));
        }
        let grid = Grid::interior(0.5, 4.0, 4096, Space::X).map_err(op)?;
        let r = commutator_residual(&exponential, &bump(grid, 2.25)?, 1.0).map_err(op)?;
        checks.push(Check::at_most("commutator residual, exponential(1), N=4096", r, 1e-6));

        let grid = Grid::interior(-5.0, 5.0, 8192, Space::X).map_err(op)?;
        for n in 1..=3 {
            let nf = f64::from(n);
            let psi = WaveFunction::from_fn(grid, |x| {
                Ok::<_, String>(Complex64::from_polar(1.0, nf * x.atan()) / (1.0 + x * x).sqrt())
            })
            .map_err(op)?;
            let p = apply_momentum(&quadratic, &psi, 1.0).map_err(op)?;
            let err = p
                .samples()
                .iter()
                .zip(psi.samples())
                .map(|(a, b)| (a - b * nf).norm())
                .fold(0.0, f64::max);
            checks.push(Check::at_most(format!("momentum eigenfunction n={n}, max pointwise error"), err, 1e-5));
        }
        Ok(checks)
    })
}

fn loop_closure(
    map: &CoordinateMap,
    chi: &AnalyticState,
    phi: &AnalyticState,
    z_grid: Grid,
    x_grid: Grid,
) -> Result<(f64, f64), StageError> {
    let analytic = |e: crate::expr::EvalError| StageError::failure("analytic", e);
    let sampled = chi.sample(z_grid).map_err(|e| StageError::failure("operator", e))?;
    let pulled = map.pull_back_wavefunction(&sampled, x_grid).map_err(pct_error)?;
    let mut worst = 0.0f64;
    for (x, v) in x_grid.nodes().iter().zip(pulled.samples()) {
        worst = worst.max((v.re - phi.value(*x).map_err(analytic)?).abs());
    }
    let (lo, hi) = x_grid.interval();
    let (z_lo, z_hi) = (
        map.forward_map(lo).map_err(pct_error)?,
        map.forward_map(hi).map_err(pct_error)?,
    );
    let chi_norm = crate::quad::integrate(|z| chi.value(z).map(|v| v * v), z_lo, z_hi, 1e-13)
        .map_err(|e| StageError::failure("analytic", e))?;
    let rho = pulled.densities();
    let ends = match x_grid.placement {
        Placement::Spanning => 0.5 * (rho[0] + rho[rho.len() - 1]),
        Placement::Interior => 0.0,
    };
    let norm = x_grid.quadrature(rho.iter().copied()) - x_grid.step * ends;
    Ok((worst, (norm - chi_norm).abs()))
}

pub fn criterion_6() -> CriterionResult {
    criterion(6, "PCT loop closure", || {
        let analytic_err = |e: analytic::AnalyticError| StageError::failure("analytic", e);
        let op = |e: crate::operator::OperatorError| StageError::failure("operator", e);
        let mut checks = Vec::new();

        let quadratic = CoordinateMap::new(Deformation::quadratic(1.0).map_err(|e| StageError::failure("deform", e))?)
            .map_err(pct_error)?;
        let z_grid = Grid::interior(-PI / 2.0, PI / 2.0, 8191, Space::Z).map_err(op)?;
        let x_grid = Grid::spanning(-20.0, 20.0, 4001, Space::X).map_err(op)?;
        for n in 1..=4 {
            let chi = analytic::box_state_z(n, 1.0).map_err(analytic_err)?;
            let phi = analytic::box_state(n, 1.0).map_err(analytic_err)?;
            let (pointwise, norm) = loop_closure(&quadratic, &chi, &phi, z_grid, x_grid)?;
            checks.push(Check::at_most(format!("box n={n}, max |φ − pulled-back χ|"), pointwise, 1e-6));
            checks.push(Check::at_most(format!("box n={n}, |‖φ‖² − ‖χ‖²|"), norm, 1e-6));
        }

        let exponential = Deformation::exponential(1.0)
            .map_err(|e| StageError::failure("deform", e))?
            .with_domain(crate::deform::Domain { lo: 0.0, hi: 3.0 });
        let map = CoordinateMap::new(exponential).map_err(pct_error)?;
        let omega = analytic::half_oscillator_omega(1.0, 1.0, 1.0).map_err(analytic_err)?;
        let z_grid = Grid::interior(0.0, 20.0, 16383, Space::Z).map_err(op)?;
        let x_grid = Grid::interior(0.0, 3.0, 4001, Space::X).map_err(op)?;
        for n in 0..=2 {
            let chi = analytic::half_oscillator_state_z(n, omega, 1.0, 1.0).map_err(analytic_err)?;
            let phi = analytic::half_oscillator_state_x(n, 1.0, 1.0, 1.0, 1.0).map_err(analytic_err)?;
            let (pointwise, norm) = loop_closure(&map, &chi, &phi, z_grid, x_grid)?;
            checks.push(Check::at_most(format!("half oscillator n={n}, max |φ − pulled-back χ|"), pointwise, 1e-6));
            checks.push(Check::at_most(format!("half oscillator n={n}, |‖φ‖² − ‖χ‖²|"), norm, 1e-6));
        }
        Ok(checks)
    })
}

fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>), StageError> {
    let text = fs::read_to_string(path).map_err(|e| StageError::failure("verify", format!("{}: {e}", path.display())))?;
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().unwrap_or("").split(',').map(String::from).collect();
    let mut columns = vec![Vec::new(); header.len()];
    for line in lines {
        for (c, cell) in columns.iter_mut().zip(line.split(',')) {
            c.push(cell.parse().map_err(|_| StageError::failure("verify", format!("bad cell '{cell}'")))?);
        }
    }
    Ok((header, columns))
}

pub fn criterion_7() -> CriterionResult {
    criterion(7, "figure data", || {
        let dir = std::env::temp_dir().join(format!("gemo-verify-{}", std::process::id()));
        let opts = FigureOptions {
            out: dir.clone(),
            ..Default::default()
        };
        let result = (|| {
            run_figures(Figure::Fig1, &opts)?;
            run_figures(Figure::Fig2, &opts)?;
            let mut checks = Vec::new();
            let (_, fig1) = read_csv(&dir.join("fig1.csv"))?;
            let center = fig1[0].iter().position(|&x| x == 0.0).ok_or_else(|| StageError::failure("verify", "x = 0 is not a sample"))?;
            checks.push(Check::at_most("fig1 |φ₁(0)|² − 2/π", (fig1[1][center] - 2.0 / PI).abs(), 1e-9));
            let rising = (center..fig1[0].len() - 1).filter(|&i| fig1[1][i + 1] >= fig1[1][i]).count();
            checks.push(Check::none("fig1 |φ₁|² not strictly decreasing on [0, 6]", rising));

            let (header, fig2) = read_csv(&dir.join("fig2.csv"))?;
            let states: Vec<usize> = (1..header.len()).filter(|&i| header[i].starts_with("rho_")).collect();
            let at_wall = states.iter().map(|&i| fig2[i][0].abs()).fold(0.0, f64::max);
            checks.push(Check::at_most("fig2 max |φₙ(0)|²", at_wall, 0.0));
            let peaks: Vec<usize> = states
                .iter()
                .map(|&i| (0..fig2[i].len()).max_by(|&a, &b| fig2[i][a].total_cmp(&fig2[i][b])).unwrap_or(0))
                .collect();
            checks.push(Check::none("fig2 argmax not strictly increasing in n", peaks.windows(2).filter(|w| w[0] >= w[1]).count()));
            Ok(checks)
        })();
        let _ = fs::remove_dir_all(&dir);
        result
    })
}

pub fn criterion_8() -> CriterionResult {
    criterion(8, "eigensolver oracles", || {
        let eig = |e: crate::eigen::EigenError| StageError::failure("eigen", e);
        let (a, b, n) = (2.0, -1.0, 50);
        let m = SymmetricBandedMatrix::from_tridiagonal(&vec![a; n], &vec![b; n - 1]);
        let pairs = lowest_eigenpairs(&m, n).map_err(eig)?;
        let mut exact: Vec<f64> = (1..=n).map(|j| a + 2.0 * b * (j as f64 * PI / 51.0).cos()).collect();
        exact.sort_by(f64::total_cmp);
        let toeplitz = pairs.iter().zip(&exact).map(|(p, e)| (p.eigenvalue - e).abs()).fold(0.0, f64::max);

        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut worst = 0.0f64;
        let mut unresolved = 0;
        for _ in 0..20 {
            let n = rng.gen_range(2..=8);
            let d: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let e: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(0.1..1.0)).collect();
            let m = SymmetricBandedMatrix::from_tridiagonal(&d, &e);
            let got = lowest_eigenpairs(&m, n).map_err(eig)?;
            match oracles::eigenvalues(&m.to_dense()) {
                Some(want) => {
                    for (p, w) in got.iter().zip(&want) {
                        worst = worst.max((p.eigenvalue - w).abs());
                    }
                }
                None => unresolved += 1,
            }
        }
        Ok(vec![
            Check::at_most("Toeplitz N=50 max abs error", toeplitz, 1e-12),
            Check::at_most("20 random tridiagonal (N ≤ 8) vs det(A − λI) roots", worst, 1e-10),
            Check::none("oracle scans that failed to separate roots", unresolved),
        ])
    })
}

pub fn run_verify(opts: VerifyOptions) -> VerifyReport {
    let criteria = vec![
        criterion_1(opts),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
    ];
    VerifyReport {
        passed: criteria.iter().all(|c| c.passed),
        criteria,
    }
}
