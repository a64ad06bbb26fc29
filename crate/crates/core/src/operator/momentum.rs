use num_complex::Complex64;

use crate::deform::Deformation;

use super::{OperatorError, Space, WaveFunction};

fn derivative(samples: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = samples.len();
    let inv = 1.0 / (2.0 * h);
    (0..n)
        .map(|i| {
            if i == 0 {
                (-3.0 * samples[0] + 4.0 * samples[1] - samples[2]) * inv
            } else if i == n - 1 {
                (3.0 * samples[n - 1] - 4.0 * samples[n - 2] + samples[n - 3]) * inv
            } else {
                (samples[i + 1] - samples[i - 1]) * inv
            }
        })
        .collect()
}

fn check_grid(d: &Deformation, psi: &WaveFunction) -> Result<(), OperatorError> {
    let grid = psi.grid();
    if grid.space != Space::X {
        return Err(OperatorError::WrongSpace {
            expected: Space::X,
            found: grid.space,
        });
    }
    let domain = d.domain();
    if !(domain.contains(grid.start) && domain.contains(grid.end())) {
        return Err(OperatorError::GridMismatch(format!(
            "grid [{}, {}] leaves the deformation domain {domain}",
            grid.start,
            grid.end()
        )));
    }
    Ok(())
}

/// `pψ = −iħ √g (√g ψ)′` with g = 1 + μ, which equals
/// `−iħ[(1 + μ)ψ′ + ½μ′ψ]`. Central differences inside keep the
/// discrete operator antisymmetric, so ⟨ψ, pψ⟩ vanishes for real ψ up to
/// the two end rows, where second-order one-sided differences are used.
pub fn apply_momentum(
    d: &Deformation,
    psi: &WaveFunction,
    hbar: f64,
) -> Result<WaveFunction, OperatorError> {
    check_grid(d, psi)?;
    let grid = *psi.grid();
    let root_g = grid
        .nodes()
        .iter()
        .map(|&x| d.one_plus_mu(x).map(f64::sqrt))
        .collect::<Result<Vec<_>, _>>()?;
    let u: Vec<Complex64> = psi.samples().iter().zip(&root_g).map(|(v, s)| v * s).collect();
    let du = derivative(&u, grid.step);
    let minus_i_hbar = Complex64::new(0.0, -hbar);
    let out = du.iter().zip(&root_g).map(|(dv, s)| minus_i_hbar * s * dv).collect();
    WaveFunction::new(grid, out)
}

/// Max over interior nodes of `|(x·p − p·x)f − iħ(1 + μ)f|`.
pub fn commutator_residual(
    d: &Deformation,
    f: &WaveFunction,
    hbar: f64,
) -> Result<f64, OperatorError> {
    let grid = *f.grid();
    let nodes = grid.nodes();
    let xf: Vec<Complex64> = f.samples().iter().zip(&nodes).map(|(v, &x)| v * x).collect();
    let pf = apply_momentum(d, f, hbar)?;
    let pxf = apply_momentum(d, &WaveFunction::new(grid, xf)?, hbar)?;
    let i_hbar = Complex64::new(0.0, hbar);
    let mut worst: f64 = 0.0;
    for i in 1..grid.count - 1 {
        let x = nodes[i];
        let g = 1.0 + d.evaluate_triple(x)?.mu;
        let r = x * pf.samples()[i] - pxf.samples()[i] - i_hbar * g * f.samples()[i];
        worst = worst.max(r.norm());
    }
    Ok(worst)
}
