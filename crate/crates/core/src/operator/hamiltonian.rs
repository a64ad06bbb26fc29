use crate::deform::{Deformation, Domain};
use crate::expr::EvalError;

use super::{Grid, OperatorError, Physics, Potential, Space, SymmetricBandedMatrix};

/// Discretization of the kinetic term `−(ħ²/2m) √g ∂ g ∂ √g`, g = 1 + μ.
///
/// All three are `S·K·S` with `S = diag(√g)` and symmetric `K`, so the
/// assembled matrix is symmetric whatever the resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KineticStencil {
    /// `(4·K_staggered − K_wide)/3`: the two O(h²) stencils have error
    /// terms in ratio 1:4, so the combination is fourth order. Bandwidth 2.
    #[default]
    FourthOrder,
    /// Midpoint (conservative) stencil, `g` sampled at `x ± h/2`. Bandwidth 1.
    Staggered,
    /// `A·G·Aᵀ` with `A` the central difference. Decouples even and odd
    /// nodes, so every level shows up twice; kept for comparison only.
    WideCentral,
}

impl KineticStencil {
    pub fn bandwidth(self) -> usize {
        match self {
            KineticStencil::Staggered => 1,
            _ => 2,
        }
    }
}

/// Standard three-point Hamiltonian `−(ħ²/2m) d²/dz² + V(z)` with
/// Dirichlet walls just outside the grid.
pub fn build_z_hamiltonian<E: std::fmt::Display>(
    grid: &Grid,
    potential: impl Fn(f64) -> Result<f64, E>,
    physics: Physics,
) -> Result<SymmetricBandedMatrix, OperatorError> {
    physics.check()?;
    if grid.space != Space::Z {
        return Err(OperatorError::WrongSpace {
            expected: Space::Z,
            found: grid.space,
        });
    }
    let n = grid.count;
    let kin = physics.kinetic_scale() / (grid.step * grid.step);
    let mut h = SymmetricBandedMatrix::zeros(n, 1);
    for i in 0..n {
        let z = grid.node(i);
        let v = potential(z).map_err(|e| OperatorError::Evaluation(format!("potential at z = {z}: {e}")))?;
        if !v.is_finite() {
            return Err(OperatorError::NonFinite(format!("potential at z = {z}")));
        }
        h.set(i, i, 2.0 * kin + v);
        if i + 1 < n {
            h.set(i, i + 1, -kin);
        }
    }
    Ok(h)
}

/// x-space Hamiltonian of the deformed momentum with the default
/// fourth-order stencil.
pub fn build_x_hamiltonian(
    grid: &Grid,
    deformation: &Deformation,
    potential: &Potential,
    physics: Physics,
) -> Result<SymmetricBandedMatrix, OperatorError> {
    build_x_hamiltonian_with(grid, deformation, potential, physics, KineticStencil::default())
}

pub fn build_x_hamiltonian_with(
    grid: &Grid,
    deformation: &Deformation,
    potential: &Potential,
    physics: Physics,
    stencil: KineticStencil,
) -> Result<SymmetricBandedMatrix, OperatorError> {
    physics.check()?;
    if grid.space != Space::X {
        return Err(OperatorError::WrongSpace {
            expected: Space::X,
            found: grid.space,
        });
    }
    let n = grid.count;
    let h = grid.step;
    let (wall_lo, wall_hi) = grid.walls();
    let hull = Domain::new(wall_lo, wall_hi)?;
    // nodes, midpoints and walls
    deformation.ensure_valid_on(hull, 2 * n + 3)?;

    let g = |x: f64| deformation.one_plus_mu(x);
    let nodes = grid.nodes();
    let g_node = nodes.iter().map(|&x| g(x)).collect::<Result<Vec<_>, _>>()?;
    let s: Vec<f64> = g_node.iter().map(|v| v.sqrt()).collect();
    // g at x_i + h/2 for i = -1 .. n-1
    let g_mid = (0..=n)
        .map(|i| g(grid.start + (i as f64 - 0.5) * h))
        .collect::<Result<Vec<_>, _>>()?;

    let h2 = h * h;
    let mut k = SymmetricBandedMatrix::zeros(n, stencil.bandwidth());
    let staggered = |k: &mut SymmetricBandedMatrix, weight: f64| {
        for i in 0..n {
            k.add(i, i, weight * (g_mid[i] + g_mid[i + 1]) / h2);
            if i + 1 < n {
                k.add(i, i + 1, -weight * g_mid[i + 1] / h2);
            }
        }
    };
    let wide = |k: &mut SymmetricBandedMatrix, weight: f64, close_walls: bool| {
        let q = weight / (4.0 * h2);
        for i in 0..n {
            let left = if i > 0 { g_node[i - 1] } else { 0.0 };
            let right = if i + 1 < n { g_node[i + 1] } else { 0.0 };
            k.add(i, i, q * (left + right));
            if i + 2 < n {
                k.add(i, i + 2, -q * g_node[i + 1]);
            }
        }
        if close_walls {
            // odd reflection u(wall - h) = -u(wall + h) across each wall
            k.add(0, 0, 2.0 * q * g(wall_lo)?);
            k.add(n - 1, n - 1, 2.0 * q * g(wall_hi)?);
        }
        Ok::<(), OperatorError>(())
    };
    match stencil {
        KineticStencil::FourthOrder => {
            staggered(&mut k, 4.0 / 3.0);
            wide(&mut k, -1.0 / 3.0, true)?;
        }
        KineticStencil::Staggered => staggered(&mut k, 1.0),
        KineticStencil::WideCentral => wide(&mut k, 1.0, false)?,
    }

    let c = physics.kinetic_scale();
    let mut out = SymmetricBandedMatrix::zeros(n, stencil.bandwidth());
    for i in 0..n {
        for j in i..(i + stencil.bandwidth() + 1).min(n) {
            out.set(i, j, c * s[i] * s[j] * k.get(i, j));
        }
        let v = potential
            .evaluate(nodes[i])
            .map_err(|source: EvalError| OperatorError::Potential { at: nodes[i], source })?;
        out.add(i, i, v);
    }
    if !out.is_finite() {
        return Err(OperatorError::NonFinite("assembled Hamiltonian".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deform::Deformation;

    #[test]
    fn z_stencil_arithmetic() {
        let g = Grid::spanning(0.0, 2.0, 3, Space::Z).unwrap();
        let h = build_z_hamiltonian(&g, |_| Ok::<_, String>(0.0), Physics::default()).unwrap();
        assert_eq!(h.band(0), &[1.0, 1.0, 1.0]);
        assert_eq!(h.band(1), &[-0.5, -0.5]);
    }

    #[test]
    fn zero_deformation_staggered_equals_z_stencil() {
        let gx = Grid::interior(-1.0, 2.0, 40, Space::X).unwrap();
        let gz = Grid::interior(-1.0, 2.0, 40, Space::Z).unwrap();
        let v = Potential::half_morse(0.3, 0.5);
        let hx = build_x_hamiltonian_with(&gx, &Deformation::zero(), &v, Physics::default(), KineticStencil::Staggered)
            .unwrap();
        let hz = build_z_hamiltonian(&gz, |x| v.evaluate(x), Physics::default()).unwrap();
        for d in 0..=1 {
            for (a, b) in hx.band(d).iter().zip(hz.band(d)) {
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "{a} {b}");
            }
        }
    }

    #[test]
    fn zero_deformation_fourth_order_is_five_point_laplacian() {
        let g = Grid::interior(0.0, 1.0, 9, Space::X).unwrap();
        let h = build_x_hamiltonian(&g, &Deformation::zero(), &Potential::zero(), Physics::default())
            .unwrap();
        let inv = 1.0 / (g.step * g.step);
        // -u'' ≈ (u_{i-2} - 16u_{i-1} + 30u_i - 16u_{i+1} + u_{i+2}) / 12h², halved
        let close = |a: f64, b: f64| (a - b).abs() < 1e-12 * b.abs();
        assert!(close(h.get(4, 4), 0.5 * 30.0 / 12.0 * inv));
        assert!(close(h.get(4, 5), -0.5 * 16.0 / 12.0 * inv));
        assert!(close(h.get(4, 6), 0.5 / 12.0 * inv));
    }

    #[test]
    fn rejects_invalid_deformation() {
        let d = Deformation::from_expression("-1", Default::default(), crate::deform::Domain::REAL_LINE)
            .unwrap();
        let g = Grid::interior(-1.0, 1.0, 10, Space::X).unwrap();
        let r = build_x_hamiltonian(&g, &d, &Potential::zero(), Physics::default());
        assert!(matches!(r, Err(OperatorError::Deform(_))));
        let wrong = Grid::interior(-1.0, 1.0, 10, Space::Z).unwrap();
        assert!(build_x_hamiltonian(&wrong, &Deformation::zero(), &Potential::zero(), Physics::default())
            .is_err());
        let bad_mass = Physics { hbar: 1.0, mass: 0.0 };
        assert!(build_x_hamiltonian(&g, &Deformation::zero(), &Potential::zero(), bad_mass).is_err());
    }

    #[test]
    fn grid_outside_deformation_domain() {
        let d = Deformation::exponential(1.0).unwrap();
        let g = Grid::interior(0.0, 12.0, 10, Space::X).unwrap();
        assert!(build_x_hamiltonian(&g, &d, &Potential::zero(), Physics::default()).is_err());
    }
}
