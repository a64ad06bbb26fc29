use serde::Serialize;

use super::OperatorError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    X,
    Z,
}

impl Space {
    pub fn label(self) -> &'static str {
        match self {
            Space::X => "x",
            Space::Z => "z",
        }
    }
}

/// Where the interval ends sit relative to the nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Placement {
    /// Interval ends are the Dirichlet walls; nodes are strictly inside.
    Interior,
    /// First and last node sit on the interval ends.
    Spanning,
}

/// Uniform axis. Wavefunctions on it are zero outside the nodes, so the
/// quadrature rule is `h·Σ f_i` in both placements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub start: f64,
    pub step: f64,
    pub count: usize,
    pub space: Space,
    pub placement: Placement,
}

impl Grid {
    /// `count` nodes strictly between Dirichlet walls at `lo` and `hi`.
    pub fn interior(lo: f64, hi: f64, count: usize, space: Space) -> Result<Grid, OperatorError> {
        check(lo, hi, count)?;
        let step = (hi - lo) / (count + 1) as f64;
        Ok(Grid {
            start: lo + step,
            step,
            count,
            space,
            placement: Placement::Interior,
        })
    }

    /// `count` nodes from `lo` to `hi` inclusive.
    pub fn spanning(lo: f64, hi: f64, count: usize, space: Space) -> Result<Grid, OperatorError> {
        check(lo, hi, count)?;
        Ok(Grid {
            start: lo,
            step: (hi - lo) / (count - 1) as f64,
            count,
            space,
            placement: Placement::Spanning,
        })
    }

    pub fn node(&self, i: usize) -> f64 {
        self.start + self.step * i as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.node(i)).collect()
    }

    pub fn end(&self) -> f64 {
        self.node(self.count - 1)
    }

    /// Nearest points where the wavefunction is pinned to zero.
    pub fn walls(&self) -> (f64, f64) {
        (self.start - self.step, self.end() + self.step)
    }

    /// The declared interval: walls for interior grids, end nodes otherwise.
    pub fn interval(&self) -> (f64, f64) {
        match self.placement {
            Placement::Interior => self.walls(),
            Placement::Spanning => (self.start, self.end()),
        }
    }

    /// Same interval with the spacing halved; nodes of `self` are kept.
    pub fn refined(&self) -> Grid {
        let (lo, hi) = self.interval();
        match self.placement {
            Placement::Interior => Grid::interior(lo, hi, 2 * self.count + 1, self.space),
            Placement::Spanning => Grid::spanning(lo, hi, 2 * self.count - 1, self.space),
        }
        .expect("refining a valid grid")
    }

    pub fn quadrature(&self, values: impl IntoIterator<Item = f64>) -> f64 {
        self.step * values.into_iter().sum::<f64>()
    }
}

fn check(lo: f64, hi: f64, count: usize) -> Result<(), OperatorError> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(OperatorError::BadGrid(format!("interval [{lo}, {hi}]")));
    }
    if count < 3 {
        return Err(OperatorError::BadGrid(format!("{count} nodes, need at least 3")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interior_walls() {
        let g = Grid::interior(0.0, 4.0, 3, Space::Z).unwrap();
        assert_eq!(g.nodes(), vec![1.0, 2.0, 3.0]);
        assert_eq!(g.walls(), (0.0, 4.0));
        let r = g.refined();
        assert_eq!(r.count, 7);
        assert_eq!(r.step, 0.5);
        assert_eq!(r.node(1), 1.0);
    }

    #[test]
    fn spanning_nodes() {
        let g = Grid::spanning(-1.0, 1.0, 5, Space::X).unwrap();
        assert_eq!(g.nodes(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert_eq!(g.interval(), (-1.0, 1.0));
        assert_eq!(g.refined().count, 9);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid::interior(1.0, 0.0, 10, Space::X).is_err());
        assert!(Grid::interior(0.0, 1.0, 2, Space::X).is_err());
        assert!(Grid::spanning(0.0, f64::INFINITY, 10, Space::X).is_err());
    }
}
