//! Lowest eigenpairs of real symmetric band matrices: Givens band
//! reduction, Sturm bisection on the tridiagonal form, then inverse
//! iteration on the original band for the vectors.

mod inverse;
mod reduce;
mod sturm;

pub use inverse::ShiftedLu;
pub use reduce::tridiagonalize;
pub use sturm::{count_below, gershgorin, smallest as tridiagonal_smallest};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::operator::SymmetricBandedMatrix;

const MAX_ITERATIONS: usize = 50;
const CLUSTER: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EigenError {
    #[error("requested {k} eigenpairs of a {n}x{n} matrix")]
    TooMany { k: usize, n: usize },
    #[error("requested zero eigenpairs")]
    NoneRequested,
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("inverse iteration did not converge for eigenvalue {index} (residual {residual:e})")]
    NotConverged { index: usize, residual: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenPair {
    pub eigenvalue: f64,
    /// Unit Euclidean norm unless rescaled with [`EigenPair::quadrature_normalized`].
    pub eigenvector: Vec<f64>,
    /// `‖Mv − λv‖∞` for the stored vector.
    pub residual: f64,
}

impl EigenPair {
    /// Rescale so that `h Σ v² = 1`. The residual scales with the vector.
    pub fn quadrature_normalized(mut self, h: f64) -> EigenPair {
        let norm = (h * self.eigenvector.iter().map(|v| v * v).sum::<f64>()).sqrt();
        if norm > 0.0 {
            self.eigenvector.iter_mut().for_each(|v| *v /= norm);
            self.residual /= norm;
        }
        self
    }
}

fn residual(m: &SymmetricBandedMatrix, lambda: f64, v: &[f64]) -> f64 {
    m.matvec(v)
        .iter()
        .zip(v)
        .map(|(mv, x)| (mv - lambda * x).abs())
        .fold(0.0, f64::max)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = dot(v, v).sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    n
}

/// Fix the sign so the largest-magnitude component is positive.
fn canonical_sign(v: &mut [f64]) {
    let mut best = 0.0f64;
    let mut sign = 1.0;
    for &x in v.iter() {
        if x.abs() > best.abs() * (1.0 + 1e-9) {
            best = x;
            sign = x.signum();
        }
    }
    if sign < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// The `k` algebraically smallest eigenpairs in nondecreasing order.
pub fn lowest_eigenpairs(m: &SymmetricBandedMatrix, k: usize) -> Result<Vec<EigenPair>, EigenError> {
    let n = m.dim();
    if k == 0 {
        return Err(EigenError::NoneRequested);
    }
    if k > n {
        return Err(EigenError::TooMany { k, n });
    }
    if !m.is_finite() {
        return Err(EigenError::NonFinite);
    }
    let (diag, off) = tridiagonalize(m);
    let values = sturm::smallest(&diag, &off, k);
    let (lo, hi) = gershgorin(&diag, &off);
    let cluster = CLUSTER * (hi - lo).max(f64::MIN_POSITIVE);
    let scale = m.norm_inf().max(f64::MIN_POSITIVE);

    let mut pairs: Vec<EigenPair> = Vec::with_capacity(k);
    for (index, &lambda) in values.iter().enumerate() {
        // previously found vectors in the same cluster
        let mut first = index;
        while first > 0 && (values[first - 1] - values[first]).abs() <= cluster {
            first -= 1;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ index as u64);
        let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        normalize(&mut v);

        let mut shift = lambda;
        let mut lu = ShiftedLu::new(m, shift);
        let mut best = f64::INFINITY;
        let mut stalled = 0;
        let mut refined = false;
        let mut estimate = lambda;
        for _ in 0..MAX_ITERATIONS {
            lu.solve(&mut v);
            for p in &pairs[first..] {
                let c = dot(&v, &p.eigenvector);
                v.iter_mut().zip(&p.eigenvector).for_each(|(x, q)| *x -= c * q);
            }
            if normalize(&mut v) == 0.0 || v.iter().any(|x| !x.is_finite()) {
                v = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                normalize(&mut v);
                continue;
            }
            let mv = m.matvec(&v);
            estimate = dot(&v, &mv);
            let r = residual(m, estimate, &v);
            if r < best * 0.5 {
                best = r;
                stalled = 0;
            } else {
                stalled += 1;
            }
            if stalled >= 2 {
                if refined || pairs.len() > first {
                    break;
                }
                // one more pass with the Rayleigh quotient as the shift
                refined = true;
                stalled = 0;
                if (estimate - shift).abs() > cluster {
                    break;
                }
                shift = estimate;
                lu = ShiftedLu::new(m, shift);
            }
        }
        canonical_sign(&mut v);
        let r = residual(m, estimate, &v);
        if !(r <= 1e-6 * scale) {
            return Err(EigenError::NotConverged { index, residual: r });
        }
        pairs.push(EigenPair {
            eigenvalue: estimate,
            eigenvector: v,
            residual: r,
        });
    }
    // the Rayleigh quotient can reorder members of a tight cluster
    pairs.sort_by(|a, b| a.eigenvalue.total_cmp(&b.eigenvalue));
    Ok(pairs)
}

/// `max ‖Mv − λv‖∞` over the pairs, recomputed from scratch.
pub fn residual_check(m: &SymmetricBandedMatrix, pairs: &[EigenPair]) -> f64 {
    pairs
        .iter()
        .map(|p| residual(m, p.eigenvalue, &p.eigenvector))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn values(m: &SymmetricBandedMatrix, k: usize) -> Vec<f64> {
        lowest_eigenpairs(m, k).unwrap().iter().map(|p| p.eigenvalue).collect()
    }

    #[test]
    fn two_by_two() {
        let m = SymmetricBandedMatrix::from_tridiagonal(&[2.0, 2.0], &[1.0]);
        let v = values(&m, 2);
        assert!((v[0] - 1.0).abs() < 1e-14 && (v[1] - 3.0).abs() < 1e-14, "{v:?}");
    }

    #[test]
    fn diagonal_sorted() {
        let m = SymmetricBandedMatrix::from_tridiagonal(&[3.0, 1.0, 2.0], &[0.0, 0.0]);
        let v = values(&m, 3);
        for (a, b) in v.iter().zip([1.0, 2.0, 3.0]) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn toeplitz_fifty() {
        let (a, b) = (1.5, -0.7);
        let n = 50;
        let m = SymmetricBandedMatrix::from_tridiagonal(&vec![a; n], &vec![b; n - 1]);
        let pairs = lowest_eigenpairs(&m, n).unwrap();
        let mut exact: Vec<f64> = (1..=n)
            .map(|j| a + 2.0 * b * (j as f64 * std::f64::consts::PI / 51.0).cos())
            .collect();
        exact.sort_by(f64::total_cmp);
        for (p, e) in pairs.iter().zip(&exact) {
            assert!((p.eigenvalue - e).abs() <= 1e-12, "{} {e}", p.eigenvalue);
        }
        for i in 0..n {
            for j in 0..i {
                assert!(dot(&pairs[i].eigenvector, &pairs[j].eigenvector).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn identity_residual_is_zero() {
        let mut m = SymmetricBandedMatrix::zeros(6, 2);
        for i in 0..6 {
            m.set(i, i, 1.0);
        }
        let pairs = lowest_eigenpairs(&m, 3).unwrap();
        assert_eq!(residual_check(&m, &pairs), 0.0);
        for i in 0..3 {
            for j in 0..i {
                assert!(dot(&pairs[i].eigenvector, &pairs[j].eigenvector).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn pentadiagonal_matches_dense_invariants() {
        let n = 40;
        let mut m = SymmetricBandedMatrix::zeros(n, 2);
        for i in 0..n {
            m.set(i, i, 2.5 + (i as f64).sin());
            if i + 1 < n {
                m.set(i, i + 1, -1.0);
            }
            if i + 2 < n {
                m.set(i, i + 2, 0.25);
            }
        }
        let pairs = lowest_eigenpairs(&m, n).unwrap();
        let trace: f64 = (0..n).map(|i| m.get(i, i)).sum();
        let sum: f64 = pairs.iter().map(|p| p.eigenvalue).sum();
        assert!((trace - sum).abs() < 1e-11);
        assert!(residual_check(&m, &pairs) < 1e-12 * m.norm_inf());
        assert!(pairs.windows(2).all(|w| w[0].eigenvalue <= w[1].eigenvalue));
    }

    #[test]
    fn residual_linear_in_perturbation() {
        let n = 30;
        let m = SymmetricBandedMatrix::from_tridiagonal(&vec![2.0; n], &vec![-1.0; n - 1]);
        let pair = lowest_eigenpairs(&m, 1).unwrap().remove(0);
        let u: Vec<f64> = (0..n).map(|i| ((i * 7 % 5) as f64 - 2.0) / 3.0).collect();
        let at = |eps: f64| {
            let v: Vec<f64> = pair.eigenvector.iter().zip(&u).map(|(a, b)| a + eps * b).collect();
            residual(&m, pair.eigenvalue, &v)
        };
        let (r1, r2) = (at(1e-4), at(2e-4));
        assert!((r2 / r1 - 2.0).abs() < 1e-6, "{}", r2 / r1);
    }

    #[test]
    fn errors() {
        let m = SymmetricBandedMatrix::from_tridiagonal(&[1.0, 2.0], &[0.5]);
        assert_eq!(lowest_eigenpairs(&m, 3), Err(EigenError::TooMany { k: 3, n: 2 }));
        assert_eq!(lowest_eigenpairs(&m, 0), Err(EigenError::NoneRequested));
    }

    #[test]
    fn quadrature_scaling() {
        let m = SymmetricBandedMatrix::from_tridiagonal(&[2.0; 4], &[-1.0; 3]);
        let p = lowest_eigenpairs(&m, 1).unwrap().remove(0).quadrature_normalized(0.25);
        let q: f64 = 0.25 * p.eigenvector.iter().map(|v| v * v).sum::<f64>();
        assert!((q - 1.0).abs() < 1e-14);
    }
}
