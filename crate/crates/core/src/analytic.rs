//! Closed-form spectra and eigenstates of the two worked examples: the
//! quadratic-deformation box and the half oscillator reached from the
//! exponential deformation with a half-Morse potential.

use std::f64::consts::PI;

use thiserror::Error;

use crate::deform::Domain;
use crate::expr::{self, Ast, EvalError, Func};
use crate::operator::{Grid, OperatorError, WaveFunction};
use crate::quad::{self, QuadError};

const NORM_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error("quantum number {n} below the minimum {min}")]
    QuantumNumber { n: i64, min: i64 },
    #[error("{name} must be positive and finite, got {value}")]
    Parameter { name: &'static str, value: f64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("quadrature did not converge on [{lo}, {hi}]")]
    Quadrature { lo: f64, hi: f64 },
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

impl From<QuadError<EvalError>> for AnalyticError {
    fn from(e: QuadError<EvalError>) -> Self {
        match e {
            QuadError::Integrand(e) => AnalyticError::Eval(e),
            QuadError::NotConverged { lo, hi } => AnalyticError::Quadrature { lo, hi },
        }
    }
}

fn positive(name: &'static str, value: f64) -> Result<f64, AnalyticError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(AnalyticError::Parameter { name, value })
    }
}

/// A real eigenstate given in closed form, zero outside `support`.
#[derive(Debug, Clone)]
pub struct AnalyticState {
    label: String,
    ast: Ast,
    slope: Ast,
    support: Domain,
    rescale: f64,
}

impl AnalyticState {
    /// Wraps `ast` and rescales it so that `∫|φ|² = 1` by adaptive quadrature.
    pub fn new(label: impl Into<String>, ast: Ast, support: Domain) -> Result<AnalyticState, AnalyticError> {
        let slope = expr::differentiate(&ast);
        let mut state = AnalyticState {
            label: label.into(),
            ast,
            slope,
            support,
            rescale: 1.0,
        };
        let norm = state.integrate(|_, phi, _| phi * phi)?;
        state.rescale = 1.0 / norm.sqrt();
        Ok(state)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn support(&self) -> Domain {
        self.support
    }

    /// Factor applied on top of the closed-form prefactor; 1 up to
    /// quadrature error when the prefactor is right.
    pub fn rescale(&self) -> f64 {
        self.rescale
    }

    /// The unscaled closed form.
    pub fn ast(&self) -> &Ast {
        &self.ast
    }

    fn eval(&self, a: &Ast, x: f64) -> Result<f64, EvalError> {
        if !self.support.contains(x) {
            return Ok(0.0);
        }
        Ok(self.rescale * expr::evaluate_with(a, x, &|_| None)?)
    }

    pub fn value(&self, x: f64) -> Result<f64, EvalError> {
        self.eval(&self.ast, x)
    }

    pub fn derivative(&self, x: f64) -> Result<f64, EvalError> {
        self.eval(&self.slope, x)
    }

    /// `∫ f(x, φ(x), φ′(x)) dx` over the support.
    pub fn integrate(&self, f: impl Fn(f64, f64, f64) -> f64) -> Result<f64, AnalyticError> {
        let g = |x: f64| -> Result<f64, EvalError> {
            let v = f(x, self.value(x)?, self.derivative(x)?);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(EvalError::NonFinite { what: "integrand" })
            }
        };
        Ok(quad::integrate(g, self.support.lo, self.support.hi, NORM_TOL)?)
    }

    pub fn sample(&self, grid: Grid) -> Result<WaveFunction, OperatorError> {
        WaveFunction::from_fn(grid, |x| self.value(x).map(|v| v.into()))
    }
}

/// `Eₙ = n²ħ²α²/2m`.
pub fn box_energy(n: u32, alpha: f64, mass: f64, hbar: f64) -> Result<f64, AnalyticError> {
    if n < 1 {
        return Err(AnalyticError::QuantumNumber { n: n.into(), min: 1 });
    }
    let (alpha, mass, hbar) = (positive("alpha", alpha)?, positive("mass", mass)?, positive("hbar", hbar)?);
    let n = f64::from(n);
    Ok(n * n * hbar * hbar * alpha * alpha / (2.0 * mass))
}

/// `√(2α/π)·cos(n·atan(αx))/√(1+α²x²)` for odd n, `sin` for even n.
pub fn box_state(n: u32, alpha: f64) -> Result<AnalyticState, AnalyticError> {
    if n < 1 {
        return Err(AnalyticError::QuantumNumber { n: n.into(), min: 1 });
    }
    let alpha = positive("alpha", alpha)?;
    let ax = Ast::mul(Ast::constant(alpha), Ast::Var);
    let angle = Ast::mul(Ast::constant(f64::from(n)), Ast::call(Func::Arctan, ax.clone()));
    let wave = Ast::call(if n % 2 == 1 { Func::Cos } else { Func::Sin }, angle);
    let envelope = Ast::call(Func::Sqrt, Ast::add(Ast::constant(1.0), Ast::pow(ax, 2)));
    let ast = Ast::mul(
        Ast::constant((2.0 * alpha / PI).sqrt()),
        Ast::div(wave, envelope),
    );
    AnalyticState::new(format!("box(n={n}, alpha={alpha})"), ast, Domain::REAL_LINE)
}

/// Flat-box state `√(2α/π)·cos(nαz)` (odd n) or `sin(nαz)` (even n) on
/// `|z| ≤ π/2α`.
pub fn box_state_z(n: u32, alpha: f64) -> Result<AnalyticState, AnalyticError> {
    if n < 1 {
        return Err(AnalyticError::QuantumNumber { n: n.into(), min: 1 });
    }
    let alpha = positive("alpha", alpha)?;
    let angle = Ast::mul(Ast::constant(f64::from(n) * alpha), Ast::Var);
    let wave = Ast::call(if n % 2 == 1 { Func::Cos } else { Func::Sin }, angle);
    let ast = Ast::mul(Ast::constant((2.0 * alpha / PI).sqrt()), wave);
    let half = PI / (2.0 * alpha);
    AnalyticState::new(format!("box-z(n={n}, alpha={alpha})"), ast, Domain { lo: -half, hi: half })
}

/// `Hₙ(t)` from `H_{n+1} = 2tHₙ − 2nH_{n−1}`.
pub fn hermite(n: u32, t: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * t);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let next = 2.0 * t * cur - 2.0 * f64::from(k) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Coefficients of `Hₙ` in ascending powers.
pub fn hermite_coefficients(n: u32) -> Vec<f64> {
    let mut prev = vec![1.0];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![0.0, 2.0];
    for k in 1..n as usize {
        let mut next = vec![0.0; k + 2];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += 2.0 * c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= 2.0 * k as f64 * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// `Hₙ(arg)` as an expression, in Horner form.
pub fn hermite_ast(n: u32, arg: Ast) -> Ast {
    let coefficients = hermite_coefficients(n);
    let mut out = Ast::constant(*coefficients.last().unwrap());
    for &c in coefficients.iter().rev().skip(1) {
        out = Ast::mul(out, arg.clone());
        if c != 0.0 {
            out = Ast::add(out, Ast::constant(c));
        }
    }
    out
}

/// `ω = γ√(2V₀/m)`.
pub fn half_oscillator_omega(gamma: f64, v0: f64, mass: f64) -> Result<f64, AnalyticError> {
    Ok(positive("gamma", gamma)? * (2.0 * positive("v0", v0)? / positive("mass", mass)?).sqrt())
}

/// `Eₙ = ħω(2n + 3/2)`.
pub fn half_oscillator_energy(n: u32, omega: f64, hbar: f64) -> Result<f64, AnalyticError> {
    Ok(positive("hbar", hbar)? * positive("omega", omega)? * (2.0 * f64::from(n) + 1.5))
}

/// Beyond `t = √(mω/ħ)z` this far out the state is below the underflow
/// threshold for any index we use.
fn oscillator_cutoff(q: u32) -> f64 {
    30.0 + f64::from(q)
}

fn half_oscillator_z_ast(n: u32, omega: f64, mass: f64, hbar: f64) -> (Ast, f64) {
    let q = 2 * n + 1;
    let k = (mass * omega / hbar).sqrt();
    let log_factorial: f64 = (1..=q).map(|i| f64::from(i).ln()).sum();
    let prefactor =
        (mass * omega / (PI * hbar)).powf(0.25) * (-(0.5 * (f64::from(q - 1) * 2f64.ln() + log_factorial))).exp();
    let t = Ast::mul(Ast::constant(k), Ast::Var);
    let gauss = Ast::call(Func::Exp, Ast::mul(Ast::constant(-0.5), Ast::pow(t.clone(), 2)));
    let ast = Ast::mul(Ast::constant(prefactor), Ast::mul(hermite_ast(q, t), gauss));
    (ast, oscillator_cutoff(q) / k)
}

/// Odd full-line oscillator state of index `q = 2n + 1`, normalized on
/// `z ≥ 0`.
pub fn half_oscillator_state_z(n: u32, omega: f64, mass: f64, hbar: f64) -> Result<AnalyticState, AnalyticError> {
    let (omega, mass, hbar) = (positive("omega", omega)?, positive("mass", mass)?, positive("hbar", hbar)?);
    let (ast, z_max) = half_oscillator_z_ast(n, omega, mass, hbar);
    AnalyticState::new(
        format!("half-oscillator-z(n={n}, omega={omega})"),
        ast,
        Domain { lo: 0.0, hi: z_max },
    )
}

/// `e^{γx/2}·χₙ(z(x))` with `z = (e^{γx} − 1)/γ`.
pub fn half_oscillator_state_x(
    n: u32,
    gamma: f64,
    v0: f64,
    mass: f64,
    hbar: f64,
) -> Result<AnalyticState, AnalyticError> {
    let omega = half_oscillator_omega(gamma, v0, mass)?;
    let hbar = positive("hbar", hbar)?;
    let (chi, z_max) = half_oscillator_z_ast(n, omega, mass, hbar);
    let egx = Ast::call(Func::Exp, Ast::mul(Ast::constant(gamma), Ast::Var));
    let z = Ast::div(Ast::sub(egx, Ast::constant(1.0)), Ast::constant(gamma));
    let ast = Ast::mul(
        Ast::call(Func::Exp, Ast::mul(Ast::constant(0.5 * gamma), Ast::Var)),
        chi.substitute(&z),
    );
    let x_max = (1.0 + gamma * z_max).ln() / gamma;
    AnalyticState::new(
        format!("half-oscillator-x(n={n}, gamma={gamma}, v0={v0})"),
        ast,
        Domain { lo: 0.0, hi: x_max },
    )
}
