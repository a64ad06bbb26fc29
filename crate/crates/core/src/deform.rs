//! Deformation function μ(x) of the commutator `[x, p] = iħ(1 + μ(x))`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::expr::{self, Ast, Bindings, EvalError, ExprError, Func};

/// Floor on `1 + μ` below which the coordinate map loses all accuracy.
pub const POSITIVITY_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DeformError {
    #[error("{0} deformation needs a nonzero parameter")]
    ZeroParameter(&'static str),
    #[error("parameter {name} must be finite")]
    NonFiniteParameter { name: String },
    #[error("x = {x} outside the deformation domain [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },
    #[error("invalid domain [{lo}, {hi}]")]
    InvalidDomain { lo: f64, hi: f64 },
    #[error("evaluating the deformation at x = {x}: {source}")]
    Eval { x: f64, source: EvalError },
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("1 + mu(x) = {value:e} at x = {x} is not above {POSITIVITY_FLOOR:e}")]
    NotPositive { x: f64, value: f64 },
    #[error("validation needs at least 2 samples")]
    TooFewSamples,
}

/// Closed interval, either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
}

impl Domain {
    pub const REAL_LINE: Domain = Domain {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Result<Domain, DeformError> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(DeformError::InvalidDomain { lo, hi });
        }
        Ok(Domain { lo, hi })
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// `count` points covering the interval: uniform for finite intervals,
    /// uniform in `atan(x)` otherwise.
    pub fn sample_points(&self, count: usize) -> Vec<f64> {
        let last = (count.max(2) - 1) as f64;
        if self.is_finite() {
            (0..count)
                .map(|i| self.lo + (self.hi - self.lo) * i as f64 / last)
                .collect()
        } else {
            let (a, b) = (self.lo.atan(), self.hi.atan());
            (0..count)
                .map(|i| {
                    let t = a + (b - a) * i as f64 / last;
                    if i == 0 && self.lo.is_finite() {
                        self.lo
                    } else if i + 1 == count && self.hi.is_finite() {
                        self.hi
                    } else {
                        t.tan()
                    }
                })
                .collect()
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Builtin {
    Zero,
    /// μ = α²x²
    Quadratic { alpha: f64 },
    /// μ = e^{−γx} − 1
    Exponential { gamma: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Form {
    Builtin(Builtin),
    Expression(String),
}

/// Value and first two derivatives of μ at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triple {
    pub mu: f64,
    pub mu1: f64,
    pub mu2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidationReport {
    pub min_value: f64,
    pub argmin: f64,
    pub samples: usize,
    pub valid: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Deformation {
    form: Form,
    mu: Ast,
    mu1: Ast,
    mu2: Ast,
    params: BTreeMap<String, f64>,
    domain: Domain,
}

impl Deformation {
    pub fn make_builtin(kind: Builtin) -> Result<Deformation, DeformError> {
        let x = || Ast::Var;
        let (mu, params, domain) = match kind {
            Builtin::Zero => (Ast::Const(0.0), BTreeMap::new(), Domain::REAL_LINE),
            Builtin::Quadratic { alpha } => {
                check_parameter("alpha", alpha, "quadratic")?;
                let mu = Ast::mul(Ast::pow(Ast::param("alpha"), 2), Ast::pow(x(), 2));
                (mu, BTreeMap::from([("alpha".to_string(), alpha)]), Domain::REAL_LINE)
            }
            Builtin::Exponential { gamma } => {
                check_parameter("gamma", gamma, "exponential")?;
                let mu = Ast::sub(
                    Ast::call(Func::Exp, Ast::neg(Ast::mul(Ast::param("gamma"), x()))),
                    Ast::Const(1.0),
                );
                let reach = 10.0 / gamma.abs();
                (
                    mu,
                    BTreeMap::from([("gamma".to_string(), gamma)]),
                    Domain::new(-reach, reach)?,
                )
            }
        };
        Ok(Self::assemble(Form::Builtin(kind), mu, params, domain))
    }

    pub fn zero() -> Deformation {
        Self::make_builtin(Builtin::Zero).expect("zero deformation")
    }

    pub fn quadratic(alpha: f64) -> Result<Deformation, DeformError> {
        Self::make_builtin(Builtin::Quadratic { alpha })
    }

    pub fn exponential(gamma: f64) -> Result<Deformation, DeformError> {
        Self::make_builtin(Builtin::Exponential { gamma })
    }

    /// Parses `text` as μ(x); derivatives are attached symbolically.
    pub fn from_expression(
        text: &str,
        params: BTreeMap<String, f64>,
        domain: Domain,
    ) -> Result<Deformation, DeformError> {
        for (name, value) in &params {
            if !value.is_finite() {
                return Err(DeformError::NonFiniteParameter { name: name.clone() });
            }
        }
        let names: Vec<&str> = params.keys().map(String::as_str).collect();
        let mu = expr::parse(text, &names)?;
        Ok(Self::assemble(
            Form::Expression(text.to_string()),
            mu,
            params,
            domain,
        ))
    }

    fn assemble(form: Form, mu: Ast, params: BTreeMap<String, f64>, domain: Domain) -> Self {
        let mu1 = expr::differentiate(&mu);
        let mu2 = expr::differentiate(&mu1);
        Deformation {
            form,
            mu,
            mu1,
            mu2,
            params,
            domain,
        }
    }

    pub fn with_domain(mut self, domain: Domain) -> Deformation {
        self.domain = domain;
        self
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn mu(&self) -> &Ast {
        &self.mu
    }

    pub fn mu1(&self) -> &Ast {
        &self.mu1
    }

    pub fn mu2(&self) -> &Ast {
        &self.mu2
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// The α of a quadratic deformation, if that is what this is.
    pub fn quadratic_alpha(&self) -> Option<f64> {
        match self.form {
            Form::Builtin(Builtin::Quadratic { alpha }) => Some(alpha),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.form, Form::Builtin(Builtin::Zero))
    }

    pub fn bindings(&self, x: f64) -> Bindings {
        Bindings::with_params(x, self.params.clone())
    }

    fn check_domain(&self, x: f64) -> Result<(), DeformError> {
        if self.domain.contains(x) {
            Ok(())
        } else {
            Err(DeformError::OutOfDomain {
                x,
                lo: self.domain.lo,
                hi: self.domain.hi,
            })
        }
    }

    fn eval_ast(&self, a: &Ast, x: f64) -> Result<f64, DeformError> {
        expr::evaluate_with(a, x, &|name| self.params.get(name).copied())
            .map_err(|source| DeformError::Eval { x, source })
    }

    /// Evaluates (μ, μ′, μ″) by the symbolic route regardless of form.
    pub fn evaluate_symbolic(&self, x: f64) -> Result<Triple, DeformError> {
        self.check_domain(x)?;
        Ok(Triple {
            mu: self.eval_ast(&self.mu, x)?,
            mu1: self.eval_ast(&self.mu1, x)?,
            mu2: self.eval_ast(&self.mu2, x)?,
        })
    }

    /// (μ, μ′, μ″) at `x`. Built-ins use closed forms.
    pub fn evaluate_triple(&self, x: f64) -> Result<Triple, DeformError> {
        self.check_domain(x)?;
        let t = match self.form {
            Form::Builtin(Builtin::Zero) => Triple {
                mu: 0.0,
                mu1: 0.0,
                mu2: 0.0,
            },
            Form::Builtin(Builtin::Quadratic { alpha }) => {
                let a2 = alpha * alpha;
                Triple {
                    mu: a2 * x * x,
                    mu1: 2.0 * a2 * x,
                    mu2: 2.0 * a2,
                }
            }
            Form::Builtin(Builtin::Exponential { gamma }) => {
                let e = (-gamma * x).exp();
                Triple {
                    mu: e - 1.0,
                    mu1: -gamma * e,
                    mu2: gamma * gamma * e,
                }
            }
            Form::Expression(_) => return self.evaluate_symbolic(x),
        };
        if t.mu.is_finite() && t.mu1.is_finite() && t.mu2.is_finite() {
            Ok(t)
        } else {
            Err(DeformError::Eval {
                x,
                source: EvalError::NonFinite { what: "deformation" },
            })
        }
    }

    /// `1 + μ(x)`; for exponential deformations this is computed as
    /// `e^{−γx}` directly so it never cancels.
    pub fn one_plus_mu(&self, x: f64) -> Result<f64, DeformError> {
        self.check_domain(x)?;
        let v = match self.form {
            Form::Builtin(Builtin::Zero) => 1.0,
            Form::Builtin(Builtin::Quadratic { alpha }) => 1.0 + alpha * alpha * x * x,
            Form::Builtin(Builtin::Exponential { gamma }) => (-gamma * x).exp(),
            Form::Expression(_) => 1.0 + self.eval_ast(&self.mu, x)?,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(DeformError::Eval {
                x,
                source: EvalError::NonFinite { what: "deformation" },
            })
        }
    }

    /// Checks `1 + μ > POSITIVITY_FLOOR` on `samples` points of the domain.
    pub fn validate(&self, samples: usize) -> Result<ValidationReport, DeformError> {
        self.validate_on(self.domain, samples)
    }

    pub fn validate_on(
        &self,
        interval: Domain,
        samples: usize,
    ) -> Result<ValidationReport, DeformError> {
        if samples < 2 {
            return Err(DeformError::TooFewSamples);
        }
        let mut min_value = f64::INFINITY;
        let mut argmin = interval.lo;
        for x in interval.sample_points(samples) {
            let v = self.one_plus_mu(x)?;
            if v < min_value {
                min_value = v;
                argmin = x;
            }
        }
        Ok(ValidationReport {
            min_value,
            argmin,
            samples,
            valid: min_value > POSITIVITY_FLOOR,
        })
    }

    /// Like [`validate_on`](Self::validate_on) but turns a failed report
    /// into an error.
    pub fn ensure_valid_on(&self, interval: Domain, samples: usize) -> Result<(), DeformError> {
        let report = self.validate_on(interval, samples)?;
        if report.valid {
            Ok(())
        } else {
            Err(DeformError::NotPositive {
                x: report.argmin,
                value: report.min_value,
            })
        }
    }

    /// Short human-readable description used in reports.
    pub fn describe(&self) -> String {
        match &self.form {
            Form::Builtin(Builtin::Zero) => "zero".into(),
            Form::Builtin(Builtin::Quadratic { alpha }) => format!("quadratic(alpha={alpha})"),
            Form::Builtin(Builtin::Exponential { gamma }) => {
                format!("exponential(gamma={gamma})")
            }
            Form::Expression(text) => format!("expr({text})"),
        }
    }
}

fn check_parameter(name: &'static str, value: f64, kind: &'static str) -> Result<(), DeformError> {
    if !value.is_finite() {
        return Err(DeformError::NonFiniteParameter { name: name.into() });
    }
    if value == 0.0 {
        return Err(DeformError::ZeroParameter(kind));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triple(d: &Deformation, x: f64) -> (f64, f64, f64) {
        let t = d.evaluate_triple(x).unwrap();
        (t.mu, t.mu1, t.mu2)
    }

    #[test]
    fn builtin_triples() {
        assert_eq!(triple(&Deformation::quadratic(1.0).unwrap(), 2.0), (4.0, 4.0, 2.0));
        assert_eq!(triple(&Deformation::quadratic(2.0).unwrap(), 1.0), (4.0, 8.0, 8.0));
        assert_eq!(triple(&Deformation::exponential(1.0).unwrap(), 0.0), (0.0, -1.0, 1.0));
        assert_eq!(triple(&Deformation::exponential(2.0).unwrap(), 0.0), (0.0, -2.0, 4.0));
        assert_eq!(triple(&Deformation::zero(), 5.0), (0.0, 0.0, 0.0));
    }

    #[test]
    fn zero_parameter_rejected() {
        assert_eq!(
            Deformation::quadratic(0.0),
            Err(DeformError::ZeroParameter("quadratic"))
        );
        assert!(Deformation::exponential(0.0).is_err());
        assert!(Deformation::quadratic(f64::NAN).is_err());
    }

    #[test]
    fn derivatives_are_symbolic_chain() {
        let d = Deformation::exponential(1.5).unwrap();
        assert_eq!(d.mu1(), &expr::differentiate(d.mu()));
        assert_eq!(d.mu2(), &expr::differentiate(d.mu1()));
    }

    #[test]
    fn expression_matches_builtin() {
        let from_text = Deformation::from_expression(
            "a^2*x^2",
            BTreeMap::from([("a".into(), 1.0)]),
            Domain::REAL_LINE,
        )
        .unwrap();
        let builtin = Deformation::quadratic(1.0).unwrap();
        for x in [-3.0, -0.5, 0.0, 1.0, 7.5] {
            assert_eq!(triple(&from_text, x), triple(&builtin, x));
        }
        let from_text = Deformation::from_expression(
            "exp(-g*x)-1",
            BTreeMap::from([("g".into(), 1.0)]),
            Domain::new(-10.0, 10.0).unwrap(),
        )
        .unwrap();
        let builtin = Deformation::exponential(1.0).unwrap();
        for x in [-3.0, -0.5, 0.0, 1.0, 7.5] {
            let (a, b) = (triple(&from_text, x), triple(&builtin, x));
            assert!((a.0 - b.0).abs() <= 1e-15 * (1.0 + b.0.abs()));
            assert!((a.1 - b.1).abs() <= 1e-15 * b.1.abs());
            assert!((a.2 - b.2).abs() <= 1e-15 * b.2.abs());
        }
    }

    #[test]
    fn validation_examples() {
        let q = Deformation::quadratic(1.0).unwrap();
        let r = q.validate_on(Domain::new(-10.0, 10.0).unwrap(), 2001).unwrap();
        assert!(r.valid);
        assert_eq!(r.min_value, 1.0);
        assert_eq!(r.argmin, 0.0);

        let minus_one = Deformation::from_expression("-1", BTreeMap::new(), Domain::REAL_LINE)
            .unwrap();
        let r = minus_one.validate(100).unwrap();
        assert!(!r.valid);
        assert_eq!(r.min_value, 0.0);

        let e = Deformation::exponential(1.0).unwrap();
        let r = e.validate_on(Domain::new(0.0, 10.0).unwrap(), 1001).unwrap();
        assert!(r.valid);
        assert!((r.min_value - (-10.0f64).exp()).abs() < 1e-18);
        assert_eq!(r.argmin, 10.0);

        let s = Deformation::from_expression("2*sin(x)", BTreeMap::new(), Domain::new(0.0, 6.0).unwrap())
            .unwrap();
        let r = s.validate(6001).unwrap();
        assert!(!r.valid);
        assert!((r.argmin - 3.0 * std::f64::consts::FRAC_PI_2).abs() < 2e-3);
        assert!(s.ensure_valid_on(s.domain(), 6001).is_err());

        assert_eq!(q.validate(1), Err(DeformError::TooFewSamples));
    }

    #[test]
    fn out_of_domain() {
        let e = Deformation::exponential(1.0).unwrap();
        assert!(matches!(
            e.evaluate_triple(11.0),
            Err(DeformError::OutOfDomain { .. })
        ));
    }

    #[test]
    fn validation_over_real_line() {
        let q = Deformation::quadratic(3.0).unwrap();
        assert!(q.validate(1000).unwrap().valid);
    }
}
