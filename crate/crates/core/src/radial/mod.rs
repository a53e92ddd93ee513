//! Radial functions: parsing, automatic differentiation, quadrature.
//!
//! Everything in this crate consumes scalar functions of one radial
//! variable through the [`Radial`] trait, which hands back second-order
//! jets (value, first, second derivative). Two evaluation channels exist:
//! plain `f64` jets ([`jet::Jet2`]) and sign/log-magnitude jets
//! ([`logjet::LogJet`]) for radii where exponentially growing profiles
//! overflow `f64`.
//!
//! [`RadialExpr`] is the textual front end — a small expression grammar
//! (see [`expr`]) covering the profiles used in practice, e.g.
//! `"sinh(r)"`, `"sqrt(1+u^2)"`, `"tanh(r/2)"`. Code-defined profiles
//! plug in through [`FnRadial`].

pub mod expr;
pub mod interp;
pub mod jet;
pub mod logjet;
pub mod quad;

pub use expr::{Node, ParseError};
pub use jet::Jet2;
pub use logjet::{LogJet, LogScalar};

use expr::Func;

/// Error raised when evaluating a radial function at a point.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    /// The expression left its mathematical domain (log of a negative
    /// number, division by zero, …) at the given radius.
    #[error("domain error at r = {at}: {what}")]
    Domain { at: f64, what: String },
    /// Evaluation produced an infinity or NaN at the given radius —
    /// typically overflow, which the log-scaled channel avoids.
    #[error("expression value is not finite at r = {at}")]
    NonFinite { at: f64 },
}

/// A scalar function of one radial variable, differentiable twice.
pub trait Radial {
    /// Value and first two derivatives at `r`.
    fn jet(&self, r: f64) -> Result<Jet2, EvalError>;

    /// Log-scaled jet at `r`, usable where the plain value overflows.
    ///
    /// The default converts the `f64` jet, which is correct whenever that
    /// jet is finite; implementations whose profiles outgrow `f64` range
    /// override this with a genuinely log-scaled evaluation.
    fn log_jet(&self, r: f64) -> Result<LogJet, EvalError> {
        let j = self.jet(r)?;
        Ok(LogJet {
            v: LogScalar::from_f64(j.v),
            d1: LogScalar::from_f64(j.d1),
            d2: LogScalar::from_f64(j.d2),
        })
    }

    /// Plain value at `r`.
    fn value(&self, r: f64) -> Result<f64, EvalError> {
        self.jet(r).map(|j| j.v)
    }
}

impl<T: Radial + ?Sized> Radial for &T {
    fn jet(&self, r: f64) -> Result<Jet2, EvalError> {
        (**self).jet(r)
    }
    fn log_jet(&self, r: f64) -> Result<LogJet, EvalError> {
        (**self).log_jet(r)
    }
}

impl<T: Radial + ?Sized> Radial for Box<T> {
    fn jet(&self, r: f64) -> Result<Jet2, EvalError> {
        (**self).jet(r)
    }
    fn log_jet(&self, r: f64) -> Result<LogJet, EvalError> {
        (**self).log_jet(r)
    }
}

impl<T: Radial + ?Sized> Radial for std::sync::Arc<T> {
    fn jet(&self, r: f64) -> Result<Jet2, EvalError> {
        (**self).jet(r)
    }
    fn log_jet(&self, r: f64) -> Result<LogJet, EvalError> {
        (**self).log_jet(r)
    }
}

/// A radial function backed by a closure producing jets directly.
///
/// This is the escape hatch for profiles that are awkward to spell in the
/// expression grammar (piecewise constructions, profiles depending on
/// precomputed data). The closure must return correct derivatives; nothing
/// checks them.
pub struct FnRadial<F> {
    f: F,
}

impl<F: Fn(f64) -> Jet2> FnRadial<F> {
    pub fn new(f: F) -> Self {
        FnRadial { f }
    }
}

impl<F: Fn(f64) -> Jet2> Radial for FnRadial<F> {
    fn jet(&self, r: f64) -> Result<Jet2, EvalError> {
        let j = (self.f)(r);
        if j.is_finite() {
            Ok(j)
        } else {
            Err(EvalError::NonFinite { at: r })
        }
    }
}

/// A parsed radial expression; see [`expr`] for the grammar.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialExpr {
    node: Node,
    var: Option<String>,
    source: String,
}

impl RadialExpr {
    pub fn parse(src: &str) -> Result<RadialExpr, ParseError> {
        let (node, var) = expr::parse(src)?;
        Ok(RadialExpr {
            node,
            var,
            source: src.to_string(),
        })
    }

    /// A constant function of the radius.
    pub fn constant(v: f64) -> RadialExpr {
        RadialExpr {
            node: Node::Num(v),
            var: None,
            source: format!("{v}"),
        }
    }

    /// The source text this expression was parsed from.
    pub fn source(&self) -> &str {
        &self.source
    }

    /// Name of the free variable, if the expression uses one.
    pub fn var_name(&self) -> Option<&str> {
        self.var.as_deref()
    }
}

impl std::fmt::Display for RadialExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.source)
    }
}

impl std::str::FromStr for RadialExpr {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        RadialExpr::parse(s)
    }
}

impl Radial for RadialExpr {
    fn jet(&self, r: f64) -> Result<Jet2, EvalError> {
        let j = eval_jet(&self.node, Jet2::variable(r), r)?;
        if j.is_finite() {
            Ok(j)
        } else {
            Err(EvalError::NonFinite { at: r })
        }
    }

    fn log_jet(&self, r: f64) -> Result<LogJet, EvalError> {
        let j = eval_log(&self.node, LogJet::variable(r), r)?;
        if j.is_nan() {
            Err(EvalError::NonFinite { at: r })
        } else {
            Ok(j)
        }
    }
}

/// Extract a constant integer exponent (possibly negated) from a tree, so
/// `x^3` and `x^-2` take the integer-power rule that tolerates negative and
/// zero bases.
fn const_int_exponent(node: &Node) -> Option<i32> {
    match node {
        Node::Num(v) if v.fract() == 0.0 && v.abs() <= i32::MAX as f64 => Some(*v as i32),
        Node::Neg(inner) => const_int_exponent(inner).map(|n| -n),
        _ => None,
    }
}

fn domain(at: f64, what: &str) -> EvalError {
    EvalError::Domain {
        at,
        what: what.into(),
    }
}

fn eval_jet(node: &Node, x: Jet2, at: f64) -> Result<Jet2, EvalError> {
    Ok(match node {
        Node::Num(c) => Jet2::constant(*c),
        Node::Var => x,
        Node::Pi => Jet2::constant(std::f64::consts::PI),
        Node::E => Jet2::constant(std::f64::consts::E),
        Node::Neg(n) => -eval_jet(n, x, at)?,
        Node::Add(a, b) => eval_jet(a, x, at)? + eval_jet(b, x, at)?,
        Node::Sub(a, b) => eval_jet(a, x, at)? - eval_jet(b, x, at)?,
        Node::Mul(a, b) => eval_jet(a, x, at)? * eval_jet(b, x, at)?,
        Node::Div(a, b) => {
            let num = eval_jet(a, x, at)?;
            let den = eval_jet(b, x, at)?;
            if den.v == 0.0 {
                return Err(domain(at, "division by zero"));
            }
            num / den
        }
        Node::Pow(a, b) => {
            let base = eval_jet(a, x, at)?;
            if let Some(n) = const_int_exponent(b) {
                if base.v == 0.0 && n < 0 {
                    return Err(domain(at, "zero raised to a negative power"));
                }
                base.powi(n)
            } else {
                let exponent = eval_jet(b, x, at)?;
                if base.v <= 0.0 {
                    return Err(domain(at, "power with a non-positive base and non-integer exponent"));
                }
                base.pow(exponent)
            }
        }
        Node::Apply(func, arg) => {
            let u = eval_jet(arg, x, at)?;
            match func {
                Func::Sin => u.sin(),
                Func::Cos => u.cos(),
                Func::Tan => u.tan(),
                Func::Sinh => u.sinh(),
                Func::Cosh => u.cosh(),
                Func::Tanh => u.tanh(),
                Func::Exp => u.exp(),
                Func::Atan => u.atan(),
                Func::Abs => u.abs(),
                Func::Log => {
                    if u.v <= 0.0 {
                        return Err(domain(at, "log of a non-positive value"));
                    }
                    u.ln()
                }
                Func::Sqrt => {
                    if u.v < 0.0 {
                        return Err(domain(at, "sqrt of a negative value"));
                    }
                    if u.v == 0.0 {
                        return Err(domain(at, "sqrt has unbounded derivative at zero"));
                    }
                    u.sqrt()
                }
            }
        }
    })
}

fn eval_log(node: &Node, x: LogJet, at: f64) -> Result<LogJet, EvalError> {
    Ok(match node {
        Node::Num(c) => LogJet::constant(*c),
        Node::Var => x,
        Node::Pi => LogJet::constant(std::f64::consts::PI),
        Node::E => LogJet::constant(std::f64::consts::E),
        Node::Neg(n) => eval_log(n, x, at)?.neg(),
        Node::Add(a, b) => eval_log(a, x, at)?.add(eval_log(b, x, at)?),
        Node::Sub(a, b) => eval_log(a, x, at)?.sub(eval_log(b, x, at)?),
        Node::Mul(a, b) => eval_log(a, x, at)?.mul(eval_log(b, x, at)?),
        Node::Div(a, b) => eval_log(a, x, at)?.div(eval_log(b, x, at)?, at)?,
        Node::Pow(a, b) => {
            let base = eval_log(a, x, at)?;
            if let Some(n) = const_int_exponent(b) {
                base.powi(n, at)?
            } else {
                base.pow(eval_log(b, x, at)?, at)?
            }
        }
        Node::Apply(func, arg) => {
            let u = eval_log(arg, x, at)?;
            match func {
                Func::Sin => u.sin(at)?,
                Func::Cos => u.cos(at)?,
                Func::Tan => u.tan(at)?,
                Func::Sinh => u.sinh(at)?,
                Func::Cosh => u.cosh(at)?,
                Func::Tanh => u.tanh(at)?,
                Func::Exp => u.exp(at)?,
                Func::Log => u.ln(at)?,
                Func::Sqrt => u.sqrt(at)?,
                Func::Atan => u.atan(),
                Func::Abs => u.abs(),
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jet_and_log_jet_agree_in_range() {
        let f = RadialExpr::parse("r^2 * sinh(r) / (1 + cosh(r))").unwrap();
        for &r in &[0.3, 1.0, 2.5, 10.0] {
            let a = f.jet(r).unwrap();
            let b = f.log_jet(r).unwrap();
            assert!((a.v - b.v.to_f64()).abs() <= 1e-12 * a.v.abs());
            assert!((a.d1 - b.d1.to_f64()).abs() <= 1e-11 * a.d1.abs().max(1.0));
            assert!((a.d2 - b.d2.to_f64()).abs() <= 1e-11 * a.d2.abs().max(1.0));
        }
    }

    #[test]
    fn log_jet_survives_overflow() {
        let f = RadialExpr::parse("sinh(r)").unwrap();
        assert!(matches!(f.jet(1000.0), Err(EvalError::NonFinite { .. })));
        let j = f.log_jet(1000.0).unwrap();
        assert!((j.v.ln_abs - (1000.0 - std::f64::consts::LN_2)).abs() < 1e-9);
    }

    #[test]
    fn domain_error_reports_radius() {
        let f = RadialExpr::parse("sinh(r)/r").unwrap();
        match f.jet(0.0) {
            Err(EvalError::Domain { at, what }) => {
                assert_eq!(at, 0.0);
                assert!(what.contains("division"));
            }
            other => panic!("expected a domain error, got {other:?}"),
        }
    }
}
