//! Log-scaled second-order jets.
//!
//! Radial comparison constructions have to be followed far out (the
//! convergence classifier pushes horizons past 10^5), where exponentially
//! growing warping functions such as `sinh` overflow `f64` even though every
//! quantity the analysis actually consumes — `w'/w`, `log w`, log-volumes —
//! stays small. A [`LogScalar`] stores a sign and the natural log of the
//! magnitude; sums go through log-sum-exp, so `cosh(1e5)/sinh(1e5)` comes out
//! as `1 + 2e-200000` instead of `inf/inf`.
//!
//! A [`LogJet`] is the second-order jet over that representation. It mirrors
//! [`super::jet::Jet2`] exactly on values well inside `f64` range (tested to
//! ~1e-12 relative agreement) and keeps working far beyond it.

use super::EvalError;

const LN2: f64 = std::f64::consts::LN_2;

/// Sign–log-magnitude representation of a real number: `sign · exp(ln_abs)`.
///
/// `sign == 0` encodes exact zero (with `ln_abs = -inf`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogScalar {
    pub sign: i8,
    pub ln_abs: f64,
}

impl LogScalar {
    pub const ZERO: LogScalar = LogScalar {
        sign: 0,
        ln_abs: f64::NEG_INFINITY,
    };
    pub const ONE: LogScalar = LogScalar { sign: 1, ln_abs: 0.0 };

    pub fn from_f64(x: f64) -> LogScalar {
        if x == 0.0 {
            LogScalar::ZERO
        } else {
            LogScalar {
                sign: if x > 0.0 { 1 } else { -1 },
                ln_abs: x.abs().ln(),
            }
        }
    }

    /// Build from an explicit sign and log-magnitude.
    pub fn from_ln(sign: i8, ln_abs: f64) -> LogScalar {
        if sign == 0 {
            LogScalar::ZERO
        } else {
            LogScalar { sign, ln_abs }
        }
    }

    /// Convert back to `f64`; overflows to ±inf, underflows to (signed) 0.
    pub fn to_f64(self) -> f64 {
        f64::from(self.sign) * self.ln_abs.exp()
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn is_nan(self) -> bool {
        self.ln_abs.is_nan()
    }

    pub fn neg(self) -> LogScalar {
        LogScalar {
            sign: -self.sign,
            ln_abs: self.ln_abs,
        }
    }

    pub fn mul(self, o: LogScalar) -> LogScalar {
        if self.sign == 0 || o.sign == 0 {
            return LogScalar::ZERO;
        }
        LogScalar {
            sign: self.sign * o.sign,
            ln_abs: self.ln_abs + o.ln_abs,
        }
    }

    pub fn div(self, o: LogScalar) -> LogScalar {
        if self.sign == 0 && o.sign != 0 {
            return LogScalar::ZERO;
        }
        LogScalar {
            sign: self.sign * o.sign,
            // 0/0 and x/0 land here with sign 0 or ln = inf; callers check is_nan/finiteness.
            ln_abs: if o.sign == 0 {
                f64::INFINITY
            } else {
                self.ln_abs - o.ln_abs
            },
        }
    }

    pub fn add(self, o: LogScalar) -> LogScalar {
        if self.sign == 0 {
            return o;
        }
        if o.sign == 0 {
            return self;
        }
        let (big, small) = if self.ln_abs >= o.ln_abs { (self, o) } else { (o, self) };
        let delta = small.ln_abs - big.ln_abs; // ≤ 0
        if self.sign == o.sign {
            LogScalar {
                sign: big.sign,
                ln_abs: big.ln_abs + delta.exp().ln_1p(),
            }
        } else if delta == 0.0 {
            LogScalar::ZERO
        } else {
            // |big| > |small|, opposite signs: ln(|big| − |small|).
            LogScalar {
                sign: big.sign,
                ln_abs: big.ln_abs + (-delta.exp()).ln_1p(),
            }
        }
    }

    pub fn sub(self, o: LogScalar) -> LogScalar {
        self.add(o.neg())
    }

    fn powi(self, n: i32) -> LogScalar {
        if self.sign == 0 {
            return if n > 0 {
                LogScalar::ZERO
            } else {
                LogScalar::from_ln(1, f64::INFINITY)
            };
        }
        let sign = if n % 2 == 0 { 1 } else { self.sign };
        LogScalar::from_ln(sign, self.ln_abs * f64::from(n))
    }
}

/// Log-magnitude of sinh/cosh, stable for any argument size.
fn ln_sinh_abs(x: f64) -> f64 {
    let a = x.abs();
    if a >= 20.0 {
        a - LN2 + (-(-2.0 * a).exp()).ln_1p()
    } else {
        a.sinh().ln()
    }
}

fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    if a >= 20.0 {
        a - LN2 + (-2.0 * a).exp().ln_1p()
    } else {
        a.cosh().ln()
    }
}

/// Second-order jet in sign–log representation.
#[derive(Debug, Clone, Copy)]
pub struct LogJet {
    pub v: LogScalar,
    pub d1: LogScalar,
    pub d2: LogScalar,
}

impl LogJet {
    pub fn constant(x: f64) -> LogJet {
        LogJet {
            v: LogScalar::from_f64(x),
            d1: LogScalar::ZERO,
            d2: LogScalar::ZERO,
        }
    }

    pub fn variable(x: f64) -> LogJet {
        LogJet {
            v: LogScalar::from_f64(x),
            d1: LogScalar::ONE,
            d2: LogScalar::ZERO,
        }
    }

    pub fn is_nan(&self) -> bool {
        self.v.is_nan() || self.d1.is_nan() || self.d2.is_nan()
    }

    /// The argument as plain f64, for transcendental kernels. Errors out of
    /// range instead of silently saturating.
    fn arg(&self, at: f64, what: &str) -> Result<f64, EvalError> {
        let x = self.v.to_f64();
        if x.is_finite() {
            Ok(x)
        } else {
            Err(EvalError::Domain {
                at,
                what: format!("argument of {what} exceeds floating-point range"),
            })
        }
    }

    fn chain(self, f: LogScalar, df: LogScalar, ddf: LogScalar) -> LogJet {
        LogJet {
            v: f,
            d1: df.mul(self.d1),
            d2: ddf.mul(self.d1.mul(self.d1)).add(df.mul(self.d2)),
        }
    }

    pub fn add(self, o: LogJet) -> LogJet {
        LogJet {
            v: self.v.add(o.v),
            d1: self.d1.add(o.d1),
            d2: self.d2.add(o.d2),
        }
    }

    pub fn sub(self, o: LogJet) -> LogJet {
        LogJet {
            v: self.v.sub(o.v),
            d1: self.d1.sub(o.d1),
            d2: self.d2.sub(o.d2),
        }
    }

    pub fn neg(self) -> LogJet {
        LogJet {
            v: self.v.neg(),
            d1: self.d1.neg(),
            d2: self.d2.neg(),
        }
    }

    pub fn mul(self, o: LogJet) -> LogJet {
        LogJet {
            v: self.v.mul(o.v),
            d1: self.d1.mul(o.v).add(self.v.mul(o.d1)),
            d2: self
                .d2
                .mul(o.v)
                .add(LogScalar::from_f64(2.0).mul(self.d1).mul(o.d1))
                .add(self.v.mul(o.d2)),
        }
    }

    pub fn div(self, o: LogJet, at: f64) -> Result<LogJet, EvalError> {
        if o.v.is_zero() {
            return Err(EvalError::Domain {
                at,
                what: "division by zero".into(),
            });
        }
        let q = self.v.div(o.v);
        let dq = self.d1.sub(q.mul(o.d1)).div(o.v);
        let two = LogScalar::from_f64(2.0);
        let ddq = self.d2.sub(two.mul(dq).mul(o.d1)).sub(q.mul(o.d2)).div(o.v);
        Ok(LogJet { v: q, d1: dq, d2: ddq })
    }

    pub fn sin(self, at: f64) -> Result<LogJet, EvalError> {
        let x = self.arg(at, "sin")?;
        let (s, c) = x.sin_cos();
        Ok(self.chain(
            LogScalar::from_f64(s),
            LogScalar::from_f64(c),
            LogScalar::from_f64(-s),
        ))
    }

    pub fn cos(self, at: f64) -> Result<LogJet, EvalError> {
        let x = self.arg(at, "cos")?;
        let (s, c) = x.sin_cos();
        Ok(self.chain(
            LogScalar::from_f64(c),
            LogScalar::from_f64(-s),
            LogScalar::from_f64(-c),
        ))
    }

    pub fn tan(self, at: f64) -> Result<LogJet, EvalError> {
        let x = self.arg(at, "tan")?;
        let t = LogScalar::from_f64(x.tan());
        let sec2 = LogScalar::ONE.add(t.mul(t));
        let ddf = LogScalar::from_f64(2.0).mul(t).mul(sec2);
        Ok(self.chain(t, sec2, ddf))
    }

    pub fn sinh(self, at: f64) -> Result<LogJet, EvalError> {
        let x = self.arg(at, "sinh")?;
        let s = LogScalar::from_ln(if x == 0.0 { 0 } else if x > 0.0 { 1 } else { -1 }, ln_sinh_abs(x));
        let c = LogScalar::from_ln(1, ln_cosh(x));
        Ok(self.chain(s, c, s))
    }

    pub fn cosh(self, at: f64) -> Result<LogJet, EvalError> {
        let x = self.arg(at, "cosh")?;
        let s = LogScalar::from_ln(if x == 0.0 { 0 } else if x > 0.0 { 1 } else { -1 }, ln_sinh_abs(x));
        let c = LogScalar::from_ln(1, ln_cosh(x));
        Ok(self.chain(c, s, c))
    }

    pub fn tanh(self, at: f64) -> Result<LogJet, EvalError> {
        let x = self.arg(at, "tanh")?;
        let t = LogScalar::from_f64(x.tanh());
        // sech² = 1/cosh², exact in log space even when tanh has rounded to ±1
        let sech2 = LogScalar::from_ln(1, -2.0 * ln_cosh(x));
        let ddf = LogScalar::from_f64(-2.0).mul(t).mul(sech2);
        Ok(self.chain(t, sech2, ddf))
    }

    pub fn exp(self, at: f64) -> Result<LogJet, EvalError> {
        let x = self.arg(at, "exp")?;
        let f = LogScalar::from_ln(1, x);
        Ok(self.chain(f, f, f))
    }

    pub fn ln(self, at: f64) -> Result<LogJet, EvalError> {
        if self.v.sign <= 0 {
            return Err(EvalError::Domain {
                at,
                what: "log of a non-positive value".into(),
            });
        }
        // ln of the value is exactly the stored log-magnitude.
        let f = LogScalar::from_f64(self.v.ln_abs);
        let df = LogScalar::ONE.div(self.v);
        let ddf = df.mul(df).neg();
        Ok(self.chain(f, df, ddf))
    }

    pub fn sqrt(self, at: f64) -> Result<LogJet, EvalError> {
        if self.v.sign < 0 {
            return Err(EvalError::Domain {
                at,
                what: "sqrt of a negative value".into(),
            });
        }
        if self.v.is_zero() {
            // Mirror plain-f64 behaviour: sqrt(0) = 0 with infinite slope.
            return Err(EvalError::Domain {
                at,
                what: "sqrt has unbounded derivative at zero".into(),
            });
        }
        let f = LogScalar::from_ln(1, self.v.ln_abs / 2.0);
        let df = LogScalar::from_f64(0.5).div(f);
        let ddf = df.neg().div(LogScalar::from_f64(2.0).mul(self.v));
        Ok(self.chain(f, df, ddf))
    }

    pub fn atan(self) -> LogJet {
        // atan saturates gracefully: arguments past f64 range are ±π/2.
        let x = self.v.to_f64();
        let f = LogScalar::from_f64(x.atan());
        let den = LogScalar::ONE.add(self.v.mul(self.v));
        let df = LogScalar::ONE.div(den);
        let ddf = LogScalar::from_f64(-2.0).mul(self.v).div(den.mul(den));
        self.chain(f, df, ddf)
    }

    pub fn abs(self) -> LogJet {
        let s = LogScalar::from_f64(f64::from(self.v.sign));
        LogJet {
            v: LogScalar::from_ln(self.v.sign.abs() as i8, self.v.ln_abs),
            d1: s.mul(self.d1),
            d2: s.mul(self.d2),
        }
    }

    pub fn powi(self, n: i32, at: f64) -> Result<LogJet, EvalError> {
        if n == 0 {
            return Ok(LogJet::constant(1.0));
        }
        if self.v.is_zero() && n < 2 {
            if n < 0 {
                return Err(EvalError::Domain {
                    at,
                    what: "zero raised to a negative power".into(),
                });
            }
            // n == 1: identity
            return Ok(self);
        }
        let f = self.v.powi(n);
        let nf = LogScalar::from_f64(f64::from(n));
        let df = nf.mul(self.v.powi(n - 1));
        let ddf = nf
            .mul(LogScalar::from_f64(f64::from(n - 1)))
            .mul(self.v.powi(n - 2));
        Ok(self.chain(f, df, ddf))
    }

    pub fn pow(self, other: LogJet, at: f64) -> Result<LogJet, EvalError> {
        if self.v.sign <= 0 {
            return Err(EvalError::Domain {
                at,
                what: "power with non-positive base".into(),
            });
        }
        other.mul(self.ln(at)?).exp(at)
    }
}
