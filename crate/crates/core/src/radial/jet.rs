//! Second-order forward-mode automatic differentiation.
//!
//! A [`Jet2`] carries a value together with its first and second derivative
//! with respect to the single free variable. Arithmetic follows the usual
//! truncated-Taylor rules; the chain rule for a unary `f` is
//!
//! ```text
//! (f∘u)'  = f'(u)·u'
//! (f∘u)'' = f''(u)·u'² + f'(u)·u''
//! ```
//!
//! Operations are plain IEEE arithmetic: division by zero and overflow
//! produce infinities/NaNs which the expression evaluator turns into domain
//! errors. There is no auto-simplification — `sinh(r)/r` really divides at
//! every point, and fails at `r = 0`.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Value, first and second derivative at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet2 {
    /// A constant: derivative zero.
    pub fn constant(v: f64) -> Jet2 {
        Jet2 { v, d1: 0.0, d2: 0.0 }
    }

    /// The variable itself: derivative one.
    pub fn variable(v: f64) -> Jet2 {
        Jet2 { v, d1: 1.0, d2: 0.0 }
    }

    pub fn is_finite(&self) -> bool {
        self.v.is_finite() && self.d1.is_finite() && self.d2.is_finite()
    }

    /// Chain rule for a unary function with value `f`, derivative `df` and
    /// second derivative `ddf` at `self.v`.
    fn chain(self, f: f64, df: f64, ddf: f64) -> Jet2 {
        Jet2 {
            v: f,
            d1: df * self.d1,
            d2: ddf * self.d1 * self.d1 + df * self.d2,
        }
    }

    pub fn sin(self) -> Jet2 {
        let (s, c) = self.v.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(self) -> Jet2 {
        let (s, c) = self.v.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn tan(self) -> Jet2 {
        let t = self.v.tan();
        let sec2 = 1.0 + t * t;
        self.chain(t, sec2, 2.0 * t * sec2)
    }

    pub fn sinh(self) -> Jet2 {
        let s = self.v.sinh();
        let c = self.v.cosh();
        self.chain(s, c, s)
    }

    pub fn cosh(self) -> Jet2 {
        let s = self.v.sinh();
        let c = self.v.cosh();
        self.chain(c, s, c)
    }

    pub fn tanh(self) -> Jet2 {
        let t = self.v.tanh();
        let sech2 = 1.0 - t * t;
        self.chain(t, sech2, -2.0 * t * sech2)
    }

    pub fn exp(self) -> Jet2 {
        let e = self.v.exp();
        self.chain(e, e, e)
    }

    /// Natural logarithm.
    pub fn ln(self) -> Jet2 {
        let inv = 1.0 / self.v;
        self.chain(self.v.ln(), inv, -inv * inv)
    }

    pub fn sqrt(self) -> Jet2 {
        let s = self.v.sqrt();
        let d = 0.5 / s;
        self.chain(s, d, -0.5 * d / self.v)
    }

    pub fn atan(self) -> Jet2 {
        let den = 1.0 + self.v * self.v;
        self.chain(self.v.atan(), 1.0 / den, -2.0 * self.v / (den * den))
    }

    /// |u|; the derivative at 0 is taken to be 0.
    pub fn abs(self) -> Jet2 {
        let s = if self.v > 0.0 {
            1.0
        } else if self.v < 0.0 {
            -1.0
        } else {
            0.0
        };
        Jet2 {
            v: self.v.abs(),
            d1: s * self.d1,
            d2: s * self.d2,
        }
    }

    /// Integer power, valid for any base (including negative and zero).
    pub fn powi(self, n: i32) -> Jet2 {
        if n == 0 {
            return Jet2::constant(1.0);
        }
        let f = self.v.powi(n);
        let df = f64::from(n) * self.v.powi(n - 1);
        let ddf = f64::from(n) * f64::from(n - 1) * self.v.powi(n - 2);
        self.chain(f, df, ddf)
    }

    /// General power `self^other` computed as `exp(other·ln self)`;
    /// requires a positive base unless the exponent is a constant integer
    /// (callers dispatch that case to [`Jet2::powi`]).
    pub fn pow(self, other: Jet2) -> Jet2 {
        (other * self.ln()).exp()
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        Jet2 {
            v: self.v + o.v,
            d1: self.d1 + o.d1,
            d2: self.d2 + o.d2,
        }
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        Jet2 {
            v: self.v - o.v,
            d1: self.d1 - o.d1,
            d2: self.d2 - o.d2,
        }
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        Jet2 {
            v: self.v * o.v,
            d1: self.d1 * o.v + self.v * o.d1,
            d2: self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        }
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    fn div(self, o: Jet2) -> Jet2 {
        let q = self.v / o.v;
        let dq = (self.d1 - q * o.d1) / o.v;
        let ddq = (self.d2 - 2.0 * dq * o.d1 - q * o.d2) / o.v;
        Jet2 {
            v: q,
            d1: dq,
            d2: ddq,
        }
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2 {
            v: -self.v,
            d1: -self.d1,
            d2: -self.d2,
        }
    }
}
