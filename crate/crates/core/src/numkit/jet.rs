//! Forward-mode derivative propagation to third order.
//!
//! A [`Jet`] carries a value together with its first three derivatives with
//! respect to a single parameter. Arithmetic follows the Leibniz rule and
//! elementary functions use the third-order chain rule, so evaluating an
//! expression on `Jet::variable(u)` yields exact (round-off limited)
//! derivatives at `u`.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub d: [f64; 4],
}

impl Jet {
    pub const fn constant(v: f64) -> Self {
        Jet { d: [v, 0.0, 0.0, 0.0] }
    }

    pub const fn variable(u: f64) -> Self {
        Jet { d: [u, 1.0, 0.0, 0.0] }
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.d[0]
    }

    pub fn is_finite(&self) -> bool {
        self.d.iter().all(|x| x.is_finite())
    }

    /// Applies a scalar function given its value and first three derivatives
    /// at the current value.
    pub fn compose(&self, g: [f64; 4]) -> Jet {
        let [_, x1, x2, x3] = self.d;
        Jet {
            d: [
                g[0],
                g[1] * x1,
                g[2] * x1 * x1 + g[1] * x2,
                g[3] * x1 * x1 * x1 + 3.0 * g[2] * x1 * x2 + g[1] * x3,
            ],
        }
    }

    pub fn recip(&self) -> Jet {
        let x = self.d[0];
        let r = 1.0 / x;
        self.compose([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.d[0].sin_cos();
        self.compose([s, c, -s, -c])
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.d[0].sin_cos();
        self.compose([c, -s, -c, s])
    }

    pub fn tan(&self) -> Jet {
        let t = self.d[0].tan();
        let sec2 = 1.0 + t * t;
        self.compose([t, sec2, 2.0 * t * sec2, 2.0 * sec2 * (1.0 + 3.0 * t * t)])
    }

    pub fn exp(&self) -> Jet {
        let e = self.d[0].exp();
        self.compose([e, e, e, e])
    }

    pub fn ln(&self) -> Jet {
        let x = self.d[0];
        let r = 1.0 / x;
        self.compose([x.ln(), r, -r * r, 2.0 * r * r * r])
    }

    pub fn sqrt(&self) -> Jet {
        let x = self.d[0];
        let s = x.sqrt();
        self.compose([s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x)])
    }

    pub fn abs(&self) -> Jet {
        if self.d[0] < 0.0 {
            -*self
        } else {
            *self
        }
    }

    pub fn atan(&self) -> Jet {
        let x = self.d[0];
        let w = 1.0 / (1.0 + x * x);
        self.compose([x.atan(), w, -2.0 * x * w * w, (6.0 * x * x - 2.0) * w * w * w])
    }

    /// `self^p` for a constant exponent.
    pub fn powf(&self, p: f64) -> Jet {
        let x = self.d[0];
        let g0 = x.powf(p);
        let g1 = p * x.powf(p - 1.0);
        let g2 = p * (p - 1.0) * x.powf(p - 2.0);
        let g3 = p * (p - 1.0) * (p - 2.0) * x.powf(p - 3.0);
        // x^p with integer p at x = 0 has well-defined derivatives; powf
        // produces 0 * inf there, so fall back to the polynomial terms.
        let fix = |c: f64| {
            if c.is_nan() && x == 0.0 && p.fract() == 0.0 && p >= 0.0 {
                0.0
            } else {
                c
            }
        };
        self.compose([g0, fix(g1), fix(g2), fix(g3)])
    }

    /// General power `self^e` via `exp(e ln self)`; requires a positive base.
    pub fn pow(&self, e: &Jet) -> Jet {
        if e.d[1] == 0.0 && e.d[2] == 0.0 && e.d[3] == 0.0 {
            return self.powf(e.d[0]);
        }
        (*e * self.ln()).exp()
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet {
            d: [
                self.d[0] + o.d[0],
                self.d[1] + o.d[1],
                self.d[2] + o.d[2],
                self.d[3] + o.d[3],
            ],
        }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet {
            d: [
                self.d[0] - o.d[0],
                self.d[1] - o.d[1],
                self.d[2] - o.d[2],
                self.d[3] - o.d[3],
            ],
        }
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet {
            d: [-self.d[0], -self.d[1], -self.d[2], -self.d[3]],
        }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let a = self.d;
        let b = o.d;
        Jet {
            d: [
                a[0] * b[0],
                a[1] * b[0] + a[0] * b[1],
                a[2] * b[0] + 2.0 * a[1] * b[1] + a[0] * b[2],
                a[3] * b[0] + 3.0 * a[2] * b[1] + 3.0 * a[1] * b[2] + a[0] * b[3],
            ],
        }
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, k: f64) -> Jet {
        Jet {
            d: [self.d[0] * k, self.d[1] * k, self.d[2] * k, self.d[3] * k],
        }
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}
