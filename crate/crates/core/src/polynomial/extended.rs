//! Complex double-double arithmetic for the few places where cancellation
//! near clustered roots matters.

use std::ops::{Add, Div, Mul, Sub};

use num_complex::Complex64;
use twofloat::TwoFloat;

use super::Poly;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    re: TwoFloat,
    im: TwoFloat,
}

impl Dd {
    pub(crate) fn zero() -> Self {
        Dd::from(Complex64::new(0.0, 0.0))
    }

    pub(crate) fn one() -> Self {
        Dd::from(Complex64::new(1.0, 0.0))
    }

    pub(crate) fn round(self) -> Complex64 {
        Complex64::new(self.re.hi() + self.re.lo(), self.im.hi() + self.im.lo())
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd::from(Complex64::new(x, 0.0))
    }
}

impl From<Complex64> for Dd {
    fn from(c: Complex64) -> Self {
        Dd {
            re: TwoFloat::from(c.re),
            im: TwoFloat::from(c.im),
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        Dd {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        Dd {
            re: self.re - o.re,
            im: self.im - o.im,
        }
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        Dd {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

/// `a / b` refined by two Newton corrections; the quotient operator of
/// `TwoFloat` is only accurate to about double precision.
fn quotient(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let mut q = TwoFloat::from(a.hi() / b.hi());
    for _ in 0..2 {
        let r = a - b * q;
        q += TwoFloat::from(r.hi() / b.hi());
    }
    q
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let d = o.re * o.re + o.im * o.im;
        Dd {
            re: quotient(self.re * o.re + self.im * o.im, d),
            im: quotient(self.im * o.re - self.re * o.im, d),
        }
    }
}

pub(crate) fn horner(coeffs: &[Complex64], z: Dd) -> Dd {
    coeffs
        .iter()
        .rev()
        .fold(Dd::zero(), |acc, &c| acc * z + Dd::from(c))
}

/// Ascending coefficients in double-double.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct DdPoly(pub(crate) Vec<Dd>);

impl DdPoly {
    pub(crate) fn from_poly(p: &Poly) -> Self {
        DdPoly(p.coeffs().iter().map(|&c| Dd::from(c)).collect())
    }

    pub(crate) fn mul(&self, o: &DdPoly) -> DdPoly {
        if self.0.is_empty() || o.0.is_empty() {
            return DdPoly(Vec::new());
        }
        let mut out = vec![Dd::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] = out[i + j] + *a * *b;
            }
        }
        DdPoly(out)
    }

    /// `self += c * o`.
    pub(crate) fn add_scaled(&mut self, c: Dd, o: &DdPoly) {
        if self.0.len() < o.0.len() {
            self.0.resize(o.0.len(), Dd::zero());
        }
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a = *a + c * *b;
        }
    }

    pub(crate) fn scale(&self, c: Dd) -> DdPoly {
        DdPoly(self.0.iter().map(|a| *a * c).collect())
    }

    pub(crate) fn eval(&self, z: Dd) -> Dd {
        self.0.iter().rev().fold(Dd::zero(), |acc, &c| acc * z + c)
    }

    pub(crate) fn round(&self) -> Poly {
        Poly::new(self.0.iter().map(|a| a.round()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_keeps_double_double_accuracy() {
        let third = Dd::from(1.0) / Dd::from(3.0);
        // 3 * (1/3) - 1 is exactly representable once the quotient is exact
        // to ~1e-32
        let err = third * Dd::from(3.0) - Dd::one();
        assert!(err.re.hi().abs() < 1e-30, "{:e}", err.re.hi());

        let z = Dd::from(Complex64::new(0.3, -1.7));
        let w = Dd::from(Complex64::new(-2.1, 0.45));
        let back = (z / w) * w - z;
        assert!(back.re.hi().abs() < 1e-30 && back.im.hi().abs() < 1e-30);
    }

    #[test]
    fn extended_horner_beats_cancellation() {
        // (z - 1)^8 expanded, evaluated next to its root
        let p = Poly::from_root_list(&[Complex64::new(1.0, 0.0); 8], Complex64::new(1.0, 0.0));
        let z = Complex64::new(1.0 + 1e-3, 0.0);
        let want = 1e-24;
        let got = p.eval_extended(z).re;
        assert!((got / want - 1.0).abs() < 1e-6, "{got:e}");
    }
}
