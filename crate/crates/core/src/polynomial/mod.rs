//! Dense complex polynomials in ascending coefficient order.
//!
//! Besides ring arithmetic this module provides the three involutions used
//! throughout the crate:
//!
//! * [`Poly::conj_coeffs`]: coefficientwise conjugation, `p~`;
//! * [`Poly::reflect`]: the monic polynomial whose roots are `1/conj(b)` over
//!   the nonzero roots `b` of `p`;
//! * [`Poly::recip_conj`]: `z^deg p * p~(1/z)`, i.e. reversed and conjugated
//!   coefficients.

pub(crate) mod extended;
mod roots;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use roots::{Root, RootSet, MAX_ITERATIONS};

/// Relative magnitude below which trailing coefficients are dropped.
pub const TRIM_THRESHOLD: f64 = 1e-13;

/// Largest degree accepted by the root solver.
pub const DEGREE_CAP: usize = 64;

/// Default backward-error tolerance for [`Poly::roots`].
pub const DEFAULT_ROOT_TOL: f64 = 1e-8;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A complex polynomial; `coeffs[k]` multiplies `z^k`.
///
/// The leading coefficient is nonzero unless the polynomial is zero, in which
/// case `coeffs` is empty.
#[derive(Clone, PartialEq, Default)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    /// Builds a polynomial, trimming negligible trailing coefficients.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(ONE)
    }

    pub fn constant(c: Complex64) -> Self {
        Poly::new(vec![c])
    }

    /// `c * z^k`.
    pub fn monomial(c: Complex64, k: usize) -> Self {
        let mut coeffs = vec![ZERO; k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    /// The identity polynomial `z`.
    pub fn z() -> Self {
        Poly::monomial(ONE, 1)
    }

    /// `z - root`.
    pub fn linear(root: Complex64) -> Self {
        Poly::new(vec![-root, ONE])
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// `leading * prod (z - r)` over the given roots (repeated as listed).
    pub fn from_root_list(roots: &[Complex64], leading: Complex64) -> Self {
        let mut coeffs = vec![leading];
        for &r in roots {
            coeffs.push(ZERO);
            for k in (1..coeffs.len()).rev() {
                coeffs[k] = coeffs[k - 1] - r * coeffs[k];
            }
            coeffs[0] = -r * coeffs[0];
        }
        Poly::new(coeffs)
    }

    /// Expands a [`RootSet`] back into coefficients.
    pub fn from_roots(roots: &RootSet) -> Self {
        let list: Vec<Complex64> = roots
            .entries()
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.value, r.multiplicity))
            .collect();
        Poly::from_root_list(&list, roots.leading())
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0; for bookkeeping on
    /// polynomials known to be nonzero.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or(ZERO)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Largest coefficient modulus.
    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// Horner evaluation carried out in double-double arithmetic, accurate
    /// near clustered roots where [`Poly::eval`] cancels.
    pub fn eval_extended(&self, z: Complex64) -> Complex64 {
        extended::horner(&self.coeffs, extended::Dd::from(z)).round()
    }

    /// `sum |c_k| |z|^k`, the natural scale for rounding errors in [`Poly::eval`].
    pub fn eval_abs(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, c: Complex64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// Divides by the leading coefficient; the zero polynomial is returned as is.
    pub fn monic(&self) -> Poly {
        match self.coeffs.last() {
            Some(&lead) => Poly::new(self.coeffs.iter().map(|&a| a / lead).collect()),
            None => Poly::zero(),
        }
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![ZERO; k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { coeffs }
    }

    pub fn pow(&self, k: usize) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| &acc * self)
    }

    /// Coefficientwise complex conjugate.
    pub fn conj_coeffs(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
        }
    }

    /// `z^deg p * conj_coeffs(p)(1/z)`: coefficients reversed and conjugated.
    pub fn recip_conj(&self) -> Poly {
        Poly::new(self.coeffs.iter().rev().map(|c| c.conj()).collect())
    }

    /// Monic polynomial with roots `1/conj(b)` for every nonzero root `b`,
    /// multiplicities preserved. Roots at the origin are dropped.
    pub fn reflect(&self, tol: f64) -> Result<Poly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(Poly::from_roots(&self.roots(tol)?.reflect()))
    }

    /// Euclidean division `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let Some(dd) = divisor.degree() else {
            panic!("division by the zero polynomial");
        };
        let Some(nd) = self.degree() else {
            return (Poly::zero(), Poly::zero());
        };
        if nd < dd {
            return (Poly::zero(), self.clone());
        }
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![ZERO; nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = rem[k + dd] / lead;
            quot[k] = c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= c * d;
            }
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Synthetic division by `z - root`, discarding the remainder.
    pub fn deflate(&self, root: Complex64) -> Poly {
        let n = self.coeffs.len();
        if n <= 1 {
            return Poly::zero();
        }
        let mut out = vec![ZERO; n - 1];
        let mut acc = ZERO;
        for k in (1..n).rev() {
            acc = acc * root + self.coeffs[k];
            out[k - 1] = acc;
        }
        Poly::new(out)
    }

    /// Coefficients of `p(c + h)` as a polynomial in `h`.
    pub fn taylor_shift(&self, c: Complex64) -> Poly {
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for k in (i..n.saturating_sub(1)).rev() {
                let hi = a[k + 1];
                a[k] += c * hi;
            }
        }
        Poly::new(a)
    }

    /// Multiplicity of the root at the origin (exact zero coefficients).
    pub fn origin_multiplicity(&self) -> usize {
        self.coeffs.iter().take_while(|c| **c == ZERO).count()
    }

    /// Largest relative coefficient deviation from `other`, normalised by the
    /// larger of the two coefficient norms.
    pub fn relative_distance(&self, other: &Poly) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        let scale = self.norm_inf().max(other.norm_inf());
        if scale == 0.0 {
            return 0.0;
        }
        (0..n)
            .map(|k| {
                let a = self.coeffs.get(k).copied().unwrap_or(ZERO);
                let b = other.coeffs.get(k).copied().unwrap_or(ZERO);
                (a - b).norm()
            })
            .fold(0.0, f64::max)
            / scale
    }

    fn trim(&mut self) {
        let scale = self.norm_inf();
        if scale == 0.0 || !scale.is_finite() {
            if scale == 0.0 {
                self.coeffs.clear();
            }
            return;
        }
        while let Some(c) = self.coeffs.last() {
            if c.norm() <= TRIM_THRESHOLD * scale {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if *c == ZERO {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or(ZERO)
                        + rhs.coeffs.get(k).copied().unwrap_or(ZERO)
                })
                .collect(),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|&c| -c).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}
