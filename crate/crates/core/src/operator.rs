//! Domain, kernel, cokernel and Fredholm property of `T_omega`.
//!
//! With `S = s S_in S_ex` and `R = r R_in R_ex` split across the circle:
//!
//! * `dom T_omega = s H^2`;
//! * `ker T_omega` is spanned by `S_ex-bar z^j / R_ex` for
//!   `j < deg S_in - deg R_in-bar`;
//! * `(ran T_omega)^perp` is spanned by `S^_ex z^j / R^_ex` for
//!   `j < deg R_in - deg S_in`, where `^` denotes reflection;
//! * `T_omega` is Fredholm iff `R` has no zeros on the circle.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::factorization::{Part, RationalSymbol};
use crate::polynomial::extended::{horner, Dd, DdPoly};
use crate::polynomial::{Poly, RootSet, ONE, ZERO};

/// A rational function `num / den` with monic `den`, used for elements of
/// `H^2` (basis vectors, test vectors).
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFun {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFun {
    /// Normalises `den` to be monic. Panics on a zero denominator.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        let lead = den.leading();
        RationalFun {
            num: num.scale(lead.inv()),
            den: den.monic(),
        }
    }

    pub fn polynomial(p: Poly) -> Self {
        RationalFun {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.num.eval(z) / self.den.eval(z)
    }

    /// `true` if every pole lies outside the closed disk of radius `1 + eps`.
    pub fn is_in_hardy_space(&self, eps: f64, root_tol: f64) -> Result<bool> {
        Ok(self.min_pole_modulus(root_tol)?.is_none_or(|m| m > 1.0 + eps))
    }

    /// Smallest modulus of a denominator root, `None` for polynomials.
    pub fn min_pole_modulus(&self, root_tol: f64) -> Result<Option<f64>> {
        if self.den.is_constant() {
            return Ok(None);
        }
        let roots = self.den.roots(root_tol)?;
        Ok(roots
            .entries()
            .iter()
            .map(|r| r.value.norm())
            .reduce(f64::min))
    }

    /// Multiplies numerator and denominator by polynomials.
    pub fn times(&self, num: &Poly, den: &Poly) -> RationalFun {
        RationalFun::new(&self.num * num, &self.den * den)
    }
}

/// Summary of the operator-theoretic data of `T_omega`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    /// The factor `s` with `dom T_omega = s H^2`.
    pub domain_factor: Poly,
    pub kernel_basis: Vec<RationalFun>,
    pub cokernel_basis: Vec<RationalFun>,
    pub dim_ker: usize,
    pub dim_coker: usize,
    pub fredholm: bool,
    /// `dim ker - dim coker`, present only for Fredholm operators.
    pub index: Option<i64>,
    /// `deg S_in - deg R_in`, always reported.
    pub formal_degree_gap: i64,
    /// `ran T_omega = P_{H^2}(range_numerator / range_denominator H^2)`.
    pub range_numerator: Poly,
    pub range_denominator: Poly,
    pub ill_conditioned: bool,
}

pub fn domain_factor(sym: &RationalSymbol) -> Poly {
    sym.denominator_split().on.clone()
}

pub fn kernel_basis(sym: &RationalSymbol) -> Vec<RationalFun> {
    let s = sym.denominator_split();
    let r = sym.numerator_split();
    let d = s.deg_inside().saturating_sub(r.deg_on() + r.deg_inside());
    let num = sym.derived_factors(Part::Denominator).on_bar_ex;
    (0..d)
        .map(|j| RationalFun::new(num.shift(j), r.outside.clone()))
        .collect()
}

pub fn cokernel_basis(sym: &RationalSymbol) -> Vec<RationalFun> {
    let s = sym.denominator_split();
    let r = sym.numerator_split();
    let d = r.deg_inside().saturating_sub(s.deg_inside());
    let num = sym.derived_factors(Part::Denominator).reflected_ex;
    let den = sym.derived_factors(Part::Numerator).reflected_ex;
    (0..d)
        .map(|j| RationalFun::new(num.shift(j), den.clone()))
        .collect()
}

pub fn is_fredholm(sym: &RationalSymbol) -> bool {
    sym.numerator_split().deg_on() == 0
}

pub fn analyze(sym: &RationalSymbol) -> AnalysisReport {
    let kernel = kernel_basis(sym);
    let cokernel = cokernel_basis(sym);
    let fredholm = is_fredholm(sym);
    let s = sym.denominator_split();
    let gap = s.deg_inside() as i64 - sym.numerator_split().deg_inside() as i64;
    let report = AnalysisReport {
        domain_factor: domain_factor(sym),
        dim_ker: kernel.len(),
        dim_coker: cokernel.len(),
        kernel_basis: kernel,
        cokernel_basis: cokernel,
        fredholm,
        index: fredholm.then_some(gap),
        formal_degree_gap: gap,
        range_numerator: sym.numerator().clone(),
        range_denominator: (&s.inside * &s.outside).scale(s.scale),
        ill_conditioned: sym.ill_conditioned(),
    };
    if let Some(index) = report.index {
        debug_assert_eq!(index, report.dim_ker as i64 - report.dim_coker as i64);
    }
    report
}

/// Whether `u` lies in `dom T_omega`, i.e. `omega u` has no pole on the
/// circle once common roots (within `delta_coprime`) are cancelled.
pub fn domain_membership(sym: &RationalSymbol, u: &RationalFun) -> Result<bool> {
    let tol = sym.tolerances();
    if let Some(m) = u.min_pole_modulus(tol.root_tol)? {
        if m <= 1.0 + tol.eps_circle {
            return Err(Error::InvalidElement { modulus: m });
        }
    }
    if u.is_zero() {
        return Ok(true);
    }
    let circle = &sym.denominator_split().on_roots;
    if circle.degree() == 0 {
        return Ok(true);
    }
    let num_roots = u.num.roots(tol.root_tol)?;
    Ok(circle_poles_cancel(circle, &num_roots, tol.delta_coprime))
}

/// Every circle root is matched, with at least its multiplicity, by roots of
/// `num_roots` within `delta`.
pub(crate) fn circle_poles_cancel(circle: &RootSet, num_roots: &RootSet, delta: f64) -> bool {
    circle.entries().iter().all(|b| {
        let available: usize = num_roots
            .entries()
            .iter()
            .filter(|a| (a.value - b.value).norm() <= delta)
            .map(|a| a.multiplicity)
            .sum();
        available >= b.multiplicity
    })
}

/// Polynomials `P`, `Q` with `(P/Q)(x) = omega(e^{i alpha} C(x))` for real
/// `x`, where `C(x) = (x - i)/(x + i)` is the Cayley transform.
#[derive(Debug, Clone, PartialEq)]
pub struct Pullback {
    pub alpha: f64,
    /// `P` rounded to double precision, for reporting.
    pub p: Poly,
    /// `Q`, monic, rounded to double precision.
    pub q: Poly,
    /// `P` and `Q` as computed, in extended precision.
    extended: (DdPoly, DdPoly),
}

/// Distance below which `e^{i alpha}` counts as hitting a root of `R S`.
pub const ROTATION_CLEARANCE: f64 = 1e-3;
/// Number of candidate rotations `2 pi k / 257` scanned.
pub const ROTATION_CANDIDATES: usize = 257;

pub fn cayley(x: Complex64) -> Complex64 {
    (x - Complex64::i()) / (x + Complex64::i())
}

pub fn inverse_cayley(w: Complex64) -> Complex64 {
    Complex64::i() * (ONE + w) / (ONE - w)
}

impl Pullback {
    /// `(P/Q)(x)` from the extended-precision coefficients. Rounding `P`
    /// and `Q` to doubles costs accuracy next to circle poles, where the
    /// monomial form of `Q` cancels heavily.
    pub fn eval(&self, x: Complex64) -> Complex64 {
        let x = Dd::from(x);
        (self.extended.0.eval(x) / self.extended.1.eval(x)).round()
    }

    /// Real sample points `tan(pi (k + 1/2)/n - pi/2)` spread over the line.
    pub fn sample_points(n: usize) -> Vec<f64> {
        (0..n)
            .map(|k| (PI * (k as f64 + 0.5) / n as f64 - PI / 2.0).tan())
            .collect()
    }

    /// `max |(P/Q)(x) - omega(e^{i alpha} C(x))|` over `n` sample points.
    /// The reference value is computed from the coefficients of `R` and `S`
    /// in extended precision, at `C(x)` formed in extended precision too, so
    /// the residual measures `P` and `Q` rather than rounding near poles.
    pub fn sampling_residual(&self, sym: &RationalSymbol, n: usize) -> f64 {
        let rot = Dd::from(Complex64::from_polar(1.0, self.alpha));
        let i = Dd::from(Complex64::i());
        Self::sample_points(n)
            .into_iter()
            .map(|x| {
                let xd = Dd::from(x);
                let w = rot * ((xd - i) / (xd + i));
                let reference = horner(sym.numerator().coeffs(), w) / horner(sym.denominator().coeffs(), w);
                (self.eval(Complex64::new(x, 0.0)) - reference.round()).norm()
            })
            .fold(0.0, f64::max)
    }
}

pub fn cayley_pullback(sym: &RationalSymbol, alpha: Option<f64>) -> Result<Pullback> {
    let r_roots = sym.numerator_split().all_roots();
    let s_roots = sym.denominator_split().all_roots();
    let all: Vec<Complex64> = r_roots.flat().into_iter().chain(s_roots.flat()).collect();
    let clear = |a: f64| {
        let w = Complex64::from_polar(1.0, a);
        all.iter().all(|z| (z - w).norm() > ROTATION_CLEARANCE)
    };
    let first = alpha.unwrap_or(0.0);
    let alpha = if clear(first) {
        first
    } else {
        (0..ROTATION_CANDIDATES)
            .map(|k| 2.0 * PI * k as f64 / ROTATION_CANDIDATES as f64)
            .find(|&a| clear(a))
            .ok_or(Error::NoValidRotation)?
    };

    let rot = Complex64::from_polar(1.0, alpha);
    if !(sym.eval(rot).is_finite() && sym.eval(rot) != ZERO) {
        return Err(Error::NoValidRotation);
    }
    let (p, q) = compose_with_cayley(sym.numerator(), sym.denominator(), rot);
    Ok(Pullback {
        alpha,
        p: p.round(),
        q: q.round(),
        extended: (p, q),
    })
}

/// `P(x) = R(rot C(x)) (x + i)^N / S(rot)` and likewise `Q` from `S`, with
/// `N = max(deg R, deg S)`, expanded as `sum r_k rot^k (x - i)^k (x + i)^(N - k)`
/// in extended precision. Dividing by `S(rot)` makes `Q` monic and gives `P`
/// the leading coefficient `omega(rot)`, the value at `x = infinity`. The
/// roots of `P` are `C^-1(a / rot)` over the roots `a` of `R`, padded with
/// `-i` up to degree `N`; likewise for `Q`.
fn compose_with_cayley(r: &Poly, s: &Poly, rot: Complex64) -> (DdPoly, DdPoly) {
    let n = r.deg().max(s.deg());
    let i = Complex64::i();
    let plus = DdPoly::from_poly(&Poly::new(vec![i, ONE]));
    let minus = DdPoly::from_poly(&Poly::new(vec![-i, ONE]));
    let powers = |base: &DdPoly| {
        let mut out = vec![DdPoly(vec![Dd::one()])];
        for k in 1..=n {
            out.push(out[k - 1].mul(base));
        }
        out
    };
    let (plus_pow, minus_pow) = (powers(&plus), powers(&minus));
    let mut p = DdPoly(Vec::new());
    let mut q = DdPoly(Vec::new());
    let mut rot_k = Dd::one();
    for k in 0..=n {
        let basis = minus_pow[k].mul(&plus_pow[n - k]);
        if let Some(&c) = r.coeffs().get(k) {
            p.add_scaled(rot_k * Dd::from(c), &basis);
        }
        if let Some(&c) = s.coeffs().get(k) {
            q.add_scaled(rot_k * Dd::from(c), &basis);
        }
        rot_k = rot_k * Dd::from(rot);
    }
    let lead = Dd::one() / q.0[n];
    let mut q = q.scale(lead);
    q.0[n] = Dd::one();
    (p.scale(lead), q)
}
