//! Symbols that are real on the circle: `T_omega` is then symmetric, and its
//! deficiency indices follow from splitting `R - iS` across the circle.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::factorization::{CircleSplit, Part, RationalSymbol};
use crate::operator::RationalFun;
use crate::polynomial::{Poly, RootSet};

/// Largest accepted coefficient mismatch in the `R + iS` identity.
pub const IDENTITY_TOL: f64 = 1e-6;

const I: Complex64 = Complex64::new(0.0, 1.0);
const FIT_SEED: u64 = 0x5eed_c0ef;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryClass {
    /// Both deficiency indices vanish; only bounded symbols land here.
    SelfAdjointBounded,
    /// Exactly one deficiency index vanishes.
    MaximalSymmetric,
    ProperSymmetric,
}

impl SymmetryClass {
    pub fn from_indices(n_plus: usize, n_minus: usize) -> Self {
        match (n_plus == 0, n_minus == 0) {
            (true, true) => SymmetryClass::SelfAdjointBounded,
            (true, false) | (false, true) => SymmetryClass::MaximalSymmetric,
            (false, false) => SymmetryClass::ProperSymmetric,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SymmetryClass::SelfAdjointBounded => "self_adjoint_bounded",
            SymmetryClass::MaximalSymmetric => "maximal_symmetric",
            SymmetryClass::ProperSymmetric => "proper_symmetric",
        }
    }
}

/// `R - iS = scale * inner * outer` with monic factors whose roots lie
/// inside, respectively outside, the circle.
#[derive(Debug, Clone, PartialEq)]
pub struct ImaginaryShiftSplit {
    pub inner: Poly,
    pub outer: Poly,
    pub inner_roots: RootSet,
    pub outer_roots: RootSet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityFit {
    pub c: Complex64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeficiencyReport {
    pub p: Poly,
    pub q: Poly,
    /// Power of `z` in `R + iS = c z^l p~ q~`.
    pub l: usize,
    pub n_plus: usize,
    pub n_minus: usize,
    pub basis_plus: Vec<RationalFun>,
    pub basis_minus: Vec<RationalFun>,
    pub symmetry_class: SymmetryClass,
    pub c_scale: Complex64,
    pub identity_residual: f64,
}

fn require_real(sym: &RationalSymbol) -> Result<()> {
    if sym.is_real_on_circle() {
        Ok(())
    } else {
        Err(Error::RealnessViolated)
    }
}

/// `R - iS`; never zero since `omega = i` is not real.
fn minus_i_numerator(sym: &RationalSymbol) -> Poly {
    sym.numerator() - &sym.denominator().scale(I)
}

fn plus_i_numerator(sym: &RationalSymbol) -> Poly {
    sym.numerator() + &sym.denominator().scale(I)
}

pub fn split_r_minus_is(sym: &RationalSymbol) -> Result<ImaginaryShiftSplit> {
    require_real(sym)?;
    let tol = sym.tolerances();
    let split = CircleSplit::new(&minus_i_numerator(sym), tol.eps_circle, tol.root_tol)?;
    if split.deg_on() > 0 {
        return Err(Error::TheoryViolation(format!(
            "R - iS has {} root(s) on the circle for a real symbol",
            split.deg_on()
        )));
    }
    Ok(ImaginaryShiftSplit {
        inner: split.inside,
        outer: split.outside,
        inner_roots: split.inside_roots,
        outer_roots: split.outside_roots,
    })
}

struct Reflected {
    p: Poly,
    q: Poly,
    l: usize,
}

fn reflected_factors(sym: &RationalSymbol, split: &ImaginaryShiftSplit) -> Result<Reflected> {
    let p = split.inner_roots.reflect().to_poly();
    let q = split.outer_roots.reflect().to_poly();
    let plus = plus_i_numerator(sym);
    let l = plus.deg() as i64 - p.deg() as i64 - q.deg() as i64;
    if l < 0 {
        return Err(Error::TheoryViolation(format!(
            "deg(R + iS) = {} is below the reflected degrees {} + {}",
            plus.deg(),
            p.deg(),
            q.deg()
        )));
    }
    Ok(Reflected { p, q, l: l as usize })
}

/// Fits `c` in `R + iS = c z^l p~ q~` at one circle point and reports the
/// largest relative coefficient mismatch.
fn fit_identity(sym: &RationalSymbol, refl: &Reflected) -> IdentityFit {
    let plus = plus_i_numerator(sym);
    let model = (&refl.p * &refl.q).shift(refl.l);
    let floor = 1e-8 * model.coeffs().iter().map(|c| c.norm()).sum::<f64>();
    let mut rng = ChaCha8Rng::seed_from_u64(FIT_SEED);
    let fixed = [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)];
    // z^l p~ q~ has no circle roots in theory; the fallbacks are defensive
    let mut point = fixed.into_iter().find(|z| model.eval(*z).norm() > floor);
    while point.is_none() {
        let z = Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI));
        if model.eval(z).norm() > floor {
            point = Some(z);
        }
    }
    let z0 = point.unwrap();
    let c = plus.eval(z0) / model.eval(z0);
    let residual = plus.relative_distance(&model.scale(c));
    IdentityFit { c, residual }
}

/// Checks `R + iS = c z^l p~ q~` where `R - iS = p q` is the circle split.
pub fn verify_plus_identity(sym: &RationalSymbol) -> Result<IdentityFit> {
    let split = split_r_minus_is(sym)?;
    checked_fit(sym, &reflected_factors(sym, &split)?)
}

fn checked_fit(sym: &RationalSymbol, refl: &Reflected) -> Result<IdentityFit> {
    let fit = fit_identity(sym, refl);
    if fit.residual.is_nan() || fit.residual > IDENTITY_TOL {
        return Err(Error::TheoryViolation(format!(
            "R + iS identity residual {:.3e} exceeds {IDENTITY_TOL:e}",
            fit.residual
        )));
    }
    Ok(fit)
}

pub fn deficiency(sym: &RationalSymbol) -> Result<DeficiencyReport> {
    let split = split_r_minus_is(sym)?;
    let refl = reflected_factors(sym, &split)?;
    let fit = checked_fit(sym, &refl)?;

    let s_in = sym.denominator_split().deg_inside() as i64;
    let n_plus = split.inner.deg() as i64 - s_in;
    let n_minus = refl.l as i64 + split.outer.deg() as i64 - s_in;
    if n_plus < 0 || n_minus < 0 {
        return Err(Error::TheoryViolation(format!(
            "negative deficiency index ({n_plus}, {n_minus})"
        )));
    }
    let (n_plus, n_minus) = (n_plus as usize, n_minus as usize);
    let symmetry_class = SymmetryClass::from_indices(n_plus, n_minus);
    if symmetry_class == SymmetryClass::SelfAdjointBounded && !sym.is_bounded() {
        return Err(Error::TheoryViolation(
            "zero deficiency indices for a symbol with circle poles".into(),
        ));
    }

    let reflected_s = sym.derived_factors(Part::Denominator).reflected_ex;
    let basis_plus = (0..n_plus)
        .map(|j| RationalFun::new(reflected_s.shift(j), refl.p.clone()))
        .collect();
    let basis_minus = (0..n_minus)
        .map(|j| RationalFun::new(reflected_s.shift(j), split.outer.clone()))
        .collect();

    Ok(DeficiencyReport {
        p: split.inner,
        q: split.outer,
        l: refl.l,
        n_plus,
        n_minus,
        basis_plus,
        basis_minus,
        symmetry_class,
        c_scale: fit.c,
        identity_residual: fit.residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::ONE;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cayley_symbol() -> RationalSymbol {
        // i (z - 1)/(z + 1)
        RationalSymbol::new(Poly::new(vec![c(0.0, -1.0), c(0.0, 1.0)]), Poly::from_real(&[1.0, 1.0])).unwrap()
    }

    fn two_cos() -> RationalSymbol {
        RationalSymbol::new(Poly::from_real(&[1.0, 0.0, 1.0]), Poly::z()).unwrap()
    }

    #[test]
    fn split_examples() {
        let s = split_r_minus_is(&cayley_symbol()).unwrap();
        assert_eq!((s.inner.deg(), s.outer.deg()), (0, 0));

        let s = split_r_minus_is(&two_cos()).unwrap();
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        assert!((s.inner.coeffs()[0] - c(0.0, golden)).norm() < 1e-12, "{}", s.inner);
        assert!((s.outer.coeffs()[0] - c(0.0, -1.0 - golden)).norm() < 1e-12, "{}", s.outer);

        let k = RationalSymbol::new(Poly::from_real(&[2.5]), Poly::one()).unwrap();
        let s = split_r_minus_is(&k).unwrap();
        assert_eq!((s.inner, s.outer), (Poly::one(), Poly::one()));
    }

    #[test]
    fn split_needs_real_symbol() {
        let z = RationalSymbol::new(Poly::z(), Poly::one()).unwrap();
        assert_eq!(split_r_minus_is(&z), Err(Error::RealnessViolated));
        assert_eq!(deficiency(&z), Err(Error::RealnessViolated));
    }

    #[test]
    fn deficiency_of_cayley_symbol() {
        let d = deficiency(&cayley_symbol()).unwrap();
        assert_eq!((d.n_plus, d.n_minus, d.l), (0, 1, 1));
        assert_eq!(d.basis_minus, vec![RationalFun::polynomial(Poly::one())]);
        assert!(d.basis_plus.is_empty());
        assert_eq!(d.symmetry_class, SymmetryClass::MaximalSymmetric);
        assert!((d.c_scale - c(0.0, 2.0)).norm() < 1e-12);
    }

    #[test]
    fn deficiency_of_two_cos() {
        let d = deficiency(&two_cos()).unwrap();
        assert_eq!((d.n_plus, d.n_minus, d.l), (0, 0, 0));
        assert_eq!(d.symmetry_class, SymmetryClass::SelfAdjointBounded);
        assert!(d.identity_residual < 1e-8);
    }

    #[test]
    fn deficiency_of_constant() {
        let k = RationalSymbol::new(Poly::from_real(&[-0.75]), Poly::one()).unwrap();
        let d = deficiency(&k).unwrap();
        assert_eq!((d.n_plus, d.n_minus, d.l), (0, 0, 0));
        assert!((d.c_scale - c(-0.75, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn identity_examples() {
        let fit = verify_plus_identity(&cayley_symbol()).unwrap();
        assert!(fit.residual < 1e-14);
        assert!((fit.c - c(0.0, 2.0)).norm() < 1e-14);
        assert!(verify_plus_identity(&two_cos()).unwrap().residual < 1e-8);
    }

    #[test]
    fn identity_with_circle_zeros_of_numerator() {
        // (z^2 - 1)^2 / z^2 is real and nonnegative, vanishing at 1 and -1
        let r = Poly::from_root_list(&[ONE, ONE, -ONE, -ONE], ONE);
        let sym = RationalSymbol::new(r, Poly::monomial(ONE, 2)).unwrap();
        let fit = verify_plus_identity(&sym).unwrap();
        assert!(fit.residual < 1e-8);
    }

    #[test]
    fn circle_pole_has_deficiency() {
        // i (z + 1)/(z - 1) plus a bounded part 2 cos
        let r = &(&Poly::from_real(&[1.0, 0.0, 1.0]) * &Poly::linear(ONE))
            + &(&Poly::new(vec![c(0.0, 1.0), c(0.0, 1.0)]) * &Poly::z());
        let s = &Poly::z() * &Poly::linear(ONE);
        let sym = RationalSymbol::new(r, s).unwrap();
        assert!(sym.is_real_on_circle());
        let d = deficiency(&sym).unwrap();
        assert!(d.n_plus + d.n_minus >= 1);
    }
}
