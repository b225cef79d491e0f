//! Rational symbols `omega = R/S` and their circle factorizations.
//!
//! A nonzero polynomial `Y` splits as `Y = scale * on * inside * outside`
//! where the three monic factors collect the roots on, inside and outside
//! the unit circle. For the denominator these are `s`, `S_in`, `S_ex`.

mod random;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::polynomial::{Poly, RootSet, DEFAULT_ROOT_TOL, DEGREE_CAP, ZERO};

pub use random::{random_real_symbol, random_symbol};

/// Numerical thresholds shared by every analysis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Half-width of the band `| |b| - 1 | <= eps_circle` treated as the circle.
    pub eps_circle: f64,
    /// Roots of `R` and `S` closer than this are treated as common.
    pub delta_coprime: f64,
    /// Backward-error tolerance handed to the root solver.
    pub root_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps_circle: 1e-8,
            delta_coprime: 1e-7,
            root_tol: DEFAULT_ROOT_TOL,
        }
    }
}

/// Where a point lies relative to the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Inside,
    On,
    Outside,
}

pub fn side_of(z: Complex64, eps: f64) -> Side {
    let gap = z.norm() - 1.0;
    if gap.abs() <= eps {
        Side::On
    } else if gap < 0.0 {
        Side::Inside
    } else {
        Side::Outside
    }
}

/// Roots whose distance to the circle falls in `(eps, 2 eps]` are ambiguous.
fn is_ambiguous(z: Complex64, eps: f64) -> bool {
    let gap = (z.norm() - 1.0).abs();
    gap > eps && gap <= 2.0 * eps
}

/// `p = scale * on * inside * outside` with monic factors.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleSplit {
    pub on: Poly,
    pub inside: Poly,
    pub outside: Poly,
    pub scale: Complex64,
    pub on_roots: RootSet,
    pub inside_roots: RootSet,
    pub outside_roots: RootSet,
    /// Some root sits just outside the circle band.
    pub ill_conditioned: bool,
}

impl CircleSplit {
    pub fn new(p: &Poly, eps: f64, root_tol: f64) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let roots = p.roots(root_tol)?;
        Ok(Self::from_roots(&roots, eps))
    }

    pub fn from_roots(roots: &RootSet, eps: f64) -> Self {
        let on_roots = roots.filter_monic(|r| side_of(r.value, eps) == Side::On);
        let inside_roots = roots.filter_monic(|r| side_of(r.value, eps) == Side::Inside);
        let outside_roots = roots.filter_monic(|r| side_of(r.value, eps) == Side::Outside);
        let ill_conditioned = roots.entries().iter().any(|r| is_ambiguous(r.value, eps));
        CircleSplit {
            on: on_roots.to_poly(),
            inside: inside_roots.to_poly(),
            outside: outside_roots.to_poly(),
            scale: roots.leading(),
            on_roots,
            inside_roots,
            outside_roots,
            ill_conditioned,
        }
    }

    pub fn deg_on(&self) -> usize {
        self.on_roots.degree()
    }

    pub fn deg_inside(&self) -> usize {
        self.inside_roots.degree()
    }

    pub fn deg_outside(&self) -> usize {
        self.outside_roots.degree()
    }

    /// `scale * on * inside * outside`.
    pub fn reconstruct(&self) -> Poly {
        (&(&self.on * &self.inside) * &self.outside).scale(self.scale)
    }

    /// All roots with the original leading coefficient.
    pub fn all_roots(&self) -> RootSet {
        let merged = self
            .on_roots
            .union(&self.inside_roots)
            .union(&self.outside_roots);
        RootSet::new(merged.entries().to_vec(), self.scale)
    }
}

/// Which polynomial of a symbol a derived factor refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Numerator,
    Denominator,
}

/// For `Y` in {R, S}: `Y_ex-bar = y Y_ex`, `Y_in-bar = y Y_in` and the
/// reflected exterior factor built from the nonzero interior roots.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedFactors {
    pub on_bar_ex: Poly,
    pub on_bar_in: Poly,
    pub reflected_ex: Poly,
}

/// A validated rational symbol `omega = R/S` with cached circle splits.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalSymbol {
    numerator: Poly,
    denominator: Poly,
    numerator_split: CircleSplit,
    denominator_split: CircleSplit,
    real_on_circle: bool,
    tolerances: Tolerances,
}

impl RationalSymbol {
    pub fn new(numerator: Poly, denominator: Poly) -> Result<Self> {
        Self::with_tolerances(numerator, denominator, Tolerances::default())
    }

    /// Validates `R` and `S`: both nonzero, degree at most the cap, and no
    /// root of `R` within `delta_coprime` of a root of `S`.
    pub fn with_tolerances(numerator: Poly, denominator: Poly, tolerances: Tolerances) -> Result<Self> {
        for p in [&numerator, &denominator] {
            match p.degree() {
                None => return Err(Error::ZeroPolynomial),
                Some(degree) if degree > DEGREE_CAP => {
                    return Err(Error::DegreeCap {
                        degree,
                        cap: DEGREE_CAP,
                    })
                }
                Some(_) => {}
            }
        }
        let numerator_split = CircleSplit::new(&numerator, tolerances.eps_circle, tolerances.root_tol)?;
        let denominator_split = CircleSplit::new(&denominator, tolerances.eps_circle, tolerances.root_tol)?;

        let r_roots = numerator_split.all_roots();
        let s_roots = denominator_split.all_roots();
        for a in r_roots.entries() {
            for b in s_roots.entries() {
                let distance = (a.value - b.value).norm();
                if distance <= tolerances.delta_coprime {
                    return Err(Error::Coprimality {
                        distance,
                        delta: tolerances.delta_coprime,
                    });
                }
            }
        }
        let real_on_circle = laurent_realness_defect(&numerator, &denominator) < REALNESS_TOL;
        Ok(RationalSymbol {
            numerator,
            denominator,
            numerator_split,
            denominator_split,
            real_on_circle,
            tolerances,
        })
    }

    /// Same symbol, new tolerances.
    pub fn retuned(&self, tolerances: Tolerances) -> Result<Self> {
        Self::with_tolerances(self.numerator.clone(), self.denominator.clone(), tolerances)
    }

    pub fn numerator(&self) -> &Poly {
        &self.numerator
    }

    pub fn denominator(&self) -> &Poly {
        &self.denominator
    }

    pub fn numerator_split(&self) -> &CircleSplit {
        &self.numerator_split
    }

    pub fn denominator_split(&self) -> &CircleSplit {
        &self.denominator_split
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tolerances
    }

    pub fn split(&self, part: Part) -> &CircleSplit {
        match part {
            Part::Numerator => &self.numerator_split,
            Part::Denominator => &self.denominator_split,
        }
    }

    /// `omega(T)` is contained in the real line.
    pub fn is_real_on_circle(&self) -> bool {
        self.real_on_circle
    }

    /// No poles on the circle, i.e. `T_omega` is bounded.
    pub fn is_bounded(&self) -> bool {
        self.denominator_split.deg_on() == 0
    }

    /// The constant value if `omega` is constant. Coprimality forces both
    /// polynomials to be constants in that case.
    pub fn constant_value(&self) -> Option<Complex64> {
        (self.numerator.is_constant() && self.denominator.is_constant())
            .then(|| self.numerator.leading() / self.denominator.leading())
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.numerator.eval(z) / self.denominator.eval(z)
    }

    /// [`RationalSymbol::eval`] in double-double arithmetic.
    pub fn eval_extended(&self, z: Complex64) -> Complex64 {
        self.numerator.eval_extended(z) / self.denominator.eval_extended(z)
    }

    /// Circle roots of `S`, i.e. the poles of `omega` on the circle.
    pub fn circle_poles(&self) -> Vec<Complex64> {
        self.denominator_split
            .on_roots
            .entries()
            .iter()
            .map(|r| r.value)
            .collect()
    }

    pub fn ill_conditioned(&self) -> bool {
        self.numerator_split.ill_conditioned || self.denominator_split.ill_conditioned
    }

    pub fn derived_factors(&self, part: Part) -> DerivedFactors {
        let split = self.split(part);
        DerivedFactors {
            on_bar_ex: &split.on * &split.outside,
            on_bar_in: &split.on * &split.inside,
            reflected_ex: split.inside_roots.reflect().to_poly(),
        }
    }
}

/// Threshold on the normalised Laurent defect below which a symbol is real.
pub const REALNESS_TOL: f64 = 1e-9;

/// Largest coefficient of the Laurent polynomial
/// `R(z) S~(1/z) - R~(1/z) S(z)`, relative to `sum |R_i| |S_j|`.
///
/// On the circle `conj(Y(z)) = Y~(1/z)`, so this Laurent polynomial vanishes
/// identically exactly when `R/S` is real there.
pub fn laurent_realness_defect(r: &Poly, s: &Poly) -> f64 {
    let (rc, sc) = (r.coeffs(), s.coeffs());
    if rc.is_empty() || sc.is_empty() {
        return 0.0;
    }
    let offset = rc.len().max(sc.len()) - 1;
    let mut defect = vec![ZERO; 2 * offset + 1];
    for (i, a) in rc.iter().enumerate() {
        for (j, b) in sc.iter().enumerate() {
            // R_i conj(S_j) z^(i-j)  minus  conj(R_i) S_j z^(j-i)
            defect[offset + i - j] += a * b.conj();
            defect[offset + j - i] -= a.conj() * b;
        }
    }
    let scale = rc.iter().map(|a| a.norm()).sum::<f64>() * sc.iter().map(|b| b.norm()).sum::<f64>();
    defect.iter().map(|d| d.norm()).fold(0.0, f64::max) / scale
}

impl std::fmt::Display for RationalSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}] / [{}]", self.numerator, self.denominator)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::ONE;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sym(r: &[Complex64], s: &[Complex64]) -> Result<RationalSymbol> {
        RationalSymbol::new(Poly::new(r.to_vec()), Poly::new(s.to_vec()))
    }

    fn close(a: &Poly, b: &Poly) -> bool {
        a.relative_distance(b) < 1e-10
    }

    #[test]
    fn split_three_regions() {
        let p = Poly::from_root_list(&[c(0.0, 0.0), c(1.0, 0.0), c(3.0, 0.0)], ONE);
        let split = CircleSplit::new(&p, 1e-8, 1e-8).unwrap();
        assert!(close(&split.on, &Poly::linear(c(1.0, 0.0))));
        assert!(close(&split.inside, &Poly::z()));
        assert!(close(&split.outside, &Poly::linear(c(3.0, 0.0))));
        assert_eq!(split.scale, ONE);
        assert!(!split.ill_conditioned);
    }

    #[test]
    fn split_constant_and_circle_pair() {
        let split = CircleSplit::new(&Poly::from_real(&[5.0]), 1e-8, 1e-8).unwrap();
        assert_eq!(split.on, Poly::one());
        assert_eq!(split.inside, Poly::one());
        assert_eq!(split.outside, Poly::one());
        assert_eq!(split.scale, c(5.0, 0.0));

        let split = CircleSplit::new(&Poly::from_real(&[1.0, 0.0, 1.0]), 1e-8, 1e-8).unwrap();
        assert!(close(&split.on, &Poly::from_real(&[1.0, 0.0, 1.0])));
        assert_eq!(split.deg_inside() + split.deg_outside(), 0);
    }

    #[test]
    fn boundary_ambiguity_is_flagged() {
        let p = Poly::linear(c(1.0 + 1.5e-8, 0.0));
        let split = CircleSplit::new(&p, 1e-8, 1e-8).unwrap();
        assert!(split.ill_conditioned);
        assert_eq!(split.deg_outside(), 1);
    }

    #[test]
    fn make_symbol_examples() {
        let s = sym(&[ONE], &[ZERO, ONE]).unwrap();
        assert_eq!(s.denominator_split().inside, Poly::z());

        let err = sym(&[c(-1.0, 0.0), ONE], &[c(-1.0, 0.0), ONE]).unwrap_err();
        assert!(matches!(err, Error::Coprimality { .. }));

        let s = sym(&[c(0.0, -1.0), c(0.0, 1.0)], &[ONE, ONE]).unwrap();
        assert!(s.is_real_on_circle());

        assert_eq!(sym(&[], &[ONE]).unwrap_err(), Error::ZeroPolynomial);
        let big = Poly::monomial(ONE, 65);
        assert!(matches!(
            RationalSymbol::new(Poly::one(), big),
            Err(Error::DegreeCap { .. })
        ));
    }

    #[test]
    fn realness_examples() {
        assert!(sym(&[ONE, ZERO, ONE], &[ZERO, ONE]).unwrap().is_real_on_circle());
        assert!(!sym(&[ONE], &[ZERO, ONE]).unwrap().is_real_on_circle());
        assert!(sym(&[c(0.0, -1.0), c(0.0, 1.0)], &[ONE, ONE]).unwrap().is_real_on_circle());
        // i z is not real, 2 cos = z + 1/z is
        assert!(!sym(&[ZERO, c(0.0, 1.0)], &[ONE]).unwrap().is_real_on_circle());
        assert!(sym(&[c(3.0, 0.0)], &[ONE]).unwrap().is_real_on_circle());
        assert!(!sym(&[c(3.0, 1.0)], &[ONE]).unwrap().is_real_on_circle());
    }

    #[test]
    fn derived_factor_examples() {
        let s = RationalSymbol::new(
            Poly::one(),
            Poly::from_root_list(&[ZERO, c(1.0, 0.0), c(3.0, 0.0)], ONE),
        )
        .unwrap();
        let d = s.derived_factors(Part::Denominator);
        assert!(close(&d.on_bar_ex, &Poly::from_root_list(&[c(1.0, 0.0), c(3.0, 0.0)], ONE)));
        assert!(close(&d.on_bar_in, &Poly::from_root_list(&[ZERO, c(1.0, 0.0)], ONE)));
        assert_eq!(d.reflected_ex, Poly::one());

        let s = RationalSymbol::new(Poly::one(), Poly::from_root_list(&[c(0.5, 0.0); 2], ONE)).unwrap();
        let d = s.derived_factors(Part::Denominator);
        assert!(close(&d.reflected_ex, &Poly::from_root_list(&[c(2.0, 0.0); 2], ONE)));

        let s = RationalSymbol::new(Poly::z(), Poly::one()).unwrap();
        let d = s.derived_factors(Part::Denominator);
        assert_eq!((d.on_bar_ex, d.on_bar_in, d.reflected_ex), (Poly::one(), Poly::one(), Poly::one()));
    }

    #[test]
    fn constant_value_detection() {
        let s = RationalSymbol::new(Poly::from_real(&[6.0]), Poly::from_real(&[2.0])).unwrap();
        assert_eq!(s.constant_value(), Some(c(3.0, 0.0)));
        assert_eq!(RationalSymbol::new(Poly::z(), Poly::one()).unwrap().constant_value(), None);
    }
}
