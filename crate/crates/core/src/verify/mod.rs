//! Numerical certificates that check closed-form answers without reusing
//! them: Laurent coefficients, kernel and orthogonality residuals, and
//! finite Toeplitz sections.

mod laurent;
mod toeplitz;

pub use laurent::{
    laurent_exact, laurent_fft, FourierWindow, FFT_AGREEMENT, FFT_MAX_SAMPLES, FFT_MIN_SAMPLES, POLE_MARGIN,
};
pub use toeplitz::{apply_residual, toeplitz_matrix, ToeplitzMatrix, MAX_TOEPLITZ_ORDER};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::factorization::{CircleSplit, RationalSymbol};
use crate::operator::RationalFun;
use crate::polynomial::{Poly, DEFAULT_ROOT_TOL};

/// Relative size of `p(zeta)` below which `zeta` counts as a root when
/// cancelling circle poles.
pub const CANCELLATION_TOL: f64 = 1e-6;
/// Coefficients below this fraction of the largest one end an inner product.
pub const TRUNCATION_TOL: f64 = 1e-13;
const MAX_INNER_TERMS: i64 = 1 << 16;

/// Which deficiency space a test vector is meant to lie in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeficiencySign {
    /// `ran(T - iI)^perp`.
    Plus,
    /// `ran(T + iI)^perp`.
    Minus,
}

fn require_hardy(v: &RationalFun) -> Result<Option<f64>> {
    let modulus = v.min_pole_modulus(DEFAULT_ROOT_TOL)?;
    match modulus {
        Some(m) if m <= 1.0 => Err(Error::InvalidElement { modulus: m }),
        _ => Ok(modulus),
    }
}

/// `omega * u` with the circle poles of `omega` cancelled against zeros of
/// `u`.
pub fn cancel_circle_poles(sym: &RationalSymbol, u: &RationalFun) -> Result<RationalFun> {
    let mut num = sym.numerator() * &u.num;
    let mut den = sym.denominator_split().inside.clone();
    den = &(&den * &sym.denominator_split().outside) * &u.den;
    den = den.scale(sym.denominator_split().scale);
    for root in sym.denominator_split().on_roots.entries() {
        for _ in 0..root.multiplicity {
            let scale = num.eval_abs(root.value);
            if num.is_zero() || num.eval(root.value).norm() > CANCELLATION_TOL * scale {
                return Err(Error::CancellationFailure {
                    root: format!("{:.12}{:+.12}i", root.value.re, root.value.im),
                });
            }
            num = num.deflate(root.value);
        }
    }
    Ok(RationalFun::new(num, den))
}

/// `max_{0 <= n <= n_max} |coeff_n(omega u)|`: zero exactly when `omega u`
/// has no analytic part, i.e. `T_omega u = 0`.
pub fn kernel_residual(sym: &RationalSymbol, u: &RationalFun, n_max: usize) -> Result<f64> {
    require_hardy(u)?;
    let product = cancel_circle_poles(sym, u)?;
    let w = laurent_exact(&product, 0, n_max as i64)?;
    Ok(w.max_abs())
}

/// `max_{0 <= n <= n_max} |<v, omega s e_n>|`, where `s` carries the circle
/// roots of `S`, so that `{s e_n}` spans the domain.
pub fn orthogonality_residual(sym: &RationalSymbol, v: &RationalFun, n_max: usize) -> Result<f64> {
    orthogonality_against(sym.numerator(), sym.denominator_split(), v, n_max)
}

/// Orthogonality of `v` to the range of `T_omega -+ iI` on its domain.
pub fn deficiency_residual(sym: &RationalSymbol, v: &RationalFun, sign: DeficiencySign, n_max: usize) -> Result<f64> {
    if !sym.is_real_on_circle() {
        return Err(Error::RealnessViolated);
    }
    let i_s = sym.denominator().scale(Complex64::new(0.0, 1.0));
    let shifted = match sign {
        DeficiencySign::Plus => sym.numerator() - &i_s,
        DeficiencySign::Minus => sym.numerator() + &i_s,
    };
    orthogonality_against(&shifted, sym.denominator_split(), v, n_max)
}

/// `<v, z^n h>` for `h = numerator / (S / s)`, summed over the Taylor
/// coefficients of `v` until they decay, plus a geometric tail bound.
fn orthogonality_against(numerator: &Poly, s: &CircleSplit, v: &RationalFun, n_max: usize) -> Result<f64> {
    let pole_modulus = require_hardy(v)?;
    let den = (&s.inside * &s.outside).scale(s.scale);
    let h = RationalFun::new(numerator.clone(), den);
    let n_max = n_max as i64;

    let (v_hat, rho) = match pole_modulus {
        None => (laurent_exact(v, 0, v.num.deg() as i64)?, 0.0),
        Some(m) => {
            let rho = 1.0 / m;
            let mut k = 64.max(v.num.deg() as i64 + 1);
            loop {
                let w = laurent_exact(v, 0, k)?;
                let tail = w.coeffs[(k as usize).saturating_sub(8)..]
                    .iter()
                    .map(|c| c.norm())
                    .fold(0.0, f64::max);
                if tail <= TRUNCATION_TOL * w.max_abs() || k >= MAX_INNER_TERMS {
                    break (w, rho);
                }
                k *= 2;
            }
        }
    };
    let k_max = v_hat.n_max;
    let h_hat = laurent_exact(&h, -n_max, k_max)?;

    let tail = if rho > 0.0 {
        2.0 * v_hat.get(k_max).norm() * rho / (1.0 - rho) * h_hat.max_abs()
    } else {
        0.0
    };
    let worst = (0..=n_max)
        .map(|n| {
            (0..=k_max)
                .map(|k| v_hat.get(k).conj() * h_hat.get(k - n))
                .sum::<Complex64>()
                .norm()
        })
        .fold(0.0, f64::max);
    Ok(worst + tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::ONE;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sym(r: Poly, s: Poly) -> RationalSymbol {
        RationalSymbol::new(r, s).unwrap()
    }

    fn half_squared_over_z() -> RationalSymbol {
        sym(Poly::from_root_list(&[c(0.5, 0.0); 2], ONE), Poly::z())
    }

    fn cayley_symbol() -> RationalSymbol {
        sym(Poly::new(vec![c(0.0, -1.0), c(0.0, 1.0)]), Poly::from_real(&[1.0, 1.0]))
    }

    fn one() -> RationalFun {
        RationalFun::polynomial(Poly::one())
    }

    #[test]
    fn kernel_residual_examples() {
        let inv_z2 = sym(Poly::one(), Poly::monomial(ONE, 2));
        assert!(kernel_residual(&inv_z2, &one(), 16).unwrap() < 1e-15);
        let inv_z = sym(Poly::one(), Poly::z());
        assert!(kernel_residual(&inv_z, &one(), 16).unwrap() < 1e-15);
        let r = kernel_residual(&half_squared_over_z(), &one(), 16).unwrap();
        assert!((r - 1.0).abs() < 1e-12, "{r}");
    }

    #[test]
    fn kernel_with_circle_pole() {
        // omega = 1/(z (z - 1)), u = (z - 1) lies in the domain and T u = 0
        let s = &Poly::z() * &Poly::linear(ONE);
        let omega = sym(Poly::one(), s);
        let u = RationalFun::polynomial(Poly::linear(ONE));
        assert!(kernel_residual(&omega, &u, 16).unwrap() < 1e-14);
        assert!(matches!(
            kernel_residual(&omega, &one(), 16),
            Err(Error::CancellationFailure { .. })
        ));
    }

    #[test]
    fn orthogonality_examples() {
        let shift = sym(Poly::z(), Poly::one());
        assert!(orthogonality_residual(&shift, &one(), 32).unwrap() < 1e-12);

        let v = RationalFun::new(Poly::one(), Poly::linear(c(2.0, 0.0)).pow(2));
        assert!(orthogonality_residual(&half_squared_over_z(), &v, 32).unwrap() < 1e-8);

        let backward = sym(Poly::one(), Poly::z());
        assert!(orthogonality_residual(&backward, &one(), 32).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn orthogonality_rejects_non_hardy() {
        let v = RationalFun::new(Poly::one(), Poly::linear(c(0.5, 0.0)));
        assert!(matches!(
            orthogonality_residual(&sym(Poly::z(), Poly::one()), &v, 4),
            Err(Error::InvalidElement { .. })
        ));
    }

    #[test]
    fn deficiency_residual_examples() {
        let w = cayley_symbol();
        assert!(deficiency_residual(&w, &one(), DeficiencySign::Minus, 32).unwrap() < 1e-8);
        assert!(deficiency_residual(&w, &one(), DeficiencySign::Plus, 32).unwrap() >= 0.1);

        let two_cos = sym(Poly::from_real(&[1.0, 0.0, 1.0]), Poly::z());
        let tests = [
            one(),
            RationalFun::polynomial(Poly::z()),
            RationalFun::new(Poly::one(), Poly::linear(c(0.0, 3.0))),
        ];
        for v in &tests {
            for sign in [DeficiencySign::Plus, DeficiencySign::Minus] {
                assert!(deficiency_residual(&two_cos, v, sign, 32).unwrap() >= 0.01);
            }
        }
    }

    #[test]
    fn deficiency_residual_needs_real_symbol() {
        assert_eq!(
            deficiency_residual(&sym(Poly::z(), Poly::one()), &one(), DeficiencySign::Plus, 4),
            Err(Error::RealnessViolated)
        );
    }
}
