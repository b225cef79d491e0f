//! Seeded generators of rational symbols for property tests and demos.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::RationalSymbol;
use crate::error::{Error, Result};
use crate::polynomial::{Poly, ONE};

const MAX_REJECTIONS: usize = 100;

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn random_poly(rng: &mut ChaCha8Rng, degree: usize) -> Poly {
    loop {
        let coeffs: Vec<Complex64> = (0..=degree).map(|_| random_complex(rng)).collect();
        if coeffs[degree].norm() > 0.25 && coeffs[0].norm() > 0.1 {
            return Poly::new(coeffs);
        }
    }
}

fn random_unimodular(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI))
}

/// Nonzero real weight in `[-2, -0.25] u [0.25, 2]`.
fn random_weight(rng: &mut ChaCha8Rng) -> f64 {
    let w = rng.gen_range(0.25..2.0);
    if rng.gen_bool(0.5) {
        w
    } else {
        -w
    }
}

/// Random root off the circle, modulus in `[0.2, 0.8]` or `[1.25, 2.5]`.
fn random_off_circle(rng: &mut ChaCha8Rng) -> Complex64 {
    let modulus = if rng.gen_bool(0.5) {
        rng.gen_range(0.2..0.8)
    } else {
        rng.gen_range(1.25..2.5)
    };
    Complex64::from_polar(modulus, rng.gen_range(0.0..2.0 * PI))
}

/// Drops the common power of `z` from a numerator/denominator pair.
fn cancel_origin(r: Poly, s: Poly) -> (Poly, Poly) {
    let k = r.origin_multiplicity().min(s.origin_multiplicity());
    if k == 0 {
        return (r, s);
    }
    (Poly::new(r.coeffs()[k..].to_vec()), Poly::new(s.coeffs()[k..].to_vec()))
}

/// A symbol that is real on the unit circle.
///
/// The Laurent part is a real combination of blocks `U(z) U#(z) / z^deg U`
/// (each equal to `|U|^2` on the circle), optionally divided by one positive
/// block `|V|^2` with `V` zero-free near the circle. Each requested circle
/// pole `zeta` adds a real term `c i (z + zeta)/(z - zeta)`.
pub fn random_real_symbol(max_block_deg: usize, n_circle_poles: usize, seed: u64) -> Result<RationalSymbol> {
    if max_block_deg > 8 || n_circle_poles > 8 {
        return Err(Error::InvalidInput(format!(
            "generator bounds exceeded: block degree {max_block_deg}, circle poles {n_circle_poles} (max 8 each)"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_REJECTIONS {
        if let Some(sym) = try_real_symbol(&mut rng, max_block_deg, n_circle_poles) {
            return Ok(sym);
        }
    }
    Err(Error::GenerationFailure(MAX_REJECTIONS))
}

fn try_real_symbol(rng: &mut ChaCha8Rng, max_block_deg: usize, n_circle_poles: usize) -> Option<RationalSymbol> {
    let blocks = rng.gen_range(1..=3);
    let degrees: Vec<usize> = (0..blocks).map(|_| rng.gen_range(0..=max_block_deg)).collect();
    let dmax = degrees.iter().copied().max().unwrap_or(0);

    let mut r = Poly::zero();
    for &d in &degrees {
        let u = random_poly(rng, d);
        let block = (&u * &u.recip_conj()).scale(Complex64::new(random_weight(rng), 0.0));
        r = &r + &block.shift(dmax - d);
    }
    let mut s = Poly::monomial(ONE, dmax);

    if max_block_deg > 0 && rng.gen_bool(0.5) {
        let dv = rng.gen_range(1..=max_block_deg);
        let roots: Vec<Complex64> = (0..dv).map(|_| random_off_circle(rng)).collect();
        let v = Poly::from_root_list(&roots, random_complex(rng) + Complex64::new(0.5, 0.0));
        // omega / (V V# / z^dv)
        r = r.shift(dv);
        s = &s * &(&v * &v.recip_conj());
    }
    let (mut r, mut s) = cancel_origin(r, s);

    let mut poles: Vec<Complex64> = Vec::new();
    for _ in 0..n_circle_poles {
        let zeta = random_unimodular(rng);
        if poles.iter().any(|p| (p - zeta).norm() < 0.05) {
            return None;
        }
        poles.push(zeta);
        let weight = Complex64::new(0.0, random_weight(rng));
        let term = &Poly::new(vec![zeta, ONE]) * &Poly::constant(weight);
        let lin = Poly::linear(zeta);
        r = &(&r * &lin) + &(&s * &term);
        s = &s * &lin;
    }
    if r.is_zero() {
        return None;
    }
    let sym = RationalSymbol::new(r, s).ok()?;
    let separated = min_root_separation(&sym) > 1e-3;
    (sym.is_real_on_circle() && separated && !sym.ill_conditioned()).then_some(sym)
}

fn min_root_separation(sym: &RationalSymbol) -> f64 {
    let r = sym.numerator_split().all_roots().flat();
    let s = sym.denominator_split().all_roots().flat();
    r.iter()
        .flat_map(|a| s.iter().map(move |b| (a - b).norm()))
        .fold(f64::INFINITY, f64::min)
}

/// A general (complex) symbol with roots placed inside, on and outside the
/// circle. Denominator roots on the circle give an unbounded operator.
///
/// Roots off the circle keep a distance of at least 0.15 from it, distinct
/// roots are at least 0.05 apart, and a root is occasionally doubled or put
/// at the origin.
pub fn random_symbol(max_numerator_deg: usize, max_denominator_deg: usize, seed: u64) -> Result<RationalSymbol> {
    if max_numerator_deg > 16 || max_denominator_deg > 16 {
        return Err(Error::InvalidInput("generator degree bound is 16".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_REJECTIONS {
        let dr = rng.gen_range(0..=max_numerator_deg);
        let ds = rng.gen_range(0..=max_denominator_deg);
        let r_roots = random_root_list(&mut rng, dr);
        let s_roots = random_root_list(&mut rng, ds);
        let mut distinct: Vec<Complex64> = Vec::new();
        for z in r_roots.iter().chain(&s_roots) {
            if !distinct.iter().any(|w| w == z) {
                distinct.push(*z);
            }
        }
        let too_close = distinct
            .iter()
            .enumerate()
            .any(|(i, a)| distinct[i + 1..].iter().any(|b| (a - b).norm() < 0.05));
        if too_close || r_roots.iter().any(|a| s_roots.contains(a)) {
            continue;
        }
        let r_lead = Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..2.0 * PI));
        let s_lead = Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..2.0 * PI));
        let r = Poly::from_root_list(&r_roots, r_lead);
        let s = Poly::from_root_list(&s_roots, s_lead);
        if let Ok(sym) = RationalSymbol::new(r, s) {
            if !sym.ill_conditioned() {
                return Ok(sym);
            }
        }
    }
    Err(Error::GenerationFailure(MAX_REJECTIONS))
}

fn random_root_list(rng: &mut ChaCha8Rng, degree: usize) -> Vec<Complex64> {
    let mut roots = Vec::with_capacity(degree);
    while roots.len() < degree {
        let u: f64 = rng.gen();
        let z = if u < 0.1 {
            Complex64::new(0.0, 0.0)
        } else if u < 0.45 {
            Complex64::from_polar(rng.gen_range(0.05..0.85), rng.gen_range(0.0..2.0 * PI))
        } else if u < 0.8 {
            Complex64::from_polar(rng.gen_range(1.15..3.0), rng.gen_range(0.0..2.0 * PI))
        } else {
            random_unimodular(rng)
        };
        if z.norm() == 0.0 && roots.contains(&z) {
            continue;
        }
        roots.push(z);
        if roots.len() < degree && rng.gen_bool(0.1) {
            roots.push(z);
        }
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_generator_contract() {
        let sym = random_real_symbol(2, 0, 1).unwrap();
        assert!(sym.is_real_on_circle());
        assert!(sym.is_bounded());

        let sym = random_real_symbol(2, 1, 2).unwrap();
        assert!(sym.is_real_on_circle());
        assert!(sym.denominator_split().deg_on() >= 1);

        for seed in 0..20 {
            let sym = random_real_symbol(2, seed as usize % 3, seed).unwrap();
            let again = RationalSymbol::new(sym.numerator().clone(), sym.denominator().clone()).unwrap();
            assert!(again.is_real_on_circle());
        }
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(random_real_symbol(2, 1, 7).unwrap(), random_real_symbol(2, 1, 7).unwrap());
        assert_eq!(random_symbol(4, 4, 7).unwrap(), random_symbol(4, 4, 7).unwrap());
    }

    #[test]
    fn generator_bounds() {
        assert!(matches!(random_real_symbol(9, 0, 0), Err(Error::InvalidInput(_))));
    }
}
