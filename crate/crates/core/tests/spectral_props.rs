use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rational_toeplitz::factorization::{random_real_symbol, random_symbol};
use rational_toeplitz::spectral::{classify, portrait, winding_number};
use rational_toeplitz::{Complex64, Grid, RationalSymbol, SpectralPart};

/// Samples of the curve `omega(T)`, skipping points near circle poles.
fn curve(sym: &RationalSymbol, n: usize) -> Vec<Complex64> {
    let poles = sym.circle_poles();
    (0..n)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64))
        .filter(|z| poles.iter().all(|p| (p - z).norm() > 1e-3))
        .map(|z| sym.eval(z))
        .collect()
}

fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let t = (((p - a) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
    (p - (a + d * t)).norm()
}

fn random_lambda(rng: &mut ChaCha8Rng, samples: &[Complex64]) -> Complex64 {
    let bound = samples.iter().map(|w| w.norm()).fold(0.5, f64::max).min(10.0) * 1.2;
    Complex64::new(rng.gen_range(-bound..bound), rng.gen_range(-bound..bound))
}

#[test]
fn index_matches_winding_number() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    let mut nonzero = 0;
    let mut seed = 0;
    while checked < 100 {
        let sym = random_symbol(8, 8, seed).unwrap();
        seed += 1;
        if !sym.is_bounded() {
            continue;
        }
        let samples = curve(&sym, 1024);
        let lambda = random_lambda(&mut rng, &samples);
        let report = classify(&sym, lambda).unwrap();
        if report.on_curve || report.ill_conditioned {
            continue;
        }
        let w = winding_number(&sym, lambda, 4096).unwrap();
        assert_eq!(report.index, Some(-w), "seed {} lambda {lambda}", seed - 1);
        checked += 1;
        nonzero += (w != 0) as usize;
    }
    assert!(nonzero >= 20, "only {nonzero} nonzero windings");
}

#[test]
fn classification_is_locally_constant() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut checked = 0;
    let mut seed = 0;
    while checked < 200 {
        let sym = random_symbol(6, 6, 1000 + seed).unwrap();
        seed += 1;
        let samples = curve(&sym, 4096);
        let lambda = random_lambda(&mut rng, &samples);
        let h = Complex64::from_polar(1e-4, rng.gen_range(0.0..2.0 * PI));
        if samples.iter().any(|w| segment_distance(*w, lambda, lambda + h) <= 1e-3) {
            continue;
        }
        let (a, b) = (classify(&sym, lambda).unwrap(), classify(&sym, lambda + h).unwrap());
        if a.ill_conditioned || b.ill_conditioned {
            continue;
        }
        assert_eq!(
            (a.part, a.dim_ker, a.dim_coker, a.index),
            (b.part, b.dim_ker, b.dim_coker, b.index),
            "lambda {lambda}, h {h}"
        );
        checked += 1;
    }
}

#[test]
fn inner_degree_does_not_drop_leaving_the_curve() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut checked = 0;
    for seed in 0..200 {
        let sym = random_symbol(6, 6, 2000 + seed).unwrap();
        let poles = sym.circle_poles();
        let z = Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI));
        if poles.iter().any(|p| (p - z).norm() < 1e-2) {
            continue;
        }
        let lambda = sym.eval(z);
        let h = Complex64::from_polar(1e-4, rng.gen_range(0.0..2.0 * PI));
        let (Ok(a), Ok(b)) = (classify(&sym, lambda), classify(&sym, lambda + h)) else {
            continue;
        };
        if !a.on_curve || b.on_curve || b.ill_conditioned {
            continue;
        }
        assert!(b.degrees.rl_in >= a.degrees.rl_in, "seed {seed}");
        assert!(b.degrees.rl_in <= a.degrees.rl_in_bar, "seed {seed}");
        checked += 1;
    }
    assert!(checked >= 50, "only {checked} curve points");
}

#[test]
fn every_node_lands_in_one_part() {
    let grid = Grid {
        x0: -3.0,
        x1: 3.0,
        y0: -3.0,
        y1: 3.0,
        nx: 31,
        ny: 31,
    };
    let mut seen = std::collections::HashSet::new();
    for seed in 0..20 {
        let sym = random_symbol(6, 6, 3000 + seed).unwrap();
        let p = portrait(&sym, grid).unwrap();
        for node in &p.nodes {
            // the report constructor asserts the partition table
            if let Some(r) = node.report() {
                seen.insert(r.part);
            }
        }
    }
    assert!(seen.contains(&SpectralPart::Point));
    assert!(seen.contains(&SpectralPart::Residual));
    assert!(seen.contains(&SpectralPart::Resolvent));
}

#[test]
fn real_symbols_have_no_real_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for seed in 0..40 {
        let sym = random_real_symbol(3, seed as usize % 3, seed).unwrap();
        let samples = curve(&sym, 512);
        let bound = samples.iter().map(|w| w.norm()).fold(1.0, f64::max).min(10.0) * 1.5;
        for _ in 0..50 {
            let lambda = Complex64::new(rng.gen_range(-bound..bound), 0.0);
            let r = classify(&sym, lambda).unwrap();
            assert_ne!(r.part, SpectralPart::Point, "seed {seed}, lambda {lambda}: {sym}");
        }
    }
}

#[test]
fn portrait_is_deterministic() {
    let sym = random_symbol(6, 6, 5).unwrap();
    let grid = Grid {
        x0: -2.0,
        x1: 2.0,
        y0: -2.0,
        y1: 2.0,
        nx: 40,
        ny: 25,
    };
    assert_eq!(portrait(&sym, grid).unwrap(), portrait(&sym, grid).unwrap());
}
