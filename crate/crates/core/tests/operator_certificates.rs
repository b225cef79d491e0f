use rational_toeplitz::factorization::{random_symbol, Part};
use rational_toeplitz::operator::{
    analyze, cayley_pullback, cokernel_basis, domain_factor, inverse_cayley, is_fredholm, kernel_basis, Pullback,
};
use rational_toeplitz::spectral::winding_number;
use rational_toeplitz::verify::{apply_residual, kernel_residual, orthogonality_residual, toeplitz_matrix};
use rational_toeplitz::{Complex64, Poly, RationalSymbol};

const SEEDS: u64 = 100;

fn symbols() -> impl Iterator<Item = (u64, RationalSymbol)> {
    (0..SEEDS).map(|seed| (seed, random_symbol(8, 8, seed).expect("generator")))
}

#[test]
fn kernel_elements_are_annihilated() {
    for (seed, sym) in symbols() {
        for u in kernel_basis(&sym) {
            let r = kernel_residual(&sym, &u, 64).unwrap();
            assert!(r < 1e-8, "seed {seed}: kernel residual {r:e} for {sym}");
        }
    }
}

#[test]
fn cokernel_elements_are_orthogonal_to_the_range() {
    for (seed, sym) in symbols() {
        for v in cokernel_basis(&sym) {
            let r = orthogonality_residual(&sym, &v, 32).unwrap();
            assert!(r < 1e-8, "seed {seed}: orthogonality residual {r:e} for {sym}");
        }
    }
}

#[test]
fn bounded_kernel_elements_pass_the_matrix_check() {
    for (seed, sym) in symbols().filter(|(_, s)| s.is_bounded()) {
        for u in kernel_basis(&sym) {
            let r = apply_residual(&sym, &u, 512).unwrap();
            assert!(r < 1e-8, "seed {seed}: apply residual {r:e}");
        }
    }
}

#[test]
fn fredholm_operators_have_kernel_or_cokernel_trivial() {
    for (seed, sym) in symbols() {
        let report = analyze(&sym);
        if report.fredholm {
            assert_eq!(report.dim_ker * report.dim_coker, 0, "seed {seed}");
            assert_eq!(report.index, Some(report.dim_ker as i64 - report.dim_coker as i64));
        } else {
            assert_eq!(report.index, None);
        }
    }
}

#[test]
fn bounded_index_is_minus_winding() {
    let mut checked = 0;
    for (seed, sym) in symbols().filter(|(_, s)| s.is_bounded() && is_fredholm(s)) {
        let w = winding_number(&sym, Complex64::new(0.0, 0.0), 4096).unwrap();
        assert_eq!(analyze(&sym).index, Some(-w), "seed {seed}: {sym}");
        checked += 1;
    }
    assert!(checked >= 10, "only {checked} bounded Fredholm symbols");
}

#[test]
fn basis_elements_lie_in_the_hardy_space() {
    for (seed, sym) in symbols() {
        let eps = sym.tolerances().eps_circle;
        for f in kernel_basis(&sym).iter().chain(&cokernel_basis(&sym)) {
            assert!(f.is_in_hardy_space(eps, 1e-8).unwrap(), "seed {seed}");
        }
    }
}

#[test]
fn kernel_numerators_carry_the_domain_factor() {
    for (seed, sym) in symbols() {
        let s = domain_factor(&sym);
        let factors = sym.derived_factors(Part::Denominator);
        assert_eq!(factors.on_bar_ex.deg(), s.deg() + sym.denominator_split().deg_outside());
        for u in kernel_basis(&sym) {
            let (_, rem) = u.num.div_rem(&s);
            assert!(rem.norm_inf() <= 1e-8 * u.num.norm_inf().max(1.0), "seed {seed}");
        }
    }
}

#[test]
fn matrix_sections_are_toeplitz() {
    for (seed, sym) in symbols().filter(|(_, s)| s.is_bounded()).take(20) {
        let m = toeplitz_matrix(&sym, 24).unwrap();
        for j in 1..24 {
            for k in 1..24 {
                assert_eq!(m.entry(j, k), m.entry(j - 1, k - 1), "seed {seed}");
            }
        }
    }
}

#[test]
fn constant_symbol_has_trivial_analysis() {
    let sym = RationalSymbol::new(Poly::constant(Complex64::new(2.0, -1.0)), Poly::one()).unwrap();
    let report = analyze(&sym);
    assert_eq!((report.dim_ker, report.dim_coker, report.index), (0, 0, Some(0)));
}

#[test]
fn pullback_matches_the_symbol_on_the_line() {
    for seed in 0..50 {
        let sym = random_symbol(8, 8, 700 + seed).unwrap();
        let pb = cayley_pullback(&sym, None).unwrap();
        let r = pb.sampling_residual(&sym, 32);
        assert!(r < 1e-8, "seed {seed}: residual {r:e} for {sym}");
    }
}

/// The product form `omega(rot) (x + i)^pad prod (x - C^-1(a / rot))` over
/// the roots of `R`, divided by the same over `S`.
fn product_form(sym: &RationalSymbol, alpha: f64, x: f64) -> Complex64 {
    let rot = Complex64::from_polar(1.0, alpha);
    let x = Complex64::new(x, 0.0);
    let r = sym.numerator_split().all_roots().flat();
    let s = sym.denominator_split().all_roots().flat();
    let n = r.len().max(s.len());
    let side = |roots: &[Complex64]| {
        let pad = (x + Complex64::i()).powu((n - roots.len()) as u32);
        roots.iter().fold(pad, |acc, a| acc * (x - inverse_cayley(a / rot)))
    };
    sym.eval(rot) * side(&r) / side(&s)
}

#[test]
fn pullback_agrees_with_the_product_formula() {
    for seed in 0..50 {
        let sym = random_symbol(8, 8, 700 + seed).unwrap();
        let pb = cayley_pullback(&sym, None).unwrap();
        let n = sym.numerator().deg().max(sym.denominator().deg());
        assert_eq!((pb.p.deg(), pb.q.deg()), (n, n));
        assert_eq!(pb.q.leading(), Complex64::new(1.0, 0.0));
        for x in Pullback::sample_points(32) {
            let a = pb.eval(Complex64::new(x, 0.0));
            let b = product_form(&sym, pb.alpha, x);
            assert!((a - b).norm() <= 1e-9 * a.norm().max(1.0), "seed {seed}, x {x}: {a} vs {b}");
        }
    }
}

#[test]
fn pullback_roots_are_cayley_images() {
    for seed in 0..50 {
        let sym = random_symbol(5, 5, 800 + seed).unwrap();
        let pb = cayley_pullback(&sym, None).unwrap();
        let rot = Complex64::from_polar(1.0, pb.alpha);
        let n = sym.numerator().deg().max(sym.denominator().deg());
        for (poly, split) in [(&pb.p, sym.numerator_split()), (&pb.q, sym.denominator_split())] {
            let mut want: Vec<Complex64> = split.all_roots().flat().iter().map(|a| inverse_cayley(a / rot)).collect();
            want.resize(n, -Complex64::i());
            let got = poly.roots(1e-8).unwrap().flat();
            assert_eq!(got.len(), want.len(), "seed {seed}");
            for w in &want {
                let nearest = got.iter().map(|g| (g - w).norm() / w.norm().max(1.0)).fold(f64::INFINITY, f64::min);
                assert!(nearest < 1e-5, "seed {seed}: root {w} missing from {poly}");
            }
        }
    }
}
