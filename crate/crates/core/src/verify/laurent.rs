//! Laurent coefficients on the unit circle of rational functions without
//! circle poles, by sampling (FFT) and by partial fractions.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::operator::RationalFun;
use crate::polynomial::{Poly, RootSet, DEFAULT_ROOT_TOL, ZERO};

/// Poles closer than this to the circle are rejected.
pub const POLE_MARGIN: f64 = 1e-3;
pub const FFT_MIN_SAMPLES: usize = 256;
pub const FFT_MAX_SAMPLES: usize = 1 << 20;
/// Successive FFT windows must agree to this, relative to `max(1, max |c|)`.
pub const FFT_AGREEMENT: f64 = 1e-11;

/// Coefficients `c_n` for `n_min <= n <= n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierWindow {
    pub n_min: i64,
    pub n_max: i64,
    pub coeffs: Vec<Complex64>,
}

impl FourierWindow {
    fn zeros(n_min: i64, n_max: i64) -> Self {
        FourierWindow {
            n_min,
            n_max,
            coeffs: vec![ZERO; (n_max - n_min + 1) as usize],
        }
    }

    /// `c_n`, zero outside the window.
    pub fn get(&self, n: i64) -> Complex64 {
        if n < self.n_min || n > self.n_max {
            ZERO
        } else {
            self.coeffs[(n - self.n_min) as usize]
        }
    }

    fn slot(&mut self, n: i64) -> Option<&mut Complex64> {
        (self.n_min..=self.n_max)
            .contains(&n)
            .then(|| &mut self.coeffs[(n - self.n_min) as usize])
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> {
        self.n_min..=self.n_max
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient difference against another window over the
    /// union of the index ranges.
    pub fn max_difference(&self, other: &FourierWindow) -> f64 {
        let lo = self.n_min.min(other.n_min);
        let hi = self.n_max.max(other.n_max);
        (lo..=hi)
            .map(|n| (self.get(n) - other.get(n)).norm())
            .fold(0.0, f64::max)
    }
}

fn check_window(n_min: i64, n_max: i64) -> Result<()> {
    if n_min > n_max {
        return Err(Error::InvalidInput(format!("empty Laurent window {n_min}..{n_max}")));
    }
    if n_max - n_min >= (FFT_MAX_SAMPLES / 2) as i64 {
        return Err(Error::InvalidInput(format!("Laurent window {n_min}..{n_max} is too wide")));
    }
    Ok(())
}

fn poles(f: &RationalFun) -> Result<RootSet> {
    let roots = if f.den.is_constant() {
        RootSet::constant(f.den.leading())
    } else {
        f.den.roots(DEFAULT_ROOT_TOL)?
    };
    for r in roots.entries() {
        let distance = (r.value.norm() - 1.0).abs();
        if distance <= POLE_MARGIN {
            return Err(Error::PoleTooClose {
                distance,
                margin: POLE_MARGIN,
            });
        }
    }
    Ok(roots)
}

/// Coefficients from `M` equispaced samples, `M` doubling until two
/// successive windows agree.
pub fn laurent_fft(f: &RationalFun, n_min: i64, n_max: i64) -> Result<FourierWindow> {
    check_window(n_min, n_max)?;
    poles(f)?;
    let span = (n_max - n_min + 1) as usize;
    let mut m = FFT_MIN_SAMPLES.max((2 * span).next_power_of_two());
    let mut planner = FftPlanner::new();
    let mut previous = sampled_window(&mut planner, f, m, n_min, n_max);
    let mut change = f64::INFINITY;
    while m < FFT_MAX_SAMPLES {
        m *= 2;
        let current = sampled_window(&mut planner, f, m, n_min, n_max);
        change = current.max_difference(&previous);
        if change <= FFT_AGREEMENT * current.max_abs().max(1.0) {
            return Ok(current);
        }
        previous = current;
    }
    Err(Error::NoConvergence { change, samples: m })
}

fn sampled_window(planner: &mut FftPlanner<f64>, f: &RationalFun, m: usize, n_min: i64, n_max: i64) -> FourierWindow {
    let mut buf: Vec<Complex64> = (0..m)
        .map(|k| f.eval(Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64)))
        .collect();
    planner.plan_fft_forward(m).process(&mut buf);
    let mut w = FourierWindow::zeros(n_min, n_max);
    for n in n_min..=n_max {
        let k = n.rem_euclid(m as i64) as usize;
        *w.slot(n).unwrap() = buf[k] / m as f64;
    }
    w
}

/// Coefficients by long division and partial fractions. A pole `b` of
/// order `k` contributes `1/(z - b)^k`, expanded in `z` when `|b| > 1`
/// and in `1/z` when `|b| < 1`.
pub fn laurent_exact(f: &RationalFun, n_min: i64, n_max: i64) -> Result<FourierWindow> {
    check_window(n_min, n_max)?;
    let roots = poles(f)?;
    let mut w = FourierWindow::zeros(n_min, n_max);
    let (quot, rem) = f.num.div_rem(&f.den);
    for (k, c) in quot.coeffs().iter().enumerate() {
        if let Some(slot) = w.slot(k as i64) {
            *slot += c;
        }
    }
    if rem.is_zero() {
        return Ok(w);
    }
    for (idx, pole) in roots.entries().iter().enumerate() {
        let others: Vec<Complex64> = roots
            .entries()
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != idx)
            .flat_map(|(_, r)| std::iter::repeat_n(r.value, r.multiplicity))
            .collect();
        let cofactor = Poly::from_root_list(&others, roots.leading());
        let m = pole.multiplicity;
        let taylor = series_quotient(&rem.taylor_shift(pole.value), &cofactor.taylor_shift(pole.value), m);
        for k in 1..=m {
            add_pole_power(&mut w, pole.value, k, taylor[m - k]);
        }
    }
    Ok(w)
}

/// First `order` Taylor coefficients of `a(t) / d(t)`, `d(0) != 0`.
fn series_quotient(a: &Poly, d: &Poly, order: usize) -> Vec<Complex64> {
    let ac = |i: usize| a.coeffs().get(i).copied().unwrap_or(ZERO);
    let dc = |i: usize| d.coeffs().get(i).copied().unwrap_or(ZERO);
    let mut g: Vec<Complex64> = Vec::with_capacity(order);
    for i in 0..order {
        let mut acc = ac(i);
        for j in 1..=i {
            acc -= dc(j) * g[i - j];
        }
        g.push(acc / dc(0));
    }
    g
}

/// Adds `amp / (z - b)^k` to the window.
fn add_pole_power(w: &mut FourierWindow, b: Complex64, k: usize, amp: Complex64) {
    let ki = k as i64;
    if b == ZERO {
        if let Some(slot) = w.slot(-ki) {
            *slot += amp;
        }
        return;
    }
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    for n in w.n_min..=w.n_max {
        let term = if b.norm() > 1.0 {
            if n < 0 {
                continue;
            }
            sign * binomial(n + ki - 1, ki - 1) * b.powi(-(n + ki) as i32)
        } else {
            if n > -ki {
                continue;
            }
            binomial(-n - 1, ki - 1) * b.powi(-(n + ki) as i32)
        };
        *w.slot(n).unwrap() += amp * term;
    }
}

fn binomial(n: i64, k: i64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::ONE;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn geometric(b: f64) -> RationalFun {
        RationalFun::new(Poly::one(), Poly::linear(c(b, 0.0)))
    }

    #[test]
    fn monomial() {
        let f = RationalFun::polynomial(Poly::monomial(ONE, 2));
        for w in [laurent_fft(&f, -4, 4).unwrap(), laurent_exact(&f, -4, 4).unwrap()] {
            for n in -4..=4 {
                let want = if n == 2 { 1.0 } else { 0.0 };
                assert!((w.get(n) - c(want, 0.0)).norm() < 1e-14, "n = {n}");
            }
        }
    }

    #[test]
    fn exterior_pole() {
        let f = geometric(2.0);
        let fft = laurent_fft(&f, -5, 10).unwrap();
        let exact = laurent_exact(&f, -5, 10).unwrap();
        for n in -5..=10 {
            let want = if n >= 0 { -(2f64.powi(-(n as i32) - 1)) } else { 0.0 };
            assert!((exact.get(n).re - want).abs() < 1e-15, "n = {n}");
            assert!((fft.get(n).re - want).abs() < 1e-12, "n = {n}");
        }
        assert!(fft.max_difference(&exact) < 1e-10);
    }

    #[test]
    fn interior_pole() {
        let f = geometric(0.5);
        let fft = laurent_fft(&f, -10, 5).unwrap();
        let exact = laurent_exact(&f, -10, 5).unwrap();
        for n in -10..=5 {
            let want = if n <= -1 { 0.5f64.powi(-(n as i32) - 1) } else { 0.0 };
            assert!((exact.get(n).re - want).abs() < 1e-15, "n = {n}");
        }
        assert!(fft.max_difference(&exact) < 1e-10);
    }

    #[test]
    fn multiple_and_origin_poles() {
        // (z^3 + 1) / (z^2 (z - 2)^2 (z - 0.3i)^3)
        let den = &(&Poly::monomial(ONE, 2) * &Poly::linear(c(2.0, 0.0)).pow(2)) * &Poly::linear(c(0.0, 0.3)).pow(3);
        let f = RationalFun::new(Poly::from_real(&[1.0, 0.0, 0.0, 1.0]), den);
        let fft = laurent_fft(&f, -30, 30).unwrap();
        let exact = laurent_exact(&f, -30, 30).unwrap();
        assert!(fft.max_difference(&exact) < 1e-10 * exact.max_abs().max(1.0));
    }

    #[test]
    fn improper_function() {
        // (z^4 + 1)/(z - 3): quotient z^3 + 3z^2 + 9z + 27
        let f = RationalFun::new(Poly::from_real(&[1.0, 0.0, 0.0, 0.0, 1.0]), Poly::linear(c(3.0, 0.0)));
        let fft = laurent_fft(&f, -3, 8).unwrap();
        let exact = laurent_exact(&f, -3, 8).unwrap();
        assert!(fft.max_difference(&exact) < 1e-10 * exact.max_abs());
    }

    #[test]
    fn poles_near_circle_rejected() {
        let f = geometric(1.0005);
        assert!(matches!(laurent_fft(&f, 0, 3), Err(Error::PoleTooClose { .. })));
        assert!(matches!(laurent_exact(&f, 0, 3), Err(Error::PoleTooClose { .. })));
    }

    #[test]
    fn slow_decay_still_converges() {
        let f = geometric(1.01);
        let fft = laurent_fft(&f, 0, 20).unwrap();
        let exact = laurent_exact(&f, 0, 20).unwrap();
        assert!(fft.max_difference(&exact) < 1e-10);
    }

    #[test]
    fn window_validation() {
        let f = geometric(2.0);
        assert!(matches!(laurent_exact(&f, 3, 2), Err(Error::InvalidInput(_))));
    }
}
