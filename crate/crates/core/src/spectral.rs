//! Spectral classification of `T_omega - lambda I`.
//!
//! The shifted symbol is `omega - lambda = (R - lambda S)/S`. With
//! `s_in = deg S_in`, `rl_in = deg (R - lambda S)_in` and
//! `rl_in_bar = rl_in + deg (R - lambda S)_on`:
//!
//! | part        | condition                                                   |
//! |-------------|-------------------------------------------------------------|
//! | resolvent   | `lambda` off `omega(T)` and `s_in == rl_in`                 |
//! | point       | `rl_in_bar < s_in`                                          |
//! | residual    | `s_in < rl_in`                                              |
//! | continuous  | `lambda` on `omega(T)` and `rl_in <= s_in <= rl_in_bar`     |

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::factorization::{CircleSplit, RationalSymbol};
use crate::polynomial::Poly;

/// Upper bound on the number of portrait nodes.
pub const MAX_PORTRAIT_NODES: usize = 4_000_000;
/// Largest sample count tried by [`winding_number`].
pub const MAX_WINDING_SAMPLES: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpectralPart {
    Resolvent,
    Point,
    Continuous,
    Residual,
}

impl SpectralPart {
    pub fn as_str(self) -> &'static str {
        match self {
            SpectralPart::Resolvent => "resolvent",
            SpectralPart::Point => "point",
            SpectralPart::Continuous => "continuous",
            SpectralPart::Residual => "residual",
        }
    }
}

/// Dimension of a kernel or cokernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dim {
    Finite(usize),
    /// Only for `T_c - c I = 0` with a constant symbol `c`.
    Infinite,
}

impl Dim {
    pub fn finite(self) -> Option<usize> {
        match self {
            Dim::Finite(n) => Some(n),
            Dim::Infinite => None,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Dim::Finite(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Degrees {
    pub s_in: usize,
    pub rl_in: usize,
    pub rl_in_bar: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub lambda: Complex64,
    pub on_curve: bool,
    pub fredholm: bool,
    pub part: SpectralPart,
    pub regular_value: bool,
    pub dim_ker: Dim,
    pub dim_coker: Dim,
    pub index: Option<i64>,
    pub degrees: Degrees,
    pub ill_conditioned: bool,
}

impl SpectrumReport {
    /// Fills every field from the degree data and checks the partition.
    pub fn from_degrees(lambda: Complex64, degrees: Degrees, ill_conditioned: bool) -> Self {
        let Degrees {
            s_in,
            rl_in,
            rl_in_bar,
        } = degrees;
        assert!(rl_in <= rl_in_bar, "inconsistent degree data {degrees:?}");
        let on_curve = rl_in_bar > rl_in;
        let point = rl_in_bar < s_in;
        let residual = s_in < rl_in;
        let part = if point {
            SpectralPart::Point
        } else if residual {
            SpectralPart::Residual
        } else if on_curve {
            SpectralPart::Continuous
        } else {
            SpectralPart::Resolvent
        };
        let fredholm = !on_curve;
        let report = SpectrumReport {
            lambda,
            on_curve,
            fredholm,
            part,
            regular_value: !on_curve && s_in <= rl_in,
            dim_ker: Dim::Finite(s_in.saturating_sub(rl_in_bar)),
            dim_coker: Dim::Finite(rl_in.saturating_sub(s_in)),
            index: fredholm.then(|| s_in as i64 - rl_in as i64),
            degrees,
            ill_conditioned,
        };
        report.check_partition();
        report
    }

    /// Report for a constant symbol `c`.
    fn constant(lambda: Complex64, hit: bool) -> Self {
        let degrees = Degrees {
            s_in: 0,
            rl_in: 0,
            rl_in_bar: 0,
        };
        if hit {
            SpectrumReport {
                lambda,
                on_curve: true,
                fredholm: false,
                part: SpectralPart::Point,
                regular_value: false,
                dim_ker: Dim::Infinite,
                dim_coker: Dim::Infinite,
                index: None,
                degrees,
                ill_conditioned: false,
            }
        } else {
            Self::from_degrees(lambda, degrees, false)
        }
    }

    fn check_partition(&self) {
        let Degrees {
            s_in,
            rl_in,
            rl_in_bar,
        } = self.degrees;
        let flags = [
            !self.on_curve && s_in == rl_in,
            rl_in_bar < s_in,
            self.on_curve && rl_in <= s_in && s_in <= rl_in_bar,
            s_in < rl_in,
        ];
        assert_eq!(flags.iter().filter(|f| **f).count(), 1, "partition violated: {self:?}");
        let expected = match flags.iter().position(|f| *f) {
            Some(0) => SpectralPart::Resolvent,
            Some(1) => SpectralPart::Point,
            Some(2) => SpectralPart::Continuous,
            _ => SpectralPart::Residual,
        };
        assert_eq!(self.part, expected);
        assert_eq!(self.fredholm, !self.on_curve);
        if self.fredholm {
            let (k, c) = (self.dim_ker.finite().unwrap(), self.dim_coker.finite().unwrap());
            assert_eq!(self.index, Some(k as i64 - c as i64));
            assert!(k == 0 || c == 0);
        }
    }
}

/// Numerator of `omega - lambda`, i.e. `R - lambda S`.
pub fn shifted_numerator(sym: &RationalSymbol, lambda: Complex64) -> Result<Poly> {
    let p = sym.numerator() - &sym.denominator().scale(lambda);
    if p.is_zero() {
        return Err(Error::ConstantSymbolShift);
    }
    Ok(p)
}

fn constant_hit(sym: &RationalSymbol, lambda: Complex64) -> Option<bool> {
    let c = sym.constant_value()?;
    Some((lambda - c).norm() <= sym.tolerances().eps_circle * c.norm().max(1.0))
}

fn shifted_split(sym: &RationalSymbol, lambda: Complex64) -> Result<CircleSplit> {
    let tol = sym.tolerances();
    CircleSplit::new(&shifted_numerator(sym, lambda)?, tol.eps_circle, tol.root_tol)
}

/// `lambda` lies on the curve `omega(T)`: `R - lambda S` has a root in the
/// circle band.
pub fn on_symbol_curve(sym: &RationalSymbol, lambda: Complex64) -> Result<bool> {
    if let Some(hit) = constant_hit(sym, lambda) {
        return Ok(hit);
    }
    Ok(shifted_split(sym, lambda)?.deg_on() > 0)
}

pub fn classify(sym: &RationalSymbol, lambda: Complex64) -> Result<SpectrumReport> {
    if let Some(hit) = constant_hit(sym, lambda) {
        return Ok(SpectrumReport::constant(lambda, hit));
    }
    let split = shifted_split(sym, lambda)?;
    let degrees = Degrees {
        s_in: sym.denominator_split().deg_inside(),
        rl_in: split.deg_inside(),
        rl_in_bar: split.deg_inside() + split.deg_on(),
    };
    Ok(SpectrumReport::from_degrees(
        lambda,
        degrees,
        split.ill_conditioned || sym.ill_conditioned(),
    ))
}

/// Rectangular grid of spectral parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    pub fn validate(&self) -> Result<()> {
        if self.nx == 0 || self.ny == 0 {
            return Err(Error::InvalidInput("grid needs nx, ny >= 1".into()));
        }
        if self.nx.saturating_mul(self.ny) > MAX_PORTRAIT_NODES {
            return Err(Error::InvalidInput(format!(
                "grid of {}x{} nodes exceeds {MAX_PORTRAIT_NODES}",
                self.nx, self.ny
            )));
        }
        if ![self.x0, self.x1, self.y0, self.y1].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidInput("grid bounds must be finite".into()));
        }
        Ok(())
    }

    fn coord(a: f64, b: f64, n: usize, i: usize) -> f64 {
        if n == 1 {
            a
        } else {
            a + (b - a) * i as f64 / (n - 1) as f64
        }
    }

    /// Node in column `i` (real part) and row `j` (imaginary part).
    pub fn node(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(
            Self::coord(self.x0, self.x1, self.nx, i),
            Self::coord(self.y0, self.y1, self.ny, j),
        )
    }
}

/// Outcome at one portrait node.
#[derive(Debug, Clone, PartialEq)]
pub enum NodeResult {
    Classified(SpectrumReport),
    Failed { lambda: Complex64, reason: String },
}

impl NodeResult {
    pub fn ill_conditioned(&self) -> bool {
        match self {
            NodeResult::Classified(r) => r.ill_conditioned,
            NodeResult::Failed { .. } => true,
        }
    }

    pub fn report(&self) -> Option<&SpectrumReport> {
        match self {
            NodeResult::Classified(r) => Some(r),
            NodeResult::Failed { .. } => None,
        }
    }

    pub fn lambda(&self) -> Complex64 {
        match self {
            NodeResult::Classified(r) => r.lambda,
            NodeResult::Failed { lambda, .. } => *lambda,
        }
    }
}

/// Classification over a grid, stored row-major with `j` (imaginary part)
/// as the outer index.
#[derive(Debug, Clone, PartialEq)]
pub struct Portrait {
    pub grid: Grid,
    pub nodes: Vec<NodeResult>,
}

impl Portrait {
    pub fn at(&self, i: usize, j: usize) -> &NodeResult {
        &self.nodes[j * self.grid.nx + i]
    }

    pub fn count(&self, part: SpectralPart) -> usize {
        self.nodes
            .iter()
            .filter(|n| n.report().map(|r| r.part) == Some(part))
            .count()
    }
}

/// Classifies every grid node. Nodes are independent and evaluated in
/// parallel; the result does not depend on scheduling.
pub fn portrait(sym: &RationalSymbol, grid: Grid) -> Result<Portrait> {
    grid.validate()?;
    let nodes = (0..grid.nx * grid.ny)
        .into_par_iter()
        .map(|k| {
            let lambda = grid.node(k % grid.nx, k / grid.nx);
            match classify(sym, lambda) {
                Ok(r) => NodeResult::Classified(r),
                Err(e) => NodeResult::Failed {
                    lambda,
                    reason: e.to_string(),
                },
            }
        })
        .collect();
    Ok(Portrait { grid, nodes })
}

/// Winding number of `theta -> omega(e^{i theta}) - lambda` around 0.
///
/// Computed as `wind(R - lambda S) - wind(S)`, each by unwrapping the phase
/// of the polynomial at `m_samples` equispaced circle points; the resolution
/// doubles until every phase step is below `pi/2`. Restricted to bounded
/// symbols.
pub fn winding_number(sym: &RationalSymbol, lambda: Complex64, m_samples: usize) -> Result<i64> {
    if !sym.is_bounded() {
        return Err(Error::OracleInapplicable("winding oracle needs a symbol without circle poles"));
    }
    if m_samples < 256 {
        return Err(Error::InvalidInput("winding oracle needs at least 256 samples".into()));
    }
    let shifted = shifted_numerator(sym, lambda)?;
    Ok(polynomial_winding(&shifted, m_samples)? - polynomial_winding(sym.denominator(), m_samples)?)
}

/// Winding number of `p` along the unit circle by phase unwrapping.
pub fn polynomial_winding(p: &Poly, m_samples: usize) -> Result<i64> {
    let mut m = m_samples;
    loop {
        if let Some(w) = try_winding(p, m) {
            return Ok(w);
        }
        if m >= MAX_WINDING_SAMPLES {
            return Err(Error::PhaseJump { samples: m });
        }
        m = (m * 2).min(MAX_WINDING_SAMPLES);
    }
}

fn try_winding(p: &Poly, m: usize) -> Option<i64> {
    let value = |k: usize| p.eval(Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64));
    let first = value(0);
    let mut prev = first;
    let mut total = 0.0;
    for k in 1..=m {
        let cur = if k == m { first } else { value(k) };
        if cur.norm() == 0.0 || prev.norm() == 0.0 {
            return None;
        }
        let step = (cur * prev.conj()).arg();
        if step.abs() > PI / 2.0 {
            return None;
        }
        total += step;
        prev = cur;
    }
    Some((total / (2.0 * PI)).round() as i64)
}
