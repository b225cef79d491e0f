//! The certificate suite behind `rtoep verify`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rational_toeplitz::operator::{cayley_pullback, cokernel_basis, kernel_basis};
use rational_toeplitz::spectral::{classify, winding_number};
use rational_toeplitz::symmetric::{deficiency, verify_plus_identity};
use rational_toeplitz::verify::{apply_residual, deficiency_residual, kernel_residual, orthogonality_residual};
use rational_toeplitz::{Complex64, DeficiencySign, Error, ErrorKind, RationalSymbol, Result};
use serde::Serialize;

pub const CERTIFICATE_TOL: f64 = 1e-8;
pub const DEFICIENCY_TOL: f64 = 1e-6;
const WINDING_SAMPLES: usize = 4096;
const EXTRA_SHIFTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Level {
    Quick,
    Full,
}

impl Level {
    pub fn as_str(self) -> &'static str {
        match self {
            Level::Quick => "quick",
            Level::Full => "full",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub residual: Option<f64>,
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Error class when `status` is `error`.
    #[serde(skip)]
    pub kind: Option<ErrorKind>,
}

impl Check {
    fn measured(name: String, res: Result<f64>, tol: f64) -> Self {
        match res {
            Ok(r) => Check {
                name,
                status: if r < tol { Status::Pass } else { Status::Fail },
                residual: Some(r),
                tolerance: Some(tol),
                detail: None,
                kind: None,
            },
            Err(e) => Self::failed(name, &e),
        }
    }

    fn failed(name: String, e: &Error) -> Self {
        Check {
            name,
            status: Status::Error,
            residual: None,
            tolerance: None,
            detail: Some(e.to_string()),
            kind: Some(e.kind()),
        }
    }

    fn skipped(name: &str, why: &str) -> Self {
        Check {
            name: name.to_string(),
            status: Status::Skipped,
            residual: None,
            tolerance: None,
            detail: Some(why.to_string()),
            kind: None,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VerifyDoc {
    pub level: &'static str,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl VerifyDoc {
    /// 0 when everything passed or was skipped; 3 when a certificate
    /// failed or the theory checks raised; otherwise the worst error class.
    pub fn exit_code(&self) -> i32 {
        let theory = self
            .checks
            .iter()
            .any(|c| c.status == Status::Fail || c.kind == Some(ErrorKind::Theory));
        if theory {
            return 3;
        }
        let kinds: Vec<ErrorKind> = self.checks.iter().filter_map(|c| c.kind).collect();
        if kinds.contains(&ErrorKind::Numerical) {
            2
        } else if kinds.contains(&ErrorKind::Input) {
            1
        } else {
            0
        }
    }
}

struct Sizes {
    kernel: usize,
    cokernel: usize,
    deficiency: usize,
    pullback: usize,
}

fn sizes(level: Level) -> Sizes {
    match level {
        Level::Quick => Sizes {
            kernel: 32,
            cokernel: 16,
            deficiency: 16,
            pullback: 16,
        },
        Level::Full => Sizes {
            kernel: 64,
            cokernel: 32,
            deficiency: 32,
            pullback: 32,
        },
    }
}

/// Shift values for the index check: zero, plus random points around the
/// symbol curve at the full level.
fn shifts(sym: &RationalSymbol, level: Level, seed: u64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0)];
    if level == Level::Full {
        let bound = (0..256)
            .map(|k| sym.eval(Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 256.0)).norm())
            .fold(0.5, f64::max)
            .min(10.0)
            * 1.2;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..EXTRA_SHIFTS {
            out.push(Complex64::new(rng.gen_range(-bound..bound), rng.gen_range(-bound..bound)));
        }
    }
    out
}

fn index_check(sym: &RationalSymbol, lambda: Complex64) -> Check {
    let name = format!("index_vs_winding[{}{:+}i]", lambda.re, lambda.im);
    let report = match classify(sym, lambda) {
        Ok(r) => r,
        Err(e) => return Check::failed(name, &e),
    };
    if report.on_curve || report.ill_conditioned {
        return Check::skipped(&name, "shift on or too close to the symbol curve");
    }
    let Some(index) = report.index else {
        return Check::skipped(&name, "operator not Fredholm at this shift");
    };
    match winding_number(sym, lambda, WINDING_SAMPLES) {
        Ok(w) => Check {
            name,
            status: if index == -w { Status::Pass } else { Status::Fail },
            residual: Some((index + w).abs() as f64),
            tolerance: Some(0.0),
            detail: Some(format!("index {index}, winding {w}")),
            kind: None,
        },
        Err(e) => Check::failed(name, &e),
    }
}

pub fn run(sym: &RationalSymbol, level: Level, seed: u64) -> VerifyDoc {
    let n = sizes(level);
    let mut checks = Vec::new();

    for (k, u) in kernel_basis(sym).iter().enumerate() {
        checks.push(Check::measured(format!("kernel[{k}]"), kernel_residual(sym, u, n.kernel), CERTIFICATE_TOL));
        if level == Level::Full && sym.is_bounded() {
            checks.push(Check::measured(format!("apply[{k}]"), apply_residual(sym, u, 512), CERTIFICATE_TOL));
        }
    }
    for (k, v) in cokernel_basis(sym).iter().enumerate() {
        checks.push(Check::measured(
            format!("cokernel[{k}]"),
            orthogonality_residual(sym, v, n.cokernel),
            CERTIFICATE_TOL,
        ));
    }

    if sym.is_bounded() {
        checks.extend(shifts(sym, level, seed).into_iter().map(|l| index_check(sym, l)));
    } else {
        checks.push(Check::skipped("index_vs_winding", "symbol has poles on the circle"));
    }

    if sym.is_real_on_circle() {
        match deficiency(sym) {
            Ok(d) => {
                for (sign, label, basis) in [
                    (DeficiencySign::Plus, "plus", &d.basis_plus),
                    (DeficiencySign::Minus, "minus", &d.basis_minus),
                ] {
                    for (k, v) in basis.iter().enumerate() {
                        checks.push(Check::measured(
                            format!("deficiency_{label}[{k}]"),
                            deficiency_residual(sym, v, sign, n.deficiency),
                            DEFICIENCY_TOL,
                        ));
                    }
                }
            }
            Err(e) => checks.push(Check::failed("deficiency".into(), &e)),
        }
        checks.push(Check::measured(
            "identity".into(),
            verify_plus_identity(sym).map(|f| f.residual),
            DEFICIENCY_TOL,
        ));
    } else {
        checks.push(Check::skipped("deficiency", "symbol is not real on the circle"));
    }

    checks.push(Check::measured(
        "pullback".into(),
        cayley_pullback(sym, None).map(|pb| pb.sampling_residual(sym, n.pullback)),
        CERTIFICATE_TOL,
    ));

    let passed = checks.iter().all(|c| matches!(c.status, Status::Pass | Status::Skipped));
    VerifyDoc {
        level: level.as_str(),
        seed,
        passed,
        checks,
    }
}
