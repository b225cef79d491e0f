use num_complex::Complex64;
use rayon::prelude::*;

use super::laurent::laurent_exact;
use crate::error::{Error, Result};
use crate::factorization::RationalSymbol;
use crate::operator::RationalFun;

pub const MAX_TOEPLITZ_ORDER: usize = 4096;

/// Finite section `(c_{j-k})_{0 <= j, k < n}` of `T_omega`, stored by
/// diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzMatrix {
    n: usize,
    /// `c_d` for `d = -(n-1) ..= n-1`, at index `d + n - 1`.
    diagonals: Vec<Complex64>,
}

impl ToeplitzMatrix {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        assert!(j < self.n && k < self.n, "entry ({j}, {k}) outside order {}", self.n);
        self.diagonals[j + self.n - 1 - k]
    }

    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        (0..self.n)
            .map(|j| (0..self.n).map(|k| self.entry(j, k)).collect())
            .collect()
    }

    /// Matrix-vector product, rows computed in parallel.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .into_par_iter()
            .map(|j| x.iter().enumerate().map(|(k, xk)| self.entry(j, k) * xk).sum())
            .collect()
    }
}

pub fn toeplitz_matrix(sym: &RationalSymbol, n: usize) -> Result<ToeplitzMatrix> {
    if !sym.is_bounded() {
        return Err(Error::UnboundedSymbol);
    }
    if n == 0 || n > MAX_TOEPLITZ_ORDER {
        return Err(Error::InvalidInput(format!(
            "matrix order {n} outside 1..={MAX_TOEPLITZ_ORDER}"
        )));
    }
    let omega = RationalFun::new(sym.numerator().clone(), sym.denominator().clone());
    let reach = n as i64 - 1;
    let w = laurent_exact(&omega, -reach, reach)?;
    Ok(ToeplitzMatrix {
        n,
        diagonals: w.coeffs,
    })
}

/// `|(T_N u)_{0..N/2}| / |u_{0..N}|`. Rows near the truncation edge are
/// dropped because they see the missing tail of `u`.
pub fn apply_residual(sym: &RationalSymbol, u: &RationalFun, n: usize) -> Result<f64> {
    let matrix = toeplitz_matrix(sym, n)?;
    let u_hat = laurent_exact(u, 0, n as i64 - 1)?;
    let image = matrix.apply(&u_hat.coeffs);
    let head: f64 = image[..n / 2].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let norm: f64 = u_hat.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::InvalidInput("zero test vector".into()));
    }
    Ok(head / norm)
}
