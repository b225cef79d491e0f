//! Toeplitz operators on the Hardy space `H^2` of the unit circle whose
//! symbols are rational functions `R/S`, possibly with poles on the circle.

pub mod error;
pub mod factorization;
pub mod operator;
pub mod polynomial;
pub mod spectral;
pub mod symmetric;
pub mod verify;

pub use error::{Error, ErrorKind, Result};
pub use num_complex::Complex64;
pub use polynomial::{Poly, Root, RootSet};
pub use factorization::{CircleSplit, Part, RationalSymbol, Tolerances};
pub use operator::{AnalysisReport, Pullback, RationalFun};
pub use spectral::{Dim, Grid, NodeResult, Portrait, SpectralPart, SpectrumReport};
pub use symmetric::{DeficiencyReport, SymmetryClass};
pub use verify::{DeficiencySign, FourierWindow, ToeplitzMatrix};
