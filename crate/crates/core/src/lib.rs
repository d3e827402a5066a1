//! Strong summability of trigonometric Fourier series: partial sums, strong
//! means, Gabisonia-type pointwise characteristics, and an empirical lab
//! that checks the associated inequalities on a corpus of test functions.

pub mod characteristics;
pub mod corpus;
pub mod error;
pub mod fourier;
pub mod lab;
pub mod quadrature;
pub mod strong_means;

pub use corpus::{builtin_corpus, by_name, TestFunction};
pub use error::{Error, Result};
pub use fourier::FourierSeries;
pub use quadrature::QuadratureSpec;
