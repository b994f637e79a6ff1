//! Constructive spectral theory for finite-dimensional normed *-algebras.

pub mod elemcalc;
pub mod error;
pub mod gelfand;
pub mod gnsrep;
pub mod linops;
pub mod specanalysis;
pub mod specmeasure;
pub mod staralg;
pub mod unbounded;
pub mod vonneumann;

pub use error::{Error, Result, Violation};
pub use linops::{CMat, EigenDecomp, C64, DEFAULT_TOL};
pub use staralg::{AlgElement, NormTag, RawAlgebra, StarAlgebra, StarElement};
