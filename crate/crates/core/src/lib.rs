//! Twisted Alexander data, nonabelian representations and their
//! deformations for knot groups given by presentations.

pub mod cochain;
pub mod cohomology;
pub mod deform;
pub mod error;
pub mod exactalg;
pub mod foxcalc;
pub mod knotio;
pub mod numeric;
pub mod pipeline;
pub mod repbuilder;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Field, Rational};

pub type QPoly = exactalg::Poly<Rational>;
pub type QLaurent = exactalg::Laurent<Rational>;
pub type QMatrix = exactalg::Matrix<Rational>;
pub type AlgMatrix = exactalg::Matrix<exactalg::Alg>;
pub type CMatrix = nalgebra::DMatrix<num_complex::Complex64>;
