//! Exact algebra: polynomials, Laurent polynomials, dense matrices, Smith
//! normal form and towers of simple algebraic extensions of the rationals.

pub mod factor;
pub mod laurent;
pub mod matrix;
pub mod poly;
pub mod snf;
pub mod tower;

pub use laurent::Laurent;
pub use matrix::{Echelon, Matrix, Solution};
pub use poly::Poly;
pub use snf::{smith_normal_form, smith_normal_form_laurent, SmithForm};
pub use tower::{on_branches, Alg, AsSplit, Branches, NonInvertible, Splitting, Tower, TowerError};
