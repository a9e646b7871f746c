//! Sparse exact multivariate polynomials and the algebra built on them:
//! circuit expansion, randomized identity testing, exact matrices and
//! Sylvester resultants.

mod expand;
mod matrix;
mod parse;
mod poly;
mod resultant;

pub use expand::{
    expand, expand_all, expand_output, expand_with, probabilistic_equal, probabilistic_equal_poly,
    IdentityVerdict, ParamMode, DEFAULT_TERM_BUDGET,
};
pub use matrix::{bareiss_determinant, bareiss_rank, ExactRing, Matrix};
pub use poly::{cmp_var_names, Monomial, Poly};
pub use resultant::{resultant, sylvester_matrix};
