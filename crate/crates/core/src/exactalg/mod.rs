//! Exact arithmetic: rationals, multivariate polynomials, matrices.

pub mod linalg;
pub mod matrix;
pub mod modular;
pub mod poly;
pub mod rational;

pub use linalg::{RatMatrix, SparseEchelon};
pub use matrix::{det_cofactor, det_fraction_free, rank_at_point, PolyMatrix};
pub use modular::{certify_linear_factorization, det_multimodular, DetCertificate};
pub use poly::{vanishing_order, Monomial, Polynomial};
pub use rational::{rat, ratio, Rational};
