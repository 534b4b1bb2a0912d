//! Shapovalov forms and determinants for the Q-type Lie superalgebras
//! q(n), sq(n), pq(n), psq(n).

pub mod acceptance;
pub mod centre;
pub mod clifford;
pub mod enveloping;
pub mod error;
pub mod exactalg;
pub mod modrep;
pub mod polyparse;
pub mod rootdata;
pub mod shapovalov;

pub use clifford::{CliffordAlgebra, CliffordElement, CliffordPointData};
pub use error::{Error, Result};
pub use exactalg::{PolyMatrix, Polynomial, Rational};
pub use rootdata::{AlgebraKind, Basis, Family, GenIndex, Root, RootVector, Species, Weight};
pub use polyparse::parse_poly;
