//! Centre and anticentre: membership in Z, t_g, bounded searches and the
//! recursive construction of central elements.

pub mod kac;
pub mod membership;
pub mod search;

pub use kac::{central_truncation, KacConstruction, KacTerm};
pub use membership::{centre_subspace, line_restriction, symmetric_basis, t_g, z_membership, MembershipReport, MembershipWitness};
pub use search::{invariant_search, preimage_of, span_dimension, InvariantSearchResult, MAX_SEARCH_MONOMIALS};
