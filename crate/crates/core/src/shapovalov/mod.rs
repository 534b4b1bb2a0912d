//! Partitions, weight bases, the Shapovalov matrix B_ν and its determinant.

pub mod closedform;
pub mod matrix;
pub mod partitions;
pub mod verify;

pub use closedform::{closed_form_det, closed_form_norm, normalize_linear, Factored};
pub use matrix::{basis_labels, pbw_weight_basis, shapovalov_matrix, Label, ShapovalovMatrix, Side};
pub use partitions::{partitions, shift, tau, tau_alpha, tau_alpha_signed, tau_signed, PartitionVector};
pub use verify::{leading_claim, proportional, verify_factorization, verify_matrix, DetMethod, ShapovalovReport};

use crate::enveloping::Uea;
use crate::error::Result;
use crate::rootdata::{AlgebraKind, Family, RootVector};

/// Outcome of comparing two related algebras at one ν.
#[derive(Clone, Debug)]
pub struct CrossCheck {
    pub nu: RootVector,
    pub norm_q: Factored,
    pub norm_sq: Factored,
    pub norms_equal: bool,
    /// det(pq/psq) equals det(q/sq) after h_n := -(h_1+…+h_{n-1}), when n >= 3
    pub projective_ok: Option<bool>,
}

/// Norm(q(n)) = Norm(sq(n)) from computed determinants, and the pq/psq
/// substitution identity when n >= 3.
pub fn cross_algebra_check(nu: &RootVector, n: usize) -> Result<CrossCheck> {
    let q = AlgebraKind::new(Family::Q, n)?;
    let sq = AlgebraKind::new(Family::SQ, n)?;
    let rq = verify_factorization(&Uea::new(q), q, nu)?;
    let rsq = verify_factorization(&Uea::new(sq), sq, nu)?;
    let projective_ok = if n >= 3 {
        let mut ok = true;
        for (family, report) in [(Family::PQ, &rq), (Family::PSQ, &rsq)] {
            let kind = AlgebraKind::new(family, n)?;
            let rp = verify_factorization(&Uea::new(kind), kind, nu)?;
            let mut substituted = Factored::one(kind.arity());
            substituted.scalar = report.det.scalar.clone();
            for (f, m) in &report.det.factors {
                substituted.push(&kind.project(f)?, *m);
            }
            ok &= substituted.same_up_to_scalar(&rp.det) && substituted.scalar == rp.det.scalar;
        }
        Some(ok)
    } else {
        None
    };
    Ok(CrossCheck {
        nu: nu.clone(),
        norms_equal: rq.norm.same_up_to_scalar(&rsq.norm),
        norm_q: rq.norm,
        norm_sq: rsq.norm,
        projective_ok,
    })
}
