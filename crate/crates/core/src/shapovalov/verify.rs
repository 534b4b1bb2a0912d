//! Determinant of B_ν against the closed form, plus leading-term and degree checks.

use num_traits::{One, Zero};

use super::closedform::{closed_form_det, closed_form_norm, Factored};
use super::matrix::{shapovalov_matrix, ShapovalovMatrix};
use super::partitions::partitions;
use crate::enveloping::Uea;
use crate::error::{Error, Result};
use crate::exactalg::{certify_linear_factorization, det_fraction_free, det_multimodular, PolyMatrix, Polynomial, Rational};
use crate::rootdata::{AlgebraKind, RootVector};

/// Blocks up to this size use symbolic elimination; larger ones the
/// multimodular certificate.
pub const SYMBOLIC_BLOCK_LIMIT: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetMethod {
    Symbolic,
    Multimodular,
}

#[derive(Clone, Debug)]
pub struct ShapovalovReport {
    pub kind: AlgebraKind,
    pub nu: RootVector,
    pub size: usize,
    pub matrix: PolyMatrix,
    /// det B_ν as certified: scalar · Π factor^multiplicity
    pub det: Factored,
    /// expanded det, when it was produced symbolically
    pub det_expanded: Option<Polynomial>,
    pub closed_form: Factored,
    pub scalar: Rational,
    /// Norm read off from the measured multiplicities
    pub norm: Factored,
    pub leading_ok: bool,
    pub degree_ok: bool,
    pub method: DetMethod,
}

/// det of one block as `scalar · Π factors^m` over the given factor list.
fn block_det(block: &PolyMatrix, factors: &[Polynomial]) -> Result<(Rational, Vec<u32>, Option<Polynomial>, DetMethod)> {
    if block.rows() != block.cols() {
        return Err(Error::Shape(format!("parity block is {}x{}", block.rows(), block.cols())));
    }
    if block.rows() <= SYMBOLIC_BLOCK_LIMIT {
        let det = det_fraction_free(block)?;
        let (scalar, mults) = strip_all(&det, factors)?;
        return Ok((scalar, mults, Some(det), DetMethod::Symbolic));
    }
    match certify_linear_factorization(block, factors) {
        Ok(cert) => Ok((cert.scalar, cert.multiplicities, None, DetMethod::Multimodular)),
        Err(Error::FactorizationMismatch(msg)) => {
            // reconstruct the full determinant for the witness
            let det = det_multimodular(block)?;
            let witness = match strip_all(&det, factors) {
                Err(Error::FactorizationMismatch(w)) => w,
                _ => det.to_string(),
            };
            Err(Error::FactorizationMismatch(format!("{msg}; quotient {witness}")))
        }
        Err(e) => Err(e),
    }
}

fn strip_all(det: &Polynomial, factors: &[Polynomial]) -> Result<(Rational, Vec<u32>)> {
    if det.is_zero() {
        return Err(Error::FactorizationMismatch("determinant is zero".into()));
    }
    let mut rest = det.clone();
    let mut mults = Vec::with_capacity(factors.len());
    for f in factors {
        let (k, q) = rest.strip_factor(f)?;
        mults.push(k);
        rest = q;
    }
    match rest.constant_value() {
        Some(c) => Ok((c, mults)),
        None => Err(Error::FactorizationMismatch(rest.to_string())),
    }
}

/// Σ_{m∈P(ν)} k_α and Σ k_ᾱ per root, by enumeration.
fn partition_sums(kind: AlgebraKind, nu: &RootVector) -> (Vec<u32>, Vec<u32>, u32) {
    let roots = kind.positive_roots().len();
    let mut even = vec![0u32; roots];
    let mut odd = vec![0u32; roots];
    let mut total = 0;
    for p in partitions(nu) {
        for k in 0..roots {
            even[k] += p.even[k];
            odd[k] += u32::from(p.odd[k]);
        }
        total += p.size();
    }
    (even, odd, total)
}

/// Π_α h_α^{Σ k_α} h_ᾱ^{Σ k_ᾱ}, the expected leading term of the Norm.
pub fn leading_claim(kind: AlgebraKind, nu: &RootVector) -> Result<Polynomial> {
    let n = kind.rank();
    let (even, odd, _) = partition_sums(kind, nu);
    let mut out = Polynomial::one(n);
    for (k, alpha) in kind.positive_roots().into_iter().enumerate() {
        out = &out * &alpha.h_alpha(n).pow(even[k]);
        out = &out * &alpha.h_alpha_bar(n).pow(odd[k]);
    }
    kind.project(&out)
}

/// Computes B_ν and its determinant and checks them against the closed form.
pub fn verify_factorization(uea: &Uea, kind: AlgebraKind, nu: &RootVector) -> Result<ShapovalovReport> {
    let sm = shapovalov_matrix(uea, kind, nu)?;
    verify_matrix(&sm)
}

pub fn verify_matrix(sm: &ShapovalovMatrix) -> Result<ShapovalovReport> {
    let kind = sm.kind;
    let nu = &sm.nu;
    let arity = kind.arity();
    let power = 1u32 << kind.odd_cartan_dim();
    let closed = closed_form_det(kind, nu)?;
    let factors: Vec<Polynomial> = closed.factors.iter().map(|(f, _)| f.clone()).collect();

    let mut scalar = Rational::from_integer(sm.block_sign().into());
    let mut mults = vec![0u32; factors.len()];
    let mut expanded = Some(Polynomial::constant(arity, scalar.clone()));
    let mut method = DetMethod::Symbolic;
    for block in sm.blocks() {
        let (c, m, det, how) = block_det(&block, &factors)?;
        scalar *= c;
        for (a, b) in mults.iter_mut().zip(&m) {
            *a += b;
        }
        expanded = match (expanded, det) {
            (Some(acc), Some(d)) => Some(&acc * &d),
            _ => None,
        };
        if how == DetMethod::Multimodular {
            method = how;
        }
    }
    let det = Factored {
        arity,
        scalar: scalar.clone(),
        factors: factors.iter().cloned().zip(mults.iter().copied()).filter(|(_, m)| *m > 0).collect(),
    };
    if !det.same_up_to_scalar(&closed) || scalar.is_zero() {
        return Err(Error::FactorizationMismatch(format!(
            "{kind} nu={nu}: det = {det}, closed form = {closed}"
        )));
    }
    let norm_factors = det
        .factors
        .iter()
        .map(|(f, m)| {
            if m % power == 0 {
                Ok((f.clone(), m / power))
            } else {
                Err(Error::FactorizationMismatch(format!("multiplicity {m} of {f} is not divisible by {power}")))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let norm = Factored { arity, scalar: Rational::one(), factors: norm_factors };

    let lead = match &expanded {
        Some(p) => p.leading_homogeneous()?,
        None => det.leading(),
    };
    let claim = leading_claim(kind, nu)?.pow(power);
    let leading_ok = proportional(&lead, &claim);
    let (_, _, total) = partition_sums(kind, nu);
    let deg = match &expanded {
        Some(p) => p.total_degree().unwrap_or(0),
        None => det.degree(),
    };
    let degree_ok = deg == power * total;

    Ok(ShapovalovReport {
        kind,
        nu: nu.clone(),
        size: sm.size(),
        matrix: sm.matrix.clone(),
        det,
        det_expanded: expanded,
        closed_form: closed_form_norm(kind, nu)?.pow(power),
        scalar,
        norm,
        leading_ok,
        degree_ok,
        method,
    })
}

/// a = c·b for some nonzero rational c.
pub fn proportional(a: &Polynomial, b: &Polynomial) -> bool {
    let (Some((ma, ca)), Some((mb, cb))) = (a.leading_term(), b.leading_term()) else {
        return a.is_zero() && b.is_zero();
    };
    ma == mb && *a == b.scale(&(ca / cb))
}
