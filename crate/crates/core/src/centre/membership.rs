//! The polynomial side of the centre: W-invariance, the line conditions Z_α,
//! and t_g.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::clifford::t_h_element;
use crate::error::{Error, Result};
use crate::exactalg::{Monomial, Polynomial, RatMatrix, Rational};
use crate::rootdata::{AlgebraKind, Root};

/// Why a polynomial is not in Z.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MembershipWitness {
    /// φ changes under swapping coordinates k and k+1 (0-based); the
    /// difference s·φ - φ is attached.
    NotSymmetric { swap: usize, difference: Polynomial },
    /// On h_ᾱ = 0, φ(λ - cα) depends on c; the c-dependent part is attached.
    LineDependence { root: Root, remainder: Polynomial },
}

impl fmt::Display for MembershipWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MembershipWitness::NotSymmetric { swap, difference } => {
                write!(f, "not invariant under h{} <-> h{}: difference {difference}", swap + 1, swap + 2)
            }
            MembershipWitness::LineDependence { root, remainder } => {
                let mut names = Polynomial::default_names(remainder.arity() - 1);
                names.push("c".into());
                write!(f, "not constant along {root} on h_bar = 0: {}", remainder.fmt_with(&names))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipReport {
    pub member: bool,
    pub witness: Option<MembershipWitness>,
}

/// The n coordinates h_1..h_n as polynomials in the kind's variables
/// (h_n = -(h_1+…+h_{n-1}) for pq/psq).
fn coordinates(kind: AlgebraKind, arity: usize) -> Vec<Polynomial> {
    let n = kind.rank();
    (0..n)
        .map(|k| {
            if k < kind.arity() {
                Polynomial::var(arity, k)
            } else {
                -Polynomial::linear(
                    &(0..arity).map(|v| if v < kind.arity() { Rational::one() } else { Rational::zero() }).collect::<Vec<_>>(),
                    Rational::zero(),
                )
            }
        })
        .collect()
}

/// s_k·φ - φ for the transposition of coordinates k, k+1.
fn swap_difference(kind: AlgebraKind, phi: &Polynomial, k: usize) -> Result<Polynomial> {
    let c = coordinates(kind, kind.arity());
    let images: Vec<Polynomial> = (0..kind.arity())
        .map(|m| {
            let t = if m == k {
                k + 1
            } else if m == k + 1 {
                k
            } else {
                m
            };
            c[t].clone()
        })
        .collect();
    Ok(&phi.compose(&images)? - phi)
}

/// φ restricted to the line through a point of h_ᾱ = 0 in direction -α; the
/// extra last variable is the line parameter c.
pub fn line_restriction(kind: AlgebraKind, phi: &Polynomial, alpha: Root) -> Result<Polynomial> {
    let arity = kind.arity();
    let ext = arity + 1;
    let c = Polynomial::var(ext, arity);
    let n = kind.rank();
    let (i, j) = (alpha.i, alpha.j);
    let mut point: Vec<Polynomial> = (0..n).map(|k| if k < arity { Polynomial::var(ext, k) } else { Polynomial::zero(ext) }).collect();
    if kind.is_projective() {
        // keep the remaining coordinates on the trace-zero plane
        let others: Vec<usize> = (0..n).filter(|&k| k != i && k != j).collect();
        let k0 = *others.last().ok_or_else(|| Error::InvalidKind(format!("{kind} has no free coordinate")))?;
        let mut s = Polynomial::zero(ext);
        for &k in others.iter().filter(|&&k| k != k0) {
            s = &s + &Polynomial::var(ext, k);
        }
        point[k0] = -s;
    }
    let hi = Polynomial::var(ext, i);
    point[i] = &hi - &c;
    point[j] = &c - &hi;
    phi.compose(&point[..arity])
}

/// Terms of `p` that involve the last variable.
fn dependent_part(p: &Polynomial) -> Polynomial {
    let last = p.arity() - 1;
    Polynomial::from_terms(
        p.arity(),
        p.terms().filter(|(m, _)| m.exps()[last] > 0).map(|(m, c)| (m.exps().to_vec(), c.clone())),
    )
}

/// φ ∈ S(h)^W ∩ ⋂_α Z_α, decided by substitution.
pub fn z_membership(kind: AlgebraKind, phi: &Polynomial) -> Result<MembershipReport> {
    if phi.arity() != kind.arity() {
        return Err(Error::ArityMismatch { expected: kind.arity(), found: phi.arity() });
    }
    for k in 0..kind.rank() - 1 {
        let d = swap_difference(kind, phi, k)?;
        if !d.is_zero() {
            return Ok(MembershipReport { member: false, witness: Some(MembershipWitness::NotSymmetric { swap: k, difference: d }) });
        }
    }
    for alpha in kind.positive_roots() {
        let rem = dependent_part(&line_restriction(kind, phi, alpha)?);
        if !rem.is_zero() {
            return Ok(MembershipReport {
                member: false,
                witness: Some(MembershipWitness::LineDependence { root: alpha, remainder: rem }),
            });
        }
    }
    Ok(MembershipReport { member: true, witness: None })
}

/// Monomial symmetric polynomials in h_1..h_n of total degree ≤ d, in the
/// kind's variables.
pub fn symmetric_basis(kind: AlgebraKind, d: u32) -> Result<Vec<Polynomial>> {
    let n = kind.rank();
    let mut groups: BTreeMap<Vec<u32>, Polynomial> = BTreeMap::new();
    let mut exps = vec![0u32; n];
    fn walk(pos: usize, left: u32, exps: &mut Vec<u32>, out: &mut BTreeMap<Vec<u32>, Polynomial>) {
        if pos == exps.len() {
            let mut key = exps.clone();
            key.sort_unstable_by(|a, b| b.cmp(a));
            let n = exps.len();
            let mut p = Polynomial::zero(n);
            p.add_term(Monomial::new(exps.clone()), Rational::one());
            let e = out.entry(key).or_insert_with(|| Polynomial::zero(n));
            *e = &*e + &p;
            return;
        }
        for k in 0..=left {
            exps[pos] = k;
            walk(pos + 1, left - k, exps, out);
        }
        exps[pos] = 0;
    }
    walk(0, d, &mut exps, &mut groups);
    let coords = coordinates(kind, kind.arity());
    let mut out: Vec<Polynomial> = Vec::new();
    for p in groups.into_values() {
        out.push(p.compose(&coords)?);
    }
    Ok(independent(out))
}

/// Drops polynomials that are linear combinations of earlier ones.
fn independent(polys: Vec<Polynomial>) -> Vec<Polynomial> {
    let mut index: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    let mut ech = crate::exactalg::SparseEchelon::new(0);
    let mut kept = Vec::new();
    for p in polys {
        let row: Vec<(usize, Rational)> = p
            .terms()
            .map(|(m, c)| {
                let next = index.len();
                (*index.entry(m.exps().to_vec()).or_insert(next), c.clone())
            })
            .collect();
        if ech.insert(row) {
            kept.push(p);
        }
    }
    kept
}

/// Basis of Z in degree ≤ d: W-invariants whose line restrictions are free of c.
pub fn centre_subspace(kind: AlgebraKind, d: u32) -> Result<Vec<Polynomial>> {
    let basis = symmetric_basis(kind, d)?;
    // columns: basis elements; rows: (root, monomial) of the c-dependent parts
    let mut rows: BTreeMap<(Root, Vec<u32>), Vec<Rational>> = BTreeMap::new();
    for (col, b) in basis.iter().enumerate() {
        for alpha in kind.positive_roots() {
            for (m, c) in dependent_part(&line_restriction(kind, b, alpha)?).terms() {
                rows.entry((alpha, m.exps().to_vec())).or_insert_with(|| vec![Rational::zero(); basis.len()])[col] += c;
            }
        }
    }
    let null = if rows.is_empty() {
        (0..basis.len())
            .map(|k| (0..basis.len()).map(|j| if j == k { Rational::one() } else { Rational::zero() }).collect())
            .collect()
    } else {
        RatMatrix::from_rows(rows.into_values().collect()).nullspace()
    };
    Ok(null
        .into_iter()
        .map(|v| {
            v.iter()
                .zip(&basis)
                .fold(Polynomial::zero(kind.arity()), |acc, (c, b)| &acc + &b.scale(c))
        })
        .collect())
}

/// t_g = t_h · (Π_α h_ᾱ)².
pub fn t_g(kind: AlgebraKind) -> Result<Polynomial> {
    let (_, th) = t_h_element(kind)?;
    let n = kind.rank();
    let mut prod = Polynomial::one(n);
    for a in kind.positive_roots() {
        prod = &prod * &a.h_alpha_bar(n);
    }
    let prod = kind.project(&prod)?;
    Ok(&th * &prod.pow(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::Family;

    fn h(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, i)
    }

    #[test]
    fn power_sums_and_rejections() {
        let q2 = AlgebraKind::new(Family::Q, 2).unwrap();
        let p3 = &h(2, 0).pow(3) + &h(2, 1).pow(3);
        assert!(z_membership(q2, &p3).unwrap().member);
        let sq = &h(2, 0).pow(2) + &h(2, 1).pow(2);
        let r = z_membership(q2, &sq).unwrap();
        assert!(!r.member);
        assert!(matches!(r.witness, Some(MembershipWitness::LineDependence { .. })));
        let r = z_membership(q2, &h(2, 0)).unwrap();
        assert!(matches!(r.witness, Some(MembershipWitness::NotSymmetric { swap: 0, .. })));
    }

    #[test]
    fn tg_small() {
        let sq2 = AlgebraKind::new(Family::SQ, 2).unwrap();
        let s = &h(2, 0) + &h(2, 1);
        let t = t_g(sq2).unwrap();
        assert!(t == s.pow(3) || t == -s.pow(3));
        let q2 = AlgebraKind::new(Family::Q, 2).unwrap();
        let t = t_g(q2).unwrap();
        let expect = &(&h(2, 0) * &h(2, 1)) * &s.pow(2);
        assert!(t == expect || t == -expect);
    }

    #[test]
    fn projective_membership() {
        let pq3 = AlgebraKind::new(Family::PQ, 3).unwrap();
        // h1^3 + h2^3 + h3^3 with h3 = -(h1+h2)
        let c = coordinates(pq3, 2);
        let p3 = c.iter().fold(Polynomial::zero(2), |acc, x| &acc + &x.pow(3));
        assert!(z_membership(pq3, &p3).unwrap().member);
        let p2 = c.iter().fold(Polynomial::zero(2), |acc, x| &acc + &x.pow(2));
        assert!(!z_membership(pq3, &p2).unwrap().member);
    }

    #[test]
    fn degree_two_centre_of_q2() {
        let q2 = AlgebraKind::new(Family::Q, 2).unwrap();
        assert_eq!(centre_subspace(q2, 2).unwrap().len(), 3);
    }
}
