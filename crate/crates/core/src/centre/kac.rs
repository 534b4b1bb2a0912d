//! Recursive construction of a central element z = Σ z_ν from φ ∈ Z,
//! truncated at a given ν.

use std::collections::HashMap;

use num_traits::One;

use super::membership::z_membership;
use crate::clifford::CliffordElement;
use crate::enveloping::{PbwMonomial, Uea, UeaElement};
use crate::error::{Error, Result};
use crate::exactalg::{det_fraction_free, PolyMatrix, Polynomial, Rational};
use crate::rootdata::{AlgebraKind, GenIndex, RootVector, Species};
use crate::shapovalov::{partitions, PartitionVector};

#[derive(Clone, Debug)]
pub struct KacTerm {
    pub nu: RootVector,
    pub z: UeaElement,
    /// det of the linear system solved at this ν
    pub system_det: Polynomial,
}

#[derive(Clone, Debug)]
pub struct KacConstruction {
    pub kind: AlgebraKind,
    pub phi: Polynomial,
    pub terms: Vec<KacTerm>,
    /// (Σ_{μ≤ν} z_μ)v = vφ held on every basis vector v of each M_{-ν}
    pub residual_zero: bool,
}

impl KacConstruction {
    pub fn total(&self) -> UeaElement {
        let mut z = UeaElement::zero();
        for t in &self.terms {
            z.add_scaled(&t.z, &One::one());
        }
        z
    }
}

fn root_monomial(uea: &Uea, p: &PartitionVector, positive: bool) -> Result<PbwMonomial> {
    let roots = uea.kind().positive_roots();
    let (even, odd) = if positive { (Species::E, Species::OddE) } else { (Species::F, Species::OddF) };
    let mut exps = vec![0u16; uea.dim()];
    for (k, &r) in roots.iter().enumerate() {
        exps[uea.basis().index_of(GenIndex::root(even, r))?] = p.even[k] as u16;
        if p.odd[k] {
            exps[uea.basis().index_of(GenIndex::root(odd, r))?] = 1;
        }
    }
    Ok(PbwMonomial::from_exps(exps))
}

fn mono(m: &PbwMonomial) -> UeaElement {
    UeaElement::monomial(m.clone(), One::one())
}

/// Writes an element of U(b⁻)_{-ν} as Σ_k x_k r_k with r_k ∈ R.
fn expand_right(uea: &Uea, a: &UeaElement, xs: &[PbwMonomial]) -> Result<Vec<CliffordElement>> {
    let n = uea.kind().rank();
    let index: HashMap<&PbwMonomial, usize> = xs.iter().enumerate().map(|(k, x)| (x, k)).collect();
    let mut out = vec![CliffordElement::zero(n); xs.len()];
    for (m, c) in a.terms() {
        let (neg, cartan) =
            uea.split_cartan(m).ok_or_else(|| Error::Shape("positive generator survived reduction".into()))?;
        let k = *index
            .get(&neg)
            .ok_or_else(|| Error::Shape(format!("monomial {} has the wrong weight", uea.fmt_monomial(m))))?;
        out[k].add_scaled(&cartan, &Polynomial::constant(n, c.clone()));
    }
    Ok(out)
}

/// Solves p·M = t over Frac(A) by Cramer's rule, requiring polynomial answers.
fn solve_row(m: &PolyMatrix, det: &Polynomial, t: &[Polynomial], nu: &RootVector) -> Result<Vec<Polynomial>> {
    let size = m.rows();
    if t.iter().all(Polynomial::is_zero) {
        return Ok(vec![Polynomial::zero(m.arity()); size]);
    }
    (0..size)
        .map(|u| {
            let mut rows: Vec<Vec<Polynomial>> = (0..size).map(|r| m.row(r).to_vec()).collect();
            rows[u] = t.to_vec();
            let num = det_fraction_free(&PolyMatrix::from_rows(m.arity(), rows)?)?;
            num.divide_exact(det).map_err(|_| {
                Error::DivisibilityFailure(format!("at nu = {nu}: {num} is not divisible by {det}"))
            })
        })
        .collect()
}

/// Builds z_ν for all ν ≤ `cutoff` (componentwise), in order of height, from a
/// polynomial φ in Z.
pub fn central_truncation(kind: AlgebraKind, phi: &Polynomial, cutoff: &RootVector) -> Result<KacConstruction> {
    if kind.is_projective() {
        return Err(Error::InvalidKind(format!("the construction runs on q(n) and sq(n), not {kind}")));
    }
    kind.check_root_vector(cutoff)?;
    let report = z_membership(kind, phi)?;
    if let Some(w) = report.witness {
        return Err(Error::MembershipFailure(w.to_string()));
    }
    let uea = Uea::new(kind);
    let cl = uea.clifford();
    let n = kind.rank();
    let masks = 1u32 << kind.odd_cartan_dim();
    let phi_elem = uea.from_clifford(&CliffordElement::scalar(phi.clone()));

    let mut nus: Vec<RootVector> = RootVector::up_to_height(n, cutoff.height())
        .into_iter()
        .filter(|nu| nu.0.iter().zip(&cutoff.0).all(|(a, b)| a <= b))
        .collect();
    nus.sort_by_key(RootVector::height);

    let mut lower = UeaElement::zero();
    let mut terms = Vec::new();
    let mut residual_zero = true;
    for nu in nus {
        let parts = partitions(&nu);
        let xs: Vec<PbwMonomial> = parts.iter().map(|p| root_monomial(&uea, p, false)).collect::<Result<_>>()?;
        let ys: Vec<PbwMonomial> = parts.iter().map(|p| root_monomial(&uea, p, true)).collect::<Result<_>>()?;
        let tau = xs.len();

        // G[l][i] = HC(y_l x_i)
        let g: Vec<Vec<CliffordElement>> =
            ys.iter().map(|y| xs.iter().map(|x| uea.hc_of_word_times(&y.word(), &mono(x))).collect()).collect();
        // coordinates of H_m·G[l][i]
        let size = tau * masks as usize;
        let mut big = PolyMatrix::zeros(size, size, n);
        for l in 0..tau {
            for m in 0..masks {
                let hm = CliffordElement::basis(n, m);
                for (i, gli) in g[l].iter().enumerate() {
                    let prod = cl.mul(&hm, gli);
                    for (m2, p) in prod.terms() {
                        big.set(l * masks as usize + m as usize, i * masks as usize + m2 as usize, p.clone());
                    }
                }
            }
        }
        let det = det_fraction_free(&big)?;
        if det.is_zero() {
            return Err(Error::DivisibilityFailure(format!("system at nu = {nu} is singular")));
        }

        // T[i] = x_i φ - z_{<ν} x_i in U(g)/U(g)n⁺, expanded as Σ_k x_k T[i][k]
        let mut t_cols: Vec<Vec<CliffordElement>> = Vec::with_capacity(tau);
        for x in &xs {
            let xe = mono(x);
            let mut rhs = uea.mul(&xe, &phi_elem);
            rhs.add_scaled(&uea.act(&lower, &xe), &-Rational::one());
            t_cols.push(expand_right(&uea, &rhs, &xs)?);
        }

        let mut z = UeaElement::zero();
        for k in 0..tau {
            let t: Vec<Polynomial> = (0..size)
                .map(|idx| t_cols[idx / masks as usize][k].coeff((idx % masks as usize) as u32))
                .collect();
            let p = solve_row(&big, &det, &t, &nu)?;
            for l in 0..tau {
                let mut r = CliffordElement::zero(n);
                for m in 0..masks {
                    let c = &p[l * masks as usize + m as usize];
                    if !c.is_zero() {
                        r.add(m, c.clone());
                    }
                }
                if r.is_zero() {
                    continue;
                }
                let piece = uea.mul(&uea.mul(&mono(&xs[k]), &uea.from_clifford(&r)), &mono(&ys[l]));
                z.add_scaled(&piece, &One::one());
            }
        }
        lower.add_scaled(&z, &One::one());

        // z_{≤ν} v = v φ on every x_i H_I
        for x in &xs {
            for m in 0..masks {
                let v = uea.mul(&mono(x), &uea.from_clifford(&CliffordElement::basis(n, m)));
                let mut res = uea.act(&lower, &v);
                res.add_scaled(&uea.mul(&v, &phi_elem), &-Rational::one());
                if !res.is_zero() {
                    residual_zero = false;
                }
            }
        }
        terms.push(KacTerm { nu, z, system_det: det });
    }
    Ok(KacConstruction { kind, phi: phi.clone(), terms, residual_zero })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::Family;

    #[test]
    fn constant_gives_constant() {
        let sq2 = AlgebraKind::new(Family::SQ, 2).unwrap();
        let k = central_truncation(sq2, &Polynomial::one(2), &RootVector(vec![2])).unwrap();
        assert!(k.residual_zero);
        assert_eq!(k.terms[0].z, UeaElement::monomial(PbwMonomial::one(Uea::new(sq2).dim()), One::one()));
        assert!(k.terms[1..].iter().all(|t| t.z.is_zero()));
    }

    #[test]
    fn identity_matrix_is_its_own_lift() {
        let q2 = AlgebraKind::new(Family::Q, 2).unwrap();
        let s = &Polynomial::var(2, 0) + &Polynomial::var(2, 1);
        let k = central_truncation(q2, &s, &RootVector(vec![2])).unwrap();
        assert!(k.residual_zero);
        assert!(k.terms[1..].iter().all(|t| t.z.is_zero()));
    }

    #[test]
    fn cubic_power_sum_on_sq2() {
        let sq2 = AlgebraKind::new(Family::SQ, 2).unwrap();
        let p = &Polynomial::var(2, 0).pow(3) + &Polynomial::var(2, 1).pow(3);
        let k = central_truncation(sq2, &p, &RootVector(vec![3])).unwrap();
        assert!(k.residual_zero);
        assert_eq!(k.terms.len(), 4);
        assert!(!k.terms[1].z.is_zero());
    }

    #[test]
    fn non_member_is_refused() {
        let q2 = AlgebraKind::new(Family::Q, 2).unwrap();
        let p = &Polynomial::var(2, 0).pow(2) + &Polynomial::var(2, 1).pow(2);
        assert!(matches!(central_truncation(q2, &p, &RootVector(vec![1])), Err(Error::MembershipFailure(_))));
    }
}
