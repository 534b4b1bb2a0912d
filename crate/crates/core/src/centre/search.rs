//! Brute-force (anti)centre search in a bounded PBW filtration degree.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::clifford::CliffordElement;
use crate::enveloping::{PbwMonomial, Uea, UeaElement};
use crate::error::{Error, Result};
use crate::exactalg::{Monomial, RatMatrix, Rational, SparseEchelon};
use crate::rootdata::AlgebraKind;

/// Largest number of candidate monomials a search will set up.
pub const MAX_SEARCH_MONOMIALS: usize = 6000;

#[derive(Clone, Debug)]
pub struct InvariantSearchResult {
    pub kind: AlgebraKind,
    pub degree: u32,
    pub twisted: bool,
    pub basis: Vec<UeaElement>,
    pub parities: Vec<bool>,
    pub hc_images: Vec<CliffordElement>,
}

/// Weight-zero PBW monomials of degree ≤ d.
fn weight_zero_monomials(uea: &Uea, d: u32) -> Result<Vec<PbwMonomial>> {
    let basis = uea.basis();
    let dim = basis.len();
    let weights: Vec<Vec<i64>> = (0..dim).map(|g| basis.weight(g)).collect();
    let n = uea.kind().rank();
    let mut out = Vec::new();
    let mut exps = vec![0u16; dim];
    let mut w = vec![0i64; n];
    #[allow(clippy::too_many_arguments)]
    fn walk(
        g: usize,
        left: u32,
        exps: &mut Vec<u16>,
        w: &mut Vec<i64>,
        weights: &[Vec<i64>],
        odd: &dyn Fn(usize) -> bool,
        out: &mut Vec<PbwMonomial>,
    ) -> Result<()> {
        if g == exps.len() {
            if w.iter().all(|&x| x == 0) {
                out.push(PbwMonomial::from_exps(exps.clone()));
                if out.len() > MAX_SEARCH_MONOMIALS {
                    return Err(Error::ResourceBound(format!("more than {MAX_SEARCH_MONOMIALS} candidate monomials")));
                }
            }
            return Ok(());
        }
        let top = if odd(g) { left.min(1) } else { left };
        for e in 0..=top {
            exps[g] = e as u16;
            for (x, y) in w.iter_mut().zip(&weights[g]) {
                *x += y * e as i64;
            }
            walk(g + 1, left - e, exps, w, weights, odd, out)?;
            for (x, y) in w.iter_mut().zip(&weights[g]) {
                *x -= y * e as i64;
            }
        }
        exps[g] = 0;
        Ok(())
    }
    walk(0, d, &mut exps, &mut w, &weights, &|g| basis.is_odd(g), &mut out)?;
    Ok(out)
}

/// x·u - s·u·x with s = (-1)^{p(x)p(u)}, or (-1)^{p(x)(p(u)+1)} when twisted.
fn bracket_with(uea: &Uea, x: &UeaElement, px: bool, u: &UeaElement, pu: bool, twisted: bool) -> UeaElement {
    let odd_sign = if twisted { px && !pu } else { px && pu };
    let mut out = uea.mul(x, u);
    let s = if odd_sign { Rational::one() } else { -Rational::one() };
    out.add_scaled(&uea.mul(u, x), &s);
    out
}

/// Solves (ad x)z = 0, or (ad' x)z = 0 when twisted, for all generators x over
/// weight-zero z of filtration degree ≤ d.
pub fn invariant_search(kind: AlgebraKind, d: u32, twisted: bool) -> Result<InvariantSearchResult> {
    if kind.is_projective() {
        return Err(Error::InvalidKind(format!("searches run on q(n) and sq(n), not {kind}")));
    }
    let uea = Uea::new(kind);
    let monos = weight_zero_monomials(&uea, d)?;
    let gens: Vec<(UeaElement, bool)> = (0..uea.dim()).map(|g| (uea.gen(g), uea.basis().is_odd(g))).collect();
    let mut basis = Vec::new();
    let mut parities = Vec::new();
    for parity in [false, true] {
        let cands: Vec<&PbwMonomial> = monos.iter().filter(|m| uea.parity(m) == parity).collect();
        if cands.is_empty() {
            continue;
        }
        let mut rows: HashMap<(usize, PbwMonomial), Vec<(usize, Rational)>> = HashMap::new();
        for (col, m) in cands.iter().enumerate() {
            let u = UeaElement::monomial((*m).clone(), Rational::one());
            for (gi, (x, px)) in gens.iter().enumerate() {
                let img = bracket_with(&uea, x, *px, &u, parity, twisted);
                for (mono, c) in img.terms() {
                    rows.entry((gi, mono.clone())).or_default().push((col, c.clone()));
                }
            }
        }
        let mut ech = SparseEchelon::new(cands.len());
        let mut keys: Vec<_> = rows.keys().cloned().collect();
        keys.sort();
        for k in keys {
            ech.insert(rows.remove(&k).unwrap());
        }
        for v in ech.nullspace() {
            let mut z = UeaElement::zero();
            for (c, m) in v.iter().zip(&cands) {
                if !c.is_zero() {
                    z.add_term((*m).clone(), c.clone());
                }
            }
            basis.push(z);
            parities.push(parity);
        }
    }
    // independent re-check of every solution
    for (z, &pz) in basis.iter().zip(&parities) {
        for (x, px) in &gens {
            if !bracket_with(&uea, x, *px, z, pz, twisted).is_zero() {
                return Err(Error::Shape(format!("search returned a non-invariant element {}", uea.fmt_element(z))));
            }
        }
    }
    let hc_images = basis.iter().map(|z| uea.hc_project(z)).collect();
    Ok(InvariantSearchResult { kind, degree: d, twisted, basis, parities, hc_images })
}

/// Clifford elements as coordinate vectors over (mask, monomial).
fn coordinates(elems: &[&CliffordElement]) -> (Vec<(u32, Monomial)>, Vec<Vec<Rational>>) {
    let mut keys: Vec<(u32, Monomial)> = Vec::new();
    let mut index: HashMap<(u32, Monomial), usize> = HashMap::new();
    for e in elems {
        for (mask, p) in e.terms() {
            for (m, _) in p.terms() {
                let key = (mask, m.clone());
                if !index.contains_key(&key) {
                    index.insert(key.clone(), keys.len());
                    keys.push(key);
                }
            }
        }
    }
    let vecs = elems
        .iter()
        .map(|e| {
            let mut v = vec![Rational::zero(); keys.len()];
            for (mask, p) in e.terms() {
                for (m, c) in p.terms() {
                    v[index[&(mask, m.clone())]] = c.clone();
                }
            }
            v
        })
        .collect();
    (keys, vecs)
}

/// Dimension of the Q-span of some Clifford elements.
pub fn span_dimension(elems: &[CliffordElement]) -> usize {
    let refs: Vec<&CliffordElement> = elems.iter().collect();
    let (_, vecs) = coordinates(&refs);
    if vecs.is_empty() {
        return 0;
    }
    RatMatrix::from_rows(vecs).rank()
}

/// A combination of the search basis whose HC image equals `target`, if any.
pub fn preimage_of(result: &InvariantSearchResult, target: &CliffordElement) -> Option<UeaElement> {
    let mut refs: Vec<&CliffordElement> = result.hc_images.iter().collect();
    refs.push(target);
    let (keys, vecs) = coordinates(&refs);
    let k = result.hc_images.len();
    // columns are the images and -target
    let rows: Vec<Vec<Rational>> = (0..keys.len())
        .map(|r| (0..=k).map(|c| if c == k { -vecs[c][r].clone() } else { vecs[c][r].clone() }).collect())
        .collect();
    let null = if rows.is_empty() {
        return None;
    } else {
        RatMatrix::from_rows(rows).nullspace()
    };
    let v = null.into_iter().find(|v| !v[k].is_zero())?;
    let scale = v[k].recip();
    let mut out = UeaElement::zero();
    for (c, z) in v[..k].iter().zip(&result.basis) {
        out.add_scaled(z, &(c * &scale));
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::Family;

    #[test]
    fn degree_one_contains_identity() {
        let q2 = AlgebraKind::new(Family::Q, 2).unwrap();
        let r = invariant_search(q2, 1, false).unwrap();
        // constants and h1 + h2
        assert_eq!(r.basis.len(), 2);
        assert_eq!(span_dimension(&r.hc_images), 2);
    }

    #[test]
    fn projective_is_refused() {
        let pq3 = AlgebraKind::new(Family::PQ, 3).unwrap();
        assert!(matches!(invariant_search(pq3, 1, false), Err(Error::InvalidKind(_))));
    }
}
