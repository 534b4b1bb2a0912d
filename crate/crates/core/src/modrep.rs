//! Weight classification, simplicity of Weyl modules, coranks, characters and
//! Jantzen vanishing orders.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::clifford::clifford_point_data;
use crate::enveloping::Uea;
use crate::error::{Error, Result};
use crate::exactalg::rational::is_positive_integer;
use crate::exactalg::{det_fraction_free, rank_at_point, rat, vanishing_order, Polynomial, Rational};
use crate::rootdata::{coroot_values, AlgebraKind, Root, RootVector, Weight};
use crate::shapovalov::{shapovalov_matrix, shift, tau_alpha_signed, tau_signed, ShapovalovMatrix};

/// γ_ᾱ = {h_ᾱ = 0} or γ_{α,r} = {h_α = r}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HyperplaneId {
    CorootSum(Root),
    RootInteger(Root, u32),
}

impl HyperplaneId {
    pub fn root(&self) -> Root {
        match *self {
            HyperplaneId::CorootSum(a) | HyperplaneId::RootInteger(a, _) => a,
        }
    }

    pub fn contains(&self, lambda: &Weight) -> bool {
        let (ha, hb) = coroot_values(lambda, self.root());
        match *self {
            HyperplaneId::CorootSum(_) => hb.is_zero(),
            HyperplaneId::RootInteger(_, r) => ha == rat(r as i64),
        }
    }

    /// Height of the first ν at which this hyperplane enters det B_ν.
    pub fn first_height(&self) -> u32 {
        let a = self.root();
        let h = (a.j - a.i) as u32;
        match *self {
            HyperplaneId::CorootSum(_) => h,
            HyperplaneId::RootInteger(_, r) => r * h,
        }
    }

    /// Multiplicity of the hyperplane's linear form in det B_ν.
    pub fn det_multiplicity(&self, kind: AlgebraKind, nu: &RootVector) -> u64 {
        let n = kind.rank();
        let a = self.root();
        let shifted = |m: u32| shift(nu, a, m);
        let count = match *self {
            HyperplaneId::CorootSum(_) => tau_alpha_signed(n, &shifted(1), a),
            HyperplaneId::RootInteger(_, r) => tau_signed(n, &shifted(r)),
        };
        count << kind.odd_cartan_dim()
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            HyperplaneId::CorootSum(_) => "coroot-sum",
            HyperplaneId::RootInteger(..) => "root-integer",
        }
    }
}

impl fmt::Display for HyperplaneId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HyperplaneId::CorootSum(a) => write!(f, "h_bar{a} = 0"),
            HyperplaneId::RootInteger(a, r) => write!(f, "h{a} = {r}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightClass {
    Regular,
    Subregular(HyperplaneId),
    Degenerate(Vec<HyperplaneId>),
}

impl WeightClass {
    pub fn name(&self) -> &'static str {
        match self {
            WeightClass::Regular => "regular",
            WeightClass::Subregular(_) => "subregular",
            WeightClass::Degenerate(_) => "degenerate",
        }
    }

    pub fn hyperplanes(&self) -> Vec<HyperplaneId> {
        match self {
            WeightClass::Regular => Vec::new(),
            WeightClass::Subregular(h) => vec![*h],
            WeightClass::Degenerate(hs) => hs.clone(),
        }
    }
}

/// Every hyperplane of the family through λ.
pub fn hyperplanes_through(kind: AlgebraKind, lambda: &Weight) -> Result<Vec<HyperplaneId>> {
    kind.check_weight(lambda)?;
    let mut out = Vec::new();
    for a in kind.positive_roots() {
        let (ha, hb) = coroot_values(lambda, a);
        if hb.is_zero() {
            out.push(HyperplaneId::CorootSum(a));
        }
        if is_positive_integer(&ha) {
            let r = ha.to_integer().try_into().map_err(|_| Error::InvalidWeight(format!("h{a} = {ha} is too large")))?;
            out.push(HyperplaneId::RootInteger(a, r));
        }
    }
    Ok(out)
}

pub fn classify_weight(kind: AlgebraKind, lambda: &Weight) -> Result<WeightClass> {
    let mut hs = hyperplanes_through(kind, lambda)?;
    Ok(match hs.len() {
        0 => WeightClass::Regular,
        1 => WeightClass::Subregular(hs.remove(0)),
        _ => WeightClass::Degenerate(hs),
    })
}

/// N(λ) is simple iff h_ᾱ(λ) ≠ 0 and h_α(λ) ∉ Z_{>0} for every positive root.
pub fn is_simple_weyl(kind: AlgebraKind, lambda: &Weight) -> Result<bool> {
    kind.check_weight(lambda)?;
    Ok(kind.positive_roots().into_iter().all(|a| {
        let (ha, hb) = coroot_values(lambda, a);
        !hb.is_zero() && !is_positive_integer(&ha)
    }))
}

pub fn default_cutoff(kind: AlgebraKind) -> u32 {
    match kind.rank() {
        2 => 4,
        3 => 3,
        _ => 2,
    }
}

/// ρ'_i = 3^{i-1}, shifted to trace zero for pq/psq.
pub fn default_rho_prime(kind: AlgebraKind) -> Weight {
    let n = kind.rank();
    let mut v: Vec<Rational> = (0..n).map(|i| Rational::from_integer(3.into()).pow(i as i32)).collect();
    if kind.is_projective() {
        let mean = v.iter().sum::<Rational>() / rat(n as i64);
        v.iter_mut().for_each(|x| *x -= &mean);
    }
    Weight(v)
}

/// ρ' must not be parallel to any hyperplane: h_α(ρ') ≠ 0 and h_ᾱ(ρ') ≠ 0.
pub fn check_generic_vector(kind: AlgebraKind, rho: &Weight) -> Result<()> {
    kind.check_weight(rho).map_err(|e| Error::BadGenericVector(e.to_string()))?;
    for a in kind.positive_roots() {
        let (ha, hb) = coroot_values(rho, a);
        if ha.is_zero() {
            return Err(Error::BadGenericVector(format!("h{a}(rho') = 0")));
        }
        if hb.is_zero() {
            return Err(Error::BadGenericVector(format!("h_bar{a}(rho') = 0")));
        }
    }
    Ok(())
}

/// B_ν for every ν up to a height, built once and evaluated many times.
pub struct MatrixFamily {
    kind: AlgebraKind,
    cutoff: u32,
    matrices: BTreeMap<RootVector, ShapovalovMatrix>,
}

impl MatrixFamily {
    pub fn new(kind: AlgebraKind, cutoff: u32) -> Result<Self> {
        let uea = Uea::new(kind);
        let mut matrices = BTreeMap::new();
        for nu in RootVector::up_to_height(kind.rank(), cutoff) {
            let m = shapovalov_matrix(&uea, kind, &nu)?;
            matrices.insert(nu, m);
        }
        Ok(MatrixFamily { kind, cutoff, matrices })
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn get(&self, nu: &RootVector) -> Result<&ShapovalovMatrix> {
        self.matrices
            .get(nu)
            .ok_or_else(|| Error::InvalidRootVector(nu.0.iter().map(|&x| x as i64).collect()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&RootVector, &ShapovalovMatrix)> {
        self.matrices.iter()
    }
}

/// ν ↦ corank B_ν(λ).
pub fn corank_profile(family: &MatrixFamily, lambda: &Weight) -> Result<BTreeMap<RootVector, usize>> {
    let point = family.kind.reduce_weight(lambda)?;
    family
        .iter()
        .map(|(nu, sm)| Ok((nu.clone(), sm.size() - rank_at_point(&sm.matrix, &point)?)))
        .collect()
}

/// det B_ν restricted to the line h = λ + xρ', as a polynomial in x.
pub fn det_on_line(sm: &ShapovalovMatrix, lambda: &Weight, rho: &Weight) -> Result<Polynomial> {
    let kind = sm.kind;
    let l = kind.reduce_weight(lambda)?;
    let r = kind.reduce_weight(rho)?;
    let images: Vec<Polynomial> = l.iter().zip(&r).map(|(a, b)| Polynomial::linear(&[b.clone()], a.clone())).collect();
    let mut det = Polynomial::constant(1, rat(sm.block_sign()));
    for block in sm.blocks() {
        let line = block.try_map(|p| p.compose(&images))?;
        det = &det * &det_fraction_free(&line)?;
    }
    Ok(det)
}

/// ν ↦ m_ν(λ, ρ'), the order of vanishing at x = 0 of det B_ν(λ + xρ').
pub fn jantzen_orders(family: &MatrixFamily, lambda: &Weight, rho: &Weight) -> Result<BTreeMap<RootVector, u32>> {
    check_generic_vector(family.kind, rho)?;
    family
        .iter()
        .map(|(nu, sm)| {
            let det = det_on_line(sm, lambda, rho)?;
            let k = vanishing_order(&det)
                .ok_or_else(|| Error::BadGenericVector(format!("det B_{nu} vanishes along the whole line")))?;
            Ok((nu.clone(), k))
        })
        .collect()
}

/// Σ_{γ ∋ λ} d_γ(ν) with d_γ from the determinant formula.
pub fn predicted_order(kind: AlgebraKind, lambda: &Weight, nu: &RootVector) -> Result<u64> {
    kind.check_root_vector(nu)?;
    Ok(hyperplanes_through(kind, lambda)?.iter().map(|h| h.det_multiplicity(kind, nu)).sum())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumFormulaCheck {
    pub nu: RootVector,
    pub order: u32,
    pub predicted: u64,
    pub terms: Vec<(HyperplaneId, u64)>,
    pub ok: bool,
}

pub fn sum_formula_check(family: &MatrixFamily, lambda: &Weight, nu: &RootVector, rho: &Weight) -> Result<SumFormulaCheck> {
    let kind = family.kind;
    check_generic_vector(kind, rho)?;
    let det = det_on_line(family.get(nu)?, lambda, rho)?;
    let order = vanishing_order(&det).ok_or_else(|| Error::BadGenericVector(format!("det B_{nu} vanishes along the whole line")))?;
    let terms: Vec<(HyperplaneId, u64)> = hyperplanes_through(kind, lambda)?
        .into_iter()
        .map(|h| (h, h.det_multiplicity(kind, nu)))
        .filter(|(_, d)| *d > 0)
        .collect();
    let predicted = terms.iter().map(|(_, d)| d).sum();
    Ok(SumFormulaCheck { nu: nu.clone(), order, predicted, terms, ok: u64::from(order) == predicted })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModuleKind {
    Verma,
    Weyl,
}

/// ν ↦ dim of the (λ-ν)-weight space of M(λ) or N(λ).
pub fn character_coefficients(
    kind: AlgebraKind,
    lambda: &Weight,
    which: ModuleKind,
    cutoff: u32,
) -> Result<BTreeMap<RootVector, u64>> {
    let top = match which {
        ModuleKind::Verma => {
            kind.check_weight(lambda)?;
            1u64 << kind.odd_cartan_dim()
        }
        ModuleKind::Weyl => clifford_point_data(kind, lambda)?.dim_e as u64,
    };
    let n = kind.rank();
    Ok(RootVector::up_to_height(n, cutoff)
        .into_iter()
        .map(|nu| {
            let t = tau_signed(n, &nu.0.iter().map(|&x| x as i64).collect::<Vec<_>>());
            (nu, top * t)
        })
        .collect())
}

/// Rational weight with prescribed h_α and h_ᾱ for rank-2 algebras.
pub fn weight_from_coroots(h_alpha: Rational, h_alpha_bar: Rational) -> Weight {
    let half = Rational::one() / rat(2);
    Weight(vec![(&h_alpha_bar + &h_alpha) * &half, (h_alpha_bar - h_alpha) * half])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::ratio;
    use crate::rootdata::Family;

    fn sq2() -> AlgebraKind {
        AlgebraKind::new(Family::SQ, 2).unwrap()
    }

    #[test]
    fn classification_examples() {
        let k = sq2();
        let w = weight_from_coroots(ratio(1, 2), rat(3));
        assert_eq!(classify_weight(k, &w).unwrap(), WeightClass::Regular);
        let w = weight_from_coroots(rat(3), rat(5));
        assert_eq!(classify_weight(k, &w).unwrap(), WeightClass::Subregular(HyperplaneId::RootInteger(Root { i: 0, j: 1 }, 3)));
        let w = Weight(vec![rat(0), rat(0)]);
        assert_eq!(classify_weight(k, &w).unwrap(), WeightClass::Subregular(HyperplaneId::CorootSum(Root { i: 0, j: 1 })));
    }

    #[test]
    fn simplicity_examples() {
        let q2 = AlgebraKind::new(Family::Q, 2).unwrap();
        assert!(!is_simple_weyl(q2, &Weight(vec![rat(5), rat(1)])).unwrap());
        assert!(is_simple_weyl(q2, &Weight(vec![ratio(1, 3), ratio(-1, 4)])).unwrap());
    }

    #[test]
    fn sq2_coranks_on_root_hyperplane() {
        let fam = MatrixFamily::new(sq2(), 3).unwrap();
        for m in 1..=3u32 {
            let w = weight_from_coroots(rat(m as i64), ratio(2, 7));
            let prof = corank_profile(&fam, &w).unwrap();
            assert_eq!(prof[&RootVector(vec![m])], 2);
        }
        let w = weight_from_coroots(ratio(1, 2), rat(0));
        let prof = corank_profile(&fam, &w).unwrap();
        for k in 1..=3 {
            assert_eq!(prof[&RootVector(vec![k])], 2);
        }
    }

    #[test]
    fn jantzen_order_at_first_reflection() {
        let k = sq2();
        let fam = MatrixFamily::new(k, 2).unwrap();
        let w = weight_from_coroots(rat(1), rat(5));
        let orders = jantzen_orders(&fam, &w, &default_rho_prime(k)).unwrap();
        assert_eq!(orders[&RootVector(vec![1])], 2);
        assert_eq!(orders[&RootVector(vec![0])], 0);
    }

    #[test]
    fn bad_rho_is_rejected() {
        let k = sq2();
        let fam = MatrixFamily::new(k, 1).unwrap();
        let w = weight_from_coroots(rat(1), rat(5));
        let err = jantzen_orders(&fam, &w, &Weight(vec![rat(1), rat(1)])).unwrap_err();
        assert!(matches!(err, Error::BadGenericVector(_)));
    }

    #[test]
    fn characters() {
        let k = sq2();
        let on = character_coefficients(k, &weight_from_coroots(ratio(1, 2), rat(0)), ModuleKind::Weyl, 2).unwrap();
        assert_eq!(on.values().copied().collect::<Vec<_>>(), vec![1, 2, 2]);
        let off = character_coefficients(k, &weight_from_coroots(ratio(1, 2), rat(1)), ModuleKind::Weyl, 2).unwrap();
        assert_eq!(off.values().copied().collect::<Vec<_>>(), vec![2, 4, 4]);
        let verma = character_coefficients(k, &weight_from_coroots(ratio(1, 2), rat(0)), ModuleKind::Verma, 2).unwrap();
        assert_eq!(verma.values().copied().collect::<Vec<_>>(), vec![2, 4, 4]);
    }
}
