//! The Clifford algebra R = U(h) over A = S(h_0), in the H_J basis.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactalg::{rat, ratio, PolyMatrix, Polynomial, RatMatrix, Rational};
use crate::rootdata::{AlgebraKind, Basis, Family, Weight};

/// Element Σ_J p_J H_J, with J a bitmask over the odd Cartan generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordElement {
    arity: usize,
    terms: BTreeMap<u32, Polynomial>,
}

impl CliffordElement {
    pub fn zero(arity: usize) -> Self {
        CliffordElement { arity, terms: BTreeMap::new() }
    }

    pub fn scalar(p: Polynomial) -> Self {
        let mut e = Self::zero(p.arity());
        e.add(0, p);
        e
    }

    pub fn basis(arity: usize, mask: u32) -> Self {
        let mut e = Self::zero(arity);
        e.add(mask, Polynomial::one(arity));
        e
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Polynomial)> {
        self.terms.iter().map(|(m, p)| (*m, p))
    }

    pub fn coeff(&self, mask: u32) -> Polynomial {
        self.terms.get(&mask).cloned().unwrap_or_else(|| Polynomial::zero(self.arity))
    }

    pub fn add(&mut self, mask: u32, p: Polynomial) {
        if p.is_zero() {
            return;
        }
        let e = self.terms.entry(mask).or_insert_with(|| Polynomial::zero(p.arity()));
        *e = &*e + &p;
        if e.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn add_scaled(&mut self, other: &CliffordElement, c: &Polynomial) {
        for (m, p) in &other.terms {
            self.add(*m, p * c);
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&Polynomial) -> Result<Polynomial>) -> Result<Self> {
        let mut out: Option<CliffordElement> = None;
        for (m, p) in &self.terms {
            let q = f(p)?;
            out.get_or_insert_with(|| CliffordElement::zero(q.arity())).add(*m, q);
        }
        Ok(out.unwrap_or_else(|| CliffordElement::zero(self.arity)))
    }

    /// Parity of each term is |J| mod 2; `None` for mixed or zero elements.
    pub fn parity(&self) -> Option<bool> {
        let mut it = self.terms.keys().map(|m| m.count_ones() % 2 == 1);
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(m, p)| {
                let hs: Vec<String> = (0..32).filter(|k| m >> k & 1 == 1).map(|k| format!("H{}", k + 1)).collect();
                match (*m, *p == Polynomial::one(self.arity)) {
                    (0, _) if self.terms.len() == 1 => p.fmt_with(names),
                    (0, _) => format!("({})", p.fmt_with(names)),
                    (_, true) => hs.join(" "),
                    _ => format!("({}) {}", p.fmt_with(names), hs.join(" ")),
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&Polynomial::default_names(self.arity)))
    }
}

/// Clifford algebra on generators H'_1..H'_N with H'_a H'_b + H'_b H'_a = B_ab.
#[derive(Clone, Debug)]
pub struct CliffordAlgebra {
    arity: usize,
    form: Vec<Vec<Polynomial>>,
}

impl CliffordAlgebra {
    pub fn with_form(arity: usize, form: Vec<Vec<Polynomial>>) -> Self {
        CliffordAlgebra { arity, form }
    }

    /// R for the parent (q or sq) of `kind`, over h_1..h_n.
    pub fn for_kind(kind: AlgebraKind) -> Self {
        let basis = Basis::new(kind.parent());
        Self::from_basis(&basis)
    }

    pub fn from_basis(basis: &Basis) -> Self {
        CliffordAlgebra { arity: basis.kind().rank(), form: basis.odd_cartan_form() }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn generators(&self) -> usize {
        self.form.len()
    }

    pub fn top_mask(&self) -> u32 {
        (1u32 << self.generators()) - 1
    }

    pub fn form(&self) -> &[Vec<Polynomial>] {
        &self.form
    }

    pub fn gen(&self, k: usize) -> CliffordElement {
        CliffordElement::basis(self.arity, 1 << k)
    }

    fn right_mul_gen(&self, mask: u32, b: usize) -> Vec<(u32, Polynomial)> {
        if mask == 0 {
            return vec![(1 << b, Polynomial::one(self.arity))];
        }
        let a = 31 - mask.leading_zeros() as usize;
        let rest = mask ^ (1 << a);
        if a < b {
            return vec![(mask | 1 << b, Polynomial::one(self.arity))];
        }
        if a == b {
            return vec![(rest, self.form[b][b].scale(&ratio(1, 2)))];
        }
        // w·a·b = -(w·b)·a + B_ab·w
        let mut out = vec![(rest, self.form[a][b].clone())];
        for (m, p) in self.right_mul_gen(rest, b) {
            for (m2, p2) in self.right_mul_gen(m, a) {
                out.push((m2, -(&p * &p2)));
            }
        }
        out
    }

    fn mul_basis(&self, x: u32, y: u32) -> CliffordElement {
        let mut cur: Vec<(u32, Polynomial)> = vec![(x, Polynomial::one(self.arity))];
        for b in (0..self.generators()).filter(|b| y >> b & 1 == 1) {
            let mut next = CliffordElement::zero(self.arity);
            for (m, p) in &cur {
                for (m2, p2) in self.right_mul_gen(*m, b) {
                    next.add(m2, p * &p2);
                }
            }
            cur = next.terms.into_iter().collect();
        }
        let mut out = CliffordElement::zero(self.arity);
        for (m, p) in cur {
            out.add(m, p);
        }
        out
    }

    pub fn mul(&self, a: &CliffordElement, b: &CliffordElement) -> CliffordElement {
        let mut out = CliffordElement::zero(self.arity);
        for (x, p) in &a.terms {
            for (y, q) in &b.terms {
                let pq = p * q;
                out.add_scaled(&self.mul_basis(*x, *y), &pq);
            }
        }
        out
    }

    /// Product of generators in the given order.
    pub fn word(&self, gens: &[usize]) -> CliffordElement {
        gens.iter().fold(CliffordElement::scalar(Polynomial::one(self.arity)), |acc, &g| self.mul(&acc, &self.gen(g)))
    }

    /// Coefficient of the ordered top product.
    pub fn integral(&self, a: &CliffordElement) -> Polynomial {
        a.coeff(self.top_mask())
    }

    /// σ(H'_{a_1}…H'_{a_k}) = (-1)^{k(k-1)/2}(-1)^k H'_{a_k}…H'_{a_1}; σ(h) = -h.
    pub fn sigma(&self, a: &CliffordElement) -> CliffordElement {
        let neg: Vec<Polynomial> =
            (0..self.arity).map(|i| -Polynomial::var(self.arity, i)).collect();
        let mut out = CliffordElement::zero(self.arity);
        for (m, p) in &a.terms {
            let gens: Vec<usize> = (0..self.generators()).filter(|k| m >> k & 1 == 1).rev().collect();
            let k = gens.len();
            let sign = if (k * (k + 1) / 2) % 2 == 0 { 1 } else { -1 };
            let w = self.word(&gens);
            let c = p.compose(&neg).expect("arity").scale(&rat(sign));
            out.add_scaled(&w, &c);
        }
        out
    }

    /// Supercommutator [a, b] for homogeneous a, b.
    pub fn supercommutator(&self, a: &CliffordElement, b: &CliffordElement) -> CliffordElement {
        let sign = match (a.parity(), b.parity()) {
            (Some(true), Some(true)) => 1,
            _ => -1,
        };
        let mut out = self.mul(a, b);
        out.add_scaled(&self.mul(b, a), &Polynomial::from_int(self.arity, sign));
        out
    }

    /// (ad' x)u = xu - (-1)^{p(x)(p(u)+1)} ux for homogeneous x, u.
    pub fn ad_twisted(&self, x: &CliffordElement, u: &CliffordElement) -> CliffordElement {
        let px = x.parity().unwrap_or(false);
        let pu = u.parity().unwrap_or(false);
        let sign = if px && !pu { 1 } else { -1 };
        let mut out = self.mul(x, u);
        out.add_scaled(&self.mul(u, x), &Polynomial::from_int(self.arity, sign));
        out
    }

    /// Matrix of ∫σ(H_J)H_{J'} over all subsets in ascending bitmask order.
    pub fn gram_matrix(&self) -> PolyMatrix {
        let size = 1usize << self.generators();
        let mut m = PolyMatrix::zeros(size, size, self.arity);
        let sig: Vec<CliffordElement> =
            (0..size as u32).map(|j| self.sigma(&CliffordElement::basis(self.arity, j))).collect();
        for (j, s) in sig.iter().enumerate() {
            for k in 0..size {
                let prod = self.mul(s, &CliffordElement::basis(self.arity, k as u32));
                m.set(j, k, self.integral(&prod));
            }
        }
        m
    }

    /// Rank and derived data of the form evaluated at λ.
    pub fn point_data(&self, lambda: &[Rational]) -> Result<CliffordPointData> {
        let nn = self.generators();
        let mut vals = Vec::with_capacity(nn * nn);
        for row in &self.form {
            for p in row {
                vals.push(p.evaluate(lambda)?);
            }
        }
        let rank = RatMatrix::from_vec(nn, nn, vals).rank();
        let c = nn - rank;
        let dim_e = 1usize << ((nn + 1 - c) / 2);
        Ok(CliffordPointData { c, dim_e, r: (1usize << nn) / dim_e })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CliffordPointData {
    pub c: usize,
    pub dim_e: usize,
    pub r: usize,
}

pub fn clifford_point_data(kind: AlgebraKind, lambda: &Weight) -> Result<CliffordPointData> {
    kind.check_weight(lambda)?;
    CliffordAlgebra::for_kind(kind).point_data(lambda.coords())
}

/// T_h and t_h = T_h² (the latter projected for pq/psq).
pub fn t_h_element(kind: AlgebraKind) -> Result<(CliffordElement, Polynomial)> {
    let alg = CliffordAlgebra::for_kind(kind);
    let t = if kind.is_special() { special_t_h(kind.rank())? } else { alg.gen_top() };
    let sq = alg.mul(&t, &t);
    if sq.terms.keys().any(|&m| m != 0) {
        return Err(Error::Shape("T_h squared is not a scalar".into()));
    }
    Ok((t, kind.project(&sq.coeff(0))?))
}

impl CliffordAlgebra {
    fn gen_top(&self) -> CliffordElement {
        CliffordElement::basis(self.arity, self.top_mask())
    }
}

/// Σ_i (-1)^i H_{[n] \ i}, computed in the q Clifford algebra and rewritten in the
/// basis H'_k = H_k - H_{k+1}.
fn special_t_h(n: usize) -> Result<CliffordElement> {
    let q = CliffordAlgebra::for_kind(AlgebraKind::new(Family::Q, n)?);
    let mut t = CliffordElement::zero(n);
    for i in 0..n {
        let sign = if (i + 1) % 2 == 0 { 1 } else { -1 };
        t.add(((1u32 << n) - 1) ^ (1 << i), Polynomial::from_int(n, sign));
    }
    to_special_basis(&q, n, &t)
}

/// Rewrites an element of the q(n) Clifford algebra lying in the subalgebra
/// generated by H_k - H_{k+1} in that generating set.
pub fn to_special_basis(q: &CliffordAlgebra, n: usize, elem: &CliffordElement) -> Result<CliffordElement> {
    let nn = n - 1;
    let prime = |k: usize| {
        let mut e = q.gen(k);
        e.add(1 << (k + 1), Polynomial::from_int(n, -1));
        e
    };
    let images: Vec<CliffordElement> = (0..1u32 << nn)
        .map(|mask| {
            (0..nn)
                .filter(|k| mask >> k & 1 == 1)
                .fold(CliffordElement::scalar(Polynomial::one(n)), |acc, k| q.mul(&acc, &prime(k)))
        })
        .collect();
    let mut residual = elem.clone();
    let mut out = CliffordElement::zero(n);
    while let Some(d) = residual.terms.keys().map(|m| m.count_ones()).max() {
        let targets: Vec<u32> = (0..1u32 << n).filter(|m| m.count_ones() == d).collect();
        let unknowns: Vec<u32> = (0..1u32 << nn).filter(|m| m.count_ones() == d).collect();
        // constant matrix: top-degree coefficient of image(H'_J) on H_K
        let mat: Vec<Vec<Rational>> = targets
            .iter()
            .map(|&k| {
                unknowns
                    .iter()
                    .map(|&j| images[j as usize].coeff(k).constant_value().unwrap_or_else(Rational::zero))
                    .collect()
            })
            .collect();
        let rows = independent_rows(&mat, unknowns.len())
            .ok_or_else(|| Error::Shape("element outside the special Clifford subalgebra".into()))?;
        let square = RatMatrix::from_rows(rows.iter().map(|&r| mat[r].clone()).collect());
        let inv = square.inverse().expect("independent rows");
        for (a, &j) in unknowns.iter().enumerate() {
            let mut coeff = Polynomial::zero(n);
            for (b, &r) in rows.iter().enumerate() {
                coeff = &coeff + &residual.coeff(targets[r]).scale(inv.get(a, b));
            }
            if coeff.is_zero() {
                continue;
            }
            residual.add_scaled(&images[j as usize], &(-&coeff));
            out.add(j, coeff);
        }
        if residual.terms.keys().any(|m| m.count_ones() == d) {
            return Err(Error::Shape("element outside the special Clifford subalgebra".into()));
        }
    }
    Ok(out)
}

fn independent_rows(mat: &[Vec<Rational>], want: usize) -> Option<Vec<usize>> {
    let mut ech = crate::exactalg::SparseEchelon::new(want);
    let mut rows = Vec::new();
    for (i, row) in mat.iter().enumerate() {
        if ech.insert(row.iter().cloned().enumerate()) {
            rows.push(i);
            if rows.len() == want {
                return Some(rows);
            }
        }
    }
    (want == 0).then(Vec::new)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(f: Family, n: usize) -> CliffordAlgebra {
        CliffordAlgebra::for_kind(AlgebraKind::new(f, n).unwrap())
    }

    #[test]
    fn generator_products() {
        let a = alg(Family::Q, 2);
        assert_eq!(a.mul(&a.gen(0), &a.gen(0)), CliffordElement::scalar(Polynomial::var(2, 0)));
        assert_eq!(a.mul(&a.gen(0), &a.gen(1)), CliffordElement::basis(2, 0b11));
        let mut neg = CliffordElement::zero(2);
        neg.add(0b11, Polynomial::from_int(2, -1));
        assert_eq!(a.mul(&a.gen(1), &a.gen(0)), neg);
    }

    #[test]
    fn integral_basics() {
        let a = alg(Family::Q, 2);
        assert_eq!(a.integral(&CliffordElement::basis(2, 0b11)), Polynomial::one(2));
        assert!(a.integral(&CliffordElement::scalar(Polynomial::one(2))).is_zero());
        let x = a.mul(&CliffordElement::scalar(Polynomial::var(2, 0)), &a.gen(0));
        assert!(a.integral(&x).is_zero());
    }

    #[test]
    fn t_h_small_cases() {
        let (t, th) = t_h_element(AlgebraKind::new(Family::Q, 2).unwrap()).unwrap();
        assert_eq!(t, CliffordElement::basis(2, 0b11));
        assert_eq!(th.to_string(), "-h1*h2");
        let (t, th) = t_h_element(AlgebraKind::new(Family::SQ, 2).unwrap()).unwrap();
        assert_eq!(t, CliffordElement::basis(2, 0b1));
        assert_eq!(th.to_string(), "h1 + h2");
    }

    #[test]
    fn point_data_q2() {
        let a = alg(Family::Q, 2);
        let pd = |x: i64, y: i64| a.point_data(&[rat(x), rat(y)]).unwrap();
        assert_eq!(pd(1, 1), CliffordPointData { c: 0, dim_e: 2, r: 2 });
        assert_eq!(pd(1, 0), CliffordPointData { c: 1, dim_e: 2, r: 2 });
        assert_eq!(pd(0, 0), CliffordPointData { c: 2, dim_e: 1, r: 4 });
    }
}
