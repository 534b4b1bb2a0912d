//! U(g) in a PBW basis: normal ordering, the antiautomorphism σ and the
//! Harish-Chandra projection.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::clifford::{CliffordAlgebra, CliffordElement};
use crate::error::{Error, Result};
use crate::exactalg::{ratio, Monomial, Polynomial, Rational};
use crate::rootdata::{AlgebraKind, Basis, GenIndex, Species};

/// Exponent vector over the ordered basis; odd exponents are 0 or 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PbwMonomial(Vec<u16>);

impl PbwMonomial {
    pub fn one(dim: usize) -> Self {
        PbwMonomial(vec![0; dim])
    }

    pub fn from_exps(exps: Vec<u16>) -> Self {
        PbwMonomial(exps)
    }

    pub fn exps(&self) -> &[u16] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    fn first(&self) -> Option<usize> {
        self.0.iter().position(|&e| e > 0)
    }

    fn with(&self, g: usize, delta: i32) -> Self {
        let mut v = self.0.clone();
        v[g] = (v[g] as i32 + delta) as u16;
        PbwMonomial(v)
    }

    /// The monomial spelled as a word of generator indices.
    pub fn word(&self) -> Vec<usize> {
        self.0.iter().enumerate().flat_map(|(g, &e)| std::iter::repeat(g).take(e as usize)).collect()
    }
}

/// Finite Q-linear combination of PBW monomials.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UeaElement {
    terms: BTreeMap<PbwMonomial, Rational>,
}

impl UeaElement {
    pub fn zero() -> Self {
        UeaElement { terms: BTreeMap::new() }
    }

    pub fn monomial(m: PbwMonomial, c: Rational) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PbwMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &PbwMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: PbwMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &UeaElement, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            let e = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
            *e += v * c;
        }
        self.terms.retain(|_, v| !v.is_zero());
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn sub(&self, other: &UeaElement) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(PbwMonomial::degree).max().unwrap_or(0)
    }
}

/// U(g) for the parent algebra (q or sq) of a kind, with a memo of
/// generator-times-monomial products. Not shared across threads.
pub struct Uea {
    basis: Basis,
    memo: RefCell<HashMap<(usize, PbwMonomial, bool), UeaElement>>,
}

impl Uea {
    pub fn new(kind: AlgebraKind) -> Self {
        Uea { basis: Basis::new(kind.parent()), memo: RefCell::new(HashMap::new()) }
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn kind(&self) -> AlgebraKind {
        self.basis.kind()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn one(&self) -> UeaElement {
        UeaElement::monomial(PbwMonomial::one(self.dim()), Rational::one())
    }

    pub fn gen(&self, g: usize) -> UeaElement {
        UeaElement::monomial(PbwMonomial::one(self.dim()).with(g, 1), Rational::one())
    }

    pub fn gen_named(&self, species: Species, i: usize, j: usize) -> Result<usize> {
        self.basis.find(species, i, j)
    }

    pub fn parity(&self, m: &PbwMonomial) -> bool {
        m.0.iter().enumerate().filter(|(g, &e)| e % 2 == 1 && self.basis.is_odd(*g)).count() % 2 == 1
    }

    /// Parity if all terms agree.
    pub fn element_parity(&self, a: &UeaElement) -> Option<bool> {
        let mut it = a.terms.keys().map(|m| self.parity(m));
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    /// Weight in simple-root coordinates.
    pub fn weight(&self, m: &PbwMonomial) -> Vec<i64> {
        let mut w = vec![0i64; self.kind().rank() - 1];
        for (g, &e) in m.0.iter().enumerate() {
            if e > 0 {
                for (x, y) in w.iter_mut().zip(self.basis.weight(g)) {
                    *x += y * e as i64;
                }
            }
        }
        w
    }

    fn has_positive(&self, m: &PbwMonomial) -> bool {
        m.0.iter().enumerate().any(|(g, &e)| e > 0 && self.basis.gen(g).species.is_positive())
    }

    /// g · m in normal form; with `prune`, monomials in U(g)n⁺ are dropped
    /// (valid because U(g)n⁺ is a left ideal spanned by such monomials).
    fn mul_gen_mono(&self, g: usize, m: &PbwMonomial, prune: bool) -> UeaElement {
        let key = (g, m.clone(), prune);
        if let Some(v) = self.memo.borrow().get(&key) {
            return v.clone();
        }
        let out = self.mul_gen_mono_raw(g, m, prune);
        self.memo.borrow_mut().insert(key, out.clone());
        out
    }

    fn mul_gen_mono_raw(&self, g: usize, m: &PbwMonomial, prune: bool) -> UeaElement {
        let odd_g = self.basis.is_odd(g);
        let keep = |mono: PbwMonomial, c: Rational, out: &mut UeaElement| {
            if !(prune && self.has_positive(&mono)) {
                out.add_term(mono, c);
            }
        };
        let mut out = UeaElement::zero();
        match m.first() {
            None => keep(m.with(g, 1), Rational::one(), &mut out),
            Some(a) if g < a || (g == a && !odd_g) => keep(m.with(g, 1), Rational::one(), &mut out),
            Some(a) if g == a => {
                // g² = ½[g, g]
                let rest = m.with(g, -1);
                for (k, c) in self.basis.bracket(g, g).clone() {
                    out.add_scaled(&self.mul_gen_mono(k, &rest, prune), &(c * ratio(1, 2)));
                }
            }
            Some(a) => {
                // g·a·rest = ±a·(g·rest) + [g,a]·rest
                let rest = m.with(a, -1);
                let sign = if odd_g && self.basis.is_odd(a) { -Rational::one() } else { Rational::one() };
                let inner = self.mul_gen_mono(g, &rest, prune);
                for (mono, c) in &inner.terms {
                    out.add_scaled(&self.mul_gen_mono(a, mono, prune), &(c * &sign));
                }
                for (k, c) in self.basis.bracket(g, a).clone() {
                    out.add_scaled(&self.mul_gen_mono(k, &rest, prune), &c);
                }
            }
        }
        out
    }

    pub fn mul_gen_left(&self, g: usize, x: &UeaElement) -> UeaElement {
        let mut out = UeaElement::zero();
        for (m, c) in &x.terms {
            out.add_scaled(&self.mul_gen_mono(g, m, false), c);
        }
        out
    }

    fn mul_gen_left_pruned(&self, g: usize, x: &UeaElement) -> UeaElement {
        let mut out = UeaElement::zero();
        for (m, c) in &x.terms {
            out.add_scaled(&self.mul_gen_mono(g, m, true), c);
        }
        out
    }

    pub fn mul(&self, a: &UeaElement, b: &UeaElement) -> UeaElement {
        let mut out = UeaElement::zero();
        for (m, c) in &a.terms {
            let mut cur = b.clone();
            for &g in m.word().iter().rev() {
                cur = self.mul_gen_left(g, &cur);
            }
            out.add_scaled(&cur, c);
        }
        out
    }

    /// Drops the monomials lying in U(g)n⁺.
    pub fn drop_positive(&self, a: &UeaElement) -> UeaElement {
        let mut out = UeaElement::zero();
        for (m, c) in &a.terms {
            if !self.has_positive(m) {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// a·v in U(g)/U(g)n⁺, written in the monomials free of positive generators.
    pub fn act(&self, a: &UeaElement, v: &UeaElement) -> UeaElement {
        let v = self.drop_positive(v);
        let mut out = UeaElement::zero();
        for (m, c) in &a.terms {
            let mut cur = v.clone();
            for &g in m.word().iter().rev() {
                cur = self.mul_gen_left_pruned(g, &cur);
            }
            out.add_scaled(&cur, c);
        }
        out
    }

    /// Splits a monomial into its negative-root part and its Cartan part,
    /// or None if it contains a positive generator.
    pub fn split_cartan(&self, m: &PbwMonomial) -> Option<(PbwMonomial, CliffordElement)> {
        let n = self.kind().rank();
        let mut neg = m.0.clone();
        let mut exps = vec![0u32; n];
        let mut mask = 0u32;
        for (g, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let gen = self.basis.gen(g);
            match gen.species {
                Species::H => exps[gen.i] = e as u32,
                Species::OddH => mask |= 1 << gen.i,
                s if s.is_positive() => return None,
                _ => continue,
            }
            neg[g] = 0;
        }
        let mut p = Polynomial::zero(n);
        p.add_term(Monomial::new(exps), Rational::one());
        let mut cl = CliffordElement::zero(n);
        cl.add(mask, p);
        Some((PbwMonomial(neg), cl))
    }

    pub fn normal_order(&self, word: &[usize]) -> UeaElement {
        let mut cur = self.one();
        for &g in word.iter().rev() {
            cur = self.mul_gen_left(g, &cur);
        }
        cur
    }

    /// Sign and reversed word of σ(g_1…g_k) = (-1)^{#odd pairs}(-1)^k g_k…g_1.
    pub fn sigma_word(&self, word: &[usize]) -> (Rational, Vec<usize>) {
        let odd = word.iter().filter(|&&g| self.basis.is_odd(g)).count();
        let flips = odd * odd.saturating_sub(1) / 2 + word.len();
        let sign = if flips % 2 == 0 { Rational::one() } else { -Rational::one() };
        (sign, word.iter().rev().copied().collect())
    }

    pub fn sigma(&self, a: &UeaElement) -> UeaElement {
        let mut out = UeaElement::zero();
        for (m, c) in &a.terms {
            let (sign, w) = self.sigma_word(&m.word());
            out.add_scaled(&self.normal_order(&w), &(c * sign));
        }
        out
    }

    /// HC(w · x) for a word `w` and an element `x` free of positive generators.
    pub fn hc_of_word_times(&self, word: &[usize], x: &UeaElement) -> CliffordElement {
        let mut cur = x.clone();
        for &g in word.iter().rev() {
            cur = self.mul_gen_left_pruned(g, &cur);
        }
        self.hc_project(&cur)
    }

    /// Keeps the monomials built from h and H only, as an element of R.
    pub fn hc_project(&self, a: &UeaElement) -> CliffordElement {
        let n = self.kind().rank();
        let mut out = CliffordElement::zero(n);
        let gens = self.basis.gens();
        for (m, c) in &a.terms {
            let mut exps = vec![0u32; n];
            let mut mask = 0u32;
            let mut cartan = true;
            for (g, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match gens[g].species {
                    Species::H => exps[gens[g].i] = e as u32,
                    Species::OddH => mask |= 1 << gens[g].i,
                    _ => {
                        cartan = false;
                        break;
                    }
                }
            }
            if cartan {
                let mut p = Polynomial::zero(n);
                p.add_term(Monomial::new(exps), c.clone());
                out.add(mask, p);
            }
        }
        out
    }

    /// Embeds p(h)·H_J (J over the odd Cartan basis) into U(g).
    pub fn from_clifford(&self, x: &CliffordElement) -> UeaElement {
        let gens = self.basis.gens();
        let h0 = gens.iter().position(|g| g.species == Species::H).unwrap();
        let oh0 = gens.iter().position(|g| g.species == Species::OddH).unwrap();
        let mut out = UeaElement::zero();
        for (mask, p) in x.terms() {
            for (mono, c) in p.terms() {
                let mut v = PbwMonomial::one(self.dim());
                for (i, &e) in mono.exps().iter().enumerate() {
                    v.0[h0 + i] = e as u16;
                }
                for k in (0..32).filter(|k| mask >> k & 1 == 1) {
                    v.0[oh0 + k] = 1;
                }
                out.add_term(v, c.clone());
            }
        }
        out
    }

    /// Clifford algebra matching this algebra's odd Cartan basis.
    pub fn clifford(&self) -> CliffordAlgebra {
        CliffordAlgebra::from_basis(&self.basis)
    }

    /// Supercommutator x·u - (-1)^{p(x)p(u)} u·x for homogeneous x, u.
    pub fn ad(&self, x: &UeaElement, u: &UeaElement) -> Result<UeaElement> {
        let px = self.homogeneous_parity(x)?;
        let pu = self.homogeneous_parity(u)?;
        let sign = if px && pu { Rational::one() } else { -Rational::one() };
        let mut out = self.mul(x, u);
        out.add_scaled(&self.mul(u, x), &sign);
        Ok(out)
    }

    /// (ad' x)u = x·u - (-1)^{p(x)(p(u)+1)} u·x for homogeneous x, u.
    pub fn ad_twisted(&self, x: &UeaElement, u: &UeaElement) -> Result<UeaElement> {
        let px = self.homogeneous_parity(x)?;
        let pu = self.homogeneous_parity(u)?;
        let sign = if px && !pu { Rational::one() } else { -Rational::one() };
        let mut out = self.mul(x, u);
        out.add_scaled(&self.mul(u, x), &sign);
        Ok(out)
    }

    fn homogeneous_parity(&self, x: &UeaElement) -> Result<bool> {
        if x.is_zero() {
            return Ok(false);
        }
        self.element_parity(x).ok_or_else(|| Error::Shape("element is not homogeneous".into()))
    }

    pub fn fmt_monomial(&self, m: &PbwMonomial) -> String {
        let parts: Vec<String> = m
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(g, &e)| {
                let name = self.basis.gen(g).to_string();
                if e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }

    pub fn fmt_element(&self, a: &UeaElement) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in a.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let mono = self.fmt_monomial(m);
            if abs.is_one() {
                out.push_str(&mono);
            } else if mono == "1" {
                out.push_str(&abs.to_string());
            } else {
                out.push_str(&format!("{abs}*{mono}"));
            }
        }
        out
    }

    /// Word of generators from names like `e(1,2)`, `H1`, `f(2,3)`.
    pub fn parse_word(&self, src: &str) -> Result<Vec<usize>> {
        src.split_whitespace().map(|tok| self.parse_gen(tok)).collect()
    }

    fn parse_gen(&self, tok: &str) -> Result<usize> {
        let bad = || Error::Parse(format!("bad generator '{tok}'"));
        let mut chars = tok.chars();
        let species = match chars.next().ok_or_else(bad)? {
            'e' => Species::E,
            'f' => Species::F,
            'h' => Species::H,
            'E' => Species::OddE,
            'F' => Species::OddF,
            'H' => Species::OddH,
            _ => return Err(bad()),
        };
        let rest: String = chars.collect();
        let idx: Vec<usize> = rest
            .trim_matches(|c| c == '(' || c == ')')
            .split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        match (species, idx.as_slice()) {
            (Species::H | Species::OddH, [i]) if *i >= 1 => self.basis.index_of(GenIndex::cartan(species, i - 1)),
            (_, [i, j]) if *i >= 1 && *j >= 1 => self.basis.index_of(GenIndex { species, i: i - 1, j: j - 1 }),
            _ => Err(bad()),
        }
    }
}

impl fmt::Debug for Uea {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Uea({})", self.kind())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;
    use crate::rootdata::Family;

    fn uea(f: Family, n: usize) -> Uea {
        Uea::new(AlgebraKind::new(f, n).unwrap())
    }

    #[test]
    fn one_bracket_step() {
        let u = uea(Family::Q, 2);
        let lhs = u.normal_order(&u.parse_word("e(1,2) f(1,2)").unwrap());
        let mut rhs = u.normal_order(&u.parse_word("f(1,2) e(1,2)").unwrap());
        rhs.add_scaled(&u.normal_order(&u.parse_word("h1").unwrap()), &rat(1));
        rhs.add_scaled(&u.normal_order(&u.parse_word("h2").unwrap()), &rat(-1));
        assert_eq!(lhs, rhs);
        assert_eq!(rhs.len(), 3);
    }

    #[test]
    fn odd_squares() {
        let u = uea(Family::Q, 2);
        assert!(u.normal_order(&u.parse_word("E(1,2) E(1,2)").unwrap()).is_zero());
        assert_eq!(u.normal_order(&u.parse_word("H1 H1").unwrap()), u.normal_order(&u.parse_word("h1").unwrap()));
    }

    #[test]
    fn sigma_small() {
        let u = uea(Family::Q, 2);
        let e = u.normal_order(&u.parse_word("e(1,2)").unwrap());
        assert_eq!(u.sigma(&e), e.scale(&rat(-1)));
        let h12 = u.normal_order(&u.parse_word("H1 H2").unwrap());
        assert_eq!(u.sigma(&h12), h12);
    }

    #[test]
    fn hc_of_ef() {
        let u = uea(Family::SQ, 2);
        let x = u.normal_order(&u.parse_word("e(1,2) e(1,2) f(1,2) f(1,2)").unwrap());
        assert_eq!(u.hc_project(&x).to_string(), "2*h1^2 - 4*h1*h2 + 2*h2^2 - 2*h1 + 2*h2");
    }
}
