use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rational::Rational;
use crate::error::{Error, Result};

/// Exponent vector ordered graded-lex: total degree first, then lexicographic
/// with `h1 > h2 > ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    deg: u32,
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        let deg = exps.iter().sum();
        Monomial { deg, exps }
    }

    pub fn one(arity: usize) -> Self {
        Monomial { deg: 0, exps: vec![0; arity] }
    }

    pub fn var(arity: usize, i: usize) -> Self {
        let mut exps = vec![0; arity];
        exps[i] = 1;
        Monomial { deg: 1, exps }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        Monomial { deg: self.deg + other.deg, exps }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let exps = other.exps.iter().zip(&self.exps).map(|(b, a)| b - a).collect();
        Monomial { deg: other.deg - self.deg, exps }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg.cmp(&other.deg).then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over Q in variables h1..hn.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    arity: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(arity: usize) -> Self {
        Polynomial { arity, terms: BTreeMap::new() }
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, Rational::one())
    }

    pub fn constant(arity: usize, c: Rational) -> Self {
        let mut p = Self::zero(arity);
        p.add_term(Monomial::one(arity), c);
        p
    }

    pub fn from_int(arity: usize, c: i64) -> Self {
        Self::constant(arity, super::rational::rat(c))
    }

    pub fn var(arity: usize, i: usize) -> Self {
        let mut p = Self::zero(arity);
        p.add_term(Monomial::var(arity, i), Rational::one());
        p
    }

    /// Linear form `c + sum coeffs[i] * h_{i+1}`.
    pub fn linear(coeffs: &[Rational], c: Rational) -> Self {
        let arity = coeffs.len();
        let mut p = Self::constant(arity, c);
        for (i, a) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(arity, i), a.clone());
        }
        p
    }

    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = Self::zero(arity);
        for (e, c) in terms {
            assert_eq!(e.len(), arity, "exponent vector length");
            p.add_term(Monomial::new(e), c);
        }
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms
            .get(&Monomial::new(exps.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.exps.len(), self.arity);
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

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.deg)
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exps[var]).max()
    }

    pub fn is_constant(&self) -> bool {
        self.total_degree().map_or(true, |d| d == 0)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            Some(Rational::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    fn check_arity(&self, other: &Self) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: other.arity });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut acc: std::collections::HashMap<Monomial, Rational> = std::collections::HashMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                *acc.entry(m1.mul(m2)).or_insert_with(Rational::zero) += c1 * c2;
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(Polynomial { arity: self.arity, terms })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.arity);
        }
        let terms = self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect();
        Polynomial { arity: self.arity, terms }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.arity);
        }
        let terms = self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect();
        Polynomial { arity: self.arity, terms }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one(self.arity);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: point.len() });
        }
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.exps) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += t;
        }
        Ok(total)
    }

    /// Substitutes `h_{i+1} := images[i]`; the result has the images' arity.
    pub fn compose(&self, images: &[Polynomial]) -> Result<Self> {
        if images.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: images.len() });
        }
        let target = images.first().map_or(0, |p| p.arity);
        if let Some(bad) = images.iter().find(|p| p.arity != target) {
            return Err(Error::ArityMismatch { expected: target, found: bad.arity });
        }
        let mut powers: Vec<Vec<Polynomial>> = images.iter().map(|p| vec![Self::one(target), p.clone()]).collect();
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut t = Self::constant(target, c.clone());
            for (i, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            for (m2, c2) in t.terms {
                out.add_term(m2, c2);
            }
        }
        Ok(out)
    }

    /// Substitutes a single variable, keeping the arity.
    pub fn substitute(&self, var: usize, image: &Polynomial) -> Result<Self> {
        self.check_arity(image)?;
        let images: Vec<Polynomial> = (0..self.arity)
            .map(|i| if i == var { image.clone() } else { Self::var(self.arity, i) })
            .collect();
        self.compose(&images)
    }

    /// Re-embeds into a larger (or equal) number of variables.
    pub fn extend_arity(&self, arity: usize) -> Self {
        assert!(arity >= self.arity);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = m.exps.clone();
                e.resize(arity, 0);
                (Monomial { deg: m.deg, exps: e }, c.clone())
            })
            .collect();
        Polynomial { arity, terms }
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.deg == d)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Polynomial { arity: self.arity, terms }
    }

    pub fn leading_homogeneous(&self) -> Result<Self> {
        let d = self.total_degree().ok_or(Error::ZeroPolynomial)?;
        Ok(self.homogeneous_part(d))
    }

    /// Exact quotient `self / b`.
    pub fn divide_exact(&self, b: &Self) -> Result<Self> {
        self.check_arity(b)?;
        let (lm, lc) = match b.leading_term() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(Error::NotDivisible),
        };
        let mut r = self.clone();
        let mut q = Self::zero(self.arity);
        while let Some((rm, rc)) = r.leading_term() {
            if !lm.divides(rm) {
                return Err(Error::NotDivisible);
            }
            let qm = lm.quotient_of(rm);
            let qc = rc / &lc;
            for (m, c) in &b.terms {
                r.add_term(m.mul(&qm), -(c * &qc));
            }
            q.add_term(qm, qc);
        }
        Ok(q)
    }

    /// Number of times `f` divides `self` exactly, together with the cofactor.
    pub fn strip_factor(&self, f: &Self) -> Result<(u32, Self)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut k = 0;
        let mut cur = self.clone();
        loop {
            match cur.divide_exact(f) {
                Ok(q) => {
                    cur = q;
                    k += 1;
                }
                Err(Error::NotDivisible) => return Ok((k, cur)),
                Err(e) => return Err(e),
            }
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        let mut out = Self::zero(self.arity);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = m
                .exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
                .collect();
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    out.push_str(&abs.to_string());
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }

    pub fn default_names(arity: usize) -> Vec<String> {
        (1..=arity).map(|i| format!("h{i}")).collect()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&Self::default_names(self.arity)))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial arity mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial arity mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial arity mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.map_coeffs(|c| -c.clone())
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// Order of vanishing at 0 of a univariate polynomial; `None` means +infinity.
pub fn vanishing_order(p: &Polynomial) -> Option<u32> {
    p.terms().map(|(m, _)| m.exps()[0]).min()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::rat;

    fn h(i: usize) -> Polynomial {
        Polynomial::var(2, i)
    }

    #[test]
    fn difference_of_squares() {
        let p = &(&h(0) + &h(1)) * &(&h(0) - &h(1));
        assert_eq!(p.to_string(), "h1^2 - h2^2");
    }

    #[test]
    fn evaluate_and_substitute() {
        let p = &(&h(0) * &h(0)) - &h(1);
        assert_eq!(p.evaluate(&[rat(2), rat(3)]).unwrap(), rat(1));
        let s = &h(0) + &h(1);
        assert!(s.substitute(1, &-&h(0)).unwrap().is_zero());
    }

    #[test]
    fn exact_division() {
        let a = &(&h(0) * &h(0)) - &(&h(1) * &h(1));
        let q = a.divide_exact(&(&h(0) + &h(1))).unwrap();
        assert_eq!(q, &h(0) - &h(1));
        assert!(Polynomial::zero(2).divide_exact(&h(0)).unwrap().is_zero());
        let b = &(&h(0) * &h(0)) + &Polynomial::one(2);
        assert_eq!(b.divide_exact(&(&h(0) + &Polynomial::one(2))), Err(Error::NotDivisible));
    }

    #[test]
    fn leading_parts() {
        let p = &(&h(0) * &h(0)) + &h(0);
        assert_eq!(p.leading_homogeneous().unwrap(), &h(0) * &h(0));
        let c = Polynomial::from_int(2, 3);
        assert_eq!(c.leading_homogeneous().unwrap(), c);
        assert!(Polynomial::zero(2).leading_homogeneous().is_err());
    }

    #[test]
    fn orders() {
        let x = Polynomial::var(1, 0);
        let p = &x.pow(3) + &x.pow(4).scale(&rat(2));
        assert_eq!(vanishing_order(&p), Some(3));
        assert_eq!(vanishing_order(&Polynomial::from_int(1, 7)), Some(0));
        assert_eq!(vanishing_order(&Polynomial::zero(1)), None);
    }

    #[test]
    fn printing() {
        let p = Polynomial::from_terms(
            2,
            vec![(vec![2, 1], rat(1)), (vec![1, 0], crate::exactalg::rational::ratio(-3, 2)), (vec![0, 0], rat(1))],
        );
        assert_eq!(p.to_string(), "h1^2*h2 - 3/2*h1 + 1");
        assert_eq!((-&h(0)).to_string(), "-h1");
    }
}
