//! Products of linear forms, and the closed-form Norm.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::partitions::{shift, tau_alpha_signed, tau_signed};
use crate::error::Result;
use crate::exactalg::rational::common_denominator;
use crate::exactalg::{Polynomial, Rational};
use crate::rootdata::{AlgebraKind, RootVector};

/// `scalar · Π factor^exponent`, factors primitive integer linear forms with
/// positive leading coefficient, pairwise distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factored {
    pub arity: usize,
    pub scalar: Rational,
    pub factors: Vec<(Polynomial, u32)>,
}

/// Writes p = c·q with q primitive over Z and positive leading coefficient.
pub fn normalize_linear(p: &Polynomial) -> (Rational, Polynomial) {
    let den = common_denominator(p.terms().map(|(_, c)| c));
    let dq = Rational::from_integer(den.clone());
    let content = p.terms().fold(BigInt::zero(), |g, (_, c)| g.gcd(&(c * &dq).to_integer()));
    let mut c = Rational::new(content, den);
    if p.leading_term().map_or(false, |(_, lc)| lc.is_negative()) {
        c = -c;
    }
    (c.clone(), p.scale(&c.recip()))
}

impl Factored {
    pub fn one(arity: usize) -> Self {
        Factored { arity, scalar: Rational::one(), factors: Vec::new() }
    }

    /// Multiplies in `p^k` for a linear or constant p.
    pub fn push(&mut self, p: &Polynomial, k: u32) {
        if k == 0 {
            return;
        }
        if let Some(c) = p.constant_value() {
            self.scalar *= num_traits::pow(c, k as usize);
            return;
        }
        let (c, q) = normalize_linear(p);
        self.scalar *= num_traits::pow(c, k as usize);
        match self.factors.iter_mut().find(|(f, _)| *f == q) {
            Some((_, e)) => *e += k,
            None => self.factors.push((q, k)),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        Factored {
            arity: self.arity,
            scalar: num_traits::pow(self.scalar.clone(), k as usize),
            factors: self.factors.iter().map(|(f, e)| (f.clone(), e * k)).collect(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent_of(&self, f: &Polynomial) -> u32 {
        self.factors.iter().find(|(g, _)| g == f).map_or(0, |(_, e)| *e)
    }

    /// Same factors and exponents, scalar ignored.
    pub fn same_up_to_scalar(&self, other: &Factored) -> bool {
        self.factors.len() == other.factors.len()
            && self.factors.iter().all(|(f, e)| other.exponent_of(f) == *e)
    }

    pub fn expand(&self) -> Polynomial {
        let mut out = Polynomial::constant(self.arity, self.scalar.clone());
        for (f, e) in &self.factors {
            out = &out * &f.pow(*e);
        }
        out
    }

    /// Leading homogeneous component of the expansion.
    pub fn leading(&self) -> Polynomial {
        let mut out = Polynomial::constant(self.arity, self.scalar.clone());
        for (f, e) in &self.factors {
            let lead = f.homogeneous_part(1);
            out = &out * &lead.pow(*e);
        }
        out
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        let mut v = self.scalar.clone();
        for (f, e) in &self.factors {
            v *= num_traits::pow(f.evaluate(point)?, *e as usize);
        }
        Ok(v)
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        if !self.scalar.is_one() || self.factors.is_empty() {
            parts.push(self.scalar.to_string());
        }
        for (f, e) in &self.factors {
            let s = f.fmt_with(names);
            parts.push(if *e == 1 { format!("({s})") } else { format!("({s})^{e}") });
        }
        parts.join("*")
    }
}

impl fmt::Display for Factored {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&Polynomial::default_names(self.arity)))
    }
}

/// Π_α h_ᾱ^{τ_α(ν-α)} Π_{α,r≥1} (h_α - r)^{τ(ν-rα)}, projected for pq/psq.
pub fn closed_form_norm(kind: AlgebraKind, nu: &RootVector) -> Result<Factored> {
    let n = kind.rank();
    kind.check_root_vector(nu)?;
    let mut parent = Vec::new();
    for alpha in kind.positive_roots() {
        let e = tau_alpha_signed(n, &shift(nu, alpha, 1), alpha);
        parent.push((alpha.h_alpha_bar(n), e as u32));
        let mut r = 1u32;
        loop {
            let s = shift(nu, alpha, r);
            if s.iter().any(|&x| x < 0) {
                break;
            }
            let e = tau_signed(n, &s) as u32;
            parent.push((&alpha.h_alpha(n) - &Polynomial::from_int(n, r as i64), e));
            r += 1;
        }
    }
    let mut out = Factored::one(kind.arity());
    for (p, e) in parent {
        out.push(&kind.project(&p)?, e);
    }
    Ok(out)
}

/// Closed-form det: Norm^{2^{dim h_1}}.
pub fn closed_form_det(kind: AlgebraKind, nu: &RootVector) -> Result<Factored> {
    Ok(closed_form_norm(kind, nu)?.pow(1 << kind.odd_cartan_dim()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::Family;

    #[test]
    fn sq2_two_alpha() {
        let k = AlgebraKind::new(Family::SQ, 2).unwrap();
        let norm = closed_form_norm(k, &RootVector(vec![2])).unwrap();
        assert_eq!(norm.to_string(), "(h1 + h2)*(h1 - h2 - 1)^2*(h1 - h2 - 2)");
        assert_eq!(closed_form_norm(k, &RootVector(vec![0])).unwrap().expand(), Polynomial::one(2));
    }

    #[test]
    fn q2_alpha_det() {
        let k = AlgebraKind::new(Family::Q, 2).unwrap();
        let det = closed_form_det(k, &RootVector(vec![1])).unwrap();
        assert_eq!(det.to_string(), "(h1 + h2)^4*(h1 - h2 - 1)^4");
    }
}
