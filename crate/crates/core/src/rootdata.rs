//! Algebra kinds, the ordered basis, structure constants, roots and weights.
//!
//! Elements of q(n) are pairs (A, B) of n x n matrices, written X_{A,0} + X_{0,B}.
//! Matrix units give e_ij = X_{E_ij,0} (even) and o_ij = X_{0,E_ij} (odd).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{rat, Polynomial, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Q,
    SQ,
    PQ,
    PSQ,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Q => "q",
            Family::SQ => "sq",
            Family::PQ => "pq",
            Family::PSQ => "psq",
        }
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "q" => Ok(Family::Q),
            "sq" => Ok(Family::SQ),
            "pq" => Ok(Family::PQ),
            "psq" => Ok(Family::PSQ),
            other => Err(Error::InvalidKind(format!("unknown family '{other}'"))),
        }
    }
}

/// One of q(n), sq(n), pq(n), psq(n).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraKind {
    family: Family,
    n: usize,
}

impl AlgebraKind {
    pub fn new(family: Family, n: usize) -> Result<Self> {
        let min = if matches!(family, Family::PQ | Family::PSQ) { 3 } else { 2 };
        if n < min {
            return Err(Error::InvalidKind(format!("{}({n}) requires n >= {min}", family.name())));
        }
        Ok(AlgebraKind { family, n })
    }

    pub fn parse(family: &str, n: usize) -> Result<Self> {
        Self::new(family.parse()?, n)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    /// Odd Cartan basis is H_k - H_{k+1} (trace-zero odd part).
    pub fn is_special(&self) -> bool {
        matches!(self.family, Family::SQ | Family::PSQ)
    }

    /// Quotient by the identity; handled by h_n := -(h_1 + ... + h_{n-1}).
    pub fn is_projective(&self) -> bool {
        matches!(self.family, Family::PQ | Family::PSQ)
    }

    /// The algebra whose enveloping algebra is actually built (q or sq).
    pub fn parent(&self) -> AlgebraKind {
        let family = if self.is_special() { Family::SQ } else { Family::Q };
        AlgebraKind { family, n: self.n }
    }

    /// dim h_1
    pub fn odd_cartan_dim(&self) -> usize {
        if self.is_special() {
            self.n - 1
        } else {
            self.n
        }
    }

    /// Number of polynomial variables in outputs.
    pub fn arity(&self) -> usize {
        if self.is_projective() {
            self.n - 1
        } else {
            self.n
        }
    }

    pub fn positive_roots(&self) -> Vec<Root> {
        positive_roots(self.n)
    }

    /// Applies h_n := -(h_1 + ... + h_{n-1}) for pq/psq, dropping h_n.
    pub fn project(&self, p: &Polynomial) -> Result<Polynomial> {
        if !self.is_projective() {
            return Ok(p.clone());
        }
        if p.arity() != self.n {
            return Err(Error::ArityMismatch { expected: self.n, found: p.arity() });
        }
        let m = self.n - 1;
        let mut images: Vec<Polynomial> = (0..m).map(|i| Polynomial::var(m, i)).collect();
        images.push(-Polynomial::linear(&vec![rat(1); m], Rational::zero()));
        p.compose(&images)
    }

    /// Weight coordinates matching the output arity (drops λ_n for pq/psq).
    pub fn reduce_weight(&self, w: &Weight) -> Result<Vec<Rational>> {
        self.check_weight(w)?;
        Ok(w.0[..self.arity()].to_vec())
    }

    pub fn check_weight(&self, w: &Weight) -> Result<()> {
        if w.0.len() != self.n {
            return Err(Error::InvalidWeight(format!("expected {} coordinates, got {}", self.n, w.0.len())));
        }
        if self.is_projective() && !w.0.iter().sum::<Rational>().is_zero() {
            return Err(Error::InvalidWeight("coordinates must sum to zero for pq/psq".into()));
        }
        Ok(())
    }

    pub fn check_root_vector(&self, nu: &RootVector) -> Result<()> {
        if nu.0.len() != self.n - 1 {
            return Err(Error::InvalidRootVector(nu.0.iter().map(|&x| x as i64).collect()));
        }
        Ok(())
    }
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.family.name(), self.n)
    }
}

/// Positive root ε_i - ε_j, 0-based with i < j.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    pub i: usize,
    pub j: usize,
}

impl Root {
    /// Coefficients over the simple roots.
    pub fn as_root_vector(&self, n: usize) -> RootVector {
        let mut v = vec![0u32; n - 1];
        for x in &mut v[self.i..self.j] {
            *x = 1;
        }
        RootVector(v)
    }

    /// h_α = h_i - h_j
    pub fn h_alpha(&self, arity: usize) -> Polynomial {
        &Polynomial::var(arity, self.i) - &Polynomial::var(arity, self.j)
    }

    /// h_ᾱ = h_i + h_j
    pub fn h_alpha_bar(&self, arity: usize) -> Polynomial {
        &Polynomial::var(arity, self.i) + &Polynomial::var(arity, self.j)
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i + 1, self.j + 1)
    }
}

pub fn positive_roots(n: usize) -> Vec<Root> {
    (0..n).flat_map(|i| ((i + 1)..n).map(move |j| Root { i, j })).collect()
}

/// ν ∈ Q⁺ in simple-root coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootVector(pub Vec<u32>);

impl RootVector {
    pub fn zero(rank: usize) -> Self {
        RootVector(vec![0; rank - 1])
    }

    pub fn height(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `self - k·other`, or `None` when it leaves Q⁺.
    pub fn checked_sub(&self, other: &RootVector, k: u32) -> Option<RootVector> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a.checked_sub(k * b))
            .collect::<Option<Vec<_>>>()
            .map(RootVector)
    }

    /// All ν with ht ν <= h in the given rank (ν = 0 included), ordered by height.
    pub fn up_to_height(rank: usize, h: u32) -> Vec<RootVector> {
        let mut out = Vec::new();
        for ht in 0..=h {
            let mut cur = vec![0u32; rank - 1];
            compositions(ht, 0, &mut cur, &mut out);
        }
        out
    }
}

fn compositions(left: u32, pos: usize, cur: &mut Vec<u32>, out: &mut Vec<RootVector>) {
    if pos + 1 == cur.len() {
        cur[pos] = left;
        out.push(RootVector(cur.clone()));
        return;
    }
    for x in (0..=left).rev() {
        cur[pos] = x;
        compositions(left - x, pos + 1, cur, out);
    }
}

impl FromStr for RootVector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad root coefficient '{t}'"))))
            .collect::<Result<Vec<_>>>()
            .map(RootVector)
    }
}

impl fmt::Display for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// λ in h-coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weight(pub Vec<Rational>);

impl Weight {
    pub fn coords(&self) -> &[Rational] {
        &self.0
    }
}

impl FromStr for Weight {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        crate::exactalg::rational::parse_rational_list(s).map(Weight)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// (h_α(λ), h_ᾱ(λ))
pub fn coroot_values(lambda: &Weight, alpha: Root) -> (Rational, Rational) {
    let (a, b) = (&lambda.0[alpha.i], &lambda.0[alpha.j]);
    (a - b, a + b)
}

pub fn weyl_reflect(lambda: &Weight, alpha: Root) -> Weight {
    let mut v = lambda.0.clone();
    v.swap(alpha.i, alpha.j);
    Weight(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Species {
    /// even negative
    F,
    /// odd negative
    OddF,
    /// even Cartan
    H,
    /// odd Cartan
    OddH,
    /// odd positive
    OddE,
    /// even positive
    E,
}

impl Species {
    pub fn is_odd(self) -> bool {
        matches!(self, Species::OddF | Species::OddH | Species::OddE)
    }

    pub fn symbol(self) -> char {
        match self {
            Species::F => 'f',
            Species::OddF => 'F',
            Species::H => 'h',
            Species::OddH => 'H',
            Species::OddE => 'E',
            Species::E => 'e',
        }
    }

    pub fn is_positive(self) -> bool {
        matches!(self, Species::E | Species::OddE)
    }

    pub fn is_negative(self) -> bool {
        matches!(self, Species::F | Species::OddF)
    }
}

/// A basis element. Root generators use (i, j) with i < j; Cartan ones use `i`
/// (for sq, odd Cartan index k stands for H_k - H_{k+1}).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenIndex {
    pub species: Species,
    pub i: usize,
    pub j: usize,
}

impl GenIndex {
    pub fn root(species: Species, r: Root) -> Self {
        GenIndex { species, i: r.i, j: r.j }
    }

    pub fn cartan(species: Species, i: usize) -> Self {
        GenIndex { species, i, j: 0 }
    }

    pub fn is_odd(&self) -> bool {
        self.species.is_odd()
    }
}

impl fmt::Display for GenIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.species {
            Species::H | Species::OddH => write!(f, "{}{}", self.species.symbol(), self.i + 1),
            s => write!(f, "{}({},{})", s.symbol(), self.i + 1, self.j + 1),
        }
    }
}

/// Sparse linear combination of basis indices.
pub type Combo = Vec<(usize, Rational)>;

/// Ordered basis of q(n) or sq(n) with a precomputed bracket table.
#[derive(Clone, Debug)]
pub struct Basis {
    kind: AlgebraKind,
    gens: Vec<GenIndex>,
    index: BTreeMap<GenIndex, usize>,
    table: Vec<Combo>,
}

/// Entries (is_odd, row, col, coefficient) of a gl|gl element.
type GlElement = Vec<(bool, usize, usize, Rational)>;

impl Basis {
    /// Basis of the parent algebra (q or sq) in PBW order:
    /// f < F < h < H < E < e, each block lex by index.
    pub fn new(kind: AlgebraKind) -> Self {
        let n = kind.rank();
        let roots = positive_roots(n);
        let mut gens = Vec::new();
        gens.extend(roots.iter().map(|&r| GenIndex::root(Species::F, r)));
        gens.extend(roots.iter().map(|&r| GenIndex::root(Species::OddF, r)));
        gens.extend((0..n).map(|i| GenIndex::cartan(Species::H, i)));
        gens.extend((0..kind.odd_cartan_dim()).map(|i| GenIndex::cartan(Species::OddH, i)));
        gens.extend(roots.iter().map(|&r| GenIndex::root(Species::OddE, r)));
        gens.extend(roots.iter().map(|&r| GenIndex::root(Species::E, r)));
        let index = gens.iter().enumerate().map(|(k, g)| (*g, k)).collect();
        let mut basis = Basis { kind, gens, index, table: Vec::new() };
        let d = basis.gens.len();
        let mut table = Vec::with_capacity(d * d);
        for a in 0..d {
            for b in 0..d {
                table.push(basis.compute_bracket(a, b));
            }
        }
        basis.table = table;
        basis
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn gen(&self, k: usize) -> GenIndex {
        self.gens[k]
    }

    pub fn gens(&self) -> &[GenIndex] {
        &self.gens
    }

    pub fn is_odd(&self, k: usize) -> bool {
        self.gens[k].is_odd()
    }

    pub fn index_of(&self, g: GenIndex) -> Result<usize> {
        self.index.get(&g).copied().ok_or_else(|| Error::InvalidIndex(format!("{g} in {}", self.kind)))
    }

    /// Index of a generator in the family of the given species.
    pub fn find(&self, species: Species, i: usize, j: usize) -> Result<usize> {
        let g = match species {
            Species::H | Species::OddH => GenIndex::cartan(species, i),
            _ => GenIndex { species, i, j },
        };
        self.index_of(g)
    }

    /// Weight in simple-root coordinates (signed).
    pub fn weight(&self, k: usize) -> Vec<i64> {
        let g = self.gens[k];
        let mut w = vec![0i64; self.kind.rank() - 1];
        let sign = match g.species {
            Species::E | Species::OddE => 1,
            Species::F | Species::OddF => -1,
            _ => return w,
        };
        for x in &mut w[g.i..g.j] {
            *x = sign;
        }
        w
    }

    /// Super-bracket [a, b] as a combination of basis indices.
    pub fn bracket(&self, a: usize, b: usize) -> &Combo {
        &self.table[a * self.gens.len() + b]
    }

    fn to_gl(&self, k: usize) -> GlElement {
        let g = self.gens[k];
        let one = Rational::one();
        match g.species {
            Species::E => vec![(false, g.i, g.j, one)],
            Species::F => vec![(false, g.j, g.i, one)],
            Species::OddE => vec![(true, g.i, g.j, one)],
            Species::OddF => vec![(true, g.j, g.i, one)],
            Species::H => vec![(false, g.i, g.i, one)],
            Species::OddH if self.kind.is_special() => {
                vec![(true, g.i, g.i, one), (true, g.i + 1, g.i + 1, -Rational::one())]
            }
            Species::OddH => vec![(true, g.i, g.i, one)],
        }
    }

    fn from_gl(&self, x: GlElement) -> Combo {
        let n = self.kind.rank();
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        let mut odd_diag = vec![Rational::zero(); n];
        for (odd, r, c, v) in x {
            if v.is_zero() {
                continue;
            }
            let g = match (odd, r.cmp(&c)) {
                (false, std::cmp::Ordering::Less) => GenIndex { species: Species::E, i: r, j: c },
                (false, std::cmp::Ordering::Greater) => GenIndex { species: Species::F, i: c, j: r },
                (false, std::cmp::Ordering::Equal) => GenIndex::cartan(Species::H, r),
                (true, std::cmp::Ordering::Less) => GenIndex { species: Species::OddE, i: r, j: c },
                (true, std::cmp::Ordering::Greater) => GenIndex { species: Species::OddF, i: c, j: r },
                (true, std::cmp::Ordering::Equal) => {
                    odd_diag[r] += v;
                    continue;
                }
            };
            *acc.entry(self.index[&g]).or_insert_with(Rational::zero) += v;
        }
        if self.kind.is_special() {
            // Σ c_i o_ii with Σ c_i = 0 has H'-coordinates d_k = c_1 + ... + c_k
            assert!(odd_diag.iter().sum::<Rational>().is_zero(), "odd diagonal leaves sq");
            let mut d = Rational::zero();
            for (k, c) in odd_diag.iter().take(n - 1).enumerate() {
                d += c;
                if !d.is_zero() {
                    let idx = self.index[&GenIndex::cartan(Species::OddH, k)];
                    *acc.entry(idx).or_insert_with(Rational::zero) += d.clone();
                }
            }
        } else {
            for (k, c) in odd_diag.into_iter().enumerate() {
                if !c.is_zero() {
                    let idx = self.index[&GenIndex::cartan(Species::OddH, k)];
                    *acc.entry(idx).or_insert_with(Rational::zero) += c;
                }
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    fn compute_bracket(&self, a: usize, b: usize) -> Combo {
        let mut out = GlElement::new();
        for (oa, i, j, x) in self.to_gl(a) {
            for (ob, k, l, y) in self.to_gl(b) {
                let c = &x * &y;
                // [X_{E_ij}, X_{E_kl}] on parities: even-even and even-odd give the
                // commutator; odd-odd gives the anticommutator in the even part.
                match (oa, ob) {
                    (true, true) => {
                        if j == k {
                            out.push((false, i, l, c.clone()));
                        }
                        if l == i {
                            out.push((false, k, j, c));
                        }
                    }
                    _ => {
                        let odd = oa || ob;
                        if j == k {
                            out.push((odd, i, l, c.clone()));
                        }
                        if l == i {
                            out.push((odd, k, j, -c));
                        }
                    }
                }
            }
        }
        self.from_gl(out)
    }

    /// Pretty name of a combination.
    pub fn fmt_combo(&self, c: &Combo) -> String {
        if c.is_empty() {
            return "0".into();
        }
        c.iter().map(|(k, v)| format!("{}*{}", v, self.gens[*k])).collect::<Vec<_>>().join(" + ")
    }

    /// The symmetric form [H'_a, H'_b] on the odd Cartan basis, as polynomials in h.
    pub fn odd_cartan_form(&self) -> Vec<Vec<Polynomial>> {
        let n = self.kind.rank();
        let nn = self.kind.odd_cartan_dim();
        let first = self.index[&GenIndex::cartan(Species::OddH, 0)];
        let h0 = self.index[&GenIndex::cartan(Species::H, 0)];
        (0..nn)
            .map(|a| {
                (0..nn)
                    .map(|b| {
                        let mut p = Polynomial::zero(n);
                        for (k, v) in self.bracket(first + a, first + b) {
                            p.add_term(crate::exactalg::Monomial::var(n, k - h0), v.clone());
                        }
                        p
                    })
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(f: Family, n: usize) -> Basis {
        Basis::new(AlgebraKind::new(f, n).unwrap())
    }

    #[test]
    fn rejects_small_projective() {
        assert!(AlgebraKind::new(Family::PQ, 2).is_err());
        assert!(AlgebraKind::new(Family::PSQ, 2).is_err());
        assert!(AlgebraKind::new(Family::Q, 2).is_ok());
    }

    #[test]
    fn root_counts() {
        assert_eq!(positive_roots(2), vec![Root { i: 0, j: 1 }]);
        assert_eq!(positive_roots(3).len(), 3);
        assert_eq!(positive_roots(5).len(), 10);
    }

    #[test]
    fn named_brackets() {
        let b = basis(Family::Q, 2);
        let r = Root { i: 0, j: 1 };
        let e = b.index_of(GenIndex::root(Species::E, r)).unwrap();
        let f = b.index_of(GenIndex::root(Species::F, r)).unwrap();
        let oe = b.index_of(GenIndex::root(Species::OddE, r)).unwrap();
        let h1 = b.find(Species::H, 0, 0).unwrap();
        let h2 = b.find(Species::H, 1, 0).unwrap();
        let oh1 = b.find(Species::OddH, 0, 0).unwrap();
        let oh2 = b.find(Species::OddH, 1, 0).unwrap();
        assert_eq!(b.bracket(e, f), &vec![(h1, rat(1)), (h2, rat(-1))]);
        assert_eq!(b.bracket(oe, f), &vec![(oh1, rat(1)), (oh2, rat(-1))]);
        assert_eq!(b.bracket(oh1, oh1), &vec![(h1, rat(2))]);
        assert!(b.bracket(oh1, oh2).is_empty());
        assert!(b.bracket(oe, oe).is_empty());
    }

    #[test]
    fn sq_odd_cartan_form() {
        let b = basis(Family::SQ, 3);
        let form = b.odd_cartan_form();
        assert_eq!(form[0][0].to_string(), "2*h1 + 2*h2");
        assert_eq!(form[0][1].to_string(), "-2*h2");
        assert_eq!(form[1][1].to_string(), "2*h2 + 2*h3");
    }

    #[test]
    fn weights_and_reflections() {
        let l = Weight(vec![rat(3), rat(1)]);
        let a = Root { i: 0, j: 1 };
        assert_eq!(coroot_values(&l, a), (rat(2), rat(4)));
        assert_eq!(weyl_reflect(&l, a), Weight(vec![rat(1), rat(3)]));
        assert_eq!(weyl_reflect(&weyl_reflect(&l, a), a), l);
    }

    #[test]
    fn projection_drops_last_variable() {
        let k = AlgebraKind::new(Family::PQ, 3).unwrap();
        let p = Polynomial::var(3, 2);
        assert_eq!(k.project(&p).unwrap().to_string(), "-h1 - h2");
    }
}
