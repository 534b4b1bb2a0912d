//! Multimodular evaluation/interpolation for determinants of polynomial
//! matrices too large for symbolic elimination.
//!
//! A polynomial of total degree <= D in n variables is determined by its values
//! on the simplex lattice {a in Z^n_{>=0} : |a| <= D}. Values are computed
//! modulo several 62-bit primes and combined by CRT against an explicit
//! coefficient bound, so every result here is exact.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::matrix::PolyMatrix;
use super::poly::Polynomial;
use super::rational::{common_denominator, Rational};
use crate::error::{Error, Result};

/// Montgomery arithmetic modulo an odd prime below 2^62.
#[derive(Clone, Copy, Debug)]
pub struct Mont {
    p: u64,
    pinv: u64,
    r2: u64,
}

impl Mont {
    pub fn new(p: u64) -> Self {
        assert!(p % 2 == 1 && p < (1 << 62));
        let mut inv: u64 = 1;
        for _ in 0..7 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        Mont { p, pinv: inv.wrapping_neg(), r2 }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.pinv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn to_mont(&self, a: u64) -> u64 {
        self.mul(a % self.p, self.r2)
    }

    pub fn from_mont(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    pub fn one(&self) -> u64 {
        self.to_mont(1)
    }

    pub fn from_bigint(&self, x: &BigInt) -> u64 {
        let r = x.mod_floor(&BigInt::from(self.p));
        self.to_mont(r.to_u64().expect("residue fits"))
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = self.one();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Descending primes just below 2^62.
pub fn large_primes() -> impl Iterator<Item = u64> {
    let mut next = (1u64 << 62) - 1;
    std::iter::from_fn(move || {
        while !is_prime_u64(next) {
            next -= 2;
        }
        let p = next;
        next -= 2;
        Some(p)
    })
}

/// Polynomial matrix with each row scaled to integer coefficients.
#[derive(Clone, Debug)]
pub struct IntMatrix {
    n: usize,
    arity: usize,
    entries: Vec<Vec<(Vec<u32>, BigInt)>>,
    /// det(original) = det(this) / scale
    scale: BigInt,
}

impl IntMatrix {
    pub fn from_poly(m: &PolyMatrix) -> Self {
        assert!(m.is_square());
        let n = m.rows();
        let mut scale = BigInt::one();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            let row = m.row(i);
            let d = common_denominator(row.iter().flat_map(|p| p.terms().map(|(_, c)| c)));
            scale *= &d;
            let dq = Rational::from_integer(d);
            for p in row {
                entries.push(
                    p.terms()
                        .map(|(mono, c)| (mono.exps().to_vec(), (c * &dq).to_integer()))
                        .collect(),
                );
            }
        }
        IntMatrix { n, arity: m.arity(), entries, scale }
    }

    fn entry(&self, i: usize, j: usize) -> &[(Vec<u32>, BigInt)] {
        &self.entries[i * self.n + j]
    }

    fn degree(&self, i: usize, j: usize) -> Option<u32> {
        self.entry(i, j).iter().map(|(e, _)| e.iter().sum()).max()
    }

    /// prod_i sum_j ||b_ij||_1, bounding every coefficient of the determinant.
    pub fn coefficient_bound(&self) -> BigUint {
        let mut bound = BigUint::one();
        for i in 0..self.n {
            let mut row = BigUint::zero();
            for j in 0..self.n {
                for (_, c) in self.entry(i, j) {
                    row += c.magnitude();
                }
            }
            bound *= row;
        }
        bound
    }

    /// Max over permutations of the summed entry degrees (assignment problem);
    /// `None` when every permutation hits a zero entry.
    pub fn degree_bound(&self) -> Option<u32> {
        let n = self.n;
        if n == 0 {
            return Some(0);
        }
        let degs: Vec<Vec<Option<u32>>> =
            (0..n).map(|i| (0..n).map(|j| self.degree(i, j)).collect()).collect();
        let maxd = degs.iter().flatten().flatten().copied().max().unwrap_or(0) as i64;
        let forbidden = (maxd + 1) * (n as i64 + 1) + 1;
        let cost: Vec<Vec<i64>> = degs
            .iter()
            .map(|r| r.iter().map(|d| d.map_or(forbidden, |d| maxd - d as i64)).collect())
            .collect();
        let assign = hungarian(&cost);
        let mut total = 0u32;
        for (i, &j) in assign.iter().enumerate() {
            total += degs[i][j]?;
        }
        Some(total)
    }
}

/// Minimum-cost assignment; returns column assigned to each row.
fn hungarian(cost: &[Vec<i64>]) -> Vec<usize> {
    let n = cost.len();
    let inf = i64::MAX / 4;
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut ans = vec![0usize; n];
    for j in 1..=n {
        if p[j] > 0 {
            ans[p[j] - 1] = j - 1;
        }
    }
    ans
}

/// Dense storage for polynomials of total degree <= d in `n` variables,
/// indexed by exponent vectors with stride d+1.
#[derive(Clone, Debug)]
pub struct SimplexGrid {
    n: usize,
    d: u32,
}

impl SimplexGrid {
    pub fn new(n: usize, d: u32) -> Self {
        SimplexGrid { n, d }
    }

    fn size(&self) -> usize {
        (self.d as usize + 1).pow(self.n as u32)
    }

    fn stride(&self, v: usize) -> usize {
        (self.d as usize + 1).pow(v as u32)
    }

    fn index(&self, a: &[u32]) -> usize {
        a.iter().rev().fold(0, |acc, &x| acc * (self.d as usize + 1) + x as usize)
    }

    /// All lattice points of the simplex, in increasing index order.
    pub fn points(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut a = vec![0u32; self.n];
        if self.n == 0 {
            out.push(a);
            return out;
        }
        loop {
            out.push(a.clone());
            // odometer increment restricted to the simplex
            let mut v = 0;
            loop {
                if v == self.n {
                    return out;
                }
                a[v] += 1;
                if a.iter().sum::<u32>() <= self.d {
                    break;
                }
                a[v] = 0;
                v += 1;
            }
        }
    }
}

/// Prepared evaluation data for one prime.
struct ModContext<'a> {
    mont: Mont,
    m: &'a IntMatrix,
    coeffs: Vec<Vec<(usize, u64)>>,
    exps: Vec<Vec<u32>>,
    pow: Vec<Vec<Vec<u64>>>,
}

impl<'a> ModContext<'a> {
    fn new(m: &'a IntMatrix, p: u64, d: u32) -> Self {
        let mont = Mont::new(p);
        let mut exps: Vec<Vec<u32>> = Vec::new();
        let mut index = std::collections::HashMap::new();
        let mut maxe = vec![0u32; m.arity];
        let coeffs = m
            .entries
            .iter()
            .map(|terms| {
                terms
                    .iter()
                    .map(|(e, c)| {
                        let k = *index.entry(e.clone()).or_insert_with(|| {
                            exps.push(e.clone());
                            exps.len() - 1
                        });
                        for (v, &x) in e.iter().enumerate() {
                            maxe[v] = maxe[v].max(x);
                        }
                        (k, mont.from_bigint(c))
                    })
                    .collect()
            })
            .collect();
        let pow = (0..m.arity)
            .map(|v| {
                (0..=d)
                    .map(|x| {
                        let base = mont.to_mont(x as u64);
                        let mut row = vec![mont.one()];
                        for _ in 0..maxe[v] {
                            let last = *row.last().unwrap();
                            row.push(mont.mul(last, base));
                        }
                        row
                    })
                    .collect()
            })
            .collect();
        ModContext { mont, m, coeffs, exps, pow }
    }

    fn det_at(&self, point: &[u32], scratch: &mut Vec<u64>, monos: &mut Vec<u64>) -> u64 {
        let mt = &self.mont;
        monos.clear();
        for e in &self.exps {
            let mut v = mt.one();
            for (var, &k) in e.iter().enumerate() {
                if k > 0 {
                    v = mt.mul(v, self.pow[var][point[var] as usize][k as usize]);
                }
            }
            monos.push(v);
        }
        let n = self.m.n;
        scratch.clear();
        for terms in &self.coeffs {
            let mut s = 0u64;
            for &(k, c) in terms {
                s = mt.add(s, mt.mul(c, monos[k]));
            }
            scratch.push(s);
        }
        det_mod(mt, scratch, n)
    }
}

/// Determinant of a dense n x n matrix in Montgomery form; destroys `a`.
fn det_mod(mt: &Mont, a: &mut [u64], n: usize) -> u64 {
    let mut det = mt.one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| a[i * n + k] != 0) else { return 0 };
        if p != k {
            for j in k..n {
                a.swap(p * n + j, k * n + j);
            }
            det = mt.sub(0, det);
        }
        let piv = a[k * n + k];
        det = mt.mul(det, piv);
        let inv = mt.inv(piv);
        for i in (k + 1)..n {
            let f = a[i * n + k];
            if f == 0 {
                continue;
            }
            let f = mt.mul(f, inv);
            for j in (k + 1)..n {
                let t = mt.mul(f, a[k * n + j]);
                a[i * n + j] = mt.sub(a[i * n + j], t);
            }
        }
    }
    det
}

fn grid_values(ctx: &ModContext<'_>, grid: &SimplexGrid, points: &[Vec<u32>]) -> Vec<u64> {
    let mut vals = vec![0u64; grid.size()];
    let mut scratch = Vec::new();
    let mut monos = Vec::new();
    for a in points {
        vals[grid.index(a)] = ctx.det_at(a, &mut scratch, &mut monos);
    }
    vals
}

/// Turns grid values into monomial coefficients (both mod p, Montgomery form).
fn interpolate(mt: &Mont, grid: &SimplexGrid, points: &[Vec<u32>], vals: &mut [u64]) {
    let d = grid.d;
    let invs: Vec<u64> = (0..=d as u64).map(|k| if k == 0 { 0 } else { mt.inv(mt.to_mont(k)) }).collect();
    let consts: Vec<u64> = (0..=d as u64).map(|k| mt.to_mont(k)).collect();
    for v in 0..grid.n {
        let stride = grid.stride(v);
        for a in points.iter().filter(|a| a[v] == 0) {
            let m = (d - a.iter().sum::<u32>()) as usize;
            let base = grid.index(a);
            let idx = |k: usize| base + k * stride;
            // divided differences with unit spacing
            for k in 1..=m {
                for i in (k..=m).rev() {
                    let diff = mt.sub(vals[idx(i)], vals[idx(i - 1)]);
                    vals[idx(i)] = mt.mul(diff, invs[k]);
                }
            }
        }
    }
    // all dimensions must be in Newton form before converting any of them
    for v in 0..grid.n {
        let stride = grid.stride(v);
        for a in points.iter().filter(|a| a[v] == 0) {
            let m = (d - a.iter().sum::<u32>()) as usize;
            let base = grid.index(a);
            let idx = |k: usize| base + k * stride;
            // Newton basis x(x-1)...(x-k+1) to monomials
            let mut poly = vec![0u64; m + 1];
            poly[0] = vals[idx(m)];
            let mut len = 1;
            for k in (0..m).rev() {
                // poly = poly * (x - k) + c_k
                let mut next = vec![0u64; len + 1];
                for (i, &c) in poly[..len].iter().enumerate() {
                    next[i + 1] = mt.add(next[i + 1], c);
                    next[i] = mt.sub(next[i], mt.mul(c, consts[k]));
                }
                next[0] = mt.add(next[0], vals[idx(k)]);
                len += 1;
                poly[..len].copy_from_slice(&next);
            }
            for (k, c) in poly.into_iter().enumerate() {
                vals[idx(k)] = c;
            }
        }
    }
}

fn primes_for(bound_bits: u64) -> Vec<u64> {
    let mut primes = Vec::new();
    let mut bits = 0u64;
    for p in large_primes() {
        primes.push(p);
        bits += 61;
        if bits > bound_bits + 1 {
            break;
        }
    }
    primes
}

/// Exact determinant by multimodular evaluation, interpolation and CRT.
pub fn det_multimodular(m: &PolyMatrix) -> Result<Polynomial> {
    if !m.is_square() {
        return Err(Error::Shape("determinant of non-square matrix".into()));
    }
    let im = IntMatrix::from_poly(m);
    let arity = m.arity();
    let Some(d) = im.degree_bound() else { return Ok(Polynomial::zero(arity)) };
    let grid = SimplexGrid::new(arity, d);
    let points = grid.points();
    let primes = primes_for(im.coefficient_bound().bits());
    let mut residues: Vec<BigInt> = vec![BigInt::zero(); points.len()];
    let mut modulus = BigInt::one();
    for &p in &primes {
        let ctx = ModContext::new(&im, p, d);
        let mut vals = grid_values(&ctx, &grid, &points);
        interpolate(&ctx.mont, &grid, &points, &mut vals);
        let pb = BigInt::from(p);
        let minv = BigInt::from(ctx.mont.from_mont(ctx.mont.inv(ctx.mont.from_bigint(&modulus))));
        for (r, a) in residues.iter_mut().zip(&points) {
            let c = BigInt::from(ctx.mont.from_mont(vals[grid.index(a)]));
            let delta = ((c - &*r) * &minv).mod_floor(&pb);
            *r += &modulus * delta;
        }
        modulus *= pb;
    }
    let half = &modulus >> 1;
    let scale = Rational::from_integer(im.scale.clone());
    let mut out = Polynomial::zero(arity);
    for (r, a) in residues.into_iter().zip(points) {
        let c = if r > half { r - &modulus } else { r };
        if !c.is_zero() {
            out.add_term(super::poly::Monomial::new(a), Rational::from_integer(c) / &scale);
        }
    }
    Ok(out)
}

/// Outcome of certifying `det m = scalar * prod factors[i]^multiplicities[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetCertificate {
    pub scalar: Rational,
    pub multiplicities: Vec<u32>,
    pub degree_bound: u32,
    pub primes: usize,
}

/// Primitive integer version of a polynomial with rational coefficients,
/// together with the rational `c` such that `p = c * prim`.
pub fn primitive_part(p: &Polynomial) -> (Rational, Vec<(Vec<u32>, BigInt)>) {
    let den = common_denominator(p.terms().map(|(_, c)| c));
    let ints: Vec<(Vec<u32>, BigInt)> = p
        .terms()
        .map(|(m, c)| (m.exps().to_vec(), (c * Rational::from_integer(den.clone())).to_integer()))
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |g, (_, c)| g.gcd(c));
    let ints: Vec<(Vec<u32>, BigInt)> = ints.into_iter().map(|(e, c)| (e, c / &content)).collect();
    (Rational::new(content, den), ints)
}

/// Divides a dense mod-p polynomial by a linear form; `None` if inexact.
fn divide_linear(mt: &Mont, grid: &SimplexGrid, points: &[Vec<u32>], poly: &[u64], lin: &[u64]) -> Option<Vec<u64>> {
    // lin[0] constant, lin[1 + i] coefficient of variable i (Montgomery form)
    let n = grid.n;
    let v = (0..n).find(|&i| lin[1 + i] != 0)?;
    let inv_lead = mt.inv(lin[1 + v]);
    let mut q = vec![0u64; poly.len()];
    let mut order: Vec<&Vec<u32>> = points.iter().collect();
    order.sort_by(|a, b| b[v].cmp(&a[v]));
    for a in order {
        let idx = grid.index(a);
        // (g*Q)[a] with g = lin - lead*x_v
        let mut gq = mt.mul(lin[0], q[idx]);
        for i in (0..n).filter(|&i| i != v && a[i] > 0 && lin[1 + i] != 0) {
            gq = mt.add(gq, mt.mul(lin[1 + i], q[idx - grid.stride(i)]));
        }
        let rest = mt.sub(poly[idx], gq);
        if a[v] > 0 {
            q[idx - grid.stride(v)] = mt.mul(rest, inv_lead);
        } else if rest != 0 {
            return None;
        }
    }
    Some(q)
}

fn lin_mod(mt: &Mont, n: usize, f: &[(Vec<u32>, BigInt)]) -> Option<Vec<u64>> {
    let mut lin = vec![0u64; n + 1];
    for (e, c) in f {
        let deg: u32 = e.iter().sum();
        match deg {
            0 => lin[0] = mt.add(lin[0], mt.from_bigint(c)),
            1 => {
                let i = e.iter().position(|&x| x == 1).unwrap();
                lin[1 + i] = mt.add(lin[1 + i], mt.from_bigint(c));
            }
            _ => return None,
        }
    }
    Some(lin)
}

/// Certifies that `det m` equals a rational scalar times a product of powers
/// of the given linear factors, determining the multiplicities.
///
/// Multiplicities are read off modulo the first prime; the identity is then
/// checked on the full simplex lattice modulo enough primes to exceed the
/// coefficient bounds of both sides, which makes the equality exact.
pub fn certify_linear_factorization(m: &PolyMatrix, factors: &[Polynomial]) -> Result<DetCertificate> {
    if !m.is_square() {
        return Err(Error::Shape("determinant of non-square matrix".into()));
    }
    let arity = m.arity();
    let im = IntMatrix::from_poly(m);
    let d = im
        .degree_bound()
        .ok_or_else(|| Error::FactorizationMismatch("determinant is identically zero".into()))?;
    let prims: Vec<(Rational, Vec<(Vec<u32>, BigInt)>)> = factors.iter().map(primitive_part).collect();
    if prims.iter().any(|(_, f)| f.iter().any(|(e, _)| e.iter().sum::<u32>() > 1)) {
        return Err(Error::Shape("factor is not linear".into()));
    }
    let grid = SimplexGrid::new(arity, d);
    let points = grid.points();
    let mut primes = large_primes();
    let p0 = primes.next().unwrap();
    let ctx0 = ModContext::new(&im, p0, d);
    let mut vals0 = grid_values(&ctx0, &grid, &points);

    // multiplicities modulo the first prime
    let mut coeffs = vals0.clone();
    interpolate(&ctx0.mont, &grid, &points, &mut coeffs);
    let mut mults = Vec::with_capacity(prims.len());
    for (_, f) in &prims {
        let lin = lin_mod(&ctx0.mont, arity, f).unwrap();
        let mut k = 0;
        while coeffs.iter().any(|&c| c != 0) {
            match divide_linear(&ctx0.mont, &grid, &points, &coeffs, &lin) {
                Some(q) => {
                    coeffs = q;
                    k += 1;
                }
                None => break,
            }
        }
        mults.push(k);
    }
    let zero_idx = grid.index(&vec![0; arity]);
    if coeffs.iter().enumerate().any(|(i, &c)| i != zero_idx && c != 0) || coeffs[zero_idx] == 0 {
        return Err(Error::FactorizationMismatch(format!(
            "cofactor after removing the closed-form factors is not a nonzero constant (mod {p0})"
        )));
    }
    let total: u32 = mults.iter().sum();
    if total > d {
        return Err(Error::FactorizationMismatch("factor degrees exceed the degree bound".into()));
    }

    // exact scalar from one rational evaluation
    let a0: Vec<Rational> = (0..arity)
        .map(|i| Rational::from_integer(BigInt::from(1_000_003i64 * (i as i64 + 1) + 7i64.pow(i as u32 + 1))))
        .collect();
    let mut fprod = Rational::one();
    for ((_, f), &k) in prims.iter().zip(&mults) {
        let fv: Rational = f
            .iter()
            .map(|(e, c)| {
                let mut t = Rational::from_integer(c.clone());
                for (x, &k) in a0.iter().zip(e) {
                    if k > 0 {
                        t *= x;
                    }
                }
                t
            })
            .sum();
        if fv.is_zero() {
            return Err(Error::FactorizationMismatch("evaluation point hits a factor".into()));
        }
        fprod *= num_traits::pow(fv, k as usize);
    }
    let det0 = m.evaluate(&a0)?.det();
    if det0.is_zero() {
        return Err(Error::FactorizationMismatch("determinant vanishes at a generic point".into()));
    }
    let c_prim = det0 / fprod;
    let c_int = &c_prim * Rational::from_integer(im.scale.clone());
    if !c_int.is_integer() {
        return Err(Error::FactorizationMismatch("scalar is not compatible with an integral determinant".into()));
    }
    let c_int = c_int.to_integer();

    // bounds on both sides of the identity
    let mut rhs_bound: BigUint = c_int.magnitude().clone();
    for ((_, f), &k) in prims.iter().zip(&mults) {
        let norm: BigUint = f.iter().map(|(_, c)| c.magnitude().clone()).sum();
        rhs_bound *= num_traits::pow(norm, k as usize);
    }
    let bound_bits = im.coefficient_bound().bits().max(rhs_bound.bits()) + 1;

    let mut checked_bits = 0u64;
    let mut used = 0usize;
    let mut current: Option<(Mont, Vec<u64>)> = Some((ctx0.mont, std::mem::take(&mut vals0)));
    loop {
        let (mt, vals) = match current.take() {
            Some(x) => x,
            None => {
                let p = primes.next().unwrap();
                let ctx = ModContext::new(&im, p, d);
                let vals = grid_values(&ctx, &grid, &points);
                (ctx.mont, vals)
            }
        };
        let lins: Vec<Vec<u64>> = prims.iter().map(|(_, f)| lin_mod(&mt, arity, f).unwrap()).collect();
        let cm = mt.from_bigint(&c_int);
        for a in &points {
            let mut rhs = cm;
            for (lin, &k) in lins.iter().zip(&mults) {
                if k == 0 {
                    continue;
                }
                let mut lv = lin[0];
                for (i, &x) in a.iter().enumerate() {
                    if x > 0 && lin[1 + i] != 0 {
                        lv = mt.add(lv, mt.mul(lin[1 + i], mt.to_mont(x as u64)));
                    }
                }
                rhs = mt.mul(rhs, mt.pow(lv, k as u64));
            }
            if rhs != vals[grid.index(a)] {
                return Err(Error::FactorizationMismatch(format!(
                    "determinant differs from the factored form at {a:?} modulo {}",
                    mt.modulus()
                )));
            }
        }
        used += 1;
        checked_bits += 61;
        if checked_bits > bound_bits {
            break;
        }
    }

    let mut scalar = c_prim;
    for ((c, _), &k) in prims.iter().zip(&mults) {
        scalar /= num_traits::pow(c.clone(), k as usize);
    }
    Ok(DetCertificate { scalar, multiplicities: mults, degree_bound: d, primes: used })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::matrix::det_fraction_free;
    use crate::exactalg::rational::rat;

    #[test]
    fn montgomery_roundtrip() {
        let p = large_primes().next().unwrap();
        let mt = Mont::new(p);
        let a = mt.to_mont(123456789);
        let b = mt.to_mont(987654321);
        assert_eq!(mt.from_mont(mt.mul(a, b)), ((123456789u128 * 987654321u128) % p as u128) as u64);
        assert_eq!(mt.from_mont(mt.mul(a, mt.inv(a))), 1);
    }

    #[test]
    fn simplex_points_count() {
        assert_eq!(SimplexGrid::new(3, 4).points().len(), 35);
        assert_eq!(SimplexGrid::new(2, 5).points().len(), 21);
    }

    fn sample() -> PolyMatrix {
        let h = |i| Polynomial::var(2, i);
        let c = |k| Polynomial::from_int(2, k);
        PolyMatrix::from_rows(
            2,
            vec![
                vec![&h(0) + &c(1), h(1).scale(&crate::exactalg::rational::ratio(1, 2)), c(3)],
                vec![&h(0) * &h(1), &h(1) - &c(2), h(0)],
                vec![c(-1), &h(0) * &h(0), &h(1) + &h(0)],
            ],
        )
        .unwrap()
    }

    #[test]
    fn multimodular_matches_bareiss() {
        let m = sample();
        assert_eq!(det_multimodular(&m).unwrap(), det_fraction_free(&m).unwrap());
    }

    #[test]
    fn certificate_on_product_of_linear_forms() {
        let h = |i| Polynomial::var(2, i);
        let one = Polynomial::one(2);
        let l1 = &h(0) + &h(1);
        let l2 = &(&h(0) - &h(1)) - &one;
        let m = PolyMatrix::from_rows(
            2,
            vec![
                vec![l1.scale(&rat(3)), Polynomial::zero(2)],
                vec![h(1), &l1 * &l2],
            ],
        )
        .unwrap();
        let cert = certify_linear_factorization(&m, &[l1.clone(), l2.clone()]).unwrap();
        assert_eq!(cert.multiplicities, vec![2, 1]);
        assert_eq!(cert.scalar, rat(3));
    }
}
