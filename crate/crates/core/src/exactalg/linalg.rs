use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::rational::{common_denominator, Rational};

/// Dense matrix over Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rational>) -> Self {
        assert_eq!(data.len(), rows * cols);
        RatMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let data: Vec<Rational> = rows.into_iter().flatten().collect();
        Self::from_vec(r, c, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let mut scale = BigInt::one();
        let rows = (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                let d = common_denominator(row);
                scale *= &d;
                row.iter().map(|q| (q * Rational::from_integer(d.clone())).to_integer()).collect()
            })
            .collect();
        (rows, scale)
    }

    /// Rank via fraction-free integer elimination.
    pub fn rank(&self) -> usize {
        let (mut a, _) = self.integer_rows();
        let (m, n) = (self.rows, self.cols);
        let mut r = 0;
        let mut prev = BigInt::one();
        for c in 0..n {
            if r == m {
                break;
            }
            let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(p, r);
            let (top, bottom) = a.split_at_mut(r + 1);
            let prow = &top[r];
            for row in bottom.iter_mut() {
                let aic = std::mem::take(&mut row[c]);
                for j in (c + 1)..n {
                    let v = &prow[c] * &row[j] - &aic * &prow[j];
                    row[j] = if prev.is_one() { v } else { v.div_floor(&prev) };
                }
            }
            prev = a[r][c].clone();
            r += 1;
        }
        r
    }

    /// Exact determinant via fraction-free elimination.
    pub fn det(&self) -> Rational {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let (mut a, scale) = self.integer_rows();
        let mut prev = BigInt::one();
        let mut negate = false;
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return Rational::zero();
            };
            if p != k {
                a.swap(p, k);
                negate = !negate;
            }
            let (top, bottom) = a.split_at_mut(k + 1);
            let prow = &top[k];
            for row in bottom.iter_mut() {
                let aik = std::mem::take(&mut row[k]);
                for j in (k + 1)..n {
                    let v = &prow[k] * &row[j] - &aik * &prow[j];
                    row[j] = if prev.is_one() { v } else { v.div_floor(&prev) };
                }
            }
            prev = a[k][k].clone();
        }
        let d = if n == 0 { BigInt::one() } else { a[n - 1][n - 1].clone() };
        let d = if negate { -d } else { d };
        Rational::new(d, scale)
    }

    /// Gauss-Jordan inverse; `None` if singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut row = self.data[i * n..(i + 1) * n].to_vec();
                row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                row
            })
            .collect();
        for k in 0..n {
            let p = (k..n).find(|&i| !a[i][k].is_zero())?;
            a.swap(p, k);
            let inv = a[k][k].recip();
            for x in a[k].iter_mut() {
                *x *= &inv;
            }
            let pivot = a[k].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i == k || row[k].is_zero() {
                    continue;
                }
                let f = row[k].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        Some(RatMatrix::from_vec(n, n, a.into_iter().flat_map(|r| r.into_iter().skip(n)).collect()))
    }

    /// Basis of the right kernel `{v : A v = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let mut ech = SparseEchelon::new(self.cols);
        for i in 0..self.rows {
            let row: Vec<(usize, Rational)> = (0..self.cols)
                .filter(|&j| !self.get(i, j).is_zero())
                .map(|j| (j, self.get(i, j).clone()))
                .collect();
            ech.insert(row);
        }
        ech.nullspace()
    }
}

/// Incremental row echelon form over Q with sparse rows.
#[derive(Clone, Debug)]
pub struct SparseEchelon {
    cols: usize,
    pivots: BTreeMap<usize, BTreeMap<usize, Rational>>,
}

impl SparseEchelon {
    pub fn new(cols: usize) -> Self {
        SparseEchelon { cols, pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds a row; returns true if it increased the rank.
    pub fn insert(&mut self, row: impl IntoIterator<Item = (usize, Rational)>) -> bool {
        let mut work: BTreeMap<usize, Rational> = BTreeMap::new();
        for (j, v) in row {
            if !v.is_zero() {
                *work.entry(j).or_insert_with(Rational::zero) += v;
            }
        }
        work.retain(|_, v| !v.is_zero());
        let mut cursor = 0usize;
        loop {
            let Some((&c, v)) = work.range(cursor..).next() else { return false };
            let v = v.clone();
            match self.pivots.get(&c) {
                Some(prow) => {
                    for (j, pv) in prow {
                        let e = work.entry(*j).or_insert_with(Rational::zero);
                        *e -= &v * pv;
                        if e.is_zero() {
                            work.remove(j);
                        }
                    }
                    cursor = c + 1;
                }
                None => {
                    let inv = v.recip();
                    let prow: BTreeMap<usize, Rational> =
                        work.range(c..).map(|(j, x)| (*j, x * &inv)).collect();
                    self.pivots.insert(c, prow);
                    return true;
                }
            }
        }
    }

    fn reduced(&self) -> BTreeMap<usize, BTreeMap<usize, Rational>> {
        let mut rows = self.pivots.clone();
        let keys: Vec<usize> = rows.keys().copied().collect();
        for &p in keys.iter().rev() {
            let prow = rows[&p].clone();
            for &q in keys.iter().filter(|&&q| q < p) {
                let row = rows.get_mut(&q).unwrap();
                if let Some(f) = row.get(&p).cloned() {
                    for (j, v) in &prow {
                        let e = row.entry(*j).or_insert_with(Rational::zero);
                        *e -= &f * v;
                        if e.is_zero() {
                            row.remove(j);
                        }
                    }
                }
            }
        }
        rows
    }

    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let rows = self.reduced();
        let free: Vec<usize> = (0..self.cols).filter(|c| !rows.contains_key(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (&p, row) in &rows {
                    if let Some(x) = row.get(&f) {
                        v[p] = -x.clone();
                    }
                }
                v
            })
            .collect()
    }

    /// Coordinates of `target` in the span of inserted rows, if it lies there
    /// (returned as a reduced remainder test only).
    pub fn contains(&self, target: impl IntoIterator<Item = (usize, Rational)>) -> bool {
        let mut copy = self.clone();
        !copy.insert(target)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::rat;

    fn m(rows: Vec<Vec<i64>>) -> RatMatrix {
        RatMatrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(rat).collect()).collect())
    }

    #[test]
    fn rank_and_det() {
        let a = m(vec![vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        assert_eq!(a.det(), rat(0));
        let b = m(vec![vec![2, 1], vec![1, 3]]);
        assert_eq!(b.det(), rat(5));
    }

    #[test]
    fn kernel() {
        let a = m(vec![vec![1, 1, 0], vec![0, 1, 1]]);
        let ns = a.nullspace();
        assert_eq!(ns, vec![vec![rat(1), rat(-1), rat(1)]]);
    }
}
