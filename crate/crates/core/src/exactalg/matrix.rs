use num_traits::One;

use super::linalg::RatMatrix;
use super::poly::Polynomial;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Rectangular matrix of polynomials sharing one arity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    arity: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize, arity: usize) -> Self {
        PolyMatrix { rows, cols, arity, entries: vec![Polynomial::zero(arity); rows * cols] }
    }

    pub fn identity(n: usize, arity: usize) -> Self {
        let mut m = Self::zeros(n, n, arity);
        for i in 0..n {
            m.set(i, i, Polynomial::one(arity));
        }
        m
    }

    pub fn from_rows(arity: usize, rows: Vec<Vec<Polynomial>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Shape("ragged rows".into()));
            }
            for p in row {
                if p.arity() != arity {
                    return Err(Error::ArityMismatch { expected: arity, found: p.arity() });
                }
                entries.push(p);
            }
        }
        Ok(PolyMatrix { rows: r, cols: c, arity, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        assert_eq!(p.arity(), self.arity);
        self.entries[i * self.cols + j] = p;
    }

    pub fn row(&self, i: usize) -> &[Polynomial] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len(), self.arity);
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> Self {
        let entries: Vec<Polynomial> = self.entries.iter().map(f).collect();
        let arity = entries.first().map_or(self.arity, Polynomial::arity);
        PolyMatrix { rows: self.rows, cols: self.cols, arity, entries }
    }

    pub fn try_map(&self, f: impl Fn(&Polynomial) -> Result<Polynomial>) -> Result<Self> {
        let entries: Vec<Polynomial> = self.entries.iter().map(f).collect::<Result<_>>()?;
        let arity = entries.first().map_or(self.arity, Polynomial::arity);
        Ok(PolyMatrix { rows: self.rows, cols: self.cols, arity, entries })
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<RatMatrix> {
        let vals = self.entries.iter().map(|p| p.evaluate(point)).collect::<Result<Vec<_>>>()?;
        Ok(RatMatrix::from_vec(self.rows, self.cols, vals))
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows, self.arity);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn is_zero_entry(&self, i: usize, j: usize) -> bool {
        self.get(i, j).is_zero()
    }
}

fn pivot_weight(p: &Polynomial) -> (u32, usize) {
    (p.total_degree().unwrap_or(0), p.len())
}

/// Determinant by Bareiss fraction-free elimination; every division is exact.
pub fn det_fraction_free(m: &PolyMatrix) -> Result<Polynomial> {
    if !m.is_square() {
        return Err(Error::Shape(format!("{}x{} matrix has no determinant", m.rows, m.cols)));
    }
    let n = m.rows;
    let arity = m.arity;
    if n == 0 {
        return Ok(Polynomial::one(arity));
    }
    let mut a: Vec<Vec<Polynomial>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut prev = Polynomial::one(arity);
    let mut negate = false;
    for k in 0..n {
        // pick the lightest nonzero pivot in column k
        let piv = (k..n)
            .filter(|&i| !a[i][k].is_zero())
            .min_by_key(|&i| pivot_weight(&a[i][k]));
        let Some(p) = piv else {
            return Ok(Polynomial::zero(arity));
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        if k + 1 == n {
            break;
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let akk = &pivot_row[k];
        for row in bottom.iter_mut() {
            let aik = row[k].clone();
            for j in (k + 1)..n {
                let mut v = &row[j] * akk;
                if !aik.is_zero() && !pivot_row[j].is_zero() {
                    v = &v - &(&aik * &pivot_row[j]);
                }
                row[j] = if prev.is_one_poly() { v } else { v.divide_exact(&prev)? };
            }
            row[k] = Polynomial::zero(arity);
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { -d } else { d })
}

trait IsOnePoly {
    fn is_one_poly(&self) -> bool;
}

impl IsOnePoly for Polynomial {
    fn is_one_poly(&self) -> bool {
        self.constant_value().map_or(false, |c| c.is_one())
    }
}

/// Rank of the matrix evaluated at a rational point.
pub fn rank_at_point(m: &PolyMatrix, point: &[Rational]) -> Result<usize> {
    Ok(m.evaluate(point)?.rank())
}

/// Cofactor expansion; exponential, used as a test oracle on tiny matrices.
pub fn det_cofactor(m: &PolyMatrix) -> Polynomial {
    let n = m.rows;
    if n == 0 {
        return Polynomial::one(m.arity);
    }
    if n == 1 {
        return m.get(0, 0).clone();
    }
    let mut total = Polynomial::zero(m.arity);
    let rest: Vec<usize> = (1..n).collect();
    for j in 0..n {
        if m.get(0, j).is_zero() {
            continue;
        }
        let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
        let minor = det_cofactor(&m.submatrix(&rest, &cols));
        let term = m.get(0, j) * &minor;
        total = if j % 2 == 0 { &total + &term } else { &total - &term };
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::rat;

    #[test]
    fn two_by_two() {
        let h1 = Polynomial::var(2, 0);
        let h2 = Polynomial::var(2, 1);
        let m = PolyMatrix::from_rows(2, vec![vec![h1.clone(), Polynomial::one(2)], vec![h2.clone(), h1.clone()]]).unwrap();
        assert_eq!(det_fraction_free(&m).unwrap(), &(&h1 * &h1) - &h2);
    }

    #[test]
    fn identity_and_duplicates() {
        assert_eq!(det_fraction_free(&PolyMatrix::identity(5, 2)).unwrap(), Polynomial::one(2));
        let h1 = Polynomial::var(1, 0);
        let row = vec![h1.clone(), Polynomial::from_int(1, 3)];
        let m = PolyMatrix::from_rows(1, vec![row.clone(), row]).unwrap();
        assert!(det_fraction_free(&m).unwrap().is_zero());
    }

    #[test]
    fn ranks() {
        assert_eq!(rank_at_point(&PolyMatrix::zeros(3, 3, 1), &[rat(1)]).unwrap(), 0);
        assert_eq!(rank_at_point(&PolyMatrix::identity(4, 1), &[rat(1)]).unwrap(), 4);
    }
}
