//! Dense matrices over a field and over polynomial rings.

use std::fmt;

use super::field::{Field, Scalar};
use super::poly::Polynomial;
use crate::error::{Error, Result};

/// Row-major matrix of field elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: Field, cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Arrangement(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            data.extend(r);
        }
        Ok(Matrix { field, rows: nrows, cols, data })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn push_row(&mut self, row: Vec<Scalar>) {
        assert_eq!(row.len(), self.cols);
        self.data.extend(row);
        self.rows += 1;
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(self.field.zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    /// Reduced row echelon form and pivot columns. The pivot for each column
    /// is the first nonzero entry at or below the current row.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            if !inv.is_one() {
                for j in c..m.cols {
                    let v = m.get(r, j) * &inv;
                    m.set(r, j, v);
                }
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let pr = m.get(r, j);
                    if pr.is_zero() {
                        continue;
                    }
                    let v = m.get(i, j) - &(&f * pr);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space `{v : M v = 0}`, one vector per free
    /// column, with a 1 in that column.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![self.field.zero(); self.cols];
                v[f] = self.field.one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(i, f);
                }
                v
            })
            .collect()
    }

    pub fn determinant(&self) -> Result<Scalar> {
        if self.rows != self.cols {
            return Err(Error::Arrangement(format!("determinant of a {}x{} matrix", self.rows, self.cols)));
        }
        let rows: Vec<Vec<Scalar>> = (0..self.rows).map(|r| self.row(r).to_vec()).collect();
        Ok(bareiss(rows, self.field.one()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(|c| c.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// The commutative-ring operations needed by the determinant routines.
pub trait RingElem: Clone + PartialEq {
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn exact_div(&self, o: &Self) -> Option<Self>;
}

impl RingElem for Scalar {
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|i| self * &i)
    }
}

impl RingElem for Polynomial {
    fn is_zero(&self) -> bool {
        Polynomial::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, o: &Self) -> Option<Self> {
        Polynomial::exact_div(self, o)
    }
}

/// Fraction-free (Bareiss) determinant; every division is exact.
pub fn bareiss<R: RingElem>(mut a: Vec<Vec<R>>, one: R) -> R {
    let n = a.len();
    if n == 0 {
        return one;
    }
    let zero = one.sub(&one);
    let mut prev = one;
    let mut negate = false;
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return zero,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

/// Laplace expansion along the first row.
pub fn cofactor<R: RingElem>(a: &[Vec<R>], one: &R) -> R {
    let n = a.len();
    match n {
        0 => one.clone(),
        1 => a[0][0].clone(),
        2 => a[0][0].mul(&a[1][1]).sub(&a[0][1].mul(&a[1][0])),
        _ => {
            let mut acc = one.sub(one);
            for j in 0..n {
                if a[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<R>> = a[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect())
                    .collect();
                let term = a[0][j].mul(&cofactor(&minor, one));
                acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
    }
}

/// Square matrix of polynomials, all in the same ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: Vec<Vec<Polynomial>>,
}

impl PolyMatrix {
    pub fn from_rows(rows: Vec<Vec<Polynomial>>) -> Self {
        PolyMatrix { rows }
    }

    pub fn rows(&self) -> &[Vec<Polynomial>] {
        &self.rows
    }

    /// Exact determinant: cofactor expansion up to 3x3, Bareiss beyond.
    pub fn determinant(&self) -> Result<Polynomial> {
        let n = self.rows.len();
        if self.rows.iter().any(|r| r.len() != n) {
            return Err(Error::Arrangement("determinant of a non-square polynomial matrix".into()));
        }
        let Some(first) = self.rows.first().and_then(|r| r.first()) else {
            return Err(Error::Arrangement("determinant of an empty polynomial matrix".into()));
        };
        let one = Polynomial::one(first.field(), first.nvars());
        if n <= 3 {
            Ok(cofactor(&self.rows, &one))
        } else {
            Ok(bareiss(self.rows.clone(), one))
        }
    }

    pub fn determinant_bareiss(&self) -> Result<Polynomial> {
        let first = &self.rows[0][0];
        Ok(bareiss(self.rows.clone(), Polynomial::one(first.field(), first.nvars())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        Scalar::rational(n, 1)
    }

    #[test]
    fn identity_has_empty_kernel() {
        assert!(Matrix::identity(Field::Rationals, 2).kernel_basis().is_empty());
    }

    #[test]
    fn kernel_of_one_minus_one() {
        let m = Matrix::from_rows(Field::Rationals, 2, vec![vec![q(1), q(-1)]]).unwrap();
        assert_eq!(m.kernel_basis(), vec![vec![q(1), q(1)]]);
    }

    #[test]
    fn scalar_determinant_matches_cofactor() {
        let rows = vec![
            vec![q(2), q(0), q(1), q(3)],
            vec![q(1), q(1), q(0), q(0)],
            vec![q(0), q(5), q(1), q(2)],
            vec![q(4), q(0), q(0), q(1)],
        ];
        let m = Matrix::from_rows(Field::Rationals, 4, rows.clone()).unwrap();
        assert_eq!(m.determinant().unwrap(), cofactor(&rows, &q(1)));
    }

    #[test]
    fn polynomial_determinants() {
        let k = Field::Rationals;
        let x = Polynomial::var(k, 2, 0);
        let y = Polynomial::var(k, 2, 1);
        let z = Polynomial::zero(k, 2);
        let d = PolyMatrix::from_rows(vec![vec![x.clone(), z.clone()], vec![z, y.clone()]]).determinant().unwrap();
        assert_eq!(d, &x * &y);
        let rep = PolyMatrix::from_rows(vec![vec![x.clone(), y.clone()], vec![x, y]]);
        assert!(rep.determinant().unwrap().is_zero());
        assert!(PolyMatrix::from_rows(vec![vec![Polynomial::one(k, 2)]; 2]).determinant().is_err());
    }
}
