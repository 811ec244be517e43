//! Dense matrices over Q.

use std::fmt;

use num_traits::{One, Zero};

use super::{fmt_rat, rat, Rat, RatPoly};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    a: Vec<Rat>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, a: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn diagonal(d: &[Rat]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Invalid("ragged matrix rows".into()));
        }
        Ok(QMatrix { rows: r, cols: c, a: rows.into_iter().flatten().collect() })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()).expect("rectangular")
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Rat) -> Self {
        let mut a = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                a.push(f(i, j));
            }
        }
        QMatrix { rows, cols, a }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.a[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.a[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.a[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        QMatrix { rows: self.rows, cols: self.cols, a: self.a.iter().zip(&o.a).map(|(x, y)| x + y).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        QMatrix { rows: self.rows, cols: self.cols, a: self.a.iter().zip(&o.a).map(|(x, y)| x - y).collect() }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        QMatrix { rows: self.rows, cols: self.cols, a: self.a.iter().map(|x| x * c).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let x = self.get(i, k);
                if x.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let idx = i * o.cols + j;
                    out.a[idx] += x * o.get(k, j);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(x, y)| x * y).sum()).collect()
    }

    /// Quadratic form value v^T A v.
    pub fn form(&self, v: &[Rat]) -> Rat {
        self.mul_vec(v).iter().zip(v).map(|(x, y)| x * y).sum()
    }

    /// P^T A P.
    pub fn congruence(&self, p: &Self) -> Self {
        p.transpose().mul(self).mul(p)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// Delete row i and column j.
    pub fn minor(&self, i: usize, j: usize) -> Self {
        let r: Vec<usize> = (0..self.rows).filter(|&k| k != i).collect();
        let c: Vec<usize> = (0..self.cols).filter(|&k| k != j).collect();
        self.submatrix(&r, &c)
    }

    /// Row echelon form in place; returns pivot columns and whether an odd
    /// number of row swaps occurred.
    fn echelon(&mut self) -> (Vec<usize>, bool) {
        let mut pivots = Vec::new();
        let mut swapped = false;
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.a.swap(p * self.cols + j, r * self.cols + j);
                }
                swapped = !swapped;
            }
            let piv = self.get(r, c).clone();
            for i in r + 1..self.rows {
                let f = self.get(i, c) / &piv;
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = self.get(i, j) - &f * self.get(r, j);
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (pivots, swapped)
    }

    pub fn det(&self) -> Rat {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut m = self.clone();
        let (pivots, swapped) = m.echelon();
        if pivots.len() < self.rows {
            return Rat::zero();
        }
        let mut d: Rat = (0..self.rows).map(|i| m.get(i, i).clone()).product();
        if swapped {
            d = -d;
        }
        d
    }

    pub fn rank(&self) -> usize {
        self.clone().echelon().0.len()
    }

    /// Basis of the right kernel {x : A x = 0}.
    pub fn kernel(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let (pivots, _) = m.echelon();
        let r = pivots.len();
        // back-substitute to reduced form
        for k in (0..r).rev() {
            let c = pivots[k];
            let piv = m.get(k, c).clone();
            for j in 0..m.cols {
                let v = m.get(k, j) / &piv;
                m.set(k, j, v);
            }
            for i in 0..k {
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..m.cols {
                    let v = m.get(i, j) - &f * m.get(k, j);
                    m.set(i, j, v);
                }
            }
        }
        let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rat::zero(); m.cols];
                v[f] = Rat::one();
                for (k, &c) in pivots.iter().enumerate() {
                    v[c] = -m.get(k, f).clone();
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                Rat::one()
            } else {
                Rat::zero()
            }
        });
        let (pivots, _) = aug.echelon();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        for k in (0..n).rev() {
            let piv = aug.get(k, k).clone();
            for j in 0..2 * n {
                let v = aug.get(k, j) / &piv;
                aug.set(k, j, v);
            }
            for i in 0..k {
                let f = aug.get(i, k).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..2 * n {
                    let v = aug.get(i, j) - &f * aug.get(k, j);
                    aug.set(i, j, v);
                }
            }
        }
        Some(Self::from_fn(n, n, |i, j| aug.get(i, n + j).clone()))
    }

    /// Determinant of a matrix depending polynomially on t, of degree at most
    /// `deg` in t, recovered by interpolation.
    pub fn det_interpolated(deg: usize, at: impl Fn(&Rat) -> QMatrix) -> RatPoly {
        let xs: Vec<Rat> = (0..=deg as i64).map(rat).collect();
        let ys: Vec<Rat> = xs.iter().map(|x| at(x).det()).collect();
        RatPoly::interpolate(&xs, &ys)
    }

    /// det(A - t B).
    pub fn pencil_det(a: &Self, b: &Self) -> RatPoly {
        Self::det_interpolated(a.rows, |t| a.sub(&b.scale(t)))
    }

    /// det(t I - A).
    pub fn charpoly(&self) -> RatPoly {
        let id = Self::identity(self.rows);
        Self::det_interpolated(self.rows, |t| id.scale(t).sub(self))
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(fmt_rat).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_and_inverse() {
        let m = QMatrix::from_ints(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(m.det(), rat(18));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), QMatrix::identity(3));
        let s = QMatrix::from_ints(&[&[1, 2], &[2, 4]]);
        assert_eq!(s.det(), rat(0));
        assert_eq!(s.rank(), 1);
        assert!(s.inverse().is_none());
        let k = s.kernel();
        assert_eq!(k.len(), 1);
        assert!(s.mul_vec(&k[0]).iter().all(Zero::is_zero));
        let swap = QMatrix::from_ints(&[&[0, 1], &[1, 0]]);
        assert_eq!(swap.det(), rat(-1));
    }

    #[test]
    fn pencil_and_charpoly() {
        let a = QMatrix::identity(3);
        let b = QMatrix::diagonal(&[rat(1), rat(2), rat(3)]);
        let f = QMatrix::pencil_det(&a, &b);
        assert_eq!(f, RatPoly::from_ints(&[1, -6, 11, -6]));
        assert_eq!(b.charpoly(), RatPoly::from_ints(&[-6, 11, -6, 1]));
    }
}
