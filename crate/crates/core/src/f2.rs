//! Linear algebra over F_2 on packed bit vectors.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2Vec {
    n: usize,
    w: Vec<u64>,
}

impl F2Vec {
    pub fn zeros(n: usize) -> Self {
        F2Vec { n, w: vec![0; n.div_ceil(64)] }
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.set(i, true);
        v
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b & 1 == 1);
        }
        v
    }

    /// Low `n` bits of `x`, bit i giving coordinate i.
    pub fn from_u64(n: usize, x: u64) -> Self {
        assert!(n <= 64);
        let mut v = Self::zeros(n);
        if n > 0 {
            v.w[0] = if n == 64 { x } else { x & ((1u64 << n) - 1) };
        }
        v
    }

    pub fn to_u64(&self) -> u64 {
        assert!(self.n <= 64);
        self.w.first().copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.n);
        self.w[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, b: bool) {
        assert!(i < self.n);
        if b {
            self.w[i / 64] |= 1 << (i % 64);
        } else {
            self.w[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.n);
        self.w[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, o: &F2Vec) {
        assert_eq!(self.n, o.n);
        for (a, b) in self.w.iter_mut().zip(&o.w) {
            *a ^= b;
        }
    }

    pub fn xor(&self, o: &F2Vec) -> F2Vec {
        let mut v = self.clone();
        v.xor_assign(o);
        v
    }

    pub fn dot(&self, o: &F2Vec) -> bool {
        assert_eq!(self.n, o.n);
        self.w.iter().zip(&o.w).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.w.iter().all(|&x| x == 0)
    }

    pub fn weight(&self) -> usize {
        self.w.iter().map(|x| x.count_ones() as usize).sum()
    }

    pub fn first_one(&self) -> Option<usize> {
        self.w
            .iter()
            .enumerate()
            .find(|(_, &x)| x != 0)
            .map(|(k, x)| k * 64 + x.trailing_zeros() as usize)
    }

    pub fn bits(&self) -> Vec<u8> {
        (0..self.n).map(|i| u8::from(self.get(i))).collect()
    }

    /// Concatenation (self, o).
    pub fn concat(&self, o: &F2Vec) -> F2Vec {
        let mut v = F2Vec::zeros(self.n + o.n);
        for i in 0..self.n {
            v.set(i, self.get(i));
        }
        for i in 0..o.n {
            v.set(self.n + i, o.get(i));
        }
        v
    }

    /// Coordinates [start, start + len).
    pub fn slice(&self, start: usize, len: usize) -> F2Vec {
        let mut v = F2Vec::zeros(len);
        for i in 0..len {
            v.set(i, self.get(start + i));
        }
        v
    }
}

impl fmt::Display for F2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        Ok(())
    }
}

impl fmt::Debug for F2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F2[{self}]")
    }
}

/// Row-major matrix over F_2.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct F2Mat {
    cols: usize,
    r: Vec<F2Vec>,
}

impl F2Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        F2Mat { cols, r: vec![F2Vec::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        F2Mat { cols: n, r: (0..n).map(|i| F2Vec::unit(n, i)).collect() }
    }

    pub fn from_rows(cols: usize, rows: Vec<F2Vec>) -> Self {
        assert!(rows.iter().all(|v| v.len() == cols));
        F2Mat { cols, r: rows }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.r[i].set(j, f(i, j));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.r.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.r[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, b: bool) {
        self.r[i].set(j, b);
    }

    pub fn row(&self, i: usize) -> &F2Vec {
        &self.r[i]
    }

    pub fn row_vecs(&self) -> &[F2Vec] {
        &self.r
    }

    pub fn push_row(&mut self, v: F2Vec) {
        assert_eq!(v.len(), self.cols);
        self.r.push(v);
    }

    pub fn mul_vec(&self, v: &F2Vec) -> F2Vec {
        let mut out = F2Vec::zeros(self.rows());
        for (i, row) in self.r.iter().enumerate() {
            out.set(i, row.dot(v));
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows(), |i, j| self.get(j, i))
    }

    pub fn mul(&self, o: &F2Mat) -> F2Mat {
        assert_eq!(self.cols, o.rows());
        let mut out = F2Mat::zeros(self.rows(), o.cols);
        for (i, row) in self.r.iter().enumerate() {
            for k in 0..self.cols {
                if row.get(k) {
                    out.r[i].xor_assign(&o.r[k]);
                }
            }
        }
        out
    }

    pub fn add(&self, o: &F2Mat) -> F2Mat {
        F2Mat { cols: self.cols, r: self.r.iter().zip(&o.r).map(|(a, b)| a.xor(b)).collect() }
    }

    pub fn rank(&self) -> usize {
        Subspace::from_gens(self.cols, self.r.iter().cloned()).dim()
    }

    /// Basis of {x : M x = 0}.
    pub fn kernel(&self) -> Vec<F2Vec> {
        Subspace::from_gens(self.cols, self.r.iter().cloned()).annihilator().basis().to_vec()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows() == self.cols && (0..self.cols).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Symmetric with zero diagonal.
    pub fn is_alternating(&self) -> bool {
        self.is_symmetric() && (0..self.cols).all(|i| !self.get(i, i))
    }

    /// x^T M y.
    pub fn bilinear(&self, x: &F2Vec, y: &F2Vec) -> bool {
        x.dot(&self.mul_vec(y))
    }

    pub fn is_invertible(&self) -> bool {
        self.rows() == self.cols && self.rank() == self.cols
    }

    pub fn inverse(&self) -> Option<F2Mat> {
        let n = self.cols;
        if self.rows() != n {
            return None;
        }
        let mut a: Vec<F2Vec> = self.r.iter().enumerate().map(|(i, row)| row.concat(&F2Vec::unit(n, i))).collect();
        for c in 0..n {
            let p = (c..n).find(|&i| a[i].get(c))?;
            a.swap(c, p);
            let piv = a[c].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i != c && row.get(c) {
                    row.xor_assign(&piv);
                }
            }
        }
        Some(F2Mat { cols: n, r: a.iter().map(|row| row.slice(n, n)).collect() })
    }
}

/// Subspace of F_2^n kept as a fully reduced echelon basis sorted by pivot,
/// so equality of values is equality of subspaces.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    n: usize,
    basis: Vec<F2Vec>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace { n, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Self::from_gens(n, (0..n).map(|i| F2Vec::unit(n, i)))
    }

    pub fn from_gens(n: usize, gens: impl IntoIterator<Item = F2Vec>) -> Self {
        let mut s = Self::zero(n);
        for g in gens {
            s.insert(g);
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[F2Vec] {
        &self.basis
    }

    /// Remainder of v after reduction by the basis; zero iff v is in the span.
    pub fn reduce(&self, v: &F2Vec) -> F2Vec {
        let mut v = v.clone();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_assign(b);
            }
        }
        v
    }

    pub fn contains(&self, v: &F2Vec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Add a vector; returns whether the dimension grew.
    pub fn insert(&mut self, v: F2Vec) -> bool {
        assert_eq!(v.len(), self.n);
        let v = self.reduce(&v);
        let Some(p) = v.first_one() else {
            return false;
        };
        for b in &mut self.basis {
            if b.get(p) {
                b.xor_assign(&v);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.basis.insert(at, v);
        self.pivots.insert(at, p);
        true
    }

    pub fn sum(&self, o: &Subspace) -> Subspace {
        let mut s = self.clone();
        for b in &o.basis {
            s.insert(b.clone());
        }
        s
    }

    /// Orthogonal complement under the standard dot product.
    pub fn annihilator(&self) -> Subspace {
        let free: Vec<usize> = (0..self.n).filter(|c| !self.pivots.contains(c)).collect();
        Subspace::from_gens(
            self.n,
            free.iter().map(|&f| {
                let mut v = F2Vec::unit(self.n, f);
                for (b, &p) in self.basis.iter().zip(&self.pivots) {
                    if b.get(f) {
                        v.set(p, true);
                    }
                }
                v
            }),
        )
    }

    pub fn intersect(&self, o: &Subspace) -> Subspace {
        self.annihilator().sum(&o.annihilator()).annihilator()
    }

    pub fn is_subspace_of(&self, o: &Subspace) -> bool {
        self.basis.iter().all(|b| o.contains(b))
    }

    /// {x : B(x, s) = 0 for all s in self}.
    pub fn perp(&self, form: &F2Mat) -> Subspace {
        F2Mat::from_rows(self.n, self.basis.iter().map(|b| form.mul_vec(b)).collect()).kernel_space()
    }

    /// Whether B vanishes on self x self.
    pub fn is_isotropic(&self, form: &F2Mat) -> bool {
        self.basis.iter().all(|x| self.basis.iter().all(|y| !form.bilinear(x, y)))
    }

    /// Extend the basis of self to a basis of `outer`, returning the new vectors.
    pub fn complement_in(&self, outer: &Subspace) -> Vec<F2Vec> {
        let mut s = self.clone();
        outer.basis.iter().filter(|b| s.insert((*b).clone())).cloned().collect()
    }

    /// All 2^dim elements, in Gray-code order starting at 0.
    pub fn elements(&self) -> Vec<F2Vec> {
        assert!(self.dim() <= 24, "subspace too large to enumerate");
        let mut out = Vec::with_capacity(1 << self.dim());
        let mut v = F2Vec::zeros(self.n);
        out.push(v.clone());
        for k in 1u64..(1 << self.dim()) {
            v.xor_assign(&self.basis[k.trailing_zeros() as usize]);
            out.push(v.clone());
        }
        out
    }
}

impl F2Mat {
    pub fn kernel_space(&self) -> Subspace {
        Subspace::from_gens(self.cols, self.r.iter().cloned()).annihilator()
    }

    pub fn image(&self) -> Subspace {
        self.transpose().row_space()
    }

    pub fn row_space(&self) -> Subspace {
        Subspace::from_gens(self.cols, self.r.iter().cloned())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_and_rank() {
        let m = F2Mat::from_rows(4, vec![F2Vec::from_bits(&[1, 1, 0, 0]), F2Vec::from_bits(&[0, 1, 1, 0])]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).is_zero());
        }
    }

    #[test]
    fn intersections() {
        let n = 4;
        let u = Subspace::from_gens(n, [F2Vec::unit(n, 0), F2Vec::unit(n, 1)]);
        let w = Subspace::from_gens(n, [F2Vec::from_bits(&[1, 1, 0, 0]), F2Vec::unit(n, 2)]);
        let i = u.intersect(&w);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&F2Vec::from_bits(&[1, 1, 0, 0])));
        assert_eq!(u.sum(&w).dim(), 3);
        assert_eq!(u.elements().len(), 4);
    }

    #[test]
    fn inverse() {
        let m = F2Mat::from_rows(3, vec![F2Vec::from_bits(&[1, 1, 0]), F2Vec::from_bits(&[0, 1, 1]), F2Vec::from_bits(&[0, 0, 1])]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), F2Mat::identity(3));
    }
}
