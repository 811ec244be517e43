//! Polynomials over F_p and their factorization (Cantor-Zassenhaus).

use std::fmt;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::arith::{inv_mod, is_prime, mod_u64};
use super::RatPoly;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    c: Vec<u64>,
}

#[inline]
fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

impl FpPoly {
    pub fn new(p: u64, c: Vec<u64>) -> Self {
        let mut c: Vec<u64> = c.into_iter().map(|x| x % p).collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    pub fn from_i64(p: u64, c: &[i64]) -> Self {
        Self::new(p, c.iter().map(|&a| a.rem_euclid(p as i64) as u64).collect())
    }

    /// Reduce a rational polynomial mod p; None if some denominator is divisible by p.
    pub fn from_rat(f: &RatPoly, p: u64) -> Option<Self> {
        let mut c = Vec::with_capacity(f.coeffs().len());
        for a in f.coeffs() {
            let d = mod_u64(a.denom(), p);
            if d == 0 {
                return None;
            }
            c.push(mulm(mod_u64(a.numer(), p), inv_mod(d, p), p));
        }
        Some(Self::new(p, c))
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, c: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    pub fn deg(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lc(&self) -> u64 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.c.iter().rev().fold(0, |acc, &a| (mulm(acc, x, self.p) + a) % self.p)
    }

    pub fn add(&self, o: &FpPoly) -> FpPoly {
        let n = self.c.len().max(o.c.len());
        let v = (0..n)
            .map(|i| (self.c.get(i).copied().unwrap_or(0) + o.c.get(i).copied().unwrap_or(0)) % self.p)
            .collect();
        FpPoly::new(self.p, v)
    }

    pub fn sub(&self, o: &FpPoly) -> FpPoly {
        let n = self.c.len().max(o.c.len());
        let p = self.p;
        let v = (0..n)
            .map(|i| (self.c.get(i).copied().unwrap_or(0) + p - o.c.get(i).copied().unwrap_or(0)) % p)
            .collect();
        FpPoly::new(p, v)
    }

    pub fn scale(&self, k: u64) -> FpPoly {
        FpPoly::new(self.p, self.c.iter().map(|&a| mulm(a, k, self.p)).collect())
    }

    pub fn mul(&self, o: &FpPoly) -> FpPoly {
        if self.is_zero() || o.is_zero() {
            return FpPoly::zero(self.p);
        }
        let p = self.p;
        let mut v = vec![0u128; self.c.len() + o.c.len() - 1];
        let pp = p as u128;
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                v[i + j] = (v[i + j] + a as u128 * b as u128) % pp;
            }
        }
        FpPoly::new(p, v.into_iter().map(|x| x as u64).collect())
    }

    pub fn monic(&self) -> FpPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.lc(), self.p))
    }

    pub fn divrem(&self, d: &FpPoly) -> (FpPoly, FpPoly) {
        assert!(!d.is_zero());
        let p = self.p;
        if self.c.len() < d.c.len() {
            return (FpPoly::zero(p), self.clone());
        }
        let mut r = self.c.clone();
        let dd = d.deg();
        let inv = inv_mod(d.lc(), p);
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = mulm(r[k + dd], inv, p);
            if c != 0 {
                for (j, &dc) in d.c.iter().enumerate() {
                    r[k + j] = (r[k + j] + p - mulm(c, dc, p)) % p;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (FpPoly::new(p, q), FpPoly::new(p, r))
    }

    pub fn rem(&self, d: &FpPoly) -> FpPoly {
        self.divrem(d).1
    }

    pub fn mul_mod(&self, o: &FpPoly, m: &FpPoly) -> FpPoly {
        self.mul(o).rem(m)
    }

    pub fn pow_mod(&self, e: &BigUint, m: &FpPoly) -> FpPoly {
        let mut acc = FpPoly::one(self.p).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul_mod(&acc, m);
            if e.bit(i) {
                acc = acc.mul_mod(&base, m);
            }
        }
        acc
    }

    pub fn pow_mod_u64(&self, e: u64, m: &FpPoly) -> FpPoly {
        self.pow_mod(&BigUint::from(e), m)
    }

    pub fn gcd(a: &FpPoly, b: &FpPoly) -> FpPoly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = x.rem(&y);
            x = y;
            y = r;
        }
        x.monic()
    }

    /// (g, s, t) with s a + t b = g monic.
    pub fn ext_gcd(a: &FpPoly, b: &FpPoly) -> (FpPoly, FpPoly, FpPoly) {
        let p = a.p;
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (FpPoly::one(p), FpPoly::zero(p));
        let (mut t0, mut t1) = (FpPoly::zero(p), FpPoly::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = inv_mod(r0.lc(), p);
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn inv_mod(&self, m: &FpPoly) -> Option<FpPoly> {
        let (g, s, _) = FpPoly::ext_gcd(&self.rem(m), m);
        if g.is_one() {
            Some(s.rem(m))
        } else {
            None
        }
    }

    pub fn derivative(&self) -> FpPoly {
        let p = self.p;
        FpPoly::new(
            p,
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &a)| mulm(a, i as u64 % p, p))
                .collect(),
        )
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && FpPoly::gcd(self, &self.derivative()).deg() == 0
    }

    /// Roots in F_p (distinct), ascending.
    pub fn roots(&self) -> Vec<u64> {
        let mut out: Vec<u64> = factor_fp(self)
            .unwrap_or_default()
            .into_iter()
            .filter(|(g, _)| g.deg() == 1)
            .map(|(g, _)| (self.p - g.c[0]) % self.p)
            .collect();
        out.sort();
        out
    }

    /// Quadratic character of `self` in the field F_p[t]/(m), m irreducible:
    /// 1 for nonzero squares, -1 for non-squares, 0 for zero.
    pub fn quadratic_character(&self, m: &FpPoly) -> i32 {
        let a = self.rem(m);
        if a.is_zero() {
            return 0;
        }
        if self.p == 2 {
            return 1;
        }
        let q = BigUint::from(self.p).pow(m.deg() as u32);
        let e = (q - 1u32) >> 1;
        if a.pow_mod(&e, m).is_one() {
            1
        } else {
            -1
        }
    }

    /// p-th root of a polynomial whose derivative vanishes.
    fn pth_root(&self) -> FpPoly {
        let p = self.p as usize;
        FpPoly::new(self.p, self.c.iter().step_by(p).copied().collect())
    }
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpPoly[p={}](", self.p)?;
        let mut first = true;
        for (k, &a) in self.c.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a}*t")?,
                _ => write!(f, "{a}*t^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

fn squarefree_decomposition(f: &FpPoly) -> Vec<(FpPoly, u32)> {
    let p = f.p;
    let mut out = Vec::new();
    let f = f.monic();
    if f.deg() == 0 {
        return out;
    }
    let d = f.derivative();
    if d.is_zero() {
        for (g, e) in squarefree_decomposition(&f.pth_root()) {
            out.push((g, e * p as u32));
        }
        return out;
    }
    let mut c = FpPoly::gcd(&f, &d);
    let mut w = f.divrem(&c).0;
    let mut i = 1u32;
    while w.deg() > 0 {
        let y = FpPoly::gcd(&w, &c);
        let z = w.divrem(&y).0;
        if z.deg() > 0 {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.divrem(&w).0;
    }
    if c.deg() > 0 {
        for (g, e) in squarefree_decomposition(&c.pth_root()) {
            out.push((g, e * p as u32));
        }
    }
    out
}

fn distinct_degree(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    let mut f = f.clone();
    let x = FpPoly::x(p);
    let mut h = x.clone();
    let mut d = 0;
    while f.deg() >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod_u64(p, &f);
        let g = FpPoly::gcd(&h.sub(&x), &f);
        if g.deg() > 0 {
            f = f.divrem(&g).0;
            h = h.rem(&f);
            out.push((g, d));
        }
    }
    if f.deg() > 0 {
        let deg = f.deg();
        out.push((f, deg));
    }
    out
}

fn equal_degree(f: &FpPoly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<FpPoly>) {
    let p = f.p;
    let n = f.deg();
    if n == d {
        out.push(f.monic());
        return;
    }
    loop {
        let a = FpPoly::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.deg() == 0 {
            continue;
        }
        let b = if p == 2 {
            // trace map a + a^2 + ... + a^(2^(d-1))
            let mut t = a.rem(f);
            let mut acc = t.clone();
            for _ in 1..d {
                t = t.mul_mod(&t, f);
                acc = acc.add(&t);
            }
            acc
        } else {
            let e = (BigUint::from(p).pow(d as u32) - 1u32) >> 1;
            a.pow_mod(&e, f).sub(&FpPoly::one(p))
        };
        let g = FpPoly::gcd(&b, f);
        if g.deg() > 0 && g.deg() < n {
            let h = f.divrem(&g).0;
            equal_degree(&g, d, rng, out);
            equal_degree(&h, d, rng, out);
            return;
        }
    }
}

/// Factor f over F_p into monic irreducibles with multiplicities, sorted by
/// (degree, coefficients). The leading coefficient is dropped.
pub fn factor_fp(f: &FpPoly) -> Result<Vec<(FpPoly, u32)>> {
    if f.is_zero() {
        return Err(Error::Zero("polynomial vanishes mod p"));
    }
    if !is_prime(f.p) {
        return Err(Error::NotPrime(f.p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(f.p ^ ((f.deg() as u64) << 48));
    let mut out = Vec::new();
    for (g, e) in squarefree_decomposition(f) {
        for (h, d) in distinct_degree(&g) {
            let mut parts = Vec::new();
            equal_degree(&h, d, &mut rng, &mut parts);
            for q in parts {
                out.push((q, e));
            }
        }
    }
    out.sort_by(|a, b| a.0.deg().cmp(&b.0.deg()).then_with(|| a.0.c.cmp(&b.0.c)));
    Ok(out)
}

/// Square root of `a` in the field F_p[t]/(m), m irreducible of degree f, p odd.
pub fn sqrt_in_field(a: &FpPoly, m: &FpPoly, rng: &mut ChaCha8Rng) -> Option<FpPoly> {
    let p = a.p;
    let a = a.rem(m);
    if a.is_zero() {
        return Some(a);
    }
    if a.quadratic_character(m) != 1 {
        return None;
    }
    let q = BigUint::from(p).pow(m.deg() as u32);
    let qm1 = &q - 1u32;
    let s = qm1.trailing_zeros().unwrap_or(0);
    let odd = &qm1 >> s;
    let n = m.deg();
    let z = loop {
        let z = FpPoly::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if z.quadratic_character(m) == -1 {
            break z;
        }
    };
    let mut mm = s;
    let mut c = z.pow_mod(&odd, m);
    let mut t = a.pow_mod(&odd, m);
    let mut r = a.pow_mod(&((&odd + 1u32) >> 1), m);
    while !t.is_one() {
        let mut i = 0;
        let mut tt = t.clone();
        while !tt.is_one() {
            tt = tt.mul_mod(&tt, m);
            i += 1;
            if i >= mm {
                return None;
            }
        }
        let mut b = c.clone();
        for _ in 0..(mm - i - 1) {
            b = b.mul_mod(&b, m);
        }
        mm = i;
        c = b.mul_mod(&b, m);
        t = t.mul_mod(&c, m);
        r = r.mul_mod(&b, m);
    }
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn product(fs: &[(FpPoly, u32)], p: u64) -> FpPoly {
        let mut acc = FpPoly::one(p);
        for (g, e) in fs {
            for _ in 0..*e {
                acc = acc.mul(g);
            }
        }
        acc
    }

    #[test]
    fn t5_minus_1_mod_11_splits() {
        let f = FpPoly::from_i64(11, &[-1, 0, 0, 0, 0, 1]);
        let fs = factor_fp(&f).unwrap();
        assert_eq!(fs.len(), 5);
        assert!(fs.iter().all(|(g, e)| g.deg() == 1 && *e == 1));
        assert_eq!(f.roots(), vec![1, 3, 4, 5, 9]);
    }

    #[test]
    fn t5_minus_t_minus_1_mod_2() {
        let f = FpPoly::from_i64(2, &[-1, -1, 0, 0, 0, 1]);
        let fs = factor_fp(&f).unwrap();
        assert_eq!(fs.len(), 2);
        assert_eq!(fs[0].0, FpPoly::from_i64(2, &[1, 1, 1]));
        assert_eq!(fs[1].0, FpPoly::from_i64(2, &[1, 0, 1, 1]));
        assert_eq!(product(&fs, 2), f);
    }

    #[test]
    fn t2_plus_1_mod_3_irreducible() {
        let f = FpPoly::from_i64(3, &[1, 0, 1]);
        let fs = factor_fp(&f).unwrap();
        assert_eq!(fs, vec![(f.clone(), 1)]);
    }

    #[test]
    fn repeated_and_inseparable_factors() {
        // (t+1)^3 (t^2+1) over F_3: derivative-zero component appears
        let p = 3;
        let a = FpPoly::from_i64(p, &[1, 1]);
        let b = FpPoly::from_i64(p, &[1, 0, 1]);
        let f = a.mul(&a).mul(&a).mul(&b);
        let fs = factor_fp(&f).unwrap();
        assert_eq!(product(&fs, p), f);
        assert!(fs.contains(&(a, 3)));
    }

    #[test]
    fn field_square_roots() {
        let p = 7;
        let m = FpPoly::from_i64(p, &[1, 0, 1]); // F_49
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // 3 is a non-residue mod 7 but a square in F_49
        let a = FpPoly::from_i64(p, &[3]);
        let r = sqrt_in_field(&a, &m, &mut rng).unwrap();
        assert_eq!(r.mul_mod(&r, &m), a);
    }
}
