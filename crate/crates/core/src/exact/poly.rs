//! Dense univariate polynomials over Q, ascending coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{rat, Rat};
use crate::error::{Error, Result};

/// Polynomial over Q. Trailing zero coefficients are never stored, so the zero
/// polynomial has an empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<Rat>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial t.
    pub fn x() -> Self {
        Self::new(vec![Rat::zero(), Rat::one()])
    }

    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut v = vec![Rat::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&a| rat(a)).collect())
    }

    pub fn from_bigints(c: &[BigInt]) -> Self {
        Self::new(c.iter().map(|a| Rat::from_integer(a.clone())).collect())
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Rat]) -> Self {
        roots.iter().fold(Self::one(), |acc, r| {
            &acc * &Self::new(vec![-r.clone(), Rat::one()])
        })
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Coefficient of t^k (zero past the degree).
    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lc(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Evaluate at a polynomial argument, reducing modulo `m` if given.
    pub fn compose(&self, inner: &RatPoly, m: Option<&RatPoly>) -> RatPoly {
        let mut acc = RatPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &RatPoly::constant(c.clone());
            if let Some(m) = m {
                acc = acc.rem(m);
            }
        }
        acc
    }

    pub fn scale(&self, c: &Rat) -> RatPoly {
        if c.is_zero() {
            return RatPoly::zero();
        }
        RatPoly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn monic(&self) -> RatPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lc().recip();
        self.scale(&inv)
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    /// P(t + c).
    pub fn shift(&self, c: &Rat) -> RatPoly {
        self.compose(&RatPoly::new(vec![c.clone(), Rat::one()]), None)
    }

    /// Homogenised Möbius substitution: (c s + d)^n P((a s + b)/(c s + d)) with n = `n`.
    pub fn mobius(&self, a: &Rat, b: &Rat, c: &Rat, d: &Rat, n: usize) -> RatPoly {
        let num = RatPoly::new(vec![b.clone(), a.clone()]);
        let den = RatPoly::new(vec![d.clone(), c.clone()]);
        let mut out = RatPoly::zero();
        for (k, ck) in self.coeffs.iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            let term = &num.pow(k as u32) * &den.pow((n - k) as u32);
            out = &out + &term.scale(ck);
        }
        out
    }

    pub fn pow(&self, e: u32) -> RatPoly {
        let mut acc = RatPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn divrem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.coeffs.len() < d.coeffs.len() {
            return (RatPoly::zero(), self.clone());
        }
        let mut r = self.coeffs.clone();
        let dd = d.deg();
        let inv = d.lc().recip();
        let mut q = vec![Rat::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (RatPoly::new(q), RatPoly::new(r))
    }

    pub fn rem(&self, d: &RatPoly) -> RatPoly {
        self.divrem(d).1
    }

    pub fn divides(&self, f: &RatPoly) -> bool {
        f.rem(self).is_zero()
    }

    /// Monic gcd (zero if both inputs vanish).
    pub fn gcd(a: &RatPoly, b: &RatPoly) -> RatPoly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = x.rem(&y);
            x = y;
            y = r;
        }
        x.monic()
    }

    /// Returns (g, s, t) with s a + t b = g, g monic.
    pub fn ext_gcd(a: &RatPoly, b: &RatPoly) -> (RatPoly, RatPoly, RatPoly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (RatPoly::one(), RatPoly::zero());
        let (mut t0, mut t1) = (RatPoly::zero(), RatPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
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
        let inv = r0.lc().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Inverse of `self` modulo `m`, if the two are coprime.
    pub fn inv_mod(&self, m: &RatPoly) -> Option<RatPoly> {
        let (g, s, _) = RatPoly::ext_gcd(&self.rem(m), m);
        if g.is_one() {
            Some(s.rem(m))
        } else {
            None
        }
    }

    pub fn mul_mod(&self, other: &RatPoly, m: &RatPoly) -> RatPoly {
        (self * other).rem(m)
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && RatPoly::gcd(self, &self.derivative()).is_constant()
    }

    /// Resultant by the Euclidean recurrence over Q.
    pub fn resultant(f: &RatPoly, g: &RatPoly) -> Rat {
        if f.is_zero() || g.is_zero() {
            return Rat::zero();
        }
        let m = f.deg();
        let n = g.deg();
        if n == 0 {
            return pow_rat(&g.lc(), m);
        }
        if m == 0 {
            return pow_rat(&f.lc(), n);
        }
        let r = f.rem(g);
        if r.is_zero() {
            return Rat::zero();
        }
        let k = r.deg();
        let sign = if (m * n) % 2 == 1 { -Rat::one() } else { Rat::one() };
        sign * pow_rat(&g.lc(), m - k) * RatPoly::resultant(g, &r)
    }

    /// Clear denominators and content: returns (c, g) with self = c·g, g an
    /// integer polynomial with content 1 and positive leading coefficient.
    pub fn primitive_part(&self) -> (Rat, Vec<BigInt>) {
        if self.is_zero() {
            return (Rat::zero(), Vec::new());
        }
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rat::from_integer(den.clone())).to_integer())
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        let prim = ints.iter().map(|c| c / &g).collect();
        (Rat::new(g, den), prim)
    }

    /// Height proxy: total bit length of numerators and denominators.
    pub fn height_bits(&self) -> u64 {
        self.coeffs
            .iter()
            .map(|c| c.numer().bits() + c.denom().bits())
            .sum()
    }

    /// Lagrange interpolation through (xs[i], ys[i]); the xs must be distinct.
    pub fn interpolate(xs: &[Rat], ys: &[Rat]) -> RatPoly {
        let mut acc = RatPoly::zero();
        for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
            if yi.is_zero() {
                continue;
            }
            let mut basis = RatPoly::one();
            let mut den = Rat::one();
            for (j, xj) in xs.iter().enumerate() {
                if j != i {
                    basis = &basis * &RatPoly::new(vec![-xj.clone(), Rat::one()]);
                    den *= xi - xj;
                }
            }
            acc = &acc + &basis.scale(&(yi / den));
        }
        acc
    }

    /// Parse a polynomial in `t` (or `x`) such as "t^5 - 3/2*t + 1".
    pub fn parse(s: &str) -> Result<RatPoly> {
        PolyParser::new(s).parse()
    }
}

fn pow_rat(a: &Rat, e: usize) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..e {
        acc *= a;
    }
    acc
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, o: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, o: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, o: &RatPoly) -> RatPoly {
        if self.is_zero() || o.is_zero() {
            return RatPoly::zero();
        }
        let mut v = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        RatPoly::new(v)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl PartialOrd for RatPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then lower coefficients from t^{n-1} down, larger first. For
/// monic linear factors this orders by ascending root.
impl Ord for RatPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| {
            for k in (0..self.coeffs.len()).rev() {
                let c = other.coeffs[k].cmp(&self.coeffs[k]);
                if c != Ordering::Equal {
                    return c;
                }
            }
            Ordering::Equal
        })
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = k == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{}", super::fmt_rat(&a))?;
                if k > 0 {
                    write!(f, "*")?;
                }
            }
            match k {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatPoly({self})")
    }
}

struct PolyParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> PolyParser<'a> {
    fn new(s: &'a str) -> Self {
        PolyParser { s: s.as_bytes(), pos: 0 }
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.to_string() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<Option<Rat>> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Ok(None);
        }
        let num: BigInt = std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().unwrap();
        let end = self.pos;
        if self.peek() != Some(b'/') {
            self.pos = end;
        } else {
            self.pos += 1;
            self.skip_ws();
            let ds = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if ds == self.pos {
                return self.err("expected denominator");
            }
            let den: BigInt = std::str::from_utf8(&self.s[ds..self.pos]).unwrap().parse().unwrap();
            if den.is_zero() {
                return self.err("zero denominator");
            }
            return Ok(Some(Rat::new(num, den)));
        }
        Ok(Some(Rat::from_integer(num)))
    }

    fn term(&mut self) -> Result<RatPoly> {
        let coeff = self.number()?;
        let after_number = self.pos;
        let mut has_var = false;
        if coeff.is_some() && matches!(self.peek(), Some(b't') | Some(b'x')) && self.pos > after_number {
            return self.err("expected '*' between coefficient and variable");
        }
        if coeff.is_some() && self.peek() == Some(b'*') {
            self.pos += 1;
            if !matches!(self.peek(), Some(b't') | Some(b'x')) {
                return self.err("expected variable after '*'");
            }
        }
        let mut exp = 0usize;
        if matches!(self.peek(), Some(b't') | Some(b'x')) {
            self.pos += 1;
            has_var = true;
            exp = 1;
            if self.peek() == Some(b'^') {
                self.pos += 1;
                match self.number()? {
                    Some(e) if e.is_integer() && !e.is_negative() => {
                        exp = e.to_integer().try_into().unwrap_or(usize::MAX);
                        if exp > 64 {
                            return self.err("exponent too large");
                        }
                    }
                    _ => return self.err("expected exponent"),
                }
            }
        }
        if coeff.is_none() && !has_var {
            return self.err("expected term");
        }
        Ok(RatPoly::monomial(coeff.unwrap_or_else(Rat::one), exp))
    }

    fn parse(mut self) -> Result<RatPoly> {
        let mut acc = RatPoly::zero();
        let mut sign = Rat::one();
        if let Some(c) = self.peek() {
            if c == b'-' || c == b'+' {
                if c == b'-' {
                    sign = -sign;
                }
                self.pos += 1;
            }
        }
        loop {
            let t = self.term()?;
            acc = &acc + &t.scale(&sign);
            match self.peek() {
                None => break,
                Some(b'+') => {
                    sign = Rat::one();
                    self.pos += 1;
                }
                Some(b'-') => {
                    sign = -Rat::one();
                    self.pos += 1;
                }
                Some(_) => return self.err("unexpected character"),
            }
        }
        Ok(acc)
    }
}
