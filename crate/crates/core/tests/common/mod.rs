//! Independent oracles used by the integration tests. They share no code with
//! the library beyond its public types.

#![allow(dead_code)]

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dp4::exact::{QMatrix, RatPoly};
use dp4::pencil::{is_smooth, Pencil};

pub type Rat = BigRational;

pub fn q(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------- integers ----------

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn primes_upto(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| is_prime(k)).collect()
}

/// Prime divisors by trial division.
pub fn prime_divisors(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = 2u64;
    while BigInt::from(d) * BigInt::from(d) <= n {
        if (&n % d).is_zero() {
            out.push(d);
            while (&n % d).is_zero() {
                n /= d;
            }
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push(n.to_u64().expect("small cofactor"));
    }
    out
}

pub fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let mut base = (b % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m as u128;
        }
        base = base * base % m as u128;
        e >>= 1;
    }
    b = acc as u64;
    b
}

/// Legendre symbol for an odd prime p and a unit u.
pub fn legendre(u: &BigInt, p: u64) -> i32 {
    let r = u.mod_floor(&BigInt::from(p)).to_u64().unwrap();
    assert!(r != 0);
    if powmod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

pub fn rat_mod(a: &Rat, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let d = a.denom().mod_floor(&pb).to_u64().unwrap();
    if d == 0 {
        return None;
    }
    let n = a.numer().mod_floor(&pb).to_u64().unwrap();
    Some(n * powmod(d, p - 2, p) % p)
}

pub fn is_square_int(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

pub fn is_square_rat(a: &Rat) -> bool {
    is_square_int(&(a.numer() * a.denom()))
}

// ---------- Hilbert symbols ----------

fn split_val(n: &BigInt, p: u64) -> (u32, BigInt) {
    let mut n = n.clone();
    let mut k = 0;
    while (&n % p).is_zero() {
        n /= p;
        k += 1;
    }
    (k, n)
}

/// (a, b)_v from the textbook formulas; `p == 0` is the real place.
pub fn hilbert_oracle(a: &Rat, b: &Rat, p: u64) -> i32 {
    let a = a.numer() * a.denom();
    let b = b.numer() * b.denom();
    if p == 0 {
        return if a.is_negative() && b.is_negative() { -1 } else { 1 };
    }
    let (al, u) = split_val(&a, p);
    let (be, v) = split_val(&b, p);
    if p == 2 {
        let m8 = |x: &BigInt| x.mod_floor(&BigInt::from(8)).to_u64().unwrap();
        let eps = |x: u64| ((x - 1) / 2) % 2;
        let omega = |x: u64| ((x * x - 1) / 8) % 2;
        let (u8_, v8) = (m8(&u), m8(&v));
        let e = eps(u8_) * eps(v8) + u64::from(al) * omega(v8) + u64::from(be) * omega(u8_);
        return if e % 2 == 0 { 1 } else { -1 };
    }
    let mut s = if (al * be) % 2 == 1 && p % 4 == 3 { -1 } else { 1 };
    if be % 2 == 1 {
        s *= legendre(&u, p);
    }
    if al % 2 == 1 {
        s *= legendre(&v, p);
    }
    s
}

// ---------- polynomials over F_p (low degree first) ----------

pub fn fp_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn fp_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = fp_trim(a.to_vec());
    let m = fp_trim(m.to_vec());
    let inv = powmod(*m.last().unwrap(), p - 2, p);
    while r.len() >= m.len() {
        let c = r.last().unwrap() * inv % p;
        let shift = r.len() - m.len();
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * mi % p) % p;
        }
        r = fp_trim(r);
    }
    r
}

pub fn fp_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    fp_rem(&out, m, p)
}

pub fn fp_powmod(a: &[u64], mut e: u128, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut base = fp_rem(a, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_mulmod(&acc, &base, m, p);
        }
        base = fp_mulmod(&base, &base, m, p);
        e >>= 1;
    }
    acc
}

pub fn poly_mod(f: &RatPoly, p: u64) -> Option<Vec<u64>> {
    f.coeffs().iter().map(|c| rat_mod(c, p)).collect::<Option<Vec<_>>>().map(fp_trim)
}

pub fn fp_eval(f: &[u64], x: u64, p: u64) -> u64 {
    f.iter().rev().fold(0, |acc, &c| (acc * x + c) % p)
}

/// Monic irreducible factors of degree <= 2 of a squarefree f mod p, by
/// exhaustive search; returns (degree, factor) pairs, or None if the degrees
/// found do not account for deg f.
pub fn small_factors(f: &[u64], p: u64) -> Option<Vec<Vec<u64>>> {
    let mut out: Vec<Vec<u64>> = (0..p).filter(|&r| fp_eval(f, r, p) == 0).map(|r| vec![(p - r) % p, 1]).collect();
    for a in 0..p {
        for c in 0..p {
            let g = vec![c, a, 1];
            if (0..p).any(|r| fp_eval(&g, r, p) == 0) {
                continue;
            }
            if fp_rem(f, &g, p).is_empty() {
                out.push(g);
            }
        }
    }
    let total: usize = out.iter().map(|g| g.len() - 1).sum();
    (total == f.len() - 1).then_some(out)
}

/// Whether d is a square in F_p[x]/(g), g irreducible of degree k.
pub fn is_square_in_residue_field(d: &[u64], g: &[u64], p: u64) -> bool {
    let k = (g.len() - 1) as u32;
    let e = ((p as u128).pow(k) - 1) / 2;
    fp_powmod(d, e, g, p) == vec![1]
}

// ---------- power sums of 1/P'(theta) ----------

/// Sum over the roots of theta^k / P'(theta) for k < count: the coefficient
/// of t^-1 in t^k / P(t), from the expansion of 1/P at infinity.
pub fn euler_trace_oracle(p: &RatPoly, count: usize) -> Vec<Rat> {
    let c = p.coeffs();
    let n = c.len() - 1;
    let lc = c[n].clone();
    // 1/P = t^-n / lc * sum_j h_j t^-j with h_0 = 1, h_j = -sum_i (c_{n-i}/lc) h_{j-i}
    let mut h: Vec<Rat> = vec![Rat::one()];
    for j in 1..count {
        let mut s = Rat::zero();
        for i in 1..=n.min(j) {
            s -= &c[n - i] / &lc * &h[j - i];
        }
        h.push(s);
    }
    (0..count).map(|k| if k + 1 >= n { &h[k + 1 - n] / &lc } else { Rat::zero() }).collect()
}

// ---------- random inputs ----------

pub fn random_symmetric(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> QMatrix {
    let mut m = vec![vec![0i64; 5]; 5];
    for i in 0..5 {
        for j in i..5 {
            let x = rng.gen_range(lo..=hi);
            m[i][j] = x;
            m[j][i] = x;
        }
    }
    let rows: Vec<&[i64]> = m.iter().map(Vec::as_slice).collect();
    QMatrix::from_ints(&rows)
}

pub fn random_smooth_pencil(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Pencil {
    loop {
        let p = Pencil::new(random_symmetric(rng, lo, hi), random_symmetric(rng, lo, hi)).unwrap();
        if is_smooth(&p) {
            return p;
        }
    }
}

pub fn random_separable_quintic(rng: &mut ChaCha8Rng) -> RatPoly {
    loop {
        let mut c: Vec<Rat> = (0..5).map(|_| Rat::new(BigInt::from(rng.gen_range(-20..=20)), BigInt::from(rng.gen_range(1..=3)))).collect();
        c.push(Rat::one());
        let p = RatPoly::new(c);
        if p.is_squarefree() {
            return p;
        }
    }
}

// ---------- p-adic solubility by exhaustive enumeration ----------

/// Integral Gram matrix: the rational matrix times the lcm of its denominators.
pub fn integral_gram(m: &QMatrix) -> Vec<Vec<i128>> {
    let rows = m.to_rows();
    let l = rows.iter().flatten().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    rows.iter().map(|r| r.iter().map(|x| (x * Rat::from_integer(l.clone())).to_integer().to_i128().unwrap()).collect()).collect()
}

fn qeval(g: &[Vec<i128>], x: &[i128]) -> i128 {
    let mut s = 0i128;
    for i in 0..5 {
        for j in 0..5 {
            s += g[i][j] * x[i] * x[j];
        }
    }
    s
}

fn vp(x: i128, p: u64) -> u32 {
    if x == 0 {
        return u32::MAX;
    }
    let mut x = x;
    let mut k = 0;
    while x % p as i128 == 0 {
        x /= p as i128;
        k += 1;
    }
    k
}

fn hensel_ok(g1: &[Vec<i128>], g2: &[Vec<i128>], x: &[i128], p: u64) -> bool {
    let grad = |g: &[Vec<i128>]| -> Vec<i128> { (0..5).map(|i| 2 * (0..5).map(|j| g[i][j] * x[j]).sum::<i128>()).collect() };
    let (a, b) = (grad(g1), grad(g2));
    let mut v = u32::MAX;
    for i in 0..5 {
        for j in i + 1..5 {
            v = v.min(vp(a[i] * b[j] - a[j] * b[i], p));
        }
    }
    if v == u32::MAX {
        return false;
    }
    let prec = vp(qeval(g1, x), p).min(vp(qeval(g2, x), p));
    prec > 2 * v
}

/// Some(true): a point satisfying Hensel's criterion; Some(false): primitive
/// solutions die out modulo p^k for some k <= depth; None: undecided.
pub fn padic_oracle(m1: &QMatrix, m2: &QMatrix, p: u64, depth: u32, budget: usize) -> Option<bool> {
    let (g1, g2) = (integral_gram(m1), integral_gram(m2));
    let mut work = 0usize;
    let mut level: Vec<(usize, Vec<i128>)> = Vec::new();
    let pi = p as i128;
    for lead in 0..5 {
        let free = 4 - lead;
        for k in 0..(p as u128).pow(free as u32) {
            let mut x = vec![0i128; 5];
            x[lead] = 1;
            let mut k = k;
            for c in x.iter_mut().skip(lead + 1) {
                *c = (k % p as u128) as i128;
                k /= p as u128;
            }
            if qeval(&g1, &x) % pi == 0 && qeval(&g2, &x) % pi == 0 {
                if hensel_ok(&g1, &g2, &x, p) {
                    return Some(true);
                }
                level.push((lead, x));
            }
        }
    }
    let mut modulus = pi;
    for _ in 1..depth {
        if level.is_empty() {
            return Some(false);
        }
        let next_mod = modulus * pi;
        let mut next = Vec::new();
        let mut seen = HashSet::new();
        for (lead, x) in &level {
            for k in 0..(p as u128).pow(4) {
                work += 1;
                if work > budget {
                    return None;
                }
                let mut z = x.clone();
                let mut k = k;
                for (i, zi) in z.iter_mut().enumerate() {
                    if i != *lead {
                        *zi += (k % p as u128) as i128 * modulus;
                        k /= p as u128;
                    }
                }
                if qeval(&g1, &z) % next_mod == 0 && qeval(&g2, &z) % next_mod == 0 && seen.insert(z.clone()) {
                    if hensel_ok(&g1, &g2, &z, p) {
                        return Some(true);
                    }
                    next.push((*lead, z));
                }
            }
        }
        level = next;
        modulus = next_mod;
    }
    if level.is_empty() {
        Some(false)
    } else {
        None
    }
}

// ---------- real definiteness by floating point ----------

fn definite_f64(m: &[[f64; 5]; 5]) -> bool {
    let chol = |s: f64| {
        let mut a = [[0.0; 5]; 5];
        for i in 0..5 {
            for j in 0..5 {
                a[i][j] = s * m[i][j];
            }
        }
        for k in 0..5 {
            if a[k][k] <= 1e-12 {
                return false;
            }
            let d = a[k][k].sqrt();
            for i in k..5 {
                a[i][k] /= d;
            }
            for j in k + 1..5 {
                for i in j..5 {
                    a[i][j] -= a[i][k] * a[j][k];
                }
            }
        }
        true
    };
    chol(1.0) || chol(-1.0)
}

fn to_f64(m: &QMatrix) -> [[f64; 5]; 5] {
    let rows = m.to_rows();
    let mut out = [[0.0; 5]; 5];
    for i in 0..5 {
        for j in 0..5 {
            out[i][j] = rows[i][j].to_f64().unwrap();
        }
    }
    out
}

/// Whether some sampled member Phi1 - t Phi2 (or -Phi2 at infinity) is definite.
pub fn definite_member_scan(pencil: &Pencil, samples: usize) -> bool {
    let a = to_f64(pencil.phi1());
    let b = to_f64(pencil.phi2());
    let mut at_inf = [[0.0; 5]; 5];
    for i in 0..5 {
        for j in 0..5 {
            at_inf[i][j] = -b[i][j];
        }
    }
    if definite_f64(&at_inf) {
        return true;
    }
    (0..samples).any(|k| {
        let theta = std::f64::consts::PI * ((k as f64 + 0.5) / samples as f64 - 0.5);
        let t = theta.tan();
        let mut m = [[0.0; 5]; 5];
        for i in 0..5 {
            for j in 0..5 {
                m[i][j] = a[i][j] - t * b[i][j];
            }
        }
        definite_f64(&m)
    })
}

// ---------- hyperbolic F2 spaces for the Selmer oracle ----------

/// Bits of an F2 vector as a u64 mask.
pub fn mask(v: &dp4::f2::F2Vec) -> u64 {
    (0..v.len()).filter(|&i| v.get(i)).fold(0, |m, i| m | 1 << i)
}

pub fn span_masks(gens: &[u64]) -> HashSet<u64> {
    let mut s = HashSet::from([0u64]);
    for &g in gens {
        let add: Vec<u64> = s.iter().map(|x| x ^ g).collect();
        s.extend(add);
    }
    s
}

/// Res(a, b) over F_p by the Euclidean recursion.
pub fn fp_resultant(a: &[u64], b: &[u64], p: u64) -> u64 {
    let (a, b) = (fp_trim(a.to_vec()), fp_trim(b.to_vec()));
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let (da, db) = (a.len() - 1, b.len() - 1);
    let flip = |r: u64| if (da * db) % 2 == 1 { (p - r) % p } else { r };
    if db == 0 {
        return powmod(b[0], da as u64, p);
    }
    if da < db {
        return flip(fp_resultant(&b, &a, p));
    }
    let r = fp_rem(&a, &b, p);
    if r.is_empty() {
        return 0;
    }
    let dr = r.len() - 1;
    flip(powmod(*b.last().unwrap(), (da - dr) as u64, p) * fp_resultant(&b, &r, p) % p)
}
