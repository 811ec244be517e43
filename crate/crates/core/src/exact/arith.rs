//! Integer helpers: primality, sieving, valuations, residue symbols, factoring.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// All primes strictly below `n`.
pub fn primes_below(n: u64) -> Vec<u64> {
    if n < 3 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i < n {
        if sieve[i] {
            let mut j = i * i;
            while j < n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(k, _)| k as u64)
        .collect()
}

/// Iterator over primes starting at `from` (inclusive).
pub fn primes_from(from: u64) -> impl Iterator<Item = u64> {
    (from.max(2)..).filter(|&n| is_prime(n))
}

/// p-adic valuation of a nonzero integer and the cofactor.
pub fn valuation(n: &BigInt, p: u64) -> (u32, BigInt) {
    assert!(!n.is_zero());
    let pb = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            break;
        }
        m = q;
        v += 1;
    }
    (v, m)
}

pub fn mod_u64(n: &BigInt, p: u64) -> u64 {
    let r = n.magnitude() % p;
    let r = r.to_u64().unwrap();
    if n.sign() == Sign::Minus && r != 0 {
        p - r
    } else {
        r
    }
}

/// Legendre symbol (a/p) for odd prime p; 0 if p | a.
pub fn legendre(a: &BigInt, p: u64) -> i32 {
    legendre_u64(mod_u64(a, p), p)
}

pub fn legendre_u64(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Tonelli-Shanks square root modulo an odd prime; `a` must be a residue.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if legendre_u64(a, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while legendre_u64(z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Remove square factors p^2 for primes p up to `bound`; the sign is kept.
pub fn strip_square_factors(n: &BigInt, bound: u64) -> BigInt {
    if n.is_zero() {
        return n.clone();
    }
    let mut m = n.magnitude().clone();
    let mut kept = BigUint::one();
    for p in small_primes(bound) {
        if m.is_one() {
            break;
        }
        if BigUint::from(p) * BigUint::from(p) > m {
            break;
        }
        if (&m % p).is_zero() {
            let mut e = 0;
            while (&m % p).is_zero() {
                m /= p;
                e += 1;
            }
            if e % 2 == 1 {
                kept *= p;
            }
        }
    }
    if is_perfect_square(&BigInt::from(m.clone())) {
        m = BigUint::one();
    }
    let out = BigInt::from(kept * m);
    if n.is_negative() {
        -out
    } else {
        out
    }
}

fn small_primes(bound: u64) -> Vec<u64> {
    use std::sync::OnceLock;
    static CACHE: OnceLock<Vec<u64>> = OnceLock::new();
    let all = CACHE.get_or_init(|| primes_below(1_000_001));
    if bound <= 1_000_000 {
        all.iter().copied().take_while(|&p| p <= bound).collect()
    } else {
        primes_below(bound + 1)
    }
}

fn is_probable_prime_big(n: &BigUint) -> bool {
    if let Some(s) = n.to_u64() {
        return is_prime(s);
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'outer: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: &BigUint, c: u64, budget: u64) -> Option<BigUint> {
    let f = |x: &BigUint| (x * x + BigUint::from(c)) % n;
    let mut y = BigUint::from(2u32);
    let mut r = 1u64;
    let mut q = BigUint::one();
    let m = 128u64;
    let mut steps = 0u64;
    let mut x;
    let mut ys;
    loop {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        loop {
            ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = f(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                q = (q * diff) % n;
            }
            let g = q.gcd(n);
            k += m;
            steps += m;
            if !g.is_one() {
                if &g == n {
                    loop {
                        ys = f(&ys);
                        let diff = if x > ys { &x - &ys } else { &ys - &x };
                        let g2 = diff.gcd(n);
                        if !g2.is_one() {
                            return if &g2 == n { None } else { Some(g2) };
                        }
                    }
                }
                return Some(g);
            }
            if k >= r {
                break;
            }
        }
        r *= 2;
        if steps > budget {
            return None;
        }
    }
}

/// Factorization of |n| into primes. Cofactors that resist Pollard rho within
/// the budget are returned separately and are never guessed to be prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub primes: Vec<(BigUint, u32)>,
    pub unfactored: Vec<BigUint>,
}

pub fn factor_integer(n: &BigInt) -> Factorization {
    let mut m = n.magnitude().clone();
    let mut primes: Vec<(BigUint, u32)> = Vec::new();
    let mut unfactored = Vec::new();
    if m.is_zero() {
        return Factorization { primes, unfactored };
    }
    for p in small_primes(10_000) {
        if m.is_one() {
            break;
        }
        let mut e = 0;
        while (&m % p).is_zero() {
            m /= p;
            e += 1;
        }
        if e > 0 {
            primes.push((BigUint::from(p), e));
        }
    }
    let mut stack = vec![m];
    while let Some(x) = stack.pop() {
        if x.is_one() {
            continue;
        }
        if is_probable_prime_big(&x) {
            push_prime(&mut primes, x);
            continue;
        }
        let r = x.sqrt();
        if &r * &r == x {
            stack.push(r.clone());
            stack.push(r);
            continue;
        }
        let mut split = None;
        for c in 1..8u64 {
            if let Some(d) = pollard_brent(&x, c, 400_000) {
                split = Some(d);
                break;
            }
        }
        match split {
            Some(d) => {
                let e = &x / &d;
                stack.push(d);
                stack.push(e);
            }
            None => unfactored.push(x),
        }
    }
    primes.sort();
    unfactored.sort();
    Factorization { primes, unfactored }
}

fn push_prime(primes: &mut Vec<(BigUint, u32)>, p: BigUint) {
    if let Some(entry) = primes.iter_mut().find(|(q, _)| *q == p) {
        entry.1 += 1;
    } else {
        primes.push((p, 1));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let naive = |n: u64| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
        for n in 0..5000 {
            assert_eq!(is_prime(n), naive(n), "{n}");
        }
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn tonelli() {
        for p in [3u64, 7, 13, 17, 97, 101] {
            for a in 1..p {
                match sqrt_mod(a, p) {
                    Some(r) => assert_eq!(r * r % p, a),
                    None => assert_eq!(legendre_u64(a, p), -1),
                }
            }
        }
    }

    #[test]
    fn factoring_roundtrip() {
        let n = BigInt::from(2u64.pow(4) * 3125) * BigInt::from(1_000_000_007u64) * BigInt::from(998_244_353u64);
        let f = factor_integer(&n);
        assert!(f.unfactored.is_empty());
        let prod = f.primes.iter().fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
        assert_eq!(BigInt::from(prod), n);
    }

    #[test]
    fn strip_squares() {
        assert_eq!(strip_square_factors(&BigInt::from(-72), 1_000_000), BigInt::from(-2));
        assert_eq!(strip_square_factors(&BigInt::from(24), 1_000_000), BigInt::from(6));
    }
}
