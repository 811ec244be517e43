//! Exact arithmetic substrate: rationals, polynomials over Q and F_p,
//! factorization, discriminants, square tests, Hilbert symbols and square
//! roots in étale algebras.

pub mod arith;
mod etale;
mod fp;
mod matrix;
mod poly;
mod zfactor;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

pub use etale::{ratrec, sqrt_in_etale, sqrt_in_etale_with_budget, EtaleSqrt, DEFAULT_PRIME_BUDGET};
pub use fp::{factor_fp, sqrt_in_field, FpPoly};
pub use matrix::QMatrix;
pub use poly::RatPoly;
pub use zfactor::{factor_q, irreducible_factors, rational_roots};
pub(crate) use zfactor::inv_mod_big;

use crate::error::{Error, Result};
use arith::{is_perfect_square, legendre, valuation};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// "n" for integers, "n/d" otherwise.
pub fn fmt_rat(a: &Rat) -> String {
    if a.is_integer() {
        a.numer().to_string()
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

/// Parse "n" or "n/d" (optional sign, surrounding whitespace allowed).
pub fn parse_rat(s: &str) -> Result<Rat> {
    let t = s.trim();
    let bad = |msg: &str| Error::Parse { pos: 0, msg: format!("{msg}: {s:?}") };
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let valid = |x: &str, signed: bool| {
        let x = if signed { x.strip_prefix('-').or_else(|| x.strip_prefix('+')).unwrap_or(x) } else { x };
        !x.is_empty() && x.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(n, true) || !valid(d, false) {
        return Err(bad("malformed rational"));
    }
    let n: BigInt = n.parse().map_err(|_| bad("malformed numerator"))?;
    let d: BigInt = d.parse().map_err(|_| bad("malformed denominator"))?;
    if d.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rat::new(n, d))
}

/// Integer in the square class of a nonzero rational: numerator times denominator.
pub fn square_class_int(a: &Rat) -> BigInt {
    a.numer() * a.denom()
}

pub fn is_square_q(a: &Rat) -> Result<bool> {
    if a.is_zero() {
        return Err(Error::Zero("is_square_q"));
    }
    Ok(is_perfect_square(a.numer()) && is_perfect_square(a.denom()))
}

/// Exact square root of a rational square.
pub fn sqrt_q(a: &Rat) -> Option<Rat> {
    if a.is_negative() {
        return None;
    }
    let n = a.numer().sqrt();
    let d = a.denom().sqrt();
    if &n * &n == *a.numer() && &d * &d == *a.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

/// Resultant-based discriminant (-1)^{n(n-1)/2} Res(f, f') / lc(f).
pub fn discriminant(f: &RatPoly) -> Result<Rat> {
    let n = f.deg();
    if f.is_zero() || n < 2 {
        return Err(Error::Degree(format!("discriminant needs degree >= 2, got {n}")));
    }
    let r = RatPoly::resultant(f, &f.derivative()) / f.lc();
    Ok(if (n * (n - 1) / 2) % 2 == 1 { -r } else { r })
}

/// A place of Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LocalPlace {
    Real,
    Prime(u64),
}

impl LocalPlace {
    pub fn prime(p: u64) -> Result<Self> {
        if arith::is_prime(p) {
            Ok(LocalPlace::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }
}

impl fmt::Display for LocalPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalPlace::Real => write!(f, "real"),
            LocalPlace::Prime(p) => write!(f, "{p}"),
        }
    }
}

fn mod8(n: &BigInt) -> u64 {
    arith::mod_u64(n, 8)
}

/// Hilbert symbol (a, b)_v.
pub fn hilbert_symbol(a: &Rat, b: &Rat, v: LocalPlace) -> Result<i32> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Zero("hilbert_symbol"));
    }
    match v {
        LocalPlace::Real => Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 }),
        LocalPlace::Prime(p) => {
            let (alpha, u) = valuation(&square_class_int(a), p);
            let (beta, w) = valuation(&square_class_int(b), p);
            if p == 2 {
                let eps = |x: &BigInt| u32::from(mod8(x) % 4 == 3);
                let omega = |x: &BigInt| u32::from(matches!(mod8(x), 3 | 5));
                let e = eps(&u) * eps(&w) + alpha * omega(&w) + beta * omega(&u);
                Ok(if e % 2 == 0 { 1 } else { -1 })
            } else {
                let mut s = 1;
                if (alpha * beta) % 2 == 1 && p % 4 == 3 {
                    s = -s;
                }
                if beta % 2 == 1 {
                    s *= legendre(&u, p);
                }
                if alpha % 2 == 1 {
                    s *= legendre(&w, p);
                }
                Ok(s)
            }
        }
    }
}

/// Whether a is a square in Q_v.
pub fn local_square(a: &Rat, v: LocalPlace) -> Result<bool> {
    if a.is_zero() {
        return Err(Error::Zero("local_square"));
    }
    match v {
        LocalPlace::Real => Ok(a.is_positive()),
        LocalPlace::Prime(p) => {
            let (alpha, u) = valuation(&square_class_int(a), p);
            if alpha % 2 == 1 {
                return Ok(false);
            }
            if p == 2 {
                Ok(mod8(&u) == 1)
            } else {
                Ok(legendre(&u, p) == 1)
            }
        }
    }
}

/// p-adic valuation of a nonzero rational.
pub fn val_q(a: &Rat, p: u64) -> i64 {
    let (vn, _) = valuation(a.numer(), p);
    let (vd, _) = valuation(a.denom(), p);
    vn as i64 - vd as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squares() {
        assert!(is_square_q(&ratio(4, 9)).unwrap());
        assert!(!is_square_q(&rat(5)).unwrap());
        assert!(is_square_q(&rat(2500)).unwrap());
        assert!(!is_square_q(&rat(-4)).unwrap());
        assert!(is_square_q(&rat(0)).is_err());
        assert_eq!(sqrt_q(&ratio(4, 9)), Some(ratio(2, 3)));
    }

    #[test]
    fn discriminants() {
        assert_eq!(discriminant(&RatPoly::from_ints(&[-1, 0, 1])).unwrap(), rat(4));
        assert_eq!(discriminant(&RatPoly::from_ints(&[1, 1, 1])).unwrap(), rat(-3));
        assert_eq!(discriminant(&RatPoly::from_ints(&[-2, 0, 0, 0, 0, 1])).unwrap(), rat(50000));
        assert!(discriminant(&RatPoly::from_ints(&[1, 1])).is_err());
    }

    #[test]
    fn hilbert_examples() {
        assert_eq!(hilbert_symbol(&rat(-1), &rat(-1), LocalPlace::Real).unwrap(), -1);
        assert_eq!(hilbert_symbol(&rat(-1), &rat(-1), LocalPlace::Prime(2)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&rat(2), &rat(7), LocalPlace::Prime(7)).unwrap(), 1);
        assert_eq!(hilbert_symbol(&rat(3), &rat(7), LocalPlace::Prime(7)).unwrap(), -1);
    }

    #[test]
    fn local_square_examples() {
        assert!(local_square(&rat(9), LocalPlace::Prime(7)).unwrap());
        assert!(!local_square(&rat(7), LocalPlace::Prime(7)).unwrap());
        assert!(local_square(&rat(17), LocalPlace::Prime(2)).unwrap());
        assert!(!local_square(&rat(-1), LocalPlace::Real).unwrap());
    }

    #[test]
    fn rational_strings() {
        assert_eq!(parse_rat(" -6/4 ").unwrap(), ratio(-3, 2));
        assert_eq!(fmt_rat(&ratio(-3, 2)), "-3/2");
        assert_eq!(fmt_rat(&rat(7)), "7");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("1/-2").is_err());
        assert!(parse_rat("x").is_err());
        assert!(LocalPlace::prime(9).is_err());
    }
}
