//! Search for b and primes v_i with val(P(b)) = 1 and prescribed Frobenius classes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{delta_reps, delta_residue_at, BadSet};
use crate::canon::DeltaPrime;
use crate::error::{Error, Result};
use crate::exact::arith::{mod_u64, primes_from};
use crate::exact::{fmt_rat, irreducible_factors, val_q, Rat, RatPoly};
use crate::galois::frobenius_class;
use crate::groupmod::{parse_signed_type, representative_of_type};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BtPrime {
    pub p: u64,
    /// Requested signed cycle type, e.g. "2'2'1".
    pub class: String,
    /// Root of P modulo p^2 that b approximates.
    pub root: String,
    pub valuation: i64,
    pub residue_zero: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BtWitness {
    pub b: String,
    pub primes: Vec<BtPrime>,
    #[serde(skip)]
    pub b_value: Rat,
}

fn canonical_type(s: &str) -> Result<String> {
    let mut parts = parse_signed_type(s)?;
    parts.sort_by(|a, b| b.cmp(a));
    Ok(parts.iter().map(|(l, s)| if *s { format!("{l}'") } else { l.to_string() }).collect())
}

/// Lift a simple root r of P mod p to a root mod p^2; P must be p-integral.
fn lift_root(poly: &RatPoly, r: u64, p: u64) -> Option<BigInt> {
    let p2 = BigInt::from(p) * p;
    let num: Vec<BigInt> = poly
        .coeffs()
        .iter()
        .map(|c| mod_inverse(c.denom(), &p2).map(|inv| (c.numer() * inv).mod_floor(&p2)))
        .collect::<Option<_>>()?;
    let eval = |x: &BigInt| num.iter().rev().fold(BigInt::zero(), |acc, c| (acc * x + c).mod_floor(&p2));
    let deriv: Vec<BigInt> = num.iter().enumerate().skip(1).map(|(i, c)| c * i).collect();
    let evald = |x: &BigInt| deriv.iter().rev().fold(BigInt::zero(), |acc, c| (acc * x + c).mod_floor(&p2));
    let x = BigInt::from(r);
    let d = mod_u64(&evald(&x), p);
    if d == 0 {
        return None;
    }
    let dinv = crate::exact::arith::inv_mod(d, p);
    // x - f(x)/f'(x), with f(x) divisible by p
    let fx = eval(&x);
    let q = fx / p;
    let step = BigInt::from(mod_u64(&(q * dinv), p)) * p;
    Some((x - step).mod_floor(&p2))
}

/// Scan primes outside S0 below `bound` for each requested class, build b by
/// CRT from b_i = theta_i + v_i mod v_i^2 and re-verify everything exactly.
pub fn find_bt(p: &RatPoly, delta: &DeltaPrime, conditions: &[String], s0: &BadSet, bound: u64) -> Result<BtWitness> {
    let p = p.monic();
    let factors = irreducible_factors(&p)?;
    let reps = delta_reps(&factors, delta)?;
    let mut wanted = Vec::new();
    for c in conditions {
        let t = canonical_type(c)?;
        let parts = parse_signed_type(&t)?;
        if !representative_of_type(&parts).is_admissible() {
            return Err(Error::Inadmissible(t));
        }
        wanted.push(t);
    }
    let mut chosen: Vec<Option<(u64, u64)>> = vec![None; wanted.len()];
    for q in primes_from(3) {
        if q >= bound || chosen.iter().all(Option::is_some) {
            break;
        }
        if s0.contains(q) {
            continue;
        }
        let frob = match frobenius_class(&factors, &reps, q) {
            Ok(f) => f,
            Err(Error::Ramified(_)) => continue,
            Err(e) => return Err(e),
        };
        let t = frob.signed_type();
        let Some(slot) = (0..wanted.len()).find(|&i| chosen[i].is_none() && wanted[i] == t) else {
            continue;
        };
        // a root of P fixed by Frobenius on an unswitched sheet
        let Some(root) = frob.local.iter().find(|l| l.degree == 1 && l.residue_bit == 0).map(|l| {
            let c = l.factor.coeffs();
            (q - c[0] % q) % q
        }) else {
            continue;
        };
        chosen[slot] = Some((q, root));
    }
    if let Some(i) = chosen.iter().position(Option::is_none) {
        return Err(Error::BoundExhausted { bound, class: wanted[i].clone() });
    }
    let mut b = BigInt::zero();
    let mut modulus = BigInt::one();
    let mut roots = Vec::new();
    for &(q, r) in chosen.iter().flatten() {
        let theta = lift_root(&p, r, q).ok_or_else(|| Error::Internal(format!("root {r} mod {q} is not simple")))?;
        let q2 = BigInt::from(q) * q;
        let bi = (&theta + q).mod_floor(&q2);
        let inv = mod_inverse(&modulus, &q2).expect("coprime moduli");
        let k = ((&bi - &b) * inv).mod_floor(&q2);
        b += &modulus * k;
        modulus *= &q2;
        b = b.mod_floor(&modulus);
        roots.push(theta);
    }
    let b_value = Rat::from_integer(b);
    let pb = p.eval(&b_value);
    let mut primes = Vec::new();
    for ((&(q, _), theta), class) in chosen.iter().flatten().zip(roots).zip(&wanted) {
        if s0.contains(q) || pb.is_zero() {
            return Err(Error::Internal(format!("witness prime {q} failed re-verification")));
        }
        let valuation = val_q(&pb, q);
        let frob = frobenius_class(&factors, &reps, q)?;
        if valuation != 1 || frob.signed_type() != *class {
            return Err(Error::Internal(format!("witness prime {q} failed re-verification")));
        }
        let residue_zero = delta_residue_at(&p, delta, q)?.is_zero;
        primes.push(BtPrime { p: q, class: class.clone(), root: theta.to_string(), valuation, residue_zero });
    }
    Ok(BtWitness { b: fmt_rat(&b_value), primes, b_value })
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localarith::bad_set_s0;

    #[test]
    fn pure_quintic_identity_class() {
        let p = RatPoly::from_ints(&[-2, 0, 0, 0, 0, 1]);
        let s0 = bad_set_s0(&p, &DeltaPrime::one(), 0).unwrap();
        let w = find_bt(&p, &DeltaPrime::one(), &["11111".into()], &s0, 100_000).unwrap();
        assert_eq!(w.primes.len(), 1);
        assert_eq!(w.primes[0].valuation, 1);
        assert!(w.primes[0].p % 5 == 1);
    }

    #[test]
    fn inadmissible_rejected() {
        let p = RatPoly::from_ints(&[-2, 0, 0, 0, 0, 1]);
        let s0 = bad_set_s0(&p, &DeltaPrime::one(), 0).unwrap();
        assert!(matches!(find_bt(&p, &DeltaPrime::one(), &["5'".into()], &s0, 1000), Err(Error::Inadmissible(_))));
    }

    #[test]
    fn dihedral_patterns() {
        let p = RatPoly::from_ints(&[12, -5, 0, 0, 0, 1]);
        let d = DeltaPrime::Global(RatPoly::from_ints(&[0, -12]));
        let s0 = bad_set_s0(&p, &d, 100).unwrap();
        let w = find_bt(&p, &d, &["2'2'1".into(), "221".into()], &s0, 100_000).unwrap();
        assert!(!w.primes[0].residue_zero);
        assert!(w.primes[1].residue_zero);
        let w = find_bt(&p, &d, &["221".into()], &s0, 100_000).unwrap();
        assert!(w.primes[0].residue_zero);
    }
}
