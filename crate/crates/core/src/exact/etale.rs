//! Square roots in étale algebras Q[t]/(m).
//!
//! A non-square is certified by a prime p of good reduction at which d has a
//! non-residue image in some residue field F_p[t]/(g). A square root is found
//! by Hensel lifting local roots, rational reconstruction and exact checking.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::arith::primes_from;
use super::fp::{factor_fp, sqrt_in_field, FpPoly};
use super::zfactor::inv_mod_big;
use super::{Rat, RatPoly};
use crate::error::{Error, Result};

pub const DEFAULT_PRIME_BUDGET: usize = 200;

const FIRST_SCAN: usize = 24;
const MAX_BITS: u64 = 1 << 14;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EtaleSqrt {
    /// y with y^2 = d mod m.
    Root(RatPoly),
    /// d is a non-residue modulo the irreducible factor `factor` of m mod `prime`.
    NonSquare { prime: u64, factor: FpPoly },
    Undecided { primes_tried: usize },
}

pub fn sqrt_in_etale(d: &RatPoly, m: &RatPoly) -> Result<EtaleSqrt> {
    sqrt_in_etale_with_budget(d, m, DEFAULT_PRIME_BUDGET)
}

pub fn sqrt_in_etale_with_budget(d: &RatPoly, m: &RatPoly, budget: usize) -> Result<EtaleSqrt> {
    if m.is_zero() || m.deg() == 0 || !m.is_monic() {
        return Err(Error::Invalid("modulus must be monic of positive degree".into()));
    }
    if !m.is_squarefree() {
        return Err(Error::Invalid(format!("modulus {m} is not squarefree")));
    }
    let d = d.rem(m);
    if d.is_zero() {
        return Err(Error::Zero("sqrt_in_etale"));
    }
    if !RatPoly::gcd(&d, m).is_one() {
        return Err(Error::NotInvertible(format!("{d} mod {m}")));
    }
    let mut tried = 0;
    let mut candidates: Vec<(u64, Vec<FpPoly>)> = Vec::new();
    let mut lifted = false;
    for p in primes_from(3) {
        if tried >= budget {
            break;
        }
        let (Some(mp), Some(dp)) = (FpPoly::from_rat(m, p), FpPoly::from_rat(&d, p)) else {
            continue;
        };
        if mp.deg() != m.deg() || !mp.is_squarefree() {
            continue;
        }
        tried += 1;
        let facs: Vec<FpPoly> = factor_fp(&mp)?.into_iter().map(|(g, _)| g).collect();
        let mut unit = true;
        for g in &facs {
            match dp.quadratic_character(g) {
                -1 => return Ok(EtaleSqrt::NonSquare { prime: p, factor: g.clone() }),
                0 => unit = false,
                _ => {}
            }
        }
        if unit && facs.len() <= 5 {
            candidates.push((p, facs));
        }
        if !lifted && (tried >= FIRST_SCAN || tried >= budget) {
            lifted = true;
            if let Some(y) = try_lifts(&d, m, &mut candidates) {
                return Ok(EtaleSqrt::Root(y));
            }
        }
    }
    if !lifted {
        if let Some(y) = try_lifts(&d, m, &mut candidates) {
            return Ok(EtaleSqrt::Root(y));
        }
    }
    Ok(EtaleSqrt::Undecided { primes_tried: tried })
}

fn try_lifts(d: &RatPoly, m: &RatPoly, candidates: &mut [(u64, Vec<FpPoly>)]) -> Option<RatPoly> {
    candidates.sort_by_key(|(p, f)| (f.len(), *p));
    candidates.iter().take(2).find_map(|(p, facs)| lift_sqrt(d, m, *p, facs))
}

/// Coefficients of a rational polynomial modulo N (denominators prime to N).
fn to_zn(f: &RatPoly, n: usize, modulus: &BigInt) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    for (i, a) in f.coeffs().iter().enumerate() {
        let inv = inv_mod_big(a.denom(), modulus).expect("denominator prime to modulus");
        v[i] = (a.numer() * inv).mod_floor(modulus);
    }
    v
}

struct Ring<'a> {
    m: &'a [BigInt],
    n: usize,
    modulus: &'a BigInt,
}

impl Ring<'_> {
    fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let n = self.n;
        let mut prod = vec![BigInt::zero(); 2 * n - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        for k in (n..prod.len()).rev() {
            let c = prod[k].mod_floor(self.modulus);
            if c.is_zero() {
                continue;
            }
            for i in 0..n {
                prod[k - n + i] -= &c * &self.m[i];
            }
        }
        prod.truncate(n);
        prod.into_iter().map(|x| x.mod_floor(self.modulus)).collect()
    }

    fn sub(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        a.iter().zip(b).map(|(x, y)| (x - y).mod_floor(self.modulus)).collect()
    }

    fn scalar(&self, k: i64, a: &[BigInt]) -> Vec<BigInt> {
        a.iter().map(|x| (x * k).mod_floor(self.modulus)).collect()
    }
}

fn crt_fp(residues: &[FpPoly], moduli: &[FpPoly]) -> FpPoly {
    let mut y = residues[0].clone();
    let mut big = moduli[0].clone();
    for (r, g) in residues.iter().zip(moduli).skip(1) {
        let inv = big.rem(g).inv_mod(g).expect("coprime factors");
        let k = r.sub(&y).mul_mod(&inv, g);
        y = y.add(&big.mul(&k));
        big = big.mul(g);
    }
    y
}

fn lift_sqrt(d: &RatPoly, m: &RatPoly, p: u64, facs: &[FpPoly]) -> Option<RatPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(p);
    let mp = FpPoly::from_rat(m, p)?;
    let dp = FpPoly::from_rat(d, p)?;
    let roots: Vec<FpPoly> = facs.iter().map(|g| sqrt_in_field(&dp, g, &mut rng)).collect::<Option<_>>()?;
    let k = facs.len();
    let starts: Vec<FpPoly> = (0..1u32 << (k - 1))
        .map(|signs| {
            let res: Vec<FpPoly> = roots
                .iter()
                .enumerate()
                .map(|(j, r)| if j > 0 && signs >> (j - 1) & 1 == 1 { r.scale(p - 1) } else { r.clone() })
                .collect();
            crt_fp(&res, facs)
        })
        .collect();
    let n = m.deg();
    let pb = BigInt::from(p);
    let mut bits = 128u64;
    while bits <= MAX_BITS {
        let mut exp = 1u32;
        let mut modulus = pb.clone();
        while modulus.bits() < bits {
            modulus *= &pb;
            exp += 1;
        }
        let mz = to_zn(m, n + 1, &modulus);
        let dz = to_zn(d, n, &modulus);
        let ring = Ring { m: &mz[..n], n, modulus: &modulus };
        for y0 in &starts {
            let z0 = y0.scale(2).inv_mod(&mp)?;
            let lift = |f: &FpPoly| {
                let mut v = vec![BigInt::zero(); n];
                for (i, c) in f.coeffs().iter().enumerate() {
                    v[i] = BigInt::from(*c);
                }
                v
            };
            let mut y = lift(y0);
            let mut z = lift(&z0);
            let steps = 64 - u64::from(exp).leading_zeros() + 3;
            let two = {
                let mut v = vec![BigInt::zero(); n];
                v[0] = BigInt::from(2);
                v
            };
            for _ in 0..steps {
                let e = ring.sub(&ring.mul(&y, &y), &dz);
                y = ring.sub(&y, &ring.mul(&z, &e));
                let yz = ring.scalar(2, &ring.mul(&y, &z));
                z = ring.mul(&z, &ring.sub(&two, &yz));
            }
            let coeffs: Option<Vec<Rat>> = y.iter().map(|c| ratrec(c, &modulus)).collect();
            if let Some(c) = coeffs {
                let cand = RatPoly::new(c);
                if (&cand.mul_mod(&cand, m) - d).is_zero() {
                    return Some(cand);
                }
            }
        }
        bits *= 2;
    }
    None
}

/// Rational reconstruction of a modulo n with numerator and denominator
/// bounded by sqrt(n/2).
pub fn ratrec(a: &BigInt, n: &BigInt) -> Option<Rat> {
    let bound = (n / 2u32).sqrt();
    let (mut r0, mut r1) = (n.clone(), a.mod_floor(n));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rat::new(r1, t1))
}
