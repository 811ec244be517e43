//! Galois groups of quintics and signed Frobenius classes in (Z/2)^5 x| S_5.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::arith::primes_from;
use crate::exact::{discriminant, factor_fp, factor_q, is_square_q, FpPoly, Rat, RatPoly};
use crate::groupmod::{cycle_type, cycles, wreath_closure, Perm, PermGroup, WreathElement, ID};

/// Default number of good primes scanned for a (2,2,1) class separating D10 from C5.
pub const DEFAULT_CERT_BOUND: u64 = 10_000;
const EVIDENCE_PRIMES: usize = 20;
const SPLIT_PRIME_SCAN: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GaloisLabel {
    C5,
    D10,
    F20,
    A5,
    S5,
    #[serde(rename = "REDUCIBLE")]
    Reducible,
}

impl GaloisLabel {
    pub fn order(&self) -> Option<usize> {
        match self {
            GaloisLabel::C5 => Some(5),
            GaloisLabel::D10 => Some(10),
            GaloisLabel::F20 => Some(20),
            GaloisLabel::A5 => Some(60),
            GaloisLabel::S5 => Some(120),
            GaloisLabel::Reducible => None,
        }
    }

    /// The fixed concrete copy of the group inside S_5.
    pub fn group(&self) -> Option<PermGroup> {
        match self {
            GaloisLabel::C5 => Some(PermGroup::c5()),
            GaloisLabel::D10 => Some(PermGroup::d10()),
            GaloisLabel::F20 => Some(PermGroup::f20()),
            GaloisLabel::A5 => Some(PermGroup::a5()),
            GaloisLabel::S5 => Some(PermGroup::s5()),
            GaloisLabel::Reducible => None,
        }
    }
}

impl fmt::Display for GaloisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GaloisLabel::C5 => "C5",
            GaloisLabel::D10 => "D10",
            GaloisLabel::F20 => "F20",
            GaloisLabel::A5 => "A5",
            GaloisLabel::S5 => "S5",
            GaloisLabel::Reducible => "REDUCIBLE",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisProfile {
    pub label: GaloisLabel,
    pub disc_is_square: bool,
    /// Rational root of the F20 resolvent of the integral model, if any.
    pub resolvent_root: Option<Rat>,
    /// (prime, cycle type) for the first good primes.
    pub evidence: Vec<(u64, Vec<usize>)>,
    /// Set when C5 is reported because no (2,2,1) class appeared among this many good primes.
    pub c5_bound: Option<u64>,
}

impl GaloisProfile {
    pub fn is_probabilistic(&self) -> bool {
        self.c5_bound.is_some()
    }
}

/// Monic integral model Q(x) = L^5 P(x/L) of a monic rational quintic.
pub fn integral_model(p: &RatPoly) -> (Vec<BigInt>, BigInt) {
    let p = p.monic();
    let l = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let n = p.deg();
    let mut out = Vec::with_capacity(n + 1);
    for (i, c) in p.coeffs().iter().enumerate() {
        let scaled = c * Rat::from_integer(l.pow((n - i) as u32));
        out.push(scaled.to_integer());
    }
    (out, l)
}

/// Sorted cycle type of the Frobenius at p, or None at bad primes.
pub fn cycle_type_mod(p: &RatPoly, prime: u64) -> Option<Vec<usize>> {
    let f = FpPoly::from_rat(p, prime)?;
    if f.deg() != p.deg() || !f.is_squarefree() {
        return None;
    }
    let mut t: Vec<usize> = factor_fp(&f).ok()?.iter().map(|(g, _)| g.deg()).collect();
    t.sort_unstable_by(|a, b| b.cmp(a));
    Some(t)
}

fn eval_mod(q: &[BigInt], x: &BigInt, n: &BigInt) -> BigInt {
    q.iter().rev().fold(BigInt::zero(), |acc, c| (acc * x + c).mod_floor(n))
}

/// Simple roots of the monic integer polynomial q in Z/N, N = p^k, by Newton lifting.
fn padic_roots(q: &[BigInt], p: u64, n: &BigInt) -> Option<Vec<BigInt>> {
    let f = FpPoly::new(p, q.iter().map(|c| crate::exact::arith::mod_u64(c, p)).collect());
    let roots = f.roots();
    if roots.len() != q.len() - 1 {
        return None;
    }
    let dq: Vec<BigInt> = q.iter().enumerate().skip(1).map(|(i, c)| c * i).collect();
    let bits = n.bits();
    let mut out = Vec::new();
    for r in roots {
        let mut x = BigInt::from(r);
        let mut prec = 1u64;
        while prec < 2 * bits {
            let fx = eval_mod(q, &x, n);
            let dx = eval_mod(&dq, &x, n);
            let inv = crate::exact::inv_mod_big(&dx, n)?;
            x = (x - fx * inv).mod_floor(n);
            prec *= 2;
        }
        if !eval_mod(q, &x, n).is_zero() {
            return None;
        }
        out.push(x);
    }
    Some(out)
}

fn sym(a: &BigInt, n: &BigInt) -> BigInt {
    let r = a.mod_floor(n);
    if &r * 2 > *n {
        r - n
    } else {
        r
    }
}

/// One permutation per coset of F20: one per complementary pair of pentagon/pentagram.
fn f20_coset_reps() -> Vec<Perm> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for p in crate::groupmod::all_perms() {
        let edges = |step: usize| -> u32 {
            (0..5).fold(0u32, |acc, i| {
                let (a, b) = (p[i] as usize, p[(i + step) % 5] as usize);
                let (a, b) = (a.min(b), a.max(b));
                acc | 1 << (a * 5 + b)
            })
        };
        let key = edges(1).min(edges(2));
        if seen.insert(key) {
            out.push(p);
        }
    }
    out
}

/// Coefficients (ascending) of prod (y - r_j) mod n, as symmetric residues.
fn poly_from_roots(roots: &[BigInt], n: &BigInt) -> Vec<BigInt> {
    let mut c = vec![BigInt::one()];
    for r in roots {
        let mut next = vec![BigInt::zero(); c.len() + 1];
        for (i, a) in c.iter().enumerate() {
            next[i + 1] += a;
            next[i] -= a * r;
        }
        c = next.into_iter().map(|x| x.mod_floor(n)).collect();
    }
    c.iter().map(|x| sym(x, n)).collect()
}

fn int_poly(c: &[BigInt]) -> RatPoly {
    RatPoly::from_bigints(c)
}

/// The F20 resolvent sextic of a monic integral quintic and its rational
/// roots, after a Tschirnhaus change if the plain resolvent is not squarefree.
fn f20_resolvent(q: &[BigInt]) -> Result<(RatPoly, Vec<Rat>)> {
    let b: BigInt = q.iter().map(|c| c.abs()).max().unwrap_or_default() + BigInt::one();
    let b_max: BigInt = &b * &b + &b * 10;
    let theta_bound: BigInt = b_max.pow(4) * 100;
    let bound = theta_bound.pow(6) * 128;
    let reps = f20_coset_reps();
    let mut tried = 0;
    for p in primes_from(7) {
        if tried > SPLIT_PRIME_SCAN {
            break;
        }
        let f = FpPoly::new(p, q.iter().map(|c| crate::exact::arith::mod_u64(c, p)).collect());
        if !f.is_squarefree() {
            continue;
        }
        tried += 1;
        if f.roots().len() != 5 {
            continue;
        }
        let pb = BigInt::from(p);
        let mut n = pb.clone();
        while n <= bound {
            n *= &pb;
        }
        let alpha = padic_roots(q, p, &n).ok_or_else(|| Error::Internal("Hensel lift failed".into()))?;
        for c in 0..=10i64 {
            let beta: Vec<BigInt> =
                if c == 0 { alpha.clone() } else { alpha.iter().map(|a| (a * a + a * c).mod_floor(&n)).collect() };
            if c > 0 {
                let tq = int_poly(&poly_from_roots(&beta, &n));
                if !tq.is_squarefree() {
                    continue;
                }
            }
            let thetas: Vec<BigInt> = reps
                .iter()
                .map(|s| {
                    let r = |i: usize| &beta[s[i % 5] as usize];
                    let d: BigInt = (0..5).map(|i| r(i) * r(i + 1) - r(i) * r(i + 2)).sum();
                    (&d * &d).mod_floor(&n)
                })
                .collect();
            let res = int_poly(&poly_from_roots(&thetas, &n));
            if !res.is_squarefree() {
                continue;
            }
            let mut roots: Vec<Rat> = thetas
                .iter()
                .map(|t| Rat::from_integer(sym(t, &n)))
                .filter(|t| res.eval(t).is_zero())
                .collect();
            roots.sort();
            roots.dedup();
            return Ok((res, roots));
        }
        return Err(Error::Internal("no squarefree resolvent after Tschirnhaus changes".into()));
    }
    Err(Error::Internal("no totally split prime found for the resolvent".into()))
}

pub fn galois_group_quintic(p: &RatPoly) -> Result<GaloisProfile> {
    galois_group_quintic_with_bound(p, DEFAULT_CERT_BOUND)
}

pub fn galois_group_quintic_with_bound(p: &RatPoly, cert_bound: u64) -> Result<GaloisProfile> {
    if p.is_zero() || p.deg() != 5 {
        return Err(Error::Degree(format!("expected a quintic, got degree {}", p.deg())));
    }
    let p = p.monic();
    if !p.is_squarefree() {
        return Err(Error::SingularBaseLocus(RatPoly::gcd(&p, &p.derivative()).to_string()));
    }
    let disc_is_square = is_square_q(&discriminant(&p)?)?;
    let evidence: Vec<(u64, Vec<usize>)> =
        primes_from(3).filter_map(|q| cycle_type_mod(&p, q).map(|t| (q, t))).take(EVIDENCE_PRIMES).collect();
    if factor_q(&p)?.len() > 1 {
        return Ok(GaloisProfile { label: GaloisLabel::Reducible, disc_is_square, resolvent_root: None, evidence, c5_bound: None });
    }
    let (q, _) = integral_model(&p);
    let (_, roots) = f20_resolvent(&q)?;
    let resolvent_root = roots.first().cloned();
    let mut c5_bound = None;
    let label = match (disc_is_square, resolvent_root.is_some()) {
        (true, true) => {
            let found = primes_from(3)
                .filter_map(|q| cycle_type_mod(&p, q))
                .take(cert_bound as usize)
                .any(|t| t == [2, 2, 1]);
            if found {
                GaloisLabel::D10
            } else {
                c5_bound = Some(cert_bound);
                GaloisLabel::C5
            }
        }
        (false, true) => GaloisLabel::F20,
        (true, false) => GaloisLabel::A5,
        (false, false) => GaloisLabel::S5,
    };
    Ok(GaloisProfile { label, disc_is_square, resolvent_root, evidence, c5_bound })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalFactor {
    pub factor: FpPoly,
    pub degree: usize,
    pub global_factor: usize,
    /// 1 when the representative of delta is a non-residue in F_p[t]/(factor).
    pub residue_bit: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedFrobenius {
    pub p: u64,
    pub cycle_type: Vec<usize>,
    pub local: Vec<LocalFactor>,
}

impl SignedFrobenius {
    pub fn sign_sum(&self) -> u8 {
        self.local.iter().map(|l| l.residue_bit).sum::<u8>() % 2
    }

    /// Signed cycle type such as "2'2'1".
    pub fn signed_type(&self) -> String {
        let mut parts: Vec<(usize, bool)> = self.local.iter().map(|l| (l.degree, l.residue_bit == 1)).collect();
        parts.sort_by(|a, b| b.cmp(a));
        parts.iter().map(|(l, s)| if *s { format!("{l}'") } else { l.to_string() }).collect()
    }

    /// A concrete wreath element in the class: cycles from the fixed copy of
    /// the Galois group when P is irreducible with a known small group,
    /// consecutive blocks otherwise; each residue bit sits on the least
    /// element of its cycle.
    pub fn representative(&self, label: GaloisLabel, degrees: &[usize]) -> WreathElement {
        let small = matches!(label, GaloisLabel::C5 | GaloisLabel::D10 | GaloisLabel::F20 | GaloisLabel::A5);
        if small {
            if let Some(g) = label.group() {
                if let Some(perm) = g.elements().iter().find(|e| cycle_type(e) == self.cycle_type) {
                    let mut sign = 0u8;
                    let cyc = cycles(perm);
                    let mut used = vec![false; cyc.len()];
                    for l in &self.local {
                        let k = (0..cyc.len()).find(|&k| !used[k] && cyc[k].len() == l.degree).expect("matching cycle");
                        used[k] = true;
                        if l.residue_bit == 1 {
                            sign |= 1 << cyc[k][0];
                        }
                    }
                    return WreathElement::new(sign, *perm);
                }
            }
        }
        let mut offsets = Vec::with_capacity(degrees.len());
        let mut acc = 0;
        for d in degrees {
            offsets.push(acc);
            acc += d;
        }
        let mut perm: Perm = ID;
        let mut sign = 0u8;
        let mut next = offsets.clone();
        for l in &self.local {
            let start = next[l.global_factor];
            for k in 0..l.degree {
                perm[start + k] = (start + (k + 1) % l.degree) as u8;
            }
            if l.residue_bit == 1 {
                sign |= 1 << start;
            }
            next[l.global_factor] += l.degree;
        }
        WreathElement::new(sign, perm)
    }
}

/// Signed Frobenius datum at p for the factors P_i with delta representatives d_i.
pub fn frobenius_class(factors: &[RatPoly], reps: &[RatPoly], p: u64) -> Result<SignedFrobenius> {
    if p == 2 || !crate::exact::arith::is_prime(p) {
        return Err(if p == 2 { Error::Ramified(2) } else { Error::NotPrime(p) });
    }
    if factors.len() != reps.len() {
        return Err(Error::Invalid("one representative per factor is required".into()));
    }
    let mut product = FpPoly::one(p);
    let mut local = Vec::new();
    for (i, (f, d)) in factors.iter().zip(reps).enumerate() {
        let fp = FpPoly::from_rat(f, p).ok_or(Error::Ramified(p))?;
        let dp = FpPoly::from_rat(d, p).ok_or(Error::Ramified(p))?;
        if fp.deg() != f.deg() {
            return Err(Error::Ramified(p));
        }
        product = product.mul(&fp);
        for (g, e) in factor_fp(&fp)? {
            if e > 1 {
                return Err(Error::Ramified(p));
            }
            let chi = dp.quadratic_character(&g);
            if chi == 0 {
                return Err(Error::Ramified(p));
            }
            local.push(LocalFactor { degree: g.deg(), global_factor: i, residue_bit: u8::from(chi == -1), factor: g });
        }
    }
    if !product.is_squarefree() {
        return Err(Error::Ramified(p));
    }
    let mut cycle_type: Vec<usize> = local.iter().map(|l| l.degree).collect();
    cycle_type.sort_unstable_by(|a, b| b.cmp(a));
    Ok(SignedFrobenius { p, cycle_type, local })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KdeltaSample {
    pub generators: Vec<WreathElement>,
    pub primes: Vec<u64>,
    pub order: usize,
    /// (number of primes sampled, group order) at each growth event.
    pub growth: Vec<(usize, usize)>,
    /// No growth over the second half of the budget.
    pub stable: bool,
    /// All factors linear: the representatives use the canonical root order
    /// and the group is a lower bound for the image of Galois.
    pub certified: bool,
}

pub fn kdelta_subgroup_sample(
    factors: &[RatPoly],
    reps: &[RatPoly],
    label: GaloisLabel,
    prime_budget: usize,
) -> Result<KdeltaSample> {
    let degrees: Vec<usize> = factors.iter().map(RatPoly::deg).collect();
    let mut generators: Vec<WreathElement> = Vec::new();
    let mut group: BTreeSet<WreathElement> = BTreeSet::from([WreathElement::IDENTITY]);
    let mut primes = Vec::new();
    let mut growth = vec![(0, 1)];
    for p in primes_from(3) {
        if primes.len() >= prime_budget {
            break;
        }
        let frob = match frobenius_class(factors, reps, p) {
            Ok(f) => f,
            Err(Error::Ramified(_)) => continue,
            Err(e) => return Err(e),
        };
        primes.push(p);
        let g = frob.representative(label, &degrees);
        if !group.contains(&g) {
            generators.push(g);
            group = wreath_closure(&generators).into_iter().collect();
            growth.push((primes.len(), group.len()));
        }
    }
    let last = growth.last().map_or(0, |g| g.0);
    Ok(KdeltaSample {
        order: group.len(),
        stable: last <= prime_budget / 2,
        certified: degrees.iter().all(|&d| d == 1),
        generators,
        primes,
        growth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn poly(c: &[i64]) -> RatPoly {
        RatPoly::from_ints(c)
    }

    #[test]
    fn labels() {
        assert_eq!(galois_group_quintic(&poly(&[-1, -1, 0, 0, 0, 1])).unwrap().label, GaloisLabel::S5);
        assert_eq!(galois_group_quintic(&poly(&[-2, 0, 0, 0, 0, 1])).unwrap().label, GaloisLabel::F20);
        assert_eq!(galois_group_quintic_with_bound(&poly(&[1, 3, -3, -4, 1, 1]), 500).unwrap().label, GaloisLabel::C5);
        assert_eq!(galois_group_quintic(&poly(&[12, -5, 0, 0, 0, 1])).unwrap().label, GaloisLabel::D10);
        assert_eq!(galois_group_quintic(&poly(&[16, 20, 0, 0, 0, 1])).unwrap().label, GaloisLabel::A5);
        let split = RatPoly::from_roots(&[rat(0), rat(1), rat(2), rat(3), rat(4)]);
        assert_eq!(galois_group_quintic(&split).unwrap().label, GaloisLabel::Reducible);
    }

    #[test]
    fn coset_count() {
        assert_eq!(f20_coset_reps().len(), 6);
    }

    #[test]
    fn frobenius_examples() {
        let split = RatPoly::from_roots(&[rat(0), rat(1), rat(2), rat(3), rat(4)]);
        let factors = crate::exact::irreducible_factors(&split).unwrap();
        let c = |x: i64| RatPoly::constant(rat(x));
        let reps = vec![c(5), c(5), c(1), c(1), c(1)];
        let f = frobenius_class(&factors, &reps, 7).unwrap();
        assert_eq!(f.cycle_type, vec![1, 1, 1, 1, 1]);
        let bits: Vec<u8> = f.local.iter().map(|l| l.residue_bit).collect();
        assert_eq!(bits, vec![1, 1, 0, 0, 0]);
        assert!(matches!(frobenius_class(&factors, &reps, 3), Err(Error::Ramified(3))));
        let q = poly(&[-2, 0, 0, 0, 0, 1]);
        let f = frobenius_class(std::slice::from_ref(&q), &[RatPoly::one()], 11).unwrap();
        assert_eq!(f.sign_sum(), 0);
        assert!(f.local.iter().all(|l| l.residue_bit == 0));
        assert!(matches!(frobenius_class(&[q], &[RatPoly::one()], 5), Err(Error::Ramified(5))));
    }

    #[test]
    fn sampled_subgroups() {
        let split = RatPoly::from_roots(&[rat(0), rat(1), rat(2), rat(3), rat(4)]);
        let factors = crate::exact::irreducible_factors(&split).unwrap();
        let c = |x: i64| RatPoly::constant(rat(x));
        let s = kdelta_subgroup_sample(&factors, &[c(5), c(5), c(5), c(5), c(1)], GaloisLabel::Reducible, 60).unwrap();
        assert!(s.certified);
        assert!(s.generators.iter().all(|g| g.perm == ID));
        // a constant delta gives the same residue bit at the four roots
        assert_eq!(s.order, 2);
        assert_eq!(s.generators[0].sign, 0b01111);
        let q = poly(&[-2, 0, 0, 0, 0, 1]);
        let t = kdelta_subgroup_sample(&[q], &[RatPoly::one()], GaloisLabel::F20, 60).unwrap();
        assert!(t.generators.iter().all(|g| g.sign == 0));
        assert_eq!(20 % t.order, 0);
    }
}
