//! Local arithmetic: bad places, real and p-adic solubility, residues of
//! delta, Clifford invariants, the parity ledger and the (b, T) search.

mod padic;
mod real;
mod search;

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::canon::DeltaPrime;
use crate::error::{Error, Result};
use crate::exact::arith::{factor_integer, primes_below};
use crate::exact::{discriminant, hilbert_symbol, irreducible_factors, local_square, val_q, LocalPlace, Rat, RatPoly};
use crate::f2::{F2Vec, Subspace};
use crate::galois::{frobenius_class, GaloisLabel};
use crate::groupmod::permute_bits;

pub use padic::{integral_forms, padic_soluble, IntForm, DEFAULT_EFFORT};
pub use real::{real_roots_isolated, real_soluble, signature};
pub use search::{find_bt, BtPrime, BtWitness};

/// Default augmentation: all primes below this bound join the bad set.
pub const DEFAULT_MARGIN: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Soluble,
    Insoluble,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Integral point with Q_k(x) = 0 mod p^precision (None: exactly zero) and a
    /// Jacobian minor of valuation `minor_valuation`, where precision > 2 * minor_valuation.
    Point { coords: Vec<String>, precision: Option<u32>, minor_valuation: u32 },
    /// Primitive solutions die out modulo p^level.
    NoPointsModulo { level: u32 },
    /// The member Phi1 - t Phi2 is definite ("inf" for -Phi2).
    DefiniteMember { t: String, positive: bool },
    /// Signatures (positive, negative) of Phi1 - t Phi2 at one sample per interval.
    Signatures { samples: Vec<(String, usize, usize)> },
    /// Search budget exhausted after this many nodes.
    Exhausted { nodes: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalCertificate {
    pub place: LocalPlace,
    pub verdict: Verdict,
    pub witness: Witness,
}

/// S0: 2, the real place, primes of bad reduction for P and delta', and a margin.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BadSet {
    pub primes: BTreeSet<u64>,
    /// Cofactors that resisted factoring; every prime dividing them is bad.
    pub unfactored: Vec<String>,
    pub margin: u64,
    #[serde(skip)]
    unfactored_int: Vec<BigUint>,
}

impl BadSet {
    pub fn contains(&self, p: u64) -> bool {
        self.primes.contains(&p) || self.unfactored_int.iter().any(|n| (n % p).is_zero())
    }

    pub fn places(&self) -> Vec<LocalPlace> {
        std::iter::once(LocalPlace::Real).chain(self.primes.iter().map(|&p| LocalPlace::Prime(p))).collect()
    }

    fn absorb(&mut self, n: &BigInt) {
        if n.is_zero() {
            return;
        }
        let f = factor_integer(n);
        for (q, _) in f.primes {
            match q.to_u64() {
                Some(q) => {
                    self.primes.insert(q);
                }
                None => self.push_unfactored(q),
            }
        }
        for u in f.unfactored {
            self.push_unfactored(u);
        }
    }

    fn push_unfactored(&mut self, u: BigUint) {
        if !self.unfactored_int.contains(&u) {
            self.unfactored.push(u.to_string());
            self.unfactored_int.push(u);
        }
    }

    /// Add every prime dividing the numerator or denominator of a.
    pub fn absorb_rat(&mut self, a: &Rat) {
        self.absorb(a.numer());
        self.absorb(a.denom());
    }
}

fn delta_reps(factors: &[RatPoly], delta: &DeltaPrime) -> Result<Vec<RatPoly>> {
    match delta {
        DeltaPrime::Global(d) => Ok(factors.iter().map(|f| d.rem(f)).collect()),
        DeltaPrime::PerFactor(v) if v.len() == factors.len() => Ok(v.iter().zip(factors).map(|(d, f)| d.rem(f)).collect()),
        DeltaPrime::PerFactor(v) => Err(Error::Invalid(format!("{} delta' entries for {} factors", v.len(), factors.len()))),
    }
}

pub fn bad_set_s0(p: &RatPoly, delta: &DeltaPrime, margin: u64) -> Result<BadSet> {
    let p = p.monic();
    let factors = irreducible_factors(&p)?;
    let reps = delta_reps(&factors, delta)?;
    let mut s = BadSet { primes: BTreeSet::from([2]), unfactored: Vec::new(), margin, unfactored_int: Vec::new() };
    s.primes.extend(primes_below(margin));
    for c in p.coeffs() {
        s.absorb(c.denom());
    }
    s.absorb_rat(&discriminant(&p)?);
    for (f, d) in factors.iter().zip(&reps) {
        if d.is_zero() {
            return Err(Error::NotInvertible(format!("delta' vanishes mod {f}")));
        }
        for c in d.coeffs() {
            s.absorb(c.denom());
        }
        s.absorb_rat(&RatPoly::resultant(f, d));
    }
    Ok(s)
}

/// c(Q) = (-1,-1)_v prod_{i<j} (a_i, a_j)_v.
pub fn clifford_invariant(diag: &[Rat], v: LocalPlace) -> Result<i32> {
    let m1 = -Rat::one();
    let mut c = hilbert_symbol(&m1, &m1, v)?;
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            c *= hilbert_symbol(&diag[i], &diag[j], v)?;
        }
    }
    Ok(c)
}

/// Residue of delta at p: the sign vector modulo (Frob - 1)G.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Residue {
    pub p: u64,
    pub signed_type: String,
    /// Sign vector on the block-placed Frobenius.
    pub sign: String,
    /// Reduced representative of the class in G / (Frob - 1)G.
    pub class: String,
    pub is_zero: bool,
}

pub fn delta_residue_at(p: &RatPoly, delta: &DeltaPrime, prime: u64) -> Result<Residue> {
    let factors = irreducible_factors(&p.monic())?;
    let reps = delta_reps(&factors, delta)?;
    let frob = frobenius_class(&factors, &reps, prime)?;
    let degrees: Vec<usize> = factors.iter().map(RatPoly::deg).collect();
    let g = frob.representative(GaloisLabel::Reducible, &degrees);
    let s = F2Vec::from_u64(5, u64::from(g.sign));
    if s.weight() % 2 == 1 {
        return Err(Error::Invalid(format!("sign vector {s} at {prime} is not zero-sum: N(delta') is not a square")));
    }
    let image: Vec<F2Vec> = (0..4u8)
        .map(|k| {
            let e = (1u8 << k) | (1 << 4);
            F2Vec::from_u64(5, u64::from(permute_bits(&g.perm, e) ^ e))
        })
        .collect();
    let sub = Subspace::from_gens(5, image);
    let class = sub.reduce(&s);
    Ok(Residue { p: prime, signed_type: frob.signed_type(), sign: s.to_string(), is_zero: class.is_zero(), class: class.to_string() })
}

/// Behaviour of F = Q(sqrt a) at a place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Completion {
    Split,
    Inert,
    Ramified,
}

pub fn completion(a: &Rat, v: LocalPlace) -> Result<Completion> {
    if local_square(a, v)? {
        return Ok(Completion::Split);
    }
    Ok(match v {
        LocalPlace::Real => Completion::Ramified,
        LocalPlace::Prime(p) => {
            let (k, u) = crate::exact::arith::valuation(&crate::exact::square_class_int(a), p);
            if k % 2 == 1 {
                Completion::Ramified
            } else if p == 2 {
                if crate::exact::arith::mod_u64(&u, 4) == 1 {
                    Completion::Inert
                } else {
                    Completion::Ramified
                }
            } else {
                Completion::Inert
            }
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LedgerEntry {
    pub place: LocalPlace,
    /// (d_b, a)_v.
    pub hilbert: i32,
    pub completion: Completion,
    pub good_reduction: bool,
    /// Norm-index factor, None when unresolved.
    pub norm_index: Option<i32>,
    /// hilbert * norm_index when resolved.
    pub total: Option<i32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParityLedger {
    pub d_b: String,
    pub a: String,
    pub entries: Vec<LedgerEntry>,
    /// Places with good reduction whose resolved term is +1.
    pub omitted: Vec<LocalPlace>,
    pub resolved_product: i32,
    pub unknown: Vec<LocalPlace>,
}

/// The local-term ledger over S_{0,b} for the twist of J_b by Q(sqrt a).
/// `semistable` lists primes w with val_w(P(b)) = 1 and res_w(delta) = 0.
pub fn parity_ledger(p: &RatPoly, b: &Rat, a: &Rat, s0: &BadSet, semistable: &[u64]) -> Result<ParityLedger> {
    let pb = p.eval(b);
    if pb.is_zero() {
        return Err(Error::PoleAtB);
    }
    if a.is_zero() {
        return Err(Error::Zero("twist parameter a"));
    }
    let d_b = &pb * &pb * discriminant(&p.monic())?;
    let mut support = s0.clone();
    support.absorb_rat(&pb);
    support.absorb_rat(a);
    support.absorb_rat(&d_b);
    let mut entries = Vec::new();
    let mut omitted = Vec::new();
    let mut unknown = Vec::new();
    let mut product = 1;
    for v in support.places() {
        let hilbert = hilbert_symbol(&d_b, a, v)?;
        let completion = completion(a, v)?;
        let good_reduction = match v {
            LocalPlace::Real => false,
            LocalPlace::Prime(q) => {
                q != 2
                    && val_q(&d_b, q) == 0
                    && p.coeffs().iter().all(|c| c.is_zero() || val_q(c, q) >= 0)
                    && (b.is_zero() || val_q(b, q) >= 0)
            }
        };
        let semistable_here = matches!(v, LocalPlace::Prime(q) if semistable.contains(&q) && val_q(&pb, q) == 1);
        let norm_index = if good_reduction && completion == Completion::Split {
            Some(1)
        } else if semistable_here && completion == Completion::Inert {
            Some(-hilbert)
        } else {
            None
        };
        let total = norm_index.map(|n| n * hilbert);
        match total {
            Some(t) => product *= t,
            None => unknown.push(v),
        }
        if good_reduction && total == Some(1) {
            omitted.push(v);
            continue;
        }
        entries.push(LedgerEntry { place: v, hilbert, completion, good_reduction, norm_index, total });
    }
    Ok(ParityLedger {
        d_b: crate::exact::fmt_rat(&d_b),
        a: crate::exact::fmt_rat(a),
        entries,
        omitted,
        resolved_product: product,
        unknown,
    })
}

/// Whether a prime w meets the semistable conditions for (P, delta', b):
/// val_w(P(b)) = 1 and res_w(delta) = 0.
pub fn semistable_conditions(p: &RatPoly, delta: &DeltaPrime, b: &Rat, w: u64) -> Result<bool> {
    let pb = p.eval(b);
    if pb.is_zero() {
        return Err(Error::PoleAtB);
    }
    if val_q(&pb, w) != 1 {
        return Ok(false);
    }
    Ok(delta_residue_at(p, delta, w)?.is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    fn split() -> RatPoly {
        RatPoly::from_roots(&[rat(0), rat(1), rat(2), rat(3), rat(4)])
    }

    #[test]
    fn bad_sets() {
        let p = RatPoly::from_ints(&[-2, 0, 0, 0, 0, 1]);
        let s = bad_set_s0(&p, &DeltaPrime::one(), 0).unwrap();
        assert_eq!(s.primes, BTreeSet::from([2, 5]));
        let s = bad_set_s0(&p, &DeltaPrime::one(), DEFAULT_MARGIN).unwrap();
        assert!(s.contains(97) && !s.contains(101));
        let d = DeltaPrime::Global(RatPoly::constant(ratio(1, 7)));
        assert!(bad_set_s0(&split(), &d, 0).unwrap().contains(7));
    }

    #[test]
    fn clifford() {
        let ones = vec![rat(1); 5];
        assert_eq!(clifford_invariant(&ones, LocalPlace::Real).unwrap(), -1);
        let mut sq = ones.clone();
        sq[2] = rat(9);
        assert_eq!(clifford_invariant(&sq, LocalPlace::Real).unwrap(), -1);
        assert_eq!(clifford_invariant(&sq, LocalPlace::Prime(3)).unwrap(), 1);
    }

    #[test]
    fn residues() {
        let d = DeltaPrime::PerFactor([5, 5, 1, 1, 1].iter().map(|&c| RatPoly::constant(rat(c))).collect());
        let r = delta_residue_at(&split(), &d, 7).unwrap();
        assert!(!r.is_zero);
        assert_eq!(r.class, "11000");
        for q in [7, 11, 13] {
            assert!(delta_residue_at(&split(), &DeltaPrime::one(), q).unwrap().is_zero);
        }
        // 5-cycle Frobenius: t^5 - 2 is irreducible mod 11? use a prime where it is
        let p = RatPoly::from_ints(&[-2, 0, 0, 0, 0, 1]);
        for q in [3u64, 7, 13, 17] {
            let r = delta_residue_at(&p, &DeltaPrime::Global(RatPoly::constant(rat(3))), q);
            if let Ok(r) = r {
                if r.signed_type.starts_with('5') {
                    assert!(r.is_zero);
                }
            }
        }
        assert!(matches!(delta_residue_at(&split(), &DeltaPrime::one(), 3), Err(Error::Ramified(3))));
    }

    #[test]
    fn ledger_cases() {
        let p = split();
        let b = rat(7);
        let s0 = bad_set_s0(&p, &DeltaPrime::one(), 0).unwrap();
        let l = parity_ledger(&p, &b, &rat(-1), &s0, &[]).unwrap();
        let two = l.entries.iter().find(|e| e.place == LocalPlace::Prime(2)).unwrap();
        assert_eq!(two.norm_index, None);
        assert!(l.unknown.contains(&LocalPlace::Prime(2)));
    }
}
