//! Factorization over Q: squarefree decomposition, modular factorization,
//! Hensel lifting and exhaustive recombination with a Mignotte-type bound.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::arith::{is_prime, mod_u64};
use super::fp::{factor_fp, FpPoly};
use super::{Rat, RatPoly};
use crate::error::{Error, Result};

/// Symmetric residue of a modulo m.
pub(crate) fn sym_mod(a: &BigInt, m: &BigInt) -> BigInt {
    let r = a.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

pub(crate) fn inv_mod_big(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

fn zmul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    v
}

fn zmod(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    a.iter().map(|x| x.mod_floor(m)).collect()
}

fn to_fp(a: &[BigInt], p: u64) -> FpPoly {
    FpPoly::new(p, a.iter().map(|x| mod_u64(x, p)).collect())
}

fn from_fp(a: &FpPoly) -> Vec<BigInt> {
    a.coeffs().iter().map(|&x| BigInt::from(x)).collect()
}

fn add_scaled(a: &mut Vec<BigInt>, b: &FpPoly, scale: &BigInt) {
    if a.len() < b.coeffs().len() {
        a.resize(b.coeffs().len(), BigInt::zero());
    }
    for (i, &c) in b.coeffs().iter().enumerate() {
        a[i] += scale * BigInt::from(c);
    }
}

/// Lift f ≡ g0·h0 (mod p), f monic, g0 and h0 monic and coprime mod p, to
/// f ≡ g·h (mod p^k).
fn hensel_pair(f: &[BigInt], g0: &FpPoly, h0: &FpPoly, p: u64, k: u32) -> (Vec<BigInt>, Vec<BigInt>) {
    let (one, s, t) = FpPoly::ext_gcd(g0, h0);
    debug_assert!(one.is_one());
    let mut g = from_fp(g0);
    let mut h = from_fp(h0);
    let pb = BigInt::from(p);
    let mut pj = pb.clone();
    for _ in 1..k {
        let prod = zmul(&g, &h);
        let n = f.len().max(prod.len());
        let diff: Vec<BigInt> = (0..n)
            .map(|i| {
                f.get(i).cloned().unwrap_or_default() - prod.get(i).cloned().unwrap_or_default()
            })
            .collect();
        let e: Vec<BigInt> = diff.iter().map(|x| x / &pj).collect();
        let e = to_fp(&e, p);
        if !e.is_zero() {
            let (q, r) = e.mul(&s).divrem(h0);
            let dg = e.mul(&t).add(&q.mul(g0));
            add_scaled(&mut h, &r, &pj);
            add_scaled(&mut g, &dg, &pj);
        }
        pj *= &pb;
    }
    (zmod(&g, &pj), zmod(&h, &pj))
}

fn hensel_multi(f: &[BigInt], factors: &[FpPoly], p: u64, k: u32) -> Vec<Vec<BigInt>> {
    if factors.len() == 1 {
        let m = BigInt::from(p).pow(k);
        return vec![zmod(f, &m)];
    }
    let g0 = &factors[0];
    let h0 = factors[1..].iter().fold(FpPoly::one(p), |acc, u| acc.mul(u));
    let (g, h) = hensel_pair(f, g0, &h0, p, k);
    let mut out = vec![g];
    out.extend(hensel_multi(&h, &factors[1..], p, k));
    out
}

fn int_poly_to_rat(a: &[BigInt]) -> RatPoly {
    RatPoly::from_bigints(a)
}

fn combinations(n: usize, s: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, s, cur, out);
            cur.pop();
        }
    }
    rec(0, n, s, &mut cur, &mut out);
    out
}

/// Factor a squarefree primitive integer polynomial with positive leading
/// coefficient into primitive irreducible integer polynomials.
fn factor_squarefree_int(h: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = h.len() - 1;
    if n <= 1 {
        return vec![h.to_vec()];
    }
    let lc = h[n].clone();
    let fh = int_poly_to_rat(h);
    // pick a prime with few modular factors
    let mut best: Option<(u64, Vec<FpPoly>)> = None;
    let mut tried = 0;
    for p in (3u64..).filter(|&p| is_prime(p)) {
        if mod_u64(&lc, p) == 0 {
            continue;
        }
        let hp = to_fp(h, p);
        if !hp.is_squarefree() {
            continue;
        }
        let fs: Vec<FpPoly> = factor_fp(&hp).unwrap().into_iter().map(|(g, _)| g).collect();
        if fs.len() == 1 {
            return vec![h.to_vec()];
        }
        if best.as_ref().is_none_or(|(_, b)| fs.len() < b.len()) {
            best = Some((p, fs));
        }
        tried += 1;
        if tried >= 6 {
            break;
        }
    }
    let (p, mut modular) = best.unwrap();
    // coefficient bound for lc·(any factor)
    let norm2: BigInt = h.iter().map(|c| c * c).sum();
    let bound = (BigInt::one() << n) * (norm2.sqrt() + 1) * lc.abs();
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = pb.clone();
    while pk <= &bound * 2 {
        pk *= &pb;
        k += 1;
    }
    let lc_inv = inv_mod_big(&lc, &pk).unwrap();
    let monic_target: Vec<BigInt> = h.iter().map(|c| (c * &lc_inv).mod_floor(&pk)).collect();
    let mut lifted = hensel_multi(&monic_target, &modular, p, k);

    let mut rest = fh;
    let mut out = Vec::new();
    let mut s = 1;
    while 2 * s <= lifted.len() {
        let mut found = false;
        for comb in combinations(lifted.len(), s) {
            let lc_rest = rest.lc();
            let lc_int = lc_rest.to_integer();
            let mut prod = vec![lc_int.clone()];
            for &i in &comb {
                prod = zmod(&zmul(&prod, &lifted[i]), &pk);
            }
            let cand: Vec<BigInt> = prod.iter().map(|c| sym_mod(c, &pk)).collect();
            let cand_poly = int_poly_to_rat(&cand);
            if cand_poly.deg() == 0 {
                continue;
            }
            let (_, prim) = cand_poly.primitive_part();
            let prim_poly = int_poly_to_rat(&prim);
            let (q, r) = rest.divrem(&prim_poly);
            if r.is_zero() {
                out.push(prim);
                let (_, qprim) = q.primitive_part();
                rest = int_poly_to_rat(&qprim);
                let keep: Vec<usize> = (0..lifted.len()).filter(|i| !comb.contains(i)).collect();
                lifted = keep.iter().map(|&i| lifted[i].clone()).collect();
                modular = keep.iter().map(|&i| modular[i].clone()).collect();
                found = true;
                break;
            }
        }
        if !found {
            s += 1;
        }
    }
    if rest.deg() > 0 {
        let (_, prim) = rest.primitive_part();
        out.push(prim);
    }
    out
}

/// Yun's squarefree decomposition over Q of a monic polynomial.
fn squarefree_q(f: &RatPoly) -> Vec<(RatPoly, u32)> {
    let mut out = Vec::new();
    let d = f.derivative();
    let mut c = RatPoly::gcd(f, &d);
    let mut w = f.divrem(&c).0;
    let mut i = 1;
    while w.deg() > 0 {
        let y = RatPoly::gcd(&w, &c);
        let z = w.divrem(&y).0;
        if z.deg() > 0 {
            out.push((z.monic(), i));
        }
        i += 1;
        w = y;
        c = c.divrem(&w).0;
    }
    out
}

/// Factor f over Q into monic irreducibles with multiplicities. The product of
/// the factors (with multiplicity) times lc(f) equals f.
pub fn factor_q(f: &RatPoly) -> Result<Vec<(RatPoly, u32)>> {
    if f.is_zero() {
        return Err(Error::Zero("factor_q of the zero polynomial"));
    }
    if f.deg() > 16 {
        return Err(Error::Degree(format!("factor_q supports degree <= 16, got {}", f.deg())));
    }
    let mut out = Vec::new();
    if f.deg() == 0 {
        return Ok(out);
    }
    for (g, e) in squarefree_q(&f.monic()) {
        let (_, prim) = g.primitive_part();
        for h in factor_squarefree_int(&prim) {
            out.push((int_poly_to_rat(&h).monic(), e));
        }
    }
    out.sort();
    Ok(out)
}

/// Monic irreducible factors of a squarefree polynomial, sorted.
pub fn irreducible_factors(f: &RatPoly) -> Result<Vec<RatPoly>> {
    let fs = factor_q(f)?;
    if let Some((g, _)) = fs.iter().find(|(_, e)| *e > 1) {
        return Err(Error::SingularBaseLocus(g.to_string()));
    }
    Ok(fs.into_iter().map(|(g, _)| g).collect())
}

/// Rational roots of f (distinct, ascending).
pub fn rational_roots(f: &RatPoly) -> Result<Vec<Rat>> {
    let mut roots: Vec<Rat> = factor_q(f)?
        .into_iter()
        .filter(|(g, _)| g.deg() == 1)
        .map(|(g, _)| -g.coeff(0))
        .collect();
    roots.sort();
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn product(fs: &[(RatPoly, u32)]) -> RatPoly {
        fs.iter().fold(RatPoly::one(), |acc, (g, e)| &acc * &g.pow(*e))
    }

    #[test]
    fn t2_minus_1() {
        let f = RatPoly::from_ints(&[-1, 0, 1]);
        let fs = factor_q(&f).unwrap();
        assert_eq!(fs, vec![(RatPoly::from_ints(&[1, 1]), 1), (RatPoly::from_ints(&[-1, 1]), 1)]);
    }

    #[test]
    fn t5_minus_2_irreducible() {
        let f = RatPoly::from_ints(&[-2, 0, 0, 0, 0, 1]);
        assert_eq!(factor_q(&f).unwrap(), vec![(f, 1)]);
    }

    #[test]
    fn split_quintic() {
        let f = RatPoly::from_roots(&[rat(0), rat(1), rat(2), rat(3), rat(4)]);
        let fs = factor_q(&f).unwrap();
        assert_eq!(fs.len(), 5);
        assert_eq!(product(&fs), f);
        assert_eq!(rational_roots(&f).unwrap(), vec![rat(0), rat(1), rat(2), rat(3), rat(4)]);
    }

    #[test]
    fn swinnerton_dyer_like_recombination() {
        // (t^4 - 10 t^2 + 1) is irreducible but splits mod every prime
        let f = RatPoly::from_ints(&[1, 0, -10, 0, 1]);
        assert_eq!(factor_q(&f).unwrap(), vec![(f.clone(), 1)]);
        let g = RatPoly::from_ints(&[-2, 0, 1]);
        let h = &f * &g;
        let fs = factor_q(&h).unwrap();
        assert_eq!(fs.len(), 2);
        assert_eq!(product(&fs), h);
    }

    #[test]
    fn multiplicities_and_content() {
        let a = RatPoly::from_ints(&[1, 2]); // 2t + 1
        let b = RatPoly::from_ints(&[3, 0, 1]);
        let f = (&(&a * &a) * &b).scale(&rat(7));
        let fs = factor_q(&f).unwrap();
        assert_eq!(&product(&fs).scale(&f.lc()), &f);
        assert!(fs.iter().any(|(g, e)| g.deg() == 1 && *e == 2));
    }
}
