//! Real solubility of a smooth pencil: no real member may be definite.

use num_traits::{Signed, Zero};

use super::{LocalCertificate, Verdict, Witness};
use crate::exact::{fmt_rat, rat, LocalPlace, QMatrix, Rat, RatPoly};
use crate::pencil::Pencil;

/// (positive, negative) inertia of a symmetric rational matrix via Descartes'
/// rule on its characteristic polynomial, exact because all roots are real.
pub fn signature(m: &QMatrix) -> (usize, usize) {
    let c = m.charpoly();
    let changes = |coeffs: Vec<Rat>| {
        let nz: Vec<&Rat> = coeffs.iter().filter(|x| !x.is_zero()).collect();
        nz.windows(2).filter(|w| w[0].is_positive() != w[1].is_positive()).count()
    };
    let pos = changes(c.coeffs().to_vec());
    let neg = changes(c.coeffs().iter().enumerate().map(|(i, x)| if i % 2 == 1 { -x.clone() } else { x.clone() }).collect());
    (pos, neg)
}

fn sturm_chain(f: &RatPoly) -> Vec<RatPoly> {
    let mut chain = vec![f.clone(), f.derivative()];
    while !chain.last().unwrap().is_zero() {
        let n = chain.len();
        let r = chain[n - 2].rem(&chain[n - 1]);
        chain.push(-&r);
    }
    chain.pop();
    chain
}

fn variations(chain: &[RatPoly], x: &Rat) -> usize {
    let vals: Vec<Rat> = chain.iter().map(|g| g.eval(x)).filter(|v| !v.is_zero()).collect();
    vals.windows(2).filter(|w| w[0].is_positive() != w[1].is_positive()).count()
}

/// Sorted rational points, none a root of f, such that every open interval
/// between consecutive real roots of f, and both unbounded ones, contains one.
pub fn real_roots_isolated(f: &RatPoly) -> Vec<Rat> {
    if f.deg() == 0 {
        return vec![rat(0)];
    }
    let g = {
        let d = RatPoly::gcd(f, &f.derivative());
        f.divrem(&d).0
    };
    let lc = g.lc();
    let bound = rat(1) + g.coeffs().iter().map(|c| (c / &lc).abs()).max().unwrap();
    let chain = sturm_chain(&g);
    let mut points = vec![-bound.clone(), bound.clone()];
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((l, r)) = stack.pop() {
        if variations(&chain, &l) - variations(&chain, &r) <= 1 {
            continue;
        }
        let mid = [rat(1) / rat(2), rat(1) / rat(3), rat(2) / rat(3), rat(2) / rat(5), rat(3) / rat(5)]
            .iter()
            .map(|w| &l + (&r - &l) * w)
            .find(|m| !g.eval(m).is_zero())
            .expect("finitely many roots");
        points.push(mid.clone());
        stack.push((l, mid.clone()));
        stack.push((mid, r));
    }
    points.sort();
    points
}

pub fn real_soluble(pencil: &Pencil) -> LocalCertificate {
    let f = pencil.det_poly();
    let mut samples = Vec::new();
    for t in real_roots_isolated(&f) {
        let (pos, neg) = signature(&pencil.member(&t));
        if pos == 5 || neg == 5 {
            return LocalCertificate {
                place: LocalPlace::Real,
                verdict: Verdict::Insoluble,
                witness: Witness::DefiniteMember { t: fmt_rat(&t), positive: pos == 5 },
            };
        }
        samples.push((fmt_rat(&t), pos, neg));
    }
    let (pos, neg) = signature(&pencil.phi2().scale(&rat(-1)));
    if pos == 5 || neg == 5 {
        return LocalCertificate {
            place: LocalPlace::Real,
            verdict: Verdict::Insoluble,
            witness: Witness::DefiniteMember { t: "inf".into(), positive: pos == 5 },
        };
    }
    LocalCertificate { place: LocalPlace::Real, verdict: Verdict::Soluble, witness: Witness::Signatures { samples } }
}
