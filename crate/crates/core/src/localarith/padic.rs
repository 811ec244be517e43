//! p-adic solubility of a system of quadrics by a Hensel tree search.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{LocalCertificate, Verdict, Witness};
use crate::exact::arith::{pow_mod, valuation};
use crate::exact::{LocalPlace, QMatrix};

/// Default node budget for padic_soluble.
pub const DEFAULT_EFFORT: usize = 200_000;

/// Deepest level of the lifting tree.
const MAX_LEVEL: u32 = 12;

/// A quadratic form x^T G x with an integral Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntForm {
    pub n: usize,
    pub g: Vec<BigInt>,
}

impl IntForm {
    pub fn eval(&self, x: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for i in 0..self.n {
            if x[i].is_zero() {
                continue;
            }
            let mut row = BigInt::zero();
            for j in 0..self.n {
                row += &self.g[i * self.n + j] * &x[j];
            }
            acc += &x[i] * row;
        }
        acc
    }

    /// Gradient 2 G x.
    pub fn gradient(&self, x: &[BigInt]) -> Vec<BigInt> {
        (0..self.n).map(|i| (0..self.n).map(|j| &self.g[i * self.n + j] * &x[j]).sum::<BigInt>() * 2).collect()
    }
}

/// Scale each form to an integral primitive Gram matrix.
pub fn integral_forms(model: &[QMatrix]) -> Vec<IntForm> {
    model
        .iter()
        .map(|m| {
            let rows = m.to_rows();
            let den = rows.iter().flatten().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            let ints: Vec<BigInt> = rows.iter().flatten().map(|x| (x * &den).to_integer()).collect();
            let content = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            let g = if content.is_zero() { ints } else { ints.iter().map(|x| x / &content).collect() };
            IntForm { n: m.rows(), g }
        })
        .collect()
}

fn val(x: &BigInt, p: u64) -> u32 {
    if x.is_zero() {
        u32::MAX
    } else {
        valuation(x, p).0
    }
}

fn mod_p(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.iter_u64_digits().next().unwrap_or(0)
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

/// Solutions of A y = -c over F_p for rows [A | c]: a particular solution and
/// a kernel basis, or None if inconsistent.
fn solve_mod_p(mut rows: Vec<Vec<u64>>, cols: usize, p: u64) -> Option<(Vec<u64>, Vec<Vec<u64>>)> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(i) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, i);
        let inv = pow_mod(rows[r][c], p - 2, p);
        for v in rows[r].iter_mut() {
            *v = mul_mod(*v, inv, p);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..=cols {
                    rows[i][j] = (rows[i][j] + mul_mod(p - f, rows[r][j], p)) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| row[cols] != 0) {
        return None;
    }
    let mut particular = vec![0; cols];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = (p - rows[i][cols]) % p;
    }
    let kernel = (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|c| {
            let mut v = vec![0; cols];
            v[c] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - rows[i][c]) % p;
            }
            v
        })
        .collect();
    Some((particular, kernel))
}

fn det(m: &[Vec<BigInt>]) -> BigInt {
    match m.len() {
        0 => BigInt::one(),
        1 => m[0][0].clone(),
        2 => &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
        k => (0..k)
            .map(|j| {
                let sub: Vec<Vec<BigInt>> = m[1..].iter().map(|r| [&r[..j], &r[j + 1..]].concat()).collect();
                let t = &m[0][j] * det(&sub);
                if j % 2 == 0 {
                    t
                } else {
                    -t
                }
            })
            .sum(),
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// Least valuation of a maximal minor of the Jacobian at x.
fn minor_valuation(forms: &[IntForm], x: &[BigInt], p: u64) -> u32 {
    let jac: Vec<Vec<BigInt>> = forms.iter().map(|f| f.gradient(x)).collect();
    combinations(x.len(), forms.len())
        .iter()
        .map(|cols| val(&det(&jac.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect::<Vec<_>>()), p))
        .min()
        .unwrap_or(u32::MAX)
}

/// Hensel criterion: every Q_k(x) has valuation above twice the minor valuation.
fn liftable(forms: &[IntForm], x: &[BigInt], p: u64) -> Option<(u32, u32)> {
    let v = minor_valuation(forms, x, p);
    if v == u32::MAX {
        return None;
    }
    let prec = forms.iter().map(|f| val(&f.eval(x), p)).min().unwrap_or(u32::MAX);
    (prec > 2 * v).then_some((prec, v))
}

/// Normalized primitive vectors mod p: first unit coordinate 1, earlier ones 0.
fn projective_points(n: usize, p: u64) -> impl Iterator<Item = (usize, Vec<BigInt>)> {
    (0..n).flat_map(move |lead| {
        let free = n - lead - 1;
        let count = (p as u128).pow(free as u32);
        (0..count).map(move |mut k| {
            let mut x = vec![BigInt::zero(); n];
            x[lead] = BigInt::one();
            for c in x.iter_mut().skip(lead + 1) {
                *c = BigInt::from((k % p as u128) as u64);
                k /= p as u128;
            }
            (lead, x)
        })
    })
}

fn point_certificate(p: u64, x: &[BigInt], prec: u32, v: u32) -> LocalCertificate {
    LocalCertificate {
        place: LocalPlace::Prime(p),
        verdict: Verdict::Soluble,
        witness: Witness::Point {
            coords: x.iter().map(|c| c.to_string()).collect(),
            precision: (prec != u32::MAX).then_some(prec),
            minor_valuation: v,
        },
    }
}

/// Decide solubility over Q_p of the common zero locus of the forms in
/// projective space; never guesses, returning Unknown when `effort` nodes
/// are exhausted.
pub fn padic_soluble(model: &[QMatrix], p: u64, effort: usize) -> LocalCertificate {
    let unknown = |nodes| LocalCertificate { place: LocalPlace::Prime(p), verdict: Verdict::Unknown, witness: Witness::Exhausted { nodes } };
    if effort == 0 || model.is_empty() {
        return unknown(0);
    }
    let forms = integral_forms(model);
    let n = forms[0].n;
    let pb = BigInt::from(p);
    let mut nodes = 0usize;
    let mut level: Vec<(usize, Vec<BigInt>)> = Vec::new();
    for (lead, x) in projective_points(n, p) {
        nodes += 1;
        if nodes > effort {
            return unknown(nodes - 1);
        }
        if forms.iter().all(|f| f.eval(&x).is_multiple_of(&pb)) {
            if let Some((prec, v)) = liftable(&forms, &x, p) {
                return point_certificate(p, &x, prec, v);
            }
            level.push((lead, x));
        }
    }
    let mut modulus = pb.clone();
    for depth in 1..=MAX_LEVEL {
        if level.is_empty() {
            return LocalCertificate {
                place: LocalPlace::Prime(p),
                verdict: Verdict::Insoluble,
                witness: Witness::NoPointsModulo { level: depth },
            };
        }
        let next_mod = &modulus * &pb;
        let mut next = Vec::new();
        for (lead, x) in &level {
            nodes += 1;
            // Q(x + m y) = Q(x) + 2m B(x, y) mod m p, so the surviving lifts
            // are the solutions of a linear system over F_p.
            let free: Vec<usize> = (0..n).filter(|i| i != lead).collect();
            let rows: Vec<Vec<u64>> = forms
                .iter()
                .map(|f| {
                    let c = mod_p(&(f.eval(x) / &modulus), p);
                    let grad = f.gradient(x);
                    let mut row: Vec<u64> = free.iter().map(|&i| mod_p(&grad[i], p)).collect();
                    row.push(c);
                    row
                })
                .collect();
            let Some((particular, kernel)) = solve_mod_p(rows, free.len(), p) else { continue };
            let count = (p as u128).pow(kernel.len() as u32);
            for mut k in 0..count {
                nodes += 1;
                if nodes > effort {
                    return unknown(nodes - 1);
                }
                let mut y = particular.clone();
                for b in &kernel {
                    let c = (k % p as u128) as u64;
                    k /= p as u128;
                    for (yi, bi) in y.iter_mut().zip(b) {
                        *yi = (*yi + mul_mod(c, *bi, p)) % p;
                    }
                }
                let mut z = x.clone();
                for (&i, yi) in free.iter().zip(&y) {
                    z[i] += BigInt::from(*yi) * &modulus;
                }
                if let Some((prec, v)) = liftable(&forms, &z, p) {
                    return point_certificate(p, &z, prec, v);
                }
                next.push((*lead, z));
            }
        }
        level = next;
        modulus = next_mod;
    }
    unknown(nodes)
}
