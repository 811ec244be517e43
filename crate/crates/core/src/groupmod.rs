//! The wreath group (Z/2)^5 x| S_5 acting on the ten points of Delta, the
//! zero-sum module G, and brute-force cohomology and centralizer computations.
//!
//! Indices are 0-based internally and printed 1-based.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::f2::{F2Mat, F2Vec, Subspace};

/// A permutation of {0..4}: `p[i]` is the image of i.
pub type Perm = [u8; 5];

pub const ID: Perm = [0, 1, 2, 3, 4];

pub fn compose(a: &Perm, b: &Perm) -> Perm {
    let mut out = [0; 5];
    for i in 0..5 {
        out[i] = a[b[i] as usize];
    }
    out
}

pub fn inverse(a: &Perm) -> Perm {
    let mut out = [0; 5];
    for i in 0..5 {
        out[a[i] as usize] = i as u8;
    }
    out
}

/// Permutation from disjoint cycles given 0-based.
pub fn from_cycles(cycles: &[&[u8]]) -> Perm {
    let mut p = ID;
    for c in cycles {
        for k in 0..c.len() {
            p[c[k] as usize] = c[(k + 1) % c.len()];
        }
    }
    p
}

/// Cycles including fixed points, each starting at its least element, ordered by that element.
pub fn cycles(p: &Perm) -> Vec<Vec<u8>> {
    let mut seen = [false; 5];
    let mut out = Vec::new();
    for i in 0..5 {
        if seen[i] {
            continue;
        }
        let mut c = Vec::new();
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            c.push(j as u8);
            j = p[j] as usize;
        }
        out.push(c);
    }
    out
}

/// Cycle lengths in decreasing order.
pub fn cycle_type(p: &Perm) -> Vec<usize> {
    let mut t: Vec<usize> = cycles(p).iter().map(Vec::len).collect();
    t.sort_unstable_by(|a, b| b.cmp(a));
    t
}

pub fn fmt_perm(p: &Perm) -> String {
    let s: String = cycles(p)
        .iter()
        .filter(|c| c.len() > 1)
        .map(|c| format!("({})", c.iter().map(|x| (x + 1).to_string()).collect::<String>()))
        .collect();
    if s.is_empty() {
        "()".into()
    } else {
        s
    }
}

/// pi . s, moving the bit at i to pi(i).
pub fn permute_bits(p: &Perm, s: u8) -> u8 {
    let mut out = 0;
    for i in 0..5 {
        if s >> i & 1 == 1 {
            out |= 1 << p[i];
        }
    }
    out
}

/// A point of Delta: a root index and a sheet bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeltaPoint {
    pub root: u8,
    pub sheet: u8,
}

impl DeltaPoint {
    pub fn all() -> impl Iterator<Item = DeltaPoint> {
        (0..5).flat_map(|root| (0..2).map(move |sheet| DeltaPoint { root, sheet }))
    }
}

impl fmt::Display for DeltaPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.root + 1, if self.sheet == 0 { '+' } else { '-' })
    }
}

/// (s, pi) with s in F_2^5 stored as bits 0..4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WreathElement {
    pub sign: u8,
    pub perm: Perm,
}

impl WreathElement {
    pub const IDENTITY: WreathElement = WreathElement { sign: 0, perm: ID };

    pub fn new(sign: u8, perm: Perm) -> Self {
        WreathElement { sign: sign & 0x1f, perm }
    }

    pub fn from_bits(bits: [u8; 5], perm: Perm) -> Self {
        let sign = bits.iter().enumerate().fold(0, |acc, (i, b)| acc | (b & 1) << i);
        Self::new(sign, perm)
    }

    pub fn sign_bits(&self) -> [u8; 5] {
        let mut b = [0; 5];
        for (i, x) in b.iter_mut().enumerate() {
            *x = self.sign >> i & 1;
        }
        b
    }

    /// (s1, p1)(s2, p2) = (s1 + p1.s2, p1 p2).
    pub fn mul(&self, o: &WreathElement) -> WreathElement {
        WreathElement { sign: self.sign ^ permute_bits(&self.perm, o.sign), perm: compose(&self.perm, &o.perm) }
    }

    pub fn inverse(&self) -> WreathElement {
        let pi = inverse(&self.perm);
        WreathElement { sign: permute_bits(&pi, self.sign), perm: pi }
    }

    pub fn act(&self, x: DeltaPoint) -> DeltaPoint {
        let r = self.perm[x.root as usize];
        DeltaPoint { root: r, sheet: x.sheet ^ (self.sign >> r & 1) }
    }

    pub fn fixed_points(&self) -> usize {
        DeltaPoint::all().filter(|&x| self.act(x) == x).count()
    }

    /// Fixes some point of Delta: a fixed root whose sign bit is 0.
    pub fn is_admissible(&self) -> bool {
        (0..5).any(|i| self.perm[i] == i as u8 && self.sign >> i & 1 == 0)
    }

    pub fn in_zero_sum(&self) -> bool {
        self.sign.count_ones().is_multiple_of(2)
    }

    /// Signed cycle type such as "2'2'1": each cycle length, primed when the
    /// sign bits on the cycle sum to 1; lengths in decreasing order, primed first.
    pub fn signed_cycle_type(&self) -> String {
        let mut parts: Vec<(usize, bool)> = cycles(&self.perm)
            .iter()
            .map(|c| (c.len(), c.iter().map(|&i| self.sign >> i & 1).sum::<u8>() % 2 == 1))
            .collect();
        parts.sort_by(|a, b| b.cmp(a));
        parts.iter().map(|(l, s)| if *s { format!("{l}'") } else { l.to_string() }).collect()
    }

    pub fn all() -> impl Iterator<Item = WreathElement> {
        all_perms().into_iter().flat_map(|p| (0..32u8).map(move |s| WreathElement::new(s, p)))
    }
}

impl fmt::Display for WreathElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits: String = self.sign_bits().iter().map(|b| b.to_string()).collect();
        write!(f, "[{bits}|{}]", fmt_perm(&self.perm))
    }
}

impl Serialize for WreathElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Parse a signed cycle type such as "2'2'1", "11111" or "5".
pub fn parse_signed_type(s: &str) -> Result<Vec<(usize, bool)>> {
    let bad = || Error::Parse { pos: 0, msg: format!("bad signed cycle type {s:?}") };
    let mut out = Vec::new();
    let b = s.trim().as_bytes();
    let mut i = 0;
    while i < b.len() {
        let l = (b[i] as char).to_digit(10).ok_or_else(bad)? as usize;
        if l == 0 {
            return Err(bad());
        }
        let signed = b.get(i + 1) == Some(&b'\'');
        out.push((l, signed));
        i += if signed { 2 } else { 1 };
    }
    if out.iter().map(|x| x.0).sum::<usize>() != 5 {
        return Err(bad());
    }
    out.sort_by(|a, b| (b.0, b.1).cmp(&(a.0, a.1)));
    Ok(out)
}

/// A representative wreath element of a signed cycle type (cycles on
/// consecutive indices, each sign on the cycle's first element).
pub fn representative_of_type(t: &[(usize, bool)]) -> WreathElement {
    let mut perm = ID;
    let mut sign = 0u8;
    let mut start = 0usize;
    for &(l, s) in t {
        for k in 0..l {
            perm[start + k] = (start + (k + 1) % l) as u8;
        }
        if s {
            sign |= 1 << start;
        }
        start += l;
    }
    WreathElement::new(sign, perm)
}

pub fn all_perms() -> Vec<Perm> {
    let mut out = Vec::with_capacity(120);
    let mut p = ID;
    heap_permute(&mut p, 5, &mut out);
    out.sort();
    out
}

fn heap_permute(p: &mut Perm, k: usize, out: &mut Vec<Perm>) {
    if k == 1 {
        out.push(*p);
        return;
    }
    for i in 0..k {
        heap_permute(p, k - 1, out);
        if k.is_multiple_of(2) {
            p.swap(i, k - 1);
        } else {
            p.swap(0, k - 1);
        }
    }
}

/// Breadth-first closure of a generating set in the wreath group.
pub fn wreath_closure(gens: &[WreathElement]) -> Vec<WreathElement> {
    let mut seen: BTreeSet<WreathElement> = BTreeSet::new();
    let mut queue = VecDeque::from([WreathElement::IDENTITY]);
    seen.insert(WreathElement::IDENTITY);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.mul(&x);
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    seen.into_iter().collect()
}

/// A subgroup of S_5 given by generators, with its elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroup {
    pub name: String,
    pub gens: Vec<Perm>,
    elements: Vec<Perm>,
}

impl PermGroup {
    pub fn from_gens(name: &str, gens: Vec<Perm>) -> Self {
        let mut seen: BTreeSet<Perm> = BTreeSet::from([ID]);
        let mut queue = VecDeque::from([ID]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = compose(g, &x);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        PermGroup { name: name.into(), gens, elements: seen.into_iter().collect() }
    }

    pub fn c5() -> Self {
        Self::from_gens("C5", vec![from_cycles(&[&[0, 1, 2, 3, 4]])])
    }

    pub fn d10() -> Self {
        Self::from_gens("D10", vec![from_cycles(&[&[0, 1, 2, 3, 4]]), from_cycles(&[&[1, 4], &[2, 3]])])
    }

    pub fn f20() -> Self {
        Self::from_gens("F20", vec![from_cycles(&[&[0, 1, 2, 3, 4]]), from_cycles(&[&[1, 2, 4, 3]])])
    }

    pub fn a5() -> Self {
        Self::from_gens("A5", vec![from_cycles(&[&[0, 1, 2, 3, 4]]), from_cycles(&[&[0, 1, 2]])])
    }

    pub fn s5() -> Self {
        Self::from_gens("S5", vec![from_cycles(&[&[0, 1, 2, 3, 4]]), from_cycles(&[&[0, 1]])])
    }

    /// The five transitive subgroups in increasing order.
    pub fn transitive() -> Vec<PermGroup> {
        vec![Self::c5(), Self::d10(), Self::f20(), Self::a5(), Self::s5()]
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    pub fn orbits(&self) -> Vec<Vec<u8>> {
        let mut out: Vec<Vec<u8>> = Vec::new();
        for i in 0..5u8 {
            if out.iter().any(|o| o.contains(&i)) {
                continue;
            }
            let orbit: BTreeSet<u8> = self.elements.iter().map(|p| p[i as usize]).collect();
            out.push(orbit.into_iter().collect());
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.orbits().len() == 1
    }

    fn require_transitive(&self) -> Result<()> {
        if self.is_transitive() {
            Ok(())
        } else {
            Err(Error::NotTransitive(self.orbits().iter().map(|o| o.iter().map(|x| x + 1).collect()).collect()))
        }
    }

    /// The set of cycle types occurring in the group.
    pub fn cycle_types(&self) -> BTreeSet<Vec<usize>> {
        self.elements.iter().map(cycle_type).collect()
    }
}

/// An element of G: a zero-sum vector of F_2^5 stored as bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GVector(u8);

impl GVector {
    pub fn new(bits: u8) -> Result<Self> {
        if bits >= 32 || bits.count_ones() % 2 == 1 {
            return Err(Error::Invalid(format!("{bits:05b} is not a zero-sum vector")));
        }
        Ok(GVector(bits))
    }

    pub fn bits(&self) -> u8 {
        self.0
    }

    /// Coordinates in the basis e_k + e_5 (k = 1..4).
    fn coords(&self) -> F2Vec {
        F2Vec::from_u64(4, u64::from(self.0 & 0xf))
    }

    fn from_coords(v: &F2Vec) -> GVector {
        let low = v.to_u64() as u8;
        GVector(low | ((low.count_ones() as u8 & 1) << 4))
    }

    pub fn all() -> impl Iterator<Item = GVector> {
        (0..32u8).filter(|b| b.count_ones() % 2 == 0).map(GVector)
    }
}

/// Matrix of a permutation acting on G in the basis e_k + e_5.
fn g_matrix(p: &Perm) -> F2Mat {
    let cols: Vec<F2Vec> = (0..4).map(|k| GVector(permute_bits(p, (1 << k) | (1 << 4))).coords()).collect();
    F2Mat::from_rows(4, cols).transpose()
}

/// dim H^1(H, G) by solving the cocycle system on generators.
pub fn h1_dim(h: &PermGroup) -> Result<usize> {
    h.require_transitive()?;
    let m = h.gens.len();
    let n = 5 * m;
    // f(x) as a 5 x n matrix acting on the unknowns (f(g_1), .., f(g_m)).
    let mut value: HashMap<Perm, Vec<F2Vec>> = HashMap::new();
    value.insert(ID, vec![F2Vec::zeros(n); 5]);
    let mut constraints: Vec<F2Vec> = Vec::new();
    for j in 0..m {
        let mut row = F2Vec::zeros(n);
        for i in 0..5 {
            row.set(5 * j + i, true);
        }
        constraints.push(row);
    }
    let mut queue = VecDeque::from([ID]);
    while let Some(x) = queue.pop_front() {
        let fx = value[&x].clone();
        for (j, g) in h.gens.iter().enumerate() {
            // f(g x) = f(g) + g . f(x)
            let mut fgx = vec![F2Vec::zeros(n); 5];
            for i in 0..5 {
                fgx[g[i] as usize] = fx[i].clone();
            }
            for (i, row) in fgx.iter_mut().enumerate() {
                row.flip(5 * j + i);
            }
            let gx = compose(g, &x);
            match value.get(&gx) {
                Some(old) => constraints.extend(old.iter().zip(&fgx).map(|(a, b)| a.xor(b))),
                None => {
                    value.insert(gx, fgx);
                    queue.push_back(gx);
                }
            }
        }
    }
    let z1 = n - F2Mat::from_rows(n, constraints).rank();
    let b1 = {
        let rows: Vec<F2Vec> = h
            .gens
            .iter()
            .flat_map(|g| {
                let a = g_matrix(g).add(&F2Mat::identity(4));
                a.row_vecs().to_vec()
            })
            .collect();
        F2Mat::from_rows(4, rows).rank()
    };
    Ok(z1 - b1)
}

/// All 4x4 matrices over F_2 commuting with the action of H on G.
pub fn centralizer(h: &PermGroup) -> Vec<F2Mat> {
    let mats: Vec<F2Mat> = h.gens.iter().map(g_matrix).collect();
    let unknown = |x: usize| F2Mat::from_fn(4, 4, |i, j| 4 * i + j == x);
    // linear map X -> (X M - M X)_g on the 16 entries of X
    let images: Vec<F2Vec> = (0..16)
        .map(|x| {
            let e = unknown(x);
            let parts: Vec<F2Vec> = mats
                .iter()
                .flat_map(|mg| e.mul(mg).add(&mg.mul(&e)).row_vecs().to_vec())
                .collect();
            parts.iter().fold(F2Vec::zeros(0), |acc, v| acc.concat(v))
        })
        .collect();
    let width = images[0].len();
    let kernel = F2Mat::from_rows(width, images).transpose().kernel_space();
    kernel
        .elements()
        .iter()
        .map(|v| F2Mat::from_fn(4, 4, |i, j| v.get(4 * i + j)))
        .collect()
}

/// r with End_H(G) = F_{2^r}.
pub fn end_ring_r(h: &PermGroup) -> Result<usize> {
    h.require_transitive()?;
    let c = centralizer(h);
    let zero = F2Mat::zeros(4, 4);
    let is_field = c.iter().all(|x| *x == zero || x.is_invertible())
        && c.iter().all(|x| c.iter().all(|y| x.mul(y) == y.mul(x)));
    if !is_field {
        return Err(Error::Internal(format!("centralizer of {} is not a field", h.name)));
    }
    Ok(c.len().trailing_zeros() as usize)
}

/// Whether G has no proper nonzero H-stable subspace.
pub fn is_simple_module(h: &PermGroup) -> bool {
    let mats: Vec<F2Mat> = h.gens.iter().map(g_matrix).collect();
    GVector::all().filter(|v| v.0 != 0).all(|v| {
        let mut s = Subspace::from_gens(4, [v.coords()]);
        loop {
            let before = s.dim();
            let basis = s.basis().to_vec();
            for b in &basis {
                for m in &mats {
                    s.insert(m.mul_vec(b));
                }
            }
            if s.dim() == before {
                break;
            }
        }
        s.dim() == 4
    })
}

pub fn is_admissible(classes: &[WreathElement]) -> Vec<bool> {
    classes.iter().map(WreathElement::is_admissible).collect()
}

/// Whether some h in (Z/2)^5 conjugates the generated group into the S_5 factor.
pub fn conjugate_into_s5(gens: &[WreathElement]) -> bool {
    conjugator_into_s5(gens).is_some()
}

pub fn conjugator_into_s5(gens: &[WreathElement]) -> Option<u8> {
    (0..32u8).find(|&h| gens.iter().all(|g| g.sign ^ h ^ permute_bits(&g.perm, h) == 0))
}

/// F_{2^r}-linear independence of vectors of G, with F_{2^r} the centralizer field of H.
pub fn fq_independent(h: &PermGroup, vectors: &[GVector], r: usize) -> Result<bool> {
    let expected = end_ring_r(h)?;
    if r != expected {
        return Err(Error::FieldDegree { given: r, expected });
    }
    if vectors.is_empty() {
        return Ok(true);
    }
    let field = centralizer(h);
    let id = F2Mat::identity(4);
    let primitive = field
        .iter()
        .find(|x| {
            let mut powers = Subspace::zero(16);
            let mut p = id.clone();
            for _ in 0..r {
                powers.insert(flatten(&p));
                p = p.mul(x);
            }
            powers.dim() == r
        })
        .expect("the field has a primitive element");
    let mut span = Subspace::zero(4);
    for v in vectors {
        let mut w = v.coords();
        for _ in 0..r {
            span.insert(w.clone());
            w = primitive.mul_vec(&w);
        }
    }
    Ok(span.dim() == r * vectors.len())
}

/// The action of a field element on G, as a map of G.
pub fn field_action(x: &F2Mat, v: GVector) -> GVector {
    GVector::from_coords(&x.mul_vec(&v.coords()))
}

fn flatten(m: &F2Mat) -> F2Vec {
    m.row_vecs().iter().fold(F2Vec::zeros(0), |acc, v| acc.concat(v))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaRow {
    pub group: String,
    pub order: usize,
    pub h1_dim: usize,
    pub r: usize,
    pub expected_r: usize,
    pub simple: bool,
    pub pass: bool,
}

/// The table of H^1 dimensions and centralizer degrees for the transitive subgroups.
pub fn lemma_table() -> Result<Vec<LemmaRow>> {
    let expected = [4, 2, 1, 1, 1];
    PermGroup::transitive()
        .into_iter()
        .zip(expected)
        .map(|(g, e)| {
            let h1 = h1_dim(&g)?;
            let r = end_ring_r(&g)?;
            let simple = is_simple_module(&g);
            Ok(LemmaRow {
                group: g.name.clone(),
                order: g.order(),
                h1_dim: h1,
                r,
                expected_r: e,
                simple,
                pass: h1 == 0 && r == e && simple,
            })
        })
        .collect()
}
