//! Finite model of Selmer-group linear algebra: hyperbolic quadratic F_2-spaces
//! per place, maximal isotropic local conditions, a global Lagrangian in the
//! orthogonal sum, twisting at a place and the descent drivers.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::f2::{F2Mat, F2Vec, Subspace};

/// Hyperbolic space of dimension 2d: coordinates e_1..e_d then f_1..f_d,
/// q(x) = sum x_{e_i} x_{f_i}, polar form B(e_i, f_j) = [i = j].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalSpace {
    pub d: usize,
    pub condition: Subspace,
}

pub fn quad(d: usize, x: &F2Vec) -> bool {
    (0..d).fold(false, |acc, i| acc ^ (x.get(i) & x.get(d + i)))
}

pub fn polar(d: usize) -> F2Mat {
    F2Mat::from_fn(2 * d, 2 * d, |i, j| (i + d == j) || (j + d == i))
}

/// Whether q vanishes on the subspace (equivalently on a basis, given B vanishes).
pub fn is_q_isotropic(d: usize, s: &Subspace) -> bool {
    s.basis().iter().all(|b| !quad(d, b)) && s.is_isotropic(&polar(d))
}

impl LocalSpace {
    pub fn dim(&self) -> usize {
        2 * self.d
    }

    pub fn validate(&self) -> Result<()> {
        if self.condition.ambient() != 2 * self.d || self.condition.dim() != self.d || !is_q_isotropic(self.d, &self.condition) {
            return Err(Error::NotIsotropic);
        }
        Ok(())
    }
}

/// x -> x + B(x, u) u for q(u) = 1; preserves q.
fn reflect(form: &F2Mat, u: &F2Vec, x: &F2Vec) -> F2Vec {
    if form.bilinear(x, u) {
        x.xor(u)
    } else {
        x.clone()
    }
}

fn random_anisotropic(d: usize, rng: &mut ChaCha8Rng) -> F2Vec {
    loop {
        let v = F2Vec::from_bits(&(0..2 * d).map(|_| rng.gen_range(0..2u8)).collect::<Vec<_>>());
        if quad(d, &v) {
            return v;
        }
    }
}

fn reflect_subspace(d: usize, form: &F2Mat, u: &F2Vec, s: &Subspace) -> Subspace {
    Subspace::from_gens(2 * d, s.basis().iter().map(|b| reflect(form, u, b)))
}

fn standard_lagrangian(d: usize) -> Subspace {
    Subspace::from_gens(2 * d, (0..d).map(|i| F2Vec::unit(2 * d, i)))
}

/// A random q-Lagrangian: a product of random orthogonal reflections applied to span{e_i}.
pub fn random_lagrangian(d: usize, rng: &mut ChaCha8Rng) -> Subspace {
    let form = polar(d);
    let mut s = standard_lagrangian(d);
    if d == 0 {
        return s;
    }
    for _ in 0..4 * d + 2 {
        let u = random_anisotropic(d, rng);
        s = reflect_subspace(d, &form, &u, &s);
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelmerSystem {
    pub places: Vec<LocalSpace>,
    pub lagrangian: Subspace,
}

impl SelmerSystem {
    pub fn total_dim(&self) -> usize {
        self.places.iter().map(LocalSpace::dim).sum()
    }

    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.places
            .iter()
            .map(|p| {
                let o = acc;
                acc += p.dim();
                o
            })
            .collect()
    }

    pub fn global_quad(&self, x: &F2Vec) -> bool {
        self.places.iter().zip(self.offsets()).fold(false, |acc, (p, o)| acc ^ quad(p.d, &x.slice(o, p.dim())))
    }

    pub fn global_polar(&self) -> F2Mat {
        let n = self.total_dim();
        let mut m = F2Mat::zeros(n, n);
        for (p, o) in self.places.iter().zip(self.offsets()) {
            for i in 0..p.d {
                m.set(o + i, o + p.d + i, true);
                m.set(o + p.d + i, o + i, true);
            }
        }
        m
    }

    pub fn validate(&self) -> Result<()> {
        for p in &self.places {
            p.validate()?;
        }
        let half: usize = self.places.iter().map(|p| p.d).sum();
        if self.lagrangian.ambient() != self.total_dim()
            || self.lagrangian.dim() != half
            || !self.lagrangian.is_isotropic(&self.global_polar())
            || self.lagrangian.basis().iter().any(|b| self.global_quad(b))
        {
            return Err(Error::NotIsotropic);
        }
        Ok(())
    }

    fn embed(&self, v: usize, x: &F2Vec) -> F2Vec {
        let o = self.offsets()[v];
        let mut out = F2Vec::zeros(self.total_dim());
        for i in 0..x.len() {
            if x.get(i) {
                out.set(o + i, true);
            }
        }
        out
    }

    /// The component of x at place v.
    pub fn restrict(&self, v: usize, x: &F2Vec) -> F2Vec {
        x.slice(self.offsets()[v], self.places[v].dim())
    }

    fn restrict_space(&self, v: usize, s: &Subspace) -> Subspace {
        Subspace::from_gens(self.places[v].dim(), s.basis().iter().map(|b| self.restrict(v, b)))
    }

    /// Sum of the local conditions, with the full local space at `relaxed`.
    fn conditions(&self, relaxed: Option<usize>) -> Subspace {
        let n = self.total_dim();
        let mut s = Subspace::zero(n);
        for (v, p) in self.places.iter().enumerate() {
            if Some(v) == relaxed {
                for i in 0..p.dim() {
                    s.insert(self.embed(v, &F2Vec::unit(p.dim(), i)));
                }
            } else {
                for b in p.condition.basis() {
                    s.insert(self.embed(v, b));
                }
            }
        }
        s
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::json!({
            "dims": self.places.iter().map(|p| p.d).collect::<Vec<_>>(),
            "conditions": self.places.iter().map(|p| p.condition.basis().iter().map(|b| b.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "lagrangian": self.lagrangian.basis().iter().map(|b| b.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Deterministic random system: local conditions and the global Lagrangian
/// are random q-Lagrangians.
pub fn make_system(seed: u64, dims: &[usize]) -> SelmerSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let places: Vec<LocalSpace> = dims.iter().map(|&d| LocalSpace { d, condition: random_lagrangian(d, &mut rng) }).collect();
    let total: usize = dims.iter().sum();
    let mut sys = SelmerSystem { places, lagrangian: Subspace::zero(2 * total) };
    // a Lagrangian of one hyperbolic space of rank total, moved into the per-place layout
    let l = random_lagrangian(total, &mut rng);
    sys.lagrangian = Subspace::from_gens(2 * total, l.basis().iter().map(|b| from_big_coords(&sys, b)));
    sys
}

/// Map coordinates (e_1..e_D, f_1..f_D) of one hyperbolic space of rank D to
/// the per-place layout.
fn from_big_coords(sys: &SelmerSystem, x: &F2Vec) -> F2Vec {
    let total: usize = sys.places.iter().map(|p| p.d).sum();
    let mut out = F2Vec::zeros(2 * total);
    let mut k = 0;
    for (p, o) in sys.places.iter().zip(sys.offsets()) {
        for i in 0..p.d {
            out.set(o + i, x.get(k + i));
            out.set(o + p.d + i, x.get(total + k + i));
        }
        k += p.d;
    }
    out
}

/// A system whose Selmer group has the target dimension: start from the
/// Lagrangian equal to the sum of conditions and reflect until the
/// intersection drops to `target`.
pub fn make_system_with_selmer(seed: u64, dims: &[usize], target: usize) -> Result<SelmerSystem> {
    let mut sys = make_system(seed, dims);
    let total: usize = dims.iter().sum();
    if target > total {
        return Err(Error::Invalid(format!("target {target} exceeds rank {total}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5e1e);
    sys.lagrangian = sys.conditions(None);
    let form = sys.global_polar();
    for _ in 0..64 * (total + 1) {
        let dim = selmer(&sys).dim();
        if dim == target {
            return Ok(sys);
        }
        let u = loop {
            let v = F2Vec::from_bits(&(0..2 * total).map(|_| rng.gen_range(0..2u8)).collect::<Vec<_>>());
            if sys.global_quad(&v) {
                break v;
            }
        };
        let moved = Subspace::from_gens(2 * total, sys.lagrangian.basis().iter().map(|b| reflect(&form, &u, b)));
        let old = std::mem::replace(&mut sys.lagrangian, moved);
        if selmer(&sys).dim() < target {
            sys.lagrangian = old;
        }
    }
    Err(Error::NoMove(format!("could not reach Selmer dimension {target}")))
}

pub fn selmer(sys: &SelmerSystem) -> Subspace {
    sys.lagrangian.intersect(&sys.conditions(None))
}

pub fn relaxed_selmer(sys: &SelmerSystem, v: usize) -> Subspace {
    sys.lagrangian.intersect(&sys.conditions(Some(v)))
}

/// Image of the relaxed Selmer group in W_v / C_v equals the annihilator of the
/// image of the Selmer group in C_v: res_v(R) + C_v = res_v(S)^perp.
pub fn verify_pt_duality(sys: &SelmerSystem, v: usize) -> bool {
    let p = &sys.places[v];
    let r = sys.restrict_space(v, &relaxed_selmer(sys, v)).sum(&p.condition);
    let s = sys.restrict_space(v, &selmer(sys));
    r == s.perp(&polar(p.d))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistStep {
    pub place: usize,
    pub old_condition: Vec<String>,
    pub new_condition: Vec<String>,
    pub r: usize,
    /// dim of the image of the new Selmer group at v.
    pub n1: usize,
    /// dim of the image of the old Selmer group at v.
    pub n2: usize,
    pub old_dim: usize,
    pub new_dim: usize,
    /// dim of old and new condition intersection; 0 for a ramified twist.
    pub overlap: usize,
}

impl TwistStep {
    pub fn transverse(&self) -> bool {
        self.overlap == 0
    }

    pub fn bound_holds(&self) -> bool {
        self.n1 + self.n2 <= self.r
    }

    pub fn parity_holds(&self) -> bool {
        (self.n1 + self.n2) % 2 == (self.r - self.overlap) % 2
    }

    pub fn laws_hold(&self) -> bool {
        self.new_dim + self.n2 == self.old_dim + self.n1 && self.parity_holds() && (!self.transverse() || self.bound_holds())
    }
}

/// Replace the condition at v, recording n1, n2 and the dimension change
/// without asserting the twist laws.
pub fn twist_unchecked(sys: &SelmerSystem, v: usize, new_condition: &Subspace) -> Result<(SelmerSystem, TwistStep)> {
    let d = sys.places[v].d;
    if new_condition.ambient() != 2 * d || new_condition.dim() != d || !is_q_isotropic(d, new_condition) {
        return Err(Error::NotIsotropic);
    }
    let old_sel = selmer(sys);
    let mut next = sys.clone();
    next.places[v].condition = new_condition.clone();
    let new_sel = selmer(&next);
    let old_condition = &sys.places[v].condition;
    let step = TwistStep {
        place: v,
        old_condition: old_condition.basis().iter().map(|b| b.to_string()).collect(),
        new_condition: new_condition.basis().iter().map(|b| b.to_string()).collect(),
        r: d,
        n1: sys.restrict_space(v, &new_sel).dim(),
        n2: sys.restrict_space(v, &old_sel).dim(),
        old_dim: old_sel.dim(),
        new_dim: new_sel.dim(),
        overlap: old_condition.intersect(new_condition).dim(),
    };
    Ok((next, step))
}

/// twist_unchecked followed by the dimension-change, parity and (for
/// transverse conditions) bound laws.
pub fn twist_at(sys: &SelmerSystem, v: usize, new_condition: &Subspace) -> Result<(SelmerSystem, TwistStep)> {
    let (next, step) = twist_unchecked(sys, v, new_condition)?;
    if !step.laws_hold() {
        return Err(Error::Internal(format!("twist law violated: {step:?}")));
    }
    Ok((next, step))
}

/// All q-Lagrangians of the hyperbolic space of rank d meeting `c` trivially
/// (enumerated for d <= 4).
pub fn transverse_lagrangians(d: usize, c: &Subspace) -> Vec<Subspace> {
    let mut out: Vec<Subspace> = Vec::new();
    let all = all_lagrangians(d);
    for l in all {
        if l.intersect(c).dim() == 0 {
            out.push(l);
        }
    }
    out
}

/// Every q-Lagrangian of the hyperbolic space of rank d, closing span{e_i}
/// under all orthogonal reflections.
pub fn all_lagrangians(d: usize) -> Vec<Subspace> {
    assert!(d <= 4, "enumeration limited to rank 4");
    let form = polar(d);
    let full = Subspace::full(2 * d);
    let aniso: Vec<F2Vec> = full.elements().into_iter().filter(|u| quad(d, u)).collect();
    let start = standard_lagrangian(d);
    let mut seen = vec![start.clone()];
    let mut queue = vec![start];
    while let Some(s) = queue.pop() {
        for u in &aniso {
            let t = reflect_subspace(d, &form, u, &s);
            if !seen.contains(&t) {
                seen.push(t.clone());
                queue.push(t);
            }
        }
    }
    seen
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DriverMode {
    /// Drops of 2, stopping at dimension 1.
    A,
    /// Drops of 4, stopping at dimension 1 or 3.
    B,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DescentTrace {
    pub mode: DriverMode,
    pub dims: Vec<usize>,
    pub steps: Vec<TwistStep>,
    pub delta_hat: String,
    #[serde(skip)]
    pub final_system: Option<SelmerSystem>,
}

/// Greedy twisting that keeps delta_hat (the `target`-th Selmer basis vector)
/// in the Selmer group while dropping the dimension by 2 (mode A) or 4 (mode B)
/// per step. Places are tried in a seeded order.
pub fn descent_driver(sys: &SelmerSystem, target: usize, mode: DriverMode, seed: u64) -> Result<DescentTrace> {
    let sel = selmer(sys);
    let delta_hat = sel
        .basis()
        .get(target)
        .cloned()
        .ok_or_else(|| Error::Invalid(format!("Selmer basis has no element {target}")))?;
    let drop = match mode {
        DriverMode::A => 2,
        DriverMode::B => 4,
    };
    let done = |dim: usize| match mode {
        DriverMode::A => dim <= 1,
        DriverMode::B => dim == 1 || dim == 3,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = sys.clone();
    let mut dims = vec![sel.dim()];
    let mut steps = Vec::new();
    while !done(*dims.last().unwrap()) {
        let mut order: Vec<usize> = (0..cur.places.len()).collect();
        order.shuffle(&mut rng);
        let mut moved = false;
        for v in order {
            let p = &cur.places[v];
            if p.d < drop / 2 || p.d > 4 || !cur.restrict(v, &delta_hat).is_zero() {
                continue;
            }
            let mut candidates = transverse_lagrangians(p.d, &p.condition);
            candidates.shuffle(&mut rng);
            let found = candidates.into_iter().find_map(|c| {
                let (next, step) = twist_at(&cur, v, &c).ok()?;
                let ok = step.old_dim == step.new_dim + drop && selmer(&next).contains(&delta_hat);
                ok.then_some((next, step))
            });
            if let Some((next, step)) = found {
                dims.push(step.new_dim);
                steps.push(step);
                cur = next;
                moved = true;
                break;
            }
        }
        if !moved {
            return Err(Error::NoMove(format!("stuck at Selmer dimension {} ({:?})", dims.last().unwrap(), dims)));
        }
    }
    Ok(DescentTrace { mode, dims, steps, delta_hat: delta_hat.to_string(), final_system: Some(cur) })
}

/// Kernel of an alternating pairing given by its Gram matrix on `basis`,
/// returned in ambient coordinates of dimension `n`.
pub fn ct_kernel(n: usize, basis: &[F2Vec], pairing: &F2Mat) -> Result<Subspace> {
    let k = basis.len();
    if pairing.rows() != k || pairing.cols() != k {
        return Err(Error::Invalid("pairing size does not match the space".into()));
    }
    if !pairing.is_alternating() {
        return Err(Error::NotAlternating);
    }
    let coeffs = pairing.kernel_space();
    Ok(Subspace::from_gens(
        n,
        coeffs.basis().iter().map(|c| {
            let mut v = F2Vec::zeros(n);
            for (i, b) in basis.iter().enumerate() {
                if c.get(i) {
                    v.xor_assign(b);
                }
            }
            v
        }),
    ))
}

/// Basis (delta_hat, a1, a2) of a 3-dimensional Selmer space containing delta_hat.
pub fn endgame_basis(selmer: &Subspace, delta_hat: &F2Vec) -> Result<Vec<F2Vec>> {
    if selmer.dim() != 3 || !selmer.contains(delta_hat) || delta_hat.is_zero() {
        return Err(Error::Invalid("endgame needs a 3-dimensional Selmer space containing delta_hat".into()));
    }
    let line = Subspace::from_gens(selmer.ambient(), [delta_hat.clone()]);
    let mut basis = vec![delta_hat.clone()];
    basis.extend(line.complement_in(selmer));
    Ok(basis)
}

/// The endgame pairing on span{delta_hat, a1, a2}: B(delta_hat, -) = 0 and B(a1, a2) = 1.
pub fn endgame_pairing() -> F2Mat {
    F2Mat::from_fn(3, 3, |i, j| (i, j) == (1, 2) || (i, j) == (2, 1))
}

/// A linear map x with x^2 + x + 1 = 0, making the space an F_4-module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F4Action {
    pub x: F2Mat,
}

impl F4Action {
    pub fn new(x: F2Mat) -> Result<Self> {
        let n = x.rows();
        let m = x.mul(&x).add(&x).add(&F2Mat::identity(n));
        if (0..n).any(|i| !m.row(i).is_zero()) {
            return Err(Error::Invalid("x^2 + x + 1 != 0".into()));
        }
        Ok(F4Action { x })
    }

    /// Block-diagonal action on F_2^(2k) by the companion matrix of t^2 + t + 1.
    pub fn standard(k: usize) -> Self {
        F4Action { x: F2Mat::from_fn(2 * k, 2 * k, |i, j| i / 2 == j / 2 && (i != j || i % 2 == 1)) }
    }

    pub fn span(&self, v: &F2Vec) -> Subspace {
        Subspace::from_gens(v.len(), [v.clone(), self.x.mul_vec(v)])
    }

    /// Whether F_4 v meets s in exactly {0, v}.
    pub fn meets_in_line(&self, v: &F2Vec, s: &Subspace) -> bool {
        s.contains(v) && self.span(v).intersect(s).dim() == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_invariants() {
        let a = make_system(0, &[2, 2, 2]);
        a.validate().unwrap();
        assert_eq!(a, make_system(0, &[2, 2, 2]));
        let b = make_system(0, &[2, 0, 2]);
        b.validate().unwrap();
    }

    #[test]
    fn selmer_against_enumeration() {
        for seed in 0..20 {
            let s = make_system(seed, &[1, 2, 1]);
            let cond = s.conditions(None);
            let brute = Subspace::from_gens(s.total_dim(), s.lagrangian.elements().into_iter().filter(|x| cond.contains(x)));
            assert_eq!(selmer(&s), brute);
            assert!(selmer(&s).is_subspace_of(&relaxed_selmer(&s, 1)));
        }
    }

    #[test]
    fn duality_and_twists() {
        for seed in 0..50 {
            let s = make_system(seed, &[2, 2, 1]);
            for v in 0..3 {
                assert!(verify_pt_duality(&s, v));
            }
            let c = s.places[0].condition.clone();
            let (_, same) = twist_at(&s, 0, &c).unwrap();
            assert_eq!((same.n1, same.old_dim), (same.n2, same.new_dim));
            for t in transverse_lagrangians(2, &c) {
                let (_, step) = twist_at(&s, 0, &t).unwrap();
                assert!(step.bound_holds() && step.parity_holds());
            }
        }
    }

    #[test]
    fn lagrangian_counts() {
        // (2^0 + 1)(2^1 + 1)...(2^(d-1) + 1)
        assert_eq!(all_lagrangians(1).len(), 2);
        assert_eq!(all_lagrangians(2).len(), 6);
        assert_eq!(all_lagrangians(3).len(), 30);
    }

    #[test]
    fn kernels() {
        let space = Subspace::full(3);
        let basis = endgame_basis(&space, &F2Vec::unit(3, 0)).unwrap();
        let k = ct_kernel(3, &basis, &endgame_pairing()).unwrap();
        assert_eq!(k, Subspace::from_gens(3, [F2Vec::unit(3, 0)]));
        assert_eq!(ct_kernel(3, &basis, &F2Mat::zeros(3, 3)).unwrap().dim(), 3);
        assert!(matches!(ct_kernel(3, &basis, &F2Mat::identity(3)), Err(Error::NotAlternating)));
    }

    #[test]
    fn f4_action() {
        let a = F4Action::standard(2);
        assert!(F4Action::new(a.x.clone()).is_ok());
        let v = F2Vec::unit(4, 0);
        assert_eq!(a.span(&v).dim(), 2);
        assert!(a.meets_in_line(&v, &Subspace::from_gens(4, [v.clone(), F2Vec::unit(4, 2)])));
    }
}
