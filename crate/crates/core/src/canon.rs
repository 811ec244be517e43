//! Explicit models attached to (P, delta'): the two trace forms cutting out the
//! del Pezzo surface, the Kummer double cover, its branch form and genus-2 curves.

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{
    discriminant, fmt_rat, irreducible_factors, rat, sqrt_in_etale_with_budget, sqrt_q, EtaleSqrt, QMatrix, Rat,
    RatPoly, DEFAULT_PRIME_BUDGET,
};
use crate::pencil::{delta_of_normalized, normalize_pencil, Chart, Pencil, SquareFlag};

/// delta' given as one class mod P or as one representative per irreducible factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeltaPrime {
    Global(RatPoly),
    PerFactor(Vec<RatPoly>),
}

impl DeltaPrime {
    pub fn one() -> Self {
        DeltaPrime::Global(RatPoly::one())
    }
}

/// Trace of the multiplication-by-x operator on Q[t]/(P) in the basis 1, t, ..., t^(n-1).
pub fn trace(x: &RatPoly, p: &RatPoly) -> Rat {
    let n = p.deg();
    let mut acc = Rat::zero();
    let mut xi = x.rem(p);
    for i in 0..n {
        acc += xi.coeff(i);
        xi = xi.mul_mod(&RatPoly::x(), p);
    }
    acc
}

/// num / den as an element of Q[t]/(P).
pub fn weight_frac(p: &RatPoly, num: &RatPoly, den: &RatPoly) -> Result<RatPoly> {
    let inv = den.inv_mod(p).ok_or_else(|| Error::NotInvertible(format!("{den}")))?;
    Ok(num.mul_mod(&inv, p))
}

/// Gram matrix of u -> Tr(w delta' u^2) on the basis 1, theta, ..., theta^4.
pub fn trace_form(p: &RatPoly, weight: &RatPoly, delta: &RatPoly) -> QMatrix {
    let n = p.deg();
    let c = weight.mul_mod(delta, p);
    let mut taus = Vec::with_capacity(2 * n - 1);
    let mut cm = c;
    for _ in 0..2 * n - 1 {
        taus.push(trace(&cm, p));
        cm = cm.mul_mod(&RatPoly::x(), p);
    }
    QMatrix::from_fn(n, n, |i, j| taus[i + j].clone())
}

/// tau_m = Tr(theta^m / P'(theta)) for m = 0..count.
pub fn euler_traces(p: &RatPoly, count: usize) -> Result<Vec<Rat>> {
    let w = weight_frac(p, &RatPoly::one(), &p.derivative())?;
    let mut out = Vec::with_capacity(count);
    let mut x = w;
    for _ in 0..count {
        out.push(trace(&x, p));
        x = x.mul_mod(&RatPoly::x(), p);
    }
    Ok(out)
}

fn check_quintic(p: &RatPoly) -> Result<()> {
    if p.deg() != 5 || !p.is_monic() {
        return Err(Error::Degree(format!("expected a monic quintic, got {p}")));
    }
    if !p.is_squarefree() {
        return Err(Error::Invalid(format!("{p} is not separable")));
    }
    Ok(())
}

/// Per-factor representatives and their CRT combination mod P.
fn normalize_delta(p: &RatPoly, factors: &[RatPoly], delta: &DeltaPrime) -> Result<(Vec<RatPoly>, RatPoly)> {
    let reps: Vec<RatPoly> = match delta {
        DeltaPrime::Global(d) => factors.iter().map(|f| d.rem(f)).collect(),
        DeltaPrime::PerFactor(v) => {
            if v.len() != factors.len() {
                return Err(Error::Invalid(format!("{} delta' entries for {} factors", v.len(), factors.len())));
            }
            v.iter().zip(factors).map(|(d, f)| d.rem(f)).collect()
        }
    };
    let mut global = RatPoly::zero();
    for (i, (d, f)) in reps.iter().zip(factors).enumerate() {
        if d.is_zero() {
            return Err(Error::NotInvertible(format!("delta' vanishes mod factor {i} ({f})")));
        }
        let (cof, _) = p.divrem(f);
        let inv = cof.rem(f).inv_mod(f).ok_or_else(|| Error::Internal("factors not coprime".into()))?;
        let e = cof.mul_mod(&inv, p);
        global = &global + &e.mul_mod(d, p);
    }
    Ok((reps, global.rem(p)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalModel {
    pub p: RatPoly,
    pub factors: Vec<RatPoly>,
    pub delta_prime: Vec<RatPoly>,
    /// delta' as a single class mod P.
    pub delta_global: RatPoly,
    pub gram1: QMatrix,
    pub gram2: QMatrix,
}

pub fn canonical_quadrics(p: &RatPoly, delta: &DeltaPrime) -> Result<CanonicalModel> {
    check_quintic(p)?;
    let factors = irreducible_factors(p)?;
    let (delta_prime, delta_global) = normalize_delta(p, &factors, delta)?;
    let dp = p.derivative();
    let w1 = weight_frac(p, &RatPoly::one(), &dp)?;
    let w2 = weight_frac(p, &RatPoly::x(), &dp)?;
    Ok(CanonicalModel {
        gram1: trace_form(p, &w1, &delta_global),
        gram2: trace_form(p, &w2, &delta_global),
        p: p.clone(),
        factors,
        delta_prime,
        delta_global,
    })
}

impl CanonicalModel {
    /// N(delta') = prod_i Res(P_i, d_i).
    pub fn delta_norm(&self) -> Rat {
        self.factors.iter().zip(&self.delta_prime).map(|(f, d)| RatPoly::resultant(f, d)).product()
    }

    /// The pencil whose characteristic quintic det(Phi1 - t Phi2) is a multiple of P.
    pub fn pencil(&self) -> Pencil {
        Pencil::new(self.gram2.clone(), self.gram1.clone()).expect("trace forms are symmetric")
    }

    /// det(t gram1 - gram2), which equals N(delta') P(t).
    pub fn pencil_determinant(&self) -> RatPoly {
        QMatrix::det_interpolated(5, |t| self.gram1.scale(t).sub(&self.gram2))
    }

    /// Whether det(t gram1 - gram2) = c^2 P(t) for a nonzero rational c.
    pub fn pencil_identity_holds(&self) -> bool {
        let d = self.pencil_determinant();
        if d.deg() != 5 || d.monic() != self.p {
            return false;
        }
        sqrt_q(&d.lc()).is_some()
    }

    /// Both forms restricted to span{e0, e1}, i.e. u = r + s theta.
    pub fn lambda0_restrictions(&self) -> (QMatrix, QMatrix) {
        let idx = [0, 1];
        (self.gram1.submatrix(&idx, &idx), self.gram2.submatrix(&idx, &idx))
    }

    /// Whether both forms vanish identically on u = r + s theta.
    pub fn contains_lambda0(&self) -> bool {
        let (a, b) = self.lambda0_restrictions();
        a.is_zero() && b.is_zero()
    }

    pub fn equations(&self) -> Vec<String> {
        vec![quadric_string(&self.gram1, &U_NAMES), quadric_string(&self.gram2, &U_NAMES)]
    }

    pub fn to_value(&self) -> Value {
        json!({
            "P": self.p.to_string(),
            "factors": self.factors.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            "delta_prime": self.delta_prime.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            "gram1": matrix_value(&self.gram1),
            "gram2": matrix_value(&self.gram2),
            "equations": self.equations(),
        })
    }
}

const U_NAMES: [&str; 5] = ["u0", "u1", "u2", "u3", "u4"];
const XU_NAMES: [&str; 6] = ["x", "u0", "u1", "u2", "u3", "u4"];

pub fn matrix_value(m: &QMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(|x| Value::String(fmt_rat(x))).collect())).collect())
}

/// Human-readable polynomial v^T M v in the given variable names.
pub fn quadric_string(m: &QMatrix, names: &[&str]) -> String {
    let mut terms: Vec<String> = Vec::new();
    for i in 0..m.rows() {
        for j in i..m.cols() {
            let c = if i == j { m.get(i, i).clone() } else { m.get(i, j) * rat(2) };
            if c.is_zero() {
                continue;
            }
            let mono = if i == j { format!("{}^2", names[i]) } else { format!("{}*{}", names[i], names[j]) };
            let (neg, abs) = if c < Rat::zero() { (true, -c) } else { (false, c) };
            let body = if abs.is_one() { mono } else { format!("{}*{}", fmt_rat(&abs), mono) };
            terms.push(match (terms.is_empty(), neg) {
                (true, true) => format!("-{body}"),
                (true, false) => body,
                (false, true) => format!(" - {body}"),
                (false, false) => format!(" + {body}"),
            });
        }
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.concat()
    }
}

fn check_b(p: &RatPoly, b: &Rat) -> Result<Rat> {
    let pb = p.eval(b);
    if pb.is_zero() {
        return Err(Error::PoleAtB);
    }
    Ok(pb)
}

/// Gram matrix of Tr(delta' u^2 / ((b - theta) P'(theta))).
pub fn branch_form(p: &RatPoly, delta: &DeltaPrime, b: &Rat) -> Result<QMatrix> {
    check_quintic(p)?;
    check_b(p, b)?;
    let factors = irreducible_factors(p)?;
    let (_, d) = normalize_delta(p, &factors, delta)?;
    let den = RatPoly::new(vec![b.clone(), rat(-1)]).mul_mod(&p.derivative(), p);
    let w = weight_frac(p, &RatPoly::one(), &den)?;
    Ok(trace_form(p, &w, &d))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KummerModel {
    pub base: CanonicalModel,
    pub b: Rat,
    pub gram3: QMatrix,
    /// Three 6x6 forms in (x, u0, ..., u4).
    pub quadrics: [QMatrix; 3],
}

pub fn kummer_model(p: &RatPoly, delta: &DeltaPrime, b: &Rat) -> Result<KummerModel> {
    let base = canonical_quadrics(p, delta)?;
    let pb = check_b(p, b)?;
    let den = RatPoly::new(vec![b.clone(), rat(-1)]).mul_mod(&p.derivative(), p);
    let w = weight_frac(p, &RatPoly::constant(pb), &den)?;
    let gram3 = trace_form(p, &w, &base.delta_global);
    let embed = |m: &QMatrix, x: Rat| {
        QMatrix::from_fn(6, 6, |i, j| match (i, j) {
            (0, 0) => x.clone(),
            (0, _) | (_, 0) => Rat::zero(),
            _ => m.get(i - 1, j - 1).clone(),
        })
    };
    let quadrics = [embed(&base.gram1, Rat::zero()), embed(&base.gram2, Rat::zero()), embed(&gram3.scale(&rat(-1)), Rat::one())];
    Ok(KummerModel { base, b: b.clone(), gram3, quadrics })
}

/// The double cover over the line u = r + s theta.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lambda0Cover {
    /// gram3 restricted to span{e0, e1}.
    pub restriction: QMatrix,
    pub rank: usize,
    /// A linear form l(r, s) with l^2 equal to the restriction, when one exists over Q.
    pub root: Option<[Rat; 2]>,
}

impl Lambda0Cover {
    /// x^2 = l(r, s)^2 breaks into two lines x = +-l.
    pub fn splits(&self) -> bool {
        self.root.is_some()
    }
}

impl KummerModel {
    pub fn lambda0_cover(&self) -> Lambda0Cover {
        let restriction = self.gram3.submatrix(&[0, 1], &[0, 1]);
        let rank = restriction.rank();
        let root = if rank <= 1 {
            let (a, c) = (restriction.get(0, 0).clone(), restriction.get(1, 1).clone());
            match (sqrt_q(&a), sqrt_q(&c)) {
                (Some(x), Some(y)) => {
                    let y = if &x * &y == *restriction.get(0, 1) { y } else { -y };
                    (&x * &y == *restriction.get(0, 1)).then_some([x, y])
                }
                _ => None,
            }
        } else {
            None
        };
        Lambda0Cover { restriction, rank, root }
    }

    pub fn equations(&self) -> Vec<String> {
        self.quadrics.iter().map(|q| quadric_string(q, &XU_NAMES)).collect()
    }

    pub fn to_value(&self) -> Value {
        json!({
            "base": self.base.to_value(),
            "b": fmt_rat(&self.b),
            "gram3": matrix_value(&self.gram3),
            "quadrics": self.quadrics.iter().map(matrix_value).collect::<Vec<_>>(),
            "equations": self.equations(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Genus2Model {
    pub b: Rat,
    pub a: Rat,
    pub sextic: RatPoly,
    pub d_b: Rat,
}

impl Genus2Model {
    pub fn equation(&self) -> String {
        format!("y^2 = {}", self.sextic)
    }

    pub fn to_value(&self) -> Value {
        json!({
            "b": fmt_rat(&self.b),
            "a": fmt_rat(&self.a),
            "sextic": self.sextic.to_string(),
            "d_b": fmt_rat(&self.d_b),
            "equation": self.equation(),
        })
    }
}

/// y^2 = a (x - b) P(x) with d_b = P(b)^2 disc(P).
pub fn genus2_model(p: &RatPoly, b: &Rat, a: &Rat) -> Result<Genus2Model> {
    check_quintic(p)?;
    let pb = check_b(p, b)?;
    if a.is_zero() {
        return Err(Error::Zero("twist parameter a"));
    }
    let sextic = (&RatPoly::new(vec![-b.clone(), rat(1)]) * p).scale(a);
    if !sextic.is_squarefree() {
        return Err(Error::Internal("sextic not squarefree".into()));
    }
    let d_b = &pb * &pb * discriminant(p)?;
    Ok(Genus2Model { b: b.clone(), a: a.clone(), sextic, d_b })
}

/// Result of rebuilding the pencil invariants from a canonical model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundTrip {
    pub chart: Chart,
    pub recovered_p: RatPoly,
    pub p_matches: bool,
    /// Square classes of N(delta') delta'_i, the class the model must reproduce.
    pub expected_flags: Vec<SquareFlag>,
    pub recovered_flags: Vec<SquareFlag>,
    /// Whether recovered_i / expected_i was certified a square in each factor field.
    pub ratio_certified: Vec<bool>,
    pub mismatches: Vec<String>,
}

impl RoundTrip {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn to_value(&self) -> Value {
        json!({
            "chart": self.chart.to_value(),
            "recovered_p": self.recovered_p.to_string(),
            "p_matches": self.p_matches,
            "expected_flags": self.expected_flags,
            "recovered_flags": self.recovered_flags,
            "ratio_certified": self.ratio_certified,
            "mismatches": self.mismatches,
            "ok": self.ok(),
        })
    }
}

fn flag_of(d: &RatPoly, f: &RatPoly, budget: usize) -> Result<SquareFlag> {
    Ok(match sqrt_in_etale_with_budget(d, f, budget)? {
        EtaleSqrt::Root(_) => SquareFlag::Square,
        EtaleSqrt::NonSquare { .. } => SquareFlag::Nonsquare,
        EtaleSqrt::Undecided { .. } => SquareFlag::Undecided,
    })
}

pub fn roundtrip_invariants(p: &RatPoly, delta: &DeltaPrime) -> Result<RoundTrip> {
    let model = canonical_quadrics(p, delta)?;
    let norm = normalize_pencil(&model.pencil())?;
    let recovered_p = norm.p.clone();
    let mut mismatches = Vec::new();
    let expected_p = crate::pencil::transform_quintic(p, &norm.chart);
    let p_matches = recovered_p == expected_p;
    if !p_matches {
        mismatches.push(format!("P: expected {expected_p}, recovered {recovered_p}"));
    }
    let budget = DEFAULT_PRIME_BUDGET;
    let inv = delta_of_normalized(&norm, budget)?;
    let scale = model.delta_norm();
    let expected: Vec<RatPoly> = model.delta_prime.iter().map(|d| d.scale(&scale)).collect();
    let expected_flags =
        expected.iter().zip(&model.factors).map(|(d, f)| flag_of(d, f, budget)).collect::<Result<Vec<_>>>()?;
    let mut ratio_certified = Vec::new();
    if !norm.chart.is_identity() || inv.factors != model.factors {
        mismatches.push(format!("factor order changed under chart {:?}", norm.chart));
    } else {
        for (i, f) in model.factors.iter().enumerate() {
            let ratio = weight_frac(f, &inv.delta_reps[i], &expected[i])?;
            let certified = matches!(sqrt_in_etale_with_budget(&ratio, f, budget)?, EtaleSqrt::Root(_));
            if !certified {
                mismatches.push(format!("factor {i} ({f}): ratio {ratio} not certified square"));
            }
            if inv.square_flags[i] != expected_flags[i] {
                mismatches.push(format!(
                    "factor {i} ({f}): expected {:?}, recovered {:?}",
                    expected_flags[i], inv.square_flags[i]
                ));
            }
            ratio_certified.push(certified);
        }
    }
    Ok(RoundTrip {
        chart: norm.chart,
        recovered_p,
        p_matches,
        expected_flags,
        recovered_flags: inv.square_flags,
        ratio_certified,
        mismatches,
    })
}
