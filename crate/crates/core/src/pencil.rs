//! Pencils of quadrics in P^4 over Q: characteristic quintic, delta class,
//! norm relation and the Brauer quotient group.

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exact::arith::strip_square_factors;
use crate::exact::{
    fmt_rat, irreducible_factors, is_square_q, parse_rat, rat, sqrt_in_etale_with_budget, EtaleSqrt, QMatrix, Rat,
    RatPoly, DEFAULT_PRIME_BUDGET,
};
use crate::f2::{F2Vec, Subspace};
use crate::galois::{GaloisLabel, GaloisProfile};

/// Trial-division bound used when stripping square factors from delta representatives.
pub const SQUARE_STRIP_BOUND: u64 = 1_000_000;

/// Two symmetric 5x5 rational Gram matrices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pencil {
    phi1: QMatrix,
    phi2: QMatrix,
}

impl Pencil {
    pub fn new(phi1: QMatrix, phi2: QMatrix) -> Result<Self> {
        for m in [&phi1, &phi2] {
            if m.rows() != 5 || m.cols() != 5 || !m.is_symmetric() {
                return Err(Error::NotSymmetric);
            }
        }
        Ok(Pencil { phi1, phi2 })
    }

    pub fn from_ints(phi1: &[&[i64]], phi2: &[&[i64]]) -> Result<Self> {
        Self::new(QMatrix::from_ints(phi1), QMatrix::from_ints(phi2))
    }

    pub fn phi1(&self) -> &QMatrix {
        &self.phi1
    }

    pub fn phi2(&self) -> &QMatrix {
        &self.phi2
    }

    /// The member Phi1 - t Phi2.
    pub fn member(&self, t: &Rat) -> QMatrix {
        self.phi1.sub(&self.phi2.scale(t))
    }

    /// det(Phi1 - t Phi2), of degree at most 5.
    pub fn det_poly(&self) -> RatPoly {
        QMatrix::pencil_det(&self.phi1, &self.phi2)
    }

    pub fn scaled(&self, c: &Rat) -> Pencil {
        Pencil { phi1: self.phi1.scale(c), phi2: self.phi2.scale(c) }
    }

    /// Both forms transformed by M^T (.) M.
    pub fn congruent(&self, m: &QMatrix) -> Pencil {
        Pencil { phi1: self.phi1.congruence(m), phi2: self.phi2.congruence(m) }
    }

    /// Canonical JSON: {"phi1": [[...]], "phi2": [[...]]}, rationals as strings.
    pub fn to_json(&self) -> String {
        let enc = |m: &QMatrix| {
            Value::Array(
                m.to_rows().iter().map(|r| Value::Array(r.iter().map(|x| Value::String(fmt_rat(x))).collect())).collect(),
            )
        };
        let mut obj = serde_json::Map::new();
        obj.insert("phi1".into(), enc(&self.phi1));
        obj.insert("phi2".into(), enc(&self.phi2));
        Value::Object(obj).to_string()
    }

    pub fn to_value(&self) -> Value {
        serde_json::from_str(&self.to_json()).expect("valid json")
    }

    pub fn from_json(s: &str) -> Result<Pencil> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse {
            pos: byte_offset(s, e.line(), e.column()),
            msg: format!("line {} column {}: {e}", e.line(), e.column()),
        })?;
        Self::from_value(&v)
    }

    pub fn from_value(v: &Value) -> Result<Pencil> {
        let get = |key: &str| -> Result<QMatrix> {
            let m = v.get(key).ok_or_else(|| Error::Parse { pos: 0, msg: format!("missing field {key:?}") })?;
            let rows = m.as_array().ok_or_else(|| Error::Parse { pos: 0, msg: format!("{key} must be an array") })?;
            let mut out = Vec::with_capacity(rows.len());
            for (i, row) in rows.iter().enumerate() {
                let row = row.as_array().ok_or_else(|| Error::Parse { pos: 0, msg: format!("{key}[{i}] must be an array") })?;
                let mut r = Vec::with_capacity(row.len());
                for (j, x) in row.iter().enumerate() {
                    let q = match x {
                        Value::String(s) => parse_rat(s),
                        Value::Number(n) if n.is_i64() => Ok(rat(n.as_i64().unwrap())),
                        _ => Err(Error::Parse { pos: 0, msg: String::new() }),
                    }
                    .map_err(|_| Error::Parse { pos: 0, msg: format!("{key}[{i}][{j}] is not a rational: {x}") })?;
                    r.push(q);
                }
                out.push(r);
            }
            let m = QMatrix::from_rows(out)?;
            if m.rows() != 5 || m.cols() != 5 {
                return Err(Error::Parse { pos: 0, msg: format!("{key} must be 5x5, got {}x{}", m.rows(), m.cols()) });
            }
            Ok(m)
        };
        Pencil::new(get("phi1")?, get("phi2")?)
    }
}

fn byte_offset(s: &str, line: usize, column: usize) -> usize {
    let start: usize = s.split_inclusive('\n').take(line.saturating_sub(1)).map(str::len).sum();
    start + column.saturating_sub(1)
}

/// Moebius change of parameter t = (a s + b) / (c s + d).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chart {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
}

impl Chart {
    pub fn identity() -> Self {
        Chart { a: rat(1), b: rat(0), c: rat(0), d: rat(1) }
    }

    /// t = t0 + 1/s, sending s = infinity to t = t0.
    pub fn inversion_at(t0: Rat) -> Self {
        Chart { a: t0, b: rat(1), c: rat(1), d: rat(0) }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Pencil in the s-coordinate: (c s + d)(Phi1 - t Phi2) = Phi1' - s Phi2'.
    pub fn apply(&self, p: &Pencil) -> Pencil {
        Pencil {
            phi1: p.phi1.scale(&self.d).sub(&p.phi2.scale(&self.b)),
            phi2: p.phi2.scale(&self.a).sub(&p.phi1.scale(&self.c)),
        }
    }

    /// Old parameter t of a finite new parameter s.
    pub fn to_t(&self, s: &Rat) -> Option<Rat> {
        let den = &self.c * s + &self.d;
        (!den.is_zero()).then(|| (&self.a * s + &self.b) / den)
    }

    /// New parameter s of an old parameter t.
    pub fn to_s(&self, t: &Rat) -> Option<Rat> {
        let den = &self.a - &self.c * t;
        (!den.is_zero()).then(|| (&self.d * t - &self.b) / den)
    }

    pub fn to_value(&self) -> Value {
        serde_json::json!({
            "a": fmt_rat(&self.a), "b": fmt_rat(&self.b), "c": fmt_rat(&self.c), "d": fmt_rat(&self.d),
        })
    }
}

/// Smoothness check: the binary quintic det(mu Phi1 - nu Phi2) must be
/// nonzero and squarefree.
pub fn check_smooth(p: &Pencil) -> Result<()> {
    let f = p.det_poly();
    if f.is_zero() {
        return Err(Error::DegeneratePencil);
    }
    let inf_mult = 5 - f.deg();
    if inf_mult >= 2 {
        return Err(Error::SingularBaseLocus(format!("point at infinity with multiplicity {inf_mult}")));
    }
    let g = RatPoly::gcd(&f, &f.derivative());
    if !g.is_constant() {
        return Err(Error::SingularBaseLocus(g.to_string()));
    }
    Ok(())
}

pub fn is_smooth(p: &Pencil) -> bool {
    check_smooth(p).is_ok()
}

/// A pencil moved to a chart where P has degree exactly 5.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized {
    pub chart: Chart,
    pub pencil: Pencil,
    pub p: RatPoly,
}

/// Candidate charts in the fixed trial order: identity, then t = t0 + 1/s
/// for t0 = 0, 1, -1, 2, -2, ...
pub fn chart_candidates() -> impl Iterator<Item = Chart> {
    std::iter::once(Chart::identity()).chain((0i64..).flat_map(|k| {
        let v: Vec<i64> = if k == 0 { vec![0] } else { vec![k, -k] };
        v.into_iter().map(|t0| Chart::inversion_at(rat(t0)))
    }))
}

pub fn normalize_pencil(p: &Pencil) -> Result<Normalized> {
    check_smooth(p)?;
    let chart = chart_candidates()
        .find(|c| !c.apply(p).phi2.det().is_zero())
        .expect("some rational point avoids the five singular members");
    normalize_with_chart(p, &chart)
}

pub fn normalize_with_chart(p: &Pencil, chart: &Chart) -> Result<Normalized> {
    check_smooth(p)?;
    let moved = chart.apply(p);
    let f = moved.det_poly();
    if f.deg() != 5 {
        return Err(Error::Invalid("chart sends a singular member to infinity".into()));
    }
    Ok(Normalized { chart: chart.clone(), p: f.monic(), pencil: moved })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SquareFlag {
    Square,
    Nonsquare,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaInvariant {
    pub chart: Chart,
    pub p: RatPoly,
    pub factors: Vec<RatPoly>,
    pub delta_reps: Vec<RatPoly>,
    pub square_flags: Vec<SquareFlag>,
}

impl DeltaInvariant {
    /// Assemble from P's irreducible factors and representatives, deciding flags.
    pub fn from_parts(p: &RatPoly, reps: &[RatPoly], budget: usize) -> Result<Self> {
        let factors = irreducible_factors(&p.monic())?;
        if factors.len() != reps.len() {
            return Err(Error::Invalid(format!("{} representatives for {} factors", reps.len(), factors.len())));
        }
        let mut delta_reps = Vec::new();
        let mut square_flags = Vec::new();
        for (f, d) in factors.iter().zip(reps) {
            let d = d.rem(f);
            square_flags.push(square_flag(&d, f, budget)?);
            delta_reps.push(d);
        }
        Ok(DeltaInvariant { chart: Chart::identity(), p: p.monic(), factors, delta_reps, square_flags })
    }

    /// N(d_i) = Res(P_i, d_i) for each factor.
    pub fn norms(&self) -> Vec<Rat> {
        self.factors.iter().zip(&self.delta_reps).map(|(f, d)| RatPoly::resultant(f, d)).collect()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.factors.iter().map(RatPoly::deg).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.square_flags.iter().all(|f| *f == SquareFlag::Square)
    }
}

fn square_flag(d: &RatPoly, m: &RatPoly, budget: usize) -> Result<SquareFlag> {
    Ok(match sqrt_in_etale_with_budget(d, m, budget)? {
        EtaleSqrt::Root(_) => SquareFlag::Square,
        EtaleSqrt::NonSquare { .. } => SquareFlag::Nonsquare,
        EtaleSqrt::Undecided { .. } => SquareFlag::Undecided,
    })
}

/// Remove the obvious square part of the content of d.
fn strip_content(d: &RatPoly) -> RatPoly {
    let (c, prim) = d.primitive_part();
    let k = strip_square_factors(&(c.numer() * c.denom()), SQUARE_STRIP_BOUND);
    RatPoly::from_bigints(&prim).scale(&Rat::from_integer(k))
}

/// Representative of delta at the factor m: a nonzero principal 4x4 minor of
/// Phi1 - t Phi2 reduced mod m, the lowest-height one (ties to the lowest index).
fn delta_rep(pencil: &Pencil, m: &RatPoly) -> Result<RatPoly> {
    let mut best: Option<RatPoly> = None;
    for j in 0..5 {
        let minor = QMatrix::det_interpolated(4, |t| pencil.member(t).minor(j, j));
        let d = minor.rem(m);
        if d.is_zero() {
            continue;
        }
        let d = strip_content(&d);
        if best.as_ref().is_none_or(|b| d.height_bits() < b.height_bits()) {
            best = Some(d);
        }
    }
    best.ok_or_else(|| Error::Internal(format!("member at a root of {m} has rank below 4")))
}

pub fn delta_invariant(p: &Pencil) -> Result<DeltaInvariant> {
    delta_invariant_with_budget(p, DEFAULT_PRIME_BUDGET)
}

pub fn delta_invariant_with_budget(p: &Pencil, budget: usize) -> Result<DeltaInvariant> {
    let norm = normalize_pencil(p)?;
    delta_of_normalized(&norm, budget)
}

pub fn delta_of_normalized(norm: &Normalized, budget: usize) -> Result<DeltaInvariant> {
    let factors = irreducible_factors(&norm.p)?;
    let mut delta_reps = Vec::new();
    let mut square_flags = Vec::new();
    for f in &factors {
        let d = delta_rep(&norm.pencil, f)?;
        square_flags.push(square_flag(&d, f, budget)?);
        delta_reps.push(d);
    }
    Ok(DeltaInvariant { chart: norm.chart.clone(), p: norm.p.clone(), factors, delta_reps, square_flags })
}

/// Whether the product of the norms of the delta representatives is a rational square.
pub fn verify_norm_square(inv: &DeltaInvariant) -> bool {
    let n: Rat = inv.norms().iter().product();
    !n.is_zero() && is_square_q(&n).unwrap_or(false)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrauerQuotient {
    /// Factor indices with nonsquare delta, indexing the coordinates of the basis vectors.
    pub support: Vec<usize>,
    pub basis: Vec<F2Vec>,
    pub dimension: usize,
}

pub fn b_delta_group(inv: &DeltaInvariant) -> Result<BrauerQuotient> {
    if let Some(i) = inv.square_flags.iter().position(|f| *f == SquareFlag::Undecided) {
        return Err(Error::Undecided(i));
    }
    let support: Vec<usize> =
        (0..inv.factors.len()).filter(|&i| inv.square_flags[i] == SquareFlag::Nonsquare).collect();
    let n = support.len();
    if n == 0 {
        return Ok(BrauerQuotient { support, basis: Vec::new(), dimension: 0 });
    }
    assert!(n <= 5);
    let norms = inv.norms();
    let kept = Subspace::from_gens(
        n,
        (0u64..1 << n).map(|g| F2Vec::from_u64(n, g)).filter(|g| {
            let prod: Rat = (0..n).filter(|&k| g.get(k)).map(|k| norms[support[k]].clone()).product();
            is_square_q(&prod).unwrap_or(false)
        }),
    );
    let ones = F2Vec::from_bits(&vec![1; n]);
    if !kept.contains(&ones) {
        return Err(Error::Internal("norm relation fails for the full product".into()));
    }
    let quotient = Subspace::from_gens(n, [ones]);
    let basis = quotient.complement_in(&kept);
    let dimension = basis.len();
    Ok(BrauerQuotient { support, basis, dimension })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum HasseKind {
    Irreducible,
    SplitTrivialBrauer,
    SplitNontrivialBrauer,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HasseClass {
    pub kind: HasseKind,
    pub factor_degrees: Vec<usize>,
    pub b_dimension: Option<usize>,
}

pub fn hasse_class(inv: &DeltaInvariant, galois: &GaloisProfile) -> Result<HasseClass> {
    let factor_degrees = inv.degrees();
    let irreducible = factor_degrees == [5];
    if irreducible == (galois.label == GaloisLabel::Reducible) {
        return Err(Error::Internal("Galois label disagrees with the factorization of P".into()));
    }
    if irreducible {
        let b_dimension = b_delta_group(inv).ok().map(|b| b.dimension);
        return Ok(HasseClass { kind: HasseKind::Irreducible, factor_degrees, b_dimension });
    }
    if factor_degrees.iter().all(|&d| d == 1) {
        let b = b_delta_group(inv)?;
        let kind = if b.dimension == 0 { HasseKind::SplitTrivialBrauer } else { HasseKind::SplitNontrivialBrauer };
        return Ok(HasseClass { kind, factor_degrees, b_dimension: Some(b.dimension) });
    }
    let b_dimension = b_delta_group(inv).ok().map(|b| b.dimension);
    Ok(HasseClass { kind: HasseKind::Other, factor_degrees, b_dimension })
}

/// P after the chart t = (a s + b)/(c s + d), made monic.
pub fn transform_quintic(p: &RatPoly, chart: &Chart) -> RatPoly {
    p.mobius(&chart.a, &chart.b, &chart.c, &chart.d, 5).monic()
}

/// The diagonal pencil Phi1 = I, Phi2 = diag(entries).
pub fn diagonal_pencil(entries: &[i64; 5]) -> Pencil {
    let d: Vec<Rat> = entries.iter().map(|&x| rat(x)).collect();
    Pencil::new(QMatrix::identity(5), QMatrix::diagonal(&d)).expect("diagonal is symmetric")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn split_quintic() -> RatPoly {
        RatPoly::from_roots(&[rat(0), rat(1), rat(2), rat(3), rat(4)])
    }

    #[test]
    fn diagonal_example() {
        let p = diagonal_pencil(&[0, 1, 2, 3, 4]);
        let n = normalize_pencil(&p).unwrap();
        assert_eq!(n.chart, Chart::inversion_at(rat(0)));
        assert_eq!(n.p, split_quintic());
        let inv = delta_invariant(&p).unwrap();
        // direct 4x4 determinants of diag(s, s-1, s-2, s-3, s-4) with one slot removed
        let expect = [6, -6, 1, -6, 6];
        let got: Vec<Rat> = inv.delta_reps.iter().map(|d| d.coeff(0)).collect();
        let expect: Vec<Rat> = expect.iter().map(|&x| rat(x)).collect();
        assert_eq!(got, expect);
        assert!(verify_norm_square(&inv));
    }

    #[test]
    fn singular_base_locus() {
        let p = Pencil::new(QMatrix::identity(5), QMatrix::diagonal(&[rat(1), rat(1), rat(2), rat(3), rat(4)])).unwrap();
        assert!(matches!(normalize_pencil(&p), Err(Error::SingularBaseLocus(_))));
        let q = Pencil::new(QMatrix::identity(5), QMatrix::zeros(5, 5)).unwrap();
        assert!(matches!(normalize_pencil(&q), Err(Error::SingularBaseLocus(_))));
    }

    #[test]
    fn norm_square_examples() {
        let p = split_quintic();
        let c = |x: i64| RatPoly::constant(rat(x));
        let bad = DeltaInvariant::from_parts(&p, &[c(5), c(1), c(1), c(1), c(1)], 50).unwrap();
        assert!(!verify_norm_square(&bad));
        let ones = DeltaInvariant::from_parts(&p, &[c(1), c(1), c(1), c(1), c(1)], 50).unwrap();
        assert!(verify_norm_square(&ones));
        assert_eq!(b_delta_group(&ones).unwrap().dimension, 0);
    }

    #[test]
    fn brauer_examples() {
        let p = split_quintic();
        let c = |x: i64| RatPoly::constant(rat(x));
        let two = DeltaInvariant::from_parts(&p, &[c(5), c(5), c(1), c(1), c(1)], 50).unwrap();
        assert_eq!(
            two.square_flags,
            vec![SquareFlag::Nonsquare, SquareFlag::Nonsquare, SquareFlag::Square, SquareFlag::Square, SquareFlag::Square]
        );
        assert_eq!(b_delta_group(&two).unwrap().dimension, 0);
        let four = DeltaInvariant::from_parts(&p, &[c(5), c(5), c(5), c(5), c(1)], 50).unwrap();
        assert_eq!(b_delta_group(&four).unwrap().dimension, 2);
    }

    #[test]
    fn json_roundtrip_and_errors() {
        let p = diagonal_pencil(&[0, 1, 2, 3, 4]).scaled(&crate::exact::ratio(3, 7));
        let s = p.to_json();
        assert_eq!(Pencil::from_json(&s).unwrap(), p);
        assert!(s.contains("\"3/7\""));
        let e = Pencil::from_json("{\"phi1\": [[1,2]").unwrap_err();
        assert!(matches!(e, Error::Parse { .. }));
        let e = Pencil::from_json("{\"phi1\": [[\"a\"]], \"phi2\": []}").unwrap_err();
        assert!(matches!(e, Error::Parse { .. }));
    }

    #[test]
    fn chart_maps_roots() {
        let chart = Chart::inversion_at(rat(2));
        let s = rat(3);
        let t = chart.to_t(&s).unwrap();
        assert_eq!(chart.to_s(&t).unwrap(), s);
    }
}
