//! Period planes over real number fields, their Picard lattices and the
//! poorness decision, together with constructions of explicit planes.
//!
//! A plane is spanned by two vectors `x, y ∈ Λ ⊗ K` for a number field `K`
//! with a chosen real embedding. The Picard lattice is the set of `δ ∈ Λ`
//! orthogonal to both, computed exactly from the power-basis coordinates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{Lattice, LatticeError, LatticeVector, Sublattice, K3_RANK};
use crate::matrix::{clear_row, primitive_integer_vector, IntMatrix};
#[cfg(test)]
use crate::matrix::dot;
use crate::number_field::{FieldElement, FieldError, NumberField, RealEmbedding};
use crate::rng;

pub const DEFAULT_MAX_RETRIES: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PeriodError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("plane vectors must have {expected} coordinates, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("plane is not positive at the embedding: sign of (x,x) is {xx}, sign of the gram determinant is {det}")]
    NotPositive { xx: i8, det: i8 },
    #[error("vector must be nonzero")]
    ZeroVector,
    #[error("vector is not primitive")]
    NotPrimitive,
    #[error("need δ² < −2, got δ² = {0}")]
    NormTooLarge(BigInt),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no suitable plane after {attempts} attempts (last Picard rank {last_pic_rank:?})")]
    RetriesExhausted { attempts: usize, last_pic_rank: Option<usize> },
    #[error("rounding to denominators ≤ {0} destroys positivity")]
    PositivityLost(BigInt),
    #[error("expected an even integer, got {0}")]
    OddInput(BigInt),
}

/// Unvalidated plane data as it appears in JSON.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PeriodPlaneData {
    pub field: NumberField,
    pub embedding: RealEmbedding,
    pub x: Vec<FieldElement>,
    pub y: Vec<FieldElement>,
}

/// A positive 2-plane `⟨x, y⟩ ⊂ Λ ⊗ R`, with `x, y` defined over `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodPlane {
    field: NumberField,
    embedding: RealEmbedding,
    x: Vec<FieldElement>,
    y: Vec<FieldElement>,
}

impl PeriodPlane {
    pub fn new(
        field: NumberField,
        embedding: RealEmbedding,
        x: Vec<FieldElement>,
        y: Vec<FieldElement>,
    ) -> Result<Self, PeriodError> {
        field.check_embedding(&embedding)?;
        for v in [&x, &y] {
            if v.len() != K3_RANK {
                return Err(PeriodError::WrongLength { expected: K3_RANK, found: v.len() });
            }
            for e in v.iter() {
                if e.coeffs.len() != field.degree() {
                    return Err(FieldError::DimensionMismatch { expected: field.degree(), found: e.coeffs.len() }.into());
                }
            }
        }
        let plane = PeriodPlane { field, embedding, x, y };
        let (xx, det) = plane.positivity_signs();
        if xx != 1 || det != 1 {
            return Err(PeriodError::NotPositive { xx, det });
        }
        Ok(plane)
    }

    pub fn from_data(d: PeriodPlaneData) -> Result<Self, PeriodError> {
        PeriodPlane::new(d.field, d.embedding, d.x, d.y)
    }

    /// A plane over `Q`, presented as `Q[x]/(x)` with embedding `(−1, 1)`.
    pub fn rational(x: &[BigRational], y: &[BigRational]) -> Result<Self, PeriodError> {
        let field = NumberField::rationals();
        let embedding = rational_embedding();
        let lift = |v: &[BigRational]| v.iter().map(|c| field.from_rational(c.clone())).collect::<Vec<_>>();
        let (x, y) = (lift(x), lift(y));
        PeriodPlane::new(field, embedding, x, y)
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn embedding(&self) -> &RealEmbedding {
        &self.embedding
    }

    pub fn x(&self) -> &[FieldElement] {
        &self.x
    }

    pub fn y(&self) -> &[FieldElement] {
        &self.y
    }

    /// `(a, b)` in `Λ ⊗ K`.
    pub fn pairing(&self, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
        let gb = gram_times(&self.field, b);
        a.iter().zip(&gb).fold(self.field.zero(), |acc, (u, v)| self.field.add(&acc, &self.field.mul(u, v)))
    }

    /// `(δ, v)` for an integral `δ`; a `Q`-linear combination of coordinates.
    pub fn pair_integral(&self, delta: &[BigInt], v: &[FieldElement]) -> FieldElement {
        let gd = Lattice::k3().gram().mul_vec(delta);
        gd.iter().zip(v).filter(|(c, _)| !c.is_zero()).fold(self.field.zero(), |acc, (c, e)| {
            self.field.add(&acc, &self.field.scale(e, &BigRational::from_integer(c.clone())))
        })
    }

    /// Signs of `(x,x)` and `(x,x)(y,y) − (x,y)²` at the embedding.
    pub fn positivity_signs(&self) -> (i8, i8) {
        let k = &self.field;
        let xx = self.pairing(&self.x, &self.x);
        let yy = self.pairing(&self.y, &self.y);
        let xy = self.pairing(&self.x, &self.y);
        let det = k.sub(&k.mul(&xx, &yy), &k.mul(&xy, &xy));
        (k.sign_at(&xx, &self.embedding), k.sign_at(&det, &self.embedding))
    }

    pub fn to_data(&self) -> PeriodPlaneData {
        PeriodPlaneData {
            field: self.field.clone(),
            embedding: self.embedding.clone(),
            x: self.x.clone(),
            y: self.y.clone(),
        }
    }
}

impl Serialize for PeriodPlane {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_data().serialize(s)
    }
}

impl<'de> Deserialize<'de> for PeriodPlane {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        PeriodPlane::from_data(PeriodPlaneData::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

fn rational_embedding() -> RealEmbedding {
    RealEmbedding { lo: BigRational::from_integer((-1).into()), hi: BigRational::one() }
}

fn gram_times(field: &NumberField, v: &[FieldElement]) -> Vec<FieldElement> {
    let k3 = Lattice::k3();
    let g = k3.gram();
    (0..g.rows())
        .map(|i| {
            (0..g.cols()).filter(|&j| !g[(i, j)].is_zero()).fold(field.zero(), |acc, j| {
                field.add(&acc, &field.scale(&v[j], &BigRational::from_integer(g[(i, j)].clone())))
            })
        })
        .collect()
}

/// `Pic = {δ ∈ Λ : (δ, x) = (δ, y) = 0}`.
pub fn picard_lattice(p: &PeriodPlane) -> Sublattice {
    let mut rows = Vec::with_capacity(2 * p.field.degree());
    for v in [&p.x, &p.y] {
        let w = gram_times(&p.field, v);
        for k in 0..p.field.degree() {
            let row: Vec<BigRational> = w.iter().map(|e| e.coeffs[k].clone()).collect();
            if row.iter().any(|c| !c.is_zero()) {
                rows.push(clear_row(&row));
            }
        }
    }
    let k3 = Lattice::k3();
    if rows.is_empty() {
        return Sublattice::full(k3);
    }
    Sublattice::kernel_of(k3, &IntMatrix::from_rows(&rows)).expect("kernel columns are independent")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    PoorRankZero,
    PoorNegativeDefinite,
    NotPoor,
}

impl Verdict {
    pub fn is_poor(self) -> bool {
        self != Verdict::NotPoor
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoorVerdict {
    pub verdict: Verdict,
    pub witness: Option<LatticeVector>,
    pub projective: bool,
}

/// Poorness of an abstract even lattice given by its gram matrix; the
/// witness is in the coordinates of that gram.
pub fn poor_verdict_for_gram(gram: &IntMatrix) -> PoorVerdict {
    if gram.rows() == 0 {
        return PoorVerdict { verdict: Verdict::PoorRankZero, witness: None, projective: false };
    }
    let diag = crate::lattice::diagonalize(gram);
    let sig = diag.signature();
    if let Some(c) = diag.positive_pivots().next() {
        let v = LatticeVector(primitive_integer_vector(c));
        return PoorVerdict { verdict: Verdict::NotPoor, witness: Some(v), projective: true };
    }
    if sig.zero > 0 {
        let kernel = gram.integer_kernel();
        let v = LatticeVector(kernel.column(0));
        return PoorVerdict { verdict: Verdict::NotPoor, witness: Some(v), projective: false };
    }
    let hits = crate::enumerate::short_vectors(&gram.negated(), &BigInt::from(2)).expect("negative definite");
    match hits.into_iter().next() {
        Some(v) => PoorVerdict { verdict: Verdict::NotPoor, witness: Some(v), projective: false },
        None => PoorVerdict { verdict: Verdict::PoorNegativeDefinite, witness: None, projective: false },
    }
}

/// Poorness of a sublattice; the witness is returned in ambient coordinates.
pub fn is_poor_lattice(s: &Sublattice) -> PoorVerdict {
    let mut v = poor_verdict_for_gram(s.gram());
    v.witness = v.witness.map(|c| s.embed(&c.0));
    v
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodReport {
    pub pic_rank: usize,
    #[serde(with = "crate::json::int_mat")]
    pub pic_gram: Vec<Vec<BigInt>>,
    pub verdict: Verdict,
    #[serde(with = "crate::json::int_vec_opt")]
    pub witness: Option<Vec<BigInt>>,
    pub projective: bool,
    #[serde(rename = "in_U")]
    pub in_u: bool,
}

pub fn classify_period(p: &PeriodPlane) -> PeriodReport {
    let pic = picard_lattice(p);
    let v = is_poor_lattice(&pic);
    PeriodReport {
        pic_rank: pic.rank(),
        pic_gram: pic.gram().to_rows(),
        verdict: v.verdict,
        witness: v.witness.map(|w| w.0),
        projective: v.projective,
        in_u: v.verdict.is_poor(),
    }
}

fn check_nonzero(v: &LatticeVector) -> Result<(), PeriodError> {
    Lattice::k3().check_dim(v)?;
    if v.is_zero() {
        return Err(PeriodError::ZeroVector);
    }
    Ok(())
}

/// Whether `δ` stays orthogonal to the plane, i.e. the point lies on `H_δ`.
pub fn in_hyperplane(p: &PeriodPlane, delta: &LatticeVector) -> Result<bool, PeriodError> {
    check_nonzero(delta)?;
    Ok(p.pair_integral(&delta.0, &p.x).is_zero() && p.pair_integral(&delta.0, &p.y).is_zero())
}

/// `H_v = H_w`, i.e. `v` and `w` are proportional.
pub fn hyperplane_equivalent(v: &LatticeVector, w: &LatticeVector) -> Result<bool, PeriodError> {
    if v.is_zero() || w.is_zero() {
        return Err(PeriodError::ZeroVector);
    }
    if v.len() != w.len() {
        return Err(LatticeError::DimensionMismatch { expected: v.len(), found: w.len() }.into());
    }
    Ok(IntMatrix::from_columns(v.len(), &[v.0.clone(), w.0.clone()]).rank() == 1)
}

/// An integral `L` with `L² > 0` orthogonal to `δ`, `v` and `w`.
pub fn projective_point_in_wall(
    delta: &LatticeVector,
    v: &LatticeVector,
    w: &LatticeVector,
) -> Result<LatticeVector, PeriodError> {
    let k3 = Lattice::k3();
    for u in [delta, v, w] {
        k3.check_dim(u)?;
    }
    if delta.is_zero() {
        return Err(PeriodError::ZeroVector);
    }
    if !delta.is_primitive()? {
        return Err(PeriodError::NotPrimitive);
    }
    let dd = k3.norm(delta)?;
    if !dd.is_negative() {
        return Err(PeriodError::Precondition(format!("δ² = {dd} is not negative")));
    }
    if !k3.inner(v, delta)?.is_zero() || !k3.inner(w, delta)?.is_zero() {
        return Err(PeriodError::Precondition("v and w must be orthogonal to δ".into()));
    }
    let (vv, ww, vw) = (k3.norm(v)?, k3.norm(w)?, k3.inner(v, w)?);
    if !vv.is_positive() || !(&vv * &ww - &vw * &vw).is_positive() {
        return Err(PeriodError::Precondition("v and w must span a positive definite plane".into()));
    }
    let f = IntMatrix::from_rows(&[k3.dual_row(delta)?, k3.dual_row(v)?, k3.dual_row(w)?]);
    let wall = Sublattice::kernel_of(k3.clone(), &f)?;
    let c = wall.as_lattice().positive_vector()?;
    let l = wall.embed(&c.0);
    debug_assert!(k3.norm(&l)?.is_positive());
    Ok(l)
}

/// A plane over the default degree-11 field whose Picard lattice is exactly
/// `Zδ`, which is then negative definite without roots.
pub fn poor_witness_period(delta: &LatticeVector, seed: u64, max_retries: usize) -> Result<PeriodPlane, PeriodError> {
    let k3 = Lattice::k3();
    check_nonzero(delta)?;
    if !delta.is_primitive()? {
        return Err(PeriodError::NotPrimitive);
    }
    let dd = k3.norm(delta)?;
    if dd >= BigInt::from(-2) {
        return Err(PeriodError::NormTooLarge(dd));
    }
    let row = IntMatrix::from_rows(&[k3.dual_row(delta)?]);
    let complement = Sublattice::kernel_of(k3, &row)?;
    engineer_plane(&complement, seed, max_retries, |pic| pic.rank() == 1 && pic.rational_span_contains(delta))
}

/// A plane over the default degree-11 field with trivial Picard lattice.
pub fn generic_poor_period(seed: u64) -> Result<PeriodPlane, PeriodError> {
    engineer_plane(&Sublattice::full(Lattice::k3()), seed, DEFAULT_MAX_RETRIES, |pic| pic.rank() == 0)
}

/// Builds `x = p + Σ (ε_k/N) α^k d_k` and `y` likewise, with `p, q` spanning a
/// positive plane in `space` and the directions `d_k` completing `p, q` to a
/// spanning set of `space ⊗ Q`.
fn engineer_plane(
    space: &Sublattice,
    seed: u64,
    max_retries: usize,
    accept: impl Fn(&Sublattice) -> bool,
) -> Result<PeriodPlane, PeriodError> {
    let field = NumberField::default_witness_field();
    let embedding = field.real_embeddings().into_iter().next().expect("the default field has a real root");
    let per_vector = field.degree() - 1;
    let needed = 2 * per_vector;
    if space.rank() > needed + 2 {
        return Err(PeriodError::Precondition("field degree too small for this space".into()));
    }
    let k3 = Lattice::k3();
    let positive: Vec<LatticeVector> = space
        .as_lattice()
        .diagonalization()
        .positive_pivots()
        .map(|c| space.embed(&primitive_integer_vector(c)))
        .collect();
    if positive.len() < 2 {
        return Err(PeriodError::Precondition("space has no positive plane".into()));
    }

    let mut rng = rng::seeded(seed);
    let mut last_pic_rank = None;
    for _ in 0..max_retries.max(1) {
        let (p, q) = loop {
            let combo = |rng: &mut rng::Rng| {
                positive.iter().fold(LatticeVector::zero(K3_RANK), |acc, u| {
                    acc.add(&u.scaled(&BigInt::from(rng.random_range(-2i64..=2))))
                })
            };
            let p = combo(&mut rng);
            let q = combo(&mut rng);
            let (pp, qq, pq) = (k3.norm(&p)?, k3.norm(&q)?, k3.inner(&p, &q)?);
            if pp.is_positive() && (&pp * &qq - &pq * &pq).is_positive() {
                break (p, q);
            }
        };

        let mut pool = space.basis_vectors();
        pool.shuffle(&mut rng);
        let mut chosen: Vec<LatticeVector> = Vec::with_capacity(needed);
        let mut span = vec![p.0.clone(), q.0.clone()];
        let mut rest = Vec::new();
        for b in pool {
            span.push(b.0.clone());
            if IntMatrix::from_columns(K3_RANK, &span).rank() == span.len() {
                chosen.push(b);
            } else {
                span.pop();
                rest.push(b);
            }
        }
        chosen.extend(rest);
        chosen.resize(needed, LatticeVector::zero(K3_RANK));
        chosen.truncate(needed);
        let signs: Vec<i64> = (0..needed).map(|_| if rng.random_bool(0.5) { 1 } else { -1 }).collect();

        let mut scale = BigInt::from(1u32 << 10);
        let plane = loop {
            let build = |base: &LatticeVector, dirs: &[LatticeVector], eps: &[i64]| -> Vec<FieldElement> {
                (0..K3_RANK)
                    .map(|i| {
                        let mut coeffs = vec![BigRational::from_integer(base.0[i].clone())];
                        for (d, e) in dirs.iter().zip(eps) {
                            coeffs.push(BigRational::new(&d.0[i] * BigInt::from(*e), scale.clone()));
                        }
                        FieldElement { coeffs }
                    })
                    .collect()
            };
            let x = build(&p, &chosen[..per_vector], &signs[..per_vector]);
            let y = build(&q, &chosen[per_vector..], &signs[per_vector..]);
            match PeriodPlane::new(field.clone(), embedding.clone(), x, y) {
                Ok(plane) => break Some(plane),
                Err(PeriodError::NotPositive { .. }) if scale.bits() < 64 => scale <<= 1,
                Err(PeriodError::NotPositive { .. }) => break None,
                Err(e) => return Err(e),
            }
        };
        let Some(plane) = plane else { continue };
        let pic = picard_lattice(&plane);
        if accept(&pic) {
            return Ok(plane);
        }
        last_pic_rank = Some(pic.rank());
    }
    Err(PeriodError::RetriesExhausted { attempts: max_retries.max(1), last_pic_rank })
}

/// Rounds every coordinate of the plane at its embedding to the nearest
/// rational with denominator at most `q`, returning a plane over `Q`.
pub fn rationalize_plane(p: &PeriodPlane, q: &BigInt) -> Result<PeriodPlane, PeriodError> {
    if !q.is_positive() {
        return Err(PeriodError::Precondition("denominator bound must be positive".into()));
    }
    let width = BigRational::new(BigInt::one(), BigInt::from(2) * q * q);
    let mut emb = p.embedding.clone();
    let mut round = |v: &[FieldElement]| -> Vec<BigRational> {
        v.iter()
            .map(|e| {
                if let Some(c) = e.as_rational() {
                    return best_rational(&c, q);
                }
                let ((lo, hi), refined) = p.field.enclose(e, &emb, &width);
                emb = refined;
                best_rational(&((lo + hi) / BigRational::from_integer(2.into())), q)
            })
            .collect()
    };
    let x = round(&p.x);
    let y = round(&p.y);
    match PeriodPlane::rational(&x, &y) {
        Ok(plane) => Ok(plane),
        Err(PeriodError::NotPositive { .. }) => Err(PeriodError::PositivityLost(q.clone())),
        Err(e) => Err(e),
    }
}

/// The rational closest to `m` among those with denominator at most `q`
/// (ties favour the smaller denominator), from continued fractions.
pub fn best_rational(m: &BigRational, q: &BigInt) -> BigRational {
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut x = m.clone();
    loop {
        let a = x.floor().to_integer();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if &k2 > q {
            let t = (q - &k0).div_floor(&k1);
            let semi = BigRational::new(&t * &h1 + &h0, &t * &k1 + &k0);
            let conv = BigRational::new(h1, k1);
            let (ds, dc) = ((&semi - m).abs(), (&conv - m).abs());
            return if ds < dc { semi } else { conv };
        }
        let frac = &x - BigRational::from_integer(a);
        if frac.is_zero() {
            return BigRational::new(h2, k2);
        }
        (h0, h1) = (h1, h2);
        (k0, k1) = (k1, k2);
        x = frac.recip();
    }
}

/// `χ(L) = 2 + L²/2` on a K3 surface.
pub fn chi_riemann_roch(c1sq: &BigInt) -> Result<BigInt, PeriodError> {
    half(c1sq).map(|h| h + 2)
}

/// `p_a(C) = 1 + C²/2`, from adjunction `2p_a − 2 = C²`.
pub fn arithmetic_genus(csq: &BigInt) -> Result<BigInt, PeriodError> {
    half(csq).map(|h| h + 1)
}

fn half(c: &BigInt) -> Result<BigInt, PeriodError> {
    if c.is_odd() {
        return Err(PeriodError::OddInput(c.clone()));
    }
    Ok(c / 2)
}

/// Exact recheck that every basis vector of `pic` is orthogonal to the plane.
pub fn pic_is_orthogonal(p: &PeriodPlane, pic: &Sublattice) -> bool {
    pic.basis_vectors().iter().all(|d| p.pair_integral(&d.0, &p.x).is_zero() && p.pair_integral(&d.0, &p.y).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn k3_norm(v: &[BigInt]) -> BigInt {
        dot(v, &Lattice::k3().gram().mul_vec(v))
    }

    const E1: usize = 16;
    const F1: usize = 17;
    const E2: usize = 18;
    const F2: usize = 19;
    const E3: usize = 20;
    const F3: usize = 21;

    fn unit(entries: &[(usize, i64)]) -> LatticeVector {
        let mut v = vec![BigInt::zero(); K3_RANK];
        for &(i, c) in entries {
            v[i] += c;
        }
        LatticeVector(v)
    }

    fn rat(v: &LatticeVector) -> Vec<BigRational> {
        v.0.iter().map(|c| BigRational::from_integer(c.clone())).collect()
    }

    fn rational_plane(x: &LatticeVector, y: &LatticeVector) -> PeriodPlane {
        PeriodPlane::rational(&rat(x), &rat(y)).unwrap()
    }

    #[test]
    fn rational_plane_has_rank_twenty_picard() {
        let p = rational_plane(&unit(&[(E1, 1), (F1, 1)]), &unit(&[(E2, 1), (F2, 1)]));
        let pic = picard_lattice(&p);
        assert_eq!(pic.rank(), 20);
        assert!(pic.is_saturated());
        assert!(pic.rational_span_contains(&unit(&[(E1, 1), (F1, -1)])));
        assert!(pic_is_orthogonal(&p, &pic));
        let report = classify_period(&p);
        assert_eq!(report.verdict, Verdict::NotPoor);
        assert!(report.projective && !report.in_u);
        assert!(k3_norm(report.witness.as_ref().unwrap()).is_positive());
    }

    #[test]
    fn non_positive_planes_are_rejected() {
        let x = unit(&[(E1, 1), (F1, -1)]);
        let y = unit(&[(E2, 1), (F2, 1)]);
        assert!(matches!(PeriodPlane::rational(&rat(&x), &rat(&y)), Err(PeriodError::NotPositive { .. })));
        let x = unit(&[(E1, 1), (F1, 1)]);
        assert!(matches!(PeriodPlane::rational(&rat(&x), &rat(&x)), Err(PeriodError::NotPositive { .. })));
    }

    #[test]
    fn gram_level_verdicts() {
        let g = |rows: &[Vec<i64>]| IntMatrix::from_rows(rows);
        assert_eq!(poor_verdict_for_gram(&IntMatrix::zeros(0, 0)).verdict, Verdict::PoorRankZero);
        let v = poor_verdict_for_gram(&g(&[vec![-2]]));
        assert_eq!(v.verdict, Verdict::NotPoor);
        assert_eq!(v.witness, Some(LatticeVector::new([1])));
        assert_eq!(poor_verdict_for_gram(&g(&[vec![-4]])).verdict, Verdict::PoorNegativeDefinite);
        let v = poor_verdict_for_gram(&g(&[vec![2]]));
        assert!(v.projective && v.verdict == Verdict::NotPoor);
        let v = poor_verdict_for_gram(&g(&[vec![0, 1], vec![1, 0]]));
        assert_eq!(v.verdict, Verdict::NotPoor);
        let w = v.witness.unwrap();
        assert!(dot(&w.0, &g(&[vec![0, 1], vec![1, 0]]).mul_vec(&w.0)) >= BigInt::from(-2));
        let v = poor_verdict_for_gram(&g(&[vec![0, 0], vec![0, -4]]));
        assert_eq!(v.verdict, Verdict::NotPoor);
        assert_eq!(v.witness, Some(LatticeVector::new([1, 0])));
        assert!(!v.projective);
    }

    #[test]
    fn hyperplanes() {
        let p = rational_plane(&unit(&[(E2, 1), (F2, 1)]), &unit(&[(E3, 1), (F3, 1)]));
        assert!(in_hyperplane(&p, &unit(&[(E1, 1), (F1, -2)])).unwrap());
        let q = rational_plane(&unit(&[(E1, 1), (F1, 1)]), &unit(&[(E2, 1), (F2, 1)]));
        assert!(!in_hyperplane(&q, &unit(&[(E1, 1)])).unwrap());
        assert_eq!(in_hyperplane(&q, &LatticeVector::zero(K3_RANK)), Err(PeriodError::ZeroVector));

        assert!(hyperplane_equivalent(&unit(&[(0, 2), (1, 4)]), &unit(&[(0, 1), (1, 2)])).unwrap());
        assert!(!hyperplane_equivalent(&unit(&[(0, 1)]), &unit(&[(1, 1)])).unwrap());
        assert!(hyperplane_equivalent(&unit(&[(3, 1), (9, -5)]), &unit(&[(3, -1), (9, 5)])).unwrap());
        assert!(hyperplane_equivalent(&unit(&[(0, 1)]), &LatticeVector::zero(K3_RANK)).is_err());
    }

    #[test]
    fn wall_example() {
        let delta = unit(&[(E1, 1), (F1, -2)]);
        let l = projective_point_in_wall(&delta, &unit(&[(E2, 1), (F2, 1)]), &unit(&[(E3, 1), (F3, 1)])).unwrap();
        assert_eq!(l, unit(&[(E1, 1), (F1, 2)]));
        assert_eq!(k3_norm(&l.0), BigInt::from(4));
        // precondition failures
        let bad = projective_point_in_wall(&delta, &unit(&[(E1, 1)]), &unit(&[(E3, 1), (F3, 1)]));
        assert!(matches!(bad, Err(PeriodError::Precondition(_))));
        let bad = projective_point_in_wall(&unit(&[(E1, 1), (F1, 1)]), &unit(&[(E2, 1), (F2, 1)]), &unit(&[(E3, 1), (F3, 1)]));
        assert!(matches!(bad, Err(PeriodError::Precondition(_))));
    }

    #[test]
    fn witness_preconditions() {
        let e = |v| poor_witness_period(&v, 0, 1).unwrap_err();
        assert_eq!(e(unit(&[(E1, 1), (F1, -1)])), PeriodError::NormTooLarge(BigInt::from(-2)));
        assert_eq!(e(unit(&[(E1, 2), (F1, -4)])), PeriodError::NotPrimitive);
        assert_eq!(e(LatticeVector::zero(K3_RANK)), PeriodError::ZeroVector);
    }

    #[test]
    fn witness_plane_has_picard_lattice_z_delta() {
        let delta = unit(&[(E1, 1), (F1, -2)]);
        let p = poor_witness_period(&delta, 7, DEFAULT_MAX_RETRIES).unwrap();
        let pic = picard_lattice(&p);
        assert_eq!(pic.rank(), 1);
        assert!(pic.rational_span_contains(&delta));
        assert_eq!(pic.gram()[(0, 0)], BigInt::from(-4));
        assert!(in_hyperplane(&p, &delta).unwrap());
        let report = classify_period(&p);
        assert_eq!(report.verdict, Verdict::PoorNegativeDefinite);
        assert!(report.in_u);
    }

    #[test]
    fn generic_plane_is_poor_and_rationalizes_to_projective() {
        let p = generic_poor_period(1).unwrap();
        let report = classify_period(&p);
        assert_eq!(report.pic_rank, 0);
        assert_eq!(report.verdict, Verdict::PoorRankZero);
        let r = rationalize_plane(&p, &BigInt::from(1000)).unwrap();
        let report = classify_period(&r);
        assert!(report.pic_rank >= 20);
        assert_eq!(report.verdict, Verdict::NotPoor);
        assert!(report.projective);
    }

    #[test]
    fn rationalizing_a_rational_plane_is_the_identity() {
        let mut x = rat(&unit(&[(E1, 1), (F1, 1)]));
        x[0] = BigRational::new(1.into(), 7.into());
        let y = rat(&unit(&[(E2, 3), (F2, 1)]));
        let p = PeriodPlane::rational(&x, &y).unwrap();
        assert_eq!(rationalize_plane(&p, &BigInt::from(7)).unwrap(), p);
    }

    #[test]
    fn plane_json_round_trip() {
        let p = generic_poor_period(3).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        let back: PeriodPlane = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn riemann_roch() {
        let c = |n: i64| chi_riemann_roch(&BigInt::from(n)).unwrap();
        let g = |n: i64| arithmetic_genus(&BigInt::from(n)).unwrap();
        assert_eq!(c(-2), BigInt::from(1));
        assert_eq!(c(0), BigInt::from(2));
        assert_eq!(g(-2), BigInt::from(0));
        assert_eq!(g(2), BigInt::from(2));
        assert_eq!(chi_riemann_roch(&BigInt::from(3)), Err(PeriodError::OddInput(BigInt::from(3))));
    }

    fn brute_best(m: &BigRational, q: i64) -> BigRational {
        let mut best: Option<BigRational> = None;
        for d in 1..=q {
            let d = BigInt::from(d);
            let n = (m * BigRational::from_integer(d.clone())).round().to_integer();
            let c = BigRational::new(n, d);
            let better = match &best {
                None => true,
                Some(b) => (&c - m).abs() < (b - m).abs(),
            };
            if better {
                best = Some(c);
            }
        }
        best.unwrap()
    }

    proptest! {
        #[test]
        fn best_rational_matches_search(n in -10_000i64..10_000, d in 1i64..5000, q in 1i64..60) {
            let m = BigRational::new(n.into(), d.into());
            let fast = best_rational(&m, &BigInt::from(q));
            let slow = brute_best(&m, q);
            prop_assert!(fast.denom() <= &BigInt::from(q));
            prop_assert_eq!((&fast - &m).abs(), (&slow - &m).abs());
        }

        #[test]
        fn hyperplane_equivalence_is_symmetric_and_scale_invariant(
            v in proptest::collection::vec(-3i64..=3, K3_RANK),
            w in proptest::collection::vec(-3i64..=3, K3_RANK),
            s in -4i64..=4,
        ) {
            let v = LatticeVector::new(v);
            let w = LatticeVector::new(w);
            prop_assume!(!v.is_zero() && !w.is_zero() && s != 0);
            prop_assert!(hyperplane_equivalent(&v, &v).unwrap());
            prop_assert_eq!(hyperplane_equivalent(&v, &w).unwrap(), hyperplane_equivalent(&w, &v).unwrap());
            let sv = v.scaled(&BigInt::from(s));
            prop_assert!(hyperplane_equivalent(&v, &sv).unwrap());
            prop_assert_eq!(hyperplane_equivalent(&sv, &w).unwrap(), hyperplane_equivalent(&v, &w).unwrap());
        }

        #[test]
        fn chi_is_defined_on_every_class_and_sign_symmetric(v in proptest::collection::vec(-3i64..=3, K3_RANK)) {
            let v = LatticeVector::new(v);
            let neg = v.scaled(&BigInt::from(-1));
            let (a, b) = (k3_norm(&v.0), k3_norm(&neg.0));
            prop_assert_eq!(chi_riemann_roch(&a).unwrap(), chi_riemann_roch(&b).unwrap());
            prop_assert_eq!(chi_riemann_roch(&a).unwrap() - arithmetic_genus(&a).unwrap(), BigInt::one());
            prop_assert!(chi_riemann_roch(&(a + 1)).is_err());
        }
    }
}
