//! Exact arithmetic in `K = Q[x]/(f)` and certified signs at a real embedding.
//!
//! Elements are stored by their power-basis coordinates. A [`RealEmbedding`]
//! is an isolating interval for one real root of `f`; signs of elements at
//! that root are decided by interval refinement, with exact zero detection
//! through `gcd(a, f)`, so no floating point is involved anywhere.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{isolate_real_roots, modp, reduce_mod, sign, split_point, Poly, Sturm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("minimal polynomial must have degree at least 1")]
    Degree,
    #[error("minimal polynomial is not squarefree")]
    NotSquarefree,
    #[error("element is a zero divisor: its polynomial shares the factor {0} with the modulus")]
    ZeroDivisor(String),
    #[error("element has {found} coordinates, field degree is {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("interval [{lo}, {hi}] does not isolate exactly one real root")]
    InvalidEmbedding { lo: String, hi: String },
    #[error("claimed irreducibility certificate modulo {0} does not verify")]
    BadCertificate(u64),
    #[error("unrecognized irreducibility tag {0:?}")]
    BadIrreducibilityTag(String),
}

/// How irreducibility of the minimal polynomial is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Irreducibility {
    /// Irreducible modulo this prime, which does not divide the leading
    /// coefficient; hence irreducible over Q.
    Certified(u64),
    Assumed,
}

impl fmt::Display for Irreducibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Irreducibility::Certified(p) => write!(f, "certified({p})"),
            Irreducibility::Assumed => write!(f, "assumed"),
        }
    }
}

impl std::str::FromStr for Irreducibility {
    type Err = FieldError;
    fn from_str(s: &str) -> Result<Self, FieldError> {
        if s == "assumed" {
            return Ok(Irreducibility::Assumed);
        }
        s.strip_prefix("certified(")
            .and_then(|r| r.strip_suffix(')'))
            .and_then(|p| p.parse().ok())
            .map(Irreducibility::Certified)
            .ok_or_else(|| FieldError::BadIrreducibilityTag(s.to_string()))
    }
}

/// Largest prime tried when searching for an irreducibility certificate.
const CERTIFICATE_PRIME_LIMIT: u64 = 2000;

fn primes_up_to(n: u64) -> impl Iterator<Item = u64> {
    (2..=n).filter(|&k| (2..).take_while(|d| d * d <= k).all(|d| k % d != 0))
}

/// `Q[x]/(f)` for a squarefree integer polynomial `f`.
#[derive(Clone, PartialEq, Eq)]
pub struct NumberField {
    min_poly: Vec<BigInt>,
    modulus: Poly,
    irreducibility: Irreducibility,
}

impl NumberField {
    /// Builds the field and searches small primes for an irreducibility
    /// certificate; falls back to `Assumed`.
    pub fn new(min_poly: Vec<BigInt>) -> Result<Self, FieldError> {
        let modulus = Self::check(&min_poly)?;
        let irreducibility = primes_up_to(CERTIFICATE_PRIME_LIMIT)
            .find(|&p| certifies(&min_poly, p))
            .map_or(Irreducibility::Assumed, Irreducibility::Certified);
        Ok(NumberField { min_poly, modulus, irreducibility })
    }

    /// Builds the field with a given irreducibility tag; a claimed
    /// certificate is re-verified.
    pub fn with_irreducibility(min_poly: Vec<BigInt>, irr: Irreducibility) -> Result<Self, FieldError> {
        let modulus = Self::check(&min_poly)?;
        if let Irreducibility::Certified(p) = irr {
            if !certifies(&min_poly, p) {
                return Err(FieldError::BadCertificate(p));
            }
        }
        Ok(NumberField { min_poly, modulus, irreducibility: irr })
    }

    fn check(min_poly: &[BigInt]) -> Result<Poly, FieldError> {
        let modulus = Poly::from_ints(min_poly);
        if modulus.degree().unwrap_or(0) < 1 || min_poly.last().is_none_or(Zero::is_zero) {
            return Err(FieldError::Degree);
        }
        if !modulus.is_squarefree() {
            return Err(FieldError::NotSquarefree);
        }
        Ok(modulus)
    }

    /// `Q` itself, presented as `Q[x]/(x)`.
    pub fn rationals() -> Self {
        NumberField::new(vec![BigInt::zero(), BigInt::one()]).expect("x is squarefree")
    }

    /// The default witness field `Q[x]/(x¹¹ − x − 1)`.
    pub fn default_witness_field() -> Self {
        let mut c = vec![BigInt::zero(); 12];
        c[0] = BigInt::from(-1);
        c[1] = BigInt::from(-1);
        c[11] = BigInt::one();
        NumberField::new(c).expect("x^11 - x - 1 is squarefree")
    }

    pub fn degree(&self) -> usize {
        self.min_poly.len() - 1
    }

    pub fn min_poly(&self) -> &[BigInt] {
        &self.min_poly
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn irreducibility(&self) -> Irreducibility {
        self.irreducibility
    }

    pub fn element(&self, coeffs: Vec<BigRational>) -> Result<FieldElement, FieldError> {
        if coeffs.len() != self.degree() {
            return Err(FieldError::DimensionMismatch { expected: self.degree(), found: coeffs.len() });
        }
        Ok(FieldElement { coeffs })
    }

    /// Reduces an arbitrary polynomial modulo `f`.
    pub fn from_poly(&self, p: &Poly) -> FieldElement {
        let r = p.rem(&self.modulus);
        FieldElement { coeffs: (0..self.degree()).map(|i| r.coeff(i)).collect() }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { coeffs: vec![BigRational::zero(); self.degree()] }
    }

    pub fn one(&self) -> FieldElement {
        self.from_rational(BigRational::one())
    }

    pub fn from_rational(&self, c: BigRational) -> FieldElement {
        self.from_poly(&Poly::constant(c))
    }

    /// The class `x̃` of `x`.
    pub fn generator(&self) -> FieldElement {
        self.from_poly(&Poly::x())
    }

    fn check_elem(&self, a: &FieldElement) -> Result<(), FieldError> {
        if a.coeffs.len() != self.degree() {
            return Err(FieldError::DimensionMismatch { expected: self.degree(), found: a.coeffs.len() });
        }
        Ok(())
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect() }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect() }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement { coeffs: a.coeffs.iter().map(|x| -x).collect() }
    }

    pub fn scale(&self, a: &FieldElement, c: &BigRational) -> FieldElement {
        FieldElement { coeffs: a.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.from_poly(&a.to_poly().mul(&b.to_poly()))
    }

    pub fn pow(&self, a: &FieldElement, mut e: u32) -> FieldElement {
        let mut result = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        result
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check_elem(a)?;
        let p = a.to_poly();
        let (g, s, _) = p.ext_gcd(&self.modulus);
        if g.is_zero() || !g.is_constant() {
            let shown = if g.is_zero() { self.modulus.clone() } else { g };
            return Err(FieldError::ZeroDivisor(shown.to_string()));
        }
        Ok(self.from_poly(&s))
    }

    /// All real embeddings, ordered by root.
    pub fn real_embeddings(&self) -> Vec<RealEmbedding> {
        isolate_real_roots(&self.modulus).into_iter().map(|(lo, hi)| RealEmbedding { lo, hi }).collect()
    }

    pub fn count_real_roots(&self) -> usize {
        Sturm::new(&self.modulus).count_real()
    }

    /// Validates an embedding interval for this field.
    pub fn embedding(&self, lo: BigRational, hi: BigRational) -> Result<RealEmbedding, FieldError> {
        let e = RealEmbedding { lo, hi };
        self.check_embedding(&e)?;
        Ok(e)
    }

    pub fn check_embedding(&self, e: &RealEmbedding) -> Result<(), FieldError> {
        let f = &self.modulus;
        let ok = e.lo < e.hi
            && !f.eval(&e.lo).is_zero()
            && !f.eval(&e.hi).is_zero()
            && Sturm::new(f).count_in(&e.lo, &e.hi) == 1;
        if ok {
            Ok(())
        } else {
            Err(FieldError::InvalidEmbedding {
                lo: crate::json::format_rational(&e.lo),
                hi: crate::json::format_rational(&e.hi),
            })
        }
    }

    /// Halves the isolating interval, keeping the root inside.
    pub fn refine(&self, e: &RealEmbedding) -> RealEmbedding {
        let f = &self.modulus;
        let mid = split_point(f, &e.lo, &e.hi);
        if f.sign_at(&e.lo) != f.sign_at(&mid) {
            RealEmbedding { lo: e.lo.clone(), hi: mid }
        } else {
            RealEmbedding { lo: mid, hi: e.hi.clone() }
        }
    }

    /// Exact sign of `a(α)` at the embedded root `α`.
    pub fn sign_at(&self, a: &FieldElement, e: &RealEmbedding) -> i8 {
        if a.is_zero() {
            return 0;
        }
        let p = a.to_poly();
        let g = p.gcd(&self.modulus);
        if !g.is_constant() && Sturm::new(&g).count_in(&e.lo, &e.hi) == 1 {
            return 0;
        }
        let mut cur = e.clone();
        loop {
            let (c, b) = self.ball(&p, &cur);
            if c.abs() > b {
                return sign(&c);
            }
            cur = self.refine(&cur);
        }
    }

    fn ball(&self, p: &Poly, e: &RealEmbedding) -> (BigRational, BigRational) {
        let two = BigRational::from_integer(BigInt::from(2));
        let m = (&e.lo + &e.hi) / &two;
        let r = (&e.hi - &e.lo) / &two;
        p.eval_ball(&m, &r)
    }

    /// A rational interval of width at most `width` containing `a(α)`,
    /// together with the refined embedding that produced it.
    pub fn enclose(
        &self,
        a: &FieldElement,
        e: &RealEmbedding,
        width: &BigRational,
    ) -> ((BigRational, BigRational), RealEmbedding) {
        let p = a.to_poly();
        let mut cur = e.clone();
        loop {
            let (c, b) = self.ball(&p, &cur);
            if &b + &b <= *width {
                return ((&c - &b, &c + &b), cur);
            }
            cur = self.refine(&cur);
        }
    }
}

/// `p` certifies irreducibility of `f` when it keeps the degree and `f` is
/// irreducible modulo `p`.
fn certifies(f: &[BigInt], p: u64) -> bool {
    let reduced = reduce_mod(f, p);
    if reduced.last().copied().unwrap_or(0) == 0 || reduced.len() < 2 {
        return false;
    }
    modp::is_irreducible(&reduced, p)
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[x]/({}) [{}]", self.modulus, self.irreducibility)
    }
}

#[derive(Serialize, Deserialize)]
struct FieldJson {
    #[serde(with = "crate::json::int_vec")]
    min_poly: Vec<BigInt>,
    irreducibility: String,
}

impl Serialize for NumberField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FieldJson { min_poly: self.min_poly.clone(), irreducibility: self.irreducibility.to_string() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for NumberField {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = FieldJson::deserialize(d)?;
        let irr: Irreducibility = j.irreducibility.parse().map_err(D::Error::custom)?;
        NumberField::with_irreducibility(j.min_poly, irr).map_err(D::Error::custom)
    }
}

/// Power-basis coordinates `(c_0, …, c_{d−1})` of `Σ c_i x̃^i`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldElement {
    #[serde(with = "crate::json::rational_vec")]
    pub coeffs: Vec<BigRational>,
}

impl FieldElement {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn to_poly(&self) -> Poly {
        Poly::new(self.coeffs.clone())
    }

    /// The element is a rational constant.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.coeffs.iter().skip(1).all(Zero::is_zero).then(|| self.coeffs.first().cloned().unwrap_or_default())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

/// An isolating interval `(lo, hi)` for one real root of the minimal
/// polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RealEmbedding {
    #[serde(with = "crate::json::rational")]
    pub lo: BigRational,
    #[serde(with = "crate::json::rational")]
    pub hi: BigRational,
}

impl RealEmbedding {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn ints(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn reduction_in_sextic_field() {
        let k = NumberField::new(ints(&[1, 1, 0, 0, 0, 0, 1])).unwrap();
        let x = k.generator();
        let x5 = k.pow(&x, 5);
        let prod = k.mul(&x, &x5);
        // x^6 = -x - 1
        assert_eq!(prod, k.element(vec![r(-1), r(-1), r(0), r(0), r(0), r(0)]).unwrap());
        assert_eq!(k.add(&x, &k.zero()), x);
    }

    #[test]
    fn inverse_in_quadratic_field() {
        let k = NumberField::new(ints(&[-2, 0, 1])).unwrap();
        let x = k.generator();
        let xi = k.inv(&x).unwrap();
        assert_eq!(k.mul(&x, &xi), k.one());
        assert!(matches!(k.inv(&k.zero()), Err(FieldError::ZeroDivisor(_))));
    }

    #[test]
    fn zero_divisors_in_etale_algebra() {
        // (x - 1)(x + 1): squarefree but reducible
        let k = NumberField::new(ints(&[-1, 0, 1])).unwrap();
        assert_eq!(k.irreducibility(), Irreducibility::Assumed);
        let a = k.element(vec![r(-1), r(1)]).unwrap();
        assert!(matches!(k.inv(&a), Err(FieldError::ZeroDivisor(_))));
        // the sign at the root 1 is exactly zero, not a non-terminating refinement
        let embeds = k.real_embeddings();
        assert_eq!(embeds.len(), 2);
        assert_eq!(k.sign_at(&a, &embeds[1]), 0);
        assert_eq!(k.sign_at(&a, &embeds[0]), -1);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(NumberField::new(ints(&[3])).unwrap_err(), FieldError::Degree);
        assert_eq!(NumberField::new(ints(&[1, 2, 1])).unwrap_err(), FieldError::NotSquarefree);
        assert!(matches!(
            NumberField::with_irreducibility(ints(&[1, 0, 1]), Irreducibility::Certified(5)),
            Err(FieldError::BadCertificate(5))
        ));
    }

    #[test]
    fn default_field_is_certified_with_one_real_root() {
        let k = NumberField::default_witness_field();
        assert_eq!(k.degree(), 11);
        assert!(matches!(k.irreducibility(), Irreducibility::Certified(_)));
        assert_eq!(k.count_real_roots(), 1);
        let e = k.embedding(r(1), r(2)).unwrap();
        let x = k.generator();
        assert_eq!(k.sign_at(&x, &e), 1);
        assert_eq!(k.sign_at(&k.sub(&x, &k.from_rational(r(2))), &e), -1);
        assert_eq!(k.sign_at(&k.one(), &e), 1);
        // root is 1.0683...
        let x_minus = k.sub(&x, &k.from_rational(BigRational::new(106.into(), 100.into())));
        let x_plus = k.sub(&x, &k.from_rational(BigRational::new(107.into(), 100.into())));
        assert_eq!(k.sign_at(&x_minus, &e), 1);
        assert_eq!(k.sign_at(&x_plus, &e), -1);
        assert!(k.embedding(r(2), r(3)).is_err());
    }

    #[test]
    fn example_sextic_is_certified() {
        let k = NumberField::new(ints(&[1, 1, 0, 0, 0, 0, 1])).unwrap();
        assert!(matches!(k.irreducibility(), Irreducibility::Certified(_)));
        assert_eq!(k.count_real_roots(), 0);
    }

    #[test]
    fn refinement_halves_and_nests() {
        let k = NumberField::default_witness_field();
        let mut e = k.embedding(r(1), r(2)).unwrap();
        for _ in 0..10 {
            let next = k.refine(&e);
            assert!(next.lo >= e.lo && next.hi <= e.hi);
            assert_eq!(next.width() * r(2), e.width());
            k.check_embedding(&next).unwrap();
            e = next;
        }
    }

    #[test]
    fn json_formats() {
        let k = NumberField::default_witness_field();
        let s = serde_json::to_string(&k).unwrap();
        assert!(s.starts_with(r#"{"min_poly":[-1,-1,0,0,0,0,0,0,0,0,0,1],"irreducibility":"certified("#));
        assert_eq!(serde_json::from_str::<NumberField>(&s).unwrap(), k);
        let el = k.scale(&k.generator(), &BigRational::new(3.into(), 4.into()));
        let s = serde_json::to_string(&el).unwrap();
        assert_eq!(s, r#"{"coeffs":["0","3/4","0","0","0","0","0","0","0","0","0"]}"#);
        let e = k.embedding(r(1), r(2)).unwrap();
        assert_eq!(serde_json::to_string(&e).unwrap(), r#"{"lo":"1","hi":"2"}"#);
    }

    fn small_element() -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::vec(-5i64..=5, 11)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn sign_is_multiplicative(a in small_element(), b in small_element()) {
            let k = NumberField::default_witness_field();
            let e = k.embedding(r(1), r(2)).unwrap();
            let a = k.element(a.into_iter().map(r).collect()).unwrap();
            let b = k.element(b.into_iter().map(r).collect()).unwrap();
            let sa = k.sign_at(&a, &e);
            let sb = k.sign_at(&b, &e);
            prop_assert_eq!(k.sign_at(&k.mul(&a, &b), &e), sa * sb);
            prop_assert!(k.sign_at(&k.mul(&a, &a), &e) >= 0);
            // zero only for the zero element in a field
            prop_assert_eq!(sa == 0, a.is_zero());
        }
    }
}
