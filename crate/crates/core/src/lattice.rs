//! Integral lattices given by a Gram matrix, their sublattices, and the exact
//! rational diagonalization used for signatures and positive directions.
//!
//! # Standard lattices
//!
//! * `U` is the hyperbolic plane with basis `e, f` and Gram `[[0,1],[1,0]]`.
//! * `E8neg` is the negated Cartan matrix of E8 with the basis labelled
//!   `a1..a8`: the nodes `a1 - a2 - a3 - a4 - a5 - a6 - a7` form a chain and
//!   `a8` is attached to `a5`. Diagonal entries are `-2`, adjacent nodes pair
//!   to `+1`.
//! * `K3` is the direct sum `E8neg ⊕ E8neg ⊕ U ⊕ U ⊕ U` in exactly that block
//!   order: coordinates `0..8` are the first E8 block, `8..16` the second,
//!   and `(16,17), (18,19), (20,21)` are `(e1,f1), (e2,f2), (e3,f3)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumerate;
use crate::matrix::{content, dot, primitive_integer_vector, IntMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("unknown standard lattice {0:?} (expected U, E8neg or K3)")]
    UnknownName(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("gram matrix is not square and symmetric")]
    NotSymmetric,
    #[error("lattice is flagged even but has an odd diagonal entry")]
    OddDiagonal,
    #[error("gram matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("the form has no positive direction")]
    NoPositiveDirection,
    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,
    #[error("basis columns are linearly dependent")]
    DependentBasis,
}

/// The three named lattices of the toolkit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardLattice {
    U,
    E8Neg,
    K3,
}

impl FromStr for StandardLattice {
    type Err = LatticeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "U" => Ok(StandardLattice::U),
            "E8neg" => Ok(StandardLattice::E8Neg),
            "K3" => Ok(StandardLattice::K3),
            other => Err(LatticeError::UnknownName(other.to_string())),
        }
    }
}

/// Edges of the E8 Dynkin diagram on nodes `a1..a8` (0-based).
const E8_EDGES: [(usize, usize); 7] = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)];

/// Rank of the K3 lattice.
pub const K3_RANK: usize = 22;

/// A free Z-module of finite rank with a symmetric integer Gram matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Lattice {
    gram: IntMatrix,
}

impl Lattice {
    pub fn new(gram: IntMatrix) -> Result<Self, LatticeError> {
        if !gram.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        Ok(Lattice { gram })
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self, LatticeError> {
        if rows.iter().any(|r| r.len() != rows.len()) {
            return Err(LatticeError::NotSymmetric);
        }
        Lattice::new(IntMatrix::from_rows(rows))
    }

    pub fn standard(name: StandardLattice) -> Lattice {
        match name {
            StandardLattice::U => Lattice { gram: IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]) },
            StandardLattice::E8Neg => {
                let mut g = IntMatrix::zeros(8, 8);
                for i in 0..8 {
                    g[(i, i)] = BigInt::from(-2);
                }
                for &(i, j) in &E8_EDGES {
                    g[(i, j)] = BigInt::one();
                    g[(j, i)] = BigInt::one();
                }
                Lattice { gram: g }
            }
            StandardLattice::K3 => {
                let e8 = Lattice::standard(StandardLattice::E8Neg);
                let u = Lattice::standard(StandardLattice::U);
                e8.direct_sum(&e8).direct_sum(&u).direct_sum(&u).direct_sum(&u)
            }
        }
    }

    /// The K3 lattice `2(−E8) ⊕ 3U` in the fixed block order.
    pub fn k3() -> Lattice {
        Lattice::standard(StandardLattice::K3)
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| !self.gram[(i, i)].bit(0))
    }

    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        Lattice { gram: self.gram.block_diag(&other.gram) }
    }

    pub fn inner(&self, u: &LatticeVector, v: &LatticeVector) -> Result<BigInt, LatticeError> {
        self.check_dim(u)?;
        self.check_dim(v)?;
        Ok(self.inner_raw(&u.0, &v.0))
    }

    pub fn norm(&self, v: &LatticeVector) -> Result<BigInt, LatticeError> {
        self.inner(v, v)
    }

    pub(crate) fn inner_raw(&self, u: &[BigInt], v: &[BigInt]) -> BigInt {
        dot(u, &self.gram.mul_vec(v))
    }

    /// `G · v`, the functional `u ↦ (u, v)` as a row of coefficients.
    pub fn dual_row(&self, v: &LatticeVector) -> Result<Vec<BigInt>, LatticeError> {
        self.check_dim(v)?;
        Ok(self.gram.mul_vec(&v.0))
    }

    pub fn check_dim(&self, v: &LatticeVector) -> Result<(), LatticeError> {
        if v.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch { expected: self.rank(), found: v.len() });
        }
        Ok(())
    }

    pub fn determinant(&self) -> BigInt {
        self.gram.determinant()
    }

    pub fn signature(&self) -> Signature {
        diagonalize(&self.gram).signature()
    }

    pub fn diagonalization(&self) -> Diagonalization {
        diagonalize(&self.gram)
    }

    /// A deterministic primitive vector of positive norm: the first positive
    /// pivot of the congruence diagonalization with denominators cleared.
    pub fn positive_vector(&self) -> Result<LatticeVector, LatticeError> {
        let diag = self.diagonalization();
        let (vec, _) = diag
            .pivots
            .iter()
            .find(|(_, n)| n.is_positive())
            .ok_or(LatticeError::NoPositiveDirection)?;
        let v = LatticeVector(primitive_integer_vector(vec));
        debug_assert!(self.inner_raw(&v.0, &v.0).is_positive());
        Ok(v)
    }

    /// Nonzero vectors of norm at most `bound` up to sign, for a positive
    /// definite lattice. See [`enumerate::short_vectors`].
    pub fn short_vectors(&self, bound: &BigInt) -> Result<Vec<LatticeVector>, LatticeError> {
        enumerate::short_vectors(&self.gram, bound)
    }

    pub fn is_primitive(&self, v: &LatticeVector) -> Result<bool, LatticeError> {
        self.check_dim(v)?;
        v.is_primitive()
    }

    pub fn standard_basis_vector(&self, i: usize) -> LatticeVector {
        let mut v = vec![BigInt::zero(); self.rank()];
        v[i] = BigInt::one();
        LatticeVector(v)
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice").field("rank", &self.rank()).field("gram", &self.gram).finish()
    }
}

#[derive(Serialize, Deserialize)]
struct LatticeJson {
    rank: usize,
    #[serde(with = "crate::json::int_mat")]
    gram: Vec<Vec<BigInt>>,
    even: bool,
}

impl Serialize for Lattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        LatticeJson { rank: self.rank(), gram: self.gram.to_rows(), even: self.is_even() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Lattice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = LatticeJson::deserialize(d)?;
        if j.gram.len() != j.rank || j.gram.iter().any(|r| r.len() != j.rank) {
            return Err(D::Error::custom(format!("gram must be {0}x{0}", j.rank)));
        }
        let lattice = Lattice::new(IntMatrix::from_rows(&j.gram)).map_err(D::Error::custom)?;
        if j.even && !lattice.is_even() {
            return Err(D::Error::custom(LatticeError::OddDiagonal));
        }
        Ok(lattice)
    }
}

/// Integer coordinate vector in a lattice basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(#[serde(with = "crate::json::int_vec")] pub Vec<BigInt>);

impl LatticeVector {
    pub fn new<T: Into<BigInt>>(coords: impl IntoIterator<Item = T>) -> Self {
        LatticeVector(coords.into_iter().map(Into::into).collect())
    }

    pub fn zero(len: usize) -> Self {
        LatticeVector(vec![BigInt::zero(); len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn content(&self) -> BigInt {
        content(&self.0)
    }

    /// True iff the gcd of the coordinates is 1.
    pub fn is_primitive(&self) -> Result<bool, LatticeError> {
        if self.is_zero() {
            return Err(LatticeError::ZeroVector);
        }
        Ok(self.content().is_one())
    }

    pub fn scaled(&self, c: &BigInt) -> LatticeVector {
        LatticeVector(self.0.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, other: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter().map(|x| x.to_string())).finish()
    }
}

/// Inertia counts `(positive, negative, zero)` of a symmetric form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Signature {
    pub fn new(positive: usize, negative: usize, zero: usize) -> Self {
        Signature { positive, negative, zero }
    }

    pub fn rank(&self) -> usize {
        self.positive + self.negative + self.zero
    }

    pub fn is_positive_definite(&self) -> bool {
        self.negative == 0 && self.zero == 0
    }

    pub fn is_negative_definite(&self) -> bool {
        self.positive == 0 && self.zero == 0
    }
}

impl std::ops::Add for Signature {
    type Output = Signature;
    fn add(self, o: Signature) -> Signature {
        Signature::new(self.positive + o.positive, self.negative + o.negative, self.zero + o.zero)
    }
}

/// Result of an exact congruence diagonalization: mutually orthogonal
/// rational pivot vectors with their nonzero norms, plus the dimension of the
/// radical.
#[derive(Debug, Clone)]
pub struct Diagonalization {
    pub pivots: Vec<(Vec<BigRational>, BigRational)>,
    pub zero: usize,
}

impl Diagonalization {
    pub fn signature(&self) -> Signature {
        let positive = self.pivots.iter().filter(|(_, n)| n.is_positive()).count();
        Signature::new(positive, self.pivots.len() - positive, self.zero)
    }

    pub fn positive_pivots(&self) -> impl Iterator<Item = &Vec<BigRational>> {
        self.pivots.iter().filter(|(_, n)| n.is_positive()).map(|(v, _)| v)
    }
}

/// Symmetric congruence diagonalization over Q.
///
/// Pivot rule: the first remaining vector of nonzero norm; if every remaining
/// vector is isotropic, the first pair `(u, w)` with `(u, w) ≠ 0` is replaced
/// by `u + w`, whose norm is `2(u, w) ≠ 0`. When neither exists the remaining
/// vectors span the radical.
pub fn diagonalize(gram: &IntMatrix) -> Diagonalization {
    let n = gram.rows();
    let mut remaining: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    // pairings among the remaining vectors, kept up to date by Schur complements
    let mut m: Vec<Vec<BigRational>> =
        (0..n).map(|i| (0..n).map(|j| BigRational::from_integer(gram[(i, j)].clone())).collect()).collect();
    let mut pivots = Vec::new();
    loop {
        if remaining.is_empty() {
            return Diagonalization { pivots, zero: 0 };
        }
        let r = remaining.len();
        let idx = match (0..r).find(|&i| !m[i][i].is_zero()) {
            Some(i) => i,
            None => {
                let found = (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).find(|&(i, j)| !m[i][j].is_zero());
                match found {
                    Some((i, j)) => {
                        let w = remaining[j].clone();
                        for (a, b) in remaining[i].iter_mut().zip(&w) {
                            *a += b;
                        }
                        let row_j = m[j].clone();
                        for (a, b) in m[i].iter_mut().zip(&row_j) {
                            *a += b;
                        }
                        for row in m.iter_mut() {
                            let add = row[j].clone();
                            row[i] += add;
                        }
                        i
                    }
                    None => return Diagonalization { zero: r, pivots },
                }
            }
        };
        let p = remaining.remove(idx);
        let mut prow = m.remove(idx);
        for row in m.iter_mut() {
            row.remove(idx);
        }
        let np = prow.remove(idx);
        for (k, u) in remaining.iter_mut().enumerate() {
            if prow[k].is_zero() {
                continue;
            }
            let c = &prow[k] / &np;
            for (a, b) in u.iter_mut().zip(&p) {
                *a -= &c * b;
            }
            for (l, x) in m[k].iter_mut().enumerate() {
                if !prow[l].is_zero() {
                    *x -= &c * &prow[l];
                }
            }
        }
        pivots.push((p, np));
    }
}

/// A sublattice of an ambient lattice, given by basis columns.
#[derive(Clone, PartialEq, Eq)]
pub struct Sublattice {
    ambient: Lattice,
    basis: IntMatrix,
    gram: IntMatrix,
}

impl Sublattice {
    /// `basis` is `ambient.rank() × r` with independent columns.
    pub fn new(ambient: Lattice, basis: IntMatrix) -> Result<Self, LatticeError> {
        if basis.rows() != ambient.rank() {
            return Err(LatticeError::DimensionMismatch { expected: ambient.rank(), found: basis.rows() });
        }
        if basis.rank() != basis.cols() {
            return Err(LatticeError::DependentBasis);
        }
        let gram = ambient.gram().congruence(&basis);
        Ok(Sublattice { ambient, basis, gram })
    }

    /// The whole lattice as a sublattice of itself.
    pub fn full(ambient: Lattice) -> Self {
        let n = ambient.rank();
        Sublattice::new(ambient, IntMatrix::identity(n)).expect("identity basis")
    }

    /// Sublattice spanned by the given vectors (which must be independent).
    pub fn spanned_by(ambient: Lattice, vectors: &[LatticeVector]) -> Result<Self, LatticeError> {
        for v in vectors {
            ambient.check_dim(v)?;
        }
        let cols: Vec<Vec<BigInt>> = vectors.iter().map(|v| v.0.clone()).collect();
        let n = ambient.rank();
        Sublattice::new(ambient, IntMatrix::from_columns(n, &cols))
    }

    /// Integer kernel `{v : m · v = 0}` as a (saturated) sublattice of `ambient`.
    pub fn kernel_of(ambient: Lattice, m: &IntMatrix) -> Result<Self, LatticeError> {
        if m.cols() != ambient.rank() {
            return Err(LatticeError::DimensionMismatch { expected: ambient.rank(), found: m.cols() });
        }
        let basis = m.integer_kernel();
        Sublattice::new(ambient, basis)
    }

    pub fn ambient(&self) -> &Lattice {
        &self.ambient
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis_vectors(&self) -> Vec<LatticeVector> {
        self.basis.columns().into_iter().map(LatticeVector).collect()
    }

    /// The sublattice with its induced form, forgetting the embedding.
    pub fn as_lattice(&self) -> Lattice {
        Lattice { gram: self.gram.clone() }
    }

    /// Ambient coordinates of the vector with coefficients `c` in this basis.
    pub fn embed(&self, c: &[BigInt]) -> LatticeVector {
        LatticeVector(self.basis.mul_vec(c))
    }

    /// Membership in the Q-span restricted to integer vectors: true iff `v`
    /// lies in the saturation of this sublattice.
    pub fn rational_span_contains(&self, v: &LatticeVector) -> bool {
        let mut cols = self.basis.columns();
        cols.push(v.0.clone());
        IntMatrix::from_columns(self.ambient.rank(), &cols).rank() == self.rank()
    }

    /// Primitive closure: the ambient lattice intersected with the rational
    /// span of this sublattice.
    pub fn saturate(&self) -> Sublattice {
        let n = self.ambient.rank();
        if self.rank() == 0 {
            return self.clone();
        }
        // vectors orthogonal (coordinate-wise) to the span, then their annihilator
        let orth = self.basis.transpose().integer_kernel();
        let basis = if orth.cols() == 0 {
            IntMatrix::identity(n)
        } else {
            orth.transpose().integer_kernel()
        };
        Sublattice::new(self.ambient.clone(), basis).expect("kernel basis is independent")
    }

    /// Index of this sublattice in its saturation (1 iff saturated).
    pub fn saturation_index(&self) -> BigInt {
        let sat = self.saturate();
        if self.rank() == 0 {
            return BigInt::one();
        }
        // express own basis in terms of the saturated basis via Gram determinants
        let own = self.basis.transpose().mul(&self.basis).determinant();
        let theirs = sat.basis.transpose().mul(&sat.basis).determinant();
        let ratio = own / theirs;
        num_integer::Roots::sqrt(&ratio)
    }

    pub fn is_saturated(&self) -> bool {
        self.saturation_index().is_one()
    }

    /// True iff both span the same Q-subspace and contain each other.
    pub fn same_span(&self, other: &Sublattice) -> bool {
        if self.rank() != other.rank() {
            return false;
        }
        let mut cols = self.basis.columns();
        cols.extend(other.basis.columns());
        let joint = IntMatrix::from_columns(self.ambient.rank(), &cols);
        if joint.rank() != self.rank() {
            return false;
        }
        let gd = |m: &IntMatrix| m.transpose().mul(m).determinant();
        gd(&self.basis) == gd(&other.basis)
    }
}

impl fmt::Debug for Sublattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Sublattice").field("basis", &self.basis.columns()).field("gram", &self.gram).finish()
    }
}

#[derive(Serialize, Deserialize)]
struct SublatticeJson {
    ambient: Lattice,
    #[serde(with = "crate::json::int_mat")]
    basis: Vec<Vec<BigInt>>,
}

impl Serialize for Sublattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SublatticeJson { ambient: self.ambient.clone(), basis: self.basis.columns() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Sublattice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = SublatticeJson::deserialize(d)?;
        let n = j.ambient.rank();
        if j.basis.iter().any(|c| c.len() != n) {
            return Err(D::Error::custom(format!("basis columns must have length {n}")));
        }
        Sublattice::new(j.ambient, IntMatrix::from_columns(n, &j.basis)).map_err(D::Error::custom)
    }
}

/// Basis of `{v ∈ Zⁿ : m · v = 0}` as columns. Saturated by construction.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    m.integer_kernel()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rational_form(gram: &IntMatrix, u: &[BigRational], v: &[BigRational]) -> BigRational {
        let n = gram.rows();
        let mut acc = BigRational::zero();
        for i in 0..n {
            for j in 0..n {
                acc += &u[i] * BigRational::from_integer(gram[(i, j)].clone()) * &v[j];
            }
        }
        acc
    }

    fn lat(rows: &[Vec<i64>]) -> Lattice {
        Lattice::from_rows(rows).unwrap()
    }

    fn vecs(v: &[i64]) -> LatticeVector {
        LatticeVector::new(v.iter().copied())
    }

    #[test]
    fn standard_lattices() {
        let u = Lattice::standard(StandardLattice::U);
        assert_eq!(u.gram().to_rows(), IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).to_rows());
        let k3 = Lattice::k3();
        assert_eq!(k3.rank(), 22);
        assert_eq!(k3.signature(), Signature::new(3, 19, 0));
        assert!(k3.is_even());
        assert!("E9".parse::<StandardLattice>().is_err());
    }

    #[test]
    fn determinants() {
        assert_eq!(Lattice::standard(StandardLattice::U).determinant(), BigInt::from(-1));
        assert_eq!(Lattice::standard(StandardLattice::E8Neg).determinant(), BigInt::from(1));
        assert_eq!(Lattice::k3().determinant(), BigInt::from(-1));
        let u = Lattice::standard(StandardLattice::U);
        assert_eq!(u.direct_sum(&u).determinant(), BigInt::from(1));
    }

    #[test]
    fn e8_signature_and_type() {
        let e8 = Lattice::standard(StandardLattice::E8Neg);
        assert_eq!(e8.signature(), Signature::new(0, 8, 0));
        assert!(e8.is_even());
    }

    #[test]
    fn inner_products_in_u() {
        let u = Lattice::standard(StandardLattice::U);
        let e = vecs(&[1, 0]);
        let f = vecs(&[0, 1]);
        assert_eq!(u.inner(&e, &f).unwrap(), BigInt::from(1));
        assert_eq!(u.norm(&vecs(&[1, 1])).unwrap(), BigInt::from(2));
        assert_eq!(u.norm(&vecs(&[1, -2])).unwrap(), BigInt::from(-4));
        assert!(matches!(u.inner(&e, &vecs(&[1, 0, 0])), Err(LatticeError::DimensionMismatch { .. })));
    }

    #[test]
    fn signatures() {
        assert_eq!(lat(&[vec![2, 0], vec![0, -2]]).signature(), Signature::new(1, 1, 0));
        assert_eq!(Lattice::standard(StandardLattice::U).signature(), Signature::new(1, 1, 0));
        assert_eq!(lat(&[vec![0, 0], vec![0, 0]]).signature(), Signature::new(0, 0, 2));
        assert_eq!(lat(&[vec![1, 1], vec![1, 1]]).signature(), Signature::new(1, 0, 1));
    }

    #[test]
    fn positive_vectors() {
        let u = Lattice::standard(StandardLattice::U);
        let v = u.positive_vector().unwrap();
        assert_eq!(v, vecs(&[1, 1]));
        assert_eq!(u.norm(&v).unwrap(), BigInt::from(2));
        assert_eq!(lat(&[vec![2, 0], vec![0, -2]]).positive_vector().unwrap(), vecs(&[1, 0]));
        assert_eq!(
            Lattice::standard(StandardLattice::E8Neg).positive_vector().unwrap_err(),
            LatticeError::NoPositiveDirection
        );
    }

    #[test]
    fn primitivity() {
        let k3 = Lattice::k3();
        let mut c = vec![0i64; 22];
        c[0] = 1;
        c[1] = 2;
        assert!(k3.is_primitive(&vecs(&c)).unwrap());
        c[0] = 2;
        c[1] = 4;
        assert!(!k3.is_primitive(&vecs(&c)).unwrap());
        assert!(vecs(&[1, -2]).is_primitive().unwrap());
        assert_eq!(LatticeVector::zero(3).is_primitive(), Err(LatticeError::ZeroVector));
    }

    #[test]
    fn saturation_examples() {
        let u = Lattice::standard(StandardLattice::U);
        let s = Sublattice::spanned_by(u.clone(), &[vecs(&[2, 0])]).unwrap();
        let sat = s.saturate();
        assert_eq!(sat.basis_vectors(), vec![vecs(&[1, 0])]);
        assert_eq!(s.saturation_index(), BigInt::from(2));
        let s = Sublattice::spanned_by(u.clone(), &[vecs(&[2, 0]), vecs(&[0, 2])]).unwrap();
        assert!(s.saturate().same_span(&Sublattice::full(u.clone())));
        assert_eq!(s.saturation_index(), BigInt::from(4));
        let full = Sublattice::full(u);
        assert!(full.saturate().same_span(&full));
    }

    #[test]
    fn json_round_trip() {
        let k3 = Lattice::k3();
        let s = serde_json::to_string(&k3).unwrap();
        assert!(s.starts_with("{\"rank\":22,"));
        assert_eq!(serde_json::from_str::<Lattice>(&s).unwrap(), k3);
        let bad = r#"{"rank":1,"gram":[[1]],"even":true}"#;
        assert!(serde_json::from_str::<Lattice>(bad).is_err());
        let sub = Sublattice::spanned_by(Lattice::standard(StandardLattice::U), &[vecs(&[1, -2])]).unwrap();
        let s = serde_json::to_string(&sub).unwrap();
        assert_eq!(s, r#"{"ambient":{"rank":2,"gram":[[0,1],[1,0]],"even":true},"basis":[[1,-2]]}"#);
        assert_eq!(serde_json::from_str::<Sublattice>(&s).unwrap(), sub);
    }

    fn small_symmetric(max_rank: usize) -> impl Strategy<Value = IntMatrix> {
        (1..=max_rank).prop_flat_map(|n| {
            proptest::collection::vec(-8i64..=8, n * (n + 1) / 2).prop_map(move |entries| {
                let mut m = IntMatrix::zeros(n, n);
                let mut it = entries.into_iter();
                for i in 0..n {
                    for j in i..n {
                        let x = BigInt::from(it.next().unwrap());
                        m[(i, j)] = x.clone();
                        m[(j, i)] = x;
                    }
                }
                m
            })
        })
    }

    proptest! {
        #[test]
        fn signature_counts_and_direct_sums(a in small_symmetric(4), b in small_symmetric(4)) {
            let la = Lattice::new(a).unwrap();
            let lb = Lattice::new(b).unwrap();
            let sa = la.signature();
            let sb = lb.signature();
            prop_assert_eq!(sa.rank(), la.rank());
            prop_assert_eq!(la.direct_sum(&lb).signature(), sa + sb);
            // zero inertia is the corank, independently via the rational rank
            prop_assert_eq!(sa.zero, la.rank() - la.gram().rank());
        }

        #[test]
        fn diagonalization_pivots_are_orthogonal(a in small_symmetric(4)) {
            let d = diagonalize(&a);
            for (i, (u, nu)) in d.pivots.iter().enumerate() {
                prop_assert_eq!(&rational_form(&a, u, u), nu);
                for (w, _) in &d.pivots[i + 1..] {
                    prop_assert!(rational_form(&a, u, w).is_zero());
                }
            }
        }

        #[test]
        fn positive_vector_is_positive(a in small_symmetric(4)) {
            let l = Lattice::new(a).unwrap();
            match l.positive_vector() {
                Ok(v) => prop_assert!(l.norm(&v).unwrap().is_positive()),
                Err(e) => {
                    prop_assert_eq!(e, LatticeError::NoPositiveDirection);
                    prop_assert_eq!(l.signature().positive, 0);
                }
            }
        }

        #[test]
        fn kernel_is_saturated_and_saturate_idempotent(rows in proptest::collection::vec(proptest::collection::vec(-6i64..=6, 4), 1..3)) {
            let m = IntMatrix::from_rows(&rows);
            let k = m.integer_kernel();
            prop_assert_eq!(k.cols(), 4 - m.rank());
            prop_assert!(m.mul(&k).to_rows().iter().flatten().all(Zero::is_zero));
            let amb = Lattice::new(IntMatrix::identity(4)).unwrap();
            let s = Sublattice::new(amb, k).unwrap();
            prop_assert!(s.is_saturated());
            let once = s.saturate();
            prop_assert!(once.saturate().same_span(&once));
            prop_assert!(once.same_span(&s));
        }
    }
}
