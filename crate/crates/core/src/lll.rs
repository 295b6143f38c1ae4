//! All-integer LLL reduction with the classical parameter 3/4.
//!
//! This is the integral variant that carries the Gram–Schmidt data as the
//! integers `d_i = det(Gram(b_1..b_i))` and `λ_{ij} = d_j μ_{ij}`, so no
//! rational arithmetic is needed. The inner product is supplied by the caller,
//! which lets the same routine reduce bases under a Gram form (short-vector
//! preprocessing) and under the Euclidean norm (kernel bases, embedding
//! lattices).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::matrix::axpy;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LllError {
    #[error("basis vectors are linearly dependent (or the form is not positive definite)")]
    Dependent,
}

/// Result data kept after reduction: `d[0] = 1` and `d[i]` is the Gram
/// determinant of the first `i` reduced vectors.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub d: Vec<BigInt>,
}

impl Reduction {
    /// Squared Gram–Schmidt norms `‖b_i*‖² = d_{i+1}/d_i`.
    pub fn gram_schmidt_norms(&self) -> Vec<BigRational> {
        self.d
            .windows(2)
            .map(|w| BigRational::new(w[1].clone(), w[0].clone()))
            .collect()
    }
}

/// Reduces `basis` in place. `inner` must be a positive definite symmetric
/// bilinear form on the span.
pub fn lll_reduce<F>(basis: &mut [Vec<BigInt>], inner: F) -> Result<Reduction, LllError>
where
    F: Fn(&[BigInt], &[BigInt]) -> BigInt,
{
    let n = basis.len();
    // d[i] is Cohen's d_{i} with d[0] = 1; lambda[k][j] for j < k.
    let mut d = vec![BigInt::zero(); n + 1];
    d[0] = BigInt::one();
    if n == 0 {
        return Ok(Reduction { d });
    }
    let mut lambda = vec![vec![BigInt::zero(); n]; n];
    d[1] = inner(&basis[0], &basis[0]);
    if !d[1].is_positive() {
        return Err(LllError::Dependent);
    }
    let mut k = 1usize;
    let mut kmax = 0usize;
    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = inner(&basis[k], &basis[j]);
                for i in 0..j {
                    u = (&d[i + 1] * &u - &lambda[k][i] * &lambda[j][i]) / &d[i];
                }
                if j < k {
                    lambda[k][j] = u;
                } else {
                    if !u.is_positive() {
                        return Err(LllError::Dependent);
                    }
                    d[k + 1] = u;
                }
            }
        }
        reduce(basis, &mut lambda, &d, k, k - 1);
        let lhs = BigInt::from(4) * &d[k + 1] * &d[k - 1];
        let rhs = BigInt::from(3) * &d[k] * &d[k] - BigInt::from(4) * &lambda[k][k - 1] * &lambda[k][k - 1];
        if lhs < rhs {
            swap(basis, &mut lambda, &mut d, k, kmax);
            k = k.saturating_sub(1).max(1);
        } else {
            for l in (0..k - 1).rev() {
                reduce(basis, &mut lambda, &d, k, l);
            }
            k += 1;
        }
    }
    Ok(Reduction { d })
}

fn reduce(basis: &mut [Vec<BigInt>], lambda: &mut [Vec<BigInt>], d: &[BigInt], k: usize, l: usize) {
    let dl = &d[l + 1];
    if BigInt::from(2) * lambda[k][l].abs() <= *dl {
        return;
    }
    // nearest integer to λ/d_l
    let q = (BigInt::from(2) * &lambda[k][l] + dl).div_floor(&(BigInt::from(2) * dl));
    let (lo, hi) = basis.split_at_mut(k);
    axpy(&mut hi[0], &-&q, &lo[l]);
    lambda[k][l] -= &q * dl;
    for i in 0..l {
        let t = &q * &lambda[l][i];
        lambda[k][i] -= t;
    }
}

fn swap(basis: &mut [Vec<BigInt>], lambda: &mut [Vec<BigInt>], d: &mut [BigInt], k: usize, kmax: usize) {
    basis.swap(k, k - 1);
    for j in 0..k - 1 {
        let t = std::mem::take(&mut lambda[k][j]);
        lambda[k][j] = std::mem::replace(&mut lambda[k - 1][j], t);
    }
    let lam = lambda[k][k - 1].clone();
    let b = (&d[k - 1] * &d[k + 1] + &lam * &lam) / &d[k];
    for i in k + 1..=kmax {
        let t = lambda[i][k].clone();
        lambda[i][k] = (&d[k + 1] * &lambda[i][k - 1] - &lam * &t) / &d[k];
        lambda[i][k - 1] = (&b * &t + &lam * &lambda[i][k]) / &d[k + 1];
    }
    d[k] = b;
}
