//! Short-vector enumeration in positive definite integral forms: LLL
//! preprocessing followed by exact Fincke–Pohst depth-first search.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::lattice::{diagonalize, LatticeError, LatticeVector};
use crate::lll::lll_reduce;
use crate::matrix::{dot, normalize_sign, IntMatrix};

/// All nonzero integer vectors `v` with `vᵀ G v ≤ bound`, one of each pair
/// `±v` (the one whose first nonzero coordinate is positive), sorted
/// lexicographically.
pub fn short_vectors(gram: &IntMatrix, bound: &BigInt) -> Result<Vec<LatticeVector>, LatticeError> {
    if !gram.is_symmetric() {
        return Err(LatticeError::NotSymmetric);
    }
    let n = gram.rows();
    if !diagonalize(gram).signature().is_positive_definite() {
        return Err(LatticeError::NotPositiveDefinite);
    }
    if n == 0 || !bound.is_positive() {
        return Ok(Vec::new());
    }

    // reduced basis as columns of the transform T; G' = Tᵀ G T
    let mut basis: Vec<Vec<BigInt>> = IntMatrix::identity(n).columns();
    lll_reduce(&mut basis, |x, y| dot(x, &gram.mul_vec(y))).map_err(|_| LatticeError::NotPositiveDefinite)?;
    let t = IntMatrix::from_columns(n, &basis);
    let reduced = gram.congruence(&t);

    let mut out: Vec<LatticeVector> = enumerate_coefficients(&reduced, bound)
        .into_iter()
        .map(|c| {
            let mut v = t.mul_vec(&c);
            normalize_sign(&mut v);
            LatticeVector(v)
        })
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// `G = Σ_i q_ii (x_i + Σ_{j>i} q_ij x_j)²` over Q.
fn quadratic_decomposition(gram: &IntMatrix) -> (Vec<BigRational>, Vec<Vec<BigRational>>) {
    let n = gram.rows();
    let g = |i: usize, j: usize| BigRational::from_integer(gram[(i, j)].clone());
    let mut diag = vec![BigRational::zero(); n];
    // mu[i][j] for j > i
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        let mut d = g(i, i);
        for k in 0..i {
            d -= &mu[k][i] * &mu[k][i] * &diag[k];
        }
        diag[i] = d;
        for j in i + 1..n {
            let mut s = g(i, j);
            for k in 0..i {
                s -= &mu[k][i] * &mu[k][j] * &diag[k];
            }
            mu[i][j] = s / &diag[i];
        }
    }
    (diag, mu)
}

/// Every nonzero coefficient vector with norm ≤ bound in the given positive
/// definite gram, both signs included.
fn enumerate_coefficients(gram: &IntMatrix, bound: &BigInt) -> Vec<Vec<BigInt>> {
    let n = gram.rows();
    let (diag, mu) = quadratic_decomposition(gram);
    let bound = BigRational::from_integer(bound.clone());
    let mut results = Vec::new();
    let mut x = vec![BigInt::zero(); n];
    let mut budget = vec![BigRational::zero(); n + 1];
    budget[n] = bound;
    search(n, &diag, &mu, &mut x, &mut budget, &mut results);
    results.retain(|v: &Vec<BigInt>| v.iter().any(|c| !c.is_zero()));
    results
}

fn search(
    level: usize,
    diag: &[BigRational],
    mu: &[Vec<BigRational>],
    x: &mut Vec<BigInt>,
    budget: &mut Vec<BigRational>,
    out: &mut Vec<Vec<BigInt>>,
) {
    if level == 0 {
        out.push(x.clone());
        return;
    }
    let i = level - 1;
    let n = x.len();
    let mut center = BigRational::zero();
    for j in i + 1..n {
        if !x[j].is_zero() {
            center -= &mu[i][j] * BigRational::from_integer(x[j].clone());
        }
    }
    let remaining = budget[level].clone();
    // (x_i - c)² ≤ r / q_ii ; s is an integer upper bound for the square root
    let t = &remaining / &diag[i];
    let s = t.to_integer().sqrt() + BigInt::one();
    let lo = center.floor().to_integer() - &s;
    let hi = center.ceil().to_integer() + &s;
    let mut xi = lo;
    while xi <= hi {
        let diff = BigRational::from_integer(xi.clone()) - &center;
        let used = &diag[i] * &diff * &diff;
        if used <= remaining {
            x[i] = xi.clone();
            budget[i] = &remaining - used;
            search(i, diag, mu, x, budget, out);
        }
        xi = xi + 1;
    }
    x[i] = BigInt::zero();
}

/// Exact per-coordinate box radius for `{v : vᵀ G v ≤ bound}` when `G` is
/// positive definite: `|v_i| ≤ floor(sqrt(bound · (G⁻¹)_ii))`.
///
/// Computed from cofactors, independently of the enumeration above.
pub fn box_radius(gram: &IntMatrix, bound: &BigInt) -> Vec<BigInt> {
    let n = gram.rows();
    let det = gram.determinant();
    (0..n)
        .map(|i| {
            let minor = principal_minor_without(gram, i).determinant();
            // bound * minor / det, floored, then integer square root
            let q = (bound * &minor).div_floor(&det);
            if q.is_negative() {
                BigInt::zero()
            } else {
                q.sqrt()
            }
        })
        .collect()
}

fn principal_minor_without(gram: &IntMatrix, skip: usize) -> IntMatrix {
    let rows: Vec<Vec<BigInt>> = (0..gram.rows())
        .filter(|&i| i != skip)
        .map(|i| (0..gram.cols()).filter(|&j| j != skip).map(|j| gram[(i, j)].clone()).collect())
        .collect();
    IntMatrix::from_rows(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Lattice, StandardLattice};
    use proptest::prelude::*;

    fn brute_force(gram: &IntMatrix, bound: &BigInt) -> Vec<LatticeVector> {
        let n = gram.rows();
        let radius: Vec<i64> = box_radius(gram, bound).iter().map(|r| i64::try_from(r).unwrap()).collect();
        let total: i64 = radius.iter().map(|r| 2 * r + 1).product();
        let mut out = Vec::new();
        for mut idx in 0..total {
            let mut v = Vec::with_capacity(n);
            for r in &radius {
                let w = 2 * r + 1;
                v.push(BigInt::from(idx % w - r));
                idx /= w;
            }
            if v.iter().all(Zero::is_zero) || dot(&v, &gram.mul_vec(&v)) > *bound {
                continue;
            }
            let mut c = v.clone();
            normalize_sign(&mut c);
            if c == v {
                out.push(LatticeVector(v));
            }
        }
        out.sort();
        out
    }

    #[test]
    fn small_examples() {
        let g = IntMatrix::from_rows(&[vec![2]]);
        assert_eq!(short_vectors(&g, &BigInt::from(2)).unwrap(), vec![LatticeVector::new([1])]);
        let g = IntMatrix::from_rows(&[vec![4]]);
        assert!(short_vectors(&g, &BigInt::from(2)).unwrap().is_empty());
        let g = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(short_vectors(&g, &BigInt::from(2)).unwrap_err(), LatticeError::NotPositiveDefinite);
    }

    #[test]
    fn e8_roots() {
        let e8 = Lattice::standard(StandardLattice::E8Neg).gram().negated();
        let sv = short_vectors(&e8, &BigInt::from(2)).unwrap();
        assert_eq!(sv.len(), 120);
        for v in &sv {
            assert_eq!(dot(&v.0, &e8.mul_vec(&v.0)), BigInt::from(2));
        }
        // independent count: roots of E8 in the even coordinate model
        // {x ∈ Z⁸ ∪ (Z+½)⁸ : Σx ∈ 2Z}, scaled by 2 to stay integral
        let mut roots = 0;
        for idx in 0..5i64.pow(8) {
            let y: Vec<i64> = (0..8).map(|k| (idx / 5i64.pow(k)) % 5 - 2).collect();
            let all_even = y.iter().all(|c| c % 2 == 0);
            let all_odd = y.iter().all(|c| c % 2 != 0);
            let sum: i64 = y.iter().sum();
            let norm: i64 = y.iter().map(|c| c * c).sum();
            if (all_even || all_odd) && sum % 4 == 0 && norm == 8 {
                roots += 1;
            }
        }
        assert_eq!(roots, 240);
        assert_eq!(2 * sv.len(), roots);
    }

    #[test]
    fn small_lattices_match_box_enumeration() {
        let a2 = IntMatrix::from_rows(&[vec![2, -1], vec![-1, 2]]);
        let sv = short_vectors(&a2, &BigInt::from(2)).unwrap();
        assert_eq!(sv.len(), 3);
        assert_eq!(sv, brute_force(&a2, &BigInt::from(2)));
        let d4 = IntMatrix::from_rows(&[vec![2, -1, 0, 0], vec![-1, 2, -1, -1], vec![0, -1, 2, 0], vec![0, -1, 0, 2]]);
        let sv = short_vectors(&d4, &BigInt::from(2)).unwrap();
        assert_eq!(sv.len(), 12);
        assert_eq!(sv, brute_force(&d4, &BigInt::from(2)));
    }

    #[test]
    fn box_radius_is_tight_on_diagonal() {
        let g = IntMatrix::from_rows(&[vec![2, 0], vec![0, 8]]);
        assert_eq!(box_radius(&g, &BigInt::from(8)), vec![BigInt::from(2), BigInt::from(1)]);
    }

    fn random_posdef() -> impl Strategy<Value = IntMatrix> {
        // Lᵀ L + I style construction keeps entries small and the form definite
        (1usize..=4).prop_flat_map(|n| {
            proptest::collection::vec(-2i64..=2, n * n).prop_map(move |e| {
                let l = IntMatrix::from_rows(&e.chunks(n).map(|c| c.to_vec()).collect::<Vec<_>>());
                let mut g = l.transpose().mul(&l);
                for i in 0..n {
                    g[(i, i)] += BigInt::one();
                }
                g
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn agrees_with_box_enumeration(g in random_posdef(), bound in 1i64..=12) {
            let b = BigInt::from(bound);
            let fast = short_vectors(&g, &b).unwrap();
            prop_assert_eq!(&fast, &brute_force(&g, &b));
        }
    }
}
