//! CM-type complex tori `C^g / Π(Z^{2g})` with period matrix
//! `Π_{jk} = α_j^k`, where `α_1, …, α_g` are the roots of an integer
//! polynomial `f` of degree `2g` in the upper half plane, and a
//! height-bounded certificate that the torus carries no Néron–Severi class.
//!
//! An integral alternating form `E` on `Z^{2g}` is of type (1,1) exactly when
//! it vanishes on `ker Π ⊗ C`. Since column `k` of `Π` evaluates `x^k` at the
//! upper roots, `ker Π` is spanned by the coefficient vectors of
//! `x^i h(x)` for `i < g`, where `h = ∏ (x − α_j)`. Writing `K` for that
//! `2g × g` matrix, the condition is the vanishing of the strictly upper
//! entries of `Kᵀ E K`: `g(g−1)` real linear equations in the `g(2g−1)`
//! entries of `E`.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ball::{eval_int_poly, poly_mul, CBall, RBall};
use crate::lll::lll_reduce;
use crate::matrix::dot;
use crate::poly::{Poly, Sturm};

pub const DEFAULT_HEIGHT_BOUND: u64 = 1000;
pub const DEFAULT_PRECISION_BITS: u32 = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TorusError {
    #[error("polynomial degree must be even and at least 2, got {0}")]
    Degree(usize),
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("polynomial has {0} real roots")]
    RealRoots(usize),
    #[error("precision must be at least 64 bits, got {0}")]
    Precision(u32),
    #[error("root certification failed at {0} bits")]
    Certification(u32),
    #[error("genus must be at least 1, got {0}")]
    Genus(i64),
    #[error("matrix must be antisymmetric of size {0}")]
    NotAntisymmetric(usize),
}

/// A degree-`2g` integer polynomial without real roots, and a working
/// precision for its root enclosures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmTorusSpec {
    #[serde(with = "crate::json::int_vec")]
    pub f: Vec<BigInt>,
    pub precision_bits: u32,
}

impl CmTorusSpec {
    pub fn new(f: Vec<BigInt>, precision_bits: u32) -> Result<Self, TorusError> {
        let spec = CmTorusSpec { f, precision_bits };
        spec.validate()?;
        Ok(spec)
    }

    /// `x⁶ + x + 1` at the default precision.
    pub fn example() -> Self {
        let f = [1, 1, 0, 0, 0, 0, 1].iter().map(|&c| BigInt::from(c)).collect();
        CmTorusSpec { f, precision_bits: DEFAULT_PRECISION_BITS }
    }

    pub fn validate(&self) -> Result<(), TorusError> {
        let p = Poly::from_ints(&self.f);
        let deg = p.degree().unwrap_or(0);
        if deg < 2 || deg % 2 != 0 || self.f.last().is_none_or(Zero::is_zero) {
            return Err(TorusError::Degree(deg));
        }
        if !p.is_squarefree() {
            return Err(TorusError::NotSquarefree);
        }
        let real = Sturm::new(&p).count_real();
        if real > 0 {
            return Err(TorusError::RealRoots(real));
        }
        if self.precision_bits < 64 {
            return Err(TorusError::Precision(self.precision_bits));
        }
        Ok(())
    }

    pub fn genus(&self) -> usize {
        (self.f.len() - 1) / 2
    }
}

/// Certified enclosures of the upper roots and of the `g × 2g` matrix of
/// their powers.
#[derive(Debug, Clone)]
pub struct PeriodMatrix {
    pub g: usize,
    pub precision: u32,
    /// `α_1, …, α_g`, ordered by real part and then imaginary part.
    pub roots: Vec<CBall>,
    /// `entries[j][k] ⊇ α_j^k`.
    pub entries: Vec<Vec<CBall>>,
    /// Coefficients of `h(x) = ∏ (x − α_j)`, ascending.
    pub h: Vec<CBall>,
}

/// Encloses all roots of `f`, keeps the upper ones and forms their powers.
pub fn build_example_torus(spec: &CmTorusSpec) -> Result<PeriodMatrix, TorusError> {
    spec.validate()?;
    let prec = spec.precision_bits;
    let all = certified_roots(&spec.f, prec)?;
    let mut upper: Vec<CBall> = all.into_iter().filter(|z| z.im_lower().is_positive()).collect();
    let g = spec.genus();
    if upper.len() != g {
        return Err(TorusError::Certification(prec));
    }
    upper.sort_by(|a, b| a.re.cmp(&b.re).then_with(|| a.im.cmp(&b.im)));
    let entries = upper
        .iter()
        .map(|a| {
            let mut row = vec![CBall::from_int(&BigInt::one(), prec)];
            for k in 1..2 * g {
                row.push(row[k - 1].mul(a));
            }
            row
        })
        .collect();
    let mut h = vec![CBall::from_int(&BigInt::one(), prec)];
    for a in &upper {
        h = poly_mul(&h, &[a.neg(), CBall::from_int(&BigInt::one(), prec)]);
    }
    Ok(PeriodMatrix { g, precision: prec, roots: upper, entries, h })
}

/// Krawczyk-certified, pairwise disjoint disks around every root of `f`.
fn certified_roots(f: &[BigInt], prec: u32) -> Result<Vec<CBall>, TorusError> {
    let fail = TorusError::Certification(prec);
    let n = f.len() - 1;
    let lead = f[n].to_f64().ok_or(fail.clone())?;
    let mut companion = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        companion[(i, n - 1)] = -f[i].to_f64().ok_or(fail.clone())? / lead;
    }
    let eig = companion.complex_eigenvalues();
    let df: Vec<BigInt> = (1..=n).map(|k| &f[k] * BigInt::from(k)).collect();

    let mut roots: Vec<CBall> = Vec::with_capacity(n);
    for lambda in eig.iter() {
        let mut z = CBall::from_f64(lambda.re, lambda.im, prec).center();
        // Newton in fixed point; quadratic convergence from double precision
        for _ in 0..(2 * prec.ilog2() + 8) {
            let step = eval_int_poly(f, &z).center().approx_div(&eval_int_poly(&df, &z).center());
            z = z.sub(&step).center();
            if step.center_mag() <= BigInt::from(2) {
                break;
            }
        }
        roots.push(krawczyk(f, &df, &z).ok_or(fail.clone())?);
    }
    for i in 0..n {
        for j in i + 1..n {
            if !roots[i].disjoint(&roots[j]) {
                return Err(fail);
            }
        }
    }
    Ok(roots)
}

/// A disk around `z` proven to contain exactly one root of `f`, or `None`.
fn krawczyk(f: &[BigInt], df: &[BigInt], z: &CBall) -> Option<CBall> {
    let prec = z.prec;
    let y = eval_int_poly(df, z).approx_recip();
    let fz = eval_int_poly(f, z);
    let one = CBall::from_int(&BigInt::one(), prec);
    let mut r = BigInt::one() << 16u32;
    let cap = BigInt::one() << (prec / 2);
    while r <= cap {
        let disk = z.with_radius(r.clone());
        let slope = one.sub(&y.mul(&eval_int_poly(df, &disk)));
        let k = z.sub(&y.mul(&fz)).add(&slope.mul(&CBall::zero(prec).with_radius(r.clone())));
        if disk.strictly_contains(&k) {
            return Some(k);
        }
        r <<= 4u32;
    }
    None
}

impl PeriodMatrix {
    /// `K_{k,i} = h_{k−i}`: columns span `ker Π`.
    pub fn kernel_matrix(&self) -> Vec<Vec<CBall>> {
        let g = self.g;
        let zero = CBall::zero(self.precision);
        (0..2 * g)
            .map(|k| (0..g).map(|i| if k >= i && k - i <= g { self.h[k - i].clone() } else { zero.clone() }).collect())
            .collect()
    }

    /// `Aᵀ E B` for ball matrices `A, B` with
    /// `2g` rows and an integer `2g × 2g` matrix `E`.
    fn sandwich(&self, a: &[Vec<CBall>], e: &[Vec<BigInt>], b: &[Vec<CBall>]) -> Vec<Vec<CBall>> {
        let n = 2 * self.g;
        let (ca, cb) = (a[0].len(), b[0].len());
        let zero = CBall::zero(self.precision);
        let mut out = vec![vec![zero.clone(); cb]; ca];
        for s in 0..ca {
            for t in 0..cb {
                let mut acc = zero.clone();
                for p in 0..n {
                    for q in 0..n {
                        if !e[p][q].is_zero() {
                            acc = acc.add(&a[p][s].mul(&b[q][t]).scale_int(&e[p][q]));
                        }
                    }
                }
                out[s][t] = acc;
            }
        }
        out
    }

    /// `Π E Πᵀ` as a `g × g` ball matrix.
    pub fn pi_e_pit(&self, e: &[Vec<BigInt>]) -> Vec<Vec<CBall>> {
        let pit: Vec<Vec<CBall>> = (0..2 * self.g).map(|k| self.entries.iter().map(|row| row[k].clone()).collect()).collect();
        self.sandwich(&pit, e, &pit)
    }

    /// `Kᵀ E K`; `E` is of type (1,1) iff this vanishes.
    pub fn kernel_form(&self, e: &[Vec<BigInt>]) -> Vec<Vec<CBall>> {
        let k = self.kernel_matrix();
        self.sandwich(&k, e, &k)
    }

    /// Real constraint rows on the `g(2g−1)` upper-triangular entries of `E`:
    /// real then imaginary parts of `(Kᵀ E K)_{st}` for `s < t`.
    pub fn constraint_matrix(&self) -> Vec<Vec<RBall>> {
        let g = self.g;
        let k = self.kernel_matrix();
        let pairs = upper_pairs(2 * g);
        let mut rows = Vec::new();
        for s in 0..g {
            for t in s + 1..g {
                let coeffs: Vec<CBall> =
                    pairs.iter().map(|&(a, b)| k[a][s].mul(&k[b][t]).sub(&k[b][s].mul(&k[a][t]))).collect();
                rows.push(coeffs.iter().map(CBall::re_part).collect());
                rows.push(coeffs.iter().map(CBall::im_part).collect());
            }
        }
        rows
    }
}

/// `(unknowns, real constraints) = (g(2g−1), g(g−1))`.
pub fn constraint_counts(g: i64) -> Result<(i64, i64), TorusError> {
    if g < 1 {
        return Err(TorusError::Genus(g));
    }
    Ok((g * (2 * g - 1), g * (g - 1)))
}

fn upper_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

/// Antisymmetric matrix with the given strictly upper entries.
pub fn antisymmetric_from_upper(n: usize, e: &[BigInt]) -> Vec<Vec<BigInt>> {
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for (&(a, b), v) in upper_pairs(n).iter().zip(e) {
        m[a][b] = v.clone();
        m[b][a] = -v;
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NsStatus {
    Excluded,
    Candidate,
    Inconclusive,
}

/// Outcome of the height-bounded search for an integral (1,1) form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NsCertificate {
    pub status: NsStatus,
    #[serde(rename = "H")]
    pub height_bound: u64,
    pub precision: u32,
    /// Antisymmetric `2g × 2g` matrix; numerically consistent with (1,1)
    /// but not proven.
    #[serde(with = "crate::json::int_mat_opt")]
    pub candidate: Option<Vec<Vec<BigInt>>>,
    /// `‖b₁‖²` of the reduced embedding lattice.
    #[serde(with = "crate::json::rational")]
    pub lll_b1_norm: BigRational,
    /// Contribution of interval widths and rounding to the largest possible
    /// embedded norm of a height-bounded solution.
    #[serde(with = "crate::json::rational")]
    pub error_budget: BigRational,
    #[serde(with = "crate::json::rational")]
    pub lambda1_sq_lower: BigRational,
    #[serde(with = "crate::json::rational")]
    pub max_solution_norm_sq: BigRational,
    pub scale_bits: u32,
}

/// Searches for a nonzero integral alternating `E` of height at most `h`
/// vanishing on `ker Π`, by embedding `e ↦ (e, round(C·A·e))` and comparing
/// a certified lower bound on the lattice minimum with the largest norm such
/// an `e` could have.
pub fn ns_exclusion(pi: &PeriodMatrix, h: u64) -> NsCertificate {
    let prec = pi.precision;
    let n = 2 * pi.g;
    let a = pi.constraint_matrix();
    let unknowns = n * (n - 1) / 2;
    let hq = BigRational::from_integer(BigInt::from(h));
    let half = BigRational::new(BigInt::one(), BigInt::from(2));

    let mut c_bits = prec / 2;
    let cap = prec.saturating_sub(32).max(c_bits);
    loop {
        // round(C·A_mid) and the per-row error bound Σ_j (½ + C·rad_rj)
        let shift = prec - c_bits;
        let rounded: Vec<Vec<BigInt>> = a
            .iter()
            .map(|row| row.iter().map(|x| round_shift(&x.mid, shift)).collect())
            .collect();
        let scale = BigRational::from_integer(BigInt::one() << c_bits);
        let row_err: Vec<BigRational> = a
            .iter()
            .map(|row| row.iter().fold(BigRational::zero(), |acc, x| acc + &half + &scale * x.rad_rational()))
            .collect();
        let height_part = BigRational::from_integer(BigInt::from(unknowns)) * &hq * &hq;
        let error_budget = row_err.iter().fold(BigRational::zero(), |acc, r| acc + r * r * &hq * &hq);
        let max_norm = &height_part + &error_budget;

        let mut basis: Vec<Vec<BigInt>> = (0..unknowns)
            .map(|j| {
                let mut v = vec![BigInt::zero(); unknowns];
                v[j] = BigInt::one();
                v.extend(rounded.iter().map(|row| row[j].clone()));
                v
            })
            .collect();
        let red = lll_reduce(&mut basis, |x, y| dot(x, y)).expect("identity block keeps the basis independent");
        let b1 = BigRational::from_integer(dot(&basis[0], &basis[0]));
        let lll_bound = &b1 / BigRational::from_integer(BigInt::one() << (unknowns - 1));
        let gs_min = red.gram_schmidt_norms().into_iter().min().unwrap_or_else(BigRational::zero);
        let lower = lll_bound.max(gs_min);

        let cert = |status, candidate| NsCertificate {
            status,
            height_bound: h,
            precision: prec,
            candidate,
            lll_b1_norm: b1.clone(),
            error_budget: error_budget.clone(),
            lambda1_sq_lower: lower.clone(),
            max_solution_norm_sq: max_norm.clone(),
            scale_bits: c_bits,
        };
        if h == 0 || lower > max_norm {
            return cert(NsStatus::Excluded, None);
        }
        let hb = BigInt::from(h);
        for v in &basis {
            let e = &v[..unknowns];
            if e.iter().all(Zero::is_zero) || e.iter().any(|x| x.abs() > hb) {
                continue;
            }
            if constraints_contain_zero(&a, e) {
                return cert(NsStatus::Candidate, Some(antisymmetric_from_upper(n, e)));
            }
        }
        if c_bits >= cap {
            return cert(NsStatus::Inconclusive, None);
        }
        c_bits = (c_bits + 32).min(cap);
    }
}

fn round_shift(x: &BigInt, k: u32) -> BigInt {
    use num_integer::Integer;
    if k == 0 {
        return x.clone();
    }
    let d = BigInt::one() << k;
    (x + (BigInt::one() << (k - 1))).div_floor(&d)
}

fn constraints_contain_zero(a: &[Vec<RBall>], e: &[BigInt]) -> bool {
    a.iter().all(|row| {
        let (mid, rad) = row.iter().zip(e).fold((BigInt::zero(), BigInt::zero()), |(m, r), (x, c)| {
            (m + &x.mid * c, r + &x.rad * c.abs())
        });
        mid.abs() <= rad
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(c: &[i64], bits: u32) -> CmTorusSpec {
        CmTorusSpec::new(c.iter().map(|&x| BigInt::from(x)).collect(), bits).unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(constraint_counts(3).unwrap(), (15, 6));
        assert_eq!(constraint_counts(1).unwrap(), (1, 0));
        assert_eq!(constraint_counts(2).unwrap(), (6, 2));
        assert_eq!(constraint_counts(0), Err(TorusError::Genus(0)));
        for g in 1..10 {
            let (u, c) = constraint_counts(g).unwrap();
            assert_eq!(u - c, g * g);
        }
    }

    #[test]
    fn spec_validation() {
        let mk = |c: &[i64]| CmTorusSpec::new(c.iter().map(|&x| BigInt::from(x)).collect(), 128);
        assert_eq!(mk(&[1, 0, 0, 1]).unwrap_err(), TorusError::Degree(3));
        assert_eq!(mk(&[-1, 0, 1]).unwrap_err(), TorusError::RealRoots(2));
        assert_eq!(mk(&[1, 0, 2, 0, 1]).unwrap_err(), TorusError::NotSquarefree);
        assert!(mk(&[1, 0, 1]).is_ok());
    }

    #[test]
    fn sextic_roots() {
        let pm = build_example_torus(&CmTorusSpec::example()).unwrap();
        assert_eq!(pm.g, 3);
        assert_eq!(pm.roots.len(), 3);
        let approx: Vec<(f64, f64)> = pm.roots.iter().map(CBall::to_f64).collect();
        // independent reference: Durand–Kerner in complex doubles
        let mut reference = durand_kerner(&[1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        reference.retain(|z| z.1 > 0.0);
        reference.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for (a, r) in approx.iter().zip(&reference) {
            assert!((a.0 - r.0).abs() < 1e-9 && (a.1 - r.1).abs() < 1e-9, "{a:?} vs {r:?}");
        }
        for z in &pm.roots {
            assert!(z.im_lower().is_positive());
            assert!(z.rad < BigInt::one() << 200u32);
        }
        for row in &pm.entries {
            // both enclose α², from the same center
            let sq = row[1].square();
            assert_eq!((&sq.re, &sq.im), (&row[2].re, &row[2].im));
            assert!(!sq.disjoint(&row[2]));
        }
    }

    fn durand_kerner(c: &[f64]) -> Vec<(f64, f64)> {
        let n = c.len() - 1;
        let mul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
        let div = |a: (f64, f64), b: (f64, f64)| {
            let d = b.0 * b.0 + b.1 * b.1;
            ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
        };
        let eval = |z: (f64, f64)| c.iter().rev().fold((0.0, 0.0), |acc, &k| {
            let m = mul(acc, z);
            (m.0 + k, m.1)
        });
        let mut zs: Vec<(f64, f64)> = (0..n).map(|k| {
            let t = 0.4 + 0.9f64 * k as f64;
            (t.cos() * 0.9, t.sin() * 0.9)
        }).collect();
        for _ in 0..500 {
            for i in 0..n {
                let mut den = (1.0, 0.0);
                for j in 0..n {
                    if i != j {
                        den = mul(den, (zs[i].0 - zs[j].0, zs[i].1 - zs[j].1));
                    }
                }
                let d = div(eval(zs[i]), den);
                zs[i] = (zs[i].0 - d.0, zs[i].1 - d.1);
            }
        }
        zs
    }

    #[test]
    fn gaussian_control_case() {
        let pm = build_example_torus(&spec(&[1, 0, 1], 128)).unwrap();
        assert_eq!(pm.g, 1);
        let (re, im) = pm.roots[0].to_f64();
        assert!(re.abs() < 1e-30 && (im - 1.0).abs() < 1e-30);
        let cert = ns_exclusion(&pm, 5);
        assert_eq!(cert.status, NsStatus::Candidate);
        let one = BigInt::one();
        assert_eq!(cert.candidate.unwrap(), vec![vec![BigInt::zero(), one.clone()], vec![-one, BigInt::zero()]]);
    }

    #[test]
    fn sextic_torus_has_no_small_ns_class() {
        let pm = build_example_torus(&CmTorusSpec::example()).unwrap();
        let cert = ns_exclusion(&pm, DEFAULT_HEIGHT_BOUND);
        assert_eq!(cert.status, NsStatus::Excluded);
        assert!(cert.lambda1_sq_lower > cert.max_solution_norm_sq);
        assert_eq!(ns_exclusion(&pm, 0).status, NsStatus::Excluded);
        for h in [1, 10, 100] {
            assert_eq!(ns_exclusion(&pm, h).status, NsStatus::Excluded);
        }
    }

    #[test]
    fn products_of_elliptic_curves_have_ns_classes() {
        // (x²+1)(x²+x+1): E_i × E_ρ has rank-2 NS from the factors
        let pm = build_example_torus(&spec(&[1, 1, 2, 1, 1], 192)).unwrap();
        let cert = ns_exclusion(&pm, 100);
        assert_eq!(cert.status, NsStatus::Candidate);
        let e = cert.candidate.unwrap();
        let form = pm.kernel_form(&e);
        assert!(form.iter().flatten().all(CBall::contains_zero));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn pi_e_pit_is_antisymmetric(e in proptest::collection::vec(-50i64..50, 15)) {
            let pm = build_example_torus(&spec(&[1, 1, 0, 0, 0, 0, 1], 128)).unwrap();
            let e: Vec<BigInt> = e.into_iter().map(BigInt::from).collect();
            let m = antisymmetric_from_upper(6, &e);
            for form in [pm.pi_e_pit(&m), pm.kernel_form(&m)] {
                for s in 0..3 {
                    prop_assert!(form[s][s].contains_zero());
                    for t in 0..3 {
                        prop_assert!(form[s][t].add(&form[t][s]).contains_zero());
                    }
                }
            }
        }
    }
}
