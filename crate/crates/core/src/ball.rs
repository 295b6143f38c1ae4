//! Complex ball arithmetic on fixed-point dyadic mantissas.
//!
//! A [`CBall`] at precision `p` is the closed disk with center
//! `(re + i·im)·2^−p` and radius `rad·2^−p`. Every operation returns a disk
//! containing all possible results, so enclosures stay rigorous; the cost is
//! that centers are rounded to the fixed grid.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CBall {
    pub re: BigInt,
    pub im: BigInt,
    pub rad: BigInt,
    pub prec: u32,
}

fn pow2(k: u32) -> BigInt {
    BigInt::one() << k
}

/// `x / 2^k` rounded to nearest (half up).
fn shr_round(x: &BigInt, k: u32) -> BigInt {
    if k == 0 {
        return x.clone();
    }
    (x + pow2(k - 1)).div_floor(&pow2(k))
}

/// `ceil(x / 2^k)` for `x ≥ 0`.
fn shr_ceil(x: &BigInt, k: u32) -> BigInt {
    x.div_ceil(&pow2(k))
}

impl CBall {
    pub fn zero(prec: u32) -> Self {
        CBall { re: BigInt::zero(), im: BigInt::zero(), rad: BigInt::zero(), prec }
    }

    pub fn from_int(n: &BigInt, prec: u32) -> Self {
        CBall { re: n << prec, im: BigInt::zero(), rad: BigInt::zero(), prec }
    }

    /// Exact point from two doubles (which are dyadic rationals), rounded
    /// onto the grid with the rounding error absorbed into the radius.
    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        let conv = |x: f64| -> BigInt {
            // x · 2^prec, computed as (x · 2^60) · 2^(prec−60) to avoid overflow
            let scaled = BigInt::from_f64(x * 2f64.powi(60)).unwrap_or_default();
            if prec >= 60 {
                scaled << (prec - 60)
            } else {
                shr_round(&scaled, 60 - prec)
            }
        };
        let rad = if prec >= 60 { BigInt::zero() } else { BigInt::one() };
        CBall { re: conv(re), im: conv(im), rad, prec }
    }

    /// Disk of radius `rad` units around a point.
    pub fn with_radius(&self, rad: BigInt) -> Self {
        CBall { rad, ..self.clone() }
    }

    pub fn center(&self) -> CBall {
        self.with_radius(BigInt::zero())
    }

    fn same_prec(&self, o: &CBall) {
        debug_assert_eq!(self.prec, o.prec, "mixed precisions");
    }

    pub fn add(&self, o: &CBall) -> CBall {
        self.same_prec(o);
        CBall { re: &self.re + &o.re, im: &self.im + &o.im, rad: &self.rad + &o.rad, prec: self.prec }
    }

    pub fn sub(&self, o: &CBall) -> CBall {
        self.same_prec(o);
        CBall { re: &self.re - &o.re, im: &self.im - &o.im, rad: &self.rad + &o.rad, prec: self.prec }
    }

    pub fn neg(&self) -> CBall {
        CBall { re: -&self.re, im: -&self.im, rad: self.rad.clone(), prec: self.prec }
    }

    pub fn scale_int(&self, c: &BigInt) -> CBall {
        CBall { re: &self.re * c, im: &self.im * c, rad: &self.rad * c.abs(), prec: self.prec }
    }

    /// Upper bound on `|center|` in units, via `|re| + |im|`.
    pub fn center_mag(&self) -> BigInt {
        self.re.abs() + self.im.abs()
    }

    /// Upper bound on the modulus of every point of the ball, in units.
    pub fn mag(&self) -> BigInt {
        self.center_mag() + &self.rad
    }

    pub fn mul(&self, o: &CBall) -> CBall {
        self.same_prec(o);
        let p = self.prec;
        let re = &self.re * &o.re - &self.im * &o.im;
        let im = &self.re * &o.im + &self.im * &o.re;
        let spread = self.center_mag() * &o.rad + o.center_mag() * &self.rad + &self.rad * &o.rad;
        // rounding each component moves the center by at most ½ unit, so by < 1 in modulus
        let rad = shr_ceil(&spread, p) + 1;
        CBall { re: shr_round(&re, p), im: shr_round(&im, p), rad, prec: p }
    }

    pub fn square(&self) -> CBall {
        self.mul(self)
    }

    /// Approximate reciprocal of the center as a point; not an enclosure.
    pub fn approx_recip(&self) -> CBall {
        let p = self.prec;
        let den = &self.re * &self.re + &self.im * &self.im;
        if den.is_zero() {
            return CBall::zero(p);
        }
        let scale = pow2(2 * p);
        CBall {
            re: (&self.re * &scale).div_floor(&den),
            im: (-&self.im * &scale).div_floor(&den),
            rad: BigInt::zero(),
            prec: p,
        }
    }

    /// Point quotient of centers; not an enclosure.
    pub fn approx_div(&self, o: &CBall) -> CBall {
        self.center().mul(&o.approx_recip()).center()
    }

    /// `true` if `other` lies in the interior of `self`, using `|re|+|im|` as
    /// an upper bound on center distance.
    pub fn strictly_contains(&self, other: &CBall) -> bool {
        let d = (&self.re - &other.re).abs() + (&self.im - &other.im).abs();
        d + &other.rad < self.rad
    }

    /// `true` if the two disks are certainly disjoint, using
    /// `max(|Δre|, |Δim|)` as a lower bound on center distance.
    pub fn disjoint(&self, other: &CBall) -> bool {
        let d = (&self.re - &other.re).abs().max((&self.im - &other.im).abs());
        d > &self.rad + &other.rad
    }

    pub fn contains_zero(&self) -> bool {
        // |center| ≤ rad is implied by |re|+|im| ≤ rad and implies max(|re|,|im|) ≤ rad
        let lower = self.re.abs().max(self.im.abs());
        lower <= self.rad
    }

    /// Rigorous lower bound on the imaginary part, in units.
    pub fn im_lower(&self) -> BigInt {
        &self.im - &self.rad
    }

    pub fn re_part(&self) -> RBall {
        RBall { mid: self.re.clone(), rad: self.rad.clone(), prec: self.prec }
    }

    pub fn im_part(&self) -> RBall {
        RBall { mid: self.im.clone(), rad: self.rad.clone(), prec: self.prec }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        let conv = |x: &BigInt| {
            let shift = self.prec.saturating_sub(60);
            let top = shr_round(x, shift).to_f64().unwrap_or(f64::NAN);
            top / 2f64.powi((self.prec - shift) as i32)
        };
        (conv(&self.re), conv(&self.im))
    }

    pub fn radius(&self) -> BigRational {
        BigRational::new(self.rad.clone(), pow2(self.prec))
    }
}

/// A real interval `[mid − rad, mid + rad]·2^−prec`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RBall {
    pub mid: BigInt,
    pub rad: BigInt,
    pub prec: u32,
}

impl RBall {
    pub fn contains_zero(&self) -> bool {
        self.mid.abs() <= self.rad
    }

    pub fn mid_rational(&self) -> BigRational {
        BigRational::new(self.mid.clone(), pow2(self.prec))
    }

    pub fn rad_rational(&self) -> BigRational {
        BigRational::new(self.rad.clone(), pow2(self.prec))
    }
}

/// Horner evaluation of an integer polynomial (ascending coefficients).
pub fn eval_int_poly(coeffs: &[BigInt], z: &CBall) -> CBall {
    let mut acc = CBall::zero(z.prec);
    for c in coeffs.iter().rev() {
        acc = acc.mul(z).add(&CBall::from_int(c, z.prec));
    }
    acc
}

/// Product of ball polynomials (ascending coefficients).
pub fn poly_mul(a: &[CBall], b: &[CBall]) -> Vec<CBall> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let prec = a[0].prec;
    let mut out = vec![CBall::zero(prec); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}
