//! Dense univariate polynomials over Q, Sturm sequences and real root
//! isolation, plus the small amount of F_p arithmetic needed for
//! irreducibility certificates.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Polynomial with rational coefficients in ascending order; the last
/// coefficient is nonzero unless the polynomial is zero (empty).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly(Vec<BigRational>);

fn q(x: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(x.into())
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn from_ints<T: Into<BigInt> + Clone>(coeffs: &[T]) -> Self {
        Poly::new(coeffs.iter().cloned().map(|c| q(c)).collect())
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn one() -> Self {
        Poly(vec![BigRational::one()])
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::new(vec![c])
    }

    /// `x`
    pub fn x() -> Self {
        Poly(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.0.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.0.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        Poly::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lc = d.leading();
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quo = vec![BigRational::zero(); r.len() - dd];
        for k in (0..quo.len()).rev() {
            let c = &r[k + dd] / &lc;
            if !c.is_zero() {
                for (j, dj) in d.0.iter().enumerate() {
                    r[k + j] -= &c * dj;
                }
            }
            quo[k] = c;
        }
        r.truncate(dd);
        (Poly::new(quo), Poly::new(r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = self.leading().recip();
        self.scale(&inv)
    }

    /// Monic gcd (zero iff both inputs are zero).
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.primitive_part_rational();
        }
        a.monic()
    }

    /// Extended gcd: `(g, s, t)` with `s·self + t·o = g`, `g` monic.
    pub fn ext_gcd(&self, o: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (quo, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&quo.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&quo.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.leading().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Scales by a positive rational so that coefficients are coprime
    /// integers; keeps the sign. Used to tame coefficient growth.
    fn primitive_part_rational(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let lcm = self.0.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * q(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        Poly::new(ints.into_iter().map(|c| BigRational::new(c, g.clone())).collect())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * q(i)).collect())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &BigRational) -> i8 {
        sign(&self.eval(x))
    }

    /// Coefficients of `p(m + t)` in `t`.
    pub fn taylor_shift(&self, m: &BigRational) -> Vec<BigRational> {
        let mut c = self.0.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = &c[j + 1] * m;
                c[j] += t;
            }
        }
        c
    }

    /// Encloses `p([m - r, m + r])` as `p(m) ± bound`, where
    /// `bound = Σ_{k≥1} |c_k| r^k` from the Taylor expansion at `m`.
    pub fn eval_ball(&self, m: &BigRational, r: &BigRational) -> (BigRational, BigRational) {
        let c = self.taylor_shift(m);
        let center = c.first().cloned().unwrap_or_else(BigRational::zero);
        let mut bound = BigRational::zero();
        let mut rk = BigRational::one();
        for ck in c.iter().skip(1) {
            rk = &rk * r;
            bound += ck.abs() * &rk;
        }
        (center, bound)
    }

    /// Cauchy bound: every complex root has modulus < the returned value.
    pub fn root_bound(&self) -> BigRational {
        let lc = self.leading().abs();
        let m = self.0.iter().rev().skip(1).map(|c| c.abs() / &lc).max().unwrap_or_else(BigRational::zero);
        m + BigRational::one()
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).is_constant()
    }

    /// Integer coefficients, if every coefficient is integral.
    pub fn to_ints(&self) -> Option<Vec<BigInt>> {
        self.0.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }

    /// Parses expressions such as `x^6+x+1`, `2x^3 - 5x`, `-x^2+1` with
    /// integer coefficients.
    pub fn parse(s: &str) -> Result<Poly, String> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err("empty polynomial".into());
        }
        let mut terms = Vec::new();
        let mut cur = String::new();
        for (i, ch) in compact.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 && !compact[..i].ends_with('^') {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        let mut coeffs: Vec<BigInt> = Vec::new();
        for t in terms {
            let (sgn, body) = match t.strip_prefix('-') {
                Some(b) => (-1, b),
                None => (1, t.strip_prefix('+').unwrap_or(&t)),
            };
            if body.is_empty() {
                return Err(format!("bad term in {s:?}"));
            }
            let (coef, power) = match body.find('x') {
                None => (body.parse::<BigInt>().map_err(|e| format!("bad term {t:?}: {e}"))?, 0usize),
                Some(pos) => {
                    let cs = body[..pos].trim_end_matches('*');
                    let c = if cs.is_empty() {
                        BigInt::one()
                    } else {
                        cs.parse::<BigInt>().map_err(|e| format!("bad coefficient {cs:?}: {e}"))?
                    };
                    let rest = &body[pos + 1..];
                    let p = if rest.is_empty() {
                        1
                    } else {
                        let e = rest.strip_prefix('^').ok_or_else(|| format!("bad term {t:?}"))?;
                        e.parse::<usize>().map_err(|e2| format!("bad exponent {e:?}: {e2}"))?
                    };
                    (c, p)
                }
            };
            if coeffs.len() <= power {
                coeffs.resize(power + 1, BigInt::zero());
            }
            coeffs[power] += coef * sgn;
        }
        Ok(Poly::from_ints(&coeffs))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = !a.is_one() || i == 0;
            if show_coeff {
                write!(f, "{}", crate::json::format_rational(&a))?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

pub fn sign(x: &BigRational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Sturm sequence of a nonzero polynomial.
#[derive(Debug, Clone)]
pub struct Sturm {
    seq: Vec<Poly>,
}

impl Sturm {
    pub fn new(p: &Poly) -> Self {
        assert!(!p.is_zero(), "Sturm sequence of the zero polynomial");
        let mut seq = vec![p.clone(), p.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]).neg();
            seq.push(r);
        }
        seq.pop();
        Sturm { seq }
    }

    fn variations(signs: impl Iterator<Item = i8>) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    pub fn variations_at(&self, x: &BigRational) -> usize {
        Self::variations(self.seq.iter().map(|p| p.sign_at(x)))
    }

    fn variations_at_infinity(&self, positive: bool) -> usize {
        Self::variations(self.seq.iter().map(|p| {
            let s = sign(&p.leading());
            let odd = p.degree().unwrap_or(0) % 2 == 1;
            if !positive && odd {
                -s
            } else {
                s
            }
        }))
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count_in(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }

    /// Number of distinct real roots.
    pub fn count_real(&self) -> usize {
        self.variations_at_infinity(false).saturating_sub(self.variations_at_infinity(true))
    }
}

/// Isolating intervals `(lo, hi)` with `p(lo) ≠ 0 ≠ p(hi)`, each containing
/// exactly one real root of the squarefree polynomial `p`, sorted.
pub fn isolate_real_roots(p: &Poly) -> Vec<(BigRational, BigRational)> {
    let sturm = Sturm::new(p);
    let b = p.root_bound();
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        match sturm.count_in(&lo, &hi) {
            0 => {}
            1 => out.push((lo, hi)),
            _ => {
                let mid = split_point(p, &lo, &hi);
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    out.sort();
    out
}

/// A point strictly inside `(lo, hi)`, near the midpoint, where `p` does not
/// vanish.
pub fn split_point(p: &Poly, lo: &BigRational, hi: &BigRational) -> BigRational {
    let width = hi - lo;
    let mut k = 2i64;
    loop {
        let mid = lo + &width / q(2);
        // nudge away from an exact rational root
        let cand = if k == 2 { mid } else { lo + &width * BigRational::new(BigInt::from(k - 1), BigInt::from(2 * k - 1)) };
        if !p.eval(&cand).is_zero() {
            return cand;
        }
        k += 1;
    }
}

/// F_p polynomial helpers (coefficients ascending, reduced mod p).
pub mod modp {
    fn trim(mut v: Vec<u64>) -> Vec<u64> {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    fn mulmod(a: u64, b: u64, p: u64) -> u64 {
        ((a as u128 * b as u128) % p as u128) as u64
    }

    fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
        let mut r = 1 % p;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a, p);
            }
            a = mulmod(a, a, p);
            e >>= 1;
        }
        r
    }

    fn inv(a: u64, p: u64) -> u64 {
        powmod(a, p - 2, p)
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let li = inv(m[dm], p);
        while r.len() > dm {
            let k = r.len() - 1 - dm;
            let c = mulmod(*r.last().unwrap(), li, p);
            for (j, mj) in m.iter().enumerate() {
                r[k + j] = (r[k + j] + p - mulmod(c, *mj, p)) % p;
            }
            r = trim(r);
        }
        r
    }

    pub fn mulrem(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + mulmod(*x, *y, p)) % p;
            }
        }
        rem(&out, m, p)
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// `a^p mod m`
    fn pth_power(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut result = vec![1u64];
        let mut base = a.to_vec();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                result = mulrem(&result, &base, m, p);
            }
            base = mulrem(&base, &base, m, p);
            e >>= 1;
        }
        result
    }

    /// `x^(p^k) mod m`
    pub fn frobenius_power(m: &[u64], p: u64, k: usize) -> Vec<u64> {
        let mut x = rem(&[0, 1], m, p);
        for _ in 0..k {
            x = pth_power(&x, m, p);
        }
        x
    }

    /// Ben-Or irreducibility test for `f` of degree ≥ 1 with a unit leading
    /// coefficient mod p: `f` is irreducible iff `gcd(f, x^(p^i) - x) = 1`
    /// for every `i ≤ deg f / 2`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let f = trim(f.to_vec());
        let d = f.len() - 1;
        let mut xp = rem(&[0, 1], &f, p);
        for _ in 1..=d / 2 {
            xp = pth_power(&xp, &f, p);
            let mut h = xp.clone();
            if h.len() < 2 {
                h.resize(2, 0);
            }
            h[1] = (h[1] + p - 1) % p;
            if gcd(&f, &h, p).len() > 1 {
                return false;
            }
        }
        true
    }
}

/// Reduces integer coefficients modulo a small prime.
pub fn reduce_mod(coeffs: &[BigInt], p: u64) -> Vec<u64> {
    let bp = BigInt::from(p);
    coeffs.iter().map(|c| c.mod_floor(&bp).to_u64().unwrap()).collect()
}
