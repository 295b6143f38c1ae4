//! Elements of the wreath product `Sym(S) ≀ S_m` acting on `S^m`, and the
//! cycle-composition criterion for the existence of a fixed tuple.
//!
//! Action: `(w·x)_{σ(i)} = h^i(x_i)`. For a cycle `k₁ → k₂ → … → k_r` of `σ`
//! a fixed tuple must satisfy `x_{k_{j+1}} = h^{k_j}(x_{k_j})`, so it exists
//! on that cycle iff `l = h^{k_r} ∘ ⋯ ∘ h^{k₁}` has a fixed point.
//!
//! Internally everything is 0-based; the JSON form is 1-based.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_BRUTE_FORCE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WreathError {
    #[error("n and m must be at least 1")]
    Empty,
    #[error("sigma is not a permutation of 1..{0}")]
    BadSigma(usize),
    #[error("component {0} is not a permutation of 1..n")]
    BadComponent(usize),
    #[error("expected {expected} components, found {found}")]
    ComponentCount { expected: usize, found: usize },
    #[error("tuple space of size {n}^{m} exceeds the budget {budget}")]
    BudgetExceeded { n: usize, m: usize, budget: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WreathElement {
    n: usize,
    sigma: Vec<usize>,
    components: Vec<Vec<usize>>,
}

fn is_permutation(p: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    p.len() == n && p.iter().all(|&v| v < n && !std::mem::replace(&mut seen[v], true))
}

fn compose(outer: &[usize], inner: &[usize]) -> Vec<usize> {
    inner.iter().map(|&v| outer[v]).collect()
}

impl WreathElement {
    /// 0-based `sigma` and components.
    pub fn new(n: usize, sigma: Vec<usize>, components: Vec<Vec<usize>>) -> Result<Self, WreathError> {
        let m = sigma.len();
        if n == 0 || m == 0 {
            return Err(WreathError::Empty);
        }
        if !is_permutation(&sigma, m) {
            return Err(WreathError::BadSigma(m));
        }
        if components.len() != m {
            return Err(WreathError::ComponentCount { expected: m, found: components.len() });
        }
        if let Some(i) = components.iter().position(|h| !is_permutation(h, n)) {
            return Err(WreathError::BadComponent(i + 1));
        }
        Ok(WreathElement { n, sigma, components })
    }

    pub fn identity(n: usize, m: usize) -> Self {
        WreathElement { n, sigma: (0..m).collect(), components: vec![(0..n).collect(); m] }
    }

    /// Uniformly random element.
    pub fn random<R: Rng>(n: usize, m: usize, rng: &mut R) -> Self {
        let mut perm = |k: usize| {
            let mut p: Vec<usize> = (0..k).collect();
            p.shuffle(rng);
            p
        };
        let sigma = perm(m);
        let components = (0..m).map(|_| perm(n)).collect();
        WreathElement { n, sigma, components }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn act(&self, x: &[usize]) -> Vec<usize> {
        let mut out = vec![0; self.m()];
        for (i, &xi) in x.iter().enumerate() {
            out[self.sigma[i]] = self.components[i][xi];
        }
        out
    }

    /// `other ∘ self`: act by `self` first.
    pub fn then(&self, other: &WreathElement) -> WreathElement {
        let sigma = compose(&other.sigma, &self.sigma);
        let components =
            (0..self.m()).map(|i| compose(&other.components[self.sigma[i]], &self.components[i])).collect();
        WreathElement { n: self.n, sigma, components }
    }

    pub fn is_identity(&self) -> bool {
        self.sigma.iter().enumerate().all(|(i, &s)| i == s)
            && self.components.iter().all(|h| h.iter().enumerate().all(|(i, &v)| i == v))
    }

    pub fn power(&self, k: u64) -> WreathElement {
        let mut acc = WreathElement::identity(self.n, self.m());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            k >>= 1;
        }
        acc
    }

    pub fn order(&self) -> u64 {
        let mut k = 1;
        let mut cur = self.clone();
        while !cur.is_identity() {
            cur = cur.then(self);
            k += 1;
        }
        k
    }

    /// Cycles of `σ`, each starting at its smallest index.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.m()];
        let mut out = Vec::new();
        for start in 0..self.m() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut k = self.sigma[start];
            while k != start {
                seen[k] = true;
                cycle.push(k);
                k = self.sigma[k];
            }
            out.push(cycle);
        }
        out
    }

    /// `h^{k_r} ∘ ⋯ ∘ h^{k₁}` for a cycle `(k₁, …, k_r)`.
    pub fn cycle_composition(&self, cycle: &[usize]) -> Vec<usize> {
        cycle.iter().fold((0..self.n).collect::<Vec<_>>(), |acc, &k| compose(&self.components[k], &acc))
    }

    /// A fixed tuple assembled cycle by cycle, or `None` when some cycle
    /// composition is fixed-point free.
    pub fn fixed_point(&self) -> Option<Vec<usize>> {
        let mut x = vec![0; self.m()];
        for cycle in self.cycles() {
            let l = self.cycle_composition(&cycle);
            let mut v = (0..self.n).find(|&s| l[s] == s)?;
            for &k in &cycle {
                x[k] = v;
                v = self.components[k][v];
            }
        }
        debug_assert_eq!(self.act(&x), x);
        Some(x)
    }

    pub fn has_fixed_point(&self) -> bool {
        self.fixed_point().is_some()
    }

    /// Lexicographically first fixed tuple found by scanning all of `S^m`.
    pub fn fixed_point_bruteforce(&self, budget: u64) -> Result<Option<Vec<usize>>, WreathError> {
        let (n, m) = (self.n, self.m());
        let size = (n as u64).checked_pow(m as u32).filter(|&s| s <= budget);
        let Some(size) = size else {
            return Err(WreathError::BudgetExceeded { n, m, budget });
        };
        let mut x = vec![0usize; m];
        for _ in 0..size {
            if self.act(&x) == x {
                return Ok(Some(x));
            }
            // odometer, most significant coordinate first
            for i in (0..m).rev() {
                x[i] += 1;
                if x[i] < n {
                    break;
                }
                x[i] = 0;
            }
        }
        Ok(None)
    }

    pub fn has_fixed_point_bruteforce(&self, budget: u64) -> Result<bool, WreathError> {
        Ok(self.fixed_point_bruteforce(budget)?.is_some())
    }
}

/// All permutations of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Every element of `Sym(n) ≀ S_m`, `m! · (n!)^m` of them.
pub fn all_elements(n: usize, m: usize) -> Vec<WreathElement> {
    let perms_n = permutations(n);
    let mut out = Vec::new();
    for sigma in permutations(m) {
        let mut idx = vec![0usize; m];
        loop {
            let components = idx.iter().map(|&i| perms_n[i].clone()).collect();
            out.push(WreathElement { n, sigma: sigma.clone(), components });
            let mut i = 0;
            while i < m {
                idx[i] += 1;
                if idx[i] < perms_n.len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
            if i == m {
                break;
            }
        }
    }
    out
}

#[derive(Serialize, Deserialize)]
struct WreathJson {
    n: usize,
    m: usize,
    sigma: Vec<usize>,
    components: Vec<Vec<usize>>,
}

impl Serialize for WreathElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let plus = |v: &[usize]| v.iter().map(|x| x + 1).collect();
        WreathJson {
            n: self.n,
            m: self.m(),
            sigma: plus(&self.sigma),
            components: self.components.iter().map(|h| plus(h)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WreathElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = WreathJson::deserialize(d)?;
        if j.sigma.len() != j.m {
            return Err(D::Error::custom(format!("sigma has {} entries, m = {}", j.sigma.len(), j.m)));
        }
        // 0 would underflow; map it past the range so validation rejects it
        let minus = |v: Vec<usize>| v.into_iter().map(|x| x.checked_sub(1).unwrap_or(usize::MAX)).collect();
        WreathElement::new(j.n, minus(j.sigma), j.components.into_iter().map(minus).collect())
            .map_err(D::Error::custom)
    }
}
