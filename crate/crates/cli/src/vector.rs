//! Vector literals for the K3 lattice.
//!
//! A literal is either a bracketed list of 22 integers or an integer
//! combination of basis names: `a1..a8` (first −E8 block), `b1..b8` (second
//! −E8 block) and `e1, f1, e2, f2, e3, f3` (the three hyperbolic planes).
//! Examples: `e1-2f1`, `3*a4 + b8 - e2`, `[0,0,…,1,-2,0,0,0,0]`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use k3poor::lattice::K3_RANK;
use k3poor::LatticeVector;

fn basis_index(name: &str) -> Option<usize> {
    if name.len() < 2 {
        return None;
    }
    let (letter, num) = name.split_at(1);
    let k: usize = num.parse().ok()?;
    match (letter, k) {
        ("a", 1..=8) => Some(k - 1),
        ("b", 1..=8) => Some(8 + k - 1),
        ("e", 1..=3) => Some(16 + 2 * (k - 1)),
        ("f", 1..=3) => Some(17 + 2 * (k - 1)),
        _ => None,
    }
}

pub fn parse_vector(s: &str) -> Result<LatticeVector, String> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty vector literal".into());
    }
    if let Some(body) = s.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
        let coords = body
            .split(',')
            .map(|t| t.parse::<BigInt>().map_err(|e| format!("bad coordinate {t:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        if coords.len() != K3_RANK {
            return Err(format!("expected {K3_RANK} coordinates, got {}", coords.len()));
        }
        return Ok(LatticeVector(coords));
    }

    let mut v = vec![BigInt::zero(); K3_RANK];
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let mut sign = BigInt::one();
        if bytes[i] == b'+' || bytes[i] == b'-' {
            if bytes[i] == b'-' {
                sign = -sign;
            }
            i += 1;
        } else if i > 0 {
            return Err(format!("expected + or - at position {i} in {s:?}"));
        }
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let coeff = if i > start { s[start..i].parse::<BigInt>().map_err(|e| e.to_string())? } else { BigInt::one() };
        if i < bytes.len() && bytes[i] == b'*' {
            i += 1;
        }
        let name_start = i;
        if i < bytes.len() && bytes[i].is_ascii_alphabetic() {
            i += 1;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
        }
        let name = &s[name_start..i];
        let idx = basis_index(name).ok_or_else(|| format!("unknown basis vector {name:?} in {s:?}"))?;
        v[idx] += sign * coeff;
    }
    Ok(LatticeVector(v))
}
