//! Permutations of `{0, …, d-1}` stored as image arrays.
//!
//! Composition applies the right factor first: `a.compose(&b)` maps
//! `x ↦ a(b(x))`. Conjugation follows the left-exponent convention
//! `^g x = g·x·g⁻¹`, and the commutator is `[a, b] = a·b·a⁻¹·b⁻¹`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("images do not form a bijection of 0..{degree}")]
    NotBijection { degree: usize },
    #[error("malformed cycle notation at byte {pos}: {msg}")]
    Malformed { pos: usize, msg: String },
    #[error("point {point} appears more than once")]
    RepeatedPoint { point: usize },
    #[error("point {point} is out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
}

/// A point of `F_p^n`, identified with an integer through big-endian
/// `p`-adic digits: `value = Σ digits[i]·p^(n-1-i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(pub u32);

impl Point {
    pub fn from_digits(digits: &[u32], p: u32) -> Point {
        Point(digits.iter().fold(0, |acc, &d| acc * p + d))
    }

    pub fn digits(self, p: u32, n: usize) -> Vec<u32> {
        let mut out = vec![0; n];
        let mut v = self.0;
        for slot in out.iter_mut().rev() {
            *slot = v % p;
            v /= p;
        }
        out
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "PermRepr", into = "PermRepr")]
pub struct Perm {
    images: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct PermRepr {
    degree: usize,
    images: Vec<u32>,
}

impl TryFrom<PermRepr> for Perm {
    type Error = PermError;

    fn try_from(repr: PermRepr) -> Result<Self, Self::Error> {
        if repr.images.len() != repr.degree {
            return Err(PermError::NotBijection {
                degree: repr.degree,
            });
        }
        Perm::from_images(repr.images)
    }
}

impl From<Perm> for PermRepr {
    fn from(perm: Perm) -> Self {
        PermRepr {
            degree: perm.degree(),
            images: perm.images,
        }
    }
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm {
            images: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Perm, PermError> {
        let degree = images.len();
        let mut seen = vec![false; degree];
        for &x in &images {
            let x = x as usize;
            if x >= degree || seen[x] {
                return Err(PermError::NotBijection { degree });
            }
            seen[x] = true;
        }
        Ok(Perm { images })
    }

    /// Builds a permutation from a point map. The caller guarantees `f` is a
    /// bijection of `0..degree`.
    pub(crate) fn from_fn_unchecked(degree: usize, f: impl Fn(u32) -> u32) -> Perm {
        let images: Vec<u32> = (0..degree as u32).map(f).collect();
        debug_assert!(Perm::from_images(images.clone()).is_ok());
        Perm { images }
    }

    /// Builds a permutation from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Perm, PermError> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut seen = vec![false; degree];
        for cycle in cycles {
            for &x in cycle {
                if x >= degree {
                    return Err(PermError::PointOutOfRange { point: x, degree });
                }
                if seen[x] {
                    return Err(PermError::RepeatedPoint { point: x });
                }
                seen[x] = true;
            }
            for (k, &x) in cycle.iter().enumerate() {
                images[x] = cycle[(k + 1) % cycle.len()] as u32;
            }
        }
        Ok(Perm { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.images[x as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    fn check_degree(&self, other: &Perm) -> Result<(), PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(())
    }

    /// `x ↦ self(other(x))`.
    pub fn compose(&self, other: &Perm) -> Result<Perm, PermError> {
        self.check_degree(other)?;
        Ok(self.mul(other))
    }

    /// Unchecked composition; panics on degree mismatch.
    pub fn mul(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Perm {
            images: other
                .images
                .iter()
                .map(|&x| self.images[x as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u32;
        }
        Perm { images }
    }

    /// `^g self = g·self·g⁻¹`.
    pub fn conjugate(&self, g: &Perm) -> Result<Perm, PermError> {
        self.check_degree(g)?;
        Ok(self.conj(g))
    }

    /// Unchecked conjugation `g·self·g⁻¹`.
    pub fn conj(&self, g: &Perm) -> Perm {
        assert_eq!(self.degree(), g.degree(), "degree mismatch");
        // g x g^-1 sends g(k) to g(x(k)).
        let mut images = vec![0; self.degree()];
        for k in 0..self.degree() {
            images[g.images[k] as usize] = g.images[self.images[k] as usize];
        }
        Perm { images }
    }

    /// `[self, other] = self·other·self⁻¹·other⁻¹`.
    pub fn commutator(&self, other: &Perm) -> Result<Perm, PermError> {
        self.check_degree(other)?;
        Ok(self.comm(other))
    }

    pub(crate) fn comm(&self, other: &Perm) -> Perm {
        self.mul(other).mul(&self.inverse()).mul(&other.inverse())
    }

    pub fn pow(&self, k: i64) -> Perm {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Perm::identity(self.degree());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            sq = sq.mul(&sq);
            e >>= 1;
        }
        acc
    }

    pub fn commutes_with(&self, other: &Perm) -> bool {
        self.degree() == other.degree()
            && (0..self.degree()).all(|k| {
                self.images[other.images[k] as usize] == other.images[self.images[k] as usize]
            })
    }

    /// Disjoint cycles of length ≥ 2, each starting at its least point,
    /// sorted by least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.images[start] as usize;
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Least `k ≥ 1` with `self^k = id`.
    pub fn order(&self) -> u64 {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        self.cycles()
            .iter()
            .map(|c| c.len() as u64)
            .fold(1, |acc, len| acc / gcd(acc, len) * len)
    }

    /// Cycle notation; the identity prints as `()`.
    pub fn format_cycles(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        let mut out = String::new();
        for cycle in cycles {
            out.push('(');
            for (k, x) in cycle.iter().enumerate() {
                if k > 0 {
                    out.push(' ');
                }
                out.push_str(&x.to_string());
            }
            out.push(')');
        }
        out
    }

    /// Parses disjoint-cycle notation such as `(0 1 2)(3 4 5)`. Points may be
    /// separated by whitespace or commas; `()` is the identity.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Perm, PermError> {
        let cycles = parse_cycle_list(text)?;
        Perm::from_cycles(degree, &cycles)
    }
}

/// Parses cycle notation into raw cycles without a degree check.
pub fn parse_cycle_list(text: &str) -> Result<Vec<Vec<usize>>, PermError> {
    let bytes = text.as_bytes();
    let malformed = |pos: usize, msg: &str| PermError::Malformed {
        pos,
        msg: msg.to_string(),
    };
    let mut pos = 0;
    let mut cycles = Vec::new();
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    skip_ws(&mut pos);
    if pos == bytes.len() {
        return Err(malformed(pos, "empty input"));
    }
    while pos < bytes.len() {
        if bytes[pos] != b'(' {
            return Err(malformed(pos, "expected '('"));
        }
        pos += 1;
        let mut cycle = Vec::new();
        loop {
            while pos < bytes.len() && (bytes[pos].is_ascii_whitespace() || bytes[pos] == b',') {
                pos += 1;
            }
            match bytes.get(pos) {
                None => return Err(malformed(pos, "unterminated cycle")),
                Some(b')') => {
                    pos += 1;
                    break;
                }
                Some(b) if b.is_ascii_digit() => {
                    let start = pos;
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    let point: usize = text[start..pos]
                        .parse()
                        .map_err(|_| malformed(start, "point too large"))?;
                    cycle.push(point);
                }
                Some(_) => return Err(malformed(pos, "unexpected character")),
            }
        }
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        skip_ws(&mut pos);
    }
    Ok(cycles)
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm[{}]{}", self.degree(), self.format_cycles())
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_cycles())
    }
}
