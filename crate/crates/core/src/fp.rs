//! Exact linear algebra over `F_p` for `p ≤ 251`.
//!
//! Subspaces are kept in reduced row echelon form with the lowest pivot
//! first, so two subspaces are equal exactly when their bases are equal.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("modulus {0} is not a prime ≤ 251")]
    InvalidModulus(u32),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u32, right: u32 },
    #[error("commutator series stalled at dimension {dim}")]
    NotDescending { dim: usize },
}

#[inline]
fn sub(p: u32, a: u8, b: u8) -> u8 {
    ((a as u32 + p - b as u32) % p) as u8
}

#[inline]
fn mul(p: u32, a: u8, b: u8) -> u8 {
    ((a as u32 * b as u32) % p) as u8
}

fn inv(p: u32, a: u8) -> u8 {
    debug_assert!(a != 0);
    let mut acc = 1u32;
    let mut base = a as u32;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc as u8
}

/// Incremental reduced-row-echelon basis.
#[derive(Debug, Clone)]
struct Echelon {
    p: u32,
    dim: usize,
    rows: Vec<Vec<u8>>,
    pivots: Vec<usize>,
}

impl Echelon {
    fn new(p: u32, dim: usize) -> Echelon {
        Echelon {
            p,
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    fn reduce(&self, v: &mut [u8]) {
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = v[piv];
            if c != 0 {
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = sub(self.p, *x, mul(self.p, c, r));
                }
            }
        }
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    fn insert(&mut self, mut v: Vec<u8>) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        self.reduce(&mut v);
        let Some(piv) = v.iter().position(|&c| c != 0) else {
            return false;
        };
        let s = inv(self.p, v[piv]);
        for x in v.iter_mut() {
            *x = mul(self.p, *x, s);
        }
        for row in self.rows.iter_mut() {
            let c = row[piv];
            if c != 0 {
                for (x, &r) in row.iter_mut().zip(&v) {
                    *x = sub(self.p, *x, mul(self.p, c, r));
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < piv);
        self.pivots.insert(at, piv);
        self.rows.insert(at, v);
        true
    }

    fn into_subspace(self) -> Subspace {
        Subspace {
            p: self.p,
            ambient_dim: self.dim,
            basis: self.rows,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subspace {
    p: u32,
    ambient_dim: usize,
    basis: Vec<Vec<u8>>,
}

fn check_modulus(p: u32) -> Result<(), LinalgError> {
    if crate::wreath::is_prime(p) && p <= 251 {
        Ok(())
    } else {
        Err(LinalgError::InvalidModulus(p))
    }
}

/// Canonical echelon basis of the span of `vectors`.
pub fn rref(p: u32, ambient_dim: usize, vectors: &[Vec<u8>]) -> Result<Subspace, LinalgError> {
    check_modulus(p)?;
    let mut ech = Echelon::new(p, ambient_dim);
    for v in vectors {
        if v.len() != ambient_dim {
            return Err(LinalgError::DimensionMismatch {
                left: ambient_dim,
                right: v.len(),
            });
        }
        ech.insert(v.iter().map(|&c| (c as u32 % p) as u8).collect());
    }
    Ok(ech.into_subspace())
}

impl Subspace {
    pub fn zero(p: u32, ambient_dim: usize) -> Subspace {
        Subspace {
            p,
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(p: u32, ambient_dim: usize) -> Subspace {
        let basis = (0..ambient_dim)
            .map(|k| {
                let mut e = vec![0; ambient_dim];
                e[k] = 1;
                e
            })
            .collect();
        Subspace {
            p,
            ambient_dim,
            basis,
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<u8>] {
        &self.basis
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis
            .iter()
            .map(|r| r.iter().position(|&c| c != 0).unwrap())
            .collect()
    }

    fn echelon(&self) -> Echelon {
        Echelon {
            p: self.p,
            dim: self.ambient_dim,
            rows: self.basis.clone(),
            pivots: self.pivots(),
        }
    }

    fn compatible(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.p != other.p {
            return Err(LinalgError::ModulusMismatch {
                left: self.p,
                right: other.p,
            });
        }
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::DimensionMismatch {
                left: self.ambient_dim,
                right: other.ambient_dim,
            });
        }
        Ok(())
    }

    pub fn contains(&self, v: &[u8]) -> Result<bool, LinalgError> {
        if v.len() != self.ambient_dim {
            return Err(LinalgError::DimensionMismatch {
                left: self.ambient_dim,
                right: v.len(),
            });
        }
        let mut w: Vec<u8> = v.iter().map(|&c| (c as u32 % self.p) as u8).collect();
        self.echelon().reduce(&mut w);
        Ok(w.iter().all(|&c| c == 0))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool, LinalgError> {
        self.compatible(other)?;
        for v in &self.basis {
            if !other.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.compatible(other)?;
        let mut ech = self.echelon();
        for v in &other.basis {
            ech.insert(v.clone());
        }
        Ok(ech.into_subspace())
    }

    /// Zassenhaus: the rows `(u | u)` and `(v | 0)` reduce to rows `(0 | w)`
    /// spanning `U ∩ V`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.compatible(other)?;
        let d = self.ambient_dim;
        let mut ech = Echelon::new(self.p, 2 * d);
        for u in &self.basis {
            let mut row = u.clone();
            row.extend_from_slice(u);
            ech.insert(row);
        }
        for v in &other.basis {
            let mut row = v.clone();
            row.extend(std::iter::repeat_n(0, d));
            ech.insert(row);
        }
        let mut out = Echelon::new(self.p, d);
        for (row, &piv) in ech.rows.iter().zip(&ech.pivots) {
            if piv >= d {
                out.insert(row[d..].to_vec());
            }
        }
        Ok(out.into_subspace())
    }

    /// Whether every map sends this subspace into itself.
    pub fn is_invariant(&self, actions: &[LinearMap]) -> Result<bool, LinalgError> {
        for g in actions {
            for v in &self.basis {
                if !self.contains(&g.apply(self.p, v)?)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Dense matrix over `F_p`, acting on column vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<u8>>) -> Result<Matrix, LinalgError> {
        let cols = rows.first().map_or(0, |r| r.len());
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(LinalgError::DimensionMismatch {
                left: cols,
                right: bad.len(),
            });
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        self.data
            .chunks(self.cols.max(1))
            .map(|c| c.to_vec())
            .collect()
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<u8>>::deserialize(d)?;
        Matrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// An invertible linear map on `F_p^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LinearMap {
    /// Sends `e_k` to `e_{perm[k]}`.
    Permutation(Vec<usize>),
    Dense(Matrix),
}

impl LinearMap {
    pub fn dim(&self) -> usize {
        match self {
            LinearMap::Permutation(perm) => perm.len(),
            LinearMap::Dense(m) => m.cols,
        }
    }

    pub fn apply(&self, p: u32, v: &[u8]) -> Result<Vec<u8>, LinalgError> {
        if v.len() != self.dim() {
            return Err(LinalgError::DimensionMismatch {
                left: self.dim(),
                right: v.len(),
            });
        }
        Ok(match self {
            LinearMap::Permutation(perm) => {
                let mut out = vec![0; v.len()];
                for (k, &t) in perm.iter().enumerate() {
                    out[t] = v[k];
                }
                out
            }
            LinearMap::Dense(m) => (0..m.rows)
                .map(|r| {
                    let row = &m.data[r * m.cols..(r + 1) * m.cols];
                    let s: u32 = row.iter().zip(v).map(|(&a, &b)| a as u32 * b as u32).sum();
                    (s % p) as u8
                })
                .collect(),
        })
    }

    /// `(g − 1)v`.
    pub fn apply_minus_identity(&self, p: u32, v: &[u8]) -> Result<Vec<u8>, LinalgError> {
        let gv = self.apply(p, v)?;
        Ok(gv.iter().zip(v).map(|(&a, &b)| sub(p, a, b)).collect())
    }
}

fn check_actions(actions: &[LinearMap], dim: usize) -> Result<(), LinalgError> {
    if let Some(g) = actions.iter().find(|g| g.dim() != dim) {
        return Err(LinalgError::DimensionMismatch {
            left: dim,
            right: g.dim(),
        });
    }
    Ok(())
}

/// Smallest subspace containing `seeds` and closed under every action.
pub fn spin(
    p: u32,
    ambient_dim: usize,
    seeds: &[Vec<u8>],
    actions: &[LinearMap],
) -> Result<Subspace, LinalgError> {
    check_modulus(p)?;
    check_actions(actions, ambient_dim)?;
    let mut ech = Echelon::new(p, ambient_dim);
    let mut queue = VecDeque::new();
    for s in seeds {
        if s.len() != ambient_dim {
            return Err(LinalgError::DimensionMismatch {
                left: ambient_dim,
                right: s.len(),
            });
        }
        let s: Vec<u8> = s.iter().map(|&c| (c as u32 % p) as u8).collect();
        if ech.insert(s.clone()) {
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        for g in actions {
            let w = g.apply(p, &v)?;
            if ech.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    Ok(ech.into_subspace())
}

/// Null space of the matrix whose rows are `rows`.
pub fn nullspace(p: u32, ncols: usize, rows: &[Vec<u8>]) -> Result<Subspace, LinalgError> {
    let reduced = rref(p, ncols, rows)?;
    let pivots = reduced.pivots();
    let mut out = Echelon::new(p, ncols);
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u8; ncols];
        v[free] = 1;
        for (row, &piv) in reduced.basis.iter().zip(&pivots) {
            v[piv] = sub(p, 0, row[free]);
        }
        out.insert(v);
    }
    Ok(out.into_subspace())
}

fn minus_identity_rows(p: u32, g: &LinearMap, dim: usize) -> Result<Vec<Vec<u8>>, LinalgError> {
    let mut rows = vec![vec![0u8; dim]; dim];
    for k in 0..dim {
        let mut e = vec![0u8; dim];
        e[k] = 1;
        let col = g.apply_minus_identity(p, &e)?;
        for (r, &c) in col.iter().enumerate() {
            rows[r][k] = c;
        }
    }
    Ok(rows)
}

/// Common fixed space: intersection of the kernels of `g − 1`.
pub fn fixed_subspace(
    p: u32,
    actions: &[LinearMap],
    ambient_dim: usize,
) -> Result<Subspace, LinalgError> {
    check_modulus(p)?;
    check_actions(actions, ambient_dim)?;
    let mut rows = Vec::new();
    for g in actions {
        rows.extend(minus_identity_rows(p, g, ambient_dim)?);
    }
    nullspace(p, ambient_dim, &rows)
}

/// `[P, M]` for the whole space `M`: the span of all `(g − 1)v`.
pub fn augmentation_subspace(
    p: u32,
    actions: &[LinearMap],
    ambient_dim: usize,
) -> Result<Subspace, LinalgError> {
    commutator_subspace(&Subspace::full(p, ambient_dim), actions)
}

/// Span of `(g − 1)v` over the action generators `g` and a basis of `m`.
pub fn commutator_subspace(m: &Subspace, actions: &[LinearMap]) -> Result<Subspace, LinalgError> {
    check_actions(actions, m.ambient_dim)?;
    let mut ech = Echelon::new(m.p, m.ambient_dim);
    for g in actions {
        for v in &m.basis {
            ech.insert(g.apply_minus_identity(m.p, v)?);
        }
    }
    Ok(ech.into_subspace())
}

/// `M_1 = start`, `M_{r+1} = [P, M_r]`, ending with the zero space.
pub fn lower_central_series(
    start: &Subspace,
    actions: &[LinearMap],
) -> Result<Vec<Subspace>, LinalgError> {
    let mut chain = vec![start.clone()];
    while !chain.last().unwrap().is_zero() {
        let cur = chain.last().unwrap();
        let next = commutator_subspace(cur, actions)?;
        if next.dim() >= cur.dim() {
            return Err(LinalgError::NotDescending { dim: cur.dim() });
        }
        chain.push(next);
    }
    Ok(chain)
}
