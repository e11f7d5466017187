//! The iterated wreath product `P_n = C_p ≀ ⋯ ≀ C_p` acting on `F_p^n`.
//!
//! Points are big-endian digit strings `(λ_0, …, λ_{n-1})`. An element of
//! `P_n` is exactly a triangular map `λ_i ↦ λ_i + c_i(λ_0, …, λ_{i-1})`; the
//! tables `c_i` form its [`Portrait`]. The base group `T_j` of
//! `P_n ≅ P_{n-j} ≀ P_j` consists of the elements whose tables vanish below
//! level `j`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{Perm, PermError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WreathError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("level {level} out of range for n = {n}")]
    LevelOutOfRange { level: usize, n: usize },
    #[error("permutation is not in P_n: level {level} breaks at block {block}")]
    NotInPn { level: usize, block: usize },
    #[error("permutation is not in T_{j}")]
    NotInTj { j: usize },
    #[error("permutation does not induce an action on prefixes of length {j}")]
    BlockActionIllDefined { j: usize },
    #[error("vector has level {found}, expected {expected}")]
    LevelMismatch { expected: usize, found: usize },
    #[error("subgroup B is defined here only for p = 2 and n ≥ 2")]
    BRequiresTwo,
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// Largest supported degree `p^n`.
pub const MAX_DEGREE: u64 = 1 << 20;

pub fn is_prime(p: u32) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

/// Smallest generator of `F_p^×` (1 for `p = 2`).
pub fn smallest_primitive_root(p: u32) -> u32 {
    (1..p).find(|&r| is_primitive_root(r, p)).unwrap_or(1)
}

fn is_primitive_root(r: u32, p: u32) -> bool {
    if r == 0 || r >= p {
        return false;
    }
    let mut x = 1u64;
    for k in 1..p {
        x = x * r as u64 % p as u64;
        if x == 1 {
            return k == p - 1;
        }
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    p: u32,
    n: usize,
    r: u32,
    #[serde(skip)]
    pow: Vec<u32>,
}

impl Params {
    /// `p` prime (at most 251), `n ≥ 1`; `r` defaults to the smallest
    /// primitive root mod `p`.
    pub fn new(p: u32, n: usize) -> Result<Params, WreathError> {
        Params::with_root(p, n, smallest_primitive_root(p.max(2)))
    }

    pub fn with_root(p: u32, n: usize, r: u32) -> Result<Params, WreathError> {
        if !is_prime(p) || p > 251 {
            return Err(WreathError::InvalidParams(format!(
                "p = {p} must be a prime ≤ 251"
            )));
        }
        if n == 0 {
            return Err(WreathError::InvalidParams("n must be ≥ 1".into()));
        }
        let degree = (p as u64)
            .checked_pow(n as u32)
            .filter(|&d| d <= MAX_DEGREE);
        if degree.is_none() {
            return Err(WreathError::InvalidParams(format!(
                "degree {p}^{n} exceeds {MAX_DEGREE}"
            )));
        }
        let r_ok = if p == 2 {
            r == 1
        } else {
            is_primitive_root(r, p)
        };
        if !r_ok {
            return Err(WreathError::InvalidParams(format!(
                "r = {r} does not generate the units mod {p}"
            )));
        }
        let pow = (0..=n as u32).map(|k| p.pow(k)).collect();
        Ok(Params { p, n, r, pow })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn degree(&self) -> usize {
        self.pow[self.n] as usize
    }

    /// `p^k` for `0 ≤ k ≤ n`.
    pub fn power(&self, k: usize) -> usize {
        self.pow[k] as usize
    }

    /// Exponent `e` with `|P_m| = p^e`, namely `(p^m − 1)/(p − 1)`.
    pub fn sylow_exponent(&self, m: usize) -> u64 {
        (0..m).map(|k| (self.p as u64).pow(k as u32)).sum()
    }

    #[inline]
    pub fn digit(&self, a: u32, i: usize) -> u32 {
        (a / self.pow[self.n - 1 - i]) % self.p
    }

    /// Value of the first `len` digits of `a`, as an integer in `0..p^len`.
    #[inline]
    pub fn prefix(&self, a: u32, len: usize) -> u32 {
        a / self.pow[self.n - len]
    }

    fn check_level(&self, i: usize) -> Result<(), WreathError> {
        if i >= self.n {
            return Err(WreathError::LevelOutOfRange {
                level: i,
                n: self.n,
            });
        }
        Ok(())
    }

    fn check_degree(&self, x: &Perm) -> Result<(), WreathError> {
        if x.degree() != self.degree() {
            return Err(PermError::DegreeMismatch {
                left: x.degree(),
                right: self.degree(),
            }
            .into());
        }
        Ok(())
    }

    /// `σ_i`: increments `λ_i` when `λ_0 = ⋯ = λ_{i-1} = 0`.
    pub fn sigma(&self, i: usize) -> Result<Perm, WreathError> {
        self.check_level(i)?;
        let unit = self.pow[self.n - 1 - i];
        Ok(Perm::from_fn_unchecked(self.degree(), |a| {
            if self.prefix(a, i) != 0 {
                a
            } else {
                let d = self.digit(a, i);
                a - d * unit + ((d + 1) % self.p) * unit
            }
        }))
    }

    pub fn sigmas(&self) -> Vec<Perm> {
        (0..self.n).map(|i| self.sigma(i).unwrap()).collect()
    }

    /// `η_i`: multiplies `λ_i` by `r`.
    pub fn eta(&self, i: usize) -> Result<Perm, WreathError> {
        self.check_level(i)?;
        let unit = self.pow[self.n - 1 - i];
        Ok(Perm::from_fn_unchecked(self.degree(), |a| {
            let d = self.digit(a, i);
            a - d * unit + (d * self.r % self.p) * unit
        }))
    }

    pub fn etas(&self) -> Vec<Perm> {
        (0..self.n).map(|i| self.eta(i).unwrap()).collect()
    }

    /// `ρ_i = ∏_{s=1}^{p-1} ^{σ_{i-1}^s} σ_i` for `1 ≤ i ≤ n-1`.
    pub fn rho(&self, i: usize) -> Result<Perm, WreathError> {
        if i == 0 {
            return Err(WreathError::LevelOutOfRange {
                level: 0,
                n: self.n,
            });
        }
        self.check_level(i)?;
        let prev = self.sigma(i - 1)?;
        let sigma = self.sigma(i)?;
        let mut acc = Perm::identity(self.degree());
        let mut shift = prev.clone();
        for _ in 1..self.p {
            acc = acc.mul(&sigma.conj(&shift));
            shift = shift.mul(&prev);
        }
        Ok(acc)
    }

    /// `σ_0^{b_0} ⋯ σ_{j-1}^{b_{j-1}}` where `b` has digits `(b_0, …, b_{j-1})`.
    /// It sends the block of prefix `0` to the block of prefix `b`.
    pub fn prefix_transversal(&self, j: usize, b: usize) -> Perm {
        let mut acc = Perm::identity(self.degree());
        for k in 0..j {
            let digit = (b / self.power(j - 1 - k)) % self.p as usize;
            acc = acc.mul(&self.sigma(k).unwrap().pow(digit as i64));
        }
        acc
    }

    /// The `p^j` conjugates `^{x_b} σ_i` (`b` in lexicographic order), a basis
    /// of the level-`i` summand of `T_j/[T_j, T_j]`.
    pub fn block_conjugates(&self, j: usize, x: &Perm) -> Vec<Perm> {
        (0..self.power(j))
            .map(|b| x.conj(&self.prefix_transversal(j, b)))
            .collect()
    }

    /// Basis of `A^{n-1}`: the conjugates of `σ_{n-1}` into every block.
    pub fn top_base_basis(&self) -> Vec<Perm> {
        let last = self.sigma(self.n - 1).unwrap();
        self.block_conjugates(self.n - 1, &last)
    }

    /// Generators of `T_j`: `^{x_b} σ_i` for `i ≥ j` and every block `b`.
    pub fn t_generators(&self, j: usize) -> Vec<Perm> {
        (j..self.n)
            .flat_map(|i| self.block_conjugates(j, &self.sigma(i).unwrap()))
            .collect()
    }

    /// True iff `x` preserves the first `j` digits of every point.
    pub fn in_t(&self, j: usize, x: &Perm) -> bool {
        if x.degree() != self.degree() || j > self.n {
            return false;
        }
        (0..self.degree() as u32).all(|a| self.prefix(x.apply(a), j) == self.prefix(a, j))
    }

    pub fn decompose(&self, x: &Perm) -> Result<Portrait, WreathError> {
        self.check_degree(x)?;
        let p = self.p;
        let mut tables = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let mut table: Vec<Option<u32>> = vec![None; self.power(i)];
            for a in 0..self.degree() as u32 {
                let block = self.prefix(a, i);
                let shift = (self.digit(x.apply(a), i) + p - self.digit(a, i)) % p;
                match table[block as usize] {
                    None => table[block as usize] = Some(shift),
                    Some(s) if s == shift => {}
                    Some(_) => {
                        return Err(WreathError::NotInPn {
                            level: i,
                            block: block as usize,
                        })
                    }
                }
            }
            tables.push(table.into_iter().map(|s| s.unwrap_or(0)).collect());
        }
        Ok(Portrait { p, tables })
    }

    pub fn in_pn(&self, x: &Perm) -> bool {
        self.decompose(x).is_ok()
    }

    pub fn reconstruct(&self, portrait: &Portrait) -> Result<Perm, WreathError> {
        if portrait.p != self.p || portrait.height() != self.n {
            return Err(WreathError::InvalidParams(format!(
                "portrait of height {} does not match n = {}",
                portrait.height(),
                self.n
            )));
        }
        Ok(Perm::from_fn_unchecked(self.degree(), |a| {
            (0..self.n).fold(0, |acc, i| {
                let shift = portrait.tables[i][self.prefix(a, i) as usize];
                acc * self.p + (self.digit(a, i) + shift) % self.p
            })
        }))
    }

    /// Image in `P_n/P_n' ≅ F_p^n`; `σ_i ↦ e_i`.
    pub fn abelianization(&self, x: &Perm) -> Result<Vec<u8>, WreathError> {
        Ok(self.decompose(x)?.level_sums())
    }

    /// Depth of a single element: the largest `j` with `x ∈ T_j`.
    pub fn element_depth(&self, x: &Perm) -> Result<usize, WreathError> {
        let portrait = self.decompose(x)?;
        Ok(portrait.depth())
    }

    /// Largest `j` with every generator in `T_j`; `n` for an empty list.
    pub fn depth(&self, gens: &[Perm]) -> Result<usize, WreathError> {
        gens.iter()
            .try_fold(self.n, |acc, g| Ok(acc.min(self.element_depth(g)?)))
    }

    /// Dimension of `T_j/[T_j,T_j]`, namely `(n-j)·p^j`.
    pub fn tbar_dim(&self, j: usize) -> usize {
        (self.n - j) * self.power(j)
    }

    /// Image of `x ∈ T_j` in `T_j/[T_j,T_j]`. Coordinate `(i - j)·p^j + b`
    /// is the level-`i` abelianization coordinate of `x` restricted to block
    /// `b`.
    pub fn tbar_image(&self, j: usize, x: &Perm) -> Result<TbarVector, WreathError> {
        if j > self.n {
            return Err(WreathError::LevelOutOfRange {
                level: j,
                n: self.n,
            });
        }
        let portrait = self.decompose(x)?;
        if portrait.depth() < j {
            return Err(WreathError::NotInTj { j });
        }
        let blocks = self.power(j);
        let mut coords = vec![0u32; self.tbar_dim(j)];
        for i in j..self.n {
            let span = self.power(i - j);
            for (q, &c) in portrait.tables[i].iter().enumerate() {
                coords[(i - j) * blocks + q / span] += c;
            }
        }
        Ok(TbarVector {
            j,
            coords: coords.into_iter().map(|c| (c % self.p) as u8).collect(),
        })
    }

    /// The permutation of the `p^j` blocks induced by `g`.
    pub fn block_permutation(&self, j: usize, g: &Perm) -> Result<Vec<usize>, WreathError> {
        self.check_degree(g)?;
        let mut map: Vec<Option<u32>> = vec![None; self.power(j)];
        for a in 0..self.degree() as u32 {
            let from = self.prefix(a, j) as usize;
            let to = self.prefix(g.apply(a), j);
            match map[from] {
                None => map[from] = Some(to),
                Some(t) if t == to => {}
                Some(_) => return Err(WreathError::BlockActionIllDefined { j }),
            }
        }
        Ok(map.into_iter().map(|t| t.unwrap() as usize).collect())
    }

    /// `(g·v)_{π(b)} = v_b`, where `π` is the block permutation of `g`.
    pub fn pj_action(&self, g: &Perm, v: &TbarVector) -> Result<TbarVector, WreathError> {
        let j = v.j;
        let pi = self.block_permutation(j, g)?;
        let blocks = self.power(j);
        let mut coords = vec![0u8; v.coords.len()];
        for level in 0..self.n - j {
            for (b, &t) in pi.iter().enumerate() {
                coords[level * blocks + t] = v.coords[level * blocks + b];
            }
        }
        Ok(TbarVector { j, coords })
    }

    /// Generators of the characteristic abelian subgroup `B ≅ (C_4)^{2^{n-2}}`
    /// for `p = 2`: the block conjugates of `σ_{n-2} σ_{n-1}`.
    pub fn subgroup_b(&self) -> Result<Vec<Perm>, WreathError> {
        if self.p != 2 || self.n < 2 {
            return Err(WreathError::BRequiresTwo);
        }
        let rot = self.sigma(self.n - 2)?.mul(&self.sigma(self.n - 1)?);
        Ok(self.block_conjugates(self.n - 2, &rot))
    }
}

/// Triangular coordinates of an element of `P_n`: `tables[i][q]` is the
/// shift applied to digit `i` on points whose first `i` digits have value `q`.
///
/// Recursively, the last table holds the per-block translations of the
/// bottom `C_p` factors and [`Portrait::top`] is the induced element of
/// `P_{n-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Portrait {
    p: u32,
    tables: Vec<Vec<u32>>,
}

impl Portrait {
    pub fn height(&self) -> usize {
        self.tables.len()
    }

    pub fn table(&self, i: usize) -> &[u32] {
        &self.tables[i]
    }

    /// Translations in the last digit, one per block of `F_p^{n-1}`.
    pub fn translations(&self) -> &[u32] {
        self.tables.last().map(|t| &t[..]).unwrap_or(&[])
    }

    /// The induced action on the first `n − 1` digits.
    pub fn top(&self) -> Portrait {
        Portrait {
            p: self.p,
            tables: self.tables[..self.tables.len().saturating_sub(1)].to_vec(),
        }
    }

    pub fn level_sums(&self) -> Vec<u8> {
        self.tables
            .iter()
            .map(|t| (t.iter().map(|&c| c as u64).sum::<u64>() % self.p as u64) as u8)
            .collect()
    }

    /// First level with a nonzero table, or the height for the identity.
    pub fn depth(&self) -> usize {
        self.tables
            .iter()
            .position(|t| t.iter().any(|&c| c != 0))
            .unwrap_or(self.tables.len())
    }

    /// Portrait with the given tables; shifts are reduced mod `p`.
    pub fn from_tables(p: u32, tables: Vec<Vec<u32>>) -> Result<Portrait, WreathError> {
        for (i, t) in tables.iter().enumerate() {
            if (p as u64).checked_pow(i as u32) != Some(t.len() as u64) {
                return Err(WreathError::InvalidParams(format!(
                    "table {i} must have {p}^{i} entries"
                )));
            }
        }
        Ok(Portrait {
            p,
            tables: tables
                .into_iter()
                .map(|t| t.into_iter().map(|c| c % p).collect())
                .collect(),
        })
    }
}

/// An element of `T_j/[T_j,T_j] ≅ F_p^{(n-j)·p^j}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TbarVector {
    pub j: usize,
    pub coords: Vec<u8>,
}

impl TbarVector {
    pub fn zero(params: &Params, j: usize) -> TbarVector {
        TbarVector {
            j,
            coords: vec![0; params.tbar_dim(j)],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p333() -> Params {
        Params::new(3, 3).unwrap()
    }

    fn cyc(text: &str, degree: usize) -> Perm {
        Perm::parse_cycles(text, degree).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(Params::new(4, 2).is_err());
        assert!(Params::new(3, 0).is_err());
        assert!(Params::new(257, 1).is_err());
        assert!(Params::new(2, 21).is_err());
        assert_eq!(Params::new(3, 3).unwrap().r(), 2);
        assert_eq!(Params::new(7, 1).unwrap().r(), 3);
        assert_eq!(Params::new(2, 3).unwrap().r(), 1);
        assert!(Params::with_root(7, 2, 2).is_err());
        assert!(Params::with_root(7, 2, 5).is_ok());
    }

    #[test]
    fn sigma_generators_degree_27() {
        let pr = p333();
        assert_eq!(pr.sigma(2).unwrap().format_cycles(), "(0 1 2)");
        assert_eq!(
            pr.sigma(1).unwrap().format_cycles(),
            "(0 3 6)(1 4 7)(2 5 8)"
        );
        assert_eq!(
            pr.sigma(0).unwrap().format_cycles(),
            "(0 9 18)(1 10 19)(2 11 20)(3 12 21)(4 13 22)(5 14 23)(6 15 24)(7 16 25)(8 17 26)"
        );
        assert!(matches!(
            pr.sigma(3),
            Err(WreathError::LevelOutOfRange { .. })
        ));
    }

    #[test]
    fn eta_generators_degree_27() {
        let pr = p333();
        assert_eq!(
            pr.eta(2).unwrap().format_cycles(),
            "(1 2)(4 5)(7 8)(10 11)(13 14)(16 17)(19 20)(22 23)(25 26)"
        );
        assert_eq!(
            pr.eta(0).unwrap().format_cycles(),
            "(9 18)(10 19)(11 20)(12 21)(13 22)(14 23)(15 24)(16 25)(17 26)"
        );
        // From the defining formula; fixes λ_0, so no cycle joins 6 and 9.
        assert_eq!(
            pr.eta(1).unwrap().format_cycles(),
            "(3 6)(4 7)(5 8)(12 15)(13 16)(14 17)(21 24)(22 25)(23 26)"
        );
        for i in 0..3 {
            assert!(pr.eta(i).unwrap().pow(2).is_identity());
        }
    }

    #[test]
    fn rho_generators_degree_27() {
        let pr = p333();
        assert_eq!(pr.rho(2).unwrap().format_cycles(), "(3 4 5)(6 7 8)");
        assert_eq!(
            pr.rho(1).unwrap().format_cycles(),
            "(9 12 15)(10 13 16)(11 14 17)(18 21 24)(19 22 25)(20 23 26)"
        );
        assert!(pr.rho(0).is_err());
        assert!(pr.rho(3).is_err());
        for i in 1..3 {
            assert!(pr.rho(i).unwrap().pow(3).is_identity());
        }
    }

    #[test]
    fn top_base_basis_degree_27() {
        let got: Vec<String> = p333()
            .top_base_basis()
            .iter()
            .map(|x| x.format_cycles())
            .collect();
        let want = [
            "(0 1 2)",
            "(3 4 5)",
            "(6 7 8)",
            "(9 10 11)",
            "(12 13 14)",
            "(15 16 17)",
            "(18 19 20)",
            "(21 22 23)",
            "(24 25 26)",
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn membership_in_t() {
        let pr = p333();
        assert!(pr.in_t(2, &pr.sigma(2).unwrap()));
        assert!(!pr.in_t(2, &pr.sigma(1).unwrap()));
        assert!(pr.in_t(0, &pr.sigma(0).unwrap()));
        assert!(pr.in_t(1, &pr.rho(1).unwrap()));
        let c = pr.sigma(1).unwrap().comm(&pr.sigma(2).unwrap());
        assert!(pr.in_t(2, &c));
    }

    #[test]
    fn decompose_generators_and_non_members() {
        let pr = p333();
        let port = pr.decompose(&pr.sigma(2).unwrap()).unwrap();
        assert!(port.top().level_sums().iter().all(|&c| c == 0));
        let mut want = [0; 9];
        want[0] = 1;
        assert_eq!(port.translations(), &want[..]);

        let p32 = Params::new(3, 2).unwrap();
        assert!(matches!(
            p32.decompose(&cyc("(0 1)", 9)),
            Err(WreathError::NotInPn { .. })
        ));
        assert!(matches!(
            p32.decompose(&p32.eta(0).unwrap()),
            Err(WreathError::NotInPn { level: 0, .. })
        ));
    }

    #[test]
    fn abelianization_values() {
        let pr = p333();
        for i in 0..3 {
            let mut e = vec![0u8; 3];
            e[i] = 1;
            assert_eq!(pr.abelianization(&pr.sigma(i).unwrap()).unwrap(), e);
        }
        for i in 1..3 {
            let mut e = vec![0u8; 3];
            e[i] = 2;
            assert_eq!(pr.abelianization(&pr.rho(i).unwrap()).unwrap(), e);
        }
        let c = pr.sigma(0).unwrap().comm(&pr.sigma(1).unwrap());
        assert_eq!(pr.abelianization(&c).unwrap(), vec![0, 0, 0]);
    }

    fn gamma(pr: &Params) -> Perm {
        let s0 = pr.sigma(0).unwrap();
        let s1 = pr.sigma(1).unwrap();
        s1.mul(&s1.conj(&s0)).mul(&s1.conj(&s0.pow(2)))
    }

    #[test]
    fn tbar_images() {
        let pr = p333();
        let v = pr.tbar_image(1, &pr.sigma(2).unwrap()).unwrap();
        assert_eq!(v.coords, vec![0, 0, 0, 1, 0, 0]);
        let g = pr.tbar_image(1, &gamma(&pr)).unwrap();
        assert_eq!(g.coords, vec![1, 1, 1, 0, 0, 0]);
        assert!(matches!(
            pr.tbar_image(1, &pr.sigma(0).unwrap()),
            Err(WreathError::NotInTj { j: 1 })
        ));
        let t = pr.sigma(1).unwrap();
        let u = pr.sigma(2).unwrap().conj(&pr.sigma(0).unwrap());
        assert!(pr.tbar_image(1, &t.comm(&u)).unwrap().is_zero());
    }

    #[test]
    fn pj_action_properties() {
        let pr = p333();
        let s0 = pr.sigma(0).unwrap();
        let s2 = pr.sigma(2).unwrap();
        let v = pr.tbar_image(1, &s2).unwrap();
        assert_eq!(pr.pj_action(&Perm::identity(27), &v).unwrap(), v);
        assert_eq!(
            pr.pj_action(&s0, &v).unwrap(),
            pr.tbar_image(1, &s2.conj(&s0)).unwrap()
        );
        let diag = pr.tbar_image(1, &gamma(&pr)).unwrap();
        assert_eq!(pr.pj_action(&s0, &diag).unwrap(), diag);
        let bad = cyc("(0 1)", 27);
        assert!(matches!(
            pr.block_permutation(2, &cyc("(0 3)", 27)),
            Err(WreathError::BlockActionIllDefined { .. })
        ));
        assert!(pr.block_permutation(1, &bad).is_ok());
    }

    #[test]
    fn depth_examples() {
        let pr = p333();
        let gs2 = gamma(&pr).mul(&pr.sigma(2).unwrap());
        assert_eq!(pr.depth(&[gs2]).unwrap(), 1);
        assert_eq!(pr.depth(&[pr.sigma(0).unwrap()]).unwrap(), 0);
        assert_eq!(pr.depth(&[]).unwrap(), 3);
        assert_eq!(pr.depth(&[Perm::identity(27)]).unwrap(), 3);
        assert!(pr.depth(&[pr.eta(1).unwrap()]).is_err());
    }

    #[test]
    fn subgroup_b_generators() {
        let p22 = Params::new(2, 2).unwrap();
        let b = p22.subgroup_b().unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].order(), 4);
        let p23 = Params::new(2, 3).unwrap();
        let b = p23.subgroup_b().unwrap();
        assert_eq!(b.len(), 2);
        assert!(b[0].commutes_with(&b[1]));
        assert!(p333().subgroup_b().is_err());
        assert!(Params::new(2, 1).unwrap().subgroup_b().is_err());
    }

    #[test]
    fn conjugates_of_top_generator_commute() {
        for (p, n) in [(2, 3), (3, 3), (5, 2)] {
            let pr = Params::new(p, n).unwrap();
            let basis = pr.top_base_basis();
            assert_eq!(basis.len(), pr.power(n - 1));
            for a in &basis {
                for b in &basis {
                    assert!(a.commutes_with(b));
                }
            }
        }
    }

    #[test]
    fn eta_and_rho_identities() {
        for (p, n) in [(3, 3), (5, 2), (3, 4)] {
            let pr = Params::new(p, n).unwrap();
            let r = pr.r() as i64;
            for k in 0..n {
                let eta = pr.eta(k).unwrap();
                for i in 0..n {
                    let s = pr.sigma(i).unwrap();
                    let want = if i == k { s.pow(r) } else { s.clone() };
                    assert_eq!(s.conj(&eta), want);
                }
                for i in 1..n {
                    let rho = pr.rho(i).unwrap();
                    let want = if i == k { rho.pow(r) } else { rho.clone() };
                    assert_eq!(rho.conj(&eta), want);
                }
            }
        }
    }

    #[test]
    fn rho_conjugates_commute() {
        let pr = Params::new(3, 4).unwrap();
        for j in 0..3 {
            let mut conjugates = Vec::new();
            for i in j + 1..4 {
                conjugates.extend(pr.block_conjugates(j, &pr.rho(i).unwrap()));
            }
            for a in &conjugates {
                for b in &conjugates {
                    assert!(a.commutes_with(b));
                }
            }
        }
    }

    fn arb_portrait(p: u32, n: usize, min_depth: usize) -> impl Strategy<Value = Portrait> {
        let sizes: Vec<usize> = (0..n).map(|i| (p as usize).pow(i as u32)).collect();
        sizes
            .into_iter()
            .enumerate()
            .map(|(i, len)| {
                let hi = if i < min_depth { 1 } else { p };
                proptest::collection::vec(0..hi, len).boxed()
            })
            .collect::<Vec<_>>()
            .prop_map(move |tables| Portrait::from_tables(p, tables).unwrap())
    }

    proptest! {
        #[test]
        fn portrait_round_trip(port in arb_portrait(3, 3, 0)) {
            let pr = p333();
            let x = pr.reconstruct(&port).unwrap();
            prop_assert_eq!(pr.decompose(&x).unwrap(), port);
        }

        #[test]
        fn abelianization_is_a_homomorphism(a in arb_portrait(2, 4, 0), b in arb_portrait(2, 4, 0)) {
            let pr = Params::new(2, 4).unwrap();
            let x = pr.reconstruct(&a).unwrap();
            let y = pr.reconstruct(&b).unwrap();
            let ax = pr.abelianization(&x).unwrap();
            let ay = pr.abelianization(&y).unwrap();
            let sum: Vec<u8> = ax.iter().zip(&ay).map(|(u, v)| (u + v) % 2).collect();
            prop_assert_eq!(pr.abelianization(&x.mul(&y)).unwrap(), sum);
        }

        #[test]
        fn tbar_image_is_equivariant_homomorphism(
            a in arb_portrait(3, 3, 1),
            b in arb_portrait(3, 3, 1),
            g in arb_portrait(3, 3, 0),
        ) {
            let pr = p333();
            let x = pr.reconstruct(&a).unwrap();
            let y = pr.reconstruct(&b).unwrap();
            let g = pr.reconstruct(&g).unwrap();
            let tx = pr.tbar_image(1, &x).unwrap();
            let ty = pr.tbar_image(1, &y).unwrap();
            let sum: Vec<u8> = tx.coords.iter().zip(&ty.coords).map(|(u, v)| (u + v) % 3).collect();
            prop_assert_eq!(pr.tbar_image(1, &x.mul(&y)).unwrap().coords, sum);
            prop_assert_eq!(
                pr.tbar_image(1, &x.conj(&g)).unwrap(),
                pr.pj_action(&g, &tx).unwrap()
            );
        }
    }
}
