//! `T_j/[T_j,T_j]` as an `F_p P_j`-module: a direct sum of `n − j` copies of
//! the natural permutation module on `p^j` blocks, each uniserial of length
//! `p^j`.
//!
//! The socle of the whole module is spanned by the diagonals `Δ(σ_i)K`, and
//! `[P_j, T̄_j]` is the sum-zero space in every summand. Both are computed
//! here by explicit fixed-space and commutator computations; no element of
//! the group algebra is ever materialized.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fp::{self, LinalgError, LinearMap, Subspace};
use crate::wreath::{Params, TbarVector, WreathError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UniserialError {
    #[error("subspace is not invariant under P_{j}")]
    NotInvariant { j: usize },
    #[error("submodule is not a direct summand")]
    NotDirectSummand,
    #[error("vector has level {found}, expected {expected}")]
    LevelMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Wreath(#[from] WreathError),
}

/// The module `T̄_j = T_j/[T_j,T_j]` with its `P_j` block action.
#[derive(Debug, Clone)]
pub struct TbarModule {
    params: Params,
    j: usize,
    actions: Vec<LinearMap>,
}

impl TbarModule {
    pub fn new(params: &Params, j: usize) -> Result<TbarModule, WreathError> {
        if j > params.n() {
            return Err(WreathError::LevelOutOfRange {
                level: j,
                n: params.n(),
            });
        }
        let blocks = params.power(j);
        let summands = params.n() - j;
        let mut actions = Vec::with_capacity(j);
        for k in 0..j {
            let pi = params.block_permutation(j, &params.sigma(k)?)?;
            let mut full = Vec::with_capacity(blocks * summands);
            for level in 0..summands {
                full.extend(pi.iter().map(|&t| level * blocks + t));
            }
            actions.push(LinearMap::Permutation(full));
        }
        Ok(TbarModule {
            params: params.clone(),
            j,
            actions,
        })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn p(&self) -> u32 {
        self.params.p()
    }

    pub fn dim(&self) -> usize {
        self.params.tbar_dim(self.j)
    }

    pub fn blocks(&self) -> usize {
        self.params.power(self.j)
    }

    /// Number of uniserial summands, `n − j`.
    pub fn summands(&self) -> usize {
        self.params.n() - self.j
    }

    /// Block actions of `σ_0, …, σ_{j-1}`.
    pub fn actions(&self) -> &[LinearMap] {
        &self.actions
    }

    pub fn index(&self, level: usize, block: usize) -> usize {
        (level - self.j) * self.blocks() + block
    }

    /// `σ_i K`: the unit vector at block 0 of the level-`i` summand.
    pub fn generator(&self, level: usize) -> Vec<u8> {
        let mut v = vec![0; self.dim()];
        v[self.index(level, 0)] = 1;
        v
    }

    /// `Δ(σ_i)K`: all ones on the level-`i` summand.
    pub fn diagonal(&self, level: usize) -> Vec<u8> {
        let mut v = vec![0; self.dim()];
        let start = self.index(level, 0);
        v[start..start + self.blocks()].fill(1);
        v
    }

    /// The level-`i` component of `v`, embedded alone.
    pub fn component(&self, v: &[u8], level: usize) -> Vec<u8> {
        let mut out = vec![0; self.dim()];
        let start = self.index(level, 0);
        let end = start + self.blocks();
        out[start..end].copy_from_slice(&v[start..end]);
        out
    }

    pub fn spin(&self, seeds: &[Vec<u8>]) -> Result<Subspace, UniserialError> {
        Ok(fp::spin(self.p(), self.dim(), seeds, &self.actions)?)
    }

    pub fn fixed(&self) -> Result<Subspace, UniserialError> {
        Ok(fp::fixed_subspace(self.p(), &self.actions, self.dim())?)
    }

    /// `[P_j, T̄_j]`.
    pub fn augmentation(&self) -> Result<Subspace, UniserialError> {
        Ok(fp::augmentation_subspace(
            self.p(),
            &self.actions,
            self.dim(),
        )?)
    }

    fn check_vector(&self, v: &TbarVector) -> Result<(), UniserialError> {
        if v.j != self.j {
            return Err(UniserialError::LevelMismatch {
                expected: self.j,
                found: v.j,
            });
        }
        Ok(())
    }

    fn check_invariant(&self, u: &Subspace) -> Result<(), UniserialError> {
        if !u.is_invariant(&self.actions)? {
            return Err(UniserialError::NotInvariant { j: self.j });
        }
        Ok(())
    }

    /// Per-summand coordinate sums. The kernel is exactly `[P_j, T̄_j]`, so
    /// this realizes `T̄_j/[P_j,T̄_j] ≅ F_p^{n-j}`.
    pub fn mu(&self, v: &TbarVector) -> Result<SocleCoords, UniserialError> {
        self.check_vector(v)?;
        Ok(SocleCoords {
            j: self.j,
            coords: self.mu_raw(&v.coords),
        })
    }

    fn mu_raw(&self, v: &[u8]) -> Vec<u8> {
        let p = self.p();
        v.chunks(self.blocks())
            .map(|c| (c.iter().map(|&x| x as u32).sum::<u32>() % p) as u8)
            .collect()
    }

    /// `μ(U)`, the image of `U` in `T̄_j/[P_j,T̄_j]`, as a subspace of `F_p^{n-j}`.
    pub fn mu_image(&self, u: &Subspace) -> Result<Subspace, UniserialError> {
        let images: Vec<Vec<u8>> = u.basis().iter().map(|v| self.mu_raw(v)).collect();
        Ok(fp::rref(self.p(), self.summands(), &images)?)
    }

    /// `C_U(P_j)` written in the basis `Δ(σ_j)K, …, Δ(σ_{n-1})K`.
    pub fn socle_coordinates(&self, u: &Subspace) -> Result<Subspace, UniserialError> {
        self.check_invariant(u)?;
        let socle = u.intersect(&self.fixed()?)?;
        let blocks = self.blocks();
        let coords: Vec<Vec<u8>> = socle
            .basis()
            .iter()
            .map(|w| (0..self.summands()).map(|s| w[s * blocks]).collect())
            .collect();
        Ok(fp::rref(self.p(), self.summands(), &coords)?)
    }

    /// `dim (U + [P_j,T̄_j])/[P_j,T̄_j]` and `dim C_U(P_j)`; `U` is a direct
    /// summand exactly when they agree.
    pub fn summand_dims(&self, u: &Subspace) -> Result<SummandDims, UniserialError> {
        self.check_invariant(u)?;
        let aug = self.augmentation()?;
        let head = u.sum(&aug)?.dim() - aug.dim();
        let socle = u.intersect(&self.fixed()?)?.dim();
        Ok(SummandDims { head, socle })
    }

    pub fn is_direct_summand(&self, u: &Subspace) -> Result<bool, UniserialError> {
        Ok(self.summand_dims(u)?.is_summand())
    }

    /// For each summand `i`: whether `v_i ∉ [P_j, M]`, and whether projecting
    /// the cyclic module of `v` onto summand `i` is injective.
    pub fn uniserial_conditions(
        &self,
        v: &TbarVector,
    ) -> Result<Vec<SummandCondition>, UniserialError> {
        self.check_vector(v)?;
        let whole = self.spin(std::slice::from_ref(&v.coords))?;
        let sums = self.mu_raw(&v.coords);
        (self.j..self.params.n())
            .map(|level| {
                let part = self.spin(&[self.component(&v.coords, level)])?;
                Ok(SummandCondition {
                    level,
                    outside_augmentation: sums[level - self.j] != 0,
                    projection_injective: whole.dim() == part.dim(),
                })
            })
            .collect()
    }

    /// Whether the cyclic module generated by `v` is uniserial of length `p^j`.
    pub fn cyclic_uniserial_check(&self, v: &TbarVector) -> Result<bool, UniserialError> {
        Ok(self
            .uniserial_conditions(v)?
            .iter()
            .any(|c| c.outside_augmentation && c.projection_injective))
    }

    /// `M_Z`: the submodule generated by `σ_i K` for `i ∈ Z`.
    pub fn m_z(&self, z: &[usize]) -> Result<Subspace, UniserialError> {
        let seeds: Vec<Vec<u8>> = z.iter().map(|&i| self.generator(i)).collect();
        self.spin(&seeds)
    }

    /// Chooses `Z` with `T̄_j = U ⊕ M_Z`, preferring `σ_j ∉ Z` and then the
    /// lexicographically smallest `Z`.
    pub fn choose_z(&self, u: &Subspace) -> Result<ZChoice, UniserialError> {
        if !self.is_direct_summand(u)? {
            return Err(UniserialError::NotDirectSummand);
        }
        let socle = self.socle_coordinates(u)?;
        let width = self.summands();
        let p = self.p();
        let unit = |k: usize| {
            let mut e = vec![0u8; width];
            e[k] = 1;
            e
        };
        let outside_e = socle.basis().iter().any(|w| w[0] != 0);
        if outside_e {
            let mut span = socle.clone();
            let mut z = Vec::new();
            for k in 1..width {
                let next = span.sum(&fp::rref(p, width, &[unit(k)])?)?;
                if next.dim() > span.dim() {
                    span = next;
                    z.push(self.j + k);
                }
            }
            debug_assert_eq!(span.dim(), width);
            Ok(ZChoice::Selected(ZSelection {
                z,
                case: ZCase::ExcludesDepth,
            }))
        } else if socle.dim() + 1 == width {
            Ok(ZChoice::Selected(ZSelection {
                z: vec![self.j],
                case: ZCase::OnlyDepth,
            }))
        } else {
            Ok(ZChoice::NoneExists { socle })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandDims {
    pub head: usize,
    pub socle: usize,
}

impl SummandDims {
    pub fn is_summand(&self) -> bool {
        self.head == self.socle
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandCondition {
    pub level: usize,
    pub outside_augmentation: bool,
    pub projection_injective: bool,
}

/// Coordinates in the socle basis `Δ(σ_j)K, …, Δ(σ_{n-1})K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SocleCoords {
    pub j: usize,
    pub coords: Vec<u8>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZCase {
    #[serde(rename = "excludes_j")]
    ExcludesDepth,
    #[serde(rename = "only_j")]
    OnlyDepth,
}

/// Levels `i` with `σ_i ∈ Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZSelection {
    pub z: Vec<usize>,
    pub case: ZCase,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZChoice {
    Selected(ZSelection),
    /// The socle lies properly inside `span{Δ(σ_{j+1})K, …}`.
    NoneExists {
        socle: Subspace,
    },
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm;

    fn gamma(pr: &Params) -> Perm {
        let s0 = pr.sigma(0).unwrap();
        let s1 = pr.sigma(1).unwrap();
        s1.mul(&s1.conj(&s0)).mul(&s1.conj(&s0.pow(2)))
    }

    fn delta(pr: &Params) -> Perm {
        let s = |i| pr.sigma(i).unwrap();
        let inner = s(3).inverse().mul(&s(3).conj(&s(1)));
        s(2).mul(&inner.conj(&s(0)))
    }

    fn closure(module: &TbarModule, x: &Perm) -> Subspace {
        let v = module.params().tbar_image(module.j(), x).unwrap();
        module.spin(&[v.coords]).unwrap()
    }

    #[test]
    fn socle_and_augmentation_shapes() {
        for (p, n) in [(2, 3), (3, 3), (3, 4), (5, 2)] {
            let pr = Params::new(p, n).unwrap();
            for j in 0..=n {
                let m = TbarModule::new(&pr, j).unwrap();
                let fixed = m.fixed().unwrap();
                let diagonals: Vec<Vec<u8>> = (j..n).map(|i| m.diagonal(i)).collect();
                assert_eq!(fixed, fp::rref(p, m.dim(), &diagonals).unwrap());
                let aug = m.augmentation().unwrap();
                assert_eq!(aug.dim(), (n - j) * (pr.power(j) - 1));
                if j >= 1 {
                    assert!(fixed.is_subspace_of(&aug).unwrap());
                }
            }
        }
    }

    #[test]
    fn each_summand_is_uniserial() {
        for (p, n, j) in [(3, 3, 1), (3, 4, 2), (2, 4, 3), (5, 2, 1)] {
            let pr = Params::new(p, n).unwrap();
            let m = TbarModule::new(&pr, j).unwrap();
            let summand = m.spin(&[m.generator(j)]).unwrap();
            let chain = fp::lower_central_series(&summand, m.actions()).unwrap();
            assert_eq!(chain.len(), pr.power(j) + 1);
            for w in chain.windows(2) {
                assert_eq!(w[0].dim(), w[1].dim() + 1);
            }
        }
    }

    #[test]
    fn mu_values() {
        let pr = Params::new(3, 3).unwrap();
        let m = TbarModule::new(&pr, 1).unwrap();
        let x = gamma(&pr).mul(&pr.sigma(2).unwrap());
        let v = pr.tbar_image(1, &x).unwrap();
        assert_eq!(m.mu(&v).unwrap().coords, vec![0, 1]);
        let diag = TbarVector {
            j: 1,
            coords: m.diagonal(1),
        };
        assert_eq!(m.mu(&diag).unwrap().coords, vec![0, 0]);
        let aug = m.augmentation().unwrap();
        for b in aug.basis() {
            assert_eq!(m.mu_raw(b), vec![0, 0]);
        }
        assert!(m.mu(&TbarVector::zero(&pr, 2)).is_err());
    }

    #[test]
    fn socle_coordinates_examples() {
        let pr = Params::new(3, 3).unwrap();
        let m = TbarModule::new(&pr, 1).unwrap();
        let whole = Subspace::full(3, m.dim());
        assert_eq!(m.socle_coordinates(&whole).unwrap(), Subspace::full(3, 2));
        let zero = Subspace::zero(3, m.dim());
        assert!(m.socle_coordinates(&zero).unwrap().is_zero());
        let nbar = closure(&m, &gamma(&pr).mul(&pr.sigma(2).unwrap()));
        assert_eq!(nbar.dim(), 3);
        let s = m.socle_coordinates(&nbar).unwrap();
        assert_eq!(s.basis(), &[vec![0, 1]]);
        let lonely = fp::rref(3, m.dim(), &[m.generator(1)]).unwrap();
        assert!(matches!(
            m.socle_coordinates(&lonely),
            Err(UniserialError::NotInvariant { j: 1 })
        ));
    }

    #[test]
    fn direct_summand_examples() {
        let pr = Params::new(3, 3).unwrap();
        let m = TbarModule::new(&pr, 1).unwrap();
        assert!(m.is_direct_summand(&Subspace::full(3, m.dim())).unwrap());
        let nbar = closure(&m, &gamma(&pr).mul(&pr.sigma(2).unwrap()));
        assert!(m.is_direct_summand(&nbar).unwrap());

        let p4 = Params::new(3, 4).unwrap();
        let m2 = TbarModule::new(&p4, 2).unwrap();
        let nbar = closure(&m2, &delta(&p4));
        assert!(!m2.is_direct_summand(&nbar).unwrap());
    }

    #[test]
    fn delta_matches_the_two_copy_vector() {
        let p4 = Params::new(3, 4).unwrap();
        let v = p4.tbar_image(2, &delta(&p4)).unwrap();
        let mut want = vec![0u8; 18];
        want[0] = 1;
        want[9 + 3] = 2;
        want[9 + 4] = 1;
        assert_eq!(v.coords, want);
    }

    #[test]
    fn cyclic_uniserial_examples() {
        let pr = Params::new(3, 3).unwrap();
        let m = TbarModule::new(&pr, 1).unwrap();
        let v = pr
            .tbar_image(1, &gamma(&pr).mul(&pr.sigma(2).unwrap()))
            .unwrap();
        let conds = m.uniserial_conditions(&v).unwrap();
        assert!(m.cyclic_uniserial_check(&v).unwrap());
        assert!(conds
            .iter()
            .any(|c| c.level == 2 && c.outside_augmentation && c.projection_injective));
        assert!(!conds[0].outside_augmentation);

        let p4 = Params::new(3, 4).unwrap();
        let m2 = TbarModule::new(&p4, 2).unwrap();
        let v = p4.tbar_image(2, &delta(&p4)).unwrap();
        let conds = m2.uniserial_conditions(&v).unwrap();
        assert!(conds[0].outside_augmentation);
        assert!(!conds[0].projection_injective);
        assert!(!conds[1].outside_augmentation);
        assert!(!m2.cyclic_uniserial_check(&v).unwrap());

        assert!(!m.cyclic_uniserial_check(&TbarVector::zero(&pr, 1)).unwrap());
    }

    #[test]
    fn uniserial_cyclic_modules_have_full_length() {
        let pr = Params::new(3, 3).unwrap();
        let m = TbarModule::new(&pr, 1).unwrap();
        // Every vector of F_3^6 with a few small supports.
        for mask in 0..729u32 {
            let coords: Vec<u8> = (0..6).map(|k| ((mask / 3u32.pow(k)) % 3) as u8).collect();
            let v = TbarVector { j: 1, coords };
            if m.cyclic_uniserial_check(&v).unwrap() {
                assert_eq!(m.spin(std::slice::from_ref(&v.coords)).unwrap().dim(), 3);
            }
        }
    }

    #[test]
    fn choose_z_examples() {
        let pr = Params::new(3, 3).unwrap();
        let m0 = TbarModule::new(&pr, 0).unwrap();
        let nbar = closure(&m0, &pr.sigma(0).unwrap());
        assert_eq!(
            m0.choose_z(&nbar).unwrap(),
            ZChoice::Selected(ZSelection {
                z: vec![1, 2],
                case: ZCase::ExcludesDepth
            })
        );

        let m1 = TbarModule::new(&pr, 1).unwrap();
        let nbar = closure(&m1, &gamma(&pr).mul(&pr.sigma(2).unwrap()));
        assert_eq!(
            m1.choose_z(&nbar).unwrap(),
            ZChoice::Selected(ZSelection {
                z: vec![1],
                case: ZCase::OnlyDepth
            })
        );
        assert_eq!(
            m1.choose_z(&Subspace::full(3, 6)).unwrap(),
            ZChoice::Selected(ZSelection {
                z: vec![],
                case: ZCase::ExcludesDepth
            })
        );

        let p4 = Params::new(3, 4).unwrap();
        let m = TbarModule::new(&p4, 1).unwrap();
        let nbar = closure(&m, &gamma(&p4).mul(&p4.sigma(2).unwrap()));
        assert!(matches!(
            m.choose_z(&nbar).unwrap(),
            ZChoice::NoneExists { .. }
        ));

        let m2 = TbarModule::new(&p4, 2).unwrap();
        let nbar = closure(&m2, &delta(&p4));
        assert_eq!(m2.choose_z(&nbar), Err(UniserialError::NotDirectSummand));
    }

    #[test]
    fn m_z_complements_every_summand_choice() {
        // Every invariant subspace spun from one or two vectors of T̄_1, p = 3, n = 3.
        let pr = Params::new(3, 3).unwrap();
        let m = TbarModule::new(&pr, 1).unwrap();
        for mask in 1..729u32 {
            let coords: Vec<u8> = (0..6).map(|k| ((mask / 3u32.pow(k)) % 3) as u8).collect();
            let u = m.spin(&[coords]).unwrap();
            if !m.is_direct_summand(&u).unwrap() {
                continue;
            }
            let ZChoice::Selected(sel) = m.choose_z(&u).unwrap() else {
                continue;
            };
            let mz = m.m_z(&sel.z).unwrap();
            assert!(u.intersect(&mz).unwrap().is_zero());
            assert_eq!(u.dim() + mz.dim(), m.dim());
            let socle = m.socle_coordinates(&u).unwrap();
            assert_eq!(socle.dim() + sel.z.len(), m.summands());
            assert_eq!(m.mu_image(&u).unwrap(), socle);
        }
    }
}
