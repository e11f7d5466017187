//! The Sylow `p`-subgroup `P_n` of `S_{p^n}` as an explicit permutation
//! group, and a decision procedure for complements of its normal subgroups.
//!
//! Points `0..p^n` are identified with digit strings `(λ_0, …, λ_{n-1})`,
//! `λ_0` most significant. Products apply the right factor first, and
//! conjugation is `^g x = g·x·g⁻¹`.

pub mod corpus;
pub mod engine;
pub mod fp;
pub mod gallery;
pub mod oracle;
pub mod partition;
pub mod perm;
pub mod uniserial;
pub mod words;
pub mod wreath;
