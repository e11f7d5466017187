//! Brute-force ground truth at desk scale.
//!
//! Everything here enumerates groups element by element, so it only runs on
//! groups of a few thousand elements. It exists to check the linear-algebra
//! engine, never to replace it.

mod checks;
mod group;
mod sym;

use thiserror::Error;

pub use checks::{
    centralizer_report, crosscheck, derived_t_check, max_abelian_stats, uniserial_series_of_b,
    BSeries, CentralizerReport, CrosscheckReport, DerivedTCheck, MaxAbelianStats, NormalRecord,
    PnOracle,
};
pub use group::{bfs_closure, GroupOps, GroupSet, IndexedGroup, Sub, SymOps, MAX_TABLE};
pub use sym::centralizer_in_sym;

use crate::engine::EngineError;
use crate::partition::PartitionError;
use crate::wreath::WreathError;

/// Default element cap for BFS enumeration.
pub const DEFAULT_CAP: usize = 1 << 15;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("group enumeration exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("permutation has degree {found}, expected {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("element is not in the enumerated group")]
    NotInGroup,
    #[error(transparent)]
    Wreath(#[from] WreathError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// `log_p(order)`, or `None` when `order` is not a power of `p`.
pub fn exponent_of(p: u32, order: usize) -> Option<u64> {
    let mut e = 0;
    let mut m = order;
    while m > 1 {
        if !m.is_multiple_of(p as usize) {
            return None;
        }
        m /= p as usize;
        e += 1;
    }
    (m == 1).then_some(e)
}
