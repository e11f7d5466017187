//! Partition subgroups `Q = A^0_{i_0} A^1_{i_1} ⋯ A^{n-1}_{i_{n-1}}`.
//!
//! `A^k` is the base group of `P_{k+1}`, a natural permutation module for
//! `P_k` on `p^k` blocks, and `A^k_i` is the `i`-th term of its lower
//! central series. Conjugation by the `A`-parts is trivial on the abelian
//! `A^k`, so the `P_k` block action is all that is needed to build the chain.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{self, ComplementCase, EngineError, Verdict};
use crate::fp::{self, LinalgError, LinearMap, Subspace};
use crate::perm::Perm;
use crate::wreath::{Params, WreathError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("malformed index list at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("expected {expected} indices, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("index i_{level} = {index} exceeds p^{level} = {max}")]
    IndexOutOfRange {
        level: usize,
        index: usize,
        max: usize,
    },
    #[error("partition subgroup is not normal")]
    NotNormal,
    #[error(transparent)]
    Wreath(#[from] WreathError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Parses `"i0,i1,..."`; commas and whitespace both separate.
pub fn parse_indices(text: &str) -> Result<Vec<usize>, PartitionError> {
    let mut out = Vec::new();
    let mut pos = 0;
    for piece in text.split(|c: char| c == ',' || c.is_whitespace()) {
        if !piece.is_empty() {
            let value = piece.parse::<usize>().map_err(|e| PartitionError::Parse {
                pos,
                msg: e.to_string(),
            })?;
            out.push(value);
        }
        pos += piece.len() + 1;
    }
    if out.is_empty() {
        return Err(PartitionError::Parse {
            pos: 0,
            msg: "empty index list".into(),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PartitionSpec {
    indices: Vec<usize>,
}

impl PartitionSpec {
    pub fn new(params: &Params, indices: Vec<usize>) -> Result<PartitionSpec, PartitionError> {
        if indices.len() != params.n() {
            return Err(PartitionError::WrongLength {
                expected: params.n(),
                found: indices.len(),
            });
        }
        for (level, &index) in indices.iter().enumerate() {
            let max = params.power(level);
            if index > max {
                return Err(PartitionError::IndexOutOfRange { level, index, max });
            }
        }
        Ok(PartitionSpec { indices })
    }

    pub fn parse(params: &Params, text: &str) -> Result<PartitionSpec, PartitionError> {
        PartitionSpec::new(params, parse_indices(text)?)
    }

    /// `T_j = A^j_0 ⋯ A^{n-1}_0`.
    pub fn t(params: &Params, j: usize) -> PartitionSpec {
        let indices = (0..params.n())
            .map(|k| if k < j { params.power(k) } else { 0 })
            .collect();
        PartitionSpec { indices }
    }

    /// `T'_j = A^{j+1}_{p^j} ⋯ A^{n-1}_{p^j}`.
    pub fn t_derived(params: &Params, j: usize) -> PartitionSpec {
        let indices = (0..params.n())
            .map(|k| {
                if k <= j {
                    params.power(k)
                } else {
                    params.power(j)
                }
            })
            .collect();
        PartitionSpec { indices }
    }

    /// Every valid spec, in lexicographic order of the index vector.
    pub fn all(params: &Params) -> Vec<PartitionSpec> {
        let mut out = vec![Vec::new()];
        for k in 0..params.n() {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<usize>| {
                    (0..=params.power(k)).map(move |i| {
                        let mut v = prefix.clone();
                        v.push(i);
                        v
                    })
                })
                .collect();
        }
        out.into_iter()
            .map(|indices| PartitionSpec { indices })
            .collect()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Smallest `j` with `i_j < p^j`; `n` for the trivial subgroup.
    pub fn depth(&self, params: &Params) -> usize {
        self.indices
            .iter()
            .enumerate()
            .position(|(k, &i)| i < params.power(k))
            .unwrap_or(self.indices.len())
    }

    pub fn format(&self) -> String {
        let parts: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        parts.join(",")
    }
}

fn level_actions(params: &Params, k: usize) -> Result<Vec<LinearMap>, WreathError> {
    (0..k)
        .map(|m| {
            Ok(LinearMap::Permutation(
                params.block_permutation(k, &params.sigma(m)?)?,
            ))
        })
        .collect()
}

/// `A^k_0 ⊃ A^k_1 ⊃ ⋯ ⊃ A^k_{p^k} = 0` inside `F_p^{p^k}`.
pub fn level_subgroup_chain(params: &Params, k: usize) -> Result<Vec<Subspace>, PartitionError> {
    if k >= params.n() {
        return Err(WreathError::LevelOutOfRange {
            level: k,
            n: params.n(),
        }
        .into());
    }
    let actions = level_actions(params, k)?;
    let full = Subspace::full(params.p(), params.power(k));
    Ok(fp::lower_central_series(&full, &actions)?)
}

/// `∏_b (^{x_b} σ_k)^{v_b}` for `v ∈ F_p^{p^k}`.
pub fn level_element(params: &Params, k: usize, v: &[u8]) -> Result<Perm, WreathError> {
    let sigma = params.sigma(k)?;
    let mut acc = Perm::identity(params.degree());
    for (b, &c) in v.iter().enumerate() {
        if c != 0 {
            let conj = sigma.conj(&params.prefix_transversal(k, b));
            acc = acc.mul(&conj.pow(c as i64));
        }
    }
    Ok(acc)
}

pub fn partition_generators(
    params: &Params,
    spec: &PartitionSpec,
) -> Result<Vec<Perm>, PartitionError> {
    let mut gens = Vec::new();
    for (k, &i) in spec.indices.iter().enumerate() {
        let chain = level_subgroup_chain(params, k)?;
        for v in chain[i].basis() {
            gens.push(level_element(params, k, v)?);
        }
    }
    Ok(gens)
}

/// Normal iff `i_k ≤ p^j` for every `k ≥ j`, where `j` is the depth.
pub fn partition_is_normal(params: &Params, spec: &PartitionSpec) -> bool {
    let j = spec.depth(params);
    if j == params.n() {
        return true;
    }
    let bound = params.power(j);
    spec.indices[j..].iter().all(|&i| i <= bound)
}

/// `i_j = 0` and `i_k ∈ {0, p^j}` for all `k ≥ j`.
pub fn partition_has_complement(
    params: &Params,
    spec: &PartitionSpec,
) -> Result<bool, PartitionError> {
    if !partition_is_normal(params, spec) {
        return Err(PartitionError::NotNormal);
    }
    let j = spec.depth(params);
    if j == params.n() {
        return Ok(true);
    }
    let top = params.power(j);
    Ok(spec.indices[j] == 0 && spec.indices[j..].iter().all(|&i| i == 0 || i == top))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub indices: Vec<usize>,
    pub depth: usize,
    pub normal: bool,
    pub has_complement: Option<bool>,
    /// Engine verdict on the normal closure of the generators.
    pub engine_has_complement: Option<bool>,
    /// Levels `k` with `ρ_k` in the engine's complement, when it is of the
    /// shape `⟨σ_0, …, σ_{j-1}, ρ_k : k ∈ Z⟩`.
    pub engine_z: Option<Vec<usize>>,
    pub engine_crosscheck: Option<bool>,
}

pub fn partition_report(
    params: &Params,
    spec: &PartitionSpec,
) -> Result<PartitionReport, PartitionError> {
    let normal = partition_is_normal(params, spec);
    let mut report = PartitionReport {
        indices: spec.indices.clone(),
        depth: spec.depth(params),
        normal,
        has_complement: None,
        engine_has_complement: None,
        engine_z: None,
        engine_crosscheck: None,
    };
    if normal {
        let closed = partition_has_complement(params, spec)?;
        let gens = partition_generators(params, spec)?;
        let handle = engine::closure_handle(params, &gens)?;
        let decision = engine::decide(&handle)?;
        report.has_complement = Some(closed);
        report.engine_has_complement = Some(decision.has_complement());
        if let Verdict::HasComplement {
            case: ComplementCase::ExcludesDepth,
            z,
            ..
        } = &decision.verdict
        {
            report.engine_z = Some(z.clone());
        }
        report.engine_crosscheck = Some(closed == decision.has_complement());
    }
    Ok(report)
}
