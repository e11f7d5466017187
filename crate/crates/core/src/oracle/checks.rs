use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use super::group::{bfs_closure, IndexedGroup, Sub, SymOps};
use super::{centralizer_in_sym, exponent_of, OracleError};
use crate::engine::{self, ComplementCase, Verdict};
use crate::partition::{partition_generators, PartitionSpec};
use crate::perm::Perm;
use crate::wreath::Params;

/// `P_n` enumerated with a Cayley table.
pub struct PnOracle {
    params: Params,
    group: IndexedGroup<SymOps>,
}

impl PnOracle {
    pub fn new(params: &Params, cap: usize) -> Result<PnOracle, OracleError> {
        let ops = SymOps {
            degree: params.degree(),
        };
        let set = bfs_closure(&ops, &params.sigmas(), cap)?;
        Ok(PnOracle {
            params: params.clone(),
            group: IndexedGroup::new(ops, &set)?,
        })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn group(&self) -> &IndexedGroup<SymOps> {
        &self.group
    }

    pub fn index_of(&self, x: &Perm) -> Result<usize, OracleError> {
        self.group.index_of(x).ok_or(OracleError::NotInGroup)
    }

    pub fn subgroup(&self, gens: &[Perm]) -> Result<Sub, OracleError> {
        let idx = gens
            .iter()
            .map(|g| self.index_of(g))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.group.closure(&idx))
    }

    pub fn t(&self, j: usize) -> Sub {
        self.subgroup(&self.params.t_generators(j))
            .expect("T_j lies in P_n")
    }

    pub fn exponent(&self, h: &Sub) -> u64 {
        exponent_of(self.params.p(), h.order()).expect("subgroup of a p-group")
    }

    /// Largest `j` with `N ≤ T_j`.
    pub fn depth_of(&self, n: &Sub) -> usize {
        (0..=self.params.n())
            .rev()
            .find(|&j| n.iter().all(|x| self.params.in_t(j, self.group.element(x))))
            .unwrap_or(0)
    }

    fn conj_by(&self, h: &Sub, g: &Perm) -> Result<Sub, OracleError> {
        let gens = h
            .gens
            .iter()
            .map(|&x| self.index_of(&self.group.element(x).conj(g)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.group.closure(&gens))
    }
}

/// Engine versus brute force on one normal subgroup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalRecord {
    pub order_exponent: u64,
    pub depth: usize,
    pub generators: Vec<String>,
    pub engine_depth: usize,
    pub engine_order_exponent: u64,
    pub membership_ok: bool,
    pub h_orbit_ok: bool,
    pub oracle_has_complement: bool,
    pub engine_has_complement: bool,
    pub case: Option<ComplementCase>,
    pub verification_passed: Option<bool>,
    pub complement_oracle_ok: Option<bool>,
    /// `[T_j, T_j] ≤ N`.
    pub derived_t_contained: bool,
    /// Strict descent of `N ∩ T_k` persists once it starts.
    pub descent_persists: bool,
}

impl NormalRecord {
    pub fn engine_agrees(&self) -> bool {
        self.engine_depth == self.depth
            && self.engine_order_exponent == self.order_exponent
            && self.membership_ok
            && self.h_orbit_ok
            && self.oracle_has_complement == self.engine_has_complement
            && self.verification_passed != Some(false)
            && self.complement_oracle_ok != Some(false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrosscheckReport {
    pub p: u32,
    pub n: usize,
    pub seed: u64,
    pub group_order_exponent: u64,
    pub records: Vec<NormalRecord>,
    /// For `x ∉ T_1` and `y ∈ T_1 ∩ C(x)` with `y^p = 1`, `y ∈ P_n'`.
    pub centralizer_in_derived: bool,
}

impl CrosscheckReport {
    pub fn equivalence_holds(&self) -> bool {
        self.records.iter().all(NormalRecord::engine_agrees)
    }

    pub fn invariants_hold(&self) -> bool {
        self.centralizer_in_derived
            && self
                .records
                .iter()
                .all(|r| r.derived_t_contained && r.descent_persists)
    }

    pub fn complemented(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.oracle_has_complement)
            .count()
    }
}

fn centralizer_in_derived_holds(oracle: &PnOracle) -> bool {
    let g = oracle.group();
    let p = oracle.params.p() as usize;
    let t1 = oracle.t(1);
    let derived = g.derived_subgroup();
    (0..g.order()).filter(|&x| !t1.contains(x)).all(|x| {
        t1.iter()
            .filter(|&y| g.mul(x, y) == g.mul(y, x) && g.elem_order(y) <= p)
            .all(|y| derived.contains(y))
    })
}

fn record_for(
    oracle: &PnOracle,
    n: &Sub,
    rng: &mut StdRng,
    t_subgroups: &[Sub],
    t_derived: &[Sub],
) -> Result<NormalRecord, OracleError> {
    let g = oracle.group();
    let params = &oracle.params;
    let mut members: Vec<usize> = n.iter().collect();
    members.shuffle(rng);
    let gen_idx = g.generating_subset(&members);
    let gens: Vec<Perm> = gen_idx.iter().map(|&i| g.element(i).clone()).collect();

    let handle = engine::closure_handle(params, &gens)?;
    let mut membership_ok = true;
    for x in 0..g.order() {
        if engine::member_of_n(g.element(x), &handle)? != n.contains(x) {
            membership_ok = false;
            break;
        }
    }
    let mut h_orbit_ok = true;
    for entry in engine::h_orbit_of_n(&handle)? {
        let conj = oracle.conj_by(n, &params.eta(entry.k)?)?;
        h_orbit_ok &= entry.equals_n == (conj == *n);
    }

    let depth = oracle.depth_of(n);
    let oracle_has = g.has_complement(n);
    let decision = engine::decide(&handle)?;
    let (case, verification_passed, complement_oracle_ok) = match &decision.verdict {
        Verdict::HasComplement {
            case, generators, ..
        } => {
            let report = engine::verify_complement(&handle, &decision)?;
            let perms: Vec<Perm> = generators.iter().map(|g| g.perm.clone()).collect();
            let c = oracle.subgroup(&perms)?;
            let mut ok = Some(oracle.exponent(&c)) == decision.complement_exponent(params)
                && g.intersection(&c, n).order() == 1
                && c.order() * n.order() == g.order();
            for eta in params.etas() {
                ok &= oracle.conj_by(&c, &eta)? == c;
            }
            (Some(*case), Some(report.passed()), Some(ok))
        }
        Verdict::NoComplement { .. } => (None, None, None),
    };

    let derived_t_contained = t_derived[depth].is_subset(n);
    let sizes: Vec<usize> = t_subgroups
        .iter()
        .map(|t| g.intersection(t, n).order())
        .collect();
    let descent_persists = (0..params.n())
        .all(|j| sizes[j + 1] == sizes[j] || (j..params.n()).all(|k| sizes[k + 1] < sizes[k]));

    Ok(NormalRecord {
        order_exponent: oracle.exponent(n),
        depth,
        generators: gens.iter().map(Perm::format_cycles).collect(),
        engine_depth: handle.depth(),
        engine_order_exponent: handle.order_exponent(),
        membership_ok,
        h_orbit_ok,
        oracle_has_complement: oracle_has,
        engine_has_complement: decision.has_complement(),
        case,
        verification_passed,
        complement_oracle_ok,
        derived_t_contained,
        descent_persists,
    })
}

/// Runs the engine on every normal subgroup of `P_n` and compares it with
/// exhaustive complement search. `seed` picks the generating sets.
pub fn crosscheck(params: &Params, cap: usize, seed: u64) -> Result<CrosscheckReport, OracleError> {
    let oracle = PnOracle::new(params, cap)?;
    let g = oracle.group();
    let t_subgroups: Vec<Sub> = (0..=params.n()).map(|j| oracle.t(j)).collect();
    let t_derived: Vec<Sub> = t_subgroups.iter().map(|t| g.commutator(t, t)).collect();
    let mut rng = StdRng::seed_from_u64(seed);
    let records = g
        .normal_subgroups()
        .iter()
        .map(|n| record_for(&oracle, n, &mut rng, &t_subgroups, &t_derived))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CrosscheckReport {
        p: params.p(),
        n: params.n(),
        seed,
        group_order_exponent: oracle.exponent(&g.whole()),
        records,
        centralizer_in_derived: centralizer_in_derived_holds(&oracle),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedTCheck {
    pub j: usize,
    pub order_exponent: u64,
    pub matches: bool,
}

/// The partition generators of `T'_j` against the brute-force `[T_j, T_j]`.
pub fn derived_t_check(oracle: &PnOracle, j: usize) -> Result<DerivedTCheck, OracleError> {
    let params = oracle.params();
    let t = oracle.t(j);
    let derived = oracle.group().commutator(&t, &t);
    let spec = PartitionSpec::t_derived(params, j);
    let q = oracle.subgroup(&partition_generators(params, &spec)?)?;
    Ok(DerivedTCheck {
        j,
        order_exponent: oracle.exponent(&derived),
        matches: q == derived,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxAbelianStats {
    pub p: u32,
    pub n: usize,
    pub d_exponent: u64,
    pub count: usize,
    pub normal_count: usize,
}

pub fn max_abelian_stats(params: &Params, cap: usize) -> Result<MaxAbelianStats, OracleError> {
    let oracle = PnOracle::new(params, cap)?;
    let g = oracle.group();
    let (order, winners) = g.max_abelian_subgroups();
    Ok(MaxAbelianStats {
        p: params.p(),
        n: params.n(),
        d_exponent: exponent_of(params.p(), order).expect("p-group"),
        count: winners.len(),
        normal_count: winners.iter().filter(|w| g.is_normal(w)).count(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BSeries {
    pub n: usize,
    pub order_exponent: u64,
    pub abelian: bool,
    pub normal: bool,
    /// Number of nontrivial terms of `B_1 = B`, `B_{r+1} = [P_n, B_r]`.
    pub length: usize,
    pub step_indices: Vec<usize>,
}

/// The lower central series of `B` under `P_n` for `p = 2`.
pub fn uniserial_series_of_b(n: usize, cap: usize) -> Result<BSeries, OracleError> {
    let params = Params::new(2, n)?;
    let oracle = PnOracle::new(&params, cap)?;
    let g = oracle.group();
    let b = oracle.subgroup(&params.subgroup_b()?)?;
    let whole = g.whole();
    let mut current = b.clone();
    let mut step_indices = Vec::new();
    while current.order() > 1 {
        let next = g.commutator(&whole, &current);
        step_indices.push(current.order() / next.order());
        current = next;
    }
    Ok(BSeries {
        n,
        order_exponent: oracle.exponent(&b),
        abelian: g.is_abelian(&b),
        normal: g.is_normal(&b),
        length: step_indices.len(),
        step_indices,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralizerReport {
    pub p: u32,
    pub n: usize,
    pub degree: usize,
    pub a_order: usize,
    pub a_centralizer_order: usize,
    pub a_self_centralizing: bool,
    pub pn_centralizer_order: usize,
    pub pn_self_centralizing: bool,
}

/// `C_{S_{p^n}}(A^{n-1}) ≤ A^{n-1}` and `C_{S_{p^n}}(P_n) ≤ P_n`.
pub fn centralizer_report(params: &Params, cap: usize) -> Result<CentralizerReport, OracleError> {
    let degree = params.degree();
    let top = params.n() - 1;
    let a_gens = params.top_base_basis();
    let a = bfs_closure(&SymOps { degree }, &a_gens, cap)?;
    let ca = centralizer_in_sym(&a_gens, degree, cap)?;
    let cp = centralizer_in_sym(&params.sigmas(), degree, cap)?;
    Ok(CentralizerReport {
        p: params.p(),
        n: params.n(),
        degree,
        a_order: a.len(),
        a_centralizer_order: ca.len(),
        a_self_centralizing: ca.iter().all(|x| params.in_pn(x) && params.in_t(top, x)),
        pn_centralizer_order: cp.len(),
        pn_self_centralizing: cp.iter().all(|x| params.in_pn(x)),
    })
}
