//! Complement decision for normal subgroups of `P_n`.
//!
//! A normal subgroup `N` of depth `j` contains `K = [T_j, T_j]`, so it is
//! determined by the `P_j`-submodule `N̄ = N/K` of `T̄_j`. Whether `N` has a
//! complement is then a question about `N̄` alone: it must be a direct
//! summand whose socle is not properly inside `span{Δ(σ_{j+1})K, …}`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fp::{LinalgError, Subspace};
use crate::perm::Perm;
use crate::uniserial::{TbarModule, UniserialError, ZCase, ZChoice};
use crate::wreath::{Params, WreathError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("generator {index} has degree {found}, expected {expected}")]
    DegreeMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("decision has no complement to verify")]
    NoComplementToVerify,
    #[error(transparent)]
    Wreath(#[from] WreathError),
    #[error(transparent)]
    Uniserial(#[from] UniserialError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `N` given as the normal closure of `generators`.
#[derive(Debug, Clone)]
pub struct NormalSubgroupHandle {
    params: Params,
    generators: Vec<Perm>,
    j: usize,
    nbar: Subspace,
    order_exponent: u64,
}

/// `log_p |[T_j, T_j]|`, i.e. `p^j · (log_p|P_{n-j}| − (n − j))`.
pub fn commutator_exponent(params: &Params, j: usize) -> u64 {
    let m = params.n() - j;
    params.power(j) as u64 * (params.sylow_exponent(m) - m as u64)
}

pub fn closure_handle(
    params: &Params,
    generators: &[Perm],
) -> Result<NormalSubgroupHandle, EngineError> {
    for (index, g) in generators.iter().enumerate() {
        if g.degree() != params.degree() {
            return Err(EngineError::DegreeMismatch {
                index,
                expected: params.degree(),
                found: g.degree(),
            });
        }
    }
    let j = params.depth(generators)?;
    let module = TbarModule::new(params, j)?;
    let seeds = generators
        .iter()
        .map(|g| Ok(params.tbar_image(j, g)?.coords))
        .collect::<Result<Vec<_>, WreathError>>()?;
    let nbar = module.spin(&seeds)?;
    let order_exponent = commutator_exponent(params, j) + nbar.dim() as u64;
    Ok(NormalSubgroupHandle {
        params: params.clone(),
        generators: generators.to_vec(),
        j,
        nbar,
        order_exponent,
    })
}

impl NormalSubgroupHandle {
    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn depth(&self) -> usize {
        self.j
    }

    pub fn nbar(&self) -> &Subspace {
        &self.nbar
    }

    /// `e` with `|N| = p^e`.
    pub fn order_exponent(&self) -> u64 {
        self.order_exponent
    }

    pub fn is_trivial(&self) -> bool {
        self.j == self.params.n()
    }

    pub fn module(&self) -> TbarModule {
        TbarModule::new(&self.params, self.j).expect("depth is at most n")
    }

    /// Same subgroup: equal depth and equal canonical `N̄`.
    pub fn same_subgroup(&self, other: &NormalSubgroupHandle) -> bool {
        self.j == other.j && self.nbar == other.nbar
    }
}

pub fn member_of_n(x: &Perm, h: &NormalSubgroupHandle) -> Result<bool, EngineError> {
    let params = &h.params;
    params.decompose(x)?;
    if !params.in_t(h.j, x) {
        return Ok(false);
    }
    let v = params.tbar_image(h.j, x)?;
    Ok(h.nbar.contains(&v.coords)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComplementCase {
    /// `N = 1`, complement `P_n`.
    #[serde(rename = "trivial_N")]
    TrivialN,
    /// `C = ⟨σ_0, …, σ_{j-1}, ρ_i : i ∈ Z⟩` with `j ∉ Z`.
    #[serde(rename = "excludes_j")]
    ExcludesDepth,
    /// `C = ⟨σ_0, …, σ_j⟩`.
    #[serde(rename = "only_j")]
    OnlyDepth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NoComplementReason {
    NotSummand,
    SocleProperInE,
}

/// Why no complement exists: the two dimensions of the summand test and the
/// socle coordinates of `N̄`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub head_dim: usize,
    pub socle_dim: usize,
    pub socle_coordinates: Subspace,
}

/// A complement generator and its symbolic name (`σ_i` or `ρ_i`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedGenerator {
    pub label: String,
    pub perm: Perm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    HasComplement {
        case: ComplementCase,
        z: Vec<usize>,
        generators: Vec<NamedGenerator>,
    },
    NoComplement {
        reason: NoComplementReason,
        witness: Witness,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplementDecision {
    pub j: usize,
    pub verdict: Verdict,
}

impl ComplementDecision {
    pub fn has_complement(&self) -> bool {
        matches!(self.verdict, Verdict::HasComplement { .. })
    }

    /// `⟨σ_0, σ_1⟩`-style description, or `none (<reason>)`.
    pub fn describe(&self) -> String {
        match &self.verdict {
            Verdict::HasComplement { generators, .. } => {
                let names: Vec<&str> = generators.iter().map(|g| g.label.as_str()).collect();
                format!("⟨{}⟩", names.join(", "))
            }
            Verdict::NoComplement { reason, .. } => format!("none ({reason:?})"),
        }
    }

    /// `log_p |C|` for a complement.
    pub fn complement_exponent(&self, params: &Params) -> Option<u64> {
        let Verdict::HasComplement { case, z, .. } = &self.verdict else {
            return None;
        };
        let j = self.j;
        Some(match case {
            ComplementCase::TrivialN => params.sylow_exponent(params.n()),
            ComplementCase::ExcludesDepth => {
                params.sylow_exponent(j) + (z.len() * params.power(j)) as u64
            }
            ComplementCase::OnlyDepth => params.sylow_exponent(j + 1),
        })
    }
}

fn sigma_named(params: &Params, i: usize) -> Result<NamedGenerator, WreathError> {
    Ok(NamedGenerator {
        label: format!("σ_{i}"),
        perm: params.sigma(i)?,
    })
}

fn rho_named(params: &Params, i: usize) -> Result<NamedGenerator, WreathError> {
    Ok(NamedGenerator {
        label: format!("ρ_{i}"),
        perm: params.rho(i)?,
    })
}

pub fn decide(h: &NormalSubgroupHandle) -> Result<ComplementDecision, EngineError> {
    let params = &h.params;
    let j = h.j;
    if h.is_trivial() {
        let generators = (0..params.n())
            .map(|i| sigma_named(params, i))
            .collect::<Result<_, _>>()?;
        return Ok(ComplementDecision {
            j,
            verdict: Verdict::HasComplement {
                case: ComplementCase::TrivialN,
                z: Vec::new(),
                generators,
            },
        });
    }
    let module = h.module();
    let dims = module.summand_dims(&h.nbar)?;
    let witness = |socle_coordinates| Witness {
        head_dim: dims.head,
        socle_dim: dims.socle,
        socle_coordinates,
    };
    if !dims.is_summand() {
        return Ok(ComplementDecision {
            j,
            verdict: Verdict::NoComplement {
                reason: NoComplementReason::NotSummand,
                witness: witness(module.socle_coordinates(&h.nbar)?),
            },
        });
    }
    let verdict = match module.choose_z(&h.nbar)? {
        ZChoice::NoneExists { socle } => Verdict::NoComplement {
            reason: NoComplementReason::SocleProperInE,
            witness: witness(socle),
        },
        ZChoice::Selected(sel) => {
            let mut generators = (0..j)
                .map(|i| sigma_named(params, i))
                .collect::<Result<Vec<_>, _>>()?;
            let case = match sel.case {
                ZCase::ExcludesDepth => {
                    for &i in &sel.z {
                        generators.push(rho_named(params, i)?);
                    }
                    ComplementCase::ExcludesDepth
                }
                ZCase::OnlyDepth => {
                    generators.push(sigma_named(params, j)?);
                    ComplementCase::OnlyDepth
                }
            };
            Verdict::HasComplement {
                case,
                z: sel.z,
                generators,
            }
        }
    };
    Ok(ComplementDecision { j, verdict })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderCheck {
    pub n_exponent: u64,
    pub c_exponent: u64,
    pub pn_exponent: u64,
    pub ok: bool,
}

/// Checks on `D = C ∩ T_j`, spanned by the `P_j`-conjugates of the top part
/// of the complement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionCheck {
    pub rank: usize,
    pub expected_rank: usize,
    pub meet_dim: usize,
    pub elementary_abelian: bool,
    pub normalized: bool,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvarianceCheck {
    /// `(k, label)` pairs with `^{η_k}g ∉ {g, g^r}`.
    pub failures: Vec<(usize, String)>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub order: OrderCheck,
    pub intersection: IntersectionCheck,
    pub h_invariance: InvarianceCheck,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.order.ok && self.intersection.ok && self.h_invariance.ok
    }
}

pub fn verify_complement(
    h: &NormalSubgroupHandle,
    decision: &ComplementDecision,
) -> Result<VerificationReport, EngineError> {
    let params = &h.params;
    let Verdict::HasComplement {
        case,
        z,
        generators,
    } = &decision.verdict
    else {
        return Err(EngineError::NoComplementToVerify);
    };
    let c_exponent = decision
        .complement_exponent(params)
        .expect("verdict has a complement");
    let pn_exponent = params.sylow_exponent(params.n());
    let order = OrderCheck {
        n_exponent: h.order_exponent,
        c_exponent,
        pn_exponent,
        ok: h.order_exponent + c_exponent == pn_exponent,
    };

    let j = decision.j;
    let tops: Vec<Perm> = match case {
        ComplementCase::TrivialN => Vec::new(),
        ComplementCase::ExcludesDepth => {
            z.iter().map(|&i| params.rho(i)).collect::<Result<_, _>>()?
        }
        ComplementCase::OnlyDepth => vec![params.sigma(j)?],
    };
    let conjugates: Vec<Perm> = tops
        .iter()
        .flat_map(|t| params.block_conjugates(j, t))
        .collect();
    let intersection = if conjugates.is_empty() {
        IntersectionCheck {
            rank: 0,
            expected_rank: 0,
            meet_dim: 0,
            elementary_abelian: true,
            normalized: true,
            ok: true,
        }
    } else {
        let module = h.module();
        let images = conjugates
            .iter()
            .map(|d| Ok(params.tbar_image(j, d)?.coords))
            .collect::<Result<Vec<_>, WreathError>>()?;
        let span = crate::fp::rref(params.p(), module.dim(), &images)?;
        let meet_dim = span.intersect(&h.nbar)?.dim();
        let p = params.p() as u64;
        let elementary_abelian = conjugates.iter().all(|d| d.order() == p)
            && conjugates
                .iter()
                .enumerate()
                .all(|(a, x)| conjugates[a + 1..].iter().all(|y| x.commutes_with(y)));
        let normalized = (0..j).all(|k| {
            let s = params.sigma(k).expect("k < j ≤ n");
            conjugates.iter().all(|d| conjugates.contains(&d.conj(&s)))
        });
        let expected_rank = conjugates.len();
        IntersectionCheck {
            rank: span.dim(),
            expected_rank,
            meet_dim,
            elementary_abelian,
            normalized,
            ok: span.dim() == expected_rank && meet_dim == 0 && elementary_abelian && normalized,
        }
    };

    let r = params.r() as i64;
    let mut failures = Vec::new();
    for (k, eta) in params.etas().iter().enumerate() {
        for g in generators {
            let image = g.perm.conj(eta);
            if image != g.perm && image != g.perm.pow(r) {
                failures.push((k, g.label.clone()));
            }
        }
    }
    let h_invariance = InvarianceCheck {
        ok: failures.is_empty(),
        failures,
    };

    Ok(VerificationReport {
        order,
        intersection,
        h_invariance,
    })
}

/// One entry of the `H`-orbit of `N`: the handle of `^{η_k}N`.
#[derive(Debug, Clone)]
pub struct HOrbitEntry {
    pub k: usize,
    pub handle: NormalSubgroupHandle,
    pub equals_n: bool,
}

pub fn h_orbit_of_n(h: &NormalSubgroupHandle) -> Result<Vec<HOrbitEntry>, EngineError> {
    let params = &h.params;
    params
        .etas()
        .iter()
        .enumerate()
        .map(|(k, eta)| {
            let gens: Vec<Perm> = h.generators.iter().map(|g| g.conj(eta)).collect();
            let handle = closure_handle(params, &gens)?;
            Ok(HOrbitEntry {
                k,
                equals_n: handle.same_subgroup(h),
                handle,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(pr: &Params, i: usize) -> Perm {
        pr.sigma(i).unwrap()
    }

    fn gamma_sigma2(pr: &Params) -> Perm {
        let g = s(pr, 1)
            .mul(&s(pr, 1).conj(&s(pr, 0)))
            .mul(&s(pr, 1).conj(&s(pr, 0).pow(2)));
        g.mul(&s(pr, 2))
    }

    fn delta(pr: &Params) -> Perm {
        let inner = s(pr, 3).inverse().mul(&s(pr, 3).conj(&s(pr, 1)));
        s(pr, 2).mul(&inner.conj(&s(pr, 0)))
    }

    fn labels(d: &ComplementDecision) -> Vec<String> {
        match &d.verdict {
            Verdict::HasComplement { generators, .. } => {
                generators.iter().map(|g| g.label.clone()).collect()
            }
            _ => Vec::new(),
        }
    }

    #[test]
    fn handle_orders() {
        let pr = Params::new(3, 3).unwrap();
        let h = closure_handle(&pr, &[s(&pr, 0)]).unwrap();
        assert_eq!((h.depth(), h.nbar().dim(), h.order_exponent()), (0, 1, 11));
        let h = closure_handle(&pr, &[gamma_sigma2(&pr)]).unwrap();
        assert_eq!((h.depth(), h.nbar().dim(), h.order_exponent()), (1, 3, 9));
        let h = closure_handle(&pr, &[]).unwrap();
        assert!(h.is_trivial());
        assert_eq!(h.order_exponent(), 0);
        let h = closure_handle(&pr, &pr.sigmas()).unwrap();
        assert_eq!(h.order_exponent(), 13);
        let bad = Perm::identity(9);
        assert!(matches!(
            closure_handle(&pr, &[bad]),
            Err(EngineError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn membership() {
        let pr = Params::new(3, 3).unwrap();
        let h = closure_handle(&pr, &[gamma_sigma2(&pr)]).unwrap();
        assert!(member_of_n(&gamma_sigma2(&pr), &h).unwrap());
        let t = s(&pr, 1);
        let u = s(&pr, 2).conj(&s(&pr, 0));
        let v = s(&pr, 1).conj(&s(&pr, 0));
        assert!(member_of_n(&t.comm(&u), &h).unwrap());
        assert!(member_of_n(&t.comm(&v), &h).unwrap());
        assert!(!member_of_n(&s(&pr, 0), &h).unwrap());
        assert!(!member_of_n(&s(&pr, 2), &h).unwrap());
        let eta = pr.eta(0).unwrap();
        assert!(member_of_n(&eta, &h).is_err());
    }

    #[test]
    fn corpus_decisions() {
        let p3 = Params::new(3, 3).unwrap();
        let d = decide(&closure_handle(&p3, &[s(&p3, 0)]).unwrap()).unwrap();
        assert_eq!(labels(&d), ["ρ_1", "ρ_2"]);
        assert_eq!(d.complement_exponent(&p3), Some(2));

        let d = decide(&closure_handle(&p3, &[gamma_sigma2(&p3)]).unwrap()).unwrap();
        assert_eq!(labels(&d), ["σ_0", "σ_1"]);
        assert_eq!(d.describe(), "⟨σ_0, σ_1⟩");
        assert_eq!(d.complement_exponent(&p3), Some(4));

        let p4 = Params::new(3, 4).unwrap();
        let d = decide(&closure_handle(&p4, &[gamma_sigma2(&p4)]).unwrap()).unwrap();
        assert!(matches!(
            d.verdict,
            Verdict::NoComplement {
                reason: NoComplementReason::SocleProperInE,
                ..
            }
        ));
        let d = decide(&closure_handle(&p4, &[delta(&p4)]).unwrap()).unwrap();
        assert!(matches!(
            d.verdict,
            Verdict::NoComplement {
                reason: NoComplementReason::NotSummand,
                ..
            }
        ));
    }

    #[test]
    fn extremes() {
        let pr = Params::new(3, 3).unwrap();
        let h = closure_handle(&pr, &[]).unwrap();
        let d = decide(&h).unwrap();
        assert_eq!(labels(&d), ["σ_0", "σ_1", "σ_2"]);
        assert!(verify_complement(&h, &d).unwrap().passed());

        let h = closure_handle(&pr, &pr.sigmas()).unwrap();
        let d = decide(&h).unwrap();
        assert!(labels(&d).is_empty());
        assert!(verify_complement(&h, &d).unwrap().passed());
    }

    #[test]
    fn verification_of_corpus_complements() {
        let pr = Params::new(3, 3).unwrap();
        let h = closure_handle(&pr, &[s(&pr, 0)]).unwrap();
        let rep = verify_complement(&h, &decide(&h).unwrap()).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.intersection.rank, 2);
        assert_eq!((rep.order.n_exponent, rep.order.c_exponent), (11, 2));

        let h = closure_handle(&pr, &[gamma_sigma2(&pr)]).unwrap();
        let rep = verify_complement(&h, &decide(&h).unwrap()).unwrap();
        assert!(rep.passed());
        assert_eq!((rep.order.n_exponent, rep.order.c_exponent), (9, 4));
        assert_eq!(rep.intersection.rank, 3);

        let p4 = Params::new(3, 4).unwrap();
        let h = closure_handle(&p4, &[delta(&p4)]).unwrap();
        assert_eq!(
            verify_complement(&h, &decide(&h).unwrap()),
            Err(EngineError::NoComplementToVerify)
        );
    }

    #[test]
    fn h_orbit() {
        let pr = Params::new(3, 3).unwrap();
        let h = closure_handle(&pr, &[gamma_sigma2(&pr)]).unwrap();
        let orbit = h_orbit_of_n(&h).unwrap();
        assert!(!orbit[2].equals_n);
        let h = closure_handle(&pr, &[s(&pr, 0)]).unwrap();
        assert!(h_orbit_of_n(&h).unwrap().iter().all(|e| e.equals_n));
        let h = closure_handle(&pr, &[s(&pr, 1), s(&pr, 2)]).unwrap();
        assert!(h_orbit_of_n(&h).unwrap().iter().all(|e| e.equals_n));
    }
}
