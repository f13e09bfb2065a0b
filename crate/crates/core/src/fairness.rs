//! Checkers for equitability (EQ/EQ1/EQX), envy-freeness (EF/EF1/EFX),
//! welfare functions, and Pareto-dominance helpers.
//!
//! Equitability removals are valued by the owner of the bundle they are
//! removed from; envy removals are valued by the envious agent. Goods are
//! items valued >= 0 by the relevant agent and chores are items valued <= 0,
//! so a zero-valued item qualifies on both sides. The `ZeroPolicy` toggle
//! restricts EQX candidates to strictly non-zero marginals.

use crate::model::{Allocation, Instance};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FairnessError {
    #[error("operation requires symmetric tri-valued valuations")]
    NotTrivalued,
    #[error("operation requires a complete allocation")]
    NotComplete,
}

/// Candidate quantification for EQX.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroPolicy {
    /// Goods are valued >= 0, chores <= 0 (zero items qualify on both sides).
    Strict,
    /// Only strictly positive goods and strictly negative chores qualify.
    NonzeroMarginals,
}

/// The decisive agent pair examined by a checker. On failure this is the
/// violating pair together with the best removal candidate considered; on a
/// passing up-to-one verdict it records the widest pair and the candidate
/// that satisfied it (if any pair had unequal utilities at all).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub poorer: usize,
    pub richer: usize,
    pub poorer_utility: i64,
    pub richer_utility: i64,
    pub candidate: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    fn pass() -> Self {
        Verdict { holds: true, witness: None }
    }
}

/// All per-property verdicts for one allocation. `po` is populated only when
/// a Pareto method was actually run (the oracle's dominance scan or the
/// non-wasteful certificate).
#[derive(Debug, Clone)]
pub struct FairnessReport {
    pub eq: Verdict,
    pub eq1: Verdict,
    pub eqx: Verdict,
    pub eqx_nonzero_marginals: Verdict,
    pub ef: Verdict,
    pub ef1: Verdict,
    pub efx: Verdict,
    pub po: Option<bool>,
}

pub fn report(inst: &Instance, alloc: &Allocation) -> FairnessReport {
    FairnessReport {
        eq: check_eq(inst, alloc),
        eq1: check_eq1(inst, alloc),
        eqx: check_eqx(inst, alloc, ZeroPolicy::Strict),
        eqx_nonzero_marginals: check_eqx(inst, alloc, ZeroPolicy::NonzeroMarginals),
        ef: check_ef(inst, alloc),
        ef1: check_ef1(inst, alloc),
        efx: check_efx(inst, alloc),
        po: None,
    }
}

/// EQ: all agents derive equal utility.
pub fn check_eq(_inst: &Instance, alloc: &Allocation) -> Verdict {
    let u = alloc.utilities();
    let lo = u.iter().enumerate().min_by_key(|&(i, &v)| (v, i));
    let hi = u.iter().enumerate().max_by_key(|&(i, &v)| (v, std::cmp::Reverse(i)));
    match (lo, hi) {
        (Some((i, &vi)), Some((j, &vj))) if vi != vj => Verdict {
            holds: false,
            witness: Some(Witness {
                poorer: i,
                richer: j,
                poorer_utility: vi,
                richer_utility: vj,
                candidate: None,
            }),
        },
        _ => Verdict::pass(),
    }
}

// Best good in the richer bundle for an EQ1 removal: maximum owner value >= 0.
fn best_good_eq(inst: &Instance, alloc: &Allocation, owner: usize) -> Option<(usize, i64)> {
    alloc
        .bundle(owner)
        .iter()
        .map(|&o| (o, inst.value(owner, o)))
        .filter(|&(_, v)| v >= 0)
        .max_by_key(|&(o, v)| (v, std::cmp::Reverse(o)))
}

// Best chore in the poorer bundle for an EQ1 removal: minimum owner value <= 0.
fn best_chore_eq(inst: &Instance, alloc: &Allocation, owner: usize) -> Option<(usize, i64)> {
    alloc
        .bundle(owner)
        .iter()
        .map(|&o| (o, inst.value(owner, o)))
        .filter(|&(_, v)| v <= 0)
        .min_by_key(|&(o, v)| (v, o))
}

/// EQ1: every utility gap closes after removing some good from the richer
/// bundle or some chore from the poorer bundle. Only the extremal candidates
/// need checking: the maximum-value good of the richer agent and the
/// minimum-value chore of the poorer agent.
pub fn check_eq1(inst: &Instance, alloc: &Allocation) -> Verdict {
    let u = alloc.utilities();
    let mut satisfied: Option<(i64, Witness)> = None;
    for i in 0..u.len() {
        for j in 0..u.len() {
            if u[i] >= u[j] {
                continue;
            }
            let good = best_good_eq(inst, alloc, j);
            let chore = best_chore_eq(inst, alloc, i);
            let good_ok = good.map(|(_, v)| u[i] >= u[j] - v).unwrap_or(false);
            let chore_ok = chore.map(|(_, v)| u[i] - v >= u[j]).unwrap_or(false);
            if !good_ok && !chore_ok {
                let candidate = good.or(chore).map(|(o, _)| o);
                return Verdict {
                    holds: false,
                    witness: Some(Witness {
                        poorer: i,
                        richer: j,
                        poorer_utility: u[i],
                        richer_utility: u[j],
                        candidate,
                    }),
                };
            }
            let candidate = if good_ok { good.map(|(o, _)| o) } else { chore.map(|(o, _)| o) };
            let gap = u[j] - u[i];
            if satisfied.as_ref().map(|&(g, _)| gap > g).unwrap_or(true) {
                satisfied = Some((
                    gap,
                    Witness {
                        poorer: i,
                        richer: j,
                        poorer_utility: u[i],
                        richer_utility: u[j],
                        candidate,
                    },
                ));
            }
        }
    }
    Verdict { holds: true, witness: satisfied.map(|(_, w)| w) }
}

/// EQX: every gap closes after removing *any* good from the richer bundle and
/// *any* chore from the poorer bundle. The binding candidates are the
/// minimum-value good of the richer agent and the maximum-value
/// (closest-to-zero) chore of the poorer agent.
pub fn check_eqx(inst: &Instance, alloc: &Allocation, policy: ZeroPolicy) -> Verdict {
    let u = alloc.utilities();
    for i in 0..u.len() {
        for j in 0..u.len() {
            if u[i] >= u[j] {
                continue;
            }
            let goods = alloc.bundle(j).iter().map(|&o| (o, inst.value(j, o)));
            let worst_good = match policy {
                ZeroPolicy::Strict => goods.filter(|&(_, v)| v >= 0).min_by_key(|&(o, v)| (v, o)),
                ZeroPolicy::NonzeroMarginals => {
                    goods.filter(|&(_, v)| v > 0).min_by_key(|&(o, v)| (v, o))
                }
            };
            let chores = alloc.bundle(i).iter().map(|&o| (o, inst.value(i, o)));
            let worst_chore = match policy {
                ZeroPolicy::Strict => {
                    chores.filter(|&(_, v)| v <= 0).max_by_key(|&(o, v)| (v, std::cmp::Reverse(o)))
                }
                ZeroPolicy::NonzeroMarginals => {
                    chores.filter(|&(_, v)| v < 0).max_by_key(|&(o, v)| (v, std::cmp::Reverse(o)))
                }
            };
            if let Some((o, v)) = worst_good {
                if u[i] < u[j] - v {
                    return Verdict {
                        holds: false,
                        witness: Some(Witness {
                            poorer: i,
                            richer: j,
                            poorer_utility: u[i],
                            richer_utility: u[j],
                            candidate: Some(o),
                        }),
                    };
                }
            }
            if let Some((o, v)) = worst_chore {
                if u[i] - v < u[j] {
                    return Verdict {
                        holds: false,
                        witness: Some(Witness {
                            poorer: i,
                            richer: j,
                            poorer_utility: u[i],
                            richer_utility: u[j],
                            candidate: Some(o),
                        }),
                    };
                }
            }
        }
    }
    Verdict::pass()
}

/// EF: no agent values another bundle above its own.
pub fn check_ef(inst: &Instance, alloc: &Allocation) -> Verdict {
    for i in 0..alloc.num_agents() {
        for j in 0..alloc.num_agents() {
            if i == j {
                continue;
            }
            let own = alloc.utility(i);
            let other: i64 = alloc.bundle(j).iter().map(|&o| inst.value(i, o)).sum();
            if own < other {
                return Verdict {
                    holds: false,
                    witness: Some(Witness {
                        poorer: i,
                        richer: j,
                        poorer_utility: own,
                        richer_utility: other,
                        candidate: None,
                    }),
                };
            }
        }
    }
    Verdict::pass()
}

fn check_envy_relaxation(inst: &Instance, alloc: &Allocation, up_to_any: bool) -> Verdict {
    for i in 0..alloc.num_agents() {
        for j in 0..alloc.num_agents() {
            if i == j {
                continue;
            }
            let own = alloc.utility(i);
            let other: i64 = alloc.bundle(j).iter().map(|&o| inst.value(i, o)).sum();
            if own >= other {
                continue;
            }
            // Removal candidates are valued by the envious agent i.
            let goods = alloc.bundle(j).iter().map(|&o| (o, inst.value(i, o)));
            let chores = alloc.bundle(i).iter().map(|&o| (o, inst.value(i, o)));
            let (good, chore) = if up_to_any {
                (
                    goods.filter(|&(_, v)| v >= 0).min_by_key(|&(o, v)| (v, o)),
                    chores.filter(|&(_, v)| v <= 0).max_by_key(|&(o, v)| (v, std::cmp::Reverse(o))),
                )
            } else {
                (
                    goods.filter(|&(_, v)| v >= 0).max_by_key(|&(o, v)| (v, std::cmp::Reverse(o))),
                    chores.filter(|&(_, v)| v <= 0).min_by_key(|&(o, v)| (v, o)),
                )
            };
            let good_ok = good.map(|(_, v)| own >= other - v);
            let chore_ok = chore.map(|(_, v)| own - v >= other);
            let pair_ok = if up_to_any {
                good_ok.unwrap_or(true) && chore_ok.unwrap_or(true)
            } else {
                good_ok.unwrap_or(false) || chore_ok.unwrap_or(false)
            };
            if !pair_ok {
                let candidate = good.or(chore).map(|(o, _)| o);
                return Verdict {
                    holds: false,
                    witness: Some(Witness {
                        poorer: i,
                        richer: j,
                        poorer_utility: own,
                        richer_utility: other,
                        candidate,
                    }),
                };
            }
        }
    }
    Verdict::pass()
}

/// EF1: each envy gap closes after removing some good from the envied bundle
/// or some chore from the envious agent's own bundle, valued by the envious
/// agent.
pub fn check_ef1(inst: &Instance, alloc: &Allocation) -> Verdict {
    check_envy_relaxation(inst, alloc, false)
}

/// EFX: as EF1 but for every such good and chore.
pub fn check_efx(inst: &Instance, alloc: &Allocation) -> Verdict {
    check_envy_relaxation(inst, alloc, true)
}

/// Nash welfare comparison key: (number of agents with positive utility,
/// product of the positive utilities), compared lexicographically. Standard
/// tie-handling for zero utilities under binary valuations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct NashKey {
    pub positive_agents: usize,
    pub product: i128,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("Nash welfare is undefined: agent {agent} has negative utility {utility}")]
pub struct NashUndefined {
    pub agent: usize,
    pub utility: i64,
}

pub fn nash_key_of(utilities: &[i64]) -> Result<NashKey, NashUndefined> {
    let mut positive_agents = 0;
    let mut product: i128 = 1;
    for (agent, &u) in utilities.iter().enumerate() {
        if u < 0 {
            return Err(NashUndefined { agent, utility: u });
        }
        if u > 0 {
            positive_agents += 1;
            product *= u as i128;
        }
    }
    if positive_agents == 0 {
        product = 0;
    }
    Ok(NashKey { positive_agents, product })
}

/// Utilitarian welfare as the exact integer sum; the 1/n mean is
/// presentation-only.
pub fn utilitarian_sum(alloc: &Allocation) -> i64 {
    alloc.utilities().iter().sum()
}

/// Egalitarian welfare: the minimum utility.
pub fn egalitarian(alloc: &Allocation) -> i64 {
    alloc.utilities().iter().copied().min().unwrap_or(0)
}

pub fn nash_key(alloc: &Allocation) -> Result<NashKey, NashUndefined> {
    nash_key_of(alloc.utilities())
}

pub fn pareto_dominates_utilities(a: &[i64], b: &[i64]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).all(|(x, y)| x >= y) && a.iter().zip(b).any(|(x, y)| x > y)
}

/// True iff `a` Pareto dominates `b`. Both allocations should be complete.
pub fn pareto_dominates(_inst: &Instance, a: &Allocation, b: &Allocation) -> bool {
    pareto_dominates_utilities(a.utilities(), b.utilities())
}

/// Sufficient PO certificate for symmetric tri-valued instances: true iff
/// every item is held by an agent whose value for it is maximal over all
/// agents, which makes the allocation utilitarian-maximal and hence PO.
/// `false` means the certificate is absent, not that the allocation is not
/// PO; exact PO checking lives in the oracle.
pub fn check_po_nonwasteful(inst: &Instance, alloc: &Allocation) -> Result<bool, FairnessError> {
    if !inst.classify_valuations().is_symmetric_trivalued {
        return Err(FairnessError::NotTrivalued);
    }
    if !alloc.is_complete() {
        return Err(FairnessError::NotComplete);
    }
    for o in 0..inst.num_items() {
        let owner = alloc.owner_of(o).expect("complete allocation");
        let max = (0..inst.num_agents()).map(|i| inst.value(i, o)).max().unwrap();
        if inst.value(owner, o) < max {
            return Ok(false);
        }
    }
    Ok(true)
}
