//! Pseudo-polynomial dynamic program for utilitarian- or egalitarian-maximal
//! allocations within the set of strict-EQX allocations.
//!
//! States are (k, utility vector, least-valuable good per bundle,
//! least-disliked chore per bundle) with exact utilities. Items valued >= 0
//! by an agent are tracked on the good side (zeros included), items valued
//! < 0 on the chore side. The final filter reproduces the strict EQX
//! definition: a zero-valued good in the poorer bundle also acts as the
//! binding chore candidate, which the filter detects through the tracked
//! least-good value.

use crate::fairness::{check_eqx, ZeroPolicy};
use crate::model::{Allocation, Instance};
use std::collections::HashMap;
use thiserror::Error;

const NONE_ITEM: u16 = u16::MAX;
const MAX_AGENTS: usize = 4;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DpError {
    #[error("dynamic program supports at most {max} agents, got {agents}")]
    TooManyAgents { agents: usize, max: usize },
    #[error("state-space estimate {estimate} exceeds the ceiling {ceiling}")]
    EstimateExceeded { estimate: u128, ceiling: u128 },
    #[error("reachable state count exceeded the ceiling {ceiling}")]
    StateCeiling { ceiling: usize },
    #[error("absolute utilities do not fit the state encoding")]
    ValuesTooLarge,
    #[error("internal defect: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DpObjective {
    Utilitarian,
    Egalitarian,
}

#[derive(Debug, Clone)]
pub struct DpConfig {
    /// Ceiling on the theoretical state-space estimate n * m^(2n+1) * V^n.
    pub estimate_ceiling: u128,
    /// Ceiling on the states actually materialized.
    pub state_ceiling: usize,
}

impl Default for DpConfig {
    fn default() -> Self {
        DpConfig { estimate_ceiling: 1_000_000_000_000, state_ceiling: 20_000_000 }
    }
}

#[derive(Debug, Clone)]
pub struct DpStats {
    /// Reachable states per layer, including the single boundary state at
    /// layer 0.
    pub layer_counts: Vec<usize>,
    /// Reachable states with at least one item processed (the k >= 1 state
    /// space the theoretical bound counts).
    pub total_states: usize,
    /// n * m^(2n+1) * V^n.
    pub theoretical_bound: u128,
}

#[derive(Debug, Clone)]
pub enum DpOutcome {
    Found { allocation: Allocation, value: i64 },
    NoEqxAllocation,
}

#[derive(Debug, Clone)]
pub struct DpRun {
    pub outcome: DpOutcome,
    pub stats: DpStats,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct StateKey {
    v: Vec<i32>,
    g: Vec<u16>,
    c: Vec<u16>,
}

// Predecessor link: which agent received item k-1, and the index of the
// predecessor state in the sorted layer k-1.
type Pred = Option<(u8, u32)>;

pub fn dp_welfare_eqx(
    inst: &Instance,
    objective: DpObjective,
    config: &DpConfig,
) -> Result<DpRun, DpError> {
    let n = inst.num_agents();
    let m = inst.num_items();
    if n > MAX_AGENTS {
        return Err(DpError::TooManyAgents { agents: n, max: MAX_AGENTS });
    }
    for i in 0..n {
        let abs_sum: i64 = inst.row(i).iter().map(|v| v.abs()).sum();
        if abs_sum > i32::MAX as i64 / 4 {
            return Err(DpError::ValuesTooLarge);
        }
    }

    let theoretical_bound = state_space_estimate(inst);
    if theoretical_bound > config.estimate_ceiling {
        return Err(DpError::EstimateExceeded {
            estimate: theoretical_bound,
            ceiling: config.estimate_ceiling,
        });
    }

    // Forward pass: layers of reachable states, each sorted by key so the
    // kept predecessor (first writer) is the lexicographically smallest.
    let mut layers: Vec<Vec<(StateKey, Pred)>> = Vec::with_capacity(m + 1);
    layers.push(vec![(
        StateKey { v: vec![0; n], g: vec![NONE_ITEM; n], c: vec![NONE_ITEM; n] },
        None,
    )]);
    let mut total_states = 0usize;

    for k in 1..=m {
        let item = k - 1;
        let prev = &layers[k - 1];
        let mut next: HashMap<StateKey, Pred> = HashMap::with_capacity(prev.len() * n);
        for (prev_idx, (state, _)) in prev.iter().enumerate() {
            for agent in 0..n {
                let succ = apply_transition(inst, state, item, agent);
                next.entry(succ).or_insert(Some((agent as u8, prev_idx as u32)));
            }
        }
        let mut layer: Vec<(StateKey, Pred)> = next.into_iter().collect();
        layer.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        if layer.len() > prev.len() * n {
            return Err(DpError::Internal("layer grew faster than the branching bound".into()));
        }
        total_states += layer.len();
        if total_states > config.state_ceiling {
            return Err(DpError::StateCeiling { ceiling: config.state_ceiling });
        }
        layers.push(layer);
    }

    let stats = DpStats {
        layer_counts: layers.iter().map(|l| l.len()).collect(),
        total_states,
        theoretical_bound,
    };

    // Final filter and objective selection. Iterating the sorted layer keeps
    // ties on the lexicographically smallest utility vector, then the
    // smallest (g, c) description.
    let final_layer = &layers[m];
    let mut best: Option<(i64, usize)> = None;
    for (idx, (state, _)) in final_layer.iter().enumerate() {
        if !state_is_eqx(inst, state) {
            continue;
        }
        let value = match objective {
            DpObjective::Utilitarian => state.v.iter().map(|&x| x as i64).sum(),
            DpObjective::Egalitarian => state.v.iter().map(|&x| x as i64).min().unwrap_or(0),
        };
        if best.map(|(b, _)| value > b).unwrap_or(true) {
            best = Some((value, idx));
        }
    }

    let (value, idx) = match best {
        Some(b) => b,
        None => return Ok(DpRun { outcome: DpOutcome::NoEqxAllocation, stats }),
    };

    let allocation = reconstruct(inst, &layers, idx)?;
    let state = &final_layer[idx].0;
    verify_reconstruction(inst, &allocation, state)?;
    if !check_eqx(inst, &allocation, ZeroPolicy::Strict).holds {
        return Err(DpError::Internal(
            "state filter accepted an allocation the strict EQX checker rejects".into(),
        ));
    }
    Ok(DpRun { outcome: DpOutcome::Found { allocation, value }, stats })
}

/// The theoretical state-space bound n * m^(2n+1) * V^n with V = V_g + V_c
/// (clamped to at least 1).
pub fn state_space_estimate(inst: &Instance) -> u128 {
    let n = inst.num_agents() as u128;
    let m = inst.num_items() as u128;
    let v_g: i64 = (0..inst.num_items())
        .map(|o| (0..inst.num_agents()).map(|i| inst.value(i, o)).max().unwrap_or(0))
        .sum();
    let v_c: i64 = -(0..inst.num_items())
        .map(|o| (0..inst.num_agents()).map(|i| inst.value(i, o)).min().unwrap_or(0))
        .sum::<i64>();
    let v = (v_g + v_c).max(1) as u128;
    let exp = 2 * inst.num_agents() as u32 + 1;
    n.saturating_mul(m.checked_pow(exp).unwrap_or(u128::MAX))
        .saturating_mul(v.checked_pow(inst.num_agents() as u32).unwrap_or(u128::MAX))
}

fn apply_transition(inst: &Instance, state: &StateKey, item: usize, agent: usize) -> StateKey {
    let val = inst.value(agent, item);
    let mut next = state.clone();
    next.v[agent] += val as i32;
    if val >= 0 {
        // The tracked good is the minimum by (value, index); the incoming
        // item has the highest index so far, so ties keep the old one.
        let replace = match state.g[agent] {
            NONE_ITEM => true,
            g => val < inst.value(agent, g as usize),
        };
        if replace {
            next.g[agent] = item as u16;
        }
    } else {
        // The tracked chore is the maximum by value (least disliked), ties
        // keeping the older, smaller-indexed item.
        let replace = match state.c[agent] {
            NONE_ITEM => true,
            c => val > inst.value(agent, c as usize),
        };
        if replace {
            next.c[agent] = item as u16;
        }
    }
    next
}

// Strict EQX on a final state. For a violating pair (i poorer, j richer):
// removing any good of j must close the gap -- the binding good is the
// tracked least-valuable one -- and removing any chore of i must close it.
// Chores include zero-valued items, and a zero-valued item in i's bundle is
// visible as a tracked least-good of value 0.
fn state_is_eqx(inst: &Instance, state: &StateKey) -> bool {
    let n = state.v.len();
    for i in 0..n {
        for j in 0..n {
            if state.v[i] >= state.v[j] {
                continue;
            }
            let (vi, vj) = (state.v[i] as i64, state.v[j] as i64);
            if state.g[j] != NONE_ITEM {
                let worst_good = inst.value(j, state.g[j] as usize);
                if vi < vj - worst_good {
                    return false;
                }
            }
            let binding_chore = if state.g[i] != NONE_ITEM
                && inst.value(i, state.g[i] as usize) == 0
            {
                Some(0)
            } else if state.c[i] != NONE_ITEM {
                Some(inst.value(i, state.c[i] as usize))
            } else {
                None
            };
            if let Some(b) = binding_chore {
                if vi - b < vj {
                    return false;
                }
            }
        }
    }
    true
}

fn reconstruct(
    inst: &Instance,
    layers: &[Vec<(StateKey, Pred)>],
    final_idx: usize,
) -> Result<Allocation, DpError> {
    let m = inst.num_items();
    let mut owners = vec![0usize; m];
    let mut idx = final_idx;
    for k in (1..=m).rev() {
        let (_, pred) = &layers[k][idx];
        let (agent, prev_idx) =
            pred.ok_or_else(|| DpError::Internal("missing predecessor link".into()))?;
        owners[k - 1] = agent as usize;
        idx = prev_idx as usize;
    }
    let mut alloc = Allocation::empty(inst);
    for (item, &agent) in owners.iter().enumerate() {
        alloc.assign(inst, item, agent).expect("fresh item");
    }
    Ok(alloc)
}

// Re-score the reconstructed allocation with the canonical extremal-item
// rules and require an exact match with the chosen state.
fn verify_reconstruction(
    inst: &Instance,
    alloc: &Allocation,
    state: &StateKey,
) -> Result<(), DpError> {
    let n = inst.num_agents();
    for i in 0..n {
        if alloc.utility(i) != state.v[i] as i64 {
            return Err(DpError::Internal("reconstructed utilities disagree with state".into()));
        }
        let good = alloc
            .bundle(i)
            .iter()
            .copied()
            .filter(|&o| inst.value(i, o) >= 0)
            .min_by_key(|&o| (inst.value(i, o), o))
            .map(|o| o as u16)
            .unwrap_or(NONE_ITEM);
        let chore = alloc
            .bundle(i)
            .iter()
            .copied()
            .filter(|&o| inst.value(i, o) < 0)
            .max_by_key(|&o| (inst.value(i, o), std::cmp::Reverse(o)))
            .map(|o| o as u16)
            .unwrap_or(NONE_ITEM);
        if good != state.g[i] || chore != state.c[i] {
            return Err(DpError::Internal(
                "reconstructed extremal items disagree with state".into(),
            ));
        }
    }
    Ok(())
}
