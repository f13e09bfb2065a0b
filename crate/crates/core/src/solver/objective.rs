//! Greedy EQ1 solver for objective valuations and the completion procedure
//! used by every other solver.
//!
//! Phase 1 repeatedly gives a poor agent its most valuable remaining
//! objective good; phase 2 gives a rich agent its most disliked remaining
//! objective chore. The partial allocation is EQ1 after every single
//! assignment, which is what makes the completion procedure reusable.

use super::{Chooser, SolveError, TieBreak};
use crate::fairness::check_eq1;
use crate::model::{Allocation, Instance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Goods,
    Chores,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhaseStep {
    pub step: usize,
    pub agent: usize,
    pub item: usize,
    pub agent_utility_before: i64,
    pub agent_utility_after: i64,
    pub phase: Phase,
}

pub type PhaseTrace = Vec<PhaseStep>;

/// EQ1 allocation for an instance whose items are all objective goods or
/// objective chores. Rejects instances with subjective items.
pub fn solve_objective_eq1(inst: &Instance) -> Result<(Allocation, PhaseTrace), SolveError> {
    solve_objective_eq1_with(inst, TieBreak::Lexicographic)
}

pub fn solve_objective_eq1_with(
    inst: &Instance,
    tie: TieBreak,
) -> Result<(Allocation, PhaseTrace), SolveError> {
    let classes = inst.classify_items();
    if let Some(&o) = classes.subjective.first() {
        return Err(SolveError::not_applicable(format!(
            "objective solver requires objective valuations, but item {o} is subjective"
        )));
    }
    let alloc = Allocation::empty(inst);
    let mut trace = PhaseTrace::new();
    let alloc = run_completion_phases(inst, alloc, tie, &mut trace)?;
    Ok((alloc, trace))
}

/// Extend a partial EQ1 allocation over the remaining objective items while
/// preserving EQ1. Preconditions: every unallocated item is objective, and
/// the partial allocation is EQ1.
pub fn complete_allocation(inst: &Instance, partial: Allocation) -> Result<Allocation, SolveError> {
    let mut trace = PhaseTrace::new();
    complete_allocation_with(inst, partial, TieBreak::Lexicographic, &mut trace)
}

pub fn complete_allocation_with(
    inst: &Instance,
    partial: Allocation,
    tie: TieBreak,
    trace: &mut PhaseTrace,
) -> Result<Allocation, SolveError> {
    let classes = inst.classify_items();
    if let Some(&o) = classes.subjective.iter().find(|&&o| partial.owner_of(o).is_none()) {
        return Err(SolveError::not_applicable(format!(
            "precondition violated: subjective item {o} is unallocated"
        )));
    }
    if !check_eq1(inst, &partial).holds {
        return Err(SolveError::not_applicable(
            "precondition violated: partial allocation is not EQ1",
        ));
    }
    run_completion_phases(inst, partial, tie, trace)
}

// The two greedy phases over the remaining objective items, sorted lists plus
// cursors so the whole pass is near-linear.
fn run_completion_phases(
    inst: &Instance,
    mut alloc: Allocation,
    tie: TieBreak,
    trace: &mut PhaseTrace,
) -> Result<Allocation, SolveError> {
    let classes = inst.classify_items();
    let n = inst.num_agents();
    let mut chooser = Chooser::new(tie);

    let goods: Vec<usize> =
        classes.objective_goods.iter().copied().filter(|&o| alloc.owner_of(o).is_none()).collect();
    let chores: Vec<usize> =
        classes.objective_chores.iter().copied().filter(|&o| alloc.owner_of(o).is_none()).collect();

    // goods_by_agent[i]: remaining goods sorted by (-value, index).
    let goods_by_agent: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let mut v = goods.clone();
            v.sort_by_key(|&o| (std::cmp::Reverse(inst.value(i, o)), o));
            v
        })
        .collect();
    let chores_by_agent: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let mut v = chores.clone();
            v.sort_by_key(|&o| (inst.value(i, o), o));
            v
        })
        .collect();
    let mut good_cursor = vec![0usize; n];
    let mut chore_cursor = vec![0usize; n];

    let mut step = trace.len();
    for _ in 0..goods.len() {
        let poor = pick_extreme_agent(&alloc, true, &mut chooser);
        let item = pick_next_item(inst, &alloc, poor, &goods_by_agent[poor], &mut good_cursor[poor], &mut chooser)
            .ok_or_else(|| SolveError::Defect("good phase ran out of items early".into()))?;
        let before = alloc.utility(poor);
        alloc.assign(inst, item, poor).expect("unallocated objective good");
        trace.push(PhaseStep {
            step,
            agent: poor,
            item,
            agent_utility_before: before,
            agent_utility_after: alloc.utility(poor),
            phase: Phase::Goods,
        });
        step += 1;
    }
    for _ in 0..chores.len() {
        let rich = pick_extreme_agent(&alloc, false, &mut chooser);
        let item = pick_next_item(inst, &alloc, rich, &chores_by_agent[rich], &mut chore_cursor[rich], &mut chooser)
            .ok_or_else(|| SolveError::Defect("chore phase ran out of items early".into()))?;
        let before = alloc.utility(rich);
        alloc.assign(inst, item, rich).expect("unallocated objective chore");
        trace.push(PhaseStep {
            step,
            agent: rich,
            item,
            agent_utility_before: before,
            agent_utility_after: alloc.utility(rich),
            phase: Phase::Chores,
        });
        step += 1;
    }
    Ok(alloc)
}

// Poor agent (minimum utility) or rich agent (maximum utility), ties by
// lowest index or by the seeded chooser.
fn pick_extreme_agent(alloc: &Allocation, poor: bool, chooser: &mut Chooser) -> usize {
    let u = alloc.utilities();
    let target = if poor {
        *u.iter().min().expect("at least one agent")
    } else {
        *u.iter().max().expect("at least one agent")
    };
    let tied: Vec<usize> = (0..u.len()).filter(|&i| u[i] == target).collect();
    chooser.pick(&tied).expect("non-empty tie set")
}

// Next unallocated item from the agent's preference-sorted list; among
// value-ties the chooser decides.
fn pick_next_item(
    inst: &Instance,
    alloc: &Allocation,
    agent: usize,
    sorted: &[usize],
    cursor: &mut usize,
    chooser: &mut Chooser,
) -> Option<usize> {
    while *cursor < sorted.len() && alloc.owner_of(sorted[*cursor]).is_some() {
        *cursor += 1;
    }
    if *cursor >= sorted.len() {
        return None;
    }
    let first = sorted[*cursor];
    let value = inst.value(agent, first);
    let mut tied = vec![first];
    let mut k = *cursor + 1;
    while k < sorted.len() && inst.value(agent, sorted[k]) == value {
        if alloc.owner_of(sorted[k]).is_none() {
            tied.push(sorted[k]);
        }
        k += 1;
    }
    chooser.pick(&tied)
}
