//! Exhaustive ground truth on small instances: existence queries, exact
//! Pareto optimality, welfare optimization subject to fairness predicates,
//! and leximin++.
//!
//! All scans enumerate the n^m complete allocations in mixed-radix order
//! (item 0 is the least significant digit). The enumeration ceiling is a hard
//! error, never a silent truncation. Large scans are split into disjoint
//! index blocks processed in parallel; every result is merged associatively
//! with index tie-breaks, so parallel and serial runs agree exactly.

use crate::fairness::{
    check_ef, check_ef1, check_efx, check_eq, check_eq1, check_eqx, nash_key_of,
    pareto_dominates_utilities, NashKey, ZeroPolicy,
};
use crate::model::{Allocation, Instance};
use std::sync::atomic::{AtomicBool, AtomicI64, Ordering};
use thiserror::Error;

/// Default enumeration ceiling (number of complete allocations).
pub const DEFAULT_CEILING: u64 = 1 << 24;

/// Hard limit for scans that evaluate Pareto optimality inside a predicate;
/// those scans keep every distinct utility vector in memory.
pub const PO_PREDICATE_LIMIT: u64 = 1 << 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance has {allocations} complete allocations, above the ceiling {ceiling}")]
    CeilingExceeded { allocations: u128, ceiling: u64 },
    #[error(
        "instance has {allocations} complete allocations, above the Pareto-predicate limit {limit}"
    )]
    PoPredicateLimit { allocations: u128, limit: u64 },
}

/// A conjunction of fairness/efficiency properties to test on complete
/// allocations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Predicate {
    pub eq: bool,
    pub eq1: bool,
    pub eqx_strict: bool,
    pub eqx_nonzero: bool,
    pub ef: bool,
    pub ef1: bool,
    pub efx: bool,
    pub po: bool,
}

impl Predicate {
    pub fn eq1() -> Self {
        Predicate { eq1: true, ..Default::default() }
    }

    pub fn eqx() -> Self {
        Predicate { eqx_strict: true, ..Default::default() }
    }

    pub fn eq() -> Self {
        Predicate { eq: true, ..Default::default() }
    }

    pub fn and_po(mut self) -> Self {
        self.po = true;
        self
    }

    /// Evaluate every property except `po`, which needs the full scan.
    pub fn matches_basic(&self, inst: &Instance, alloc: &Allocation) -> bool {
        (!self.eq || check_eq(inst, alloc).holds)
            && (!self.eq1 || check_eq1(inst, alloc).holds)
            && (!self.eqx_strict || check_eqx(inst, alloc, ZeroPolicy::Strict).holds)
            && (!self.eqx_nonzero || check_eqx(inst, alloc, ZeroPolicy::NonzeroMarginals).holds)
            && (!self.ef || check_ef(inst, alloc).holds)
            && (!self.ef1 || check_ef1(inst, alloc).holds)
            && (!self.efx || check_efx(inst, alloc).holds)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleObjective {
    Utilitarian,
    Egalitarian,
    Nash,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimumValue {
    Scalar(i64),
    Nash(NashKey),
}

/// Number of complete allocations, n^m.
pub fn allocation_count(inst: &Instance) -> u128 {
    (inst.num_agents() as u128)
        .checked_pow(inst.num_items() as u32)
        .unwrap_or(u128::MAX)
}

fn count_within(inst: &Instance, ceiling: u64) -> Result<u64, OracleError> {
    let total = allocation_count(inst);
    if total > ceiling as u128 {
        return Err(OracleError::CeilingExceeded { allocations: total, ceiling });
    }
    Ok(total as u64)
}

/// Decode the allocation with the given mixed-radix index.
fn decode_allocation(inst: &Instance, idx: u64) -> Allocation {
    let n = inst.num_agents() as u64;
    let mut alloc = Allocation::empty(inst);
    let mut x = idx;
    for item in 0..inst.num_items() {
        alloc.assign(inst, item, (x % n) as usize).expect("fresh item");
        x /= n;
    }
    alloc
}

/// All complete allocations in mixed-radix order.
pub fn enumerate_allocations<'a>(
    inst: &'a Instance,
    ceiling: u64,
) -> Result<impl Iterator<Item = Allocation> + 'a, OracleError> {
    let total = count_within(inst, ceiling)?;
    Ok((0..total).map(move |idx| decode_allocation(inst, idx)))
}

// ---------------------------------------------------------------------------
// Scan engines
// ---------------------------------------------------------------------------

// Split the index space into n^d blocks by fixing the top d digits (items
// m-d..m). Returns the depth d.
fn block_depth(n: u64, m: usize, total: u64, parallel: bool) -> usize {
    if !parallel || total < (1 << 14) || m == 0 || n < 2 {
        return 0;
    }
    let target = (rayon::current_num_threads() as u64 * 8).max(16);
    let mut d = 0;
    let mut blocks = 1u64;
    while blocks < target && d < m {
        blocks *= n;
        d += 1;
    }
    d
}

// Depth-first scan that maintains a real Allocation. `leaf` returns true to
// stop the whole scan (used by first-hit searches).
fn scan_full<T, FI, FL, FM>(
    inst: &Instance,
    total: u64,
    parallel: bool,
    init: FI,
    leaf: FL,
    merge: FM,
) -> T
where
    T: Send,
    FI: Fn() -> T + Sync,
    FL: Fn(&mut T, u64, &Allocation) -> bool + Sync,
    FM: Fn(T, T) -> T + Send + Sync,
{
    let n = inst.num_agents() as u64;
    let m = inst.num_items();
    let d = block_depth(n, m, total, parallel);
    let blocks = n.pow(d as u32);
    let stop = AtomicBool::new(false);

    let run_block = |p: u64| -> T {
        let mut acc = init();
        if stop.load(Ordering::Relaxed) {
            return acc;
        }
        let mut alloc = Allocation::empty(inst);
        let base_weight = n.pow((m - d) as u32);
        let mut x = p;
        for item in (m - d)..m {
            alloc.assign(inst, item, (x % n) as usize).expect("fresh item");
            x /= n;
        }
        let base_idx = p * base_weight;
        full_rec(inst, &mut alloc, m - d, base_idx, &mut acc, &leaf, &stop);
        acc
    };

    if d == 0 {
        run_block(0)
    } else {
        use rayon::prelude::*;
        (0..blocks).into_par_iter().map(run_block).reduce_with(&merge).unwrap_or_else(&init)
    }
}

// Recurse over items `0..depth`, assigning the highest remaining item first
// so leaves appear in ascending global index order.
fn full_rec<T, FL>(
    inst: &Instance,
    alloc: &mut Allocation,
    depth: usize,
    base_idx: u64,
    acc: &mut T,
    leaf: &FL,
    stop: &AtomicBool,
) where
    FL: Fn(&mut T, u64, &Allocation) -> bool,
{
    if stop.load(Ordering::Relaxed) {
        return;
    }
    if depth == 0 {
        if leaf(acc, base_idx, alloc) {
            stop.store(true, Ordering::Relaxed);
        }
        return;
    }
    let item = depth - 1;
    let n = inst.num_agents() as u64;
    let weight = n.pow(item as u32);
    for agent in 0..inst.num_agents() {
        alloc.assign(inst, item, agent).expect("fresh item");
        full_rec(inst, alloc, item, base_idx + agent as u64 * weight, acc, leaf, stop);
        alloc.remove(inst, item);
        if stop.load(Ordering::Relaxed) {
            return;
        }
    }
}

// Lighter scan that maintains only utilities and bundle sizes, with an
// optional subtree prune. The prune hook sees the per-agent optimistic gain
// still available (sum of positive values over unassigned items).
fn scan_light<T, FI, FL, FP, FM>(
    inst: &Instance,
    total: u64,
    parallel: bool,
    init: FI,
    leaf: FL,
    prune: FP,
    merge: FM,
) -> T
where
    T: Send,
    FI: Fn() -> T + Sync,
    FL: Fn(&mut T, u64, &[i64], &[usize]) -> bool + Sync,
    FP: Fn(&T, &[i64], &[i64]) -> bool + Sync,
    FM: Fn(T, T) -> T + Send + Sync,
{
    let n = inst.num_agents() as u64;
    let m = inst.num_items();
    let d = block_depth(n, m, total, parallel);
    let blocks = n.pow(d as u32);
    let stop = AtomicBool::new(false);

    // pos_prefix[i][k] = sum of positive values of items 0..k for agent i.
    let pos_prefix: Vec<Vec<i64>> = (0..inst.num_agents())
        .map(|i| {
            let mut acc = 0;
            let mut v = Vec::with_capacity(m + 1);
            v.push(0);
            for o in 0..m {
                acc += inst.value(i, o).max(0);
                v.push(acc);
            }
            v
        })
        .collect();

    let run_block = |p: u64| -> T {
        let mut acc = init();
        if stop.load(Ordering::Relaxed) {
            return acc;
        }
        let mut utils = vec![0i64; inst.num_agents()];
        let mut sizes = vec![0usize; inst.num_agents()];
        let base_weight = n.pow((m - d) as u32);
        let mut x = p;
        for item in (m - d)..m {
            let agent = (x % n) as usize;
            utils[agent] += inst.value(agent, item);
            sizes[agent] += 1;
            x /= n;
        }
        light_rec(
            inst,
            &mut utils,
            &mut sizes,
            m - d,
            p * base_weight,
            &mut acc,
            &leaf,
            &prune,
            &pos_prefix,
            &stop,
        );
        acc
    };

    if d == 0 {
        run_block(0)
    } else {
        use rayon::prelude::*;
        (0..blocks).into_par_iter().map(run_block).reduce_with(&merge).unwrap_or_else(&init)
    }
}

#[allow(clippy::too_many_arguments)]
fn light_rec<T, FL, FP>(
    inst: &Instance,
    utils: &mut [i64],
    sizes: &mut [usize],
    depth: usize,
    base_idx: u64,
    acc: &mut T,
    leaf: &FL,
    prune: &FP,
    pos_prefix: &[Vec<i64>],
    stop: &AtomicBool,
) where
    FL: Fn(&mut T, u64, &[i64], &[usize]) -> bool,
    FP: Fn(&T, &[i64], &[i64]) -> bool,
{
    if stop.load(Ordering::Relaxed) {
        return;
    }
    if depth == 0 {
        if leaf(acc, base_idx, utils, sizes) {
            stop.store(true, Ordering::Relaxed);
        }
        return;
    }
    let remaining: Vec<i64> = pos_prefix.iter().map(|p| p[depth]).collect();
    if prune(acc, utils, &remaining) {
        return;
    }
    let item = depth - 1;
    let n = inst.num_agents() as u64;
    let weight = n.pow(item as u32);
    for agent in 0..inst.num_agents() {
        utils[agent] += inst.value(agent, item);
        sizes[agent] += 1;
        light_rec(
            inst,
            utils,
            sizes,
            item,
            base_idx + agent as u64 * weight,
            acc,
            leaf,
            prune,
            pos_prefix,
            stop,
        );
        utils[agent] -= inst.value(agent, item);
        sizes[agent] -= 1;
        if stop.load(Ordering::Relaxed) {
            return;
        }
    }
}

// ---------------------------------------------------------------------------
// Pareto machinery
// ---------------------------------------------------------------------------

// Distinct utility vectors, sorted by decreasing sum. A vector can only be
// dominated by one with a strictly larger sum.
struct UtilityFrontier {
    vectors: Vec<Vec<i64>>,
    sums: Vec<i64>,
}

impl UtilityFrontier {
    fn build(inst: &Instance, total: u64) -> Self {
        let set = scan_light(
            inst,
            total,
            true,
            std::collections::HashSet::new,
            |acc: &mut std::collections::HashSet<Vec<i64>>, _, utils, _| {
                if !acc.contains(utils) {
                    acc.insert(utils.to_vec());
                }
                false
            },
            |_, _, _| false,
            |mut a, b| {
                a.extend(b);
                a
            },
        );
        let mut vectors: Vec<Vec<i64>> = set.into_iter().collect();
        vectors.sort_by_key(|v| std::cmp::Reverse(v.iter().sum::<i64>()));
        let sums = vectors.iter().map(|v| v.iter().sum()).collect();
        UtilityFrontier { vectors, sums }
    }

    fn is_pareto_optimal(&self, utils: &[i64]) -> bool {
        let sum: i64 = utils.iter().sum();
        for (vec, &s) in self.vectors.iter().zip(&self.sums) {
            if s <= sum {
                return true;
            }
            if pareto_dominates_utilities(vec, utils) {
                return false;
            }
        }
        true
    }
}

/// True iff no complete allocation Pareto-dominates the given one.
pub fn exact_po(inst: &Instance, alloc: &Allocation, ceiling: u64) -> Result<bool, OracleError> {
    let total = count_within(inst, ceiling)?;
    let target = alloc.utilities().to_vec();
    let dominated = scan_light(
        inst,
        total,
        true,
        || false,
        |acc, _, utils, _| {
            if pareto_dominates_utilities(utils, &target) {
                *acc = true;
                return true;
            }
            false
        },
        |_, _, _| false,
        |a, b| a || b,
    );
    Ok(!dominated)
}

/// First allocation (in enumeration order) satisfying the predicate, or a
/// verified `None`.
pub fn exists_with(
    inst: &Instance,
    pred: &Predicate,
    ceiling: u64,
) -> Result<Option<Allocation>, OracleError> {
    let total = count_within(inst, ceiling)?;
    let frontier = po_frontier(inst, pred, total)?;

    let hit = scan_full(
        inst,
        total,
        true,
        || None,
        |acc: &mut Option<(u64, Allocation)>, idx, alloc| {
            if pred.matches_basic(inst, alloc)
                && frontier.as_ref().map(|f| f.is_pareto_optimal(alloc.utilities())).unwrap_or(true)
            {
                *acc = Some((idx, alloc.clone()));
                return true; // first hit in a block is the block minimum
            }
            false
        },
        |a, b| match (a, b) {
            (Some(x), Some(y)) => Some(if x.0 <= y.0 { x } else { y }),
            (x, None) => x,
            (None, y) => y,
        },
    );
    Ok(hit.map(|(_, a)| a))
}

fn po_frontier(
    inst: &Instance,
    pred: &Predicate,
    total: u64,
) -> Result<Option<UtilityFrontier>, OracleError> {
    if !pred.po {
        return Ok(None);
    }
    if total > PO_PREDICATE_LIMIT {
        return Err(OracleError::PoPredicateLimit {
            allocations: total as u128,
            limit: PO_PREDICATE_LIMIT,
        });
    }
    Ok(Some(UtilityFrontier::build(inst, total)))
}

fn objective_value(objective: OracleObjective, utilities: &[i64]) -> Option<OptimumValue> {
    match objective {
        OracleObjective::Utilitarian => Some(OptimumValue::Scalar(utilities.iter().sum())),
        OracleObjective::Egalitarian => {
            Some(OptimumValue::Scalar(utilities.iter().copied().min().unwrap_or(0)))
        }
        OracleObjective::Nash => nash_key_of(utilities).ok().map(OptimumValue::Nash),
    }
}

fn value_better(a: &OptimumValue, b: &OptimumValue) -> bool {
    match (a, b) {
        (OptimumValue::Scalar(x), OptimumValue::Scalar(y)) => x > y,
        (OptimumValue::Nash(x), OptimumValue::Nash(y)) => x > y,
        _ => unreachable!("mixed objective values"),
    }
}

/// Maximize a welfare objective over the allocations satisfying the
/// predicate. Allocations with undefined Nash welfare (a negative utility)
/// are never optimal. Ties go to the smallest enumeration index.
pub fn optimize_within(
    inst: &Instance,
    pred: &Predicate,
    objective: OracleObjective,
    ceiling: u64,
) -> Result<Option<(Allocation, OptimumValue)>, OracleError> {
    let total = count_within(inst, ceiling)?;
    let frontier = po_frontier(inst, pred, total)?;

    type Best = Option<(OptimumValue, u64, Allocation)>;
    let best = scan_full(
        inst,
        total,
        true,
        || None,
        |acc: &mut Best, idx, alloc| {
            if !pred.matches_basic(inst, alloc) {
                return false;
            }
            if let Some(f) = &frontier {
                if !f.is_pareto_optimal(alloc.utilities()) {
                    return false;
                }
            }
            let value = match objective_value(objective, alloc.utilities()) {
                Some(v) => v,
                None => return false,
            };
            let replace = match acc {
                None => true,
                Some((cur, _, _)) => value_better(&value, cur),
            };
            if replace {
                *acc = Some((value, idx, alloc.clone()));
            }
            false
        },
        |a: Best, b: Best| match (a, b) {
            (Some(x), Some(y)) => {
                if value_better(&y.0, &x.0) || (y.0 == x.0 && y.1 < x.1) {
                    Some(y)
                } else {
                    Some(x)
                }
            }
            (x, None) => x,
            (None, y) => y,
        },
    );
    Ok(best.map(|(value, _, alloc)| (alloc, value)))
}

/// The size-augmented leximin key: per-agent (utility, bundle size) pairs in
/// ascending order. Leximin++ maximizes this key lexicographically.
pub fn leximin_pp_key(alloc: &Allocation) -> Vec<(i64, usize)> {
    let mut pairs: Vec<(i64, usize)> =
        (0..alloc.num_agents()).map(|i| (alloc.utility(i), alloc.bundle(i).len())).collect();
    pairs.sort_unstable();
    pairs
}

fn leximin_key_of(utils: &[i64], sizes: &[usize]) -> Vec<(i64, usize)> {
    let mut pairs: Vec<(i64, usize)> = utils.iter().copied().zip(sizes.iter().copied()).collect();
    pairs.sort_unstable();
    pairs
}

/// The leximin++ optimal allocation: maximize the minimum utility, then the
/// bundle size of the minimum-utility agent, and so on rank by rank.
///
/// Two pruned passes: first the optimal minimum utility, then the best
/// size-augmented key among allocations attaining it.
pub fn leximin_pp(inst: &Instance, ceiling: u64) -> Result<Allocation, OracleError> {
    let total = count_within(inst, ceiling)?;

    // Deterministic seed: every item to its maximum valuer.
    let mut seed_alloc = Allocation::empty(inst);
    for o in 0..inst.num_items() {
        let agent = (0..inst.num_agents())
            .max_by_key(|&i| (inst.value(i, o), std::cmp::Reverse(i)))
            .expect("at least one agent");
        seed_alloc.assign(inst, o, agent).expect("fresh item");
    }
    let seed_min = seed_alloc.utilities().iter().copied().min().unwrap_or(0);

    // Pass 1: the best achievable minimum utility. The shared atomic keeps
    // pruning tight across parallel blocks.
    let global_best = AtomicI64::new(seed_min);
    let best_min = scan_light(
        inst,
        total,
        true,
        || seed_min,
        |acc, _, utils, _| {
            let m = utils.iter().copied().min().unwrap_or(0);
            if m > *acc {
                *acc = m;
                global_best.fetch_max(m, Ordering::Relaxed);
            }
            false
        },
        |_, utils, remaining| {
            let bound = utils.iter().zip(remaining).map(|(u, r)| u + r).min().unwrap_or(0);
            bound <= global_best.load(Ordering::Relaxed)
        },
        |a, b| a.max(b),
    );

    // Pass 2: best size-augmented key among allocations attaining best_min.
    type Best = Option<(Vec<(i64, usize)>, u64)>;
    let winner = scan_light(
        inst,
        total,
        true,
        || None,
        |acc: &mut Best, idx, utils, sizes| {
            if utils.iter().copied().min().unwrap_or(0) != best_min {
                return false;
            }
            let key = leximin_key_of(utils, sizes);
            let replace = match acc {
                None => true,
                Some((cur, _)) => key > *cur,
            };
            if replace {
                *acc = Some((key, idx));
            }
            false
        },
        |_, utils, remaining| {
            let bound = utils.iter().zip(remaining).map(|(u, r)| u + r).min().unwrap_or(0);
            bound < best_min
        },
        |a: Best, b: Best| match (a, b) {
            (Some(x), Some(y)) => {
                if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) {
                    Some(y)
                } else {
                    Some(x)
                }
            }
            (x, None) => x,
            (None, y) => y,
        },
    );

    let (_, idx) = winner.expect("at least one allocation attains the optimal minimum");
    Ok(decode_allocation(inst, idx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fairness::check_eq1;

    fn ex_1_1() -> Instance {
        Instance::new(vec![vec![-1, -1], vec![1, 1]]).unwrap()
    }

    fn ex_5_1() -> Instance {
        Instance::new(vec![
            vec![1, 1, 1, -1, -1, -1],
            vec![-1, -1, -1, 1, 1, 1],
            vec![-1, -1, -1, 1, 1, 1],
        ])
        .unwrap()
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(allocation_count(&ex_1_1()), 4);
        assert_eq!(allocation_count(&Instance::new(vec![vec![1, 2, 3]]).unwrap()), 1);
        assert_eq!(
            allocation_count(&Instance::new(vec![vec![1, 1], vec![1, 1], vec![1, 1]]).unwrap()),
            9
        );
        let inst = ex_1_1();
        let iter = enumerate_allocations(&inst, DEFAULT_CEILING).unwrap();
        assert_eq!(iter.count(), 4);
    }

    #[test]
    fn ceiling_is_a_hard_error() {
        let inst = Instance::new(vec![vec![1; 3], vec![1; 3]]).unwrap();
        let err = enumerate_allocations(&inst, 7).err().unwrap();
        assert_eq!(err, OracleError::CeilingExceeded { allocations: 8, ceiling: 7 });
    }

    #[test]
    fn no_eq1_allocation_in_example_1_1() {
        let found = exists_with(&ex_1_1(), &Predicate::eq1(), DEFAULT_CEILING).unwrap();
        assert!(found.is_none());
    }

    #[test]
    fn no_eq1_po_allocation_in_example_5_1() {
        let found = exists_with(&ex_5_1(), &Predicate::eq1().and_po(), DEFAULT_CEILING).unwrap();
        assert!(found.is_none());
        // Without PO an EQ1 allocation does exist here.
        let sans_po = exists_with(&ex_5_1(), &Predicate::eq1(), DEFAULT_CEILING).unwrap();
        assert!(sans_po.is_some());
    }

    #[test]
    fn no_partial_eq1_allocation_of_example_4_2_subjective_items() {
        let inst = Instance::new(vec![
            vec![1, 1, 1, 0, 0, 0, -1, -1, -1],
            vec![-1, -1, -1, 1, 1, 1, 0, 0, 0],
        ])
        .unwrap();
        let subjective = inst.classify_items().subjective;
        assert_eq!(subjective, vec![0, 1, 2]);
        let restricted = inst.restricted_to_items(&subjective).unwrap();
        assert_eq!(allocation_count(&restricted), 8);
        let found = exists_with(&restricted, &Predicate::eq1(), DEFAULT_CEILING).unwrap();
        assert!(found.is_none());
    }

    #[test]
    fn exact_po_cases() {
        // Identical valuations: every complete allocation is PO.
        let ident = Instance::new(vec![vec![3, -1, 2], vec![3, -1, 2]]).unwrap();
        for alloc in enumerate_allocations(&ident, DEFAULT_CEILING).unwrap() {
            assert!(exact_po(&ident, &alloc, DEFAULT_CEILING).unwrap());
        }

        // Item valued (1, 0) held by the 0-valuer is dominated.
        let inst = Instance::new(vec![vec![1, -1], vec![0, -1]]).unwrap();
        let bad = Allocation::from_bundles(&inst, &[vec![1], vec![0]]).unwrap();
        assert!(!exact_po(&inst, &bad, DEFAULT_CEILING).unwrap());

        // Single agent: the unique complete allocation is PO.
        let single = Instance::new(vec![vec![5, -5]]).unwrap();
        let all = Allocation::from_bundles(&single, &[vec![0, 1]]).unwrap();
        assert!(exact_po(&single, &all, DEFAULT_CEILING).unwrap());
    }

    #[test]
    fn optimize_within_cases() {
        // Example 1.1 has no EQX allocation.
        let none = optimize_within(
            &ex_1_1(),
            &Predicate::eqx(),
            OracleObjective::Utilitarian,
            DEFAULT_CEILING,
        )
        .unwrap();
        assert!(none.is_none());

        // Single agent, unrestricted: everything, UW = total sum.
        let single = Instance::new(vec![vec![4, -1, 3]]).unwrap();
        let (alloc, value) = optimize_within(
            &single,
            &Predicate::default(),
            OracleObjective::Utilitarian,
            DEFAULT_CEILING,
        )
        .unwrap()
        .unwrap();
        assert_eq!(value, OptimumValue::Scalar(6));
        assert!(alloc.is_complete());
    }

    #[test]
    fn leximin_pp_on_paper_example() {
        let inst = Instance::new(vec![vec![10, -15], vec![-2, -3]]).unwrap();
        let alloc = leximin_pp(&inst, DEFAULT_CEILING).unwrap();
        assert_eq!(alloc.utilities(), &[10, -3]);
        assert!(!check_eq1(&inst, &alloc).holds);
    }

    #[test]
    fn leximin_pp_prefers_larger_bundle_for_the_poorest_agent() {
        let inst = Instance::new(vec![vec![0, 5], vec![0, 5]]).unwrap();
        let alloc = leximin_pp(&inst, DEFAULT_CEILING).unwrap();
        assert_eq!(leximin_pp_key(&alloc), vec![(0, 1), (5, 1)]);
    }

    #[test]
    fn leximin_pp_single_good_identical() {
        let inst = Instance::new(vec![vec![7], vec![7]]).unwrap();
        let alloc = leximin_pp(&inst, DEFAULT_CEILING).unwrap();
        let mut sorted = alloc.utilities().to_vec();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 7]);
    }

    #[test]
    fn oracle_hits_satisfy_their_predicate() {
        let inst =
            Instance::new(vec![vec![2, -1, 1, 0], vec![-2, 1, 1, 1], vec![1, 1, -1, 0]]).unwrap();
        let pred = Predicate::eq1();
        let alloc = exists_with(&inst, &pred, DEFAULT_CEILING).unwrap().expect("exists");
        assert!(pred.matches_basic(&inst, &alloc));
        assert!(check_eq1(&inst, &alloc).holds);
    }

    #[test]
    fn exists_with_returns_the_first_hit_in_enumeration_order() {
        // Plenty of EF1 allocations exist here; the hit must be the one with
        // the smallest mixed-radix index, with or without parallel blocks.
        let inst = Instance::new(vec![
            vec![2, -1, 1, 0, 3, -2, 1, 2],
            vec![-2, 1, 1, 1, -1, 2, 0, 1],
        ])
        .unwrap();
        let pred = Predicate { ef1: true, ..Default::default() };
        let hit = exists_with(&inst, &pred, DEFAULT_CEILING).unwrap().expect("exists");
        let total = allocation_count(&inst) as u64;
        let first_idx = (0..total)
            .find(|&i| pred.matches_basic(&inst, &decode_allocation(&inst, i)))
            .expect("exists");
        assert_eq!(hit, decode_allocation(&inst, first_idx));
    }

    #[test]
    fn parallel_and_serial_scans_agree() {
        let inst =
            Instance::new(vec![vec![2, -1, 1, 0, 3, -2, 1], vec![-2, 1, 1, 1, -1, 2, 0]]).unwrap();
        let total = allocation_count(&inst) as u64;
        let count_eq1 = |parallel: bool| {
            scan_full(
                &inst,
                total,
                parallel,
                || 0u64,
                |acc, _, alloc| {
                    if check_eq1(&inst, alloc).holds {
                        *acc += 1;
                    }
                    false
                },
                |a, b| a + b,
            )
        };
        let serial = count_eq1(false);
        let parallel = count_eq1(true);
        assert!(serial > 0);
        assert_eq!(serial, parallel);
    }

    #[test]
    fn enumeration_is_exhaustive_and_in_index_order() {
        let inst = Instance::new(vec![vec![1, 2], vec![3, 4], vec![5, 6]]).unwrap();
        let total = allocation_count(&inst) as u64;
        let indices = scan_full(
            &inst,
            total,
            false,
            Vec::new,
            |acc: &mut Vec<u64>, idx, _| {
                acc.push(idx);
                false
            },
            |mut a, mut b| {
                a.append(&mut b);
                a
            },
        );
        assert_eq!(indices, (0..9).collect::<Vec<_>>());
        let decoded: std::collections::HashSet<Vec<Vec<usize>>> =
            indices.iter().map(|&i| decode_allocation(&inst, i).bundles_as_vecs()).collect();
        assert_eq!(decoded.len(), 9);
    }
}
