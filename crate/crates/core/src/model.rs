//! Core data model: instances, item classification, valuation classes, and
//! allocations with incrementally maintained utilities.
//!
//! Agents and items are dense 0-based indices. Valuations are integers; all
//! utility arithmetic is exact.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("instance must have at least one agent")]
    NoAgents,
    #[error("row {row} has {got} entries, expected {expected}")]
    RaggedMatrix { row: usize, got: usize, expected: usize },
    #[error("agent index {0} out of range")]
    AgentOutOfRange(usize),
    #[error("item index {0} out of range")]
    ItemOutOfRange(usize),
    #[error("item {item} is already allocated to agent {owner}")]
    AlreadyAllocated { item: usize, owner: usize },
    #[error("item {item} is not in the bundle of agent {agent}")]
    NotOwned { item: usize, agent: usize },
}

/// A fair division instance: `n` agents, `m` items, and an integer valuation
/// matrix `values[i][o]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    name: Option<String>,
    num_agents: usize,
    num_items: usize,
    values: Vec<i64>, // row-major n x m
}

impl Instance {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self, ModelError> {
        if rows.is_empty() {
            return Err(ModelError::NoAgents);
        }
        let num_items = rows[0].len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != num_items {
                return Err(ModelError::RaggedMatrix { row: i, got: row.len(), expected: num_items });
            }
        }
        Ok(Instance {
            name: None,
            num_agents: rows.len(),
            num_items,
            values: rows.into_iter().flatten().collect(),
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn num_agents(&self) -> usize {
        self.num_agents
    }

    pub fn num_items(&self) -> usize {
        self.num_items
    }

    pub fn agents(&self) -> impl Iterator<Item = usize> + Clone {
        0..self.num_agents
    }

    pub fn items(&self) -> impl Iterator<Item = usize> + Clone {
        0..self.num_items
    }

    /// Value of item `item` to agent `agent`.
    pub fn value(&self, agent: usize, item: usize) -> i64 {
        debug_assert!(agent < self.num_agents && item < self.num_items);
        self.values[agent * self.num_items + item]
    }

    pub fn row(&self, agent: usize) -> &[i64] {
        &self.values[agent * self.num_items..(agent + 1) * self.num_items]
    }

    /// Sub-instance over the given item subset (columns), preserving order.
    /// Item `k` of the result is `items[k]` of the original.
    pub fn restricted_to_items(&self, items: &[usize]) -> Result<Instance, ModelError> {
        for &o in items {
            if o >= self.num_items {
                return Err(ModelError::ItemOutOfRange(o));
            }
        }
        let mut values = Vec::with_capacity(self.num_agents * items.len());
        for i in 0..self.num_agents {
            for &o in items {
                values.push(self.value(i, o));
            }
        }
        Ok(Instance {
            name: self.name.clone(),
            num_agents: self.num_agents,
            num_items: items.len(),
            values,
        })
    }

    /// Same instance with every value replaced by its sign. For symmetric
    /// `{-w, 0, w}` instances this is the unit-scaled equivalent; equitability
    /// and efficiency notions are scale-free.
    pub fn signum_scaled(&self) -> Instance {
        Instance {
            name: self.name.clone(),
            num_agents: self.num_agents,
            num_items: self.num_items,
            values: self.values.iter().map(|v| v.signum()).collect(),
        }
    }

    pub fn classify_items(&self) -> ItemClass {
        let mut kinds = Vec::with_capacity(self.num_items);
        let mut objective_goods = Vec::new();
        let mut objective_chores = Vec::new();
        let mut subjective = Vec::new();
        for o in 0..self.num_items {
            let kind = if (0..self.num_agents).all(|i| self.value(i, o) >= 0) {
                objective_goods.push(o);
                ItemKind::ObjectiveGood
            } else if (0..self.num_agents).all(|i| self.value(i, o) <= 0) {
                objective_chores.push(o);
                ItemKind::ObjectiveChore
            } else {
                subjective.push(o);
                ItemKind::Subjective
            };
            kinds.push(kind);
        }
        ItemClass { objective_goods, objective_chores, subjective, kinds }
    }

    pub fn classify_valuations(&self) -> ValuationClass {
        let n = self.num_agents;
        let is_objective = self.classify_items().subjective.is_empty();
        let is_identical = (1..n).all(|i| self.row(i) == self.row(0));

        // Symmetric weight: the single positive magnitude shared by all
        // non-zero entries, if one exists. An all-zero matrix is reported
        // tri-valued with weight 1.
        let mut weight: Option<i64> = None;
        let mut symmetric = true;
        let mut has_zero = false;
        for &v in &self.values {
            if v == 0 {
                has_zero = true;
                continue;
            }
            match weight {
                None => weight = Some(v.abs()),
                Some(w) => {
                    if v.abs() != w {
                        symmetric = false;
                        break;
                    }
                }
            }
        }
        let is_symmetric_trivalued = symmetric;
        let is_symmetric_bivalued = symmetric && !has_zero;
        let symmetric_weight = if symmetric { Some(weight.unwrap_or(1)) } else { None };

        let totals: Vec<i64> = (0..n).map(|i| self.row(i).iter().sum()).collect();
        let is_normalized = totals.windows(2).all(|w| w[0] == w[1]);

        let good_sums: Vec<i64> =
            (0..n).map(|i| self.row(i).iter().filter(|&&v| v >= 0).sum()).collect();
        let chore_sums: Vec<i64> =
            (0..n).map(|i| self.row(i).iter().filter(|&&v| v <= 0).sum()).collect();
        let is_type_normalized = good_sums.windows(2).all(|w| w[0] == w[1])
            && chore_sums.windows(2).all(|w| w[0] == w[1]);

        ValuationClass {
            is_objective,
            is_identical,
            is_symmetric_bivalued,
            is_symmetric_trivalued,
            is_normalized,
            is_type_normalized,
            symmetric_weight,
            good_sum: is_type_normalized.then(|| good_sums[0]),
            chore_sum: is_type_normalized.then(|| chore_sums[0]),
            total: is_normalized.then(|| totals[0]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ItemKind {
    ObjectiveGood,
    ObjectiveChore,
    Subjective,
}

/// Partition of the items into objective goods (valued >= 0 by everyone),
/// objective chores (valued <= 0 by everyone, not already a good), and
/// subjective items (positive for someone, negative for someone else).
///
/// An item valued 0 by every agent satisfies both objective definitions and
/// lands in `objective_goods`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ItemClass {
    pub objective_goods: Vec<usize>,
    pub objective_chores: Vec<usize>,
    pub subjective: Vec<usize>,
    kinds: Vec<ItemKind>,
}

impl ItemClass {
    pub fn kind_of(&self, item: usize) -> ItemKind {
        self.kinds[item]
    }
}

/// Structural flags of a valuation matrix. `good_sum`/`chore_sum`/`total` are
/// populated exactly when the corresponding flag holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationClass {
    pub is_objective: bool,
    pub is_identical: bool,
    pub is_symmetric_bivalued: bool,
    pub is_symmetric_trivalued: bool,
    pub is_normalized: bool,
    pub is_type_normalized: bool,
    /// The magnitude w of a symmetric {-w,0,w} matrix (1 for an all-zero matrix).
    pub symmetric_weight: Option<i64>,
    pub good_sum: Option<i64>,
    pub chore_sum: Option<i64>,
    pub total: Option<i64>,
}

/// A (possibly partial) allocation of items to agents. Bundles are pairwise
/// disjoint; per-agent utilities are maintained incrementally on every
/// mutation and always equal the recomputed sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation {
    owner: Vec<Option<usize>>,
    bundles: Vec<BTreeSet<usize>>,
    utilities: Vec<i64>,
}

impl Allocation {
    pub fn empty(inst: &Instance) -> Self {
        Allocation {
            owner: vec![None; inst.num_items()],
            bundles: vec![BTreeSet::new(); inst.num_agents()],
            utilities: vec![0; inst.num_agents()],
        }
    }

    pub fn from_bundles(inst: &Instance, bundles: &[Vec<usize>]) -> Result<Self, ModelError> {
        if bundles.len() != inst.num_agents() {
            return Err(ModelError::AgentOutOfRange(bundles.len().saturating_sub(1)));
        }
        let mut alloc = Allocation::empty(inst);
        for (agent, bundle) in bundles.iter().enumerate() {
            for &item in bundle {
                alloc.assign(inst, item, agent)?;
            }
        }
        Ok(alloc)
    }

    pub fn num_agents(&self) -> usize {
        self.bundles.len()
    }

    pub fn num_items(&self) -> usize {
        self.owner.len()
    }

    pub fn owner_of(&self, item: usize) -> Option<usize> {
        self.owner[item]
    }

    pub fn bundle(&self, agent: usize) -> &BTreeSet<usize> {
        &self.bundles[agent]
    }

    pub fn bundles(&self) -> &[BTreeSet<usize>] {
        &self.bundles
    }

    pub fn utility(&self, agent: usize) -> i64 {
        self.utilities[agent]
    }

    pub fn utilities(&self) -> &[i64] {
        &self.utilities
    }

    pub fn allocated_count(&self) -> usize {
        self.owner.iter().filter(|o| o.is_some()).count()
    }

    pub fn is_complete(&self) -> bool {
        self.owner.iter().all(|o| o.is_some())
    }

    pub fn unallocated(&self) -> impl Iterator<Item = usize> + '_ {
        self.owner.iter().enumerate().filter(|(_, o)| o.is_none()).map(|(i, _)| i)
    }

    /// Give an unallocated item to an agent, updating the cached utility.
    pub fn assign(&mut self, inst: &Instance, item: usize, agent: usize) -> Result<(), ModelError> {
        if agent >= self.num_agents() {
            return Err(ModelError::AgentOutOfRange(agent));
        }
        if item >= self.num_items() {
            return Err(ModelError::ItemOutOfRange(item));
        }
        if let Some(owner) = self.owner[item] {
            return Err(ModelError::AlreadyAllocated { item, owner });
        }
        self.owner[item] = Some(agent);
        self.bundles[agent].insert(item);
        self.utilities[agent] += inst.value(agent, item);
        Ok(())
    }

    /// Move an item between bundles, updating both cached utilities.
    pub fn transfer(
        &mut self,
        inst: &Instance,
        item: usize,
        from: usize,
        to: usize,
    ) -> Result<(), ModelError> {
        if from >= self.num_agents() {
            return Err(ModelError::AgentOutOfRange(from));
        }
        if to >= self.num_agents() {
            return Err(ModelError::AgentOutOfRange(to));
        }
        if item >= self.num_items() {
            return Err(ModelError::ItemOutOfRange(item));
        }
        if self.owner[item] != Some(from) {
            return Err(ModelError::NotOwned { item, agent: from });
        }
        if from == to {
            return Ok(());
        }
        self.bundles[from].remove(&item);
        self.bundles[to].insert(item);
        self.owner[item] = Some(to);
        self.utilities[from] -= inst.value(from, item);
        self.utilities[to] += inst.value(to, item);
        Ok(())
    }

    // Take an item back from its owner. Only the enumeration machinery needs
    // this; solvers move items with `transfer`.
    pub(crate) fn remove(&mut self, inst: &Instance, item: usize) {
        if let Some(owner) = self.owner[item] {
            self.bundles[owner].remove(&item);
            self.owner[item] = None;
            self.utilities[owner] -= inst.value(owner, item);
        }
    }

    /// Recompute utilities from scratch; used to cross-check the incremental
    /// bookkeeping in tests.
    pub fn recomputed_utilities(&self, inst: &Instance) -> Vec<i64> {
        (0..self.num_agents())
            .map(|i| self.bundles[i].iter().map(|&o| inst.value(i, o)).sum())
            .collect()
    }

    pub fn bundles_as_vecs(&self) -> Vec<Vec<usize>> {
        self.bundles.iter().map(|b| b.iter().copied().collect()).collect()
    }
}
