//! Transfer-based solvers for symmetric normalized valuations: EQX for
//! bi-valued ({-w, w}) instances and EQ1 for tri-valued ({-w, 0, w})
//! instances.
//!
//! The loop alternates greedy phases (goods to poor agents, chores to rich
//! agents) with single item transfers between extreme agents, plus a pairing
//! fallback when the poor agents outnumber the rich. The bi-valued variant
//! works over the subjective items first and finishes with the completion
//! procedure; the tri-valued variant must range over all items, since a
//! partial allocation of the subjective items alone need not be EQ1.
//!
//! All solvers run on the sign matrix internally; results for {-1, 0, 1} are
//! scale-free.

use super::objective::{complete_allocation_with, PhaseTrace};
use super::{Chooser, SolveError, TieBreak};
use crate::model::{Allocation, Instance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransferKind {
    RichRich,
    RichPoor,
    PoorRich,
    PoorPoor,
    FallbackPairing,
}

impl std::fmt::Display for TransferKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            TransferKind::RichRich => "R-R",
            TransferKind::RichPoor => "R-P",
            TransferKind::PoorRich => "P-R",
            TransferKind::PoorPoor => "P-P",
            TransferKind::FallbackPairing => "fallback",
        };
        f.write_str(s)
    }
}

/// One executed reallocation. `value_pair` holds (v_from(item), v_to(item))
/// in the original instance's units; `gap_before` is max - min utility at the
/// moment the transfer fired. Fallback rounds are batches of records; the gap
/// invariant applies per round, not per record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransferRecord {
    pub kind: TransferKind,
    pub item: usize,
    pub from: usize,
    pub to: usize,
    pub value_pair: (i64, i64),
    pub gap_before: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Bivalued,
    Trivalued,
}

/// EQX allocation for symmetric bi-valued normalized valuations.
pub fn solve_bivalued_eqx(
    inst: &Instance,
) -> Result<(Allocation, Vec<TransferRecord>), SolveError> {
    solve_bivalued_eqx_with(inst, TieBreak::Lexicographic)
}

pub fn solve_bivalued_eqx_with(
    inst: &Instance,
    tie: TieBreak,
) -> Result<(Allocation, Vec<TransferRecord>), SolveError> {
    let class = inst.classify_valuations();
    if !class.is_symmetric_bivalued {
        return Err(SolveError::not_applicable(
            "bi-valued solver requires symmetric {-w, w} valuations",
        ));
    }
    if !class.is_normalized {
        return Err(SolveError::not_applicable("bi-valued solver requires normalized valuations"));
    }
    run_scaled(inst, Mode::Bivalued, tie, class.symmetric_weight.unwrap_or(1), &mut |_, _| {})
}

/// EQ1 allocation for symmetric tri-valued normalized valuations.
pub fn solve_trivalued_eq1(
    inst: &Instance,
) -> Result<(Allocation, Vec<TransferRecord>), SolveError> {
    solve_trivalued_eq1_with(inst, TieBreak::Lexicographic)
}

pub fn solve_trivalued_eq1_with(
    inst: &Instance,
    tie: TieBreak,
) -> Result<(Allocation, Vec<TransferRecord>), SolveError> {
    let class = inst.classify_valuations();
    if !class.is_symmetric_trivalued {
        return Err(SolveError::not_applicable(
            "tri-valued solver requires symmetric {-w, 0, w} valuations",
        ));
    }
    if !class.is_normalized {
        return Err(SolveError::not_applicable("tri-valued solver requires normalized valuations"));
    }
    run_scaled(inst, Mode::Trivalued, tie, class.symmetric_weight.unwrap_or(1), &mut |_, _| {})
}

// Observer hook: called after every single assignment and after every
// completed transfer/fallback round, on the unit-scaled state. Unit tests use
// it to assert the EQ1 loop invariant.
fn run_scaled(
    inst: &Instance,
    mode: Mode,
    tie: TieBreak,
    weight: i64,
    observer: &mut dyn FnMut(&Instance, &Allocation),
) -> Result<(Allocation, Vec<TransferRecord>), SolveError> {
    let scaled = inst.signum_scaled();
    let (alloc, log) = engine(&scaled, mode, tie, observer)?;
    let rebuilt = Allocation::from_bundles(inst, &alloc.bundles_as_vecs())
        .expect("engine output is a valid allocation");
    let log = log
        .into_iter()
        .map(|r| TransferRecord {
            value_pair: (r.value_pair.0 * weight, r.value_pair.1 * weight),
            gap_before: r.gap_before * weight,
            ..r
        })
        .collect();
    Ok((rebuilt, log))
}

// Per-agent static item lists by sign, each with a cursor that skips items
// already allocated. Items never leave bundles once allocated (transfers move
// them between bundles), so cursors only ever advance.
struct SignLists {
    plus: Vec<Vec<usize>>,
    zero: Vec<Vec<usize>>,
    minus: Vec<Vec<usize>>,
    plus_cur: Vec<usize>,
    zero_cur: Vec<usize>,
    minus_cur: Vec<usize>,
}

impl SignLists {
    fn build(inst: &Instance, pool: &[usize]) -> Self {
        let n = inst.num_agents();
        let mut plus = vec![Vec::new(); n];
        let mut zero = vec![Vec::new(); n];
        let mut minus = vec![Vec::new(); n];
        for &o in pool {
            for i in 0..n {
                match inst.value(i, o).signum() {
                    1 => plus[i].push(o),
                    0 => zero[i].push(o),
                    _ => minus[i].push(o),
                }
            }
        }
        SignLists {
            plus_cur: vec![0; n],
            zero_cur: vec![0; n],
            minus_cur: vec![0; n],
            plus,
            zero,
            minus,
        }
    }

    fn next_unallocated(&mut self, alloc: &Allocation, agent: usize, sign: i64) -> Option<usize> {
        let (list, cur) = match sign {
            1 => (&self.plus[agent], &mut self.plus_cur[agent]),
            0 => (&self.zero[agent], &mut self.zero_cur[agent]),
            _ => (&self.minus[agent], &mut self.minus_cur[agent]),
        };
        while *cur < list.len() && alloc.owner_of(list[*cur]).is_some() {
            *cur += 1;
        }
        (*cur < list.len()).then(|| list[*cur])
    }
}

fn extreme_agents(alloc: &Allocation) -> (Vec<usize>, Vec<usize>, i64) {
    let u = alloc.utilities();
    let min = *u.iter().min().expect("at least one agent");
    let max = *u.iter().max().expect("at least one agent");
    let poor = (0..u.len()).filter(|&i| u[i] == min).collect();
    let rich = (0..u.len()).filter(|&i| u[i] == max).collect();
    (poor, rich, max - min)
}

fn engine(
    scaled: &Instance,
    mode: Mode,
    tie: TieBreak,
    observer: &mut dyn FnMut(&Instance, &Allocation),
) -> Result<(Allocation, Vec<TransferRecord>), SolveError> {
    let classes = scaled.classify_items();
    let pool: Vec<usize> = match mode {
        Mode::Bivalued => classes.subjective.clone(),
        Mode::Trivalued => (0..scaled.num_items()).collect(),
    };
    let pool_size = pool.len();
    let mut lists = SignLists::build(scaled, &pool);
    let mut alloc = Allocation::empty(scaled);
    let mut log: Vec<TransferRecord> = Vec::new();
    let mut chooser = Chooser::new(tie);
    let mut allocated_from_pool = 0usize;

    let max_rounds = 2 * scaled.num_items() + 2 * scaled.num_agents() + 32;
    let mut rounds = 0usize;

    'outer: loop {
        // Greedy phases (a) and (b) to exhaustion.
        loop {
            if let Some((agent, item)) =
                greedy_step(&alloc, &mut lists, mode, true, &mut chooser)
            {
                alloc.assign(scaled, item, agent).expect("pool item unallocated");
                allocated_from_pool += 1;
                observer(scaled, &alloc);
                continue;
            }
            if let Some((agent, item)) =
                greedy_step(&alloc, &mut lists, mode, false, &mut chooser)
            {
                alloc.assign(scaled, item, agent).expect("pool item unallocated");
                allocated_from_pool += 1;
                observer(scaled, &alloc);
                continue;
            }
            break;
        }
        if allocated_from_pool == pool_size {
            break 'outer;
        }

        rounds += 1;
        if rounds > max_rounds {
            return Err(SolveError::Defect(format!(
                "transfer loop exceeded {max_rounds} rounds without exhausting the pool"
            )));
        }

        let (poor, rich, gap) = extreme_agents(&alloc);
        if gap == 0 {
            // Greedy can always place an item when everyone is tied: any
            // remaining item is a good for a poor agent or a chore for a rich
            // one. Reaching this state is a bug.
            return Err(SolveError::Defect(
                "greedy stalled with all utilities equal and items remaining".into(),
            ));
        }

        if let Some(t) = find_transfer(scaled, &alloc, mode, &poor, &rich, &mut chooser) {
            alloc.transfer(scaled, t.item, t.from, t.to).expect("transfer legality");
            log.push(TransferRecord { gap_before: gap, ..t });
            observer(scaled, &alloc);
            continue 'outer;
        }

        if poor.len() > rich.len() {
            fallback_round(scaled, &mut alloc, &poor, &rich, &mut chooser, &mut log)?;
            observer(scaled, &alloc);
            continue 'outer;
        }

        // The normalization argument proves this state unreachable.
        return Err(SolveError::Defect(format!(
            "no feasible transfer with |P| = {} <= |R| = {} and {} items unallocated",
            poor.len(),
            rich.len(),
            pool_size - allocated_from_pool
        )));
    }

    if mode == Mode::Bivalued {
        let mut trace = PhaseTrace::new();
        alloc = complete_allocation_with(scaled, alloc, tie, &mut trace)
            .map_err(|e| SolveError::Defect(format!("completion rejected transfer output: {e}")))?;
        observer(scaled, &alloc);
    }
    Ok((alloc, log))
}

// One greedy assignment: a poor agent takes an item it values +1 (or 0 in
// tri-valued mode), or a rich agent takes an item it values -1 (or 0).
fn greedy_step(
    alloc: &Allocation,
    lists: &mut SignLists,
    mode: Mode,
    goods_phase: bool,
    chooser: &mut Chooser,
) -> Option<(usize, usize)> {
    let (poor, rich, _) = extreme_agents(alloc);
    let agents = if goods_phase { poor } else { rich };
    let signs: &[i64] = match (mode, goods_phase) {
        (Mode::Bivalued, true) => &[1],
        (Mode::Bivalued, false) => &[-1],
        (Mode::Trivalued, true) => &[1, 0],
        (Mode::Trivalued, false) => &[-1, 0],
    };
    for &sign in signs {
        let candidates: Vec<(usize, usize)> = agents
            .iter()
            .filter_map(|&a| lists.next_unallocated(alloc, a, sign).map(|o| (a, o)))
            .collect();
        if let Some(pick) = chooser.pick(&candidates) {
            return Some(pick);
        }
    }
    None
}

// Legal (v_from, v_to) sign pairs per transfer kind.
fn legal_pairs(mode: Mode, kind: TransferKind) -> &'static [(i64, i64)] {
    match (mode, kind) {
        (Mode::Bivalued, TransferKind::RichRich) => &[(1, -1)],
        (Mode::Bivalued, TransferKind::RichPoor) => &[(1, 1)],
        (Mode::Bivalued, TransferKind::PoorRich) => &[(-1, -1)],
        (Mode::Bivalued, TransferKind::PoorPoor) => &[(-1, 1)],
        (Mode::Trivalued, TransferKind::RichRich) => &[(1, 0), (0, -1), (1, -1)],
        (Mode::Trivalued, TransferKind::RichPoor) => &[(1, 1), (1, 0), (0, 1)],
        (Mode::Trivalued, TransferKind::PoorRich) => &[(-1, 0), (-1, -1), (0, -1)],
        (Mode::Trivalued, TransferKind::PoorPoor) => &[(-1, 1), (0, 1), (-1, 0)],
        (_, TransferKind::FallbackPairing) => &[],
    }
}

const TRANSFER_ORDER: [TransferKind; 4] = [
    TransferKind::RichRich,
    TransferKind::RichPoor,
    TransferKind::PoorRich,
    TransferKind::PoorPoor,
];

fn find_transfer(
    scaled: &Instance,
    alloc: &Allocation,
    mode: Mode,
    poor: &[usize],
    rich: &[usize],
    chooser: &mut Chooser,
) -> Option<TransferRecord> {
    let mut all: Vec<TransferRecord> = Vec::new();
    for kind in TRANSFER_ORDER {
        let (from_set, to_set): (&[usize], &[usize]) = match kind {
            TransferKind::RichRich => (rich, rich),
            TransferKind::RichPoor => (rich, poor),
            TransferKind::PoorRich => (poor, rich),
            TransferKind::PoorPoor => (poor, poor),
            TransferKind::FallbackPairing => unreachable!(),
        };
        let pairs = legal_pairs(mode, kind);
        for &from in from_set {
            for &item in alloc.bundle(from) {
                let v_from = scaled.value(from, item);
                for &to in to_set {
                    if to == from {
                        continue;
                    }
                    let v_to = scaled.value(to, item);
                    if pairs.contains(&(v_from, v_to)) {
                        let rec = TransferRecord {
                            kind,
                            item,
                            from,
                            to,
                            value_pair: (v_from, v_to),
                            gap_before: 0, // filled by the caller
                        };
                        if chooser.is_deterministic() {
                            return Some(rec);
                        }
                        all.push(rec);
                    }
                }
            }
        }
    }
    chooser.pick(&all)
}

// Pairing fallback: each rich agent hands a +1-valued item to a distinct poor
// agent (who necessarily values it -1, else a rich-poor transfer existed).
// Pairs and items are chosen from the state at round start; the EQ1 invariant
// applies after the whole round.
fn fallback_round(
    scaled: &Instance,
    alloc: &mut Allocation,
    poor: &[usize],
    rich: &[usize],
    chooser: &mut Chooser,
    log: &mut Vec<TransferRecord>,
) -> Result<(), SolveError> {
    let mut poor_order: Vec<usize> = poor.to_vec();
    chooser.shuffle(&mut poor_order);
    let planned: Vec<(usize, usize, usize)> = rich
        .iter()
        .zip(&poor_order)
        .map(|(&r, &p)| {
            let goods: Vec<usize> = alloc
                .bundle(r)
                .iter()
                .copied()
                .filter(|&o| scaled.value(r, o) == 1)
                .collect();
            let item = chooser.pick(&goods).ok_or_else(|| {
                SolveError::Defect(format!("fallback: rich agent {r} holds no +1-valued item"))
            })?;
            if scaled.value(p, item) != -1 {
                return Err(SolveError::Defect(format!(
                    "fallback: paired poor agent {p} does not value item {item} at -1"
                )));
            }
            Ok((r, p, item))
        })
        .collect::<Result<_, _>>()?;
    let u = alloc.utilities();
    let gap = u.iter().max().unwrap() - u.iter().min().unwrap();
    for (r, p, item) in planned {
        alloc.transfer(scaled, item, r, p).expect("fallback transfer legality");
        log.push(TransferRecord {
            kind: TransferKind::FallbackPairing,
            item,
            from: r,
            to: p,
            value_pair: (scaled.value(r, item), scaled.value(p, item)),
            gap_before: gap,
        });
    }
    Ok(())
}
