//! Instance generators for each valuation regime, the NP-hardness gadget
//! constructors, the fixture corpus, and file serialization.

pub mod fixtures;
pub mod gadgets;
pub mod io;

use crate::model::Instance;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenerateError {
    #[error("infeasible generator spec: {0}")]
    Infeasible(String),
    #[error("generated instance failed its regime verification: {0}")]
    VerificationFailed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Arbitrary,
    Objective,
    Identical,
    SymmetricBivaluedNormalized,
    SymmetricTrivaluedNormalized,
    TypeNormalized,
    TwoAgentTypeNormalized,
    Binary,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::Arbitrary => "arbitrary",
            Regime::Objective => "objective",
            Regime::Identical => "identical",
            Regime::SymmetricBivaluedNormalized => "bivalued-normalized",
            Regime::SymmetricTrivaluedNormalized => "trivalued-normalized",
            Regime::TypeNormalized => "type-normalized",
            Regime::TwoAgentTypeNormalized => "two-agent-type-normalized",
            Regime::Binary => "binary",
        }
    }
}

#[derive(Debug, Clone)]
pub struct GeneratorSpec {
    pub regime: Regime,
    pub num_agents: usize,
    pub num_items: usize,
    /// Magnitude bound for sampled values; symmetric regimes use it as the
    /// weight w.
    pub value_bound: i64,
    pub seed: u64,
}

/// Deterministic per seed; the output always satisfies its regime's
/// valuation-class flags, verified after generation.
pub fn generate(spec: &GeneratorSpec) -> Result<Instance, GenerateError> {
    let n = spec.num_agents;
    let m = spec.num_items;
    if n == 0 {
        return Err(GenerateError::Infeasible("at least one agent required".into()));
    }
    let bound = spec.value_bound.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let inst = match spec.regime {
        Regime::Arbitrary => {
            let rows =
                (0..n).map(|_| (0..m).map(|_| rng.random_range(-bound..=bound)).collect()).collect();
            Instance::new(rows).expect("rectangular")
        }
        Regime::Objective => {
            let good: Vec<bool> = (0..m).map(|_| rng.random_bool(0.5)).collect();
            let rows = (0..n)
                .map(|_| {
                    (0..m)
                        .map(|o| {
                            if good[o] {
                                rng.random_range(0..=bound)
                            } else {
                                rng.random_range(-bound..=0)
                            }
                        })
                        .collect()
                })
                .collect();
            Instance::new(rows).expect("rectangular")
        }
        Regime::Identical => {
            let row: Vec<i64> = (0..m).map(|_| rng.random_range(-bound..=bound)).collect();
            Instance::new(vec![row; n]).expect("rectangular")
        }
        Regime::Binary => {
            let rows =
                (0..n).map(|_| (0..m).map(|_| rng.random_range(0..=1)).collect()).collect();
            Instance::new(rows).expect("rectangular")
        }
        Regime::SymmetricBivaluedNormalized => {
            let k1 = rng.random_range(0..=m);
            let rows = (0..n)
                .map(|_| {
                    let mut row = vec![-bound; m];
                    let mut idx: Vec<usize> = (0..m).collect();
                    idx.shuffle(&mut rng);
                    for &o in idx.iter().take(k1) {
                        row[o] = bound;
                    }
                    row
                })
                .collect();
            Instance::new(rows).expect("rectangular")
        }
        Regime::SymmetricTrivaluedNormalized => {
            let diff = rng.random_range(-(m as i64)..=(m as i64));
            let rows = (0..n)
                .map(|_| {
                    let b_max = ((m as i64 - diff) / 2).max(0);
                    let b_min = (-diff).max(0);
                    let b = rng.random_range(b_min..=b_max.max(b_min));
                    let a = b + diff;
                    let mut row = vec![0i64; m];
                    let mut idx: Vec<usize> = (0..m).collect();
                    idx.shuffle(&mut rng);
                    for &o in idx.iter().take(a as usize) {
                        row[o] = bound;
                    }
                    for &o in idx.iter().skip(a as usize).take(b as usize) {
                        row[o] = -bound;
                    }
                    row
                })
                .collect();
            Instance::new(rows).expect("rectangular")
        }
        Regime::TypeNormalized => type_normalized(&mut rng, n, m, bound)?,
        Regime::TwoAgentTypeNormalized => {
            if n != 2 {
                return Err(GenerateError::Infeasible(format!(
                    "two-agent regime requires n = 2, got {n}"
                )));
            }
            type_normalized(&mut rng, 2, m, bound)?
        }
    };
    verify_regime(spec, &inst)?;
    Ok(inst)
}

// Type-normalized construction: per agent, a random nonempty set of strictly
// positive items composing the common good sum g and a random nonempty set of
// strictly negative items composing the common chore sum -c, remaining items
// zero. Item 0 is forced subjective (positive for agent 0, negative for agent
// 1) so the generated family always exercises the mixed-manna structure.
fn type_normalized(
    rng: &mut ChaCha8Rng,
    n: usize,
    m: usize,
    bound: i64,
) -> Result<Instance, GenerateError> {
    if m < 2 {
        return Err(GenerateError::Infeasible(
            "type-normalized generation needs at least 2 items".into(),
        ));
    }
    // Sums of at least m keep every composition feasible.
    let g = m as i64 + rng.random_range(0..=bound);
    let c_mag = m as i64 + rng.random_range(0..=bound);
    let mut rows = Vec::with_capacity(n);
    for agent in 0..n {
        let p = rng.random_range(1..=(m - 1));
        let q = rng.random_range(1..=(m - p));
        let mut order: Vec<usize> = (0..m).collect();
        order.shuffle(rng);
        match agent {
            0 => order.retain(|&o| o != 0),
            1 => order.retain(|&o| o != 0),
            _ => {}
        }
        let (positives, negatives): (Vec<usize>, Vec<usize>) = match agent {
            0 => {
                let mut pos = vec![0usize];
                pos.extend(order.iter().take(p - 1));
                let neg = order.iter().skip(p - 1).take(q).copied().collect();
                (pos, neg)
            }
            1 => {
                let pos: Vec<usize> = order.iter().take(p).copied().collect();
                let mut neg = vec![0usize];
                neg.extend(order.iter().skip(p).take(q - 1));
                (pos, neg)
            }
            _ => {
                let pos = order.iter().take(p).copied().collect();
                let neg = order.iter().skip(p).take(q).copied().collect();
                (pos, neg)
            }
        };
        let pos_values = composition(rng, g, positives.len());
        let neg_values = composition(rng, c_mag, negatives.len());
        let mut row = vec![0i64; m];
        for (&o, &v) in positives.iter().zip(&pos_values) {
            row[o] = v;
        }
        for (&o, &v) in negatives.iter().zip(&neg_values) {
            row[o] = -v;
        }
        rows.push(row);
    }
    Ok(Instance::new(rows).expect("rectangular"))
}

/// Two agents, only subjective items, type-normalized: both agents' goods sum
/// to a common g and chores to a common -c. Used by the EQ-via-PO suite.
pub fn two_agent_subjective_type_normalized(
    m: usize,
    value_bound: i64,
    seed: u64,
) -> Result<Instance, GenerateError> {
    if m < 2 {
        return Err(GenerateError::Infeasible(
            "subjective type-normalized generation needs at least 2 items".into(),
        ));
    }
    let bound = value_bound.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = m as i64 + rng.random_range(0..=bound);
    let c_mag = m as i64 + rng.random_range(0..=bound);
    // Items in s0 are goods for agent 0 and chores for agent 1; s1 the other
    // way around.
    let s0 = rng.random_range(1..=(m - 1));
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(&mut rng);
    let (first, second) = order.split_at(s0);
    let a0_pos = composition(&mut rng, g, first.len());
    let a1_neg = composition(&mut rng, c_mag, first.len());
    let a0_neg = composition(&mut rng, c_mag, second.len());
    let a1_pos = composition(&mut rng, g, second.len());
    let mut rows = vec![vec![0i64; m]; 2];
    for (k, &o) in first.iter().enumerate() {
        rows[0][o] = a0_pos[k];
        rows[1][o] = -a1_neg[k];
    }
    for (k, &o) in second.iter().enumerate() {
        rows[0][o] = -a0_neg[k];
        rows[1][o] = a1_pos[k];
    }
    let inst = Instance::new(rows).expect("rectangular");
    let class = inst.classify_valuations();
    if !class.is_type_normalized || inst.classify_items().subjective.len() != m {
        return Err(GenerateError::VerificationFailed(
            "subjective type-normalized construction broke its own contract".into(),
        ));
    }
    Ok(inst)
}

// Random composition of `total` into `parts` strictly positive integers.
fn composition(rng: &mut ChaCha8Rng, total: i64, parts: usize) -> Vec<i64> {
    debug_assert!(parts as i64 <= total && parts > 0);
    if parts == 1 {
        return vec![total];
    }
    let mut cuts: Vec<i64> = rand::seq::index::sample(rng, (total - 1) as usize, parts - 1)
        .into_iter()
        .map(|x| x as i64 + 1)
        .collect();
    cuts.sort_unstable();
    let mut values = Vec::with_capacity(parts);
    let mut prev = 0;
    for &cut in &cuts {
        values.push(cut - prev);
        prev = cut;
    }
    values.push(total - prev);
    values
}

fn verify_regime(spec: &GeneratorSpec, inst: &Instance) -> Result<(), GenerateError> {
    let class = inst.classify_valuations();
    let ok = match spec.regime {
        Regime::Arbitrary => true,
        Regime::Objective => class.is_objective,
        Regime::Identical => class.is_identical,
        Regime::Binary => inst
            .agents()
            .all(|i| inst.row(i).iter().all(|&v| v == 0 || v == 1)),
        Regime::SymmetricBivaluedNormalized => class.is_symmetric_bivalued && class.is_normalized,
        Regime::SymmetricTrivaluedNormalized => {
            class.is_symmetric_trivalued && class.is_normalized
        }
        Regime::TypeNormalized | Regime::TwoAgentTypeNormalized => class.is_type_normalized,
    };
    if ok {
        Ok(())
    } else {
        Err(GenerateError::VerificationFailed(format!(
            "regime {} flags not satisfied",
            spec.regime.name()
        )))
    }
}
