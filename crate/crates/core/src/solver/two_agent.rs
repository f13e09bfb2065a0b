//! Specialized solvers: two agents with type-normalized valuations (EQ1),
//! two agents with only subjective items (EQ, via the fact that every PO
//! allocation is EQ there), two agents with tri-valued type-normalized
//! valuations (EQ1+PO), and identical valuations (EQ1+PO).

use super::objective::{complete_allocation_with, solve_objective_eq1, PhaseTrace};
use super::SolveError;
use crate::fairness::check_eq1;
use crate::model::{Allocation, Instance};

/// EQ1 allocation for two agents with type-normalized valuations.
///
/// Every subjective item goes to its unique positive valuer; the poorer agent
/// then takes its favorite remaining objective goods until it catches up;
/// the completion procedure handles the rest. Type-normalization guarantees
/// the catch-up phase has enough value to work with.
pub fn solve_two_agent_type_normalized(inst: &Instance) -> Result<Allocation, SolveError> {
    let class = require_two_agent_type_normalized(inst)?;
    let _ = class;
    let mut alloc = Allocation::empty(inst);
    let item_classes = inst.classify_items();

    for &o in &item_classes.subjective {
        let to = (0..2)
            .find(|&i| inst.value(i, o) > 0)
            .expect("a subjective item has a positive valuer");
        alloc.assign(inst, o, to).expect("fresh item");
    }

    // Catch-up: the poorer agent takes objective goods in descending value
    // order until its utility is at least the other's.
    let (rich, poor) = if alloc.utility(0) >= alloc.utility(1) { (0, 1) } else { (1, 0) };
    if alloc.utility(poor) < alloc.utility(rich) {
        let mut goods: Vec<usize> = item_classes
            .objective_goods
            .iter()
            .copied()
            .filter(|&o| alloc.owner_of(o).is_none())
            .collect();
        goods.sort_by_key(|&o| (std::cmp::Reverse(inst.value(poor, o)), o));
        for &o in &goods {
            if alloc.utility(poor) >= alloc.utility(rich) {
                break;
            }
            if inst.value(poor, o) <= 0 {
                break;
            }
            alloc.assign(inst, o, poor).expect("fresh item");
        }
        if alloc.utility(poor) < alloc.utility(rich) {
            return Err(SolveError::Defect(
                "type-normalization should guarantee enough objective-good value \
                 for the poorer agent to catch up"
                    .into(),
            ));
        }
    }

    let mut trace = PhaseTrace::new();
    complete_allocation_with(inst, alloc, Default::default(), &mut trace)
        .map_err(|e| SolveError::Defect(format!("completion rejected catch-up output: {e}")))
}

/// EQ (and PO) allocation for two agents with type-normalized valuations and
/// only subjective items: each agent takes exactly the items it values
/// positively, giving both agents utility equal to the common good sum.
pub fn solve_two_agent_subjective_eq(inst: &Instance) -> Result<Allocation, SolveError> {
    let class = require_two_agent_type_normalized(inst)?;
    let item_classes = inst.classify_items();
    if !item_classes.objective_goods.is_empty() || !item_classes.objective_chores.is_empty() {
        return Err(SolveError::not_applicable(
            "subjective-only solver requires every item to be subjective",
        ));
    }
    let mut alloc = Allocation::empty(inst);
    for o in 0..inst.num_items() {
        let to = if inst.value(0, o) > 0 { 0 } else { 1 };
        alloc.assign(inst, o, to).expect("fresh item");
    }
    let g = class.good_sum.expect("type-normalized");
    if alloc.utilities() != [g, g] {
        return Err(SolveError::Defect(format!(
            "subjective split should give both agents the good sum {g}, got {:?}",
            alloc.utilities()
        )));
    }
    Ok(alloc)
}

/// EQ1+PO allocation for two agents with symmetric tri-valued type-normalized
/// valuations.
///
/// Subjective items go to their +w valuer; objective goods valued 0 by one
/// agent go to the other; remaining goods go greedily to the poorer agent;
/// objective chores valued 0 by an agent go to that agent; the remaining
/// universal chores go one by one to the currently richer agent. Every item
/// ends with a maximum valuer, so the allocation is utilitarian-maximal and
/// hence PO.
pub fn solve_two_agent_trivalued_eq1po(inst: &Instance) -> Result<Allocation, SolveError> {
    let class = require_two_agent_type_normalized(inst)?;
    if !class.is_symmetric_trivalued {
        return Err(SolveError::not_applicable(
            "this solver requires symmetric {-w, 0, w} valuations",
        ));
    }
    let item_classes = inst.classify_items();
    let mut alloc = Allocation::empty(inst);

    for &o in &item_classes.subjective {
        let to = (0..2).find(|&i| inst.value(i, o) > 0).expect("positive valuer");
        alloc.assign(inst, o, to).expect("fresh item");
    }

    // Objective goods with a zero valuer go to the other agent (who values
    // them at least as much); ties of zeros go to agent 1 by the first-zero
    // rule.
    let mut plain_goods = Vec::new();
    for &o in &item_classes.objective_goods {
        if let Some(i) = (0..2).find(|&i| inst.value(i, o) == 0) {
            alloc.assign(inst, o, 1 - i).expect("fresh item");
        } else {
            plain_goods.push(o);
        }
    }
    // Remaining goods are valued +w by both: greedily to the poorer agent.
    for &o in &plain_goods {
        let poor = if alloc.utility(0) <= alloc.utility(1) { 0 } else { 1 };
        alloc.assign(inst, o, poor).expect("fresh item");
    }

    // Objective chores with a zero valuer go to that agent (utility
    // unchanged); universal chores go to the currently richer agent.
    let mut universal_chores = Vec::new();
    for &o in &item_classes.objective_chores {
        if let Some(i) = (0..2).find(|&i| inst.value(i, o) == 0) {
            alloc.assign(inst, o, i).expect("fresh item");
        } else {
            universal_chores.push(o);
        }
    }
    for &o in &universal_chores {
        let rich = if alloc.utility(0) >= alloc.utility(1) { 0 } else { 1 };
        alloc.assign(inst, o, rich).expect("fresh item");
    }

    if !check_eq1(inst, &alloc).holds {
        return Err(SolveError::Defect(
            "two-agent tri-valued type-normalized output failed EQ1".into(),
        ));
    }
    Ok(alloc)
}

/// EQ1+PO allocation for identical valuations: the objective greedy output is
/// EQ1, and under identical valuations every complete allocation is PO.
pub fn solve_identical_eq1po(inst: &Instance) -> Result<Allocation, SolveError> {
    if !inst.classify_valuations().is_identical {
        return Err(SolveError::not_applicable("identical solver requires identical rows"));
    }
    let (alloc, _) = solve_objective_eq1(inst)?;
    Ok(alloc)
}

fn require_two_agent_type_normalized(
    inst: &Instance,
) -> Result<crate::model::ValuationClass, SolveError> {
    if inst.num_agents() != 2 {
        return Err(SolveError::not_applicable(format!(
            "requires exactly 2 agents, got {}",
            inst.num_agents()
        )));
    }
    let class = inst.classify_valuations();
    if !class.is_type_normalized {
        return Err(SolveError::not_applicable("requires type-normalized valuations"));
    }
    Ok(class)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fairness::{check_eq, check_eq1, check_po_nonwasteful};
    use crate::model::Instance;
    use crate::oracle::{exact_po, DEFAULT_CEILING};

    fn ex_4_2() -> Instance {
        Instance::new(vec![
            vec![1, 1, 1, 0, 0, 0, -1, -1, -1],
            vec![-1, -1, -1, 1, 1, 1, 0, 0, 0],
        ])
        .unwrap()
    }

    #[test]
    fn type_normalized_solver_on_example_4_2() {
        let inst = ex_4_2();
        let alloc = solve_two_agent_type_normalized(&inst).unwrap();
        assert!(alloc.is_complete());
        assert!(check_eq1(&inst, &alloc).holds);
        // Step 1 gives Alice the subjective items; step 2 lets Bob catch up
        // with o4..o6; completion hands out the chores deterministically.
        assert_eq!(alloc.bundles_as_vecs(), vec![vec![0, 1, 2, 6], vec![3, 4, 5, 7, 8]]);
        assert_eq!(alloc.utilities(), &[2, 3]);
    }

    #[test]
    fn type_normalized_solver_without_subjective_items_degenerates_to_completion() {
        let inst = Instance::new(vec![vec![2, 1, -3], vec![1, 2, -3]]).unwrap();
        let class = inst.classify_valuations();
        assert!(class.is_type_normalized);
        let alloc = solve_two_agent_type_normalized(&inst).unwrap();
        assert!(alloc.is_complete());
        assert!(check_eq1(&inst, &alloc).holds);
    }

    #[test]
    fn type_normalized_solver_rejects_bad_input() {
        let three = Instance::new(vec![vec![1], vec![1], vec![1]]).unwrap();
        assert!(matches!(
            solve_two_agent_type_normalized(&three),
            Err(SolveError::NotApplicable(_))
        ));
        let not_tn = Instance::new(vec![vec![3, -1], vec![1, -2]]).unwrap();
        assert!(matches!(
            solve_two_agent_type_normalized(&not_tn),
            Err(SolveError::NotApplicable(_))
        ));
    }

    #[test]
    fn subjective_eq_solver_gives_both_agents_the_good_sum() {
        let inst = Instance::new(vec![vec![2, -2], vec![-2, 2]]).unwrap();
        let alloc = solve_two_agent_subjective_eq(&inst).unwrap();
        assert_eq!(alloc.bundles_as_vecs(), vec![vec![0], vec![1]]);
        assert_eq!(alloc.utilities(), &[2, 2]);
        assert!(check_eq(&inst, &alloc).holds);
        assert!(exact_po(&inst, &alloc, DEFAULT_CEILING).unwrap());
    }

    #[test]
    fn subjective_eq_solver_on_empty_instance() {
        let inst = Instance::new(vec![vec![], vec![]]).unwrap();
        let alloc = solve_two_agent_subjective_eq(&inst).unwrap();
        assert!(check_eq(&inst, &alloc).holds);
    }

    #[test]
    fn subjective_eq_solver_rejects_objective_items() {
        let inst = Instance::new(vec![vec![2, 1, -3], vec![1, 2, -3]]).unwrap();
        assert!(matches!(
            solve_two_agent_subjective_eq(&inst),
            Err(SolveError::NotApplicable(_))
        ));
    }

    #[test]
    fn trivalued_eq1po_solver_on_example_4_2() {
        let inst = ex_4_2();
        let alloc = solve_two_agent_trivalued_eq1po(&inst).unwrap();
        assert!(check_eq1(&inst, &alloc).holds);
        // The zero-valued chores o7..o9 all go to Bob, who values them 0.
        for o in [6, 7, 8] {
            assert_eq!(alloc.owner_of(o), Some(1));
        }
        assert_eq!(check_po_nonwasteful(&inst, &alloc), Ok(true));
        assert!(exact_po(&inst, &alloc, DEFAULT_CEILING).unwrap());
    }

    #[test]
    fn trivalued_eq1po_solver_on_universal_chores() {
        let inst = Instance::new(vec![vec![-1, -1, -1], vec![-1, -1, -1]]).unwrap();
        let alloc = solve_two_agent_trivalued_eq1po(&inst).unwrap();
        assert!(check_eq1(&inst, &alloc).holds);
        assert!(exact_po(&inst, &alloc, DEFAULT_CEILING).unwrap());
    }

    #[test]
    fn identical_solver_matches_objective_greedy_and_is_po()
    {
        let inst = Instance::new(vec![
            vec![2, 2, 2, 2, -3, -3, -3],
            vec![2, 2, 2, 2, -3, -3, -3],
        ])
        .unwrap();
        let alloc = solve_identical_eq1po(&inst).unwrap();
        let (greedy, _) = solve_objective_eq1(&inst).unwrap();
        assert_eq!(alloc, greedy);
        assert!(exact_po(&inst, &alloc, DEFAULT_CEILING).unwrap());

        let single = Instance::new(vec![vec![5, -2]]).unwrap();
        let alloc = solve_identical_eq1po(&single).unwrap();
        assert_eq!(alloc.bundle(0).len(), 2);

        let not_ident = Instance::new(vec![vec![1, 2], vec![2, 1]]).unwrap();
        assert!(matches!(solve_identical_eq1po(&not_ident), Err(SolveError::NotApplicable(_))));
    }
}
