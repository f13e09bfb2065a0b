//! C ABI for the eqmanna library: opaque handles, integer status codes, and
//! JSON strings for structured data. The header `include/eqmanna.h` is
//! generated by cbindgen at build time.
//!
//! Conventions: every fallible function returns an `EqmStatus`; outputs are
//! written through out-pointers only on `Ok`. Strings returned through
//! `char**` are heap-allocated and must be released with `eqm_string_free`;
//! handles with their matching `_free` function. Status codes mirror the CLI
//! exit codes where the concepts overlap.

use eqmanna::dp::{dp_welfare_eqx, DpConfig, DpError, DpObjective, DpOutcome};
use eqmanna::fairness::{
    check_ef, check_ef1, check_efx, check_eq, check_eq1, check_eqx, ZeroPolicy,
};
use eqmanna::instances::io::{
    allocation_from_str, allocation_to_string, instance_from_str, instance_to_string,
};
use eqmanna::model::{Allocation, Instance, ItemKind};
use eqmanna::oracle::{self, exists_with, OracleError, Predicate};
use eqmanna::solver::{Outcome, SolveError, TieBreak};
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqmStatus {
    Ok = 0,
    Failure = 1,
    NonExistent = 2,
    NotApplicable = 3,
    CeilingExceeded = 4,
    ParseError = 5,
    NullPointer = 6,
    InvalidArgument = 7,
}

/// Solver selector for `eqm_solve`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqmAlgorithm {
    Auto = 0,
    Objective = 1,
    Bivalued = 2,
    Trivalued = 3,
    TwoAgent = 4,
    TwoAgentTripo = 5,
    Identical = 6,
    Eq1Po = 7,
}

/// Property selector for `eqm_check`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqmProperty {
    Eq = 0,
    Eq1 = 1,
    EqxStrict = 2,
    EqxNonzeroMarginals = 3,
    Ef = 4,
    Ef1 = 5,
    Efx = 6,
}

/// Welfare objective for `eqm_dp_optimize`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqmObjective {
    Utilitarian = 0,
    Egalitarian = 1,
}

/// Item classification for `eqm_item_kind`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqmItemKind {
    ObjectiveGood = 0,
    ObjectiveChore = 1,
    Subjective = 2,
}

/// Property bits for `eqm_decide_exists`.
pub const EQM_PROP_EQ: u32 = 1 << 0;
pub const EQM_PROP_EQ1: u32 = 1 << 1;
pub const EQM_PROP_EQX: u32 = 1 << 2;
pub const EQM_PROP_EQX_NONZERO: u32 = 1 << 3;
pub const EQM_PROP_EF: u32 = 1 << 4;
pub const EQM_PROP_EF1: u32 = 1 << 5;
pub const EQM_PROP_EFX: u32 = 1 << 6;
pub const EQM_PROP_PO: u32 = 1 << 7;

/// Valuation-class flags and constants. The `has_*` fields tell whether the
/// corresponding value field is meaningful.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EqmValuationClass {
    pub is_objective: bool,
    pub is_identical: bool,
    pub is_symmetric_bivalued: bool,
    pub is_symmetric_trivalued: bool,
    pub is_normalized: bool,
    pub is_type_normalized: bool,
    pub has_symmetric_weight: bool,
    pub symmetric_weight: i64,
    pub has_good_sum: bool,
    pub good_sum: i64,
    pub has_chore_sum: bool,
    pub chore_sum: i64,
    pub has_total: bool,
    pub total: i64,
}

/// Opaque instance handle.
pub struct EqmInstance {
    inner: Instance,
}

/// Opaque allocation handle.
pub struct EqmAllocation {
    inner: Allocation,
}

fn guard<F: FnOnce() -> EqmStatus>(f: F) -> EqmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => EqmStatus::Failure,
    }
}

fn solve_status(e: &SolveError) -> EqmStatus {
    match e {
        SolveError::NotApplicable(_) => EqmStatus::NotApplicable,
        SolveError::Defect(_) => EqmStatus::Failure,
    }
}

fn oracle_status(e: &OracleError) -> EqmStatus {
    let _ = e;
    EqmStatus::CeilingExceeded
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, EqmStatus> {
    if ptr.is_null() {
        return Err(EqmStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| EqmStatus::InvalidArgument)
}

fn export_string(s: String, out: *mut *mut c_char) -> EqmStatus {
    match CString::new(s) {
        Ok(cs) => {
            unsafe { *out = cs.into_raw() };
            EqmStatus::Ok
        }
        Err(_) => EqmStatus::Failure,
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn eqm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must have been returned by an eqmanna function and not freed yet.
#[no_mangle]
pub unsafe extern "C" fn eqm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Build an instance from a row-major `agents x items` value matrix.
///
/// # Safety
/// `values` must point to `agents * items` readable i64 values; `out` must be
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn eqm_instance_new(
    agents: usize,
    items: usize,
    values: *const i64,
    out: *mut *mut EqmInstance,
) -> EqmStatus {
    if out.is_null() {
        return EqmStatus::NullPointer;
    }
    let cells = match agents.checked_mul(items) {
        Some(c) => c,
        None => return EqmStatus::InvalidArgument,
    };
    if values.is_null() && cells > 0 {
        return EqmStatus::NullPointer;
    }
    if agents == 0 {
        return EqmStatus::InvalidArgument;
    }
    let slice = if cells == 0 { &[] } else { std::slice::from_raw_parts(values, cells) };
    guard(|| {
        let rows: Vec<Vec<i64>> =
            (0..agents).map(|i| slice[i * items..(i + 1) * items].to_vec()).collect();
        match Instance::new(rows) {
            Ok(inst) => {
                *out = Box::into_raw(Box::new(EqmInstance { inner: inst }));
                EqmStatus::Ok
            }
            Err(_) => EqmStatus::InvalidArgument,
        }
    })
}

/// Parse an instance document (see the file-format docs).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn eqm_instance_parse(
    json: *const c_char,
    out: *mut *mut EqmInstance,
) -> EqmStatus {
    if out.is_null() {
        return EqmStatus::NullPointer;
    }
    let text = match read_str(json) {
        Ok(t) => t,
        Err(s) => return s,
    };
    guard(|| match instance_from_str(text) {
        Ok(inst) => {
            *out = Box::into_raw(Box::new(EqmInstance { inner: inst }));
            EqmStatus::Ok
        }
        Err(_) => EqmStatus::ParseError,
    })
}

/// Serialize an instance to its canonical document.
///
/// # Safety
/// `inst` must be a live instance handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn eqm_instance_to_json(
    inst: *const EqmInstance,
    out: *mut *mut c_char,
) -> EqmStatus {
    if inst.is_null() || out.is_null() {
        return EqmStatus::NullPointer;
    }
    guard(|| export_string(instance_to_string(&(*inst).inner, None), out))
}

/// # Safety
/// `inst` must be a handle from this library, not freed twice.
#[no_mangle]
pub unsafe extern "C" fn eqm_instance_free(inst: *mut EqmInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Number of agents; 0 when the handle is null.
///
/// # Safety
/// `inst` must be a live instance handle or null.
#[no_mangle]
pub unsafe extern "C" fn eqm_instance_agents(inst: *const EqmInstance) -> usize {
    if inst.is_null() {
        0
    } else {
        (*inst).inner.num_agents()
    }
}

/// Number of items; 0 when the handle is null.
///
/// # Safety
/// `inst` must be a live instance handle or null.
#[no_mangle]
pub unsafe extern "C" fn eqm_instance_items(inst: *const EqmInstance) -> usize {
    if inst.is_null() {
        0
    } else {
        (*inst).inner.num_items()
    }
}

/// Value of one matrix cell.
///
/// # Safety
/// `inst` must be a live instance handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn eqm_instance_value(
    inst: *const EqmInstance,
    agent: usize,
    item: usize,
    out: *mut i64,
) -> EqmStatus {
    if inst.is_null() || out.is_null() {
        return EqmStatus::NullPointer;
    }
    let inner = &(*inst).inner;
    if agent >= inner.num_agents() || item >= inner.num_items() {
        return EqmStatus::InvalidArgument;
    }
    *out = inner.value(agent, item);
    EqmStatus::Ok
}

/// Objective-good / objective-chore / subjective classification of one item.
///
/// # Safety
/// `inst` must be a live instance handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn eqm_item_kind(
    inst: *const EqmInstance,
    item: usize,
    out: *mut EqmItemKind,
) -> EqmStatus {
    if inst.is_null() || out.is_null() {
        return EqmStatus::NullPointer;
    }
    let inner = &(*inst).inner;
    if item >= inner.num_items() {
        return EqmStatus::InvalidArgument;
    }
    guard(|| {
        *out = match inner.classify_items().kind_of(item) {
            ItemKind::ObjectiveGood => EqmItemKind::ObjectiveGood,
            ItemKind::ObjectiveChore => EqmItemKind::ObjectiveChore,
            ItemKind::Subjective => EqmItemKind::Subjective,
        };
        EqmStatus::Ok
    })
}

/// Valuation-class flags of the instance.
///
/// # Safety
/// `inst` must be a live instance handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn eqm_classify_valuations(
    inst: *const EqmInstance,
    out: *mut EqmValuationClass,
) -> EqmStatus {
    if inst.is_null() || out.is_null() {
        return EqmStatus::NullPointer;
    }
    guard(|| {
        let class = (*inst).inner.classify_valuations();
        *out = EqmValuationClass {
            is_objective: class.is_objective,
            is_identical: class.is_identical,
            is_symmetric_bivalued: class.is_symmetric_bivalued,
            is_symmetric_trivalued: class.is_symmetric_trivalued,
            is_normalized: class.is_normalized,
            is_type_normalized: class.is_type_normalized,
            has_symmetric_weight: class.symmetric_weight.is_some(),
            symmetric_weight: class.symmetric_weight.unwrap_or(0),
            has_good_sum: class.good_sum.is_some(),
            good_sum: class.good_sum.unwrap_or(0),
            has_chore_sum: class.chore_sum.is_some(),
            chore_sum: class.chore_sum.unwrap_or(0),
            has_total: class.total.is_some(),
            total: class.total.unwrap_or(0),
        };
        EqmStatus::Ok
    })
}

/// Run a solver. `NonExistent` means the EQ1+PO decision verified that no
/// such allocation exists; `NotApplicable` means the instance is outside the
/// requested solver's class.
///
/// # Safety
/// `inst` must be a live instance handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn eqm_solve(
    inst: *const EqmInstance,
    algorithm: EqmAlgorithm,
    out: *mut *mut EqmAllocation,
) -> EqmStatus {
    if inst.is_null() || out.is_null() {
        return EqmStatus::NullPointer;
    }
    let instance = &(*inst).inner;
    guard(|| {
        use eqmanna::solver::{eq1po, objective, transfer, two_agent};
        let outcome: Result<Outcome, SolveError> = match algorithm {
            EqmAlgorithm::Auto => eqmanna::cli::auto_solve(instance, TieBreak::Lexicographic)
                .map(|(_, outcome, _)| outcome),
            EqmAlgorithm::Objective => {
                objective::solve_objective_eq1(instance).map(|(a, _)| Outcome::Found(a))
            }
            EqmAlgorithm::Bivalued => {
                transfer::solve_bivalued_eqx(instance).map(|(a, _)| Outcome::Found(a))
            }
            EqmAlgorithm::Trivalued => {
                transfer::solve_trivalued_eq1(instance).map(|(a, _)| Outcome::Found(a))
            }
            EqmAlgorithm::TwoAgent => {
                two_agent::solve_two_agent_type_normalized(instance).map(Outcome::Found)
            }
            EqmAlgorithm::TwoAgentTripo => {
                two_agent::solve_two_agent_trivalued_eq1po(instance).map(Outcome::Found)
            }
            EqmAlgorithm::Identical => {
                two_agent::solve_identical_eq1po(instance).map(Outcome::Found)
            }
            EqmAlgorithm::Eq1Po => eq1po::solve_trivalued_eq1po(instance),
        };
        match outcome {
            Ok(Outcome::Found(alloc)) => {
                *out = Box::into_raw(Box::new(EqmAllocation { inner: alloc }));
                EqmStatus::Ok
            }
            Ok(Outcome::NonExistent) => EqmStatus::NonExistent,
            Err(e) => solve_status(&e),
        }
    })
}

/// # Safety
/// `alloc` must be a handle from this library, not freed twice.
#[no_mangle]
pub unsafe extern "C" fn eqm_allocation_free(alloc: *mut EqmAllocation) {
    if !alloc.is_null() {
        drop(Box::from_raw(alloc));
    }
}

/// Cached utility of one agent.
///
/// # Safety
/// `alloc` must be a live allocation handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn eqm_allocation_utility(
    alloc: *const EqmAllocation,
    agent: usize,
    out: *mut i64,
) -> EqmStatus {
    if alloc.is_null() || out.is_null() {
        return EqmStatus::NullPointer;
    }
    let inner = &(*alloc).inner;
    if agent >= inner.num_agents() {
        return EqmStatus::InvalidArgument;
    }
    *out = inner.utility(agent);
    EqmStatus::Ok
}

/// Owner of one item, or -1 when unallocated.
///
/// # Safety
/// `alloc` must be a live allocation handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn eqm_allocation_owner(
    alloc: *const EqmAllocation,
    item: usize,
    out: *mut i64,
) -> EqmStatus {
    if alloc.is_null() || out.is_null() {
        return EqmStatus::NullPointer;
    }
    let inner = &(*alloc).inner;
    if item >= inner.num_items() {
        return EqmStatus::InvalidArgument;
    }
    *out = inner.owner_of(item).map(|a| a as i64).unwrap_or(-1);
    EqmStatus::Ok
}

/// Serialize an allocation to its canonical document.
///
/// # Safety
/// `alloc` must be a live allocation handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn eqm_allocation_to_json(
    alloc: *const EqmAllocation,
    out: *mut *mut c_char,
) -> EqmStatus {
    if alloc.is_null() || out.is_null() {
        return EqmStatus::NullPointer;
    }
    guard(|| export_string(allocation_to_string(&(*alloc).inner, None), out))
}

/// Parse an allocation document against an instance (bundle indices are
/// validated and utilities recomputed).
///
/// # Safety
/// `json` must be NUL-terminated; `inst` a live instance handle; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn eqm_allocation_parse(
    json: *const c_char,
    inst: *const EqmInstance,
    out: *mut *mut EqmAllocation,
) -> EqmStatus {
    if inst.is_null() || out.is_null() {
        return EqmStatus::NullPointer;
    }
    let text = match read_str(json) {
        Ok(t) => t,
        Err(s) => return s,
    };
    guard(|| match allocation_from_str(text, &(*inst).inner) {
        Ok(alloc) => {
            *out = Box::into_raw(Box::new(EqmAllocation { inner: alloc }));
            EqmStatus::Ok
        }
        Err(_) => EqmStatus::ParseError,
    })
}

/// Evaluate one fairness property of an allocation.
///
/// # Safety
/// `inst` and `alloc` must be live handles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn eqm_check(
    inst: *const EqmInstance,
    alloc: *const EqmAllocation,
    property: EqmProperty,
    out: *mut bool,
) -> EqmStatus {
    if inst.is_null() || alloc.is_null() || out.is_null() {
        return EqmStatus::NullPointer;
    }
    let instance = &(*inst).inner;
    let allocation = &(*alloc).inner;
    if allocation.num_agents() != instance.num_agents()
        || allocation.num_items() != instance.num_items()
    {
        return EqmStatus::InvalidArgument;
    }
    guard(|| {
        let verdict = match property {
            EqmProperty::Eq => check_eq(instance, allocation),
            EqmProperty::Eq1 => check_eq1(instance, allocation),
            EqmProperty::EqxStrict => check_eqx(instance, allocation, ZeroPolicy::Strict),
            EqmProperty::EqxNonzeroMarginals => {
                check_eqx(instance, allocation, ZeroPolicy::NonzeroMarginals)
            }
            EqmProperty::Ef => check_ef(instance, allocation),
            EqmProperty::Ef1 => check_ef1(instance, allocation),
            EqmProperty::Efx => check_efx(instance, allocation),
        };
        *out = verdict.holds;
        EqmStatus::Ok
    })
}

/// Decide by exhaustive search whether an allocation with all properties in
/// `property_mask` (EQM_PROP_* bits) exists. `ceiling` of 0 uses the default
/// enumeration ceiling. On `Ok`, `*out_found` says whether a witness exists;
/// when it does and `out_alloc` is non-null, the witness is returned there.
///
/// # Safety
/// `inst` must be a live instance handle; `out_found` valid; `out_alloc`
/// valid or null.
#[no_mangle]
pub unsafe extern "C" fn eqm_decide_exists(
    inst: *const EqmInstance,
    property_mask: u32,
    ceiling: u64,
    out_found: *mut bool,
    out_alloc: *mut *mut EqmAllocation,
) -> EqmStatus {
    if inst.is_null() || out_found.is_null() {
        return EqmStatus::NullPointer;
    }
    let known = EQM_PROP_EQ
        | EQM_PROP_EQ1
        | EQM_PROP_EQX
        | EQM_PROP_EQX_NONZERO
        | EQM_PROP_EF
        | EQM_PROP_EF1
        | EQM_PROP_EFX
        | EQM_PROP_PO;
    if property_mask & !known != 0 {
        return EqmStatus::InvalidArgument;
    }
    let pred = Predicate {
        eq: property_mask & EQM_PROP_EQ != 0,
        eq1: property_mask & EQM_PROP_EQ1 != 0,
        eqx_strict: property_mask & EQM_PROP_EQX != 0,
        eqx_nonzero: property_mask & EQM_PROP_EQX_NONZERO != 0,
        ef: property_mask & EQM_PROP_EF != 0,
        ef1: property_mask & EQM_PROP_EF1 != 0,
        efx: property_mask & EQM_PROP_EFX != 0,
        po: property_mask & EQM_PROP_PO != 0,
    };
    let ceiling = if ceiling == 0 { oracle::DEFAULT_CEILING } else { ceiling };
    let instance = &(*inst).inner;
    guard(|| match exists_with(instance, &pred, ceiling) {
        Ok(Some(alloc)) => {
            *out_found = true;
            if !out_alloc.is_null() {
                *out_alloc = Box::into_raw(Box::new(EqmAllocation { inner: alloc }));
            }
            EqmStatus::Ok
        }
        Ok(None) => {
            *out_found = false;
            EqmStatus::Ok
        }
        Err(e) => oracle_status(&e),
    })
}

/// Welfare-maximal allocation within the strict-EQX set via the dynamic
/// program. `NonExistent` means the instance has no strict-EQX allocation.
///
/// # Safety
/// `inst` must be a live instance handle; `out_value` valid; `out_alloc`
/// valid or null.
#[no_mangle]
pub unsafe extern "C" fn eqm_dp_optimize(
    inst: *const EqmInstance,
    objective: EqmObjective,
    out_value: *mut i64,
    out_alloc: *mut *mut EqmAllocation,
) -> EqmStatus {
    if inst.is_null() || out_value.is_null() {
        return EqmStatus::NullPointer;
    }
    let instance = &(*inst).inner;
    let dp_objective = match objective {
        EqmObjective::Utilitarian => DpObjective::Utilitarian,
        EqmObjective::Egalitarian => DpObjective::Egalitarian,
    };
    guard(|| match dp_welfare_eqx(instance, dp_objective, &DpConfig::default()) {
        Ok(run) => match run.outcome {
            DpOutcome::Found { allocation, value } => {
                *out_value = value;
                if !out_alloc.is_null() {
                    *out_alloc = Box::into_raw(Box::new(EqmAllocation { inner: allocation }));
                }
                EqmStatus::Ok
            }
            DpOutcome::NoEqxAllocation => EqmStatus::NonExistent,
        },
        Err(
            DpError::EstimateExceeded { .. }
            | DpError::StateCeiling { .. }
            | DpError::TooManyAgents { .. }
            | DpError::ValuesTooLarge,
        ) => EqmStatus::CeilingExceeded,
        Err(DpError::Internal(_)) => EqmStatus::Failure,
    })
}
