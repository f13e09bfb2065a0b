#ifndef EQMANNA_H
#define EQMANNA_H

/* Generated by cbindgen from eqmanna-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Property bits for `eqm_decide_exists`.
#define EQM_PROP_EQ (1 << 0)

#define EQM_PROP_EQ1 (1 << 1)

#define EQM_PROP_EQX (1 << 2)

#define EQM_PROP_EQX_NONZERO (1 << 3)

#define EQM_PROP_EF (1 << 4)

#define EQM_PROP_EF1 (1 << 5)

#define EQM_PROP_EFX (1 << 6)

#define EQM_PROP_PO (1 << 7)

// Status codes returned by every fallible function.
typedef enum EqmStatus {
  EQM_STATUS_OK = 0,
  EQM_STATUS_FAILURE = 1,
  EQM_STATUS_NON_EXISTENT = 2,
  EQM_STATUS_NOT_APPLICABLE = 3,
  EQM_STATUS_CEILING_EXCEEDED = 4,
  EQM_STATUS_PARSE_ERROR = 5,
  EQM_STATUS_NULL_POINTER = 6,
  EQM_STATUS_INVALID_ARGUMENT = 7,
} EqmStatus;

// Item classification for `eqm_item_kind`.
typedef enum EqmItemKind {
  EQM_ITEM_KIND_OBJECTIVE_GOOD = 0,
  EQM_ITEM_KIND_OBJECTIVE_CHORE = 1,
  EQM_ITEM_KIND_SUBJECTIVE = 2,
} EqmItemKind;

// Solver selector for `eqm_solve`.
typedef enum EqmAlgorithm {
  EQM_ALGORITHM_AUTO = 0,
  EQM_ALGORITHM_OBJECTIVE = 1,
  EQM_ALGORITHM_BIVALUED = 2,
  EQM_ALGORITHM_TRIVALUED = 3,
  EQM_ALGORITHM_TWO_AGENT = 4,
  EQM_ALGORITHM_TWO_AGENT_TRIPO = 5,
  EQM_ALGORITHM_IDENTICAL = 6,
  EQM_ALGORITHM_EQ1_PO = 7,
} EqmAlgorithm;

// Property selector for `eqm_check`.
typedef enum EqmProperty {
  EQM_PROPERTY_EQ = 0,
  EQM_PROPERTY_EQ1 = 1,
  EQM_PROPERTY_EQX_STRICT = 2,
  EQM_PROPERTY_EQX_NONZERO_MARGINALS = 3,
  EQM_PROPERTY_EF = 4,
  EQM_PROPERTY_EF1 = 5,
  EQM_PROPERTY_EFX = 6,
} EqmProperty;

// Welfare objective for `eqm_dp_optimize`.
typedef enum EqmObjective {
  EQM_OBJECTIVE_UTILITARIAN = 0,
  EQM_OBJECTIVE_EGALITARIAN = 1,
} EqmObjective;

// Opaque allocation handle.
typedef struct EqmAllocation EqmAllocation;

// Opaque instance handle.
typedef struct EqmInstance EqmInstance;

// Valuation-class flags and constants. The `has_*` fields tell whether the
// corresponding value field is meaningful.
typedef struct EqmValuationClass {
  bool is_objective;
  bool is_identical;
  bool is_symmetric_bivalued;
  bool is_symmetric_trivalued;
  bool is_normalized;
  bool is_type_normalized;
  bool has_symmetric_weight;
  int64_t symmetric_weight;
  bool has_good_sum;
  int64_t good_sum;
  bool has_chore_sum;
  int64_t chore_sum;
  bool has_total;
  int64_t total;
} EqmValuationClass;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static string; do not free.
const char *eqm_version(void);

// Release a string returned by this library.
//
// # Safety
// `s` must have been returned by an eqmanna function and not freed yet.
void eqm_string_free(char *s);

// Build an instance from a row-major `agents x items` value matrix.
//
// # Safety
// `values` must point to `agents * items` readable i64 values; `out` must be
// a valid pointer.
enum EqmStatus eqm_instance_new(size_t agents,
                                size_t items,
                                const int64_t *values,
                                struct EqmInstance **out);

// Parse an instance document (see the file-format docs).
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be valid.
enum EqmStatus eqm_instance_parse(const char *json, struct EqmInstance **out);

// Serialize an instance to its canonical document.
//
// # Safety
// `inst` must be a live instance handle; `out` must be valid.
enum EqmStatus eqm_instance_to_json(const struct EqmInstance *inst, char **out);

// # Safety
// `inst` must be a handle from this library, not freed twice.
void eqm_instance_free(struct EqmInstance *inst);

// Number of agents; 0 when the handle is null.
//
// # Safety
// `inst` must be a live instance handle or null.
size_t eqm_instance_agents(const struct EqmInstance *inst);

// Number of items; 0 when the handle is null.
//
// # Safety
// `inst` must be a live instance handle or null.
size_t eqm_instance_items(const struct EqmInstance *inst);

// Value of one matrix cell.
//
// # Safety
// `inst` must be a live instance handle; `out` must be valid.
enum EqmStatus eqm_instance_value(const struct EqmInstance *inst,
                                  size_t agent,
                                  size_t item,
                                  int64_t *out);

// Objective-good / objective-chore / subjective classification of one item.
//
// # Safety
// `inst` must be a live instance handle; `out` must be valid.
enum EqmStatus eqm_item_kind(const struct EqmInstance *inst, size_t item, enum EqmItemKind *out);

// Valuation-class flags of the instance.
//
// # Safety
// `inst` must be a live instance handle; `out` must be valid.
enum EqmStatus eqm_classify_valuations(const struct EqmInstance *inst,
                                       struct EqmValuationClass *out);

// Run a solver. `NonExistent` means the EQ1+PO decision verified that no
// such allocation exists; `NotApplicable` means the instance is outside the
// requested solver's class.
//
// # Safety
// `inst` must be a live instance handle; `out` must be valid.
enum EqmStatus eqm_solve(const struct EqmInstance *inst,
                         enum EqmAlgorithm algorithm,
                         struct EqmAllocation **out);

// # Safety
// `alloc` must be a handle from this library, not freed twice.
void eqm_allocation_free(struct EqmAllocation *alloc);

// Cached utility of one agent.
//
// # Safety
// `alloc` must be a live allocation handle; `out` must be valid.
enum EqmStatus eqm_allocation_utility(const struct EqmAllocation *alloc,
                                      size_t agent,
                                      int64_t *out);

// Owner of one item, or -1 when unallocated.
//
// # Safety
// `alloc` must be a live allocation handle; `out` must be valid.
enum EqmStatus eqm_allocation_owner(const struct EqmAllocation *alloc, size_t item, int64_t *out);

// Serialize an allocation to its canonical document.
//
// # Safety
// `alloc` must be a live allocation handle; `out` must be valid.
enum EqmStatus eqm_allocation_to_json(const struct EqmAllocation *alloc, char **out);

// Parse an allocation document against an instance (bundle indices are
// validated and utilities recomputed).
//
// # Safety
// `json` must be NUL-terminated; `inst` a live instance handle; `out` valid.
enum EqmStatus eqm_allocation_parse(const char *json,
                                    const struct EqmInstance *inst,
                                    struct EqmAllocation **out);

// Evaluate one fairness property of an allocation.
//
// # Safety
// `inst` and `alloc` must be live handles; `out` must be valid.
enum EqmStatus eqm_check(const struct EqmInstance *inst,
                         const struct EqmAllocation *alloc,
                         enum EqmProperty property,
                         bool *out);

// Decide by exhaustive search whether an allocation with all properties in
// `property_mask` (EQM_PROP_* bits) exists. `ceiling` of 0 uses the default
// enumeration ceiling. On `Ok`, `*out_found` says whether a witness exists;
// when it does and `out_alloc` is non-null, the witness is returned there.
//
// # Safety
// `inst` must be a live instance handle; `out_found` valid; `out_alloc`
// valid or null.
enum EqmStatus eqm_decide_exists(const struct EqmInstance *inst,
                                 uint32_t property_mask,
                                 uint64_t ceiling,
                                 bool *out_found,
                                 struct EqmAllocation **out_alloc);

// Welfare-maximal allocation within the strict-EQX set via the dynamic
// program. `NonExistent` means the instance has no strict-EQX allocation.
//
// # Safety
// `inst` must be a live instance handle; `out_value` valid; `out_alloc`
// valid or null.
enum EqmStatus eqm_dp_optimize(const struct EqmInstance *inst,
                               enum EqmObjective objective,
                               int64_t *out_value,
                               struct EqmAllocation **out_alloc);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EQMANNA_H */
