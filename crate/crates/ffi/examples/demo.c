#include "eqmanna.h"
#include <stdio.h>
#include <assert.h>

int main(void) {
    int64_t values[] = {1, 1, 1, -1, -1, -1,
                        -1, -1, -1, 1, 1, 1,
                        -1, -1, -1, 1, 1, 1};
    EqmInstance *inst = NULL;
    assert(eqm_instance_new(3, 6, values, &inst) == EQM_STATUS_OK);

    EqmValuationClass cls;
    assert(eqm_classify_valuations(inst, &cls) == EQM_STATUS_OK);
    printf("type-normalized: %d (g=%lld, c=%lld)\n",
           cls.is_type_normalized, (long long)cls.good_sum, (long long)cls.chore_sum);

    EqmAllocation *alloc = NULL;
    EqmStatus st = eqm_solve(inst, EQM_ALGORITHM_EQ1_PO, &alloc);
    printf("eq1po solve status: %d (expect %d = non-existent)\n", st, EQM_STATUS_NON_EXISTENT);
    assert(st == EQM_STATUS_NON_EXISTENT);

    bool found = true;
    assert(eqm_decide_exists(inst, EQM_PROP_EQ1 | EQM_PROP_PO, 0, &found, NULL) == EQM_STATUS_OK);
    assert(!found);
    printf("oracle agrees: no EQ1+PO allocation\n");

    eqm_instance_free(inst);
    printf("version: %s\n", eqm_version());
    return 0;
}
