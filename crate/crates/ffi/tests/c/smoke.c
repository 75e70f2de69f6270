#include <math.h>
#include <stdio.h>
#include "ocsca.h"

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            fprintf(stderr, "line %d: %s\n", __LINE__, #cond);   \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(int argc, char **argv) {
    OcscaLearner *l = NULL;
    CHECK(ocsca_learner_new(2, 5.0, 1.0, 1.0, false, &l) == OCSCA_STATUS_OK);
    CHECK(ocsca_learner_dimension(l) == 2);

    double x[2] = {1.0, 0.0};
    OcscaStepOutcome o;
    CHECK(ocsca_learner_process_dense(l, x, 2, 1, &o) == OCSCA_STATUS_OK);
    CHECK(o.step_case == OCSCA_STEP_CASE_INTERIOR);
    CHECK(fabs(o.tau - 1.0) < 1e-12);

    double score = 0.0;
    CHECK(ocsca_learner_score_dense(l, x, 2, &score) == OCSCA_STATUS_OK);
    CHECK(fabs(score - 1.0) < 1e-12);

    double bad[3] = {1.0, 2.0, 3.0};
    CHECK(ocsca_learner_process_dense(l, bad, 3, 1, &o) == OCSCA_STATUS_DIMENSION_MISMATCH);
    CHECK(ocsca_last_error_message() != NULL);

    size_t need = 0;
    double w[2];
    CHECK(ocsca_learner_weights(l, NULL, 0, &need) == OCSCA_STATUS_OK && need == 2);
    CHECK(ocsca_learner_weights(l, w, 2, &need) == OCSCA_STATUS_OK);
    CHECK(w[0] == 1.0 && w[1] == 0.0);

    if (argc > 1) {
        OcscaLearner *copy = NULL;
        CHECK(ocsca_learner_save(l, argv[1]) == OCSCA_STATUS_OK);
        CHECK(ocsca_learner_load(argv[1], &copy) == OCSCA_STATUS_OK);
        CHECK(ocsca_learner_score_dense(copy, x, 2, &score) == OCSCA_STATUS_OK);
        CHECK(fabs(score - 1.0) < 1e-12);
        ocsca_learner_free(copy);
    }
    ocsca_learner_free(l);
    puts("ok");
    return 0;
}
