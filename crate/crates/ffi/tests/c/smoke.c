#include <math.h>
#include <stdio.h>
#include "sqbias.h"

int main(void) {
    SqbDist *rad = NULL, *zb = NULL, *bad = NULL;
    double l1 = -1.0;
    if (sqb_dist_from_json("{\"type\":\"discrete\",\"atoms\":[-1,1],\"probs\":[0.5,0.5]}", &rad) != SQB_STATUS_OK) return 1;
    if (sqb_transform(rad, SQB_TRANSFORM_ZERO, &zb) != SQB_STATUS_OK) return 2;
    if (sqb_l1_distance(rad, zb, &l1) != SQB_STATUS_OK) return 3;
    if (fabs(l1 - 0.5) > 1e-15) return 4;
    if (sqb_dist_from_json("{\"type\":\"discrete\",\"atoms\":[1],\"probs\":[0.7]}", &bad) != SQB_STATUS_INVALID_DISTRIBUTION) return 5;
    printf("%s|%.17g\n", sqb_last_error(), l1);
    sqb_dist_free(zb);
    sqb_dist_free(rad);
    return 0;
}
