#include <stdio.h>
#include <string.h>

#include "covertower.h"

int main(void) {
    CtTower *t = NULL;
    if (ct_tower_new(4, &t) != CT_STATUS_OK) return 1;

    char *s = NULL;
    if (ct_circuit_length(t, 4, 1, &s) != CT_STATUS_OK || strcmp(s, "54") != 0) return 2;
    ct_string_free(s);

    if (ct_joint_meet(t, "4:1:3", "4:1:50", 2, &s) != CT_STATUS_NOT_FOUND) return 3;
    if (ct_last_error() == NULL) return 4;

    if (ct_pair_report(t, "3:1:2", "3:1:8", 1, &s) != CT_STATUS_OK) return 5;
    printf("%s\n", s);
    ct_string_free(s);

    ct_tower_free(t);
    return 0;
}
