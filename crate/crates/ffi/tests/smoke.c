#include <math.h>
#include <stdio.h>
#include <string.h>

#include "hodgelab.h"

/* Catalan numbers through the majorant handle, an operator round trip and the
   error path. Exit code 0 means every step matched. */
int main(void) {
    HlMajorant *m = NULL;
    if (hl_majorant_new("1", "1", 10, &m) != HL_STATUS_OK) return 1;
    double x = 0.0;
    if (hl_majorant_coeff(m, 10, &x) != HL_STATUS_OK || x != 4862.0) return 2;
    double r = 0.0;
    hl_majorant_radius(m, &r);
    if (r != 0.25) return 3;
    hl_majorant_free(m);

    const char *json = "{\"n\":1,\"bidegree\":[0,0],\"valueKind\":\"scalar\","
                       "\"entries\":[{\"I\":[],\"J\":[],\"mode\":[[1],[0]],\"re\":1,\"im\":0}]}";
    HlForm *f = NULL, *g = NULL;
    if (hl_form_from_json(json, &f) != HL_STATUS_OK) return 4;
    if (hl_form_apply(f, HL_OPERATOR_DBAR, &g) != HL_STATUS_OK) return 5;
    HlNorms nm;
    hl_form_norms(g, 2, &nm);
    /* |∂̄e_m| = |λ| |dz̄| = π·√2 */
    if (fabs(nm.l2 - 3.14159265358979 * sqrt(2.0)) > 1e-9) return 6;
    hl_form_free(g);
    hl_form_free(f);

    if (hl_form_from_json("{", &f) != HL_STATUS_INVALID_ARGUMENT) return 7;
    if (hl_last_error() == NULL || strlen(hl_last_error()) == 0) return 8;
    if (hl_form_apply(NULL, HL_OPERATOR_DEL, &g) != HL_STATUS_NULL_POINTER) return 9;
    printf("ok %s\n", hl_version());
    return 0;
}
