#include <stdio.h>
#include <stdlib.h>
#include "roughfilm.h"

int main(void) {
    double a, b;
    if (rf_coefficients(2.0, &a, &b) != RF_STATUS_OK) return 1;
    if (a < 1.0869 || a > 1.0871) return 2;

    RfScenario *s = NULL;
    if (rf_scenario_from_preset("fig2", &s) != RF_STATUS_OK) return 3;
    rf_scenario_set_grid(s, 8, 8);
    RfSolution *p = NULL;
    if (rf_solve(s, &p) != RF_STATUS_OK) return 4;
    double *buf = malloc(81 * sizeof *buf);
    if (rf_solution_pressure(p, buf, 81) != RF_STATUS_OK) return 5;
    if (buf[36] >= 0.0 || buf[0] != 0.0 || buf[44] != 0.0) return 6;
    if (rf_coefficients(-1.0, &a, &b) != RF_STATUS_INVALID_INPUT || rf_last_error() == NULL) return 7;
    printf("p_inlet=%.6f\n", buf[36]);
    free(buf);
    rf_solution_free(p);
    rf_scenario_free(s);
    return 0;
}
