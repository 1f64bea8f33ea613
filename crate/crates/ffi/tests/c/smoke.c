#include <stdio.h>
#include <string.h>
#include "sigmaint.h"

static const char *PROBLEM =
    "variables = [\"x\", \"y\", \"z\"]\n"
    "h = [\"x^2+y^2+z^2-1\"]\n"
    "g = \"z\"\n"
    "mode = \"intersect-mod2\"\n"
    "matrix = [[\"x\", \"0\"], [\"y\", \"0\"], [\"0\", \"1\"]]\n";

int main(void) {
    SigmaintProblem *p = NULL;
    SigmaintReport *r = NULL;
    int64_t value = -1;
    if (sigmaint_problem_parse(PROBLEM, &p) != SIGMAINT_STATUS_OK) return 10;
    if (sigmaint_run(p, &r) != SIGMAINT_STATUS_OK) return 11;
    if (sigmaint_report_value(r, &value) != SIGMAINT_STATUS_OK) return 12;
    if (strstr(sigmaint_report_json(r), "\"status\": \"ok\"") == NULL) return 13;
    printf("%lld\n", (long long)value);
    sigmaint_report_free(r);
    sigmaint_problem_free(p);
    if (sigmaint_problem_parse("variables = [", &p) != SIGMAINT_STATUS_PARSE) return 14;
    if (p != NULL || sigmaint_last_error() == NULL) return 15;
    return 0;
}
