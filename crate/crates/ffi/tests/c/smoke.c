#include <math.h>
#include <stdio.h>
#include <string.h>

#include "scalekit.h"

int main(void) {
    if (scalekit_catalog_len() < 20) return 10;

    const char *names[] = {"k", "alpha"};
    double values[] = {2.0, 1.0};
    ScalekitDistribution *d = NULL;
    if (scalekit_distribution_from_catalog("gamma", names, values, 2, &d) != SCALEKIT_STATUS_OK) return 11;

    double p = 0.0;
    if (scalekit_distribution_density_at(d, 1.5, &p) != SCALEKIT_STATUS_OK) return 12;
    /* gamma(2,1): y e^{-y} */
    if (fabs(p - 1.5 * exp(-1.5)) > 1e-12) return 13;
    scalekit_distribution_free(d);

    const char *bad[] = {"lambda"};
    double half[] = {0.5};
    ScalekitDistribution *e = NULL;
    ScalekitStatus s = scalekit_distribution_from_catalog("pareto_i", bad, half, 1, &e);
    if (s != SCALEKIT_STATUS_PARAMETER_OUT_OF_DOMAIN && s != SCALEKIT_STATUS_MALFORMED) return 14;
    char msg[256];
    if (scalekit_last_error_message(msg, sizeof msg) == 0 || strlen(msg) == 0) return 15;

    printf("ok\n");
    return 0;
}
