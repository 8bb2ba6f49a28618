#include <stdio.h>
#include <stdlib.h>

#include "pcosim.h"

static const char *SCENARIO =
    "[network]\n"
    "n = 5\n"
    "topology = \"all_to_all\"\n"
    "[algorithm]\n"
    "kind = \"prc\"\n"
    "alpha = 0.5\n"
    "[continuity]\n"
    "mode = \"constant_frequency\"\n"
    "omega_a = 0.3\n"
    "[run]\n"
    "horizon = 60\n";

int main(void) {
    PcoSim *sim = NULL;
    if (pco_sim_new(SCENARIO, &sim) != PCO_STATUS_OK) {
        fprintf(stderr, "%s\n", pco_last_error_message());
        return 1;
    }
    if (pco_sim_set_seed(sim, 11) != PCO_STATUS_OK || pco_sim_run(sim) != PCO_STATUS_OK) {
        fprintf(stderr, "%s\n", pco_last_error_message());
        return 1;
    }
    size_t n = 0, samples = 0;
    pco_sim_oscillator_count(sim, &n);
    pco_sim_sample_count(sim, &samples);
    double *phases = malloc(sizeof(double) * n * samples);
    if (pco_sim_samples(sim, NULL, 0, phases, n * samples) != PCO_STATUS_OK) {
        return 1;
    }
    double arc = 0.0;
    pco_containing_arc(phases + (samples - 1) * n, n, &arc);
    free(phases);

    PcoSyncReport report;
    pco_sim_report(sim, &report);
    printf("synced %d at %.3f, arc %.3e\n", (int)report.synced, report.sync_time, arc);
    pco_sim_free(sim);

    PcoSim *bad = NULL;
    PcoStatus s = pco_sim_new("[network]\nn = 0\n", &bad);
    printf("bad config %d: %s\n", (int)s, pco_last_error_message());
    return bad == NULL ? 0 : 1;
}
