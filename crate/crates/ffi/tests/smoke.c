#include <math.h>
#include <stdio.h>
#include "gevrey.h"

#define CHECK(call)                                                          \
    do {                                                                     \
        GvStatus st_ = (call);                                               \
        if (st_ != GV_STATUS_OK) {                                           \
            char msg[512];                                                   \
            gv_last_error_message(msg, sizeof msg);                          \
            fprintf(stderr, "%s -> %d: %s\n", #call, (int)st_, msg);         \
            return 1;                                                        \
        }                                                                    \
    } while (0)

int main(void) {
    GvGrid *grid = NULL;
    GvField *u = NULL, *v = NULL;
    GvState *state = NULL;
    GvTrajectory *traj = NULL;
    double norm, e0, sigma;
    int saturated;

    CHECK(gv_grid_new(1, 40.0, 512, &grid));
    CHECK(gv_field_sech(grid, 1.0, 0.5, &u));
    CHECK(gv_field_sech(grid, 0.0, 0.5, &v));
    CHECK(gv_gevrey_norm(u, 0.2, 0.0, &norm));
    CHECK(gv_state_new(u, v, 0.0, &state));
    CHECK(gv_energy(state, 3, &e0));
    CHECK(gv_evolve(state, 1.0, 3, 1e-3, 250, &traj));
    CHECK(gv_radius_by_energy(traj, 1.0, 1.0, 1e-3, &sigma, &saturated));

    if (gv_grid_new(1, 1.0, 2, &grid) != GV_STATUS_INVALID_ARGUMENT || gv_last_error_length() == 0) {
        fprintf(stderr, "expected invalid-argument status\n");
        return 1;
    }
    printf("norm %.6f energy %.6f radius %.4f\n", norm, e0, sigma);

    gv_trajectory_free(traj);
    gv_state_free(state);
    gv_field_free(v);
    gv_field_free(u);
    gv_grid_free(grid);
    return (isfinite(norm) && e0 > 0.0 && sigma > 0.0) ? 0 : 1;
}
