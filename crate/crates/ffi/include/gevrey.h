#ifndef GEVREY_H
#define GEVREY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum GvStatus {
  GV_STATUS_OK = 0,
  GV_STATUS_NULL_POINTER = 1,
  GV_STATUS_INVALID_ARGUMENT = 2,
  GV_STATUS_GRID_MISMATCH = 3,
  // `sigma * max|xi|` beyond the overflow guard.
  GV_STATUS_OVERFLOW = 4,
  // Final time past the wrap-around horizon of the torus.
  GV_STATUS_HORIZON = 5,
  // Non-finite values during time stepping.
  GV_STATUS_BLOW_UP = 6,
  // Caller buffer too small; the required length is in the error message.
  GV_STATUS_BUFFER_TOO_SMALL = 7,
  GV_STATUS_PANIC = 8,
} GvStatus;

// Which exponent placement of the two-dimensional commutator bound.
typedef enum GvVariant {
  GV_VARIANT_STATEMENT = 0,
  GV_VARIANT_PROOF = 1,
} GvVariant;

// Complex field sampled on a grid.
typedef struct GvField GvField;

// Periodic grid on a centered torus.
typedef struct GvGrid GvGrid;

// Cauchy data `(u, u_t)` at one time.
typedef struct GvState GvState;

// Recorded states of a time integration.
typedef struct GvTrajectory GvTrajectory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Length in bytes of the last error message on this thread, including the
// terminating NUL; 0 if there is none.
uintptr_t gv_last_error_length(void);

// Copy the last error message into `buf` as a NUL-terminated string.
//
// # Safety
// `buf` must be valid for `len` bytes.
enum GvStatus gv_last_error_message(char *buf, uintptr_t len);

// Cubic grid: `points` nodes per axis on `[-extent/2, extent/2)^dim`.
//
// # Safety
// `out` must be a valid pointer.
enum GvStatus gv_grid_new(uintptr_t dim, double extent, uintptr_t points, struct GvGrid **out);

// # Safety
// `grid` must come from [`gv_grid_new`] or be null.
void gv_grid_free(struct GvGrid *grid);

// Total number of nodes, the length of every field buffer on this grid.
//
// # Safety
// `grid` must be a valid handle.
enum GvStatus gv_grid_len(const struct GvGrid *grid, uintptr_t *out);

// Field from real samples in row-major order, last axis fastest.
//
// # Safety
// `values` must hold `len` doubles; `grid` and `out` must be valid.
enum GvStatus gv_field_from_real(const struct GvGrid *grid,
                                 const double *values,
                                 uintptr_t len,
                                 struct GvField **out);

// Field from separate real and imaginary parts.
//
// # Safety
// `re` and `im` must each hold `len` doubles; `grid` and `out` must be valid.
enum GvStatus gv_field_from_complex(const struct GvGrid *grid,
                                    const double *re,
                                    const double *im,
                                    uintptr_t len,
                                    struct GvField **out);

// Gaussian `amplitude * exp(-|x|^2 / (2 width^2))`.
//
// # Safety
// `grid` and `out` must be valid.
enum GvStatus gv_field_gaussian(const struct GvGrid *grid,
                                double amplitude,
                                double width,
                                struct GvField **out);

// Product of `sech(pi x_a / (2 radius))`, analytic in a strip of half-width `radius`.
//
// # Safety
// `grid` and `out` must be valid.
enum GvStatus gv_field_sech(const struct GvGrid *grid,
                            double amplitude,
                            double radius,
                            struct GvField **out);

// Periodized Poisson kernel; coefficients decay exactly like `e^{-radius |xi|}`.
//
// # Safety
// `grid` and `out` must be valid.
enum GvStatus gv_field_poisson(const struct GvGrid *grid, double radius, struct GvField **out);

// Copy the samples out. Either of `re`, `im` may be null to skip it.
//
// # Safety
// Non-null `re`, `im` must be valid for `len` doubles.
enum GvStatus gv_field_values(const struct GvField *field, double *re, double *im, uintptr_t len);

// # Safety
// `field` must come from a `gv_field_*` constructor or be null.
void gv_field_free(struct GvField *field);

// `||f||_{G^{sigma,s}}`.
//
// # Safety
// `field` and `out` must be valid.
enum GvStatus gv_gevrey_norm(const struct GvField *field, double sigma, double s, double *out);

// `||nabla f||_{G^{sigma,s}}`.
//
// # Safety
// `field` and `out` must be valid.
enum GvStatus gv_gradient_norm(const struct GvField *field, double sigma, double s, double *out);

// Commutator bound check: writes `||L f||_{L^2}` and the bound's right-hand side.
// `variant` only matters in two dimensions.
//
// # Safety
// `field`, `lhs` and `rhs` must be valid.
enum GvStatus gv_commutator_check(const struct GvField *field,
                                  double sigma,
                                  uint32_t p,
                                  double theta,
                                  enum GvVariant variant,
                                  double *lhs,
                                  double *rhs);

// Wave state from position `u` and velocity `v` at `time`. The fields are copied.
//
// # Safety
// `u`, `v` and `out` must be valid.
enum GvStatus gv_state_new(const struct GvField *u,
                           const struct GvField *v,
                           double time,
                           struct GvState **out);

// # Safety
// `state` must come from a `gv_state_*` constructor or be null.
void gv_state_free(struct GvState *state);

// # Safety
// `state` and `out` must be valid.
enum GvStatus gv_state_time(const struct GvState *state, double *out);

// New field handle holding a copy of the position `u`.
//
// # Safety
// `state` and `out` must be valid.
enum GvStatus gv_state_position(const struct GvState *state, struct GvField **out);

// Conserved energy of the defocusing equation with power `p`.
//
// # Safety
// `state` and `out` must be valid.
enum GvStatus gv_energy(const struct GvState *state, uint32_t p, double *out);

// Energy of the amplified pair `e^{sigma|D|}(u, u_t)`.
//
// # Safety
// `state` and `out` must be valid.
enum GvStatus gv_modified_energy(const struct GvState *state,
                                 double sigma,
                                 uint32_t p,
                                 double *out);

// Strang-split integration to `t_final`, recording every `record_every` steps.
//
// # Safety
// `state` and `out` must be valid.
enum GvStatus gv_evolve(const struct GvState *state,
                        double t_final,
                        uint32_t p,
                        double dt,
                        uintptr_t record_every,
                        struct GvTrajectory **out);

// # Safety
// `trajectory` must come from [`gv_evolve`] or be null.
void gv_trajectory_free(struct GvTrajectory *trajectory);

// # Safety
// `trajectory` and `out` must be valid.
enum GvStatus gv_trajectory_len(const struct GvTrajectory *trajectory, uintptr_t *out);

// New state handle holding a copy of record `index`.
//
// # Safety
// `trajectory` and `out` must be valid.
enum GvStatus gv_trajectory_state(const struct GvTrajectory *trajectory,
                                  uintptr_t index,
                                  struct GvState **out);

// Energy-based radius of analyticity at recorded time `t`: the largest
// `sigma <= sigma_max` whose modified energy stays within bound up to `t`.
// `saturated` is set to 1 when the search hit `sigma_max`.
//
// # Safety
// `trajectory`, `sigma_star` and `saturated` must be valid.
enum GvStatus gv_radius_by_energy(const struct GvTrajectory *trajectory,
                                  double t,
                                  double sigma_max,
                                  double tol,
                                  double *sigma_star,
                                  int32_t *saturated);

// Exponential decay rate of the Fourier coefficients fitted on `[xi_lo, xi_hi]`.
//
// # Safety
// `field` and `out` must be valid.
enum GvStatus gv_radius_by_slope(const struct GvField *field,
                                 double xi_lo,
                                 double xi_hi,
                                 double *out);

// Guaranteed lower bound on the radius at time `t`. Pass NaN for `eps`
// when `d = 1`.
//
// # Safety
// `out` must be valid.
enum GvStatus gv_theoretical_bound(double t,
                                   uint32_t p,
                                   uintptr_t d,
                                   double sigma0,
                                   double c,
                                   double eps,
                                   double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GEVREY_H */
