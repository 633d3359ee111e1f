#ifndef IEH_H
#define IEH_H

/* Generated by cbindgen from ieh-capi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum IehStatus {
  IEH_STATUS_OK = 0,
  IEH_STATUS_NULL_POINTER = 1,
  IEH_STATUS_INVALID_ARGUMENT = 2,
  IEH_STATUS_DOMAIN_ERROR = 3,
  IEH_STATUS_NUMERICAL_FAILURE = 4,
  IEH_STATUS_UTF8_ERROR = 5,
} IehStatus;

/**
 * Opaque normalized-time schedule handle.
 */
typedef struct IehSchedule IehSchedule;

/**
 * Opaque single-qubit protocol handle (θ, varphi, ϕ schedules plus τ).
 */
typedef struct IehSingleQubitParams IehSingleQubitParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Returns the error message of the last failed call on this thread, or
 * null if none. The pointer stays valid until the next failed call.
 */
const char *ieh_last_error_message(void);

/**
 * Parses a schedule from its JSON description, e.g.
 * `{"kind":"linear","end_value":3.14}`.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum IehStatus ieh_schedule_from_json(const char *json, struct IehSchedule **out);

/**
 * Frees a schedule handle; null is ignored.
 *
 * # Safety
 * `handle` must come from `ieh_schedule_from_json` and not be freed twice.
 */
void ieh_schedule_free(struct IehSchedule *handle);

/**
 * Evaluates a schedule at normalized time `s ∈ [0, 1]`.
 *
 * # Safety
 * `handle` must be a live schedule handle and `out` a valid pointer.
 */
enum IehStatus ieh_schedule_evaluate(const struct IehSchedule *handle, double s, double *out);

/**
 * Evaluates a schedule's normalized-time derivative at `s ∈ [0, 1]`.
 *
 * # Safety
 * `handle` must be a live schedule handle and `out` a valid pointer.
 */
enum IehStatus ieh_schedule_derivative(const struct IehSchedule *handle, double s, double *out);

/**
 * Solves for the cycloid ratio `r` with end value `target_end ∈ (0, π/2]`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum IehStatus ieh_solve_cycloid_ratio(double target_end, double *out);

/**
 * Builds a single-qubit protocol from three schedule handles and τ. The
 * schedule handles are copied and remain owned by the caller.
 *
 * # Safety
 * All handles must be live and `out` a valid pointer.
 */
enum IehStatus ieh_params_new(const struct IehSchedule *theta,
                              const struct IehSchedule *varphi,
                              const struct IehSchedule *phi,
                              double tau,
                              struct IehSingleQubitParams **out);

/**
 * Frees a protocol handle; null is ignored.
 *
 * # Safety
 * `handle` must come from `ieh_params_new` and not be freed twice.
 */
void ieh_params_free(struct IehSingleQubitParams *handle);

/**
 * Sensitivity `q_S` of a protocol for the input state
 * `(a_re + i a_im)|0⟩ + (b_re + i b_im)|1⟩` (must be normalized).
 *
 * # Safety
 * `params` must be a live protocol handle and `out` a valid pointer.
 */
enum IehStatus ieh_sensitivity_general(const struct IehSingleQubitParams *params,
                                       double a_re,
                                       double a_im,
                                       double b_re,
                                       double b_im,
                                       double *out);

/**
 * Closed-form constant-θ sensitivity (corrected variant).
 */
double ieh_sensitivity_case_one_closed(double theta0, double phi_end);

/**
 * Closed-form constant-θ sensitivity, commonly printed variant (for
 * discrepancy reporting; see the library documentation).
 */
double ieh_sensitivity_case_one_printed(double theta0, double phi_end);

/**
 * Second-order fidelity prediction `P(ε) = 1 − ε² q_S`.
 */
double ieh_predicted_fidelity(double q_s, double epsilon);

/**
 * Global-phase-insensitive gate fidelity `|tr(target† · actual)| / dim`
 * between two `dim × dim` matrices given as row-major real and imaginary
 * parts. `dim` must be 2 or 4.
 *
 * # Safety
 * Each array pointer must reference `dim * dim` readable doubles and `out`
 * must be a valid pointer.
 */
enum IehStatus ieh_gate_fidelity(size_t dim,
                                 const double *actual_re,
                                 const double *actual_im,
                                 const double *target_re,
                                 const double *target_im,
                                 double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IEH_H */
