/* C interface to the one-atom-laser simulation library.
 *
 * All objects are opaque handles. Functions return 0 (OAL_OK) on success or
 * a negative error code; oal_last_error() describes the most recent failure
 * on the calling thread. Rates and detunings are angular frequencies in
 * rad/us; times in us.
 */
#ifndef OAL_H
#define OAL_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define OAL_OK 0
#define OAL_ERR_INVALID_ARGUMENT -1
#define OAL_ERR_DOMAIN -2
#define OAL_ERR_DIMENSION -3
#define OAL_ERR_LABEL -4
#define OAL_ERR_CONVERGENCE -5
#define OAL_ERR_DEGENERATE -6
#define OAL_ERR_STATISTICS -7
#define OAL_ERR_CONFIG -8
#define OAL_ERR_INTERNAL -9

/* Thread-local message for the last error returned on this thread. */
const char* oal_last_error(void);

const char* oal_version(void);

/* ---- four-state model parameters -------------------------------------- */

typedef struct oal_params oal_params;

/* Cs D2 defaults: gamma = 2pi*2.6, kappa = 2pi*4.2, g43 = 2pi*16 MHz. */
oal_params* oal_params_cs_defaults(void);
void oal_params_free(oal_params* p);

/* Keys: g43, kappa, gamma, gamma33, gamma43, gamma44, gamma34, Omega3,
 * Omega4, Delta_AC, Delta3, Delta4 (rad/us); I3, I4 (dimensionless pump
 * intensities); fock_truncation. */
int oal_params_set(oal_params* p, const char* key, double value);
int oal_params_get(const oal_params* p, const char* key, double* out);

/* Cavity length scaling l -> f*l: g -> g/sqrt(f), kappa -> kappa/f. */
int oal_params_scale_cavity(oal_params* p, double f);

/* n0 = gamma^2/(2 g^2), N0 = 2 kappa gamma / g^2, C1 = 1/N0. */
int oal_critical_numbers(const oal_params* p, double* n0, double* N0, double* C1);

/* ---- models and steady states ----------------------------------------- */

typedef struct oal_model oal_model;
typedef struct oal_steady oal_steady;

/* Four-level atom x Fock cavity mode. */
oal_model* oal_model_four_state(const oal_params* p);
/* Three-level variant: e4 and the recycling drive replaced by direct
 * incoherent g4 -> g3 decay at amplitude rate beta34. */
oal_model* oal_model_raman(const oal_params* p, double beta34);
void oal_model_free(oal_model* m);

int oal_model_dim(const oal_model* m);

/* The returned handle references m; free it before the model. */
oal_steady* oal_steady_solve(const oal_model* m);
void oal_steady_free(oal_steady* s);

/* Expectation of a named model observable ("n", "pop_g3", ...) in the
 * steady state. Non-Hermitian observables report the real part. */
int oal_steady_expectation(const oal_steady* s, const char* observable,
                           double* out);

/* Derived quantities; any output pointer may be NULL. Q and g2_0 are NaN
 * when n_bar vanishes. */
int oal_steady_photon_statistics(const oal_steady* s, const oal_params* p,
                                 double* n_bar, double* mandel_q, double* g2_0,
                                 double* ratio_R);

/* ---- semiclassical steady state --------------------------------------- */

/* |alpha|^2 and |alpha|^2 / n0f at pump intensity I3. */
int oal_semiclassical_intensity(const oal_params* p, double I3,
                                double* alpha2, double* alpha2_over_n0f);

/* ---- experiments ------------------------------------------------------- */

/* Run a named experiment from config text ("experiment = ..." plus
 * "key = value" lines) writing CSV and JSON metadata under outdir.
 * Returns OAL_OK, OAL_ERR_CONFIG, or a solver error code. */
int oal_run_experiment(const char* config_text, const char* outdir);

#ifdef __cplusplus
}
#endif

#endif /* OAL_H */
