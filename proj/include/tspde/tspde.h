/* C interface to the torus SPDE toolkit. */
#ifndef TSPDE_H
#define TSPDE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TSPDE_API __declspec(dllexport)
#else
#define TSPDE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as process exit codes. */
typedef enum tspde_status {
  TSPDE_OK = 0,
  TSPDE_ERR_CONFIG = 2,
  TSPDE_ERR_NUMERICAL = 3,
  TSPDE_ERR_IO = 4
} tspde_status;

typedef enum tspde_equation {
  TSPDE_HEAT = 0,
  TSPDE_DECOUPLED_AC = 1,
  TSPDE_ALLEN_CAHN = 2
} tspde_equation;

typedef struct tspde_field tspde_field;
typedef struct tspde_ensemble tspde_ensemble;

typedef struct tspde_sim_config {
  tspde_equation equation;
  int dim;
  int n;
  double dt;
  double t_final;
  double sigma;
  double alpha;
  double g;
  const char* ic; /* "zero", "sin2x" or "file:<path>"; NULL means zero */
  uint64_t seed;
  int dealias; /* 1 on, 0 off, -1 equation default */
} tspde_sim_config;

typedef struct tspde_renorm_result {
  double c_n;
  int n;
  double sigma;
  double residual;
  int iterations;
  double asymptotic;
  double leading;
} tspde_renorm_result;

TSPDE_API const char* tspde_version(void);
/* Message of the last failed call on this thread; "" if none. */
TSPDE_API const char* tspde_last_error(void);
TSPDE_API void tspde_string_free(char* s);

TSPDE_API tspde_status tspde_parse_equation(const char* name, tspde_equation* out);
TSPDE_API void tspde_sim_config_init(tspde_sim_config* cfg);

/* Integrate one realization. With out_dir set, field.tspd, radial.csv and
 * manifest.json are written there. *out may be NULL if the field is not
 * wanted. */
TSPDE_API tspde_status tspde_simulate(const tspde_sim_config* cfg, const char* out_dir,
                                      tspde_field** out);

TSPDE_API tspde_status tspde_field_load(const char* path, tspde_field** out);
TSPDE_API tspde_status tspde_field_save(const tspde_field* f, const char* path);
TSPDE_API void tspde_field_free(tspde_field* f);
TSPDE_API int tspde_field_dim(const tspde_field* f);
TSPDE_API int tspde_field_n(const tspde_field* f);
TSPDE_API const double* tspde_field_values(const tspde_field* f, size_t* count);
TSPDE_API tspde_status tspde_field_sobolev_norm(const tspde_field* f, double s, double* out);

TSPDE_API tspde_status tspde_ensemble_create(const char* preset, int full,
                                             tspde_ensemble** out);
TSPDE_API tspde_status tspde_ensemble_set_realizations(tspde_ensemble* e, int n);
TSPDE_API tspde_status tspde_ensemble_set_workers(tspde_ensemble* e, int n);
TSPDE_API tspde_status tspde_ensemble_set_seed(tspde_ensemble* e, uint64_t seed);
TSPDE_API tspde_status tspde_ensemble_set_output_dir(tspde_ensemble* e, const char* dir);
/* Run every realization, then export if an output directory is set. */
TSPDE_API tspde_status tspde_ensemble_run(tspde_ensemble* e);
/* Human-readable per-N summary of a finished run. Free with tspde_string_free. */
TSPDE_API tspde_status tspde_ensemble_summary(const tspde_ensemble* e, char** text);
TSPDE_API void tspde_ensemble_free(tspde_ensemble* e);

TSPDE_API tspde_status tspde_solve_cn(double sigma, int n, tspde_renorm_result* out);
/* kind: "cn", "mode-energy", "norm" or "heat-series". */
TSPDE_API tspde_status tspde_write_curve(const char* kind, double sigma, int n,
                                         const char* path);
/* Writes renorm.json (and curve_<kind>.csv when kind is not NULL). */
TSPDE_API tspde_status tspde_renorm_export(double sigma, int n, const char* kind,
                                           const char* out_dir);

/* Report on a spectra CSV: per-N error bars, optional log-log fit over
 * [kappa_min, kappa_max] (skipped when kappa_max == 0) and optional overlay
 * against a curve CSV. Free with tspde_string_free. */
TSPDE_API tspde_status tspde_analyze(const char* spectra_csv, int kappa_min, int kappa_max,
                                     const char* overlay_csv, char** report);

#ifdef __cplusplus
}
#endif

#endif /* TSPDE_H */
