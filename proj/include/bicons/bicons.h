/* C interface of the biconservative surface toolkit.
 *
 * All handles are opaque and owned by the caller; release them with the
 * matching *_free function. Every call returning bc_status stores a message
 * retrievable with bc_last_error() (per thread) when it fails. Strings
 * returned through char** must be released with bc_string_free().
 */
#ifndef BICONS_BICONS_H
#define BICONS_BICONS_H

#include <stddef.h>

#if defined(_WIN32)
#define BC_API __declspec(dllexport)
#else
#define BC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bc_status {
  BC_OK = 0,
  BC_ASSERTION_FAILED = 2, /* unused as a return value; matches the CLI exit code */
  BC_CONFIG_ERROR = 3,
  BC_NUMERICAL_ERROR = 4,
  BC_INVALID_ARGUMENT = 5,
  BC_IO_ERROR = 6,
  BC_NOT_FOUND = 7,
  BC_INTERNAL_ERROR = 8
} bc_status;

typedef struct bc_config bc_config;
typedef struct bc_surface bc_surface;
typedef struct bc_report bc_report;
typedef struct bc_mu_solution bc_mu_solution;

BC_API const char* bc_version(void);
/* Message of the last failed call on this thread ("" if none). */
BC_API const char* bc_last_error(void);
BC_API void bc_string_free(char* s);

/* --- run configuration --------------------------------------------------- */

/* Defaults: verify command, no surface. */
BC_API bc_status bc_config_new(bc_config** out);
BC_API bc_status bc_config_from_json(const char* text, bc_config** out);
BC_API bc_status bc_config_from_file(const char* path, bc_config** out);
BC_API void bc_config_free(bc_config* c);

/* "verify", "solve-mu" or "convergence". */
BC_API bc_status bc_config_set_command(bc_config* c, const char* command);
/* Selects a builtin and drops any position table. */
BC_API bc_status bc_config_set_surface(bc_config* c, const char* builtin);
BC_API bc_status bc_config_set_param(bc_config* c, const char* key, double value);
/* "analytic", "fd" or "tabulated". */
BC_API bc_status bc_config_set_jets(bc_config* c, const char* mode);
BC_API bc_status bc_config_set_grid(bc_config* c, int nu, int nv);
BC_API bc_status bc_config_set_periodic(bc_config* c, int periodic_u, int periodic_v);
BC_API bc_status bc_config_set_tol_analytic(bc_config* c, double tol);
BC_API bc_status bc_config_set_tol_fd(bc_config* c, double tol);
BC_API bc_status bc_config_set_mean_curvature(bc_config* c, double h_norm);
BC_API bc_status bc_config_set_ambient_curvature(bc_config* c, double kn);
BC_API bc_status bc_config_set_levels(bc_config* c, int levels);
BC_API bc_status bc_config_set_dump_fields(bc_config* c, int on);
/* "json" or "csv". */
BC_API bc_status bc_config_set_format(bc_config* c, const char* format);
BC_API bc_status bc_config_set_output(bc_config* c, const char* path);
BC_API bc_status bc_config_get_output(const bc_config* c, char** path);

/* Runs the configured command. */
BC_API bc_status bc_run(const bc_config* c, bc_report** out);
/* Renders with the config's format and writes to its output (stdout if empty). */
BC_API bc_status bc_emit(const bc_config* c, const bc_report* r);
/* 0 pass, 2 assertion failure, 4 non-converged solve. */
BC_API int bc_exit_code(const bc_config* c, const bc_report* r);

/* --- surfaces ------------------------------------------------------------- */

/* params_json may be NULL; jets is "analytic", "fd" or "tabulated".
 * Default parameter range of the builtin. */
BC_API bc_status bc_surface_builtin(const char* name, const char* params_json, int nu, int nv,
                                    const char* jets, bc_surface** out);
/* Positions node by node (u fastest), `count` rows of `components` doubles.
 * kind is "euclidean" or "sphere". */
BC_API bc_status bc_surface_tabulated(const char* kind, int dim, double radius, double u_min,
                                      double u_max, int nu, int periodic_u, double v_min,
                                      double v_max, int nv, int periodic_v,
                                      const double* positions, size_t count, size_t components,
                                      bc_surface** out);
BC_API size_t bc_surface_node_count(const bc_surface* s);
BC_API bc_status bc_surface_positions(const bc_surface* s, double* out, size_t capacity);
BC_API bc_status bc_surface_verify(const bc_surface* s, double tol_analytic, bc_report** out);
BC_API void bc_surface_free(bc_surface* s);

/* --- reports -------------------------------------------------------------- */

BC_API size_t bc_report_residual_count(const bc_report* r);
/* BC_NOT_FOUND when index >= bc_report_residual_count(r) */
BC_API bc_status bc_report_residual_at(const bc_report* r, size_t index, const char** name,
                                       double* l2, double* linf);
BC_API bc_status bc_report_residual(const bc_report* r, const char* name, double* l2,
                                    double* linf);
BC_API bc_status bc_report_summary(const bc_report* r, const char* name, double* value);
BC_API bc_status bc_report_flag(const bc_report* r, const char* name, int* value);
/* Whole report; format "json" or "csv". */
BC_API bc_status bc_report_render(const bc_report* r, const char* format, char** text);
BC_API void bc_report_free(bc_report* r);

/* --- conformal-factor solver ---------------------------------------------- */

/* Square periodic grid [0, 2 pi)^2 with n nodes per side, constant K^N and
 * mu_0 = root (1 + perturbation sin x sin y), root = 2|H| sqrt(K^N + |H|^2). */
BC_API bc_status bc_mu_solve(double h_norm, double kn, int n, double perturbation, double tol,
                             int max_iter, bc_mu_solution** out);
BC_API int bc_mu_converged(const bc_mu_solution* s);
BC_API int bc_mu_iterations(const bc_mu_solution* s);
BC_API double bc_mu_final_residual(const bc_mu_solution* s);
BC_API size_t bc_mu_node_count(const bc_mu_solution* s);
BC_API bc_status bc_mu_values(const bc_mu_solution* s, double* out, size_t capacity);
/* L-infinity Gauss-consistency residual. */
BC_API bc_status bc_mu_gauss_consistency(const bc_mu_solution* s, double* linf);
BC_API void bc_mu_free(bc_mu_solution* s);

#ifdef __cplusplus
}
#endif

#endif
