/* stns - steady incompressible Navier-Stokes nonlinear-solver benchmark.
 *
 * C API over the solver core: opaque handles, integer error codes, no
 * exceptions across the boundary. All functions returning stns_error set a
 * thread-local message readable through stns_last_error() on failure.
 */
#ifndef STNS_H
#define STNS_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct stns_problem stns_problem;
typedef struct stns_config stns_config;
typedef struct stns_result stns_result;

typedef enum stns_error {
  STNS_OK = 0,
  STNS_EINVAL = 1, /* bad argument or handle */
  STNS_EIO = 2,    /* file could not be opened or written */
  STNS_EFAIL = 3   /* internal failure; see stns_last_error() */
} stns_error;

typedef enum stns_method {
  STNS_METHOD_PICARD = 0,
  STNS_METHOD_NEWTON = 1,
  STNS_METHOD_PICARD_NEWTON = 2,
  STNS_METHOD_AAPICARD_NEWTON = 3,
  STNS_METHOD_PRTX = 4
} stns_method;

typedef enum stns_stop_residual {
  STNS_STOP_TILDE_HAT = 0, /* ||grad(u_tilde_{k+1} - u_hat_k)||, the default */
  STNS_STOP_TILDE_U = 1    /* ||grad(u_tilde_{k+1} - u_k)|| */
} stns_stop_residual;

/* Terminal solver states; the values are the benchmark CLI exit codes. */
typedef enum stns_outcome {
  STNS_CONVERGED = 0,
  STNS_MAX_ITERATIONS = 2,
  STNS_BLOWUP = 3,
  STNS_LINEAR_SOLVE_FAILED = 4
} stns_outcome;

typedef struct stns_trace_row {
  int k;                  /* 1-based outer iteration */
  double res_tilde_hat;   /* ||grad(u_tilde_{k+1} - u_hat_k)|| */
  double res_tilde_u;     /* ||grad(u_tilde_{k+1} - u_k)|| */
  double theta;           /* Anderson gain, 1 when the window is empty */
  double sum_abs_alpha;   /* sum of |alpha_j| over the window */
  double beta;            /* relaxation used this iteration */
  double t_picard;        /* wall seconds, Step 1 */
  double t_anderson;      /* wall seconds, Step 2 */
  double t_newton;        /* wall seconds, Step 3 */
  double t_picard2;       /* second Picard solve of the four-step variant */
  double picard_h1;       /* ||grad u_tilde_{k+1}|| */
  double lin_res_picard;  /* relative algebraic residual, Step 1 solve */
  double lin_res_newton;  /* relative algebraic residual, Step 3 solve */
} stns_trace_row;

/* --- problems ----------------------------------------------------------- */

/* Lid-driven cavity on the unit square: f = 0, lid velocity (1,0), no-slip
 * walls, n subdivisions per side, Reynolds number re = 1/nu. */
stns_error stns_problem_create_cavity(int n, double re, stns_problem** out);

/* Forced problem with a known divergence-free solution and homogeneous
 * Dirichlet boundary; used for verification. */
stns_error stns_problem_create_manufactured(int n, double nu, stns_problem** out);

void stns_problem_destroy(stns_problem* problem);

int stns_problem_velocity_dofs(const stns_problem* problem);
int stns_problem_pressure_dofs(const stns_problem* problem);
double stns_problem_mesh_size(const stns_problem* problem);

/* Legacy ASCII VTK export of the triangulation. */
stns_error stns_problem_write_mesh_vtk(const stns_problem* problem, const char* path);

/* --- solver configuration ----------------------------------------------- */

/* Defaults: AAPicard-Newton, m = 1, beta = 1, tol = 1e-10 on the
 * tilde-hat residual, 100 iterations, blowup threshold 1e3. */
stns_error stns_config_create(stns_config** out);
void stns_config_destroy(stns_config* config);

stns_error stns_config_set_method(stns_config* config, stns_method method);
stns_error stns_config_set_depth(stns_config* config, int m);
stns_error stns_config_set_relaxation(stns_config* config, double beta); /* (0, 1] */
stns_error stns_config_set_tolerance(stns_config* config, double tol);
stns_error stns_config_set_max_iterations(stns_config* config, int max_iterations);
stns_error stns_config_set_stop_residual(stns_config* config, stns_stop_residual which);
stns_error stns_config_set_blowup_threshold(stns_config* config, double threshold);

/* --- solving and results ------------------------------------------------- */

stns_error stns_solve(const stns_problem* problem, const stns_config* config,
                      stns_result** out);
void stns_result_destroy(stns_result* result);

stns_outcome stns_result_outcome(const stns_result* result);
int stns_result_iterations(const stns_result* result);
double stns_result_final_residual(const stns_result* result);
double stns_result_median_theta(const stns_result* result);

int stns_result_trace_length(const stns_result* result);
stns_error stns_result_trace_get(const stns_result* result, int index, stns_trace_row* out);

/* Per-iteration trace CSV:
 * k,res_tilde_hat,res_tilde_u,theta,sum_abs_alpha,t_picard,t_anderson,t_newton
 * with 17 significant digits. */
stns_error stns_result_write_trace_csv(const stns_result* result, const char* path);

/* Velocity/pressure point data on the mesh vertices, legacy ASCII VTK. */
stns_error stns_result_write_fields_vtk(const stns_problem* problem, const stns_result* result,
                                        const char* path);

/* H1-seminorm velocity and L2 pressure errors against the manufactured
 * solution; STNS_EINVAL for a cavity problem. */
stns_error stns_manufactured_errors(const stns_problem* problem, const stns_result* result,
                                    double* h1_velocity_error, double* l2_pressure_error);

/* --- sweeps -------------------------------------------------------------- */

/* Runs every row of a plain-text manifest ("re method m beta n" per line,
 * '#' comments) over the cavity problem and appends one CSV record per row to
 * out_csv_path as soon as it finishes. Per-row solver failures are recorded
 * in the table and the sweep continues. */
stns_error stns_run_sweep(const char* manifest_path, const char* out_csv_path);

/* --- diagnostics --------------------------------------------------------- */

/* Message for the most recent failure on this thread; empty string if none. */
const char* stns_last_error(void);

const char* stns_version(void);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* STNS_H */
