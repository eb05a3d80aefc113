#include "stns/stns.h"

#include <fstream>
#include <functional>
#include <string>

#include "runner.hpp"

struct stns_problem {
  stns::ProblemSpec spec;
  stns::DiscreteProblem discrete;
};

struct stns_config {
  stns::SolverConfig config;
};

struct stns_result {
  stns::SolveResult result;
};

namespace {

thread_local std::string g_last_error;

stns_error fail(stns_error code, const char* message) {
  g_last_error = message;
  return code;
}

template <typename Fn>
stns_error guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    return fail(STNS_EINVAL, e.what());
  } catch (const std::exception& e) {
    return fail(STNS_EFAIL, e.what());
  }
}

stns_error create_problem(stns::ProblemKind kind, int n, double nu, stns_problem** out) {
  if (!out) return fail(STNS_EINVAL, "null output pointer");
  *out = nullptr;
  return guarded([&]() {
    stns::ProblemSpec spec{kind, n, nu};
    auto* handle = new stns_problem{spec, stns::build_problem(spec)};
    *out = handle;
    return STNS_OK;
  });
}

stns_error write_file(const char* path, const std::function<void(std::ostream&)>& writer) {
  if (!path) return fail(STNS_EINVAL, "null path");
  std::ofstream out(path);
  if (!out) return fail(STNS_EIO, "could not open output file");
  writer(out);
  out.flush();
  return out ? STNS_OK : fail(STNS_EIO, "write failed");
}

}  // namespace

extern "C" {

stns_error stns_problem_create_cavity(int n, double re, stns_problem** out) {
  if (!(re > 0)) return fail(STNS_EINVAL, "Reynolds number must be positive");
  return create_problem(stns::ProblemKind::Cavity, n, 1.0 / re, out);
}

stns_error stns_problem_create_manufactured(int n, double nu, stns_problem** out) {
  if (!(nu > 0)) return fail(STNS_EINVAL, "viscosity must be positive");
  return create_problem(stns::ProblemKind::Manufactured, n, nu, out);
}

void stns_problem_destroy(stns_problem* problem) { delete problem; }

int stns_problem_velocity_dofs(const stns_problem* problem) {
  return problem ? problem->discrete.space.velocity_count : 0;
}

int stns_problem_pressure_dofs(const stns_problem* problem) {
  return problem ? problem->discrete.space.pressure_count : 0;
}

double stns_problem_mesh_size(const stns_problem* problem) {
  return problem ? stns::mesh_size(problem->discrete.mesh) : 0.0;
}

stns_error stns_problem_write_mesh_vtk(const stns_problem* problem, const char* path) {
  if (!problem) return fail(STNS_EINVAL, "null problem");
  return write_file(path,
                    [&](std::ostream& out) { stns::write_mesh_vtk(problem->discrete.mesh, out); });
}

stns_error stns_config_create(stns_config** out) {
  if (!out) return fail(STNS_EINVAL, "null output pointer");
  *out = new stns_config{};
  return STNS_OK;
}

void stns_config_destroy(stns_config* config) { delete config; }

stns_error stns_config_set_method(stns_config* config, stns_method method) {
  if (!config) return fail(STNS_EINVAL, "null config");
  switch (method) {
    case STNS_METHOD_PICARD:
      config->config.method = stns::Method::Picard;
      return STNS_OK;
    case STNS_METHOD_NEWTON:
      config->config.method = stns::Method::Newton;
      return STNS_OK;
    case STNS_METHOD_PICARD_NEWTON:
      config->config.method = stns::Method::PicardNewton;
      return STNS_OK;
    case STNS_METHOD_AAPICARD_NEWTON:
      config->config.method = stns::Method::AAPicardNewton;
      return STNS_OK;
    case STNS_METHOD_PRTX:
      config->config.method = stns::Method::PRTXVariant;
      return STNS_OK;
  }
  return fail(STNS_EINVAL, "unknown method");
}

stns_error stns_config_set_depth(stns_config* config, int m) {
  if (!config || m < 0) return fail(STNS_EINVAL, "depth must be >= 0");
  config->config.depth = m;
  return STNS_OK;
}

stns_error stns_config_set_relaxation(stns_config* config, double beta) {
  if (!config || !(beta > 0.0 && beta <= 1.0))
    return fail(STNS_EINVAL, "relaxation must lie in (0, 1]");
  config->config.relaxation = beta;
  return STNS_OK;
}

stns_error stns_config_set_tolerance(stns_config* config, double tol) {
  if (!config || !(tol > 0.0)) return fail(STNS_EINVAL, "tolerance must be positive");
  config->config.tolerance = tol;
  return STNS_OK;
}

stns_error stns_config_set_max_iterations(stns_config* config, int max_iterations) {
  if (!config || max_iterations < 1) return fail(STNS_EINVAL, "max_iterations must be >= 1");
  config->config.max_iterations = max_iterations;
  return STNS_OK;
}

stns_error stns_config_set_stop_residual(stns_config* config, stns_stop_residual which) {
  if (!config) return fail(STNS_EINVAL, "null config");
  config->config.stop_residual = which == STNS_STOP_TILDE_U ? stns::StopResidual::TildeMinusU
                                                            : stns::StopResidual::TildeMinusHat;
  return STNS_OK;
}

stns_error stns_config_set_blowup_threshold(stns_config* config, double threshold) {
  if (!config || !(threshold > 0.0)) return fail(STNS_EINVAL, "threshold must be positive");
  config->config.blowup_threshold = threshold;
  return STNS_OK;
}

stns_error stns_solve(const stns_problem* problem, const stns_config* config, stns_result** out) {
  if (!problem || !config || !out) return fail(STNS_EINVAL, "null argument");
  *out = nullptr;
  return guarded([&]() {
    auto* handle = new stns_result{stns::solve(config->config, problem->discrete)};
    *out = handle;
    return STNS_OK;
  });
}

void stns_result_destroy(stns_result* result) { delete result; }

stns_outcome stns_result_outcome(const stns_result* result) {
  return result ? static_cast<stns_outcome>(result->result.status) : STNS_LINEAR_SOLVE_FAILED;
}

int stns_result_iterations(const stns_result* result) {
  return result ? result->result.iterations : 0;
}

double stns_result_final_residual(const stns_result* result) {
  return result ? result->result.final_residual : 0.0;
}

double stns_result_median_theta(const stns_result* result) {
  return result ? result->result.median_theta() : 1.0;
}

int stns_result_trace_length(const stns_result* result) {
  return result ? static_cast<int>(result->result.trace.size()) : 0;
}

stns_error stns_result_trace_get(const stns_result* result, int index, stns_trace_row* out) {
  if (!result || !out || index < 0 || index >= stns_result_trace_length(result))
    return fail(STNS_EINVAL, "trace index out of range");
  const stns::IterationRecord& rec = result->result.trace[index];
  *out = stns_trace_row{rec.k,      rec.res_tilde_hat, rec.res_tilde_u,   rec.theta,
                        rec.sum_abs_alpha, rec.beta,  rec.t_picard,      rec.t_anderson,
                        rec.t_newton,      rec.t_picard2, rec.picard_h1, rec.lin_res_picard,
                        rec.lin_res_newton};
  return STNS_OK;
}

stns_error stns_result_write_trace_csv(const stns_result* result, const char* path) {
  if (!result) return fail(STNS_EINVAL, "null result");
  return write_file(path,
                    [&](std::ostream& out) { stns::write_trace_csv(result->result.trace, out); });
}

stns_error stns_result_write_fields_vtk(const stns_problem* problem, const stns_result* result,
                                        const char* path) {
  if (!problem || !result) return fail(STNS_EINVAL, "null argument");
  if (result->result.velocity.coeffs.size() != problem->discrete.space.velocity_count)
    return fail(STNS_EINVAL, "result does not match problem");
  return write_file(path, [&](std::ostream& out) {
    stns::write_fields_vtk(problem->discrete.mesh, problem->discrete.space,
                           result->result.velocity.coeffs, result->result.pressure.coeffs, out);
  });
}

stns_error stns_manufactured_errors(const stns_problem* problem, const stns_result* result,
                                    double* h1_velocity_error, double* l2_pressure_error) {
  if (!problem || !result) return fail(STNS_EINVAL, "null argument");
  if (problem->spec.kind != stns::ProblemKind::Manufactured)
    return fail(STNS_EINVAL, "not a manufactured problem");
  return guarded([&]() {
    if (h1_velocity_error)
      *h1_velocity_error =
          stns::manufactured_velocity_h1_error(problem->discrete, result->result.velocity.coeffs);
    if (l2_pressure_error)
      *l2_pressure_error =
          stns::manufactured_pressure_l2_error(problem->discrete, result->result.pressure.coeffs);
    return STNS_OK;
  });
}

stns_error stns_run_sweep(const char* manifest_path, const char* out_csv_path) {
  if (!manifest_path || !out_csv_path) return fail(STNS_EINVAL, "null path");
  return guarded([&]() {
    std::ifstream manifest(manifest_path);
    if (!manifest) return fail(STNS_EIO, "could not open manifest");
    const std::vector<stns::SweepRow> rows = stns::parse_sweep_manifest(manifest);
    std::ofstream out(out_csv_path);
    if (!out) return fail(STNS_EIO, "could not open output file");
    stns::run_sweep(rows, out);
    return out ? STNS_OK : fail(STNS_EIO, "write failed");
  });
}

const char* stns_last_error(void) { return g_last_error.c_str(); }

const char* stns_version(void) { return "0.1.0"; }

}  // extern "C"
