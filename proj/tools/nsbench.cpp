// nsbench - benchmark CLI for the steady Navier-Stokes nonlinear solvers.
// Talks to the solver exclusively through the stns C API.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stns/stns.h"

namespace {

struct ConfigGuard {
  stns_config* ptr = nullptr;
  ~ConfigGuard() { stns_config_destroy(ptr); }
};
struct ProblemGuard {
  stns_problem* ptr = nullptr;
  ~ProblemGuard() { stns_problem_destroy(ptr); }
};
struct ResultGuard {
  stns_result* ptr = nullptr;
  ~ResultGuard() { stns_result_destroy(ptr); }
};

int die(const char* context) {
  std::fprintf(stderr, "nsbench: %s: %s\n", context, stns_last_error());
  return 1;
}

const char* outcome_name(stns_outcome outcome) {
  switch (outcome) {
    case STNS_CONVERGED:
      return "converged";
    case STNS_MAX_ITERATIONS:
      return "max_iterations";
    case STNS_BLOWUP:
      return "blowup";
    case STNS_LINEAR_SOLVE_FAILED:
      return "linear_solve_failed";
  }
  return "?";
}

struct SolveArgs {
  std::string problem = "cavity";
  std::string method = "aapn";
  int n = 32;
  double re = 1000.0;
  double nu = 0.0;  // overrides re when set
  int m = 1;
  double beta = 1.0;
  double tol = 1e-10;
  int max_iters = 100;
  std::string stop_residual = "tilde-hat";
  std::string out_csv;
  std::string export_field;
};

bool apply_method(stns_config* cfg, const std::string& name) {
  stns_method method;
  if (name == "picard")
    method = STNS_METHOD_PICARD;
  else if (name == "newton")
    method = STNS_METHOD_NEWTON;
  else if (name == "pn" || name == "picard-newton")
    method = STNS_METHOD_PICARD_NEWTON;
  else if (name == "aapn" || name == "aapicard-newton")
    method = STNS_METHOD_AAPICARD_NEWTON;
  else if (name == "prtx")
    method = STNS_METHOD_PRTX;
  else
    return false;
  return stns_config_set_method(cfg, method) == STNS_OK;
}

int run_solve(const SolveArgs& args) {
  ProblemGuard problem;
  const double nu = args.nu > 0.0 ? args.nu : 1.0 / args.re;
  stns_error err;
  if (args.problem == "cavity")
    err = stns_problem_create_cavity(args.n, 1.0 / nu, &problem.ptr);
  else if (args.problem == "manufactured")
    err = stns_problem_create_manufactured(args.n, nu, &problem.ptr);
  else {
    std::fprintf(stderr, "nsbench: unknown problem '%s'\n", args.problem.c_str());
    return 1;
  }
  if (err != STNS_OK) return die("problem setup");

  ConfigGuard cfg;
  if (stns_config_create(&cfg.ptr) != STNS_OK) return die("config");
  if (!apply_method(cfg.ptr, args.method)) {
    std::fprintf(stderr, "nsbench: unknown method '%s'\n", args.method.c_str());
    return 1;
  }
  if (stns_config_set_depth(cfg.ptr, args.m) != STNS_OK ||
      stns_config_set_relaxation(cfg.ptr, args.beta) != STNS_OK ||
      stns_config_set_tolerance(cfg.ptr, args.tol) != STNS_OK ||
      stns_config_set_max_iterations(cfg.ptr, args.max_iters) != STNS_OK)
    return die("config");
  if (stns_config_set_stop_residual(cfg.ptr, args.stop_residual == "tilde-u"
                                                 ? STNS_STOP_TILDE_U
                                                 : STNS_STOP_TILDE_HAT) != STNS_OK)
    return die("config");

  ResultGuard result;
  if (stns_solve(problem.ptr, cfg.ptr, &result.ptr) != STNS_OK) return die("solve");

  const stns_outcome outcome = stns_result_outcome(result.ptr);
  std::printf("problem=%s n=%d re=%.17g method=%s m=%d beta=%.17g\n", args.problem.c_str(),
              args.n, 1.0 / nu, args.method.c_str(), args.m, args.beta);
  std::printf("velocity_dofs=%d pressure_dofs=%d h=%.17g\n",
              stns_problem_velocity_dofs(problem.ptr), stns_problem_pressure_dofs(problem.ptr),
              stns_problem_mesh_size(problem.ptr));
  std::printf("status=%s iterations=%d final_residual=%.17g median_theta=%.17g\n",
              outcome_name(outcome), stns_result_iterations(result.ptr),
              stns_result_final_residual(result.ptr), stns_result_median_theta(result.ptr));

  if (args.problem == "manufactured") {
    double h1 = 0, l2 = 0;
    if (stns_manufactured_errors(problem.ptr, result.ptr, &h1, &l2) != STNS_OK)
      return die("errors");
    std::printf("h1_velocity_error=%.17g l2_pressure_error=%.17g\n", h1, l2);
  }
  if (!args.out_csv.empty() &&
      stns_result_write_trace_csv(result.ptr, args.out_csv.c_str()) != STNS_OK)
    return die("trace csv");
  if (!args.export_field.empty() &&
      stns_result_write_fields_vtk(problem.ptr, result.ptr, args.export_field.c_str()) != STNS_OK)
    return die("field export");

  return static_cast<int>(outcome);
}

struct ManufacturedArgs {
  std::vector<int> n_list{8, 16, 32};
  double nu = 1.0;
  std::string method = "pn";
  double tol = 1e-10;
  int max_iters = 100;
};

int run_manufactured_table(const ManufacturedArgs& args) {
  std::printf("n,h,h1_velocity_error,h1_order,l2_pressure_error,l2_order,status\n");
  double prev_h1 = 0, prev_l2 = 0;
  int prev_n = 0;
  int worst = 0;
  for (int n : args.n_list) {
    ProblemGuard problem;
    if (stns_problem_create_manufactured(n, args.nu, &problem.ptr) != STNS_OK)
      return die("problem setup");
    ConfigGuard cfg;
    if (stns_config_create(&cfg.ptr) != STNS_OK) return die("config");
    if (!apply_method(cfg.ptr, args.method)) {
      std::fprintf(stderr, "nsbench: unknown method '%s'\n", args.method.c_str());
      return 1;
    }
    if (stns_config_set_tolerance(cfg.ptr, args.tol) != STNS_OK ||
        stns_config_set_max_iterations(cfg.ptr, args.max_iters) != STNS_OK)
      return die("config");
    ResultGuard result;
    if (stns_solve(problem.ptr, cfg.ptr, &result.ptr) != STNS_OK) return die("solve");
    double h1 = 0, l2 = 0;
    if (stns_manufactured_errors(problem.ptr, result.ptr, &h1, &l2) != STNS_OK)
      return die("errors");

    std::printf("%d,%.17g,%.17g,", n, stns_problem_mesh_size(problem.ptr), h1);
    if (prev_n > 0 && prev_h1 > 0)
      std::printf("%.17g,", std::log(prev_h1 / h1) / std::log(double(n) / prev_n));
    else
      std::printf("-,");
    std::printf("%.17g,", l2);
    if (prev_n > 0 && prev_l2 > 0)
      std::printf("%.17g,", std::log(prev_l2 / l2) / std::log(double(n) / prev_n));
    else
      std::printf("-,");
    const stns_outcome outcome = stns_result_outcome(result.ptr);
    std::printf("%s\n", outcome_name(outcome));
    worst = std::max(worst, static_cast<int>(outcome));
    prev_h1 = h1;
    prev_l2 = l2;
    prev_n = n;
  }
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steady Navier-Stokes nonlinear-solver benchmark"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App* solve_cmd = app.add_subcommand("solve", "run one configuration");
  solve_cmd->add_option("--problem", solve_args.problem, "cavity | manufactured");
  solve_cmd->add_option("--method", solve_args.method,
                        "picard | newton | pn | aapn | prtx");
  solve_cmd->add_option("--n", solve_args.n, "mesh subdivisions per side");
  solve_cmd->add_option("--re", solve_args.re, "Reynolds number (1/nu)");
  solve_cmd->add_option("--nu", solve_args.nu, "kinematic viscosity, overrides --re");
  solve_cmd->add_option("--m", solve_args.m, "Anderson depth");
  solve_cmd->add_option("--beta", solve_args.beta, "Anderson relaxation in (0,1]");
  solve_cmd->add_option("--tol", solve_args.tol, "stopping tolerance (H1 seminorm)");
  solve_cmd->add_option("--max-iters", solve_args.max_iters, "iteration budget");
  solve_cmd->add_option("--stop-residual", solve_args.stop_residual, "tilde-hat | tilde-u");
  solve_cmd->add_option("--out", solve_args.out_csv, "per-iteration trace CSV path");
  solve_cmd->add_option("--export-field", solve_args.export_field, "velocity/pressure VTK path");

  std::string manifest_path, sweep_out = "sweep.csv";
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a manifest of configurations");
  sweep_cmd->add_option("manifest", manifest_path, "plain-text manifest: re method m beta n")
      ->required();
  sweep_cmd->add_option("--out", sweep_out, "output CSV path");

  ManufacturedArgs mms_args;
  CLI::App* mms_cmd = app.add_subcommand("manufactured", "discretization-error table");
  mms_cmd->add_option("--n-list", mms_args.n_list, "mesh sizes, e.g. --n-list 8 16 32");
  mms_cmd->add_option("--nu", mms_args.nu, "kinematic viscosity");
  mms_cmd->add_option("--method", mms_args.method, "solver method");
  mms_cmd->add_option("--tol", mms_args.tol, "stopping tolerance");
  mms_cmd->add_option("--max-iters", mms_args.max_iters, "iteration budget");

  CLI11_PARSE(app, argc, argv);

  if (solve_cmd->parsed()) return run_solve(solve_args);
  if (sweep_cmd->parsed()) {
    if (stns_run_sweep(manifest_path.c_str(), sweep_out.c_str()) != STNS_OK) return die("sweep");
    return 0;
  }
  if (mms_cmd->parsed()) return run_manufactured_table(mms_args);
  return 1;
}
