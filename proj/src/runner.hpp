#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "problems.hpp"

namespace stns {

struct RunRecord {
  ProblemSpec problem;
  SolverConfig config;
  SolveStatus status = SolveStatus::MaxIterations;
  int iterations = 0;
  double final_residual = 0;
  double median_theta = 1.0;  // over iterations with a nonempty window
  double mean_t_picard = 0, mean_t_anderson = 0, mean_t_newton = 0;
  double total_seconds = 0;

  /// Paper-style legend: iteration count when converged, "F" when the budget
  /// ran out, "B" on blowup or a failed linear solve.
  std::string legend() const;
};

/// Per-iteration trace in the documented CSV schema
/// k,res_tilde_hat,res_tilde_u,theta,sum_abs_alpha,t_picard,t_anderson,t_newton
/// written with 17 significant digits.
void write_trace_csv(const std::vector<IterationRecord>& trace, std::ostream& out);

/// Velocity/pressure point data on the P1 vertex lattice, legacy ASCII VTK.
void write_fields_vtk(const Mesh& mesh, const TaylorHoodSpace& space, const Eigen::VectorXd& u,
                      const Eigen::VectorXd& p, std::ostream& out);

/// Runs one problem end to end and summarizes the result.
RunRecord run_problem(const ProblemSpec& spec, const SolverConfig& config,
                      SolveResult* result_out = nullptr);

struct ManufacturedRow {
  int n = 0;
  double h = 0;
  double h1_velocity_error = 0;
  double l2_pressure_error = 0;
  SolveStatus status = SolveStatus::MaxIterations;
};

/// Solves the manufactured problem on each mesh in n_list and reports errors
/// plus observed orders between consecutive rows.
std::vector<ManufacturedRow> run_manufactured(double nu, const std::vector<int>& n_list,
                                              const SolverConfig& config, std::ostream& report);

struct SweepRow {
  ProblemSpec problem;
  SolverConfig config;
};

/// Parses a plain-text sweep manifest: one run per line,
/// "re method m beta n"; '#' starts a comment. Throws std::invalid_argument
/// on malformed rows (including beta outside (0,1]).
std::vector<SweepRow> parse_sweep_manifest(std::istream& in);

/// Executes every manifest row, appending one CSV record per row to out as
/// soon as it finishes. Per-row solver failures are recorded and the sweep
/// continues. Returns the records.
std::vector<RunRecord> run_sweep(const std::vector<SweepRow>& rows, std::ostream& out);

const char* to_string(Method method);
const char* to_string(SolveStatus status);
std::optional<Method> method_from_string(const std::string& name);

}  // namespace stns
