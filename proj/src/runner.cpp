#include "runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace stns {

namespace {

std::string full_precision(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string RunRecord::legend() const {
  switch (status) {
    case SolveStatus::Converged:
      return std::to_string(iterations);
    case SolveStatus::MaxIterations:
      return "F";
    case SolveStatus::Blowup:
    case SolveStatus::LinearSolveFailed:
      return "B";
  }
  return "?";
}

void write_trace_csv(const std::vector<IterationRecord>& trace, std::ostream& out) {
  out << "k,res_tilde_hat,res_tilde_u,theta,sum_abs_alpha,t_picard,t_anderson,t_newton\n";
  for (const IterationRecord& rec : trace) {
    out << rec.k << ',' << full_precision(rec.res_tilde_hat) << ','
        << full_precision(rec.res_tilde_u) << ',' << full_precision(rec.theta) << ','
        << full_precision(rec.sum_abs_alpha) << ',' << full_precision(rec.t_picard) << ','
        << full_precision(rec.t_anderson) << ',' << full_precision(rec.t_newton) << '\n';
  }
}

void write_fields_vtk(const Mesh& mesh, const TaylorHoodSpace& space, const Eigen::VectorXd& u,
                      const Eigen::VectorXd& p, std::ostream& out) {
  write_mesh_vtk(mesh, out);
  out << "POINT_DATA " << mesh.vertex_count() << "\n";
  out << "VECTORS velocity double\n";
  for (int v = 0; v < mesh.vertex_count(); ++v)
    out << full_precision(u[2 * v]) << " " << full_precision(u[2 * v + 1]) << " 0\n";
  (void)space;
  out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
  for (int v = 0; v < mesh.vertex_count(); ++v) out << full_precision(p[v]) << "\n";
}

RunRecord run_problem(const ProblemSpec& spec, const SolverConfig& config,
                      SolveResult* result_out) {
  const auto t0 = std::chrono::steady_clock::now();
  const DiscreteProblem prob = build_problem(spec);
  SolveResult result = solve(config, prob);

  RunRecord rec;
  rec.problem = spec;
  rec.config = config;
  rec.status = result.status;
  rec.iterations = result.iterations;
  rec.final_residual = result.final_residual;
  rec.median_theta = result.median_theta();
  if (!result.trace.empty()) {
    for (const IterationRecord& it : result.trace) {
      rec.mean_t_picard += it.t_picard + it.t_picard2;
      rec.mean_t_anderson += it.t_anderson;
      rec.mean_t_newton += it.t_newton;
    }
    const double n = static_cast<double>(result.trace.size());
    rec.mean_t_picard /= n;
    rec.mean_t_anderson /= n;
    rec.mean_t_newton /= n;
  }
  rec.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (result_out) *result_out = std::move(result);
  return rec;
}

std::vector<ManufacturedRow> run_manufactured(double nu, const std::vector<int>& n_list,
                                              const SolverConfig& config, std::ostream& report) {
  std::vector<ManufacturedRow> rows;
  report << "n,h,h1_velocity_error,h1_order,l2_pressure_error,l2_order,status\n";
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    ProblemSpec spec{ProblemKind::Manufactured, n_list[i], nu};
    const DiscreteProblem prob = build_problem(spec);
    const SolveResult result = solve(config, prob);

    ManufacturedRow row;
    row.n = n_list[i];
    row.h = mesh_size(prob.mesh);
    row.status = result.status;
    row.h1_velocity_error = manufactured_velocity_h1_error(prob, result.velocity.coeffs);
    row.l2_pressure_error = manufactured_pressure_l2_error(prob, result.pressure.coeffs);

    report << row.n << ',' << full_precision(row.h) << ','
           << full_precision(row.h1_velocity_error) << ',';
    if (i > 0 && rows[i - 1].h1_velocity_error > 0) {
      const double ratio = static_cast<double>(row.n) / n_list[i - 1];
      report << full_precision(std::log(rows[i - 1].h1_velocity_error / row.h1_velocity_error) /
                               std::log(ratio));
    } else {
      report << "-";
    }
    report << ',' << full_precision(row.l2_pressure_error) << ',';
    if (i > 0 && rows[i - 1].l2_pressure_error > 0) {
      const double ratio = static_cast<double>(row.n) / n_list[i - 1];
      report << full_precision(std::log(rows[i - 1].l2_pressure_error / row.l2_pressure_error) /
                               std::log(ratio));
    } else {
      report << "-";
    }
    report << ',' << to_string(row.status) << '\n';
    report.flush();
    rows.push_back(row);
  }
  return rows;
}

std::vector<SweepRow> parse_sweep_manifest(std::istream& in) {
  std::vector<SweepRow> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string method_name;
    double re = 0, beta = 0;
    int m = 0, n = 0;
    if (!(ls >> re)) continue;  // blank line
    if (!(ls >> method_name >> m >> beta >> n))
      throw std::invalid_argument("sweep manifest line " + std::to_string(line_no) +
                                  ": expected 're method m beta n'");
    const auto method = method_from_string(method_name);
    if (!method)
      throw std::invalid_argument("sweep manifest line " + std::to_string(line_no) +
                                  ": unknown method '" + method_name + "'");
    if (!(re > 0) || n < 1 || m < 0 || !(beta > 0.0 && beta <= 1.0))
      throw std::invalid_argument("sweep manifest line " + std::to_string(line_no) +
                                  ": invalid parameters");
    SweepRow row;
    row.problem = {ProblemKind::Cavity, n, 1.0 / re};
    row.config.method = *method;
    row.config.depth = m;
    row.config.relaxation = beta;
    rows.push_back(row);
  }
  return rows;
}

std::vector<RunRecord> run_sweep(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "re,n,method,m,beta,tol,result,status,iterations,final_residual,median_theta,"
         "mean_t_picard,mean_t_anderson,mean_t_newton,total_seconds\n";
  out.flush();
  std::vector<RunRecord> records;
  for (const SweepRow& row : rows) {
    RunRecord rec;
    try {
      rec = run_problem(row.problem, row.config);
    } catch (const std::exception&) {
      rec.problem = row.problem;
      rec.config = row.config;
      rec.status = SolveStatus::LinearSolveFailed;
    }
    out << full_precision(1.0 / rec.problem.nu) << ',' << rec.problem.n << ','
        << to_string(rec.config.method) << ',' << rec.config.depth << ','
        << full_precision(rec.config.relaxation) << ',' << full_precision(rec.config.tolerance)
        << ',' << rec.legend() << ',' << to_string(rec.status) << ',' << rec.iterations << ','
        << full_precision(rec.final_residual) << ',' << full_precision(rec.median_theta) << ','
        << full_precision(rec.mean_t_picard) << ',' << full_precision(rec.mean_t_anderson) << ','
        << full_precision(rec.mean_t_newton) << ',' << full_precision(rec.total_seconds) << '\n';
    out.flush();
    records.push_back(rec);
  }
  return records;
}

const char* to_string(Method method) {
  switch (method) {
    case Method::Picard:
      return "picard";
    case Method::Newton:
      return "newton";
    case Method::PicardNewton:
      return "pn";
    case Method::AAPicardNewton:
      return "aapn";
    case Method::PRTXVariant:
      return "prtx";
  }
  return "?";
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged:
      return "converged";
    case SolveStatus::MaxIterations:
      return "max_iterations";
    case SolveStatus::Blowup:
      return "blowup";
    case SolveStatus::LinearSolveFailed:
      return "linear_solve_failed";
  }
  return "?";
}

std::optional<Method> method_from_string(const std::string& name) {
  if (name == "picard") return Method::Picard;
  if (name == "newton") return Method::Newton;
  if (name == "pn" || name == "picard-newton") return Method::PicardNewton;
  if (name == "aapn" || name == "aapicard-newton") return Method::AAPicardNewton;
  if (name == "prtx") return Method::PRTXVariant;
  return std::nullopt;
}

}  // namespace stns
