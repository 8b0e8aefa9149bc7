#include <filesystem>
#include <fstream>
#include <iostream>

#include "igfem/experiment.hpp"

namespace igfem {

std::string_view to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::Text: return "text";
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Json: return "json";
  }
  return "text";
}

std::optional<OutputFormat> format_from_string(std::string_view s) {
  for (OutputFormat f : {OutputFormat::Text, OutputFormat::Csv, OutputFormat::Json})
    if (to_string(f) == s) return f;
  return std::nullopt;
}

void ExperimentConfig::validate() const {
  if (!degree_supported(family, degree))
    throw ConfigError("degree " + std::to_string(degree) + " is not valid for family " +
                      std::string(to_string(family)));
  if (level_min < 1 || level_max > kMaxLevel || level_min > level_max)
    throw ConfigError("level range " + std::to_string(level_min) + ".." + std::to_string(level_max) +
                      " must be nonempty within 1.." + std::to_string(kMaxLevel));
  try {
    (void)find_problem(problem);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw ConfigError("solver tolerance must lie in (0, 1)");
  if (max_iter < 0) throw ConfigError("max_iter must be non-negative");
  if (threads < 1) throw ConfigError("threads must be positive");
}

std::optional<Baseline> baseline_for(Family family, int k) {
  switch (family) {
    case Family::P2ConformingInterp: return Baseline{Family::PkLagrange, 2};
    case Family::P2NonconformingInterp: return Baseline{Family::P2NonconformingStd, 2};
    case Family::P3Interp: return Baseline{Family::PkLagrange, 3};
    case Family::PkInterp: return Baseline{Family::PkLagrange, k};
    default: return std::nullopt;
  }
}

bool ConvergenceReport::all_ok() const {
  for (const auto& r : rows)
    if (!r.ok()) return false;
  for (const auto& r : baseline_rows)
    if (!r.ok()) return false;
  return true;
}

LevelSolution solve_level(Family family, int k, int level, const Problem& problem, const CgOptions& cg, int threads) {
  auto mesh = std::make_shared<const Mesh>(build_crisscross_mesh(level));
  LevelSolution s;
  s.disc = std::make_shared<const Discretization>(make_discretization(mesh, family, k, threads));
  s.system = assemble_system(*s.disc, problem.f, threads);
  s.solve = cg_solve(s.system.A, s.system.F, cg);
  s.uh = from_solution(s.disc, s.solve.x, s.system.interior);
  s.ih = interpolate_exact(s.disc, problem);
  return s;
}

namespace {

void fill_orders(std::vector<ReportRow>& rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& e = rows[i].err;
    e.order_l2.reset();
    e.order_h1.reset();
    if (i == 0 || !rows[i].ok() || !rows[i - 1].ok() || rows[i - 1].err.level + 1 != e.level) continue;
    const auto& p = rows[i - 1].err;
    const auto l2 = convergence_orders({p.ih.l2, e.ih.l2});
    const auto h1 = convergence_orders({p.ih.h1, e.ih.h1});
    e.order_l2 = l2[1];
    e.order_h1 = h1[1];
  }
}

std::vector<ReportRow> sweep(const ExperimentConfig& cfg, Family family, int k) {
  const Problem& problem = find_problem(cfg.problem);
  std::vector<ReportRow> rows;
  for (int level = cfg.level_min; level <= cfg.level_max; ++level) {
    ReportRow row;
    row.err.level = level;
    row.err.h = 1.0 / (1 << (level - 1));
    CgOptions cg;
    cg.rel_tol = cfg.rel_tol;
    cg.max_iter = cfg.max_iter;
    try {
      const LevelSolution s = solve_level(family, k, level, problem, cg, cfg.threads);
      row.err.free_dofs = s.disc->dofs.free_count;
      row.err.interp_dofs = s.disc->dofs.interpolated_count;
      row.err.ih = error_norms(s.ih, s.uh);
      row.err.true_err = error_norms(s.uh, problem);
      row.cg_iters = s.solve.stats.iterations;
      row.cg_residual = s.solve.stats.relative_residual;
      if (cfg.condition) row.cond = estimate_condition(s.system.A);
      if (!cfg.dump_dir.empty()) {
        std::filesystem::create_directories(cfg.dump_dir);
        const std::string stem = cfg.dump_dir + "/" + std::string(to_string(family)) + "_k" + std::to_string(k) +
                                 "_L" + std::to_string(level);
        std::ofstream mesh_out(stem + ".mesh");
        s.disc->mesh->write(mesh_out);
        std::ofstream mat_out(stem + ".coo");
        s.system.A.write_coo(mat_out);
        if (!mesh_out || !mat_out) throw std::runtime_error("cannot write dumps under " + cfg.dump_dir);
      }
    } catch (const SolveError& e) {
      row.cg_iters = e.stats().iterations;
      row.cg_residual = e.stats().relative_residual;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  fill_orders(rows);
  return rows;
}

}  // namespace

ConvergenceReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  ConvergenceReport r;
  r.config = config;
  r.rows = sweep(config, config.family, config.degree);
  if (config.compare) {
    r.baseline = baseline_for(config.family, config.degree);
    if (r.baseline) r.baseline_rows = sweep(config, r.baseline->family, r.baseline->degree);
  }
  return r;
}

void emit_report(const ConvergenceReport& r, OutputFormat format, const std::string& destination) {
  std::string text;
  switch (format) {
    case OutputFormat::Text: text = report_to_text(r); break;
    case OutputFormat::Csv: text = report_to_csv(r); break;
    case OutputFormat::Json: text = report_to_json(r); break;
  }
  if (destination.empty() || destination == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw std::runtime_error("failed to write report to stdout");
    return;
  }
  std::ofstream out(destination);
  out << text;
  out.close();
  if (!out) throw std::runtime_error("failed to write report to " + destination);
}

}  // namespace igfem
