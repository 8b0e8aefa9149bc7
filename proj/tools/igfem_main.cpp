#include <iostream>
#include <regex>
#include <thread>

#include "CLI11.hpp"
#include "igfem/experiment.hpp"

namespace {

enum ExitCode { kOk = 0, kConfigError = 2, kSolverFailure = 3 };

void parse_levels(const std::string& text, igfem::ExperimentConfig& cfg) {
  static const std::regex range(R"(\s*(\d+)\s*(?:\.\.\s*(\d+))?\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, range)) throw igfem::ConfigError("--levels expects A..B or a single level, got '" + text + "'");
  cfg.level_min = std::stoi(m[1]);
  cfg.level_max = m[2].matched ? std::stoi(m[2]) : cfg.level_min;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convergence studies for interpolated Galerkin finite elements on criss-cross grids"};
  std::string family = "p2c_interp";
  int degree = 0;
  std::string levels = "4..7";
  std::string problem = "sine";
  std::string format = "text";
  std::string out;
  bool compare = false;
  bool condition = false;
  double tol = 1e-13;
  int max_iter = 0;
  bool parallel = false;
  std::string dump_dir;

  app.add_option("--family", family, "p2c_interp | p2nc_interp | p2nc_std | p3_interp | pk_interp | pk_lagrange")
      ->capture_default_str();
  app.add_option("--degree", degree, "polynomial degree (defaults to 2, 3 or 4 by family)");
  app.add_option("--levels", levels, "level range A..B (level l has 2^(l-1) squares per side)")->capture_default_str();
  app.add_option("--problem", problem, "manufactured problem")->capture_default_str();
  app.add_option("--format", format, "text | csv | json")->capture_default_str();
  app.add_option("--out", out, "output file (stdout by default)");
  app.add_flag("--compare", compare, "also run the standard baseline element");
  app.add_flag("--condition", condition, "estimate extreme eigenvalues of each system");
  app.add_option("--tol", tol, "CG relative residual tolerance")->capture_default_str();
  app.add_option("--max-iter", max_iter, "CG iteration cap (0: 20 x unknowns)");
  app.add_flag("--parallel", parallel, "build and assemble elements on all hardware threads");
  app.add_option("--dump-dir", dump_dir, "write each level's mesh and matrix (COO) here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  igfem::ExperimentConfig cfg;
  try {
    const auto fam = igfem::family_from_string(family);
    if (!fam) throw igfem::ConfigError("unknown family '" + family + "'");
    cfg.family = *fam;
    if (degree == 0) degree = cfg.family == igfem::Family::P3Interp ? 3 : (cfg.family == igfem::Family::PkInterp ? 4 : 2);
    cfg.degree = degree;
    parse_levels(levels, cfg);
    cfg.problem = problem;
    const auto fmt = igfem::format_from_string(format);
    if (!fmt) throw igfem::ConfigError("unknown format '" + format + "'");
    cfg.format = *fmt;
    cfg.compare = compare;
    cfg.condition = condition;
    cfg.rel_tol = tol;
    cfg.max_iter = max_iter;
    cfg.threads = parallel ? std::max(1u, std::thread::hardware_concurrency()) : 1;
    cfg.dump_dir = dump_dir;
    cfg.validate();
  } catch (const igfem::ConfigError& e) {
    std::cerr << "igfem: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    const igfem::ConvergenceReport report = igfem::run_experiment(cfg);
    igfem::emit_report(report, cfg.format, out);
    if (!report.all_ok()) {
      std::cerr << "igfem: at least one level failed to solve\n";
      return kSolverFailure;
    }
  } catch (const igfem::ConfigError& e) {
    std::cerr << "igfem: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "igfem: " << e.what() << '\n';
    return 1;
  }
  return kOk;
}
