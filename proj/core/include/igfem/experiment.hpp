#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "igfem/analysis.hpp"
#include "igfem/elements.hpp"
#include "igfem/solver.hpp"

namespace igfem {

enum class OutputFormat { Text, Csv, Json };

std::string_view to_string(OutputFormat f);
std::optional<OutputFormat> format_from_string(std::string_view s);

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

constexpr int kMaxLevel = 9;

struct ExperimentConfig {
  Family family = Family::P2ConformingInterp;
  int degree = 2;
  int level_min = 1;
  int level_max = 4;
  std::string problem = "sine";
  double rel_tol = 1e-13;
  int max_iter = 0;  // 0 means 20 * free DOFs
  OutputFormat format = OutputFormat::Text;
  bool compare = false;
  bool condition = false;
  int threads = 1;
  /// When non-empty, each level's mesh and matrix are written here.
  std::string dump_dir;

  /// Throws ConfigError on inconsistent settings.
  void validate() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Standard method the interpolated family is compared against.
struct Baseline {
  Family family;
  int degree;
};
std::optional<Baseline> baseline_for(Family family, int k);

struct ReportRow {
  ErrorRecord err;
  int cg_iters = 0;
  double cg_residual = 0.0;
  std::optional<ConditionEstimate> cond;
  /// Non-empty when the level failed (its norms are then meaningless).
  std::string error;

  bool ok() const { return error.empty(); }
  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct ConvergenceReport {
  ExperimentConfig config;
  std::vector<ReportRow> rows;
  std::optional<Baseline> baseline;
  std::vector<ReportRow> baseline_rows;

  bool all_ok() const;
  friend bool operator==(const ConvergenceReport& a, const ConvergenceReport& b);
};

inline bool operator==(const Baseline& a, const Baseline& b) { return a.family == b.family && a.degree == b.degree; }
inline bool operator==(const ConvergenceReport& a, const ConvergenceReport& b) {
  return a.config == b.config && a.rows == b.rows && a.baseline == b.baseline && a.baseline_rows == b.baseline_rows;
}

/// Everything computed for one discretization level.
struct LevelSolution {
  std::shared_ptr<const Discretization> disc;
  SparseSystem system;
  SolveResult solve;
  FeFunction uh;
  FeFunction ih;
};

/// Builds, assembles and solves one level. Throws SolveError on CG failure.
LevelSolution solve_level(Family family, int k, int level, const Problem& problem, const CgOptions& cg, int threads = 1);

/// Runs the level sweep; a failing level is recorded and the sweep continues.
ConvergenceReport run_experiment(const ExperimentConfig& config);

// ---- reporting -----------------------------------------------------------------

/// Fixed-mantissa exponent form, e.g. 0.614E-03 (three significant digits).
std::string format_sci(double v);
/// Order with one decimal, "-" when undefined.
std::string format_order(const std::optional<double>& v);

std::string report_to_text(const ConvergenceReport& r);
std::string report_to_csv(const ConvergenceReport& r);
std::string report_to_json(const ConvergenceReport& r);
ConvergenceReport report_from_json(const std::string& text);

/// Writes the report to `destination`, or stdout when it is empty or "-".
void emit_report(const ConvergenceReport& r, OutputFormat format, const std::string& destination);

}  // namespace igfem
