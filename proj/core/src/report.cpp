#include <cmath>
#include <cstdio>
#include <sstream>

#include "igfem/experiment.hpp"
#include "json.hpp"

namespace igfem {

using nlohmann::json;

std::string format_sci(double v) {
  if (!std::isfinite(v)) return v != v ? "NaN" : (v > 0 ? "Inf" : "-Inf");
  if (v == 0.0) return "0.000E+00";
  const double a = std::abs(v);
  int e = static_cast<int>(std::floor(std::log10(a))) + 1;
  double m = std::round(a / std::pow(10.0, e) * 1000.0) / 1000.0;
  if (m >= 1.0) {
    m /= 10.0;
    ++e;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%.3fE%c%02d", v < 0 ? "-" : "", m, e < 0 ? '-' : '+', std::abs(e));
  return buf;
}

std::string format_order(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", *v);
  return buf;
}

namespace {

std::string family_label(Family f, int k) {
  return std::string(to_string(f)) + " k=" + std::to_string(polynomial_degree(f, k));
}

void text_table(std::ostringstream& os, const std::string& title, const std::vector<ReportRow>& rows) {
  os << "# " << title << '\n';
  char line[256];
  std::snprintf(line, sizeof line, "%5s %8s %8s %10s %5s %10s %5s %10s %10s %6s\n", "level", "free", "interp",
                "|e_h|_0", "h^n", "|e_h|_1", "h^n", "|u-u_h|_0", "|u-u_h|_1", "cg");
  os << line;
  for (const auto& r : rows) {
    if (!r.ok()) {
      std::snprintf(line, sizeof line, "%5d  FAILED: ", r.err.level);
      os << line << r.error << '\n';
      continue;
    }
    const auto& e = r.err;
    std::snprintf(line, sizeof line, "%5d %8d %8d %10s %5s %10s %5s %10s %10s %6d\n", e.level, e.free_dofs,
                  e.interp_dofs, format_sci(e.ih.l2).c_str(), format_order(e.order_l2).c_str(),
                  format_sci(e.ih.h1).c_str(), format_order(e.order_h1).c_str(), format_sci(e.true_err.l2).c_str(),
                  format_sci(e.true_err.h1).c_str(), r.cg_iters);
    os << line;
  }
  bool any_cond = false;
  for (const auto& r : rows) any_cond = any_cond || r.cond.has_value();
  if (!any_cond) return;
  os << "# condition estimates\n";
  std::snprintf(line, sizeof line, "%5s %12s %12s %12s %5s\n", "level", "lambda_max", "lambda_min", "condition", "null");
  os << line;
  for (const auto& r : rows) {
    if (!r.cond) continue;
    std::snprintf(line, sizeof line, "%5d %12.5e %12.5e %12.5e %5d%s\n", r.err.level, r.cond->lambda_max,
                  r.cond->lambda_min, r.cond->condition, r.cond->null_dimension,
                  r.cond->max_converged && r.cond->min_converged ? "" : "  (not converged)");
    os << line;
  }
}

json opt_to_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> opt_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

json row_to_json(const ReportRow& r) {
  const auto& e = r.err;
  json j = {{"level", e.level},
            {"h", e.h},
            {"free_dofs", e.free_dofs},
            {"interp_dofs", e.interp_dofs},
            {"l2_ih", e.ih.l2},
            {"h1_ih", e.ih.h1},
            {"l2_true", e.true_err.l2},
            {"h1_true", e.true_err.h1},
            {"order_l2", opt_to_json(e.order_l2)},
            {"order_h1", opt_to_json(e.order_h1)},
            {"cg_iters", r.cg_iters},
            {"cg_residual", r.cg_residual}};
  if (r.cond)
    j["cond_est"] = {{"lambda_max", r.cond->lambda_max},       {"lambda_min", r.cond->lambda_min},
                     {"condition", r.cond->condition},         {"null_dimension", r.cond->null_dimension},
                     {"max_converged", r.cond->max_converged}, {"min_converged", r.cond->min_converged}};
  if (!r.ok()) j["error"] = r.error;
  return j;
}

ReportRow row_from_json(const json& j) {
  ReportRow r;
  auto& e = r.err;
  e.level = j.at("level").get<int>();
  e.h = j.at("h").get<double>();
  e.free_dofs = j.at("free_dofs").get<int>();
  e.interp_dofs = j.at("interp_dofs").get<int>();
  e.ih = {j.at("l2_ih").get<double>(), j.at("h1_ih").get<double>()};
  e.true_err = {j.at("l2_true").get<double>(), j.at("h1_true").get<double>()};
  e.order_l2 = opt_from_json(j.at("order_l2"));
  e.order_h1 = opt_from_json(j.at("order_h1"));
  r.cg_iters = j.at("cg_iters").get<int>();
  r.cg_residual = j.at("cg_residual").get<double>();
  if (j.contains("cond_est")) {
    const json& c = j.at("cond_est");
    ConditionEstimate ce;
    ce.lambda_max = c.at("lambda_max").get<double>();
    ce.lambda_min = c.at("lambda_min").get<double>();
    ce.condition = c.at("condition").get<double>();
    ce.null_dimension = c.at("null_dimension").get<int>();
    ce.max_converged = c.at("max_converged").get<bool>();
    ce.min_converged = c.at("min_converged").get<bool>();
    r.cond = ce;
  }
  if (j.contains("error")) r.error = j.at("error").get<std::string>();
  return r;
}

void csv_rows(std::ostringstream& os, const std::string& series, Family f, int k, const std::vector<ReportRow>& rows) {
  os.precision(17);
  for (const auto& r : rows) {
    const auto& e = r.err;
    auto opt = [](const std::optional<double>& v) {
      std::ostringstream s;
      s.precision(17);
      if (v) s << *v;
      return s.str();
    };
    os << series << ',' << to_string(f) << ',' << polynomial_degree(f, k) << ',' << e.level << ',' << e.h << ','
       << e.free_dofs << ',' << e.interp_dofs << ',' << e.ih.l2 << ',' << e.ih.h1 << ',' << e.true_err.l2 << ','
       << e.true_err.h1 << ',' << opt(e.order_l2) << ',' << opt(e.order_h1) << ',' << r.cg_iters << ','
       << opt(r.cond ? std::optional<double>(r.cond->condition) : std::nullopt) << ',' << (r.ok() ? "ok" : "failed") << '\n';
  }
}

}  // namespace

std::string report_to_text(const ConvergenceReport& r) {
  std::ostringstream os;
  const auto& c = r.config;
  os << "# problem=" << c.problem << " levels=" << c.level_min << ".." << c.level_max << " tol=" << c.rel_tol << '\n';
  text_table(os, family_label(c.family, c.degree), r.rows);
  if (r.baseline) {
    os << '\n';
    text_table(os, family_label(r.baseline->family, r.baseline->degree) + " (baseline)", r.baseline_rows);
  }
  return os.str();
}

std::string report_to_csv(const ConvergenceReport& r) {
  std::ostringstream os;
  os << "series,family,degree,level,h,free_dofs,interp_dofs,l2_ih,h1_ih,l2_true,h1_true,order_l2,order_h1,cg_iters,"
        "cond_est,status\n";
  csv_rows(os, "primary", r.config.family, r.config.degree, r.rows);
  if (r.baseline) csv_rows(os, "baseline", r.baseline->family, r.baseline->degree, r.baseline_rows);
  return os.str();
}

std::string report_to_json(const ConvergenceReport& r) {
  const auto& c = r.config;
  json j;
  j["config"] = {{"family", to_string(c.family)},
                 {"degree", c.degree},
                 {"levels", {c.level_min, c.level_max}},
                 {"problem", c.problem},
                 {"rel_tol", c.rel_tol},
                 {"max_iter", c.max_iter},
                 {"format", to_string(c.format)},
                 {"compare", c.compare},
                 {"condition", c.condition},
                 {"threads", c.threads},
                 {"dump_dir", c.dump_dir}};
  j["rows"] = json::array();
  for (const auto& row : r.rows) j["rows"].push_back(row_to_json(row));
  if (r.baseline) {
    j["baseline"] = {{"family", to_string(r.baseline->family)}, {"degree", r.baseline->degree}};
    j["baseline_rows"] = json::array();
    for (const auto& row : r.baseline_rows) j["baseline_rows"].push_back(row_to_json(row));
  }
  return j.dump(2) + "\n";
}

ConvergenceReport report_from_json(const std::string& text) {
  const json j = json::parse(text);
  ConvergenceReport r;
  const json& c = j.at("config");
  auto fam = [](const json& v) {
    const auto f = family_from_string(v.get<std::string>());
    if (!f) throw std::invalid_argument("unknown family in report: " + v.get<std::string>());
    return *f;
  };
  r.config.family = fam(c.at("family"));
  r.config.degree = c.at("degree").get<int>();
  r.config.level_min = c.at("levels").at(0).get<int>();
  r.config.level_max = c.at("levels").at(1).get<int>();
  r.config.problem = c.at("problem").get<std::string>();
  r.config.rel_tol = c.at("rel_tol").get<double>();
  r.config.max_iter = c.at("max_iter").get<int>();
  const auto fmt = format_from_string(c.at("format").get<std::string>());
  if (!fmt) throw std::invalid_argument("unknown format in report");
  r.config.format = *fmt;
  r.config.compare = c.at("compare").get<bool>();
  r.config.condition = c.at("condition").get<bool>();
  r.config.threads = c.at("threads").get<int>();
  r.config.dump_dir = c.value("dump_dir", std::string());
  for (const auto& row : j.at("rows")) r.rows.push_back(row_from_json(row));
  if (j.contains("baseline")) {
    r.baseline = Baseline{fam(j["baseline"].at("family")), j["baseline"].at("degree").get<int>()};
    for (const auto& row : j.at("baseline_rows")) r.baseline_rows.push_back(row_from_json(row));
  }
  return r;
}

}  // namespace igfem
