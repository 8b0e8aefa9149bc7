#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "igfem/experiment.hpp"

using namespace igfem;

namespace {

ExperimentConfig small_config(Family f = Family::P3Interp, int k = 3) {
  ExperimentConfig c;
  c.family = f;
  c.degree = k;
  c.level_min = 1;
  c.level_max = 3;
  return c;
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char ch : s) n += ch == '\n';
  return n;
}

}  // namespace

TEST(FormatSci, Examples) {
  EXPECT_EQ(format_sci(0.000614), "0.614E-03");
  EXPECT_EQ(format_sci(0.0499), "0.499E-01");
  EXPECT_EQ(format_sci(1.0), "0.100E+01");
  EXPECT_EQ(format_sci(0.99960), "0.100E+01");
  EXPECT_EQ(format_sci(123.4), "0.123E+03");
  EXPECT_EQ(format_sci(-0.0025), "-0.250E-02");
  EXPECT_EQ(format_sci(0.0), "0.000E+00");
  EXPECT_EQ(format_sci(1.18e-10), "0.118E-09");
  EXPECT_EQ(format_order(std::nullopt), "-");
  EXPECT_EQ(format_order(3.14), "3.1");
}

TEST(Config, Validation) {
  EXPECT_NO_THROW(small_config().validate());
  auto bad = small_config();
  bad.level_max = 10;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = small_config();
  bad.level_min = 4;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = small_config(Family::PkInterp, 3);
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = small_config();
  bad.problem = "nope";
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = small_config();
  bad.rel_tol = 0.0;
  EXPECT_THROW(bad.validate(), ConfigError);
  EXPECT_THROW(run_experiment(bad), ConfigError);
  EXPECT_EQ(format_from_string("csv"), OutputFormat::Csv);
  EXPECT_FALSE(format_from_string("xml").has_value());
}

TEST(Baselines, Pairing) {
  EXPECT_EQ(baseline_for(Family::P2ConformingInterp, 2)->family, Family::PkLagrange);
  EXPECT_EQ(baseline_for(Family::P2NonconformingInterp, 2)->family, Family::P2NonconformingStd);
  EXPECT_EQ(baseline_for(Family::PkInterp, 5)->degree, 5);
  EXPECT_FALSE(baseline_for(Family::PkLagrange, 3).has_value());
}

TEST(Experiment, RowsAndOrders) {
  const ConvergenceReport r = run_experiment(small_config());
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_TRUE(r.all_ok());
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    EXPECT_EQ(r.rows[i].err.level, static_cast<int>(i) + 1);
    EXPECT_DOUBLE_EQ(r.rows[i].err.h, 1.0 / (1 << i));
    EXPECT_EQ(r.rows[i].err.order_l2.has_value(), i > 0);
  }
  EXPECT_EQ(r.rows[1].err.free_dofs, 45);
  EXPECT_EQ(r.rows[1].err.interp_dofs, 16);
  EXPECT_FALSE(r.baseline.has_value());
}

TEST(Experiment, SerialRunsAreByteIdentical) {
  auto c = small_config();
  c.compare = true;
  c.condition = true;
  const ConvergenceReport a = run_experiment(c);
  const ConvergenceReport b = run_experiment(c);
  EXPECT_EQ(report_to_json(a), report_to_json(b));
  EXPECT_EQ(report_to_text(a), report_to_text(b));
  EXPECT_EQ(report_to_csv(a), report_to_csv(b));
  c.threads = 4;
  const ConvergenceReport p = run_experiment(c);
  EXPECT_EQ(p.rows, a.rows);
}

TEST(Experiment, CompareFlagDoesNotAlterPrimaryRows) {
  auto c = small_config(Family::P2NonconformingInterp, 2);
  const ConvergenceReport plain = run_experiment(c);
  c.compare = true;
  const ConvergenceReport cmp = run_experiment(c);
  EXPECT_EQ(plain.rows, cmp.rows);
  ASSERT_TRUE(cmp.baseline.has_value());
  EXPECT_EQ(cmp.baseline->family, Family::P2NonconformingStd);
  EXPECT_EQ(cmp.baseline_rows.size(), 3u);
}

TEST(Experiment, FailingLevelIsRecordedAndSweepContinues) {
  auto c = small_config(Family::PkLagrange, 3);
  c.level_min = 2;
  c.max_iter = 1;
  const ConvergenceReport r = run_experiment(c);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_FALSE(r.all_ok());
  for (const auto& row : r.rows) {
    EXPECT_FALSE(row.ok());
    EXPECT_EQ(row.cg_iters, 1);
    EXPECT_FALSE(row.err.order_l2.has_value());
  }
  EXPECT_NE(report_to_text(r).find("FAILED"), std::string::npos);
  EXPECT_NE(report_to_csv(r).find(",failed"), std::string::npos);
}

TEST(Report, JsonRoundTrip) {
  auto c = small_config(Family::P2ConformingInterp, 2);
  c.compare = true;
  c.condition = true;
  c.level_min = 2;
  const ConvergenceReport r = run_experiment(c);
  const std::string json = report_to_json(r);
  EXPECT_EQ(report_from_json(json), r);
  EXPECT_EQ(report_to_json(report_from_json(json)), json);
  for (const char* key : {"\"config\"", "\"rows\"", "\"baseline_rows\"", "\"l2_ih\"", "\"h1_true\"", "\"cond_est\"",
                          "\"order_l2\"", "\"cg_iters\""})
    EXPECT_NE(json.find(key), std::string::npos) << key;
}

TEST(Report, EmptyReport) {
  ConvergenceReport r;
  r.config = small_config();
  EXPECT_EQ(report_from_json(report_to_json(r)), r);
  EXPECT_EQ(count_lines(report_to_csv(r)), 1);
  EXPECT_NE(report_to_text(r).find("level"), std::string::npos);
}

TEST(Report, CsvHasOneRowPerLevel) {
  auto c = small_config();
  EXPECT_EQ(count_lines(report_to_csv(run_experiment(c))), 3 + 1);
  c.compare = true;
  EXPECT_EQ(count_lines(report_to_csv(run_experiment(c))), 6 + 1);
}

TEST(Report, TextHasErrorAndOrderColumns) {
  const std::string text = report_to_text(run_experiment(small_config()));
  EXPECT_NE(text.find("p3_interp k=3"), std::string::npos);
  EXPECT_NE(text.find("E-0"), std::string::npos);
  EXPECT_EQ(count_lines(text), 2 + 1 + 3);
}

TEST(Report, EmitWritesFileAndReportsBadPath) {
  const ConvergenceReport r = run_experiment(small_config());
  const auto dir = std::filesystem::temp_directory_path() / "igfem_emit_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "r.json").string();
  emit_report(r, OutputFormat::Json, path);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), report_to_json(r));
  const std::string bad = (dir / "missing" / "x.csv").string();
  try {
    emit_report(r, OutputFormat::Csv, bad);
    FAIL() << "expected an I/O error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find(bad), std::string::npos);
  }
  std::filesystem::remove_all(dir);
}

TEST(Report, DumpDirReceivesMeshAndMatrix) {
  auto c = small_config();
  c.level_max = 2;
  const auto dir = std::filesystem::temp_directory_path() / "igfem_dump_test";
  std::filesystem::remove_all(dir);
  c.dump_dir = dir.string();
  run_experiment(c);
  EXPECT_TRUE(std::filesystem::exists(dir / "p3_interp_k3_L2.mesh"));
  EXPECT_TRUE(std::filesystem::exists(dir / "p3_interp_k3_L2.coo"));
  std::ifstream coo(dir / "p3_interp_k3_L2.coo");
  int n = 0;
  coo >> n;
  EXPECT_EQ(n, 45);
  std::filesystem::remove_all(dir);
}
