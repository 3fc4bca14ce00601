#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "cliffcheck/suite.hpp"

namespace cliffcheck {
namespace {

SuiteConfig config(const std::string& suite, const std::string& metric, int points, std::uint64_t seed = 1) {
  SuiteConfig c;
  c.suite = suite;
  c.metric = metric;
  c.points = points;
  c.seed = seed;
  return c;
}

bool has_row(const Report& r, const std::string& name) {
  for (const auto& p : r.results)
    for (const auto& c : p.checks)
      if (c.name == name) return true;
  return false;
}

TEST(Suite, MinkowskiAllPassesNearZero) {
  const Report r = run_suite(config("all", "minkowski", 2));
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.fail, 0);
  for (const auto& p : r.results)
    for (const auto& c : p.checks) {
      if (c.name.find(">=") != std::string::npos) continue;
      EXPECT_LT(c.err, 1e-9) << c.name;
    }
}

TEST(Suite, VariationalRowsOnFlrw) {
  const Report r = run_suite(config("variational", "flrw", 1));
  EXPECT_TRUE(has_row(r, "variational/L_g=-8omegaR"));
  EXPECT_TRUE(has_row(r, "variational/P=0"));
  EXPECT_TRUE(has_row(r, "variational/Q-numeric=closed-form"));
  EXPECT_TRUE(r.ok());
  for (const auto& c : r.results[0].checks)
    if (c.name == "variational/gravity-variation=-8omegaG-as-stated") EXPECT_TRUE(c.exploratory);
}

TEST(Suite, NonDiagonalRowsAreExploratory) {
  const Report r = run_suite(config("geometry", "nondiag-perturb:1", 2));
  EXPECT_GT(r.exploratory, 0);
  EXPECT_TRUE(r.ok());
  for (const auto& p : r.results)
    for (const auto& c : p.checks)
      if (c.name == "geometry/trace-gamma-gamma-omega=-8R") EXPECT_TRUE(c.exploratory);
}

TEST(Suite, ChecksSortedWithinPoint) {
  const Report r = run_suite(config("all", "flrw", 2, 5));
  for (const auto& p : r.results)
    for (std::size_t i = 1; i < p.checks.size(); ++i) EXPECT_LE(p.checks[i - 1].name, p.checks[i].name);
}

TEST(Suite, JsonIsDeterministicAndShaped) {
  const SuiteConfig c = config("all", "diag-poly-random:2", 2, 9);
  const std::string a = to_json(run_suite(c)).dump(2), b = to_json(run_suite(c)).dump(2);
  EXPECT_EQ(a, b);
  const auto j = nlohmann::json::parse(a);
  EXPECT_EQ(j["version"], kVersion);
  EXPECT_EQ(j["config"]["metric"], "diag-poly-random:2");
  ASSERT_EQ(j["results"].size(), 2u);
  EXPECT_EQ(j["results"][0]["point"].size(), 4u);
  const auto& row = j["results"][0]["checks"][0];
  for (const char* k : {"name", "err", "tol", "pass", "exploratory"}) EXPECT_TRUE(row.contains(k)) << k;
  for (const char* k : {"pass", "fail", "exploratory"}) EXPECT_TRUE(j["summary"].contains(k)) << k;
  EXPECT_NE(a, to_json(run_suite(config("all", "diag-poly-random:2", 2, 10))).dump(2));
}

TEST(Suite, TolOverridesUpperThresholdsOnly) {
  SuiteConfig c = config("geometry", "flrw", 1);
  c.tol = 1e-300;
  const Report r = run_suite(c);
  EXPECT_FALSE(r.ok());
  for (const auto& ch : r.results[0].checks) {
    if (ch.name == "geometry/spin-connection-ghat-defect>=") {
      EXPECT_EQ(ch.tol, 1e-3);
      EXPECT_TRUE(ch.pass);
    } else {
      EXPECT_EQ(ch.tol, 1e-300) << ch.name;
    }
  }
}

TEST(Suite, RejectsBadConfig) {
  try {
    run_suite(config("nope", "minkowski", 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
  }
  try {
    run_suite(config("all", "minkowski", 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
  }
  try {
    run_suite(config("all", "missing-metric", 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MetricNotFound);
  }
}

TEST(Eval, Examples) {
  EXPECT_EQ(std::stod(eval_quantity("minkowski", "scalar-curvature", {0.3, 0.1, -0.2, 0.5})), 0.0);
  EXPECT_EQ(std::stod(eval_quantity("flrw", "omega", {2, 0, 0, 0})), 8.0);
  EXPECT_LT(std::abs(std::stod(eval_quantity("schwarzschild", "scalar-curvature", {0, 4, 1, 0}))), 1e-8);
  for (const auto& q : quantity_names()) EXPECT_FALSE(eval_quantity("flrw", q, {1.5, 0, 0, 0}).empty()) << q;
}

TEST(ErrorMeasures, ScaledAndRelative) {
  Mat4 a = Mat4::identity(), b = Mat4::identity();
  b(0, 0) = 1.0 + 1e-12;
  EXPECT_NEAR(scaled_error(a, b), 1e-12, 1e-15);
  a(1, 1) = b(1, 1) = 1e6;
  EXPECT_NEAR(scaled_error(a, b), 1e-18, 1e-21);
  EXPECT_EQ(relative_error(0.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(relative_error(2.0, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(relative_error(1e-3, 0.0, 1.0), 1e-3);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CLIFFCHECK_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

TEST(Cli, ExitStatusContract) {
  EXPECT_EQ(run_cli("check --suite algebra --metric minkowski --points 2 --seed 3"), 0);
  EXPECT_EQ(run_cli("check --suite algebra --metric flrw --points 1 --tol 1e-300"), 1);
  EXPECT_EQ(run_cli("check --suite geometry --metric nondiag-perturb:2 --points 2"), 0);
  EXPECT_EQ(run_cli("check --suite algebra --metric no-such-metric --points 1"), 2);
  EXPECT_EQ(run_cli("eval --metric flrw --quantity omega --point 2,0,0"), 2);
  EXPECT_EQ(run_cli("metrics list"), 0);
}

TEST(Cli, JsonFilesAreByteIdentical) {
  const std::string a = ::testing::TempDir() + "cliffcheck_a.json", b = ::testing::TempDir() + "cliffcheck_b.json";
  ASSERT_EQ(run_cli("check --suite transforms --metric flrw --points 2 --seed 4 --json " + a), 0);
  ASSERT_EQ(run_cli("check --suite transforms --metric flrw --points 2 --seed 4 --json " + b), 0);
  const std::string ja = slurp(a);
  EXPECT_FALSE(ja.empty());
  EXPECT_EQ(ja, slurp(b));
  std::remove(a.c_str());
  std::remove(b.c_str());
}

}  // namespace
}  // namespace cliffcheck
