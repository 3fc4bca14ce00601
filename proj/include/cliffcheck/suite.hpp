#pragma once

// Identity suites run at seeded random points of a metric, with reports.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cliffcheck/coupling.hpp"

namespace cliffcheck {

inline constexpr const char* kVersion = "0.1.0";

struct CheckResult {
  std::string name;
  double err = 0.0;
  double tol = 0.0;
  bool pass = false;
  bool exploratory = false;
};

struct PointResult {
  Vec4 x{};
  std::vector<CheckResult> checks;
};

struct SuiteConfig {
  std::string suite = "all";  // algebra | geometry | transforms | variational | coupling | all
  std::string metric = "minkowski";
  int points = 20;
  std::uint64_t seed = 1;
  /// Replaces every check's default threshold when set.
  std::optional<double> tol;
  /// Sampling box for metric files; builtin metrics use their own.
  std::optional<Box> box;
};

struct Report {
  SuiteConfig config;
  std::vector<PointResult> results;
  int pass = 0;
  int fail = 0;
  int exploratory = 0;

  /// True iff no non-exploratory check failed.
  bool ok() const { return fail == 0; }
  /// Largest error among rows whose name starts with `prefix`, and whether
  /// all such gating rows passed.
  double worst(const std::string& prefix) const;
  bool all_pass(const std::string& prefix) const;
  std::size_t count(const std::string& prefix) const;
};

const std::vector<std::string>& suite_names();

/// Throws MetricNotFound, ParseError, InvalidArgument for unknown suites or
/// bad counts, and DomainError when no valid point is found.
Report run_suite(const SuiteConfig& cfg);

nlohmann::ordered_json to_json(const Report& report);
std::string format_text(const Report& report);

/// Quantities: scalar-curvature, einstein, omega, extended-christoffel,
/// extended-curvature-trace, lagrangian-densities, q-tensor.
const std::vector<std::string>& quantity_names();
std::string eval_quantity(const std::string& metric, const std::string& quantity, const Vec4& x,
                          const Box* file_box = nullptr);

// Error measures used by the suites.

/// max |a - b| / max(1, max |a|, max |b|): absolute for entries of order one,
/// relative to the largest entry otherwise.
template <class M>
double scaled_error(const M& a, const M& b) {
  return max_abs(a - b) / std::max({1.0, max_abs(a), max_abs(b)});
}

/// |a - b| / max(|a|, |b|, floor); zero when both vanish.
double relative_error(double a, double b, double floor = 0.0);

}  // namespace cliffcheck
