#pragma once

// Metric fields given by expressions, their second-order jets at a point, and
// the builtin catalog.

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "cliffcheck/clifford.hpp"
#include "cliffcheck/expr.hpp"

namespace cliffcheck {

/// Deterministic uniform sampling on top of mt19937_64. The conversion to
/// doubles is done here so results do not depend on the standard library's
/// distribution implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

struct Box {
  Vec4 lo{-1.0, -1.0, -1.0, -1.0};
  Vec4 hi{1.0, 1.0, 1.0, 1.0};

  Vec4 sample(Rng& rng) const;
  Vec4 center() const;
  bool contains(const Vec4& x) const;
};

/// Expressions indexed by small integer tuples, read from the line format
///   name = ident
///   sym[i][j]... = expression
/// with '#' comments and blank lines ignored.
struct ExpressionTable {
  std::string name;
  std::map<std::vector<int>, Expression> entries;
};

/// Parses a table for one symbol with the given index extents. Offsets in
/// ParseError are byte offsets into `text`.
ExpressionTable parse_expression_table(std::string_view text, std::string_view symbol,
                                       const std::vector<int>& extents);

struct MetricSpec {
  std::string name;
  std::array<std::array<Expression, 4>, 4> g;  // symmetric
  Box box;

  bool diagonal() const;
};

/// Builds a spec from component expressions; entries with i > j are mirrored.
/// Giving both (i, j) and (j, i) with different expressions is an error.
MetricSpec make_metric_spec(std::string name, const std::map<std::pair<int, int>, Expression>& components,
                            const Box& box = {});
MetricSpec parse_metric_text(std::string_view text, const Box& box = {});
std::string format_metric(const MetricSpec& spec);

/// Metric value and coordinate derivatives at a point.
struct MetricJet {
  Vec4 x{};
  Mat4 g;
  std::array<Mat4, 4> dg;    // dg[nu](a, b) = d_nu g_ab
  std::array<Mat4, 16> ddg;  // ddg[mu * 4 + nu](a, b) = d_mu d_nu g_ab
  Mat4 g_inv;
  double omega = 0.0;  // sqrt(-det g)
  Vec4 domega{};

  const Mat4& second(int mu, int nu) const { return ddg[mu * 4 + nu]; }
  bool diagonal(double tol = 0.0) const;
};

MetricJet metric_jet(const MetricSpec& spec, const Vec4& x);
/// Second-order Taylor data of g at the jet's point as Jet2 entries.
Mat<Jet2, 4> metric_taylor(const MetricJet& mj);

// ---------------------------------------------------------------------------
// Builtin catalog

struct CatalogEntry {
  std::string name;
  std::string description;
};

std::vector<CatalogEntry> catalog();

/// Resolves "minkowski", "flrw", "schwarzschild-diagonal" (alias
/// "schwarzschild"), "diag-poly-random[:seed]", "nondiag-perturb[:seed]", or a
/// path to a metric file. Throws MetricNotFound.
MetricSpec resolve_metric(const std::string& ref, const Box* file_box = nullptr);

/// The thirteen metrics used by the algebra suite sweep.
std::vector<std::string> standard_metric_refs();
/// Diagonal members of the standard sweep.
std::vector<std::string> diagonal_metric_refs();

/// Random polynomial of degree <= 2 in (x - center) / half_width with
/// coefficients uniform in [-amplitude, amplitude].
Expression random_quadratic(Rng& rng, const Box& box, double amplitude = 1.0);
/// Same, in raw coordinates x.
Expression random_quadratic_raw(Rng& rng, double amplitude);

/// Samples a point in the box where `probe` does not throw a DomainError or a
/// metric-validity error; gives up after 100 attempts.
template <class F>
Vec4 sample_valid_point(Rng& rng, const Box& box, F probe) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    const Vec4 x = box.sample(rng);
    try {
      probe(x);
      return x;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DomainError && e.kind() != ErrorKind::SingularMetric &&
          e.kind() != ErrorKind::NonLorentzian)
        throw;
    }
  }
  throw Error(ErrorKind::DomainError, "no valid sample point found in 100 attempts");
}

}  // namespace cliffcheck
