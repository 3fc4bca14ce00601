#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <string>

#include "cliffcheck/metric.hpp"

namespace cliffcheck {
namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidArgument;
}

TEST(Parser, PrecedenceOfSumAndPower) {
  const Expression e = parse_expression("x0^2 + sin(x1)");
  ASSERT_EQ(e.kind(), NodeKind::Add);
  EXPECT_EQ(e.lhs().kind(), NodeKind::Pow);
  EXPECT_EQ(e.lhs().lhs().variable_index(), 0);
  EXPECT_EQ(e.lhs().rhs().number_value(), 2.0);
  ASSERT_EQ(e.rhs().kind(), NodeKind::Call);
  EXPECT_EQ(e.rhs().function(), Function::Sin);
  EXPECT_EQ(e.rhs().lhs().variable_index(), 1);
}

TEST(Parser, UnaryMinusBindsLooserThanPower) {
  const Expression e = parse_expression("-x0^2");
  ASSERT_EQ(e.kind(), NodeKind::Neg);
  EXPECT_EQ(e.lhs().kind(), NodeKind::Pow);
  EXPECT_EQ(eval_jet(e, {3, 0, 0, 0}).v, -9.0);
  EXPECT_EQ(eval_jet(parse_expression("2^-1"), {0, 0, 0, 0}).v, 0.5);
  EXPECT_EQ(eval_jet(parse_expression("2^3^2"), {0, 0, 0, 0}).v, 512.0);
  EXPECT_EQ(eval_jet(parse_expression("8/4/2"), {0, 0, 0, 0}).v, 1.0);
  EXPECT_EQ(eval_jet(parse_expression("1-2-3"), {0, 0, 0, 0}).v, -4.0);
}

TEST(Parser, ErrorOffsets) {
  try {
    parse_expression("2*");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 2u);
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    EXPECT_FALSE(e.expected().empty());
  }
  try {
    parse_expression("x0 + y");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 5u);
  }
  try {
    parse_expression("(x1");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 3u);
  }
  EXPECT_EQ(kind_of([] { parse_expression("x4"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_expression("foo(x0)"); }), ErrorKind::ParseError);
}

TEST(Parser, PrintParseRoundTrip) {
  const char* cases[] = {"x0^2 + sin(x1)", "-x0^2",  "2^-1", "(x0 - x1) * (x2 + 3.25e-3)", "-(x0 + 1)^3",
                         "exp(x0 * x1) / sqrt(1 + x2^2)", "x0 - (x1 - x2)", "1 / (x0 / x1)", "(-x0)^2",
                         "cosh(tanh(x3)) - log(2 + x0)", "-(-x1)", "0.1 + 1e300"};
  for (const char* text : cases) {
    const Expression e = parse_expression(text);
    const Expression back = parse_expression(e.to_string());
    EXPECT_TRUE(e == back) << text << " -> " << e.to_string();
    EXPECT_EQ(back.to_string(), e.to_string());
  }
}

TEST(Parser, RandomQuadraticsRoundTrip) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Expression e = random_quadratic(rng, Box{}, 1.0);
    const Expression back = parse_expression(e.to_string());
    ASSERT_TRUE(e == back) << e.to_string();
    const Vec4 x{0.1, -0.2, 0.3, 0.7};
    EXPECT_EQ(eval_jet(e, x).v, eval_jet(back, x).v);
  }
}

TEST(EvalJet, PowerAndSine) {
  const Jet2 a = eval_jet(parse_expression("x0^2"), {3, 0, 0, 0});
  EXPECT_EQ(a.v, 9.0);
  EXPECT_EQ(a.d[0], 6.0);
  EXPECT_EQ(a.hess(0, 0), 2.0);
  const Jet2 b = eval_jet(parse_expression("sin(x1)"), {0, 0, 0, 0});
  EXPECT_EQ(b.v, 0.0);
  EXPECT_EQ(b.d[1], 1.0);
  EXPECT_EQ(b.hess(1, 1), 0.0);
}

// Central differences of the value for the gradient, and of the value along
// (e_i +- e_j) for the Hessian.
void expect_matches_finite_differences(const std::string& text, const Vec4& x, double tol) {
  const Expression e = parse_expression(text);
  const Jet2 j = eval_jet(e, x);
  auto f = [&](const Vec4& y) { return eval_jet(e, y).v; };
  const double h = 1e-4;
  for (int i = 0; i < 4; ++i) {
    Vec4 p = x, m = x;
    p[i] += h;
    m[i] -= h;
    EXPECT_NEAR(j.d[i], (f(p) - f(m)) / (2 * h), tol) << text << " d" << i;
    for (int k = 0; k < 4; ++k) {
      Vec4 pp = x, pm = x, mp = x, mm = x;
      pp[i] += h, pp[k] += h;
      pm[i] += h, pm[k] -= h;
      mp[i] -= h, mp[k] += h;
      mm[i] -= h, mm[k] -= h;
      const double fd = (f(pp) - f(pm) - f(mp) + f(mm)) / (4 * h * h);
      EXPECT_NEAR(j.hess(i, k), fd, tol) << text << " h" << i << k;
    }
  }
}

TEST(EvalJet, MatchesFiniteDifferences) {
  expect_matches_finite_differences("exp(x0*x1)", {1, 1, 0, 0}, 1e-6);
  expect_matches_finite_differences("x0^x1 + cos(x2) * tan(x3)", {1.3, 0.7, 0.2, 0.4}, 1e-6);
  expect_matches_finite_differences("log(x0) / sqrt(x1) - sinh(x2*x3) + cosh(x0) * tanh(x1)", {1.5, 2.0, 0.3, -0.6},
                                    1e-6);
  expect_matches_finite_differences("(x0 + 2*x1)^3 / (1 + x2^2)", {0.2, -0.4, 0.9, 0.0}, 1e-5);
}

TEST(EvalJet, DomainErrorsNameTheFunction) {
  try {
    eval_jet(parse_expression("log(x0)"), {-1, 0, 0, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DomainError);
    EXPECT_NE(std::string(e.what()).find("log"), std::string::npos);
  }
  EXPECT_EQ(kind_of([] { eval_jet(parse_expression("sqrt(x1)"), {0, -2, 0, 0}); }), ErrorKind::DomainError);
  EXPECT_EQ(kind_of([] { eval_jet(parse_expression("1/x2"), {0, 0, 0, 0}); }), ErrorKind::DomainError);
}

TEST(MetricText, ParsesAndMirrors) {
  const MetricSpec s = parse_metric_text(
      "# test metric\n"
      "name = tilted\n"
      "\n"
      "g[0][0] = -1\n"
      "g[0][1] = 0.1*x2\n"
      "g[1][1] = 1\n"
      "g[2][2] = 1 + x0^2\n"
      "g[3][3] = 1\n");
  EXPECT_EQ(s.name, "tilted");
  EXPECT_FALSE(s.diagonal());
  const MetricJet mj = metric_jet(s, {1, 0, 2, 0});
  EXPECT_DOUBLE_EQ(mj.g(1, 0), 0.2);
  EXPECT_DOUBLE_EQ(mj.g(0, 1), 0.2);
  EXPECT_DOUBLE_EQ(mj.g(2, 2), 2.0);
  EXPECT_DOUBLE_EQ(mj.dg[2](0, 1), 0.1);
  EXPECT_DOUBLE_EQ(mj.second(0, 0)(2, 2), 2.0);
}

TEST(MetricText, FormatRoundTrip) {
  const MetricSpec s = resolve_metric("nondiag-perturb:4");
  const MetricSpec back = parse_metric_text(format_metric(s));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_TRUE(s.g[i][j] == back.g[i][j]) << i << j;
  EXPECT_EQ(format_metric(back), format_metric(s));
}

TEST(MetricText, Errors) {
  EXPECT_EQ(kind_of([] { parse_metric_text("g[0][1] = x0\ng[1][0] = x1\n"); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { parse_metric_text("g[0][4] = 1\n"); }), ErrorKind::IndexOutOfRange);
  EXPECT_EQ(kind_of([] { parse_metric_text("g[0][0] = 1 +\n"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_metric_text("h[0][0] = 1\n"); }), ErrorKind::ParseError);
  try {
    parse_metric_text("g[0][0] = -1\ng[1][1] = 2 * * x0\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 13u + 14u);
  }
}

TEST(MetricText, FileResolution) {
  const std::string path = ::testing::TempDir() + "cliffcheck_metric_test.txt";
  {
    std::ofstream out(path);
    out << "name = file\ng[0][0] = -1\ng[1][1] = 1\ng[2][2] = 1\ng[3][3] = exp(x1)\n";
  }
  const MetricSpec s = resolve_metric(path);
  EXPECT_EQ(s.name, "file");
  EXPECT_DOUBLE_EQ(metric_jet(s, {0, 0, 0, 0}).g(3, 3), 1.0);
  std::remove(path.c_str());
  EXPECT_EQ(kind_of([] { resolve_metric("no-such-metric"); }), ErrorKind::MetricNotFound);
  EXPECT_EQ(kind_of([] { resolve_metric("diag-poly-random:x"); }), ErrorKind::MetricNotFound);
}

TEST(MetricJet, Minkowski) {
  const MetricJet mj = metric_jet(resolve_metric("minkowski"), {0.3, -0.2, 0.5, 0.9});
  EXPECT_EQ(max_abs(mj.g - minkowski_metric()), 0.0);
  for (const auto& d : mj.dg) EXPECT_EQ(max_abs(d), 0.0);
  EXPECT_EQ(mj.omega, 1.0);
}

TEST(MetricJet, FlrwVolume) {
  const MetricJet mj = metric_jet(resolve_metric("flrw"), {2, 0.1, 0.2, 0.3});
  EXPECT_DOUBLE_EQ(mj.omega, 8.0);
  EXPECT_DOUBLE_EQ(mj.domega[0], 12.0);
}

// Cofactor expansion along the first row.
double det_by_cofactors(const Mat4& g) {
  double det = 0.0;
  for (int c = 0; c < 4; ++c) {
    double m[3][3];
    for (int r = 1; r < 4; ++r)
      for (int k = 0, kk = 0; k < 4; ++k)
        if (k != c) m[r - 1][kk++] = g(r, k);
    const double minor = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    det += ((c % 2) ? -1.0 : 1.0) * g(0, c) * minor;
  }
  return det;
}

TEST(MetricJet, SchwarzschildVolumeAgainstCofactors) {
  const MetricJet mj = metric_jet(resolve_metric("schwarzschild"), {0, 4, 1.1, 0.3});
  EXPECT_NEAR(mj.omega, std::sqrt(-det_by_cofactors(mj.g)), 1e-13);
  EXPECT_NEAR(mj.omega, 16.0 * std::sin(1.1), 1e-13);
}

TEST(MetricJet, DerivativesMatchFiniteDifferences) {
  for (const std::string ref : {"nondiag-perturb:2", "diag-poly-random:5", "schwarzschild", "flrw"}) {
    const MetricSpec s = resolve_metric(ref);
    const Vec4 x = s.box.center();
    const MetricJet mj = metric_jet(s, x);
    EXPECT_LT(max_abs(mj.g_inv * mj.g - Mat4::identity()), 1e-10);
    const double h = 1e-5;
    for (int k = 0; k < 4; ++k) {
      Vec4 p = x, m = x;
      p[k] += h;
      m[k] -= h;
      const MetricJet jp = metric_jet(s, p), jm = metric_jet(s, m);
      EXPECT_LT(max_abs((jp.g - jm.g) * (1.0 / (2 * h)) - mj.dg[k]), 1e-7) << ref;
      for (int l = 0; l < 4; ++l)
        EXPECT_LT(max_abs((jp.dg[l] - jm.dg[l]) * (1.0 / (2 * h)) - mj.second(k, l)), 1e-6) << ref;
      EXPECT_NEAR((jp.omega - jm.omega) / (2 * h), mj.domega[k], 1e-6) << ref;
    }
  }
}

TEST(MetricJet, RejectsInvalidPoints) {
  const MetricSpec s = parse_metric_text("g[0][0] = -1\ng[1][1] = x0\ng[2][2] = 1\ng[3][3] = 1\n");
  EXPECT_EQ(kind_of([&] { metric_jet(s, {0, 0, 0, 0}); }), ErrorKind::SingularMetric);
  EXPECT_EQ(kind_of([&] { metric_jet(s, {-1, 0, 0, 0}); }), ErrorKind::NonLorentzian);
  const MetricSpec l = parse_metric_text("g[0][0] = -1\ng[1][1] = log(x0)\ng[2][2] = 1\ng[3][3] = 1\n");
  EXPECT_EQ(kind_of([&] { metric_jet(l, {-1, 0, 0, 0}); }), ErrorKind::DomainError);
}

TEST(Catalog, SeededFamiliesAreDeterministic) {
  EXPECT_EQ(format_metric(resolve_metric("diag-poly-random:3")), format_metric(resolve_metric("diag-poly-random:3")));
  EXPECT_NE(format_metric(resolve_metric("diag-poly-random:3")), format_metric(resolve_metric("diag-poly-random:4")));
  EXPECT_TRUE(resolve_metric("diag-poly-random:3").diagonal());
  EXPECT_FALSE(resolve_metric("nondiag-perturb:3").diagonal());
  EXPECT_EQ(standard_metric_refs().size(), 13u);
  for (const auto& ref : diagonal_metric_refs()) EXPECT_TRUE(resolve_metric(ref).diagonal()) << ref;
}

TEST(Rng, UniformStaysInRange) {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform(-2.0, 3.0);
    EXPECT_GE(u, -2.0);
    EXPECT_LT(u, 3.0);
  }
}

}  // namespace
}  // namespace cliffcheck
