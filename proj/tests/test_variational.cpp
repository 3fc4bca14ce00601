#include <gtest/gtest.h>

#include <cmath>

#include "cliffcheck/variational.hpp"

namespace cliffcheck {
namespace {

GeometryPoint at(const std::string& ref, const Vec4& x) { return geometry_point(metric_jet(resolve_metric(ref), x)); }

std::size_t pos(std::initializer_list<int> idx) { return MultiIndex::from_indices(idx).position(); }

SpinorJet constant_spinor(const Multivector& v) {
  SpinorJet s;
  s.v = v;
  return s;
}

SpinorJet random_spinor(const std::string& ref, const Vec4& x, std::uint64_t seed) {
  Rng rng(seed);
  return SpinorPolyField::random(rng, resolve_metric(ref).box).eval(x);
}

TEST(SymPairs, UnitsAndIndex) {
  for (int k = 0; k < 10; ++k) {
    const auto [a, b] = kSymPairs[k];
    EXPECT_EQ(sym_pair_index(a, b), k);
    EXPECT_EQ(sym_pair_index(b, a), k);
    const Mat4 e = sym_unit(a, b);
    EXPECT_EQ(max_abs(e - transpose(e)), 0.0);
    EXPECT_EQ(e(a, b), a == b ? 1.0 : 0.5);
  }
}

TEST(KTable, WorkedExamples) {
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) EXPECT_EQ(max_abs(k_matrix(a, b, a) + Mat16::identity()), 0.0);
  const Multivector e02 = basis_vector(pos({0, 2}));
  EXPECT_EQ(max_abs(k_matrix(0, 0, 1) * e02 + e02), 0.0);
  const Mat16 s = reflection_4plane(0, 1, 2);
  for (std::size_t i = 0; i < 16; ++i) {
    const bool flipped =
        i == pos({0, 2}) || i == pos({1, 3}) || i == pos({1}) || i == pos({0, 2, 3});
    EXPECT_EQ(s(i, i), flipped ? -1.0 : 1.0) << i;
  }
}

TEST(KTable, DiagonalSignsSquaringToIdentity) {
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b)
      for (int e = 0; e < 4; ++e) {
        const Mat16 k = k_matrix(a, b, e);
        for (std::size_t i = 0; i < 16; ++i)
          for (std::size_t j = 0; j < 16; ++j)
            if (i == j)
              EXPECT_EQ(std::abs(k(i, i)), 1.0);
            else
              EXPECT_EQ(k(i, j), 0.0);
        EXPECT_EQ(max_abs(k * k - Mat16::identity()), 0.0);
      }
}

TEST(KTable, TwoPlaneReflection) {
  const Mat4 s = reflection_2plane(1, 3);
  Mat4 expect = Mat4::identity();
  expect(1, 1) = expect(3, 3) = -1.0;
  EXPECT_EQ(max_abs(s - expect), 0.0);
}

TEST(Lagrangians, MinkowskiExamples) {
  const GeometryPoint p = at("minkowski", {0.2, 0.1, 0.0, -0.3});
  VariationConfig cfg;
  cfg.lambda = 0.7;
  Multivector psi;
  for (int i = 0; i < 16; ++i) psi[i] = 0.1 * (i - 7);
  const LagrangianDensities l = lagrangian_densities(p, constant_spinor(psi), cfg);
  EXPECT_EQ(l.dirac, 0.0);
  EXPECT_EQ(l.gravity, 0.0);
  EXPECT_EQ(l.cosmo, 0.7);
  EXPECT_EQ(lagrangian_densities(p, constant_spinor(basis_vector(pos({0}))), cfg).mass, -1.0);
}

TEST(Lagrangians, GravityIsMinusEightOmegaR) {
  for (const std::string ref : {"flrw", "schwarzschild", "diag-poly-random:2"}) {
    const MetricSpec s = resolve_metric(ref);
    Rng rng(5);
    const GeometryPoint p = geometry_point(metric_jet(s, s.box.sample(rng)));
    const double lg = lagrangian_densities(p, constant_spinor({}), {}).gravity;
    double rs = 0.0;
    for (double v : p.curv.riemann) rs = std::max(rs, std::abs(v));
    EXPECT_NEAR(lg, -8.0 * p.mj.omega * p.curv.scalar, 1e-10 * std::max(1.0, 8.0 * p.mj.omega * rs)) << ref;
  }
  EXPECT_NEAR(lagrangian_densities(at("flrw", {2, 0, 0, 0}), constant_spinor({}), {}).gravity, -96.0, 1e-12);
}

TEST(FieldVariation, MinkowskiMassExample) {
  const GeometryPoint p = at("minkowski", {0, 0, 0, 0});
  const FieldVariation f = field_variation(p, constant_spinor(basis_vector(pos({0}))));
  EXPECT_EQ(max_abs(f.mass + 2.0 * basis_vector(pos({0}))), 0.0);
  Multivector psi;
  for (int i = 0; i < 16; ++i) psi[i] = 0.3 - 0.05 * i;
  EXPECT_EQ(max_abs(field_variation_numeric(p, constant_spinor(psi)).dirac), 0.0);
}

TEST(FieldVariation, MassAgainstFiniteDifferences) {
  const GeometryPoint p = at("nondiag-perturb:2", {0.1, 0.2, -0.1, 0.0});
  const SpinorJet psi = random_spinor("nondiag-perturb:2", p.mj.x, 3);
  const FieldVariation f = field_variation(p, psi);
  const double h = 1e-6;
  for (int i = 0; i < 16; ++i) {
    Multivector up = psi.v, dn = psi.v;
    up[i] += h;
    dn[i] -= h;
    const double fd = (mass_density_from(p.mj.g, up) - mass_density_from(p.mj.g, dn)) / (2 * h);
    EXPECT_NEAR(f.mass[i], fd, 1e-8);
  }
}

TEST(FieldVariation, NumericMatchesClosedForm) {
  for (const std::string ref : {"flrw", "schwarzschild", "nondiag-perturb:4"}) {
    const MetricSpec s = resolve_metric(ref);
    Rng rng(9);
    const Vec4 x = s.box.sample(rng);
    const GeometryPoint p = geometry_point(metric_jet(s, x));
    for (std::uint64_t seed : {1, 2, 3}) {
      const SpinorJet psi = random_spinor(ref, x, seed);
      const FieldVariation a = field_variation(p, psi), n = field_variation_numeric(p, psi);
      const double scale = std::max(1.0, max_abs(a.dirac));
      EXPECT_LT(max_abs(a.mass - n.mass) / std::max(1.0, max_abs(a.mass)), 1e-10) << ref;
      EXPECT_LT(max_abs(a.dirac - n.dirac) / scale, 1e-10) << ref;
    }
  }
}

TEST(DiracResidual, MinkowskiHandExpansion) {
  const GeometryPoint p = at("minkowski", {0.4, 0, 0, 0});
  EXPECT_EQ(max_abs(dirac_residual(p.ctx, p.ext, constant_spinor(basis_vector(pos({1, 2}))), 0.0)), 0.0);
  const double ex = std::exp(0.4);
  const Multivector v = ex * (basis_vector(0) - basis_vector(pos({0})));
  SpinorJet psi;
  psi.v = v;
  psi.d[0] = v;
  EXPECT_LT(max_abs(dirac_residual(p.ctx, p.ext, psi, 1.0) + 2.0 * ex * basis_vector(pos({0}))), 1e-15);
}

TEST(DiracResidual, LinearInPsi) {
  const GeometryPoint p = at("flrw", {1.5, 0, 0.2, 0});
  const SpinorJet a = random_spinor("flrw", p.mj.x, 4), b = random_spinor("flrw", p.mj.x, 5);
  SpinorJet c;
  c.v = a.v + 2.0 * b.v;
  for (int k = 0; k < 4; ++k) c.d[k] = a.d[k] + 2.0 * b.d[k];
  const Multivector lhs = dirac_residual(p.ctx, p.ext, c, 0.8);
  const Multivector rhs = dirac_residual(p.ctx, p.ext, a, 0.8) + 2.0 * dirac_residual(p.ctx, p.ext, b, 0.8);
  EXPECT_LT(max_abs(lhs - rhs), 1e-12);
}

TEST(MetricVariation, VolumeDerivativeConvention) {
  const double h = 1e-6;
  Rng rng(6);
  const GeometryPoint p = at("nondiag-perturb:6", {0.1, 0, 0, 0.2});
  for (int k = 0; k < 10; ++k) {
    const auto [a, b] = kSymPairs[k];
    const Mat4 up = p.mj.g + h * sym_unit(a, b), dn = p.mj.g - h * sym_unit(a, b);
    const double fd = (std::sqrt(-det4(up)) - std::sqrt(-det4(dn))) / (2 * h);
    EXPECT_NEAR(fd, 0.5 * p.mj.g_inv(a, b) * p.mj.omega, 1e-8);
  }
  const GeometryPoint m = at("minkowski", {0, 0, 0, 0});
  EXPECT_EQ(0.5 * m.mj.g_inv(0, 0) * m.mj.omega, -0.5);
}

TEST(MetricVariation, ScalarSlotOfA) {
  const GeometryPoint p = at("nondiag-perturb:2", {0.2, 0.1, 0, 0});
  const PairMatrices a = metric_variation_A(p);
  for (int k = 0; k < 10; ++k) {
    const auto [i, j] = kSymPairs[k];
    EXPECT_NEAR(a[k](0, 0), -0.5 * p.mj.g_inv(i, j), 1e-13);
  }
}

TEST(MetricVariation, MassAgainstPerturbation) {
  const std::string ref = "nondiag-perturb:3";
  const GeometryPoint p = at(ref, {0.05, -0.1, 0.2, 0.1});
  const SpinorJet psi = random_spinor(ref, p.mj.x, 8);
  const auto v = mass_metric_variation(p, psi);
  const PairMatrices a = metric_variation_A(p);
  const double h = 1e-6;
  for (int k = 0; k < 10; ++k) {
    const auto [i, j] = kSymPairs[k];
    const double fd = (mass_density_from(Mat4(p.mj.g + h * sym_unit(i, j)), psi.v) -
                       mass_density_from(Mat4(p.mj.g - h * sym_unit(i, j)), psi.v)) /
                      (2 * h);
    EXPECT_NEAR(v[k], fd, 1e-7 * std::max(1.0, std::abs(fd)));
    EXPECT_NEAR(v[k], p.mj.omega * bilinear(psi.v, a[k], psi.v), 1e-10 * std::max(1.0, std::abs(fd)));
  }
}

TEST(MetricVariation, PVanishesOnDiagonalMetrics) {
  for (const std::string ref : {"flrw", "schwarzschild", "diag-poly-random:3"}) {
    const MetricSpec s = resolve_metric(ref);
    Rng rng(3);
    const PQ pq = metric_variation_PQ(geometry_point(metric_jet(s, s.box.sample(rng))));
    for (int k = 0; k < 10; ++k) {
      EXPECT_LT(max_abs(pq.P[k]), 1e-8) << ref;
      EXPECT_LT(max_abs(pq.P_direct[k]), 1e-8) << ref;
    }
  }
}

TEST(MetricVariation, QClosedForm) {
  const GeometryPoint m = at("minkowski", {0, 0, 0, 0});
  const QMatrices cq = closed_form_Q(m);
  EXPECT_LT(max_abs(cq[sym_pair_index(0, 0)][0] - 0.5 * m.ctx.ghat * m.ctx.gamma_hi[0]), 1e-15);
  for (const std::string ref : {"minkowski", "flrw", "schwarzschild", "diag-poly-random:1"}) {
    const MetricSpec s = resolve_metric(ref);
    Rng rng(4);
    const GeometryPoint p = geometry_point(metric_jet(s, s.box.sample(rng)));
    const PQ pq = metric_variation_PQ(p);
    const QMatrices q = closed_form_Q(p);
    for (int k = 0; k < 10; ++k)
      for (int e = 0; e < 4; ++e)
        EXPECT_LT(max_abs(pq.Q[k][e] - q[k][e]) / std::max(1.0, max_abs(q[k][e])), 1e-10) << ref << k << e;
  }
}

TEST(MetricVariation, QClosedFormRejectsNonDiagonal) {
  const GeometryPoint p = at("nondiag-perturb:1", {0, 0, 0, 0});
  try {
    closed_form_Q(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnsupportedMetric);
  }
  EXPECT_NO_THROW(closed_form_Q(p, true));
}

TEST(EinsteinCoupling, TrivialCases) {
  const GeometryPoint f = at("flrw", {1.5, 0, 0, 0});
  const EinsteinCoupling z = einstein_coupling(f, constant_spinor({}), {});
  EXPECT_EQ(max_abs(z.source_lo), 0.0);
  EXPECT_LT(max_abs(z.residual - f.curv.einstein_lo), 1e-15);
  const GeometryPoint m = at("minkowski", {0, 0, 0, 0});
  const EinsteinCoupling e = einstein_coupling(m, random_spinor("minkowski", m.mj.x, 2), {});
  EXPECT_EQ(max_abs(m.curv.einstein_lo), 0.0);
  EXPECT_LT(max_abs(e.residual + e.source_lo), 1e-15);
}

TEST(EinsteinCoupling, TotalVariationIdentityAndSign) {
  for (const std::string ref : {"flrw", "diag-poly-random:2", "nondiag-perturb:2"}) {
    const MetricSpec s = resolve_metric(ref);
    Rng rng(12);
    const Vec4 x = s.box.sample(rng);
    const GeometryPoint p = geometry_point(metric_jet(s, x));
    const EinsteinCoupling e = einstein_coupling(p, random_spinor(ref, x, 7), {});
    EXPECT_EQ(e.gravity_sign, 1) << ref;
    EXPECT_LT(e.gravity_sign_error, 1e-7) << ref;
    double d = 0.0, sc = 1.0;
    for (int k = 0; k < 10; ++k) {
      d = std::max(d, std::abs(e.total_numeric[k] - e.total_formula[k]));
      sc = std::max(sc, std::abs(e.total_numeric[k]));
    }
    EXPECT_LT(d / sc, 1e-7) << ref;
  }
}

TEST(EinsteinCoupling, VacuumSignUndetermined) {
  const GeometryPoint p = at("schwarzschild", {0, 5, 1.2, 0.3});
  EXPECT_EQ(einstein_coupling(p, random_spinor("schwarzschild", p.mj.x, 1), {}).gravity_sign, 0);
}

}  // namespace
}  // namespace cliffcheck
