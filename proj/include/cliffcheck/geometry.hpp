#pragma once

// Levi-Civita connection, its Leibniz extension to the Clifford bundle,
// curvatures, the Dirac operator and the vierbein spin connection.
//
// Connection matrices follow the column convention of clifford.hpp:
// conn[alpha](mu, beta) = Gamma^mu_{alpha beta}, so that
// nabla_alpha e_beta = sum_mu conn[alpha](mu, beta) e_mu.

#include <array>

#include "cliffcheck/clifford.hpp"
#include "cliffcheck/metric.hpp"

namespace cliffcheck {

template <class S>
using Connection = std::array<Mat<S, 4>, 4>;
template <class S>
using FiberConnection = std::array<Mat<S, 16>, 4>;
/// Index alpha * 4 + beta.
template <class S>
using FiberCurvature = std::array<Mat<S, 16>, 16>;

// ---------------------------------------------------------------------------
// Jet helpers: lift point data to first-order jets in x and read them back.

/// Entries Dual(v, (d[0], ..., d[3])).
template <class S, std::size_t N>
Mat<Dual<S, 4>, N> lift(const Mat<S, N>& v, const std::array<Mat<S, N>, 4>& d) {
  Mat<Dual<S, 4>, N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      Dual<S, 4> x;
      x.v = v(i, j);
      for (int k = 0; k < 4; ++k) x.d[k] = d[k](i, j);
      r(i, j) = x;
    }
  return r;
}

/// Lifts dg[nu] using ddg[mu * 4 + nu] as its derivative in direction mu.
template <class S>
std::array<Mat<Dual<S, 4>, 4>, 4> lift_first(const std::array<Mat<S, 4>, 4>& dg,
                                             const std::array<Mat<S, 4>, 16>& ddg) {
  std::array<Mat<Dual<S, 4>, 4>, 4> r;
  for (int nu = 0; nu < 4; ++nu) {
    std::array<Mat<S, 4>, 4> d;
    for (int mu = 0; mu < 4; ++mu) d[mu] = ddg[mu * 4 + nu];
    r[nu] = lift(dg[nu], d);
  }
  return r;
}

template <class S, std::size_t N>
Mat<S, N> value_part(const Mat<Dual<S, 4>, N>& m) {
  Mat<S, N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r(i, j) = m(i, j).v;
  return r;
}

template <class S, std::size_t N>
Mat<S, N> derivative_part(const Mat<Dual<S, 4>, N>& m, int k) {
  Mat<S, N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r(i, j) = m(i, j).d[k];
  return r;
}

// ---------------------------------------------------------------------------
// Generic constructions.

/// Gamma^mu_{alpha beta} = g^{mu nu} Gamma_{nu alpha beta} with
/// Gamma_{nu alpha beta} = 1/2 (d_beta g_{nu alpha} - d_nu g_{alpha beta} + d_alpha g_{beta nu}).
template <class S>
Connection<S> christoffel_from(const Mat<S, 4>& g_inv, const std::array<Mat<S, 4>, 4>& dg) {
  Connection<S> c;
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b)
      for (int nu = 0; nu < 4; ++nu) {
        const S low = 0.5 * (dg[b](nu, a) - dg[nu](a, b) + dg[a](b, nu));
        if (is_zero(low)) continue;
        for (int mu = 0; mu < 4; ++mu) c[a](mu, b) += g_inv(mu, nu) * low;
      }
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < a; ++b)
      for (int mu = 0; mu < 4; ++mu) c[a](mu, b) = c[b](mu, a);
  return c;
}

template <class S>
FiberConnection<S> extended_connection_from(const Gammas<S>& lo, const Connection<S>& conn) {
  FiberConnection<S> r;
  for (int a = 0; a < 4; ++a) r[a] = derivation_extension(lo, conn[a]);
  return r;
}

/// Omega_{ab} = d_a C_b - d_b C_a + [C_a, C_b], with dc[b][a] = d_b C_a.
template <class S>
FiberCurvature<S> curvature_from(const FiberConnection<S>& c, const std::array<FiberConnection<S>, 4>& dc) {
  FiberCurvature<S> f;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      Mat<S, 16> m = dc[a][b] - dc[b][a] + commutator(c[a], c[b]);
      f[b * 4 + a] = -m;
      f[a * 4 + b] = std::move(m);
    }
  return f;
}

/// tr(gamma^a gamma^b F_{ab}) using the antisymmetry of F.
template <class S>
S gamma_gamma_trace(const Gammas<S>& hi, const FiberCurvature<S>& f) {
  S t(0.0);
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) t += trace_product(commutator(hi[a], hi[b]), f[a * 4 + b]);
  return t;
}

/// gamma^a gamma^b F_{ab} as a matrix.
template <class S>
Mat<S, 16> gamma_gamma_contract(const Gammas<S>& hi, const FiberCurvature<S>& f) {
  Mat<S, 16> m;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) m += commutator(hi[a], hi[b]) * f[a * 4 + b];
  return m;
}

/// Connection-level objects with first x-derivatives, computed from the
/// point values (g, dg, ddg) in any scalar type.
template <class S>
struct ConnectionJetT {
  Mat<S, 4> g_inv;
  Gammas<S> gamma_lo;
  Gammas<S> gamma_hi;
  Connection<S> conn;
  FiberConnection<S> gamma_hat;
  std::array<FiberConnection<S>, 4> d_gamma_hat;  // [beta][alpha] = d_beta Gamma^_alpha
};

template <class S>
ConnectionJetT<S> connection_jet(const Mat<S, 4>& g, const std::array<Mat<S, 4>, 4>& dg,
                                 const std::array<Mat<S, 4>, 16>& ddg) {
  using D = Dual<S, 4>;
  const Mat<D, 4> gx = lift(g, dg);
  const std::array<Mat<D, 4>, 4> dgx = lift_first(dg, ddg);
  const Mat<D, 4> ginv_x = inverse4(gx);
  const Gammas<D> lo_x = make_gamma_lo(gx);
  const FiberConnection<D> gh_x = extended_connection_from(lo_x, christoffel_from(ginv_x, dgx));

  ConnectionJetT<S> r;
  r.g_inv = value_part(ginv_x);
  for (int a = 0; a < 4; ++a) r.gamma_lo[a] = value_part(lo_x[a]);
  r.gamma_hi = raise_gammas(r.g_inv, r.gamma_lo);
  r.conn = christoffel_from(r.g_inv, dg);
  for (int a = 0; a < 4; ++a) {
    r.gamma_hat[a] = value_part(gh_x[a]);
    for (int b = 0; b < 4; ++b) r.d_gamma_hat[b][a] = derivative_part(gh_x[a], b);
  }
  return r;
}

/// L_g = omega tr(gamma^a gamma^b Omega^_{ab}) from point values.
template <class S>
S gravity_density_from(const Mat<S, 4>& g, const std::array<Mat<S, 4>, 4>& dg,
                       const std::array<Mat<S, 4>, 16>& ddg) {
  using std::sqrt;
  const ConnectionJetT<S> cj = connection_jet(g, dg, ddg);
  const FiberCurvature<S> omega_hat = curvature_from(cj.gamma_hat, cj.d_gamma_hat);
  const S omega = sqrt(-det4(g));
  return omega * gamma_gamma_trace(cj.gamma_hi, omega_hat);
}

// ---------------------------------------------------------------------------
// Double-precision API.

struct ConnectionPoint {
  Connection<double> gamma2;                 // gamma2[alpha](mu, beta) = Gamma^mu_{alpha beta}
  std::array<Mat4, 4> gamma1;                // gamma1[nu](alpha, beta) = Gamma_{nu alpha beta}
  std::array<Connection<double>, 4> dgamma2;  // dgamma2[eps][alpha](mu, beta) = d_eps Gamma^mu_{alpha beta}

  double operator()(int mu, int alpha, int beta) const { return gamma2[alpha](mu, beta); }
};

struct ExtendedConnectionPoint {
  FiberConnection<double> gamma_hat;
  std::array<FiberConnection<double>, 4> d_gamma_hat;  // [beta][alpha] = d_beta Gamma^_alpha
  std::array<Mat16, 4> d_ghat;                         // d_alpha ghat
  std::array<Gammas<double>, 4> d_gamma_lo;            // [beta][alpha] = d_beta gamma_alpha
  std::array<Gammas<double>, 4> d_gamma_hi;            // [beta][alpha] = d_beta gamma^alpha
};

struct CurvaturePoint {
  std::array<double, 256> riemann{};  // R^rho_{sigma alpha beta} at ((rho * 4 + sigma) * 4 + alpha) * 4 + beta
  Mat4 ricci;
  double scalar = 0.0;
  Mat4 einstein_lo;
  Mat4 einstein_hi;

  double R(int rho, int sigma, int alpha, int beta) const { return riemann[((rho * 4 + sigma) * 4 + alpha) * 4 + beta]; }
};

struct ExtendedCurvaturePoint {
  FiberCurvature<double> omega_hat;  // [alpha * 4 + beta]

  const Mat16& operator()(int alpha, int beta) const { return omega_hat[alpha * 4 + beta]; }
};

struct VierbeinPoint {
  Mat4 e;                   // e(mu, a) = e_mu^a
  std::array<Mat4, 4> de;   // de[nu](mu, a) = d_nu e_mu^a
  Mat4 eta;
  Gammas<double> gamma_flat;
};

ConnectionPoint christoffel(const MetricJet& mj);
ExtendedConnectionPoint extended_christoffel(const MetricJet& mj);
ExtendedCurvaturePoint extended_curvature(const ExtendedConnectionPoint& ecp);
CurvaturePoint riemann_ricci(const MetricJet& mj, const ConnectionPoint& cp);

/// D psi = gamma^a (d_a psi + Gamma^_a psi).
Multivector dirac_operator(const CliffordContext& ctx, const ExtendedConnectionPoint& ecp, const Multivector& psi,
                           const std::array<Multivector, 4>& dpsi);

/// Diagonal vierbein e_mu^a = sqrt|g_mu mu| delta_mu^a; UnsupportedMetric for
/// non-diagonal metrics.
VierbeinPoint vierbein_point(const MetricJet& mj);
FiberConnection<double> spin_connection(const VierbeinPoint& vb, const ConnectionPoint& cp);

/// max |C_a^T ghat + ghat C_a - d_a ghat| over a and entries.
double metric_compat_defect(const Mat16& ghat, const std::array<Mat16, 4>& d_ghat, const FiberConnection<double>& c);

/// Everything the checks need at one point.
struct GeometryPoint {
  MetricJet mj;
  CliffordContext ctx;
  ConnectionPoint conn;
  ExtendedConnectionPoint ext;
  CurvaturePoint curv;
  ExtendedCurvaturePoint ohat;
};

GeometryPoint geometry_point(const MetricJet& mj);

}  // namespace cliffcheck
