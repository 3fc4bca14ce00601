#include "cliffcheck/variational.hpp"

#include <cmath>

namespace cliffcheck {

namespace {

using P10 = Dual<double, 10>;
using XP10 = Dual<P10, 1>;
using P16 = Dual<double, 16>;
using XP16 = Dual<P16, 1>;

template <class S, std::size_t N>
Mat<S, N> cast_mat(const Mat<double, N>& m) {
  return map_entries(m, [](double v) { return S(v); });
}

template <class S, std::size_t N>
Vec<S, N> cast_vec(const Vec<double, N>& v) {
  Vec<S, N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = S(v[i]);
  return r;
}

template <class S, std::size_t N, std::size_t M>
std::array<Mat<S, N>, M> cast_all(const std::array<Mat<double, N>, M>& a) {
  std::array<Mat<S, N>, M> r;
  for (std::size_t k = 0; k < M; ++k) r[k] = cast_mat<S>(a[k]);
  return r;
}

/// m + sum_p E_p * param_p.
Mat<P10, 4> seed_pairs(const Mat4& m) {
  Mat<P10, 4> r = cast_mat<P10>(m);
  for (int p = 0; p < 10; ++p) {
    const auto [a, b] = kSymPairs[p];
    const P10 t = P10::variable(0.0, p);
    if (a == b) {
      r(a, a) += t;
    } else {
      r(a, b) += 0.5 * t;
      r(b, a) += 0.5 * t;
    }
  }
  return r;
}

template <class Inner>
Dual<Inner, 1> with_slope(const Inner& v, const Inner& dv) {
  Dual<Inner, 1> r;
  r.v = v;
  r.d[0] = dv;
  return r;
}

template <class Inner, std::size_t N>
Mat<Dual<Inner, 1>, N> with_slope(const Mat<Inner, N>& v, const Mat<Inner, N>& dv) {
  Mat<Dual<Inner, 1>, N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r(i, j) = with_slope(v(i, j), dv(i, j));
  return r;
}

template <class Inner, std::size_t N>
Vec<Dual<Inner, 1>, N> with_slope(const Vec<Inner, N>& v, const Vec<Inner, N>& dv) {
  Vec<Dual<Inner, 1>, N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = with_slope(v[i], dv[i]);
  return r;
}

template <int K, std::size_t N>
Mat16 param_part(const Mat<Dual<double, K>, N>& m, int k) {
  Mat16 r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r(i, j) = m(i, j).d[k];
  return r;
}

/// Gamma^ built from the given first derivatives at fixed gammas and g_inv.
template <class S>
FiberConnection<S> gamma_hat_with(const Gammas<S>& lo, const Mat<S, 4>& g_inv, const std::array<Mat<S, 4>, 4>& dg) {
  return extended_connection_from(lo, christoffel_from(g_inv, dg));
}

std::array<Mat4, 4> unit_slot(int pair, int eps) {
  std::array<Mat4, 4> dg;
  const auto [a, b] = kSymPairs[pair];
  dg[eps] = sym_unit(a, b);
  return dg;
}

Multivector nabla(const GeometryPoint& p, const SpinorJet& psi, int e) {
  return psi.d[e] + p.ext.gamma_hat[e] * psi.v;
}

Multivector dirac_of(const GeometryPoint& p, const SpinorJet& psi) {
  return dirac_operator(p.ctx, p.ext, psi.v, psi.d);
}

}  // namespace

int sym_pair_index(int a, int b) {
  if (a > b) std::swap(a, b);
  if (a < 0 || b > 3) throw Error(ErrorKind::IndexOutOfRange, "metric index outside 0..3");
  for (int p = 0; p < 10; ++p)
    if (kSymPairs[p].first == a && kSymPairs[p].second == b) return p;
  return -1;
}

Mat4 sym_unit(int a, int b) {
  Mat4 e;
  if (a == b) {
    e(a, a) = 1.0;
  } else {
    e(a, b) = 0.5;
    e(b, a) = 0.5;
  }
  return e;
}

SpinorJet SpinorPolyField::eval(const Vec4& x) const {
  SpinorJet s;
  for (int i = 0; i < 16; ++i) {
    const Jet2 j = eval_jet(components[i], x);
    s.v[i] = j.v;
    for (int a = 0; a < 4; ++a) {
      s.d[a][i] = j.d[a];
      for (int b = 0; b < 4; ++b) s.dd[a * 4 + b][i] = j.hess(a, b);
    }
  }
  return s;
}

SpinorPolyField SpinorPolyField::random(Rng& rng, const Box& box) {
  SpinorPolyField f;
  for (auto& c : f.components) c = random_quadratic(rng, box, 1.0);
  return f;
}

LagrangianDensities lagrangian_densities(const GeometryPoint& p, const SpinorJet& psi, const VariationConfig& cfg) {
  LagrangianDensities l;
  const double w = p.mj.omega;
  l.mass = w * bilinear(psi.v, p.ctx.ghat, psi.v);
  l.dirac = w * bilinear(psi.v, p.ctx.ghat, dirac_of(p, psi));
  l.gravity = w * gamma_gamma_trace(p.ctx.gamma_hi, p.ohat.omega_hat);
  l.cosmo = cfg.lambda * w;
  return l;
}

FieldVariation field_variation(const GeometryPoint& p, const SpinorJet& psi) {
  FieldVariation f;
  f.mass = (2.0 * p.mj.omega) * (p.ctx.ghat * psi.v);
  f.dirac = (2.0 * p.mj.omega) * (p.ctx.ghat * dirac_of(p, psi));
  return f;
}

FieldVariation field_variation_numeric(const GeometryPoint& p, const SpinorJet& psi) {
  const MetricJet& mj = p.mj;
  FieldVariation f;

  Vec<P16, 16> seeded = cast_vec<P16>(psi.v);
  for (int i = 0; i < 16; ++i) seeded[i] += P16::variable(0.0, i);
  const Mat<P16, 4> g16 = cast_mat<P16>(mj.g);
  const P16 lm = mass_density_from(g16, seeded);
  std::array<Vec<P16, 16>, 4> dpsi16;
  for (int a = 0; a < 4; ++a) dpsi16[a] = cast_vec<P16>(psi.d[a]);
  const P16 ld = dirac_density_from(g16, cast_all<P16>(mj.dg), seeded, dpsi16);
  for (int i = 0; i < 16; ++i) {
    f.mass[i] = lm.d[i];
    f.dirac[i] = ld.d[i];
  }

  // Momentum dL/dpsi_a differentiated along x^a.
  for (int a = 0; a < 4; ++a) {
    const Mat<XP16, 4> gx = with_slope(cast_mat<P16>(mj.g), cast_mat<P16>(mj.dg[a]));
    std::array<Mat<XP16, 4>, 4> dgx;
    std::array<Vec<XP16, 16>, 4> dpsix;
    for (int n = 0; n < 4; ++n) {
      dgx[n] = with_slope(cast_mat<P16>(mj.dg[n]), cast_mat<P16>(mj.second(a, n)));
      Vec<P16, 16> v = cast_vec<P16>(psi.d[n]);
      if (n == a)
        for (int i = 0; i < 16; ++i) v[i] += P16::variable(0.0, i);
      dpsix[n] = with_slope(v, cast_vec<P16>(psi.dd[a * 4 + n]));
    }
    const Vec<XP16, 16> psix = with_slope(cast_vec<P16>(psi.v), cast_vec<P16>(psi.d[a]));
    const XP16 l = dirac_density_from(gx, dgx, psix, dpsix);
    for (int i = 0; i < 16; ++i) f.dirac[i] -= l.d[0].d[i];
  }
  return f;
}

Multivector dirac_residual(const CliffordContext& ctx, const ExtendedConnectionPoint& ecp, const SpinorJet& psi,
                           double mu) {
  return dirac_operator(ctx, ecp, psi.v, psi.d) + mu * psi.v;
}

PairMatrices metric_variation_A(const GeometryPoint& p) {
  const CliffordContextT<P10> c = make_context(seed_pairs(p.mj.g));
  PairMatrices a;
  for (int k = 0; k < 10; ++k) {
    const auto [i, j] = kSymPairs[k];
    a[k] = 0.5 * p.mj.g_inv(i, j) * p.ctx.ghat + param_part(c.ghat, k);
  }
  return a;
}

PQ metric_variation_PQ(const GeometryPoint& p) {
  const MetricJet& mj = p.mj;
  const CliffordContext& ctx = p.ctx;
  const Mat16& ghat = ctx.ghat;

  // Partials with respect to the point values g_ab.
  const CliffordContextT<P10> cp = make_context(seed_pairs(mj.g));
  const FiberConnection<P10> ghp = gamma_hat_with(cp.gamma_lo, cp.g_inv, cast_all<P10>(mj.dg));

  // Lifted metric for x-derivatives of dGamma^/dg_abe, which depends on g only.
  const Mat<Jet1, 4> gx = lift(mj.g, mj.dg);
  const Gammas<Jet1> lo_x = make_gamma_lo(gx);
  const Mat<Jet1, 4> ginv_x = inverse4(gx);

  std::array<double, 4> trace_conn{};  // Gamma^m_{m e}
  for (int e = 0; e < 4; ++e)
    for (int m = 0; m < 4; ++m) trace_conn[e] += p.conn(m, m, e);

  PQ out;
  for (int k = 0; k < 10; ++k) {
    Mat16 pt;  // P~
    Mat16 pd;  // P before rewriting
    for (int n = 0; n < 4; ++n) {
      const Mat16 dgh = param_part(ghp[n], k);
      pt += ctx.gamma_hi[n] * dgh;
      pd += ghat * ctx.gamma_hi[n] * dgh;
    }
    for (int e = 0; e < 4; ++e) {
      const std::array<Mat4, 4> unit = unit_slot(k, e);
      const FiberConnection<double> x = gamma_hat_with(ctx.gamma_lo, ctx.g_inv, unit);
      const FiberConnection<Jet1> xx = gamma_hat_with(lo_x, ginv_x, cast_all<Jet1>(unit));
      Mat16 q = ghat * param_part(cp.gamma_hi[e], k);
      for (int n = 0; n < 4; ++n) {
        const Mat16 dx = derivative_part(xx[n], e);  // d_e (dGamma^_n / dg_abe)
        Mat16 coeff = -trace_conn[e] * ctx.gamma_hi[n];
        for (int m = 0; m < 4; ++m) add_scaled(coeff, p.conn(n, e, m), ctx.gamma_hi[m]);
        pt += coeff * x[n] - ctx.gamma_hi[n] * dx + ctx.gamma_hi[n] * commutator(x[n], p.ext.gamma_hat[e]);

        const Mat16 gx_n = ghat * ctx.gamma_hi[n] * x[n];
        pd += -trace_conn[e] * gx_n - p.ext.d_ghat[e] * ctx.gamma_hi[n] * x[n] -
              ghat * p.ext.d_gamma_hi[e][n] * x[n] - ghat * ctx.gamma_hi[n] * dx +
              transpose(p.ext.gamma_hat[e]) * gx_n + gx_n * p.ext.gamma_hat[e];
        q -= gx_n + transpose(gx_n);
      }
      out.Q[k][e] = q;
    }
    out.P[k] = ghat * pt;
    out.P_direct[k] = pd;
  }
  return out;
}

Mat4 reflection_2plane(int a, int e) {
  if (a < 0 || a > 3 || e < 0 || e > 3) throw Error(ErrorKind::IndexOutOfRange, "reflection index outside 0..3");
  Mat4 s = Mat4::identity();
  s(a, a) = -1.0;
  s(e, e) = -1.0;
  return s;
}

Mat16 reflection_4plane(int a, int b, int e) {
  if (a == b || a == e || b == e || std::min({a, b, e}) < 0 || std::max({a, b, e}) > 3)
    throw Error(ErrorKind::IndexOutOfRange, "S(abe) needs three distinct indices in 0..3");
  const std::uint8_t ae = std::uint8_t((1u << a) | (1u << e));
  const std::uint8_t bm = std::uint8_t(1u << b);
  Mat16 s = Mat16::identity();
  for (std::uint8_t m : {ae, std::uint8_t(~ae & 15u), bm, std::uint8_t(~bm & 15u)}) {
    const std::size_t pos = basis_position(m);
    s(pos, pos) = -1.0;
  }
  return s;
}

Mat16 k_matrix(int a, int b, int e) {
  if (a > b) throw Error(ErrorKind::IndexOutOfRange, "K(abe) is tabulated for a <= b");
  if (a < 0 || b > 3 || e < 0 || e > 3) throw Error(ErrorKind::IndexOutOfRange, "K index outside 0..3");
  static const Gammas<double> flat = make_gamma_lo(minkowski_metric());
  if (a == b) {
    if (e == a) return Mat16::identity();
    return extend_map(flat, reflection_2plane(a, e));
  }
  if (e == a) return -Mat16::identity();
  if (e == b) return -extend_map(flat, reflection_2plane(a, b));
  return -reflection_4plane(a, b, e);
}

QMatrices closed_form_Q(const GeometryPoint& p, bool allow_nondiagonal) {
  if (!allow_nondiagonal && !p.mj.diagonal()) throw Error(ErrorKind::UnsupportedMetric, "the closed form of Q holds for diagonal metrics");
  QMatrices q;
  const auto& hi = p.ctx.gamma_hi;
  for (int k = 0; k < 10; ++k) {
    const auto [a, b] = kSymPairs[k];
    for (int e = 0; e < 4; ++e) q[k][e] = -0.5 * (p.ctx.ghat * k_matrix(a, b, e) * hi[a] * hi[b] * hi[e]);
  }
  return q;
}

std::array<double, 10> mass_metric_variation(const GeometryPoint& p, const SpinorJet& psi) {
  const P10 l = mass_density_from(seed_pairs(p.mj.g), cast_vec<P10>(psi.v));
  std::array<double, 10> r;
  for (int k = 0; k < 10; ++k) r[k] = l.d[k];
  return r;
}

std::array<double, 10> dirac_metric_variation(const GeometryPoint& p, const SpinorJet& psi) {
  const MetricJet& mj = p.mj;
  std::array<Vec<P10, 16>, 4> dpsi;
  for (int a = 0; a < 4; ++a) dpsi[a] = cast_vec<P10>(psi.d[a]);
  const P10 l1 = dirac_density_from(seed_pairs(mj.g), cast_all<P10>(mj.dg), cast_vec<P10>(psi.v), dpsi);
  std::array<double, 10> r;
  for (int k = 0; k < 10; ++k) r[k] = l1.d[k];

  for (int e = 0; e < 4; ++e) {
    const Mat<XP10, 4> gx = with_slope(cast_mat<P10>(mj.g), cast_mat<P10>(mj.dg[e]));
    std::array<Mat<XP10, 4>, 4> dgx;
    std::array<Vec<XP10, 16>, 4> dpsix;
    for (int n = 0; n < 4; ++n) {
      const Mat<P10, 4> v = n == e ? seed_pairs(mj.dg[n]) : cast_mat<P10>(mj.dg[n]);
      dgx[n] = with_slope(v, cast_mat<P10>(mj.second(e, n)));
      dpsix[n] = with_slope(cast_vec<P10>(psi.d[n]), cast_vec<P10>(psi.dd[e * 4 + n]));
    }
    const XP10 l = dirac_density_from(gx, dgx, with_slope(cast_vec<P10>(psi.v), cast_vec<P10>(psi.d[e])), dpsix);
    for (int k = 0; k < 10; ++k) r[k] -= l.d[0].d[k];
  }
  return r;
}

std::array<double, 10> gravity_metric_variation(const GeometryPoint& p) {
  const MetricJet& mj = p.mj;
  const P10 l1 = gravity_density_from(seed_pairs(mj.g), cast_all<P10>(mj.dg), cast_all<P10>(mj.ddg));
  std::array<double, 10> r;
  for (int k = 0; k < 10; ++k) r[k] = l1.d[k];

  // d_e (dL / dg_{ab,e}); the partial depends on (g, dg) only.
  for (int e = 0; e < 4; ++e) {
    const Mat<XP10, 4> gx = with_slope(cast_mat<P10>(mj.g), cast_mat<P10>(mj.dg[e]));
    std::array<Mat<XP10, 4>, 4> dgx;
    std::array<Mat<XP10, 4>, 16> ddgx;
    for (int n = 0; n < 4; ++n) {
      const Mat<P10, 4> v = n == e ? seed_pairs(mj.dg[n]) : cast_mat<P10>(mj.dg[n]);
      dgx[n] = with_slope(v, cast_mat<P10>(mj.second(e, n)));
    }
    for (int s = 0; s < 16; ++s) ddgx[s] = with_slope(cast_mat<P10>(mj.ddg[s]), Mat<P10, 4>());
    const XP10 l = gravity_density_from(gx, dgx, ddgx);
    for (int k = 0; k < 10; ++k) r[k] -= l.d[0].d[k];
  }

  // d_e d_m (dL / dg_{ab,em}). L is affine in the second derivatives with a
  // coefficient depending on g alone, so the partial is L(g, 0, W).
  const Mat<Jet2, 4> gj = metric_taylor(mj);
  const std::array<Mat<Jet2, 4>, 4> zero_dg{};
  for (int k = 0; k < 10; ++k) {
    const auto [a, b] = kSymPairs[k];
    const Mat<Jet2, 4> unit = cast_mat<Jet2>(sym_unit(a, b));
    for (int e = 0; e < 4; ++e)
      for (int m = e; m < 4; ++m) {
        std::array<Mat<Jet2, 4>, 16> w{};
        w[e * 4 + m] = unit;
        w[m * 4 + e] = unit;
        const Jet2 l = gravity_density_from(gj, zero_dg, w);
        r[k] += l.hess(e, m);
      }
  }
  return r;
}

EinsteinCoupling einstein_coupling(const GeometryPoint& p, const SpinorJet& psi, const VariationConfig& cfg) {
  constexpr double kSignFloor = 1e-9;
  EinsteinCoupling out;
  const double w = p.mj.omega;
  const Mat4& g_hi = p.curv.einstein_hi;

  const std::array<double, 10> grav = gravity_metric_variation(p);
  double err_plus = 0.0, err_minus = 0.0;
  for (int k = 0; k < 10; ++k) {
    const auto [a, b] = kSymPairs[k];
    err_plus = std::max(err_plus, scaled_diff(grav[k], 8.0 * w * g_hi(a, b)));
    err_minus = std::max(err_minus, scaled_diff(grav[k], -8.0 * w * g_hi(a, b)));
  }
  double scale = 0.0;
  for (const auto& [a, b] : kSymPairs) scale = std::max(scale, std::abs(8.0 * w * g_hi(a, b)));
  out.gravity_sign = scale <= kSignFloor ? 0 : (err_plus <= err_minus ? 1 : -1);
  out.gravity_sign_error = std::min(err_plus, err_minus);
  const double s = out.gravity_sign == -1 ? -1.0 : 1.0;

  const PairMatrices amat = metric_variation_A(p);
  const PQ pq = metric_variation_PQ(p);
  const Multivector dpsi_mu = dirac_residual(p.ctx, p.ext, psi, cfg.mu);
  std::array<Multivector, 4> nab;
  for (int e = 0; e < 4; ++e) nab[e] = nabla(p, psi, e);

  const std::array<double, 10> md = dirac_metric_variation(p, psi);
  const std::array<double, 10> mm = mass_metric_variation(p, psi);
  Mat4 q_hi;  // psi^T Q^{ab e} nabla_e psi
  for (int k = 0; k < 10; ++k) {
    const auto [a, b] = kSymPairs[k];
    double qterm = 0.0;
    for (int e = 0; e < 4; ++e) qterm += bilinear(psi.v, pq.Q[k][e], nab[e]);
    q_hi(a, b) = q_hi(b, a) = qterm;
    out.total_numeric[k] = md[k] + cfg.mu * mm[k] + cfg.kappa * grav[k];
    out.total_formula[k] = w * (bilinear(psi.v, amat[k], dpsi_mu) + bilinear(psi.v, pq.P[k], psi.v) + qterm) +
                           cfg.kappa * s * 8.0 * w * g_hi(a, b);
  }
  // s 8 kappa G^ab + psi^T Q^abe nabla_e psi = 0 when D psi + mu psi = 0 and P = 0.
  out.einstein_lo = p.curv.einstein_lo;
  out.source_lo = (-s / (8.0 * cfg.kappa)) * (p.mj.g * q_hi * p.mj.g);
  out.residual = out.einstein_lo - out.source_lo;
  return out;
}

}  // namespace cliffcheck
