#include "cliffcheck/geometry.hpp"

#include <cmath>

namespace cliffcheck {

ConnectionPoint christoffel(const MetricJet& mj) {
  const Mat<Jet1, 4> gx = lift(mj.g, mj.dg);
  const auto dgx = lift_first(mj.dg, mj.ddg);
  const Connection<Jet1> cx = christoffel_from(inverse4(gx), dgx);

  ConnectionPoint cp;
  for (int a = 0; a < 4; ++a) {
    cp.gamma2[a] = value_part(cx[a]);
    for (int e = 0; e < 4; ++e) cp.dgamma2[e][a] = derivative_part(cx[a], e);
  }
  for (int nu = 0; nu < 4; ++nu)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        cp.gamma1[nu](a, b) = 0.5 * (mj.dg[b](nu, a) - mj.dg[nu](a, b) + mj.dg[a](b, nu));
  return cp;
}

ExtendedConnectionPoint extended_christoffel(const MetricJet& mj) {
  const Mat<Jet1, 4> gx = lift(mj.g, mj.dg);
  const auto dgx = lift_first(mj.dg, mj.ddg);
  const CliffordContextT<Jet1> cx = make_context(gx);
  const FiberConnection<Jet1> gh = extended_connection_from(cx.gamma_lo, christoffel_from(cx.g_inv, dgx));

  ExtendedConnectionPoint e;
  for (int a = 0; a < 4; ++a) {
    e.gamma_hat[a] = value_part(gh[a]);
    for (int b = 0; b < 4; ++b) {
      e.d_gamma_hat[b][a] = derivative_part(gh[a], b);
      e.d_gamma_lo[b][a] = derivative_part(cx.gamma_lo[a], b);
      e.d_gamma_hi[b][a] = derivative_part(cx.gamma_hi[a], b);
    }
    e.d_ghat[a] = derivative_part(cx.ghat, a);
  }
  return e;
}

ExtendedCurvaturePoint extended_curvature(const ExtendedConnectionPoint& ecp) {
  return {curvature_from(ecp.gamma_hat, ecp.d_gamma_hat)};
}

CurvaturePoint riemann_ricci(const MetricJet& mj, const ConnectionPoint& cp) {
  CurvaturePoint c;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const Mat4 om = cp.dgamma2[a][b] - cp.dgamma2[b][a] + commutator(cp.gamma2[a], cp.gamma2[b]);
      for (int r = 0; r < 4; ++r)
        for (int s = 0; s < 4; ++s) c.riemann[((r * 4 + s) * 4 + a) * 4 + b] = om(r, s);
    }
  for (int s = 0; s < 4; ++s)
    for (int b = 0; b < 4; ++b) {
      double v = 0.0;
      for (int r = 0; r < 4; ++r) v += c.R(r, s, r, b);
      c.ricci(s, b) = v;
    }
  c.scalar = trace_product(mj.g_inv, c.ricci);
  c.einstein_lo = c.ricci - 0.5 * c.scalar * mj.g;
  c.einstein_hi = mj.g_inv * c.einstein_lo * mj.g_inv;
  return c;
}

Multivector dirac_operator(const CliffordContext& ctx, const ExtendedConnectionPoint& ecp, const Multivector& psi,
                           const std::array<Multivector, 4>& dpsi) {
  Multivector out{};
  for (int a = 0; a < 4; ++a) out = out + ctx.gamma_hi[a] * (dpsi[a] + ecp.gamma_hat[a] * psi);
  return out;
}

VierbeinPoint vierbein_point(const MetricJet& mj) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j && (mj.g(i, j) != 0.0 || [&] {
            for (const auto& d : mj.dg)
              if (d(i, j) != 0.0) return true;
            return false;
          }()))
        throw Error(ErrorKind::UnsupportedMetric, "the vierbein is only constructed for diagonal metrics");
  VierbeinPoint vb;
  vb.eta = minkowski_metric();
  for (int mu = 0; mu < 4; ++mu) {
    const double gm = mj.g(mu, mu);
    const double sign = gm < 0.0 ? -1.0 : 1.0;
    if ((sign < 0.0) != (vb.eta(mu, mu) < 0.0))
      throw Error(ErrorKind::UnsupportedMetric, "diagonal signature does not match the vierbein frame");
    const double e = std::sqrt(std::abs(gm));
    vb.e(mu, mu) = e;
    for (int nu = 0; nu < 4; ++nu) vb.de[nu](mu, mu) = sign * mj.dg[nu](mu, mu) / (2.0 * e);
  }
  vb.gamma_flat = make_gamma_lo(vb.eta);
  return vb;
}

FiberConnection<double> spin_connection(const VierbeinPoint& vb, const ConnectionPoint& cp) {
  // gamma_mu = e_mu^a gamma_a, gamma^mu = g^{mu nu} gamma_nu with g = e eta e^T.
  Gammas<double> lo;
  std::array<Gammas<double>, 4> dlo;  // [mu][nu] = d_mu gamma_nu
  for (int nu = 0; nu < 4; ++nu)
    for (int a = 0; a < 4; ++a) {
      add_scaled(lo[nu], vb.e(nu, a), vb.gamma_flat[a]);
      for (int mu = 0; mu < 4; ++mu) add_scaled(dlo[mu][nu], vb.de[mu](nu, a), vb.gamma_flat[a]);
    }
  const Mat4 g = vb.e * vb.eta * transpose(vb.e);
  const Gammas<double> hi = raise_gammas(inverse4(g), lo);

  FiberConnection<double> s;
  for (int mu = 0; mu < 4; ++mu) {
    Mat16 m;
    for (int nu = 0; nu < 4; ++nu) {
      m += commutator(hi[nu], dlo[mu][nu]);
      for (int rho = 0; rho < 4; ++rho) {
        const double c = cp(rho, nu, mu);
        if (c != 0.0) add_scaled(m, -c, commutator(hi[nu], lo[rho]));
      }
    }
    s[mu] = 0.125 * m;
  }
  return s;
}

double metric_compat_defect(const Mat16& ghat, const std::array<Mat16, 4>& d_ghat, const FiberConnection<double>& c) {
  double worst = 0.0;
  for (int a = 0; a < 4; ++a)
    worst = std::max(worst, max_abs(transpose(c[a]) * ghat + ghat * c[a] - d_ghat[a]));
  return worst;
}

GeometryPoint geometry_point(const MetricJet& mj) {
  GeometryPoint p;
  p.mj = mj;
  p.ctx = build_context(MetricPoint(mj.g));
  p.conn = christoffel(mj);
  p.ext = extended_christoffel(mj);
  p.curv = riemann_ricci(mj, p.conn);
  p.ohat = extended_curvature(p.ext);
  return p;
}

}  // namespace cliffcheck
