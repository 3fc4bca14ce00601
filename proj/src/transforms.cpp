#include "cliffcheck/transforms.hpp"

#include <cmath>

namespace cliffcheck {

namespace {

Jet1 drop(const Jet2& a) {
  Jet1 r;
  r.v = a.v;
  for (int k = 0; k < 4; ++k) r.d[k] = a.d[k];
  return r;
}

/// d_r a, keeping its first derivatives.
Jet1 partial(const Jet2& a, int r) {
  Jet1 j;
  j.v = a.d[r];
  for (int k = 0; k < 4; ++k) j.d[k] = a.hess(r, k);
  return j;
}

template <std::size_t N>
Mat<Jet1, N> drop(const Mat<Jet2, N>& m) {
  return map_entries(m, [](const Jet2& a) { return drop(a); });
}

template <std::size_t N>
Mat<Jet1, N> partial(const Mat<Jet2, N>& m, int r) {
  return map_entries(m, [r](const Jet2& a) { return partial(a, r); });
}

template <std::size_t N>
Mat<double, N> jet_value(const Mat<Jet2, N>& m) {
  return map_entries(m, [](const Jet2& a) { return a.v; });
}

template <std::size_t N>
Mat<double, N> jet_grad(const Mat<Jet2, N>& m, int b) {
  return map_entries(m, [b](const Jet2& a) { return a.d[b]; });
}

template <std::size_t N>
Mat<double, N> jet_hess(const Mat<Jet2, N>& m, int b, int c) {
  return map_entries(m, [b, c](const Jet2& a) { return a.hess(b, c); });
}

/// B^ X B^-1.
Mat16 conjugate(const BasisChangeJet& bc, const Mat16& x) { return bc.Bhat * x * bc.Bhat_inv; }

}  // namespace

BasisChangeField BasisChangeField::constant(const Mat4& b) {
  BasisChangeField f;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) f.entries[i * 4 + j] = Expression::number(b(i, j));
  return f;
}

BasisChangeField BasisChangeField::random_polynomial(Rng& rng, const Box& box, double amplitude) {
  BasisChangeField f;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const Expression q = random_quadratic(rng, box, amplitude);
      f.entries[i * 4 + j] = i == j ? Expression::binary(NodeKind::Add, Expression::number(1.0), q) : q;
    }
  return f;
}

BasisChangeJet basis_change_jet(const MetricJet& mj, const BasisChangeField& field) {
  BasisChangeJet bc;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) bc.B_jet(i, j) = eval_jet(field.entries[i * 4 + j], mj.x);
  bc.B = jet_value(bc.B_jet);
  if (std::abs(determinant(bc.B)) < 1e-12 * std::max(1.0, std::pow(max_abs(bc.B), 4)))
    throw Error(ErrorKind::NonInvertible, "basis change matrix is singular at the point");
  for (int b = 0; b < 4; ++b) bc.dB[b] = jet_grad(bc.B_jet, b);

  bc.B_inv_jet = inverse4(bc.B_jet);
  bc.B_inv = inverse(bc.B);
  const Mat<Jet2, 4> g = metric_taylor(mj);
  bc.g_primed_jet = transpose(bc.B_inv_jet) * g * bc.B_inv_jet;
  bc.g_primed = jet_value(bc.g_primed_jet);

  const Mat<Jet2, 16> bhat = extend_map(make_gamma_lo(bc.g_primed_jet), bc.B_jet);
  const Mat<Jet2, 16> bhat_inv = extend_map(make_gamma_lo(g), bc.B_inv_jet);
  bc.Bhat = jet_value(bhat);
  bc.Bhat_inv = jet_value(bhat_inv);
  for (int b = 0; b < 4; ++b) {
    bc.dBhat[b] = jet_grad(bhat, b);
    bc.dBhat_inv[b] = jet_grad(bhat_inv, b);
    for (int c = 0; c < 4; ++c) bc.ddBhat[b * 4 + c] = jet_hess(bhat, b, c);
  }
  return bc;
}

PrimedBundle primed_bundle(const GeometryPoint& p, const BasisChangeJet& bc) {
  PrimedBundle pb;
  pb.ghat = transpose(bc.Bhat_inv) * p.ctx.ghat * bc.Bhat_inv;
  for (int a = 0; a < 4; ++a) {
    Mat16 lo, hi, gh;
    for (int b = 0; b < 4; ++b) {
      add_scaled(lo, bc.B_inv(b, a), p.ctx.gamma_lo[b]);
      add_scaled(hi, bc.B(a, b), p.ctx.gamma_hi[b]);
      add_scaled(gh, bc.B_inv(b, a), bc.Bhat * p.ext.gamma_hat[b] - bc.dBhat[b]);
    }
    pb.gamma_lo[a] = conjugate(bc, lo);
    pb.gamma_hi[a] = conjugate(bc, hi);
    pb.gamma_hat[a] = gh * bc.Bhat_inv;
  }
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      Mat16 m;
      for (int r = 0; r < 4; ++r)
        for (int s = 0; s < 4; ++s) {
          const double c = bc.B_inv(r, a) * bc.B_inv(s, b);
          if (c != 0.0) add_scaled(m, c, p.ohat.omega_hat[r * 4 + s]);
        }
      pb.omega_hat[a * 4 + b] = conjugate(bc, m);
    }
  return pb;
}

PrimedBundle rebuilt_primed_bundle(const GeometryPoint&, const BasisChangeJet& bc) {
  const CliffordContext cp = build_context(MetricPoint(bc.g_primed));
  PrimedBundle pb;
  pb.ghat = cp.ghat;
  pb.gamma_lo = cp.gamma_lo;
  pb.gamma_hi = cp.gamma_hi;

  const Mat<Jet1, 4> a1 = drop(bc.B_inv_jet);  // e'_a = a1(r, a) d_r
  const Mat<Jet1, 4> b1 = drop(bc.B_jet);
  const Mat<Jet1, 4> gp1 = drop(bc.g_primed_jet);
  const Mat<Jet1, 4> gp_inv1 = inverse4(gp1);
  std::array<Mat<Jet1, 4>, 4> dgp, da;
  for (int r = 0; r < 4; ++r) {
    dgp[r] = partial(bc.g_primed_jet, r);
    da[r] = partial(bc.B_inv_jet, r);
  }

  // e'_a(g'), and the structure functions [e'_a, e'_b] = c^m_ab e'_m.
  std::array<Mat<Jet1, 4>, 4> eg;
  std::array<std::array<Vec<Jet1, 4>, 4>, 4> cup;
  for (int a = 0; a < 4; ++a) {
    for (int r = 0; r < 4; ++r)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) eg[a](i, j) += a1(r, a) * dgp[r](i, j);
    for (int b = 0; b < 4; ++b) {
      Vec<Jet1, 4> w{};
      for (int n = 0; n < 4; ++n)
        for (int r = 0; r < 4; ++r) w[n] += a1(r, a) * da[r](n, b) - a1(r, b) * da[r](n, a);
      for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) cup[a][b][m] += b1(m, n) * w[n];
    }
  }
  auto c_lo = [&](int a, int b, int m) {
    Jet1 s(0.0);
    for (int k = 0; k < 4; ++k) s += cup[a][b][k] * gp1(k, m);
    return s;
  };

  Connection<Jet1> conn;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      Vec<Jet1, 4> lowered;
      for (int m = 0; m < 4; ++m)
        lowered[m] = 0.5 * (eg[a](b, m) + eg[b](a, m) - eg[m](a, b) + c_lo(a, b, m) - c_lo(a, m, b) - c_lo(b, m, a));
      for (int m = 0; m < 4; ++m) {
        Jet1 s(0.0);
        for (int k = 0; k < 4; ++k) s += gp_inv1(m, k) * lowered[k];
        conn[a](m, b) = s;
      }
    }
  const FiberConnection<Jet1> gh = extended_connection_from(make_gamma_lo(gp1), conn);
  for (int a = 0; a < 4; ++a) pb.gamma_hat[a] = value_part(gh[a]);

  // e'_a(Gamma^'_b) - e'_b(Gamma^'_a) + [Gamma^'_a, Gamma^'_b] - c^m_ab Gamma^'_m.
  std::array<std::array<Mat16, 4>, 4> frame_d;  // [a][b] = e'_a(Gamma^'_b)
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int r = 0; r < 4; ++r) add_scaled(frame_d[a][b], a1(r, a).v, derivative_part(gh[b], r));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      Mat16 m = frame_d[a][b] - frame_d[b][a] + commutator(pb.gamma_hat[a], pb.gamma_hat[b]);
      for (int k = 0; k < 4; ++k) add_scaled(m, -cup[a][b][k].v, pb.gamma_hat[k]);
      pb.omega_hat[a * 4 + b] = m;
    }
  return pb;
}

SpinorJet transform_spinor(const BasisChangeJet& bc, const SpinorJet& psi) {
  SpinorJet out;
  out.v = bc.Bhat * psi.v;
  for (int b = 0; b < 4; ++b) out.d[b] = bc.dBhat[b] * psi.v + bc.Bhat * psi.d[b];
  for (int b = 0; b < 4; ++b)
    for (int c = 0; c < 4; ++c)
      out.dd[b * 4 + c] = bc.ddBhat[b * 4 + c] * psi.v + bc.dBhat[b] * psi.d[c] + bc.dBhat[c] * psi.d[b] +
                          bc.Bhat * psi.dd[b * 4 + c];
  return out;
}

Multivector primed_dirac(const PrimedBundle& pb, const BasisChangeJet& bc, const SpinorJet& psi_primed) {
  Multivector out{};
  for (int a = 0; a < 4; ++a) {
    Multivector nab = pb.gamma_hat[a] * psi_primed.v;
    for (int r = 0; r < 4; ++r) nab = nab + bc.B_inv(r, a) * psi_primed.d[r];
    out = out + pb.gamma_hi[a] * nab;
  }
  return out;
}

double verify_dirac_covariance(const GeometryPoint& p, const BasisChangeJet& bc, const SpinorJet& psi) {
  const PrimedBundle pb = primed_bundle(p, bc);
  const Multivector lhs = primed_dirac(pb, bc, transform_spinor(bc, psi));
  const Multivector rhs = bc.Bhat * dirac_operator(p.ctx, p.ext, psi.v, psi.d);
  return max_abs(lhs - rhs);
}

Mat16 gamma_gamma_contract_all(const Gammas<double>& hi, const FiberCurvature<double>& f) {
  Mat16 m;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if (a != b) m += hi[a] * hi[b] * f[a * 4 + b];
  return m;
}

InvariantScalars invariant_scalars(const Mat16& ghat, const Gammas<double>& gamma_hi, const FiberCurvature<double>& ohat,
                                   const Multivector& psi, const Multivector& dirac_psi) {
  InvariantScalars s;
  s.s_m = bilinear(psi, ghat, psi);
  s.s_d = bilinear(psi, ghat, dirac_psi);
  const auto t = characteristic_traces(gamma_gamma_contract_all(gamma_hi, ohat));
  s.t_1 = t[1];
  s.t_2 = t[2];
  s.t_16 = t[16];
  return s;
}

InvariantScalars invariant_scalars(const GeometryPoint& p, const SpinorJet& psi) {
  return invariant_scalars(p.ctx.ghat, p.ctx.gamma_hi, p.ohat.omega_hat, psi.v,
                           dirac_operator(p.ctx, p.ext, psi.v, psi.d));
}

InvariantScalars primed_invariant_scalars(const PrimedBundle& pb, const BasisChangeJet& bc, const SpinorJet& psi) {
  const SpinorJet pp = transform_spinor(bc, psi);
  return invariant_scalars(pb.ghat, pb.gamma_hi, pb.omega_hat, pp.v, primed_dirac(pb, bc, pp));
}

double general_change_mass_defect(const Mat16& ghat, const Mat16& a, const Multivector& psi) {
  const Mat16 a_inv = inverse(a);
  const Mat16 ghat_p = transpose(a_inv) * ghat * a_inv;
  const Multivector pp = a * psi;
  return std::abs(bilinear(pp, ghat_p, pp) - bilinear(psi, ghat, psi));
}

LorentzGenerator lorentz_generator(const Vec4& u, const Vec4& v, const CliffordContext& ctx) {
  Mat4 w;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) w(i, j) = u[i] * v[j] - v[i] * u[j];
  Mat16 gu, gv;
  for (int a = 0; a < 4; ++a) {
    add_scaled(gu, u[a], ctx.gamma_lo[a]);
    add_scaled(gv, v[a], ctx.gamma_lo[a]);
  }
  return {w * ctx.g, 0.25 * commutator(gu, gv)};
}

Mat16 spin_representation(const Mat4& L, const CliffordContext& ctx) {
  const Mat4 c = L * ctx.g_inv;
  Mat16 s;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      if (c(a, b) != 0.0) add_scaled(s, 0.25 * c(a, b), commutator(ctx.gamma_lo[a], ctx.gamma_lo[b]));
  return s;
}

SpinActionReport spin_action_check(const LorentzGenerator& gen, const CliffordContext& ctx, double t,
                                   const std::vector<Vec4>& extra) {
  SpinActionReport r;
  r.Lambda = matrix_exp(t * gen.L);
  r.S = matrix_exp(t * gen.sigma_L);
  const Mat16 s_inv = matrix_exp(-t * gen.sigma_L);
  r.lambda_isometry = max_abs(transpose(r.Lambda) * ctx.g * r.Lambda - ctx.g);
  r.s_isometry = max_abs(transpose(r.S) * ctx.ghat * r.S - ctx.ghat);

  std::vector<Vec4> vs = extra;
  for (int a = 0; a < 4; ++a) {
    Vec4 e{};
    e[a] = 1.0;
    vs.push_back(e);
  }
  for (const Vec4& v : vs) {
    const Vec4 lv = r.Lambda * v;
    Mat16 gv, glv;
    for (int a = 0; a < 4; ++a) {
      add_scaled(gv, v[a], ctx.gamma_lo[a]);
      add_scaled(glv, lv[a], ctx.gamma_lo[a]);
    }
    r.conjugation = std::max(r.conjugation, max_abs(r.S * gv * s_inv - glv));
  }
  return r;
}

}  // namespace cliffcheck
