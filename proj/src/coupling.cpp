#include "cliffcheck/coupling.hpp"

#include <algorithm>
#include <cmath>

namespace cliffcheck {

ThetaJet ThetaField::eval(const Vec4& x) const {
  ThetaJet t;
  for (int a = 0; a < 4; ++a)
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j) {
        const Expression& e = entries[a][i * 16 + j];
        if (e.kind() == NodeKind::Number && e.number_value() == 0.0) continue;
        const Jet2 v = eval_jet(e, x);
        t.theta[a](i, j) = v.v;
        for (int b = 0; b < 4; ++b) t.dtheta[b][a](i, j) = v.d[b];
      }
  return t;
}

ThetaField ThetaField::constant(const FiberConnection<double>& theta) {
  ThetaField f;
  for (int a = 0; a < 4; ++a)
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j)
        if (theta[a](i, j) != 0.0) f.entries[a][i * 16 + j] = Expression::number(theta[a](i, j));
  return f;
}

ThetaField parse_theta_text(std::string_view text) {
  const ExpressionTable t = parse_expression_table(text, "theta", {4, 16, 16});
  ThetaField f;
  for (const auto& [idx, e] : t.entries) f.entries[idx[0]][idx[1] * 16 + idx[2]] = e;
  return f;
}

BasisChangeField parse_basis_change_text(std::string_view text) {
  const ExpressionTable t = parse_expression_table(text, "B", {4, 4});
  BasisChangeField f;
  for (const auto& [idx, e] : t.entries) f.entries[idx[0] * 4 + idx[1]] = e;
  return f;
}

ThetaJet right_multiplication_theta(const MetricJet& mj, const std::array<Multivector, 4>& u) {
  const auto left = make_left_multipliers(make_gamma_lo(lift(mj.g, mj.dg)));
  ThetaJet t;
  for (int a = 0; a < 4; ++a) {
    Vec<Jet1, 16> ua;
    for (int i = 0; i < 16; ++i) ua[i] = Jet1(u[a][i]);
    const Mat<Jet1, 16> rho = right_multiplication(left, ua);
    t.theta[a] = value_part(rho);
    for (int b = 0; b < 4; ++b) t.dtheta[b][a] = derivative_part(rho, b);
  }
  return t;
}

TotalConnection total_connection(const ExtendedConnectionPoint& ecp, const ThetaJet& theta) {
  TotalConnection tc;
  for (int a = 0; a < 4; ++a) {
    tc.C[a] = ecp.gamma_hat[a] + theta.theta[a];
    for (int b = 0; b < 4; ++b) tc.dC[b][a] = ecp.d_gamma_hat[b][a] + theta.dtheta[b][a];
  }
  return tc;
}

double ThetaAdmissibility::antisymmetry_max() const {
  return *std::max_element(antisymmetry.begin(), antisymmetry.end());
}

ThetaAdmissibility theta_admissible(const Mat16& ghat, const Gammas<double>& gamma_hi,
                                    const FiberConnection<double>& theta) {
  ThetaAdmissibility r;
  Mat16 sum;
  for (int a = 0; a < 4; ++a) {
    r.antisymmetry[a] = max_abs(transpose(theta[a]) * ghat + ghat * theta[a]);
    sum += commutator(gamma_hi[a], theta[a]);
    for (int b = 0; b < 4; ++b) r.per_pair = std::max(r.per_pair, max_abs(commutator(gamma_hi[a], theta[b])));
  }
  r.summed = max_abs(sum);
  return r;
}

ThetaAdmissibility theta_admissible(const CliffordContext& ctx, const FiberConnection<double>& theta) {
  return theta_admissible(ctx.ghat, ctx.gamma_hi, theta);
}

FiberCurvature<double> total_curvature(const TotalConnection& tc) { return curvature_from(tc.C, tc.dC); }

GaugeLagrangians gauge_lagrangians(const CliffordContext& ctx, double omega, const FiberCurvature<double>& f,
                                   const VariationConfig& cfg) {
  GaugeLagrangians l;
  const Mat16 m = gamma_gamma_contract_all(ctx.gamma_hi, f);
  const auto t = characteristic_traces(m);
  l.tr_ggF = omega * t[1];
  l.tr2_ggF = omega * t[2];
  double tk = 1.0;
  for (int k = 0; k <= 16; ++k) {
    l.det_expansion[k] = omega * tk * t[k];
    tk *= cfg.tau;
  }
  l.det_direct = omega * determinant(Mat16::identity() + cfg.tau * m);

  double ff = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      Mat16 up;
      for (int r = 0; r < 4; ++r)
        for (int s = 0; s < 4; ++s) {
          const double c = ctx.g_inv(a, r) * ctx.g_inv(b, s);
          if (c != 0.0) add_scaled(up, c, f[r * 4 + s]);
        }
      ff += trace_product(f[a * 4 + b], up);
    }
  l.tr_FF = omega * ff;
  return l;
}

FiberConnection<double> transform_theta(const BasisChangeJet& bc, const FiberConnection<double>& theta) {
  FiberConnection<double> out;
  for (int a = 0; a < 4; ++a) {
    Mat16 m;
    for (int b = 0; b < 4; ++b) add_scaled(m, bc.B_inv(b, a), theta[b]);
    out[a] = bc.Bhat * m * bc.Bhat_inv;
  }
  return out;
}

FiberConnection<double> transform_connection(const BasisChangeJet& bc, const FiberConnection<double>& c) {
  FiberConnection<double> out;
  for (int a = 0; a < 4; ++a) {
    Mat16 m;
    for (int b = 0; b < 4; ++b) add_scaled(m, bc.B_inv(b, a), bc.Bhat * c[b] - bc.dBhat[b]);
    out[a] = m * bc.Bhat_inv;
  }
  return out;
}

}  // namespace cliffcheck
