#pragma once

// Total connection C_a = Gamma^_a + theta_a, admissibility of theta,
// right-multiplication candidates and the gauge Lagrangian variants.

#include <array>
#include <string_view>

#include "cliffcheck/transforms.hpp"

namespace cliffcheck {

/// theta_a and dtheta[b][a] = d_b theta_a at one point.
struct ThetaJet {
  FiberConnection<double> theta{};
  std::array<FiberConnection<double>, 4> dtheta{};
};

/// Four 16 x 16 matrices of expressions; missing entries are zero.
struct ThetaField {
  std::array<std::array<Expression, 256>, 4> entries;  // [a][i * 16 + j]

  ThetaJet eval(const Vec4& x) const;
  static ThetaField constant(const FiberConnection<double>& theta);
};

/// Reads lines `theta[a][i][j] = expr` (and an optional `name = ...`).
ThetaField parse_theta_text(std::string_view text);
/// Reads lines `B[i][j] = expr`.
BasisChangeField parse_basis_change_text(std::string_view text);

/// theta_a = rho_{u_a}, right multiplication by u_a in Cl(g(x)), with its
/// coordinate derivatives through the metric.
ThetaJet right_multiplication_theta(const MetricJet& mj, const std::array<Multivector, 4>& u);

struct TotalConnection {
  FiberConnection<double> C{};
  std::array<FiberConnection<double>, 4> dC{};  // dC[b][a] = d_b C_a
};

TotalConnection total_connection(const ExtendedConnectionPoint& ecp, const ThetaJet& theta);

struct ThetaAdmissibility {
  std::array<double, 4> antisymmetry{};  // |theta_a^T ghat + ghat theta_a|
  double per_pair = 0.0;                 // max_ab |[gamma^a, theta_b]|
  double summed = 0.0;                   // |sum_a [gamma^a, theta_a]|

  double antisymmetry_max() const;
};

ThetaAdmissibility theta_admissible(const Mat16& ghat, const Gammas<double>& gamma_hi,
                                    const FiberConnection<double>& theta);
ThetaAdmissibility theta_admissible(const CliffordContext& ctx, const FiberConnection<double>& theta);

/// F_ab = d_a C_b - d_b C_a + [C_a, C_b].
FiberCurvature<double> total_curvature(const TotalConnection& tc);

struct GaugeLagrangians {
  double tr_ggF = 0.0;   // omega tr(gamma^a gamma^b F_ab)
  double tr_FF = 0.0;    // omega tr(F_ab F^ab)
  double tr2_ggF = 0.0;  // omega tr_2(gamma^a gamma^b F_ab)
  std::array<double, 17> det_expansion{};  // omega tau^k tr_k(gamma^a gamma^b F_ab)
  double det_direct = 0.0;                 // omega det(I + tau gamma^a gamma^b F_ab)
};

GaugeLagrangians gauge_lagrangians(const CliffordContext& ctx, double omega, const FiberCurvature<double>& f,
                                   const VariationConfig& cfg);

/// theta'_a = (B^-1)_a^b B^ theta_b B^-1.
FiberConnection<double> transform_theta(const BasisChangeJet& bc, const FiberConnection<double>& theta);
/// C'_a = (B^-1)_a^b (-d_b B^ + B^ C_b) B^-1.
FiberConnection<double> transform_connection(const BasisChangeJet& bc, const FiberConnection<double>& c);

}  // namespace cliffcheck
