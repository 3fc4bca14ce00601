#pragma once

// Change of fiber basis e'_a = (B^-1)_a^b e_b extended to Cl_*M, the
// transformation rules of the geometric objects, the invariant scalars, and
// the spin representation of so(g).
//
// Index placement: (B^-1)_a^b is the matrix entry B_inv(b, a), so the primed
// metric is g' = B^-T g B^-1. B^ maps components in the unprimed basis to
// components in the primed one; it is built with the Clifford structure of
// g', while B^^-1 = (B^-1)^ is built with that of g.

#include <array>

#include "cliffcheck/variational.hpp"

namespace cliffcheck {

/// Position-dependent basis change given entrywise by expressions.
struct BasisChangeField {
  std::array<Expression, 16> entries;  // row-major

  static BasisChangeField constant(const Mat4& b);
  /// Identity plus `amplitude` times random quadratics in box-normalized
  /// coordinates.
  static BasisChangeField random_polynomial(Rng& rng, const Box& box, double amplitude);
};

struct BasisChangeJet {
  Mat4 B;
  std::array<Mat4, 4> dB{};  // dB[b] = d_b B
  Mat4 B_inv;
  Mat4 g_primed;
  Mat16 Bhat;
  Mat16 Bhat_inv;
  std::array<Mat16, 4> dBhat{};
  std::array<Mat16, 4> dBhat_inv{};
  std::array<Mat16, 16> ddBhat{};  // [b * 4 + c] = d_b d_c B^

  /// Second-order jets of B, B^-1, B^ and B^^-1 for rebuild routes.
  Mat<Jet2, 4> B_jet;
  Mat<Jet2, 4> B_inv_jet;
  Mat<Jet2, 4> g_primed_jet;
};

/// Throws NonInvertible when B is singular at the point.
BasisChangeJet basis_change_jet(const MetricJet& mj, const BasisChangeField& field);

struct PrimedBundle {
  Mat16 ghat;
  std::array<Mat16, 4> gamma_hat{};
  std::array<Mat16, 4> gamma_lo{};
  std::array<Mat16, 4> gamma_hi{};
  FiberCurvature<double> omega_hat{};
};

/// Primed objects from the transformation rules.
PrimedBundle primed_bundle(const GeometryPoint& p, const BasisChangeJet& bc);

/// Primed objects rebuilt from g' alone: ghat' and gammas from the context of
/// g', Gamma^' from the Koszul formula in the non-holonomic frame e'_a, and
/// Omega^' as the frame curvature of that connection including the
/// structure-function term.
PrimedBundle rebuilt_primed_bundle(const GeometryPoint& p, const BasisChangeJet& bc);

/// Field, gradient and Hessian of psi' = B^ psi in coordinate directions.
SpinorJet transform_spinor(const BasisChangeJet& bc, const SpinorJet& psi);

/// Dirac operator in the primed frame: gamma'^a (e'_a psi' + Gamma^'_a psi').
Multivector primed_dirac(const PrimedBundle& pb, const BasisChangeJet& bc, const SpinorJet& psi_primed);

/// max |D' psi' - B^ D psi|.
double verify_dirac_covariance(const GeometryPoint& p, const BasisChangeJet& bc, const SpinorJet& psi);

struct InvariantScalars {
  double s_m = 0.0;   // psi^T ghat psi
  double s_d = 0.0;   // psi^T ghat D psi
  double t_1 = 0.0;   // tr_k(gamma^a gamma^b Omega^_ab), k = 1, 2, 16
  double t_2 = 0.0;
  double t_16 = 0.0;
};

InvariantScalars invariant_scalars(const Mat16& ghat, const Gammas<double>& gamma_hi, const FiberCurvature<double>& ohat,
                                   const Multivector& psi, const Multivector& dirac_psi);
InvariantScalars invariant_scalars(const GeometryPoint& p, const SpinorJet& psi);
InvariantScalars primed_invariant_scalars(const PrimedBundle& pb, const BasisChangeJet& bc, const SpinorJet& psi);

/// sum_ab gamma^a gamma^b F_ab.
Mat16 gamma_gamma_contract_all(const Gammas<double>& hi, const FiberCurvature<double>& f);

/// General change of basis on Cl_*M given by an invertible 16 x 16 A fixing
/// e_0: returns |psi'^T ghat' psi' - psi^T ghat psi| with psi' = A psi and
/// ghat' = A^-T ghat A^-1.
double general_change_mass_defect(const Mat16& ghat, const Mat16& a, const Multivector& psi);

struct LorentzGenerator {
  Mat4 L;
  Mat16 sigma_L;
};

/// u ^g v = (u v^T - v u^T) g with sigma = 1/4 (gamma_u gamma_v - gamma_v gamma_u).
LorentzGenerator lorentz_generator(const Vec4& u, const Vec4& v, const CliffordContext& ctx);
/// sigma extended linearly over so(g) through the basis e_a ^g e_b, a < b.
Mat16 spin_representation(const Mat4& L, const CliffordContext& ctx);

struct SpinActionReport {
  double lambda_isometry = 0.0;  // |Lambda^T g Lambda - g|
  double s_isometry = 0.0;       // |S^T ghat S - ghat|
  double conjugation = 0.0;      // max_v |S gamma_v S^-1 - gamma_{Lambda v}|
  Mat4 Lambda;
  Mat16 S;
};

/// Lambda = exp(t L), S = exp(t sigma(L)); conjugation is checked on the four
/// basis vectors and on `extra`.
SpinActionReport spin_action_check(const LorentzGenerator& gen, const CliffordContext& ctx, double t,
                                   const std::vector<Vec4>& extra = {});

}  // namespace cliffcheck
