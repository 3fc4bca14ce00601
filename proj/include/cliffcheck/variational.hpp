#pragma once

// Lagrangian densities and their field and metric variations.
//
// Metric-variation convention: a derivative "d/dg_ab" perturbs the symmetric
// pair (a, b) through the matrix E_ab, which has 1 at (a, a) when a == b and
// 1/2 at both (a, b) and (b, a) otherwise. With this convention
// d omega / d g_ab = 1/2 g^ab omega for every pair. The same matrices are used
// for the first-derivative slots g_{ab,e} and, tensored with the symmetric
// pair (e, m), for the second-derivative slots g_{ab,em}.

#include <array>
#include <utility>

#include "cliffcheck/geometry.hpp"

namespace cliffcheck {

/// The ten pairs (a, b) with a <= b, in row-major order.
inline constexpr std::array<std::pair<int, int>, 10> kSymPairs = {
    {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 1}, {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 3}}};

int sym_pair_index(int a, int b);
Mat4 sym_unit(int a, int b);

struct VariationConfig {
  double mu = 1.0;
  double kappa = 1.0;
  double lambda = 0.0;
  double tau = 1.0;
};

/// Value, gradient and Hessian of a spinor field at a point.
struct SpinorJet {
  Multivector v{};
  std::array<Multivector, 4> d{};
  std::array<Multivector, 16> dd{};  // dd[mu * 4 + nu]
};

struct SpinorPolyField {
  std::array<Expression, 16> components;

  SpinorJet eval(const Vec4& x) const;
  /// Degree <= 2 polynomial in box-normalized coordinates, coefficients in
  /// [-1, 1].
  static SpinorPolyField random(Rng& rng, const Box& box);
};

// ---------------------------------------------------------------------------
// Generic densities, written once so that every derivative is obtained by
// seeding jets into the same code.

template <class S>
S mass_density_from(const Mat<S, 4>& g, const Vec<S, 16>& psi) {
  using std::sqrt;
  const CliffordContextT<S> c = make_context(g);
  return sqrt(-det4(g)) * bilinear(psi, c.ghat, psi);
}

/// omega psi^T ghat gamma^r (d_r psi + Gamma^_r psi).
template <class S>
S dirac_density_from(const Mat<S, 4>& g, const std::array<Mat<S, 4>, 4>& dg, const Vec<S, 16>& psi,
                     const std::array<Vec<S, 16>, 4>& dpsi) {
  using std::sqrt;
  const CliffordContextT<S> c = make_context(g);
  const FiberConnection<S> gh = extended_connection_from(c.gamma_lo, christoffel_from(c.g_inv, dg));
  Vec<S, 16> dpsi_total{};
  for (int r = 0; r < 4; ++r) dpsi_total = dpsi_total + c.gamma_hi[r] * (dpsi[r] + gh[r] * psi);
  return sqrt(-det4(g)) * bilinear(psi, c.ghat, dpsi_total);
}

// ---------------------------------------------------------------------------

struct LagrangianDensities {
  double mass = 0.0;      // L_m = omega psi^T ghat psi
  double dirac = 0.0;     // L_d = omega psi^T ghat D psi
  double gravity = 0.0;   // L_g = omega tr(gamma^a gamma^b Omega^_ab)
  double cosmo = 0.0;     // L_c = lambda omega
};

LagrangianDensities lagrangian_densities(const GeometryPoint& p, const SpinorJet& psi, const VariationConfig& cfg);

struct FieldVariation {
  Multivector mass{};
  Multivector dirac{};
};

/// Closed forms 2 omega ghat psi and 2 omega ghat D psi.
FieldVariation field_variation(const GeometryPoint& p, const SpinorJet& psi);
/// dL/dpsi - d_a (dL/dpsi_a), by jet differentiation of the densities.
FieldVariation field_variation_numeric(const GeometryPoint& p, const SpinorJet& psi);

/// D psi + mu psi.
Multivector dirac_residual(const CliffordContext& ctx, const ExtendedConnectionPoint& ecp, const SpinorJet& psi,
                           double mu);

using PairMatrices = std::array<Mat16, 10>;
/// Indexed [pair][eps].
using QMatrices = std::array<std::array<Mat16, 4>, 10>;

/// A^ab = 1/2 g^ab ghat + d ghat / d g_ab.
PairMatrices metric_variation_A(const GeometryPoint& p);

struct PQ {
  PairMatrices P;         // ghat P~ with the commutator form of P~
  PairMatrices P_direct;  // term-by-term form before the compatibility rewrites
  QMatrices Q;
};

PQ metric_variation_PQ(const GeometryPoint& p);

/// S(a e): reflection of the 2-plane spanned by e_a and e_e.
Mat4 reflection_2plane(int a, int e);
/// S(a b e): the 16 x 16 diagonal map flipping e_{ae}, e_{(ae)*}, e_b, e_{b*}.
Mat16 reflection_4plane(int a, int b, int e);
/// K(a b e) for a <= b.
Mat16 k_matrix(int a, int b, int e);

/// -1/2 ghat K(abe) gamma^a gamma^b gamma^e; UnsupportedMetric if the metric
/// is not diagonal unless `allow_nondiagonal`.
QMatrices closed_form_Q(const GeometryPoint& p, bool allow_nondiagonal = false);

/// Metric variations delta L / delta g_ab, obtained as
/// dL/dg - d_e dL/dg_e + d_e d_m dL/dg_em with all partials from jets and the
/// metric field represented by its second-order Taylor polynomial.
std::array<double, 10> mass_metric_variation(const GeometryPoint& p, const SpinorJet& psi);
std::array<double, 10> dirac_metric_variation(const GeometryPoint& p, const SpinorJet& psi);
std::array<double, 10> gravity_metric_variation(const GeometryPoint& p);

struct EinsteinCoupling {
  /// Sign s in delta L_g / delta g_ab = s 8 omega G^ab selected by comparing
  /// the numeric variation of L_g with 8 omega G^ab; 0 when G vanishes at
  /// the point (vacuum) and the sign cannot be read off.
  int gravity_sign = 0;
  double gravity_sign_error = 0.0;
  Mat4 einstein_lo;
  Mat4 source_lo;  // matter side of G_ab = source_ab for psi solving the Dirac equation
  Mat4 residual;   // einstein_lo - source_lo
  /// delta(L_d + mu L_m + kappa L_g) / delta g_ab, numeric and from the
  /// A, P, Q decomposition plus s 8 kappa omega G^ab.
  std::array<double, 10> total_numeric{};
  std::array<double, 10> total_formula{};
};

EinsteinCoupling einstein_coupling(const GeometryPoint& p, const SpinorJet& psi, const VariationConfig& cfg);

}  // namespace cliffcheck
