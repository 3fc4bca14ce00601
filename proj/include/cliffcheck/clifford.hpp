#pragma once

// Pointwise Clifford algebra of a symmetric 4x4 metric.
//
// The fiber basis is the ordered product basis e_I = e_{i1} e_{i2} ... e_{ik}
// with i1 < i2 < ... < ik, enumerated as
//   {}, 0, 1, 2, 3, 01, 02, 03, 12, 13, 23, 012, 013, 023, 123, 0123.
// Everything is expressed in this basis for any metric, orthogonal or not,
// using e_i e_j = 2 g_ij - e_j e_i and e_i e_i = g_ii.
//
// Matrix convention: column J of a 16x16 matrix M holds the coefficients of
// M e_J, so M(K, J) is the e_K component of M e_J. The same convention is
// used for 4x4 maps on the tangent fiber.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cliffcheck/linalg.hpp"

namespace cliffcheck {

inline constexpr std::size_t kFiberDim = 16;

class MultiIndex {
 public:
  static constexpr std::array<std::uint8_t, 16> kMasks = {0, 1, 2, 4, 8, 3, 5, 9, 6, 10, 12, 7, 11, 13, 14, 15};

  constexpr MultiIndex() = default;

  static constexpr MultiIndex at(std::size_t position) { return MultiIndex(kMasks[position]); }
  static constexpr MultiIndex from_mask(std::uint8_t mask) { return MultiIndex(mask & 15u); }
  /// Builds from strictly increasing indices; throws on anything else.
  static MultiIndex from_indices(const std::vector<int>& indices);

  constexpr std::uint8_t mask() const { return mask_; }
  constexpr int grade() const { return __builtin_popcount(mask_); }
  constexpr std::size_t position() const {
    for (std::size_t p = 0; p < 16; ++p)
      if (kMasks[p] == mask_) return p;
    return 16;
  }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr int first() const { return __builtin_ctz(mask_); }
  constexpr MultiIndex rest() const { return MultiIndex(mask_ & (mask_ - 1)); }
  constexpr MultiIndex complement() const { return MultiIndex(~mask_ & 15u); }
  constexpr bool contains(int i) const { return (mask_ >> i) & 1u; }
  std::vector<int> indices() const;
  /// "e_{}", "e_0", "e_013", ...
  std::string label() const;

  friend constexpr bool operator==(MultiIndex a, MultiIndex b) { return a.mask_ == b.mask_; }

 private:
  constexpr explicit MultiIndex(std::uint8_t mask) : mask_(mask) {}
  std::uint8_t mask_ = 0;
};

/// Position of the basis element with the given index bitmask.
inline std::size_t basis_position(std::uint8_t mask) { return MultiIndex::from_mask(mask).position(); }

/// 16 real coefficients over the canonical basis (spinor field values,
/// multivectors). Grade-1 slots 1..4 hold tangent vectors.
using Multivector = Vec<double, 16>;

template <class S>
using Gammas = std::array<Mat<S, 16>, 4>;

Multivector basis_vector(std::size_t position);
/// Multivector with only grade-1 components v^alpha.
Multivector vector_part(const Vec4& v);

// ---------------------------------------------------------------------------
// Generic builders. S is double or any jet scalar; nothing here branches on
// values, so derivatives propagate exactly.

namespace detail {

template <class S>
Vec<S, 16> left_times_basis(const Mat<S, 4>& g, int beta, MultiIndex idx) {
  Vec<S, 16> col{};
  if (idx.empty()) {
    col[basis_position(std::uint8_t(1u << beta))] = S(1.0);
    return col;
  }
  const int i1 = idx.first();
  const MultiIndex rest = idx.rest();
  if (beta < i1) {
    col[basis_position(std::uint8_t(idx.mask() | (1u << beta)))] = S(1.0);
  } else if (beta == i1) {
    col[rest.position()] = g(beta, beta);
  } else {
    // e_b e_i1 e_rest = 2 g_{b i1} e_rest - e_i1 (e_b e_rest); every index in
    // e_b e_rest exceeds i1, so the prefix by e_i1 stays canonical.
    col[rest.position()] = 2.0 * g(beta, i1);
    const Vec<S, 16> sub = left_times_basis(g, beta, rest);
    for (std::size_t p = 0; p < 16; ++p) {
      if (is_zero(sub[p])) continue;
      const std::uint8_t m = MultiIndex::at(p).mask();
      col[basis_position(std::uint8_t(m | (1u << i1)))] -= sub[p];
    }
  }
  return col;
}

}  // namespace detail

/// gamma_alpha: left Clifford multiplication by e_alpha.
template <class S>
Gammas<S> make_gamma_lo(const Mat<S, 4>& g) {
  Gammas<S> out;
  for (int beta = 0; beta < 4; ++beta)
    for (std::size_t p = 0; p < 16; ++p) out[beta].set_column(p, detail::left_times_basis(g, beta, MultiIndex::at(p)));
  return out;
}

/// gamma^alpha = g^{alpha beta} gamma_beta.
template <class S>
Gammas<S> raise_gammas(const Mat<S, 4>& g_inv, const Gammas<S>& lo) {
  Gammas<S> hi;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) add_scaled(hi[a], g_inv(a, b), lo[b]);
  return hi;
}

/// L_I: left multiplication by e_I, so that e_I e_J = sum_K L_I(K, J) e_K.
template <class S>
std::array<Mat<S, 16>, 16> make_left_multipliers(const Gammas<S>& lo) {
  std::array<Mat<S, 16>, 16> left;
  left[0] = Mat<S, 16>::identity();
  for (std::size_t p = 1; p < 16; ++p) {
    const MultiIndex idx = MultiIndex::at(p);
    if (idx.grade() == 1) {
      left[p] = lo[idx.first()];
    } else {
      left[p] = lo[idx.first()] * left[idx.rest().position()];
    }
  }
  return left;
}

/// Matrix of the dagger involution, (e_{a1..ak})^dagger = (-1)^k e_{ak..a1}.
template <class S>
Mat<S, 16> make_dagger(const Gammas<S>& lo) {
  Mat<S, 16> dag;
  for (std::size_t p = 0; p < 16; ++p) {
    const MultiIndex idx = MultiIndex::at(p);
    const std::vector<int> ind = idx.indices();
    Vec<S, 16> v{};
    if (ind.empty()) {
      v[0] = S(1.0);
    } else {
      v[basis_position(std::uint8_t(1u << ind[0]))] = S(1.0);
      for (std::size_t j = 1; j < ind.size(); ++j) v = lo[ind[j]] * v;
      if (ind.size() % 2 == 1) v = -1.0 * v;
    }
    dag.set_column(p, v);
  }
  return dag;
}

/// Weights s_M of the basis-independent scalar projection
/// <a>_0 = tr(L_a) / 16 = sum_M s_M a^M. For an orthogonal basis s = (1, 0, ..., 0),
/// so the projection is the e_0 coefficient; otherwise the ordered products
/// e_I carry scalar parts of their own (e.g. e_0 e_1 contains g_01).
template <class S>
Vec<S, 16> make_scalar_weights(const std::array<Mat<S, 16>, 16>& left) {
  Vec<S, 16> w{};
  for (std::size_t m = 0; m < 16; ++m) w[m] = trace(left[m]) * (1.0 / 16.0);
  return w;
}

/// ghat_IJ = -1/2 <e_I^dagger e_J + e_J^dagger e_I>_0 with the scalar projection
/// given by `weights`.
template <class S>
Mat<S, 16> make_extended_metric(const Mat<S, 16>& dagger, const std::array<Mat<S, 16>, 16>& left,
                                const Vec<S, 16>& weights) {
  // sp(K, J) = <e_K e_J>_0 = sum_M s_M L_K(M, J).
  Mat<S, 16> sp;
  for (std::size_t k = 0; k < 16; ++k)
    for (std::size_t m = 0; m < 16; ++m) {
      if (is_zero(weights[m])) continue;
      for (std::size_t j = 0; j < 16; ++j)
        if (!is_zero(left[k](m, j))) sp(k, j) += weights[m] * left[k](m, j);
    }
  Mat<S, 16> m = transpose(dagger) * sp;
  Mat<S, 16> out;
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t j = 0; j < 16; ++j) out(i, j) = -0.5 * (m(i, j) + m(j, i));
  return out;
}

/// Multiplicative extension: A^ e_I = (A e_i1) ... (A e_ik), A^ e_0 = e_0.
template <class S>
Mat<S, 16> extend_map(const Gammas<S>& lo, const Mat<S, 4>& a) {
  Mat<S, 16> out;
  out(0, 0) = S(1.0);
  for (std::size_t p = 1; p < 16; ++p) {
    const MultiIndex idx = MultiIndex::at(p);
    const int i1 = idx.first();
    const Vec<S, 16> tail = out.column(idx.rest().position());
    Vec<S, 16> col{};
    for (int b = 0; b < 4; ++b) {
      if (is_zero(a(b, i1))) continue;
      add_scaled(col, a(b, i1), lo[b] * tail);
    }
    out.set_column(p, col);
  }
  return out;
}

/// Leibniz extension of a tangent endomorphism X to the fiber:
/// X^ (e_i1 ... e_ik) = sum_j e_i1 ... (X e_ij) ... e_ik, X^ e_0 = 0.
template <class S>
Mat<S, 16> derivation_extension(const Gammas<S>& lo, const Mat<S, 4>& x) {
  Mat<S, 16> out;
  for (std::size_t p = 1; p < 16; ++p) {
    const MultiIndex idx = MultiIndex::at(p);
    const int i1 = idx.first();
    const std::size_t rest = idx.rest().position();
    Vec<S, 16> col = lo[i1] * out.column(rest);
    for (int b = 0; b < 4; ++b) {
      if (is_zero(x(b, i1))) continue;
      add_scaled(col, x(b, i1), lo[b].column(rest));
    }
    out.set_column(p, col);
  }
  return out;
}

/// Right multiplication psi -> psi u: column J is L_J u.
template <class S>
Mat<S, 16> right_multiplication(const std::array<Mat<S, 16>, 16>& left, const Vec<S, 16>& u) {
  Mat<S, 16> out;
  for (std::size_t j = 0; j < 16; ++j) out.set_column(j, left[j] * u);
  return out;
}

/// Clifford algebra data at one point, generic in the scalar type.
template <class S>
struct CliffordContextT {
  Mat<S, 4> g;
  Mat<S, 4> g_inv;
  Gammas<S> gamma_lo;
  Gammas<S> gamma_hi;
  std::array<Mat<S, 16>, 16> left;
  Mat<S, 16> dagger;
  Vec<S, 16> scalar_weights;
  Mat<S, 16> ghat;

  /// c_{IJ}^K with e_I e_J = c_{IJ}^K e_K.
  const S& structure(std::size_t i, std::size_t j, std::size_t k) const { return left[i](k, j); }
};

/// Unvalidated construction; build_context is the checked entry point.
template <class S>
CliffordContextT<S> make_context(const Mat<S, 4>& g) {
  CliffordContextT<S> c;
  c.g = g;
  c.g_inv = inverse4(g);
  c.gamma_lo = make_gamma_lo(g);
  c.gamma_hi = raise_gammas(c.g_inv, c.gamma_lo);
  c.left = make_left_multipliers(c.gamma_lo);
  c.dagger = make_dagger(c.gamma_lo);
  c.scalar_weights = make_scalar_weights(c.left);
  c.ghat = make_extended_metric(c.dagger, c.left, c.scalar_weights);
  return c;
}

// ---------------------------------------------------------------------------
// Checked double-precision API.

/// Symmetric Lorentzian metric value with its inverse.
class MetricPoint {
 public:
  /// Rounding-level asymmetry is averaged away. Throws InvalidArgument for a
  /// genuinely asymmetric g, SingularMetric when |det g| < singular_tol and
  /// NonLorentzian when det g > 0.
  explicit MetricPoint(const Mat4& g, double singular_tol = 1e-12);

  const Mat4& g() const { return g_; }
  const Mat4& g_inv() const { return g_inv_; }
  double det() const { return det_; }

 private:
  Mat4 g_;
  Mat4 g_inv_;
  double det_ = 0.0;
};

using CliffordContext = CliffordContextT<double>;

CliffordContext build_context(const MetricPoint& metric);

Multivector clifford_product(const CliffordContext& ctx, const Multivector& a, const Multivector& b);
Multivector dagger(const CliffordContext& ctx, const Multivector& a);
/// The e_0 coefficient.
inline double scalar_part(const Multivector& a) { return a[0]; }
/// Basis-independent scalar part tr(L_a) / 16; equals scalar_part for
/// orthogonal (diagonal) metrics.
double scalar_projection(const CliffordContext& ctx, const Multivector& a);
/// The extended metric built from scalar_part instead of scalar_projection.
/// Identical to ctx.ghat for diagonal metrics.
Mat16 literal_extended_metric(const CliffordContext& ctx);
/// ghat(a, b) = a^T ghat b.
double extended_metric(const CliffordContext& ctx, const Multivector& a, const Multivector& b);
Mat16 extend_map(const CliffordContext& ctx, const Mat4& a);
Mat16 right_multiplication(const CliffordContext& ctx, const Multivector& u);
/// gamma_v = v^alpha gamma_alpha for a tangent vector with components v.
Mat16 gamma_of(const CliffordContext& ctx, const Vec4& v);

Mat4 minkowski_metric();

}  // namespace cliffcheck
