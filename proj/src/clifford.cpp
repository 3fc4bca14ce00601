#include "cliffcheck/clifford.hpp"

#include <cmath>
#include <sstream>

namespace cliffcheck {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::SingularMetric: return "SingularMetric";
    case ErrorKind::NonLorentzian: return "NonLorentzian";
    case ErrorKind::UnsupportedMetric: return "UnsupportedMetric";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::NonInvertible: return "NonInvertible";
    case ErrorKind::MetricNotFound: return "MetricNotFound";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

MultiIndex MultiIndex::from_indices(const std::vector<int>& indices) {
  std::uint8_t mask = 0;
  int prev = -1;
  for (int i : indices) {
    if (i < 0 || i > 3 || i <= prev)
      throw Error(ErrorKind::InvalidArgument, "multi-index must be strictly increasing over {0,1,2,3}");
    mask |= std::uint8_t(1u << i);
    prev = i;
  }
  return MultiIndex(mask);
}

std::vector<int> MultiIndex::indices() const {
  std::vector<int> out;
  for (int i = 0; i < 4; ++i)
    if (contains(i)) out.push_back(i);
  return out;
}

std::string MultiIndex::label() const {
  std::string s = "e_";
  if (empty()) return s + "{}";
  for (int i : indices()) s += char('0' + i);
  return s;
}

Multivector basis_vector(std::size_t position) {
  Multivector v{};
  v.at(position) = 1.0;
  return v;
}

Multivector vector_part(const Vec4& v) {
  Multivector m{};
  for (int a = 0; a < 4; ++a) m[1 + a] = v[a];
  return m;
}

MetricPoint::MetricPoint(const Mat4& g, double singular_tol) : g_(g) {
  const double scale = std::max(1.0, max_abs(g));
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      if (!(std::abs(g(i, j) - g(j, i)) <= 1e-12 * scale))
        throw Error(ErrorKind::InvalidArgument, "metric is not symmetric");
      g_(i, j) = g_(j, i) = 0.5 * (g(i, j) + g(j, i));
    }
  det_ = det4(g_);
  if (!std::isfinite(det_) || std::abs(det_) < singular_tol) {
    std::ostringstream os;
    os << "det g = " << det_;
    throw Error(ErrorKind::SingularMetric, os.str());
  }
  if (det_ > 0.0) {
    std::ostringstream os;
    os << "det g = " << det_ << " is positive";
    throw Error(ErrorKind::NonLorentzian, os.str());
  }
  g_inv_ = inverse4(g_);
}

CliffordContext build_context(const MetricPoint& metric) {
  CliffordContext c = make_context(metric.g());
  c.g_inv = metric.g_inv();
  c.gamma_hi = raise_gammas(c.g_inv, c.gamma_lo);
  return c;
}

Multivector clifford_product(const CliffordContext& ctx, const Multivector& a, const Multivector& b) {
  Multivector out{};
  for (std::size_t i = 0; i < 16; ++i) {
    if (a[i] == 0.0) continue;
    add_scaled(out, a[i], ctx.left[i] * b);
  }
  return out;
}

Multivector dagger(const CliffordContext& ctx, const Multivector& a) { return ctx.dagger * a; }

double extended_metric(const CliffordContext& ctx, const Multivector& a, const Multivector& b) {
  return bilinear(a, ctx.ghat, b);
}

double scalar_projection(const CliffordContext& ctx, const Multivector& a) { return dot(ctx.scalar_weights, a); }

Mat16 literal_extended_metric(const CliffordContext& ctx) {
  return make_extended_metric(ctx.dagger, ctx.left, basis_vector(0));
}

Mat16 extend_map(const CliffordContext& ctx, const Mat4& a) { return extend_map(ctx.gamma_lo, a); }

Mat16 right_multiplication(const CliffordContext& ctx, const Multivector& u) {
  return right_multiplication(ctx.left, u);
}

Mat16 gamma_of(const CliffordContext& ctx, const Vec4& v) {
  Mat16 out;
  for (int a = 0; a < 4; ++a) add_scaled(out, v[a], ctx.gamma_lo[a]);
  return out;
}

Mat4 minkowski_metric() { return Mat4::diagonal({-1.0, 1.0, 1.0, 1.0}); }

}  // namespace cliffcheck
