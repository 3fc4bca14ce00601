#pragma once

// Fixed-size dense matrices over an arbitrary scalar type (double or a jet
// scalar). Storage is heap-backed so that matrices of nested jets do not
// blow the stack.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "cliffcheck/errors.hpp"
#include "cliffcheck/scalar.hpp"

namespace cliffcheck {

template <class S, std::size_t N>
using Vec = std::array<S, N>;

template <class S, std::size_t N>
class Mat {
 public:
  Mat() : a_(N * N) {}

  static Mat identity() {
    Mat m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = S(1.0);
    return m;
  }
  static Mat diagonal(const Vec<S, N>& d) {
    Mat m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = d[i];
    return m;
  }

  S& operator()(std::size_t i, std::size_t j) { return a_[i * N + j]; }
  const S& operator()(std::size_t i, std::size_t j) const { return a_[i * N + j]; }

  Vec<S, N> column(std::size_t j) const {
    Vec<S, N> c;
    for (std::size_t i = 0; i < N; ++i) c[i] = (*this)(i, j);
    return c;
  }
  void set_column(std::size_t j, const Vec<S, N>& c) {
    for (std::size_t i = 0; i < N; ++i) (*this)(i, j) = c[i];
  }

  Mat& operator+=(const Mat& b) {
    for (std::size_t k = 0; k < N * N; ++k) a_[k] += b.a_[k];
    return *this;
  }
  Mat& operator-=(const Mat& b) {
    for (std::size_t k = 0; k < N * N; ++k) a_[k] -= b.a_[k];
    return *this;
  }
  Mat& operator*=(double s) {
    for (auto& x : a_) x *= s;
    return *this;
  }

  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
  friend Mat operator-(Mat a) { return a *= -1.0; }
  friend Mat operator*(Mat a, double s) { return a *= s; }
  friend Mat operator*(double s, Mat a) { return a *= s; }

  // Zero entries of the left factor are skipped; gamma matrices and
  // connection matrices are mostly zero.
  friend Mat operator*(const Mat& a, const Mat& b) {
    Mat r;
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t k = 0; k < N; ++k) {
        const S& aik = a(i, k);
        if (is_zero(aik)) continue;
        for (std::size_t j = 0; j < N; ++j) {
          const S& bkj = b(k, j);
          if (is_zero(bkj)) continue;
          r(i, j) += aik * bkj;
        }
      }
    }
    return r;
  }
  friend Vec<S, N> operator*(const Mat& a, const Vec<S, N>& x) {
    Vec<S, N> r{};
    for (std::size_t j = 0; j < N; ++j) {
      if (is_zero(x[j])) continue;
      for (std::size_t i = 0; i < N; ++i) {
        const S& aij = a(i, j);
        if (is_zero(aij)) continue;
        r[i] += aij * x[j];
      }
    }
    return r;
  }

 private:
  std::vector<S> a_;
};

using Mat4 = Mat<double, 4>;
using Mat16 = Mat<double, 16>;
using Vec4 = Vec<double, 4>;

template <class S, std::size_t N>
Mat<S, N> scaled(const Mat<S, N>& m, const S& s) {
  Mat<S, N> r;
  if (is_zero(s)) return r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      if (!is_zero(m(i, j))) r(i, j) = s * m(i, j);
  return r;
}

// r += s * m
template <class S, std::size_t N>
void add_scaled(Mat<S, N>& r, const S& s, const Mat<S, N>& m) {
  if (is_zero(s)) return;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      if (!is_zero(m(i, j))) r(i, j) += s * m(i, j);
}

template <class S, std::size_t N>
void add_scaled(Vec<S, N>& r, const S& s, const Vec<S, N>& v) {
  if (is_zero(s)) return;
  for (std::size_t i = 0; i < N; ++i)
    if (!is_zero(v[i])) r[i] += s * v[i];
}

template <class S, std::size_t N>
Mat<S, N> transpose(const Mat<S, N>& m) {
  Mat<S, N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r(j, i) = m(i, j);
  return r;
}

template <class S, std::size_t N>
S trace(const Mat<S, N>& m) {
  S t(0.0);
  for (std::size_t i = 0; i < N; ++i) t += m(i, i);
  return t;
}

/// tr(a * b) without forming the product.
template <class S, std::size_t N>
S trace_product(const Mat<S, N>& a, const Mat<S, N>& b) {
  S t(0.0);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = 0; k < N; ++k) {
      if (is_zero(a(i, k)) || is_zero(b(k, i))) continue;
      t += a(i, k) * b(k, i);
    }
  return t;
}

template <class S, std::size_t N>
Mat<S, N> commutator(const Mat<S, N>& a, const Mat<S, N>& b) {
  return a * b - b * a;
}

template <class S, std::size_t N>
S dot(const Vec<S, N>& a, const Vec<S, N>& b) {
  S t(0.0);
  for (std::size_t i = 0; i < N; ++i) t += a[i] * b[i];
  return t;
}

/// a^T m b
template <class S, std::size_t N>
S bilinear(const Vec<S, N>& a, const Mat<S, N>& m, const Vec<S, N>& b) {
  return dot(a, m * b);
}

template <class S, std::size_t N>
Vec<S, N> operator+(Vec<S, N> a, const Vec<S, N>& b) {
  for (std::size_t i = 0; i < N; ++i) a[i] += b[i];
  return a;
}
template <class S, std::size_t N>
Vec<S, N> operator-(Vec<S, N> a, const Vec<S, N>& b) {
  for (std::size_t i = 0; i < N; ++i) a[i] -= b[i];
  return a;
}
template <class S, std::size_t N>
Vec<S, N> operator*(double s, Vec<S, N> a) {
  for (auto& x : a) x *= s;
  return a;
}

template <class F, class S, std::size_t N>
auto map_entries(const Mat<S, N>& m, F f) {
  using R = decltype(f(m(0, 0)));
  Mat<R, N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r(i, j) = f(m(i, j));
  return r;
}

template <class S, std::size_t N>
Mat<double, N> values(const Mat<S, N>& m) {
  return map_entries(m, [](const S& x) { return value_of(x); });
}

template <std::size_t N>
double max_abs(const Mat<double, N>& m) {
  double r = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r = std::max(r, std::abs(m(i, j)));
  return r;
}

template <std::size_t N>
double max_abs(const Vec<double, N>& v) {
  double r = 0.0;
  for (double x : v) r = std::max(r, std::abs(x));
  return r;
}

template <std::size_t N>
double max_abs_diff(const Mat<double, N>& a, const Mat<double, N>& b) {
  return max_abs(a - b);
}

template <std::size_t N>
double max_abs_diff(const Vec<double, N>& a, const Vec<double, N>& b) {
  return max_abs(a - b);
}

/// |a - b| / max(1, |a|, |b|): relative away from zero, absolute near it.
inline double scaled_diff(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

// 4x4 determinant and inverse by cofactors; branch-free so they work on jets.
template <class S>
S minor3(const Mat<S, 4>& m, int r0, int r1, int r2, int c0, int c1, int c2) {
  return m(r0, c0) * (m(r1, c1) * m(r2, c2) - m(r1, c2) * m(r2, c1)) -
         m(r0, c1) * (m(r1, c0) * m(r2, c2) - m(r1, c2) * m(r2, c0)) +
         m(r0, c2) * (m(r1, c0) * m(r2, c1) - m(r1, c1) * m(r2, c0));
}

template <class S>
Mat<S, 4> adjugate4(const Mat<S, 4>& m) {
  Mat<S, 4> adj;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      int r[3], c[3];
      for (int k = 0, n = 0; k < 4; ++k)
        if (k != i) r[n++] = k;
      for (int k = 0, n = 0; k < 4; ++k)
        if (k != j) c[n++] = k;
      S cof = minor3(m, r[0], r[1], r[2], c[0], c[1], c[2]);
      adj(j, i) = ((i + j) % 2 == 0) ? cof : -cof;
    }
  }
  return adj;
}

template <class S>
S det4(const Mat<S, 4>& m) {
  return m(0, 0) * minor3(m, 1, 2, 3, 1, 2, 3) - m(0, 1) * minor3(m, 1, 2, 3, 0, 2, 3) +
         m(0, 2) * minor3(m, 1, 2, 3, 0, 1, 3) - m(0, 3) * minor3(m, 1, 2, 3, 0, 1, 2);
}

template <class S>
Mat<S, 4> inverse4(const Mat<S, 4>& m) {
  Mat<S, 4> adj = adjugate4(m);
  S inv_det = 1.0 / det4(m);
  return scaled(adj, inv_det);
}

/// Gauss-Jordan inverse with partial pivoting (double only).
template <std::size_t N>
Mat<double, N> inverse(const Mat<double, N>& m, double singular_tol = 1e-13) {
  Mat<double, N> a = m;
  Mat<double, N> inv = Mat<double, N>::identity();
  double scale = std::max(max_abs(m), 1e-300);
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < N; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (std::abs(a(piv, col)) <= singular_tol * scale)
      throw Error(ErrorKind::NonInvertible, "matrix is singular to working precision");
    if (piv != col) {
      for (std::size_t j = 0; j < N; ++j) {
        std::swap(a(piv, j), a(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    }
    double p = 1.0 / a(col, col);
    for (std::size_t j = 0; j < N; ++j) {
      a(col, j) *= p;
      inv(col, j) *= p;
    }
    for (std::size_t r = 0; r < N; ++r) {
      if (r == col || a(r, col) == 0.0) continue;
      double f = a(r, col);
      for (std::size_t j = 0; j < N; ++j) {
        a(r, j) -= f * a(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

template <std::size_t N>
double determinant(const Mat<double, N>& m) {
  Mat<double, N> a = m;
  double det = 1.0;
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < N; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (a(piv, col) == 0.0) return 0.0;
    if (piv != col) {
      for (std::size_t j = 0; j < N; ++j) std::swap(a(piv, j), a(col, j));
      det = -det;
    }
    det *= a(col, col);
    for (std::size_t r = col + 1; r < N; ++r) {
      double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (std::size_t j = col; j < N; ++j) a(r, j) -= f * a(col, j);
    }
  }
  return det;
}

/// k-th characteristic coefficient: det(I + sA) = sum_k s^k tr_k(A).
/// Faddeev-LeVerrier recurrence; returns all n + 1 coefficients.
template <std::size_t N>
std::array<double, N + 1> characteristic_traces(const Mat<double, N>& a) {
  // det(lambda I - A) = sum_k c_k lambda^(N-k), and tr_k = (-1)^k c_k.
  std::array<double, N + 1> tr{};
  tr[0] = 1.0;
  Mat<double, N> m;  // M_0 = 0
  double c_prev = 1.0;
  for (std::size_t k = 1; k <= N; ++k) {
    m = a * m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) += c_prev;
    double c = -trace_product(a, m) / static_cast<double>(k);
    tr[k] = (k % 2 == 0) ? c : -c;
    c_prev = c;
  }
  return tr;
}

template <std::size_t N>
double trace_k(const Mat<double, N>& a, int k) {
  if (k < 0 || static_cast<std::size_t>(k) > N)
    throw Error(ErrorKind::IndexOutOfRange, "trace order " + std::to_string(k) + " outside [0, " +
                                                std::to_string(N) + "]");
  return characteristic_traces(a)[static_cast<std::size_t>(k)];
}

/// exp(A) by scaling and squaring around a truncated Taylor series.
template <std::size_t N>
Mat<double, N> matrix_exp(const Mat<double, N>& a) {
  double norm = 0.0;  // induced 1-norm
  for (std::size_t j = 0; j < N; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += std::abs(a(i, j));
    norm = std::max(norm, s);
  }
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  Mat<double, N> b = a * std::ldexp(1.0, -squarings);
  double bn = norm * std::ldexp(1.0, -squarings);

  Mat<double, N> result = Mat<double, N>::identity();
  Mat<double, N> term = Mat<double, N>::identity();
  double term_bound = 1.0;
  for (int k = 1; k < 64; ++k) {
    term = term * b * (1.0 / k);
    result += term;
    term_bound *= bn / k;
    // Remaining tail is bounded by a geometric series in bn / (k + 2).
    double ratio = bn / (k + 2);
    double tail = term_bound * (bn / (k + 1)) / (1.0 - ratio);
    if (tail <= 1e-16) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

}  // namespace cliffcheck
