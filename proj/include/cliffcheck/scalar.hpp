#pragma once

// Forward-mode jet scalars.
//
// Dual<T, N> carries a value and N first partials. Taylor2<T, N> additionally
// carries the symmetric N x N block of second partials, i.e. it is a
// truncated multivariate Taylor polynomial of order two. Both nest: the
// coefficient type T may itself be a Dual or Taylor2, which is how mixed
// derivatives (parameter x coordinate) are obtained.

#include <array>
#include <cmath>
#include <cstddef>

namespace cliffcheck {

inline double value_of(double x) { return x; }
inline bool is_zero(double x) { return x == 0.0; }

template <class T, int N>
struct Dual {
  T v{};
  std::array<T, N> d{};

  constexpr Dual() = default;
  constexpr Dual(double c) : v(c) {}  // NOLINT: implicit lift of constants
  constexpr Dual(const T& value, const std::array<T, N>& grad) : v(value), d(grad) {}

  static Dual variable(const T& value, int k) {
    Dual r(value, {});
    r.d[k] = T(1.0);
    return r;
  }

  Dual& operator+=(const Dual& b) {
    v += b.v;
    for (int i = 0; i < N; ++i) d[i] += b.d[i];
    return *this;
  }
  Dual& operator-=(const Dual& b) {
    v -= b.v;
    for (int i = 0; i < N; ++i) d[i] -= b.d[i];
    return *this;
  }
  Dual& operator*=(const Dual& b) { return *this = *this * b; }
  Dual& operator*=(double s) {
    v *= s;
    for (auto& x : d) x *= s;
    return *this;
  }

  friend Dual operator-(const Dual& a) {
    Dual r;
    r.v = -a.v;
    for (int i = 0; i < N; ++i) r.d[i] = -a.d[i];
    return r;
  }
  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator+(Dual a, double b) {
    a.v += b;
    return a;
  }
  friend Dual operator+(double a, Dual b) {
    b.v += a;
    return b;
  }
  friend Dual operator-(Dual a, double b) {
    a.v -= b;
    return a;
  }
  friend Dual operator-(double a, const Dual& b) { return -b + a; }
  friend Dual operator*(const Dual& a, const Dual& b) {
    Dual r;
    r.v = a.v * b.v;
    for (int i = 0; i < N; ++i) r.d[i] = a.v * b.d[i] + a.d[i] * b.v;
    return r;
  }
  friend Dual operator*(Dual a, double s) { return a *= s; }
  friend Dual operator*(double s, Dual a) { return a *= s; }
  friend Dual operator/(const Dual& a, const Dual& b) {
    Dual r;
    T inv = 1.0 / b.v;
    r.v = a.v * inv;
    for (int i = 0; i < N; ++i) r.d[i] = (a.d[i] - r.v * b.d[i]) * inv;
    return r;
  }
  friend Dual operator/(Dual a, double s) { return a *= (1.0 / s); }
  friend Dual operator/(double a, const Dual& b) { return Dual(a) / b; }

  friend double value_of(const Dual& a) { return value_of(a.v); }
  friend bool is_zero(const Dual& a) {
    if (!is_zero(a.v)) return false;
    for (const auto& x : a.d)
      if (!is_zero(x)) return false;
    return true;
  }

  // f(a) given f(a.v) and f'(a.v).
  static Dual chain(const Dual& a, const T& f0, const T& f1) {
    Dual r;
    r.v = f0;
    for (int i = 0; i < N; ++i) r.d[i] = f1 * a.d[i];
    return r;
  }

  friend Dual sqrt(const Dual& a) {
    using std::sqrt;
    T s = sqrt(a.v);
    return chain(a, s, 0.5 / s);
  }
  friend Dual exp(const Dual& a) {
    using std::exp;
    T e = exp(a.v);
    return chain(a, e, e);
  }
  friend Dual log(const Dual& a) {
    using std::log;
    return chain(a, log(a.v), 1.0 / a.v);
  }
  friend Dual sin(const Dual& a) {
    using std::cos;
    using std::sin;
    return chain(a, sin(a.v), cos(a.v));
  }
  friend Dual cos(const Dual& a) {
    using std::cos;
    using std::sin;
    return chain(a, cos(a.v), -sin(a.v));
  }
};

template <class T, int N>
struct Taylor2 {
  T v{};
  std::array<T, N> d{};
  std::array<T, N * N> h{};  // h[i * N + j] = d^2 / dx_i dx_j, kept symmetric

  constexpr Taylor2() = default;
  constexpr Taylor2(double c) : v(c) {}  // NOLINT: implicit lift of constants

  static Taylor2 constant(const T& value) {
    Taylor2 r;
    r.v = value;
    return r;
  }
  static Taylor2 variable(const T& value, int k) {
    Taylor2 r = constant(value);
    r.d[k] = T(1.0);
    return r;
  }

  T& hess(int i, int j) { return h[i * N + j]; }
  const T& hess(int i, int j) const { return h[i * N + j]; }

  Taylor2& operator+=(const Taylor2& b) {
    v += b.v;
    for (int i = 0; i < N; ++i) d[i] += b.d[i];
    for (int i = 0; i < N * N; ++i) h[i] += b.h[i];
    return *this;
  }
  Taylor2& operator-=(const Taylor2& b) {
    v -= b.v;
    for (int i = 0; i < N; ++i) d[i] -= b.d[i];
    for (int i = 0; i < N * N; ++i) h[i] -= b.h[i];
    return *this;
  }
  Taylor2& operator*=(const Taylor2& b) { return *this = *this * b; }
  Taylor2& operator*=(double s) {
    v *= s;
    for (auto& x : d) x *= s;
    for (auto& x : h) x *= s;
    return *this;
  }

  friend Taylor2 operator-(Taylor2 a) { return a *= -1.0; }
  friend Taylor2 operator+(Taylor2 a, const Taylor2& b) { return a += b; }
  friend Taylor2 operator-(Taylor2 a, const Taylor2& b) { return a -= b; }
  friend Taylor2 operator+(Taylor2 a, double b) {
    a.v += b;
    return a;
  }
  friend Taylor2 operator+(double a, Taylor2 b) {
    b.v += a;
    return b;
  }
  friend Taylor2 operator-(Taylor2 a, double b) {
    a.v -= b;
    return a;
  }
  friend Taylor2 operator-(double a, const Taylor2& b) { return -b + a; }
  friend Taylor2 operator*(const Taylor2& a, const Taylor2& b) {
    Taylor2 r;
    r.v = a.v * b.v;
    for (int i = 0; i < N; ++i) r.d[i] = a.v * b.d[i] + a.d[i] * b.v;
    for (int i = 0; i < N; ++i) {
      for (int j = i; j < N; ++j) {
        T x = a.v * b.hess(i, j) + a.hess(i, j) * b.v + a.d[i] * b.d[j] + a.d[j] * b.d[i];
        r.hess(j, i) = x;
        r.hess(i, j) = x;
      }
    }
    return r;
  }
  friend Taylor2 operator*(Taylor2 a, double s) { return a *= s; }
  friend Taylor2 operator*(double s, Taylor2 a) { return a *= s; }
  friend Taylor2 operator/(const Taylor2& a, const Taylor2& b) { return a * reciprocal(b); }
  friend Taylor2 operator/(Taylor2 a, double s) { return a *= (1.0 / s); }
  friend Taylor2 operator/(double a, const Taylor2& b) { return reciprocal(b) * a; }

  friend double value_of(const Taylor2& a) { return value_of(a.v); }
  friend bool is_zero(const Taylor2& a) {
    if (!is_zero(a.v)) return false;
    for (const auto& x : a.d)
      if (!is_zero(x)) return false;
    for (const auto& x : a.h)
      if (!is_zero(x)) return false;
    return true;
  }

  // f(a) given f, f', f'' at a.v.
  static Taylor2 chain(const Taylor2& a, const T& f0, const T& f1, const T& f2) {
    Taylor2 r;
    r.v = f0;
    for (int i = 0; i < N; ++i) r.d[i] = f1 * a.d[i];
    for (int i = 0; i < N; ++i) {
      for (int j = i; j < N; ++j) {
        T x = f1 * a.hess(i, j) + f2 * a.d[i] * a.d[j];
        r.hess(i, j) = x;
        r.hess(j, i) = x;
      }
    }
    return r;
  }

  friend Taylor2 reciprocal(const Taylor2& a) {
    T inv = 1.0 / a.v;
    T inv2 = inv * inv;
    return chain(a, inv, -inv2, 2.0 * inv2 * inv);
  }
  friend Taylor2 sqrt(const Taylor2& a) {
    using std::sqrt;
    T s = sqrt(a.v);
    T ds = 0.5 / s;
    return chain(a, s, ds, -0.5 * ds / a.v);
  }
  friend Taylor2 exp(const Taylor2& a) {
    using std::exp;
    T e = exp(a.v);
    return chain(a, e, e, e);
  }
  friend Taylor2 log(const Taylor2& a) {
    using std::log;
    T inv = 1.0 / a.v;
    return chain(a, log(a.v), inv, -inv * inv);
  }
  friend Taylor2 sin(const Taylor2& a) {
    using std::cos;
    using std::sin;
    T s = sin(a.v);
    return chain(a, s, cos(a.v), -s);
  }
  friend Taylor2 cos(const Taylor2& a) {
    using std::cos;
    using std::sin;
    T c = cos(a.v);
    return chain(a, c, -sin(a.v), -c);
  }
  friend Taylor2 tan(const Taylor2& a) {
    using std::tan;
    T t = tan(a.v);
    T sec2 = 1.0 + t * t;
    return chain(a, t, sec2, 2.0 * t * sec2);
  }
  friend Taylor2 sinh(const Taylor2& a) {
    using std::cosh;
    using std::sinh;
    T s = sinh(a.v);
    return chain(a, s, cosh(a.v), s);
  }
  friend Taylor2 cosh(const Taylor2& a) {
    using std::cosh;
    using std::sinh;
    T c = cosh(a.v);
    return chain(a, c, sinh(a.v), c);
  }
  friend Taylor2 tanh(const Taylor2& a) {
    using std::tanh;
    T t = tanh(a.v);
    T s2 = 1.0 - t * t;
    return chain(a, t, s2, -2.0 * t * s2);
  }
  // a^n for integer n; defined for any sign of a.
  friend Taylor2 ipow(const Taylor2& a, int n) {
    using std::pow;
    if (n == 0) return Taylor2(1.0);
    T f0 = pow(a.v, n);
    T f1 = n * pow(a.v, n - 1);
    T f2 = (n == 1) ? T(0.0) : T(n * (n - 1) * pow(a.v, n - 2));
    return chain(a, f0, f1, f2);
  }
};

/// Value + gradient + Hessian in the four coordinates x0..x3.
using Jet2 = Taylor2<double, 4>;
/// Value + gradient in the four coordinates.
using Jet1 = Dual<double, 4>;

// Component access that works uniformly on Dual and Taylor2.
template <class T, int N>
const T& grad_of(const Dual<T, N>& a, int k) {
  return a.d[k];
}
template <class T, int N>
const T& grad_of(const Taylor2<T, N>& a, int k) {
  return a.d[k];
}

}  // namespace cliffcheck
