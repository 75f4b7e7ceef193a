#pragma once
// Second-order forward-mode jets: value, gradient and Hessian in M variables.

#include <array>
#include <cmath>

namespace fbs {

template <int M>
struct Jet {
  double v = 0.0;
  std::array<double, M> g{};
  std::array<std::array<double, M>, M> h{};

  Jet() = default;
  Jet(double c) : v(c) {}  // NOLINT: implicit constants are convenient in templated code

  static Jet variable(double value, int k) {
    Jet j(value);
    j.g[k] = 1.0;
    return j;
  }

  // f(this) given f, f', f''
  Jet chain(double f0, double f1, double f2) const {
    Jet r(f0);
    for (int i = 0; i < M; ++i) r.g[i] = f1 * g[i];
    for (int i = 0; i < M; ++i)
      for (int k = 0; k < M; ++k) r.h[i][k] = f1 * h[i][k] + f2 * g[i] * g[k];
    return r;
  }

  Jet& operator+=(const Jet& o) {
    v += o.v;
    for (int i = 0; i < M; ++i) {
      g[i] += o.g[i];
      for (int k = 0; k < M; ++k) h[i][k] += o.h[i][k];
    }
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    v -= o.v;
    for (int i = 0; i < M; ++i) {
      g[i] -= o.g[i];
      for (int k = 0; k < M; ++k) h[i][k] -= o.h[i][k];
    }
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    Jet r(v * o.v);
    for (int i = 0; i < M; ++i) {
      r.g[i] = g[i] * o.v + v * o.g[i];
      for (int k = 0; k < M; ++k)
        r.h[i][k] = h[i][k] * o.v + v * o.h[i][k] + g[i] * o.g[k] + o.g[i] * g[k];
    }
    return *this = r;
  }
  Jet& operator/=(const Jet& o) {
    const double iv = 1.0 / o.v;
    return *this *= o.chain(iv, -iv * iv, 2.0 * iv * iv * iv);
  }
  Jet operator-() const {
    Jet r = *this;
    r.v = -r.v;
    for (int i = 0; i < M; ++i) {
      r.g[i] = -r.g[i];
      for (int k = 0; k < M; ++k) r.h[i][k] = -r.h[i][k];
    }
    return r;
  }
};

template <int M> Jet<M> operator+(Jet<M> a, const Jet<M>& b) { return a += b; }
template <int M> Jet<M> operator-(Jet<M> a, const Jet<M>& b) { return a -= b; }
template <int M> Jet<M> operator*(Jet<M> a, const Jet<M>& b) { return a *= b; }
template <int M> Jet<M> operator/(Jet<M> a, const Jet<M>& b) { return a /= b; }
template <int M> Jet<M> operator+(Jet<M> a, double b) { a.v += b; return a; }
template <int M> Jet<M> operator+(double b, Jet<M> a) { a.v += b; return a; }
template <int M> Jet<M> operator-(Jet<M> a, double b) { a.v -= b; return a; }
template <int M> Jet<M> operator-(double b, const Jet<M>& a) { return (-a) + b; }
template <int M> Jet<M> operator*(Jet<M> a, double b) {
  a.v *= b;
  for (int i = 0; i < M; ++i) {
    a.g[i] *= b;
    for (int k = 0; k < M; ++k) a.h[i][k] *= b;
  }
  return a;
}
template <int M> Jet<M> operator*(double b, Jet<M> a) { return a * b; }
template <int M> Jet<M> operator/(Jet<M> a, double b) { return a * (1.0 / b); }
template <int M> Jet<M> operator/(double b, const Jet<M>& a) { return Jet<M>(b) / a; }

template <int M> Jet<M> sin(const Jet<M>& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return a.chain(s, c, -s);
}
template <int M> Jet<M> cos(const Jet<M>& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return a.chain(c, -s, -c);
}
template <int M> Jet<M> exp(const Jet<M>& a) {
  const double e = std::exp(a.v);
  return a.chain(e, e, e);
}
template <int M> Jet<M> log(const Jet<M>& a) {
  return a.chain(std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v));
}
template <int M> Jet<M> sqrt(const Jet<M>& a) {
  const double s = std::sqrt(a.v);
  return a.chain(s, 0.5 / s, -0.25 / (s * a.v));
}
template <int M> Jet<M> pow(const Jet<M>& a, int n) {
  if (n == 0) return Jet<M>(1.0);
  const double p2 = n >= 2 ? std::pow(a.v, n - 2) : std::pow(a.v, double(n - 2));
  return a.chain(p2 * a.v * a.v, n * p2 * a.v, n * (n - 1) * p2);
}

inline double value_of(double x) { return x; }
template <int M> double value_of(const Jet<M>& x) { return x.v; }

}  // namespace fbs
