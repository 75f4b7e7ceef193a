#pragma once
// Real orthonormal spherical harmonics on S^2 written as polynomials in the
// Cartesian components of the unit vector, so they work with jets and never
// touch the pole singularity of the angular chart.

#include <cmath>
#include <cstdlib>
#include <vector>

#include "fbstokes/common.hpp"

namespace fbs {

// normalized associated Legendre factor Q_lm(z) with P_l^m(z) = (1-z^2)^{m/2} Q_lm(z), m >= 0
template <class T>
T legendre_q(int l, int m, const T& z) {
  double pmm = 1.0 / (4.0 * kPi);
  for (int k = 1; k <= m; ++k) pmm *= (2.0 * k - 1.0) / (2.0 * k);
  pmm = std::sqrt((2.0 * m + 1.0) * pmm);
  T p_prev = T(pmm);
  if (l == m) return p_prev;
  T p = z * (std::sqrt(2.0 * m + 3.0) * pmm);
  for (int ll = m + 2; ll <= l; ++ll) {
    const double a = std::sqrt((4.0 * ll * ll - 1.0) / (double(ll) * ll - double(m) * m));
    const double b = std::sqrt((double(ll - 1) * (ll - 1) - double(m) * m) / (4.0 * (ll - 1) * (ll - 1) - 1.0));
    T next = (z * p - p_prev * b) * a;
    p_prev = p;
    p = next;
  }
  return p;
}

// Y_lm(x, y, z) for a unit vector; m < 0 uses sin(|m| phi), m > 0 cos(m phi)
template <class T>
T real_sph_harm(int l, int m, const T& x, const T& y, const T& z) {
  const int am = std::abs(m);
  if (am > l || l < 0) throw DomainError("spherical harmonic index out of range");
  T re = T(1.0), im = T(0.0);
  for (int k = 0; k < am; ++k) {
    T nre = re * x - im * y;
    T nim = re * y + im * x;
    re = nre;
    im = nim;
  }
  const T q = legendre_q(l, am, z);
  if (m == 0) return q;
  const double s = std::sqrt(2.0);
  return m > 0 ? q * re * s : q * im * s;
}

struct HarmonicTerm {
  int l = 0, m = 0;
  double coef = 0;
};

// h(omega) = sum coef Y_lm(omega)
struct HarmonicSeries {
  std::vector<HarmonicTerm> terms;
  int lmax() const {
    int l = 0;
    for (const auto& t : terms) l = std::max(l, t.l);
    return l;
  }
  template <class T>
  T eval(const T& x, const T& y, const T& z) const {
    T s = T(0.0);
    for (const auto& t : terms) s += real_sph_harm(t.l, t.m, x, y, z) * t.coef;
    return s;
  }
};

}  // namespace fbs
