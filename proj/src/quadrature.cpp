#include "fbstokes/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <gsl/gsl_integration.h>

namespace fbs {

QuadRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n < 1");
  gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(static_cast<size_t>(n));
  QuadRule q;
  q.x.resize(n);
  q.w.resize(n);
  for (int i = 0; i < n; ++i) gsl_integration_glfixed_point(a, b, static_cast<size_t>(i), &q.x[i], &q.w[i], t);
  gsl_integration_glfixed_table_free(t);
  return q;
}

QuadRule composite_gauss_legendre(int panels, int n, double a, double b) {
  QuadRule q;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    QuadRule r = gauss_legendre(n, a + p * h, a + (p + 1) * h);
    q.x.insert(q.x.end(), r.x.begin(), r.x.end());
    q.w.insert(q.w.end(), r.w.begin(), r.w.end());
  }
  return q;
}

std::vector<double> chebyshev_points(int n, double a, double b) {
  std::vector<double> x(n);
  if (n == 1) {
    x[0] = 0.5 * (a + b);
    return x;
  }
  for (int k = 0; k < n; ++k) {
    const double c = -std::cos(std::numbers::pi * k / (n - 1));
    x[k] = 0.5 * (a + b) + 0.5 * (b - a) * c;
  }
  return x;
}

}  // namespace fbs
