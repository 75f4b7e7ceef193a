#pragma once

#include <vector>

namespace fbs {

struct QuadRule {
  std::vector<double> x;
  std::vector<double> w;
  std::size_t size() const { return x.size(); }
};

// n-point Gauss-Legendre on [a,b]
QuadRule gauss_legendre(int n, double a = -1.0, double b = 1.0);
// panels x n-point Gauss-Legendre on [a,b]
QuadRule composite_gauss_legendre(int panels, int n, double a, double b);
// n Chebyshev (Gauss-Lobatto) points on [a,b], ascending
std::vector<double> chebyshev_points(int n, double a, double b);

}  // namespace fbs
