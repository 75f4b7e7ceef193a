#pragma once
// Sphere and ball machinery: quadratures, the linearized curvature operator,
// its spectral gap, the rigid-motion basis and the compatibility conditions.

#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "fbstokes/harmonics.hpp"
#include "fbstokes/surface.hpp"

namespace fbs {

// nodes on S_R; for N = 3 the chart coordinates (theta, phi) are kept as well
struct SphereQuadrature {
  int N = 3;
  double R = 1;
  std::vector<Vec> y;       // points on S_R
  std::vector<Vec> chart;   // (theta, phi) or (t)
  std::vector<double> w;    // surface weights, sum = |S_R|
};

// Gauss-Legendre in cos(theta) times uniform phi; circle: uniform t
SphereQuadrature sphere_quadrature(int N, double R, int n_theta, int n_phi = 0);

// weights in the parameter box of a (theta, phi) chart; multiply by sqrt g for area
struct ChartQuadrature {
  std::vector<Vec> theta;
  std::vector<double> w;
};
ChartQuadrature polar_chart_quadrature(int n_theta, int n_phi);
ChartQuadrature circle_chart_quadrature(int n);

struct BallQuadrature {
  int N = 3;
  double R = 1;
  std::vector<Vec> y;
  std::vector<double> w;  // sum = |B_R|
};
BallQuadrature ball_quadrature(int N, double R, int n_r, int n_theta, int n_phi = 0);

double sphere_area(int N, double R);
double ball_volume(int N, double R);

// eigenvalue of Delta_{S_R} on degree-l harmonics and of B = Delta_{S_R} + (N-1)/R^2
double sphere_laplacian_eigenvalue(int l, int N, double R);
double operator_B_eigenvalue(int l, int N, double R);

// coefficients on real orthonormal Y_lm of S_1 (functions on S_R via y/R)
struct SphericalExpansion {
  double R = 1;
  int lmax = 16;
  std::map<std::pair<int, int>, double> coef;
  double eval(const Vec& y) const;
  double norm2() const;  // L2(S_R) norm squared
};

SphericalExpansion sphere_operator_B(const SphericalExpansion& h);

struct SpectralGap {
  double c = 0;
  int argmin_l = 0;
};
// min over 2 <= l <= lmax of -(B eigenvalue)
SpectralGap spectral_gap(double R, int lmax, int N = 3);

// -(B h, h) / |h|^2 on S_R with B h assembled through the Laplace-Beltrami pipeline
double rayleigh_quotient_B(const SphericalExpansion& h, int n_theta = 24, int n_phi = 48);

struct RigidBasis {
  int N = 3;
  double R = 1;
  double c0 = 0, c1 = 0;
  std::vector<std::function<Vec(const Vec&)>> fields;
  std::vector<std::string> labels;
  Mat gram;
  int count() const { return int(fields.size()); }
};

RigidBasis rigid_basis(double R, int N, const BallQuadrature& q);

struct CompatibilityResidual {
  double volume = 0;
  Vec barycenter;
};
// averages over S_R of the two binomial sums (barycenter sum uses y_i / R)
CompatibilityResidual compatibility_residual(const std::function<double(const Vec&)>& rho0, double R,
                                             const SphereQuadrature& q);

struct ClosedSurfaceIdentities {
  Vec integral_laplace_x;   // int Delta_Gamma x_i
  Mat angular;              // int (x_i Delta x_j - x_j Delta x_i)
  double area = 0;
  double max_abs() const;
};
ClosedSurfaceIdentities closed_surface_identities(const SurfacePatch& p, const ChartQuadrature& q);

double surface_area(const SurfacePatch& p, const ChartQuadrature& q);

}  // namespace fbs
