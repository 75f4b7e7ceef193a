#pragma once
// Exact half-space resolvent profiles in tangential Fourier variables.

#include <optional>
#include <vector>

#include "fbstokes/symbols.hpp"

namespace fbs {

struct LopatinskiSolution {
  cplx alpha_N, beta_N, omega;
};

// 2x2 system  (A^2+B^2) beta_N + 2A^2 alpha_N = iξ'.g'/mu,  2AB beta_N + (A^2+B^2) alpha_N = A g_N/mu
LopatinskiSolution solve_lopatinski(double A, cplx B, double mu, cplx rhs_tangential, cplx rhs_normal);

struct ProfileSample {
  std::vector<cplx> v, dv, d2v;  // length N
  cplx theta, dtheta;
};

struct FourierProfile {
  ResolventPoint point;
  TangentialFrequency freq;
  cplx B;
  std::vector<cplx> coef_expA;  // N velocity components then theta
  std::vector<cplx> coef_expB;  // N
  std::vector<cplx> coef_M;     // N
  std::optional<cplx> h_hat;

  int dim() const { return int(coef_expB.size()); }
  ProfileSample eval(double x) const;
};

FourierProfile zero_profile(const ResolventPoint& p, const TangentialFrequency& f);
FourierProfile operator+(const FourierProfile& a, const FourierProfile& b);
FourierProfile operator*(cplx s, const FourierProfile& a);

// Boundary rows of the Neumann model read  mu(d_N v_j + i xi_j v_N) = g_j,  2 mu d_N v_N - theta = g_N
// with g_j = -h_j(xi',0).
FourierProfile solve_neumann_model(const ResolventPoint& p, const TangentialFrequency& f, const std::vector<cplx>& h_hat0);

// Same profile parametrized directly by the boundary data g.
FourierProfile neumann_profile_from_g(const ResolventPoint& p, const TangentialFrequency& f, const std::vector<cplx>& g);

FourierProfile solve_surface_tension_model(const ResolventPoint& p, const TangentialFrequency& f, cplx d_hat);

struct ResidualSet {
  double momentum = 0;    // max over components and samples, relative
  double divergence = 0;
  double boundary_tangential = 0;
  double boundary_normal = 0;
  double kinematic = 0;   // tension model only
  double max_interior() const { return std::max(momentum, divergence); }
  double max_boundary() const { return std::max({boundary_tangential, boundary_normal, kinematic}); }
  double max_all() const { return std::max(max_interior(), max_boundary()); }
};

std::vector<double> profile_sample_points(const FourierProfile& prof, int n = 32);

ResidualSet neumann_residuals(const FourierProfile& prof, const std::vector<cplx>& g, const std::vector<double>& xs);
ResidualSet tension_residuals(const FourierProfile& prof, cplx d_hat, const std::vector<double>& xs);

// Coefficient-level divergence: exact algebraic combination that must vanish.
double divergence_coefficient_defect(const FourierProfile& prof);

struct PressureAux {
  cplx B0, rho_hat;
  cplx eval(double x) const { return std::exp(-B0 * x) * rho_hat; }
  cplx d2(double x) const { return B0 * B0 * eval(x); }
};

PressureAux solve_pressure_auxiliary(const ResolventPoint& p, const TangentialFrequency& f, cplx rho_hat0);

}  // namespace fbs
