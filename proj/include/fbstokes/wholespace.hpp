#pragma once
// Whole-space resolvent and weak Laplace / Dirichlet solvers.

#include <functional>
#include <vector>

#include "fbstokes/symbols.hpp"

namespace fbs {

using FourierField = std::function<CVec(const Vec& xi)>;

struct WholeSpaceSample {
  CVec u_hat, gvec_hat;
  cplx g_hat, q_hat;
};

struct WholeSpaceSolution {
  cplx lambda;
  double mu = 1;
  FourierField f_hat;
  WholeSpaceSample eval(const Vec& xi) const;
  // relative momentum / divergence residuals at xi
  double momentum_residual(const Vec& xi) const;
  double divergence_residual(const Vec& xi) const;
};

WholeSpaceSolution solve_wholespace(const ResolventPoint& p, FourierField f_hat);

// Delta u = div f in Fourier variables: u_hat = -(i xi . f_hat)/|xi|^2
std::function<cplx(const Vec&)> solve_weak_laplace_wholespace(FourierField f_hat);
double weak_laplace_residual(const FourierField& f_hat, const Vec& xi);

// ---- half-space weak Dirichlet problem on a periodic embedding ----

struct WeakDirichletInput {
  int dim = 3;
  std::function<Vec(const Vec& x)> f;  // defined for x_N > 0
  Vec support_lo, support_hi;          // support box of f inside the half space
  int n = 32;                          // grid points per direction
  bool smooth_extension = false;       // f already extends smoothly (odd/even) across x_N = 0
};

struct GridField {
  int dim = 3, n = 0;
  Vec lo;       // lower corner of the periodic box
  double h = 0; // spacing (box side / n)
  std::vector<double> data;
  std::size_t index(const std::vector<int>& k) const;
  Vec coord(const std::vector<int>& k) const;
};

struct WeakDirichletResult {
  GridField u;
  double boundary_max = 0;         // max |u| on x_N = 0
  double laplacian_residual = 0;   // max |Delta_h u - div_h f| over the half-space grid
  double box_side = 0;
};

WeakDirichletResult solve_weak_dirichlet_halfspace(const WeakDirichletInput& in);

}  // namespace fbs
