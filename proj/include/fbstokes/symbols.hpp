#pragma once
// Scalar resolvent symbols A, B, B0, M(x), D(A,B), E_kappa and their grid bounds.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fbstokes/common.hpp"

namespace fbs {

enum class KappaMode { sector, half_plane };

struct ResolventPoint {
  cplx lambda{1.0, 0.0};
  double mu = 1.0;
  double sigma = 0.0;
  std::vector<double> a_kappa;  // length N-1, empty means zero
  double sector_angle = kPi / 4;
  double lambda0 = 1.0;
  KappaMode mode = KappaMode::sector;

  bool admissible() const;
};

struct TangentialFrequency {
  std::vector<double> xi;
  double A = 0.0;
  TangentialFrequency() = default;
  explicit TangentialFrequency(std::vector<double> x);
};

struct SymbolValues {
  double A = 0;
  cplx B, B0, D, E_kappa, detL;
};

// principal square root; throws BranchError on the closed negative real axis
cplx principal_sqrt(cplx z);

cplx compute_B(const ResolventPoint& p, const TangentialFrequency& f);
cplx compute_B0(const ResolventPoint& p, const TangentialFrequency& f);

inline constexpr double kMSwitch = 1e-6;
cplx compute_M(double x, double A, cplx B);
cplx compute_M_quadrature(double x, double A, cplx B);
cplx compute_M_difference(double x, double A, cplx B);
// d/dx M and d^2/dx^2 M from the stable recursions
cplx compute_dM(double x, double A, cplx B);
cplx compute_d2M(double x, double A, cplx B);

cplx compute_D(cplx A, cplx B);
cplx compute_detL(cplx A, cplx B);
cplx compute_E_kappa(const ResolventPoint& p, const TangentialFrequency& f);
SymbolValues evaluate_symbols(const ResolventPoint& p, const TangentialFrequency& f);

// ---- grids and bound constants ----

struct SectorGrid {
  double eps = kPi / 4;
  double lambda0 = 1.0;
  double lambda_max = 1e4;
  int n_lambda = 17;
  int n_arg = 17;
  double a_min = 1e-3;
  double a_max = 1e2;
  int n_a = 21;
  std::vector<double> mus{1.0};
  double sigma = 1.0;
  std::vector<double> a_kappa;
  int dim = 3;

  std::vector<cplx> lambdas() const;
  std::vector<double> As() const;
  SectorGrid refined() const;  // doubles every resolution
};

struct GridPoint {
  ResolventPoint point;
  TangentialFrequency freq;
};

std::vector<GridPoint> expand_grid(const SectorGrid& g);

enum class SymbolKind { re_B, abs_B, abs_D, abs_E0 };
enum class WeightKind { sqrt_lambda_plus_A, sqrt_lambda_over_mu_plus_A, sqrt_lambda_over_mu_plus_A_cubed,
                        E0_weight };

std::string to_string(SymbolKind k);
std::string to_string(WeightKind k);
double eval_symbol(SymbolKind k, const ResolventPoint& p, const TangentialFrequency& f);
double eval_weight(WeightKind k, const ResolventPoint& p, const TangentialFrequency& f);

struct BoundEstimate {
  double c_min = 0, c_max = 0;
  GridPoint argmin, argmax;
  std::size_t n_points = 0;
  std::string symbol, weight;
};

using ScalarFn = std::function<double(const ResolventPoint&, const TangentialFrequency&)>;

BoundEstimate estimate_bound_constant(const ScalarFn& symbol, const ScalarFn& weight,
                                      const std::vector<GridPoint>& grid);
BoundEstimate estimate_bound_constant(SymbolKind s, WeightKind w, const std::vector<GridPoint>& grid);

struct Lambda1Result {
  double lambda1 = 0;
  BoundEstimate bound;
  int iterations = 0;
};

// smallest lambda1 in [lo, hi] (log-bisection) for which the E0 ratio grid minimum is >= floor
Lambda1Result find_lambda1(const SectorGrid& g, double floor, double lo = 1e-4, double hi = 1e4, int iters = 40);

struct E0Zero {
  cplx lambda;
  double A = 0;
};

// zeros of E0 (A_kappa = 0) with lambda in the closed sector |arg lambda| <= pi - eps,
// from the quartic mu^2((A^2+B^2)^2 - 4A^3 B) + sigma A^3 in B on a log grid of A
std::vector<E0Zero> e0_sector_zeros(double mu, double sigma, double eps, double a_lo = 1e-4, double a_hi = 1e4,
                                    int n_a = 4001);

// largest |lambda| over the sector zeros for every mu (0 when there are none)
double e0_zero_radius(const std::vector<double>& mus, double sigma, double eps);

}  // namespace fbs
