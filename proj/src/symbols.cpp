#include "fbstokes/symbols.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_poly.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fbstokes/quadrature.hpp"

namespace fbs {

bool ResolventPoint::admissible() const {
  if (mode == KappaMode::half_plane) return lambda.real() >= lambda0;
  return std::abs(lambda) >= lambda0 * (1 - 1e-14) && std::abs(std::arg(lambda)) <= kPi - sector_angle + 1e-12;
}

TangentialFrequency::TangentialFrequency(std::vector<double> x) : xi(std::move(x)) {
  double s = 0;
  for (double v : xi) s += v * v;
  A = std::sqrt(s);
}

cplx principal_sqrt(cplx z) {
  if (z.imag() == 0.0 && z.real() <= 0.0) {
    std::ostringstream os;
    os << "square root argument " << z.real() << " lies on the closed negative real axis";
    throw BranchError(os.str());
  }
  cplx r = std::sqrt(z);
  if (!(r.real() > 0.0)) throw BranchError("principal root with nonpositive real part");
  return r;
}

cplx compute_B(const ResolventPoint& p, const TangentialFrequency& f) {
  return principal_sqrt(p.lambda / p.mu + f.A * f.A);
}

cplx compute_B0(const ResolventPoint& p, const TangentialFrequency& f) {
  return principal_sqrt(p.lambda + f.A * f.A);
}

cplx compute_M_difference(double x, double A, cplx B) {
  return (std::exp(-B * x) - std::exp(-A * x)) / (B - A);
}

cplx compute_M_quadrature(double x, double A, cplx B) {
  static const QuadRule q = gauss_legendre(16, 0.0, 1.0);
  cplx s = 0;
  for (std::size_t k = 0; k < q.size(); ++k) s += q.w[k] * std::exp(-(A + q.x[k] * (B - A)) * x);
  return -x * s;
}

cplx compute_M(double x, double A, cplx B) {
  if (x == 0.0) return 0.0;
  if (std::abs(B - A) < kMSwitch * (1.0 + std::abs(A) + std::abs(B))) return compute_M_quadrature(x, A, B);
  return compute_M_difference(x, A, B);
}

cplx compute_dM(double x, double A, cplx B) { return -std::exp(-B * x) - A * compute_M(x, A, B); }

cplx compute_d2M(double x, double A, cplx B) {
  return (A + B) * std::exp(-B * x) + A * A * compute_M(x, A, B);
}

cplx compute_D(cplx A, cplx B) { return B * B * B + A * B * B + 3.0 * A * A * B - A * A * A; }

cplx compute_detL(cplx A, cplx B) {
  const cplx s = A * A + B * B;
  return s * s - 4.0 * A * A * A * B;
}

cplx compute_E_kappa(const ResolventPoint& p, const TangentialFrequency& f) {
  const cplx B = compute_B(p, f);
  double drift = 0;
  for (std::size_t j = 0; j < p.a_kappa.size() && j < f.xi.size(); ++j) drift += f.xi[j] * p.a_kappa[j];
  const double A = f.A;
  return p.mu * (p.lambda + kI * drift) * compute_D(A, B) + p.sigma * A * A * A * (A + B);
}

SymbolValues evaluate_symbols(const ResolventPoint& p, const TangentialFrequency& f) {
  SymbolValues s;
  s.A = f.A;
  s.B = compute_B(p, f);
  s.B0 = compute_B0(p, f);
  s.D = compute_D(f.A, s.B);
  s.detL = compute_detL(f.A, s.B);
  s.E_kappa = compute_E_kappa(p, f);
  return s;
}

// ---- grids ----

static std::vector<double> logspace(double a, double b, int n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = a;
    return v;
  }
  const double la = std::log(a), lb = std::log(b);
  for (int k = 0; k < n; ++k) v[k] = std::exp(la + (lb - la) * k / (n - 1));
  v[0] = a;
  v[n - 1] = b;
  return v;
}

std::vector<cplx> SectorGrid::lambdas() const {
  std::vector<cplx> out;
  const auto mods = logspace(lambda0, lambda_max, n_lambda);
  const double amax = kPi - eps;
  for (double r : mods)
    for (int k = 0; k < n_arg; ++k) {
      const double a = n_arg == 1 ? 0.0 : -amax + 2.0 * amax * k / (n_arg - 1);
      out.push_back(std::polar(r, a));
    }
  return out;
}

std::vector<double> SectorGrid::As() const {
  if (a_min <= 0.0) {
    std::vector<double> v{0.0};
    auto rest = logspace(1e-3 * a_max, a_max, std::max(1, n_a - 1));
    v.insert(v.end(), rest.begin(), rest.end());
    return v;
  }
  return logspace(a_min, a_max, n_a);
}

SectorGrid SectorGrid::refined() const {
  SectorGrid r = *this;
  r.n_lambda = 2 * n_lambda - 1;
  r.n_arg = 2 * n_arg - 1;
  r.n_a = 2 * n_a - 1;
  return r;
}

std::vector<GridPoint> expand_grid(const SectorGrid& g) {
  std::vector<GridPoint> pts;
  const auto lams = g.lambdas();
  const auto as = g.As();
  for (double mu : g.mus)
    for (cplx lam : lams)
      for (double A : as) {
        GridPoint gp;
        gp.point.lambda = lam;
        gp.point.mu = mu;
        gp.point.sigma = g.sigma;
        gp.point.a_kappa = g.a_kappa;
        gp.point.sector_angle = g.eps;
        gp.point.lambda0 = g.lambda0;
        std::vector<double> xi(g.dim - 1, 0.0);
        xi[0] = A;
        gp.freq = TangentialFrequency(xi);
        pts.push_back(std::move(gp));
      }
  return pts;
}

std::string to_string(SymbolKind k) {
  switch (k) {
    case SymbolKind::re_B: return "ReB";
    case SymbolKind::abs_B: return "absB";
    case SymbolKind::abs_D: return "absD";
    case SymbolKind::abs_E0: return "absE0";
  }
  return "?";
}

std::string to_string(WeightKind k) {
  switch (k) {
    case WeightKind::sqrt_lambda_plus_A: return "sqrt|lambda|+A";
    case WeightKind::sqrt_lambda_over_mu_plus_A: return "sqrt(|lambda|/mu)+A";
    case WeightKind::sqrt_lambda_over_mu_plus_A_cubed: return "(sqrt(|lambda|/mu)+A)^3";
    case WeightKind::E0_weight: return "(|lambda|+A)(sqrt|lambda|+A)^3";
  }
  return "?";
}

double eval_symbol(SymbolKind k, const ResolventPoint& p, const TangentialFrequency& f) {
  switch (k) {
    case SymbolKind::re_B: return compute_B(p, f).real();
    case SymbolKind::abs_B: return std::abs(compute_B(p, f));
    case SymbolKind::abs_D: return std::abs(compute_D(f.A, compute_B(p, f)));
    case SymbolKind::abs_E0: {
      ResolventPoint q = p;
      q.a_kappa.clear();
      return std::abs(compute_E_kappa(q, f));
    }
  }
  return 0;
}

double eval_weight(WeightKind k, const ResolventPoint& p, const TangentialFrequency& f) {
  const double l = std::abs(p.lambda);
  switch (k) {
    case WeightKind::sqrt_lambda_plus_A: return std::sqrt(l) + f.A;
    case WeightKind::sqrt_lambda_over_mu_plus_A: return std::sqrt(l / p.mu) + f.A;
    case WeightKind::sqrt_lambda_over_mu_plus_A_cubed: return std::pow(std::sqrt(l / p.mu) + f.A, 3);
    case WeightKind::E0_weight: return (l + f.A) * std::pow(std::sqrt(l) + f.A, 3);
  }
  return 1;
}

BoundEstimate estimate_bound_constant(const ScalarFn& symbol, const ScalarFn& weight,
                                      const std::vector<GridPoint>& grid) {
  if (grid.empty()) throw DomainError("estimate_bound_constant: empty grid");
  BoundEstimate b;
  b.c_min = std::numeric_limits<double>::infinity();
  b.c_max = -std::numeric_limits<double>::infinity();
  for (const auto& gp : grid) {
    const double w = weight(gp.point, gp.freq);
    if (!(w > 0.0)) throw DomainError("estimate_bound_constant: normalizer not positive");
    const double r = symbol(gp.point, gp.freq) / w;
    if (r < b.c_min) {
      b.c_min = r;
      b.argmin = gp;
    }
    if (r > b.c_max) {
      b.c_max = r;
      b.argmax = gp;
    }
  }
  b.n_points = grid.size();
  return b;
}

BoundEstimate estimate_bound_constant(SymbolKind s, WeightKind w, const std::vector<GridPoint>& grid) {
  auto b = estimate_bound_constant([s](const ResolventPoint& p, const TangentialFrequency& f) { return eval_symbol(s, p, f); },
                                   [w](const ResolventPoint& p, const TangentialFrequency& f) { return eval_weight(w, p, f); },
                                   grid);
  b.symbol = to_string(s);
  b.weight = to_string(w);
  return b;
}

Lambda1Result find_lambda1(const SectorGrid& g, double floor, double lo, double hi, int iters) {
  const double span = g.lambda_max / g.lambda0;
  auto eval = [&](double l1) {
    SectorGrid h = g;
    h.lambda0 = l1;
    h.lambda_max = l1 * span;
    h.a_kappa.clear();
    return estimate_bound_constant(SymbolKind::abs_E0, WeightKind::E0_weight, expand_grid(h));
  };
  Lambda1Result r;
  BoundEstimate at_lo = eval(lo);
  if (at_lo.c_min >= floor) {
    r.lambda1 = lo;
    r.bound = at_lo;
    return r;
  }
  BoundEstimate at_hi = eval(hi);
  if (at_hi.c_min < floor) throw DomainError("find_lambda1: no admissible lambda1 in search interval");
  double a = std::log(lo), b = std::log(hi);
  for (r.iterations = 0; r.iterations < iters && b - a > 1e-6; ++r.iterations) {
    const double m = 0.5 * (a + b);
    BoundEstimate e = eval(std::exp(m));
    if (e.c_min >= floor) {
      b = m;
      at_hi = e;
    } else {
      a = m;
    }
  }
  r.lambda1 = std::exp(b);
  r.bound = at_hi;
  return r;
}

std::vector<E0Zero> e0_sector_zeros(double mu, double sigma, double eps, double a_lo, double a_hi, int n_a) {
  if (!(mu > 0) || !(a_lo > 0) || !(a_hi > a_lo) || n_a < 2) throw DomainError("e0_sector_zeros: bad arguments");
  std::vector<E0Zero> out;
  if (sigma == 0) return out;
  gsl_poly_complex_workspace* w = gsl_poly_complex_workspace_alloc(5);
  const double m2 = mu * mu;
  for (int i = 0; i < n_a; ++i) {
    const double A = a_lo * std::pow(a_hi / a_lo, double(i) / (n_a - 1));
    const double a2 = A * A, a3 = a2 * A;
    const double coef[5] = {m2 * a2 * a2 + sigma * a3, -4 * m2 * a3, 2 * m2 * a2, 0.0, m2};
    double z[8];
    if (gsl_poly_complex_solve(coef, 5, w, z) != GSL_SUCCESS) continue;
    for (int k = 0; k < 4; ++k) {
      const cplx B(z[2 * k], z[2 * k + 1]);
      if (!(B.real() > 0)) continue;
      const cplx lambda = mu * (B * B - a2);
      if (std::abs(std::arg(lambda)) > kPi - eps) continue;
      out.push_back({lambda, A});
    }
  }
  gsl_poly_complex_workspace_free(w);
  return out;
}

double e0_zero_radius(const std::vector<double>& mus, double sigma, double eps) {
  double r = 0;
  for (double mu : mus) {
    double lo = 1e-4, hi = 1e4;
    for (int pass = 0; pass < 3; ++pass) {
      const int n = 4001;
      const double step = std::pow(hi / lo, 1.0 / (n - 1));
      double best = 0, best_A = 0;
      for (const auto& z : e0_sector_zeros(mu, sigma, eps, lo, hi, n))
        if (std::abs(z.lambda) > best) {
          best = std::abs(z.lambda);
          best_A = z.A;
        }
      if (best == 0) break;
      r = std::max(r, best);
      lo = best_A / step;
      hi = best_A * step;
    }
  }
  return r;
}

}  // namespace fbs
