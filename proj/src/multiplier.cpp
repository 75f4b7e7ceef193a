#include "fbstokes/multiplier.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace fbs {

std::vector<std::vector<int>> multi_indices(int dim, int max_order) {
  std::vector<std::vector<int>> out;
  std::vector<int> a(dim, 0);
  for (int ord = 0; ord <= max_order; ++ord) {
    // enumerate compositions of ord into dim parts, lexicographically descending
    std::function<void(int, int)> rec = [&](int pos, int left) {
      if (pos == dim - 1) {
        a[pos] = left;
        out.push_back(a);
        return;
      }
      for (int k = left; k >= 0; --k) {
        a[pos] = k;
        rec(pos + 1, left - k);
      }
    };
    rec(0, ord);
  }
  return out;
}

namespace {

// central difference for |alpha| <= 2; returns derivative and max |m| on the stencil
std::pair<cplx, double> central(const SymbolEval& m, cplx lam, const std::vector<double>& xi,
                                const std::vector<int>& alpha, double h) {
  std::vector<int> dirs;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    for (int k = 0; k < alpha[i]; ++k) dirs.push_back(int(i));
  double mx = 0;
  auto at = [&](const std::vector<double>& shift) {
    std::vector<double> x = xi;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += shift[i];
    cplx v = m(lam, x);
    mx = std::max(mx, std::abs(v));
    return v;
  };
  std::vector<double> z(xi.size(), 0.0);
  if (dirs.empty()) return {at(z), mx};
  if (dirs.size() == 1) {
    auto p = z, q = z;
    p[dirs[0]] = h;
    q[dirs[0]] = -h;
    cplx d = (at(p) - at(q)) / (2 * h);
    return {d, mx};
  }
  if (dirs[0] == dirs[1]) {
    auto p = z, q = z;
    p[dirs[0]] = h;
    q[dirs[0]] = -h;
    cplx d = (at(p) - 2.0 * at(z) + at(q)) / (h * h);
    return {d, mx};
  }
  auto s = [&](double a, double b) {
    auto v = z;
    v[dirs[0]] = a;
    v[dirs[1]] = b;
    return at(v);
  };
  cplx d = (s(h, h) - s(h, -h) - s(-h, h) + s(-h, -h)) / (4 * h * h);
  return {d, mx};
}

}  // namespace

MultiplierReport verify_multiplier_class(const SymbolEval& m, int order_s, int type,
                                         const std::vector<cplx>& lambdas,
                                         const std::vector<std::vector<double>>& xis, int max_deriv,
                                         double rel_step) {
  if (max_deriv > 2 || max_deriv < 0) throw DomainError("verify_multiplier_class: derivative order must be in [0,2]");
  if (lambdas.empty() || xis.empty()) throw DomainError("verify_multiplier_class: empty grid");
  if (type != 1 && type != 2) throw DomainError("verify_multiplier_class: type must be 1 or 2");
  const int dim = int(xis.front().size());
  MultiplierReport rep;
  rep.order_s = order_s;
  rep.type = type;
  rep.max_deriv = max_deriv;
  rep.rel_step = rel_step;
  for (auto& a : multi_indices(dim, max_deriv)) rep.bounds.push_back({a, 0.0, 0.0});
  const double eps = std::numeric_limits<double>::epsilon();

  for (cplx lam : lambdas)
    for (const auto& xi : xis) {
      double A = 0;
      for (double v : xi) A += v * v;
      A = std::sqrt(A);
      if (type == 2 && A == 0.0) throw DomainError("verify_multiplier_class: type 2 grid contains xi' = 0");
      const double scale = std::sqrt(std::abs(lam)) + A;
      const double h = rel_step * (type == 1 ? scale : A);
      const double m0 = std::abs(m(lam, xi)) / std::pow(scale, order_s);
      for (auto& b : rep.bounds) {
        int ord = 0;
        for (int v : b.alpha) ord += v;
        const double w = type == 1 ? std::pow(scale, order_s - ord) : std::pow(scale, order_s) * std::pow(A, -ord);
        auto [d1, mx1] = central(m, lam, xi, b.alpha, h);
        auto [d2, mx2] = central(m, lam, xi, b.alpha, 0.5 * h);
        const double val = std::abs(d2) / w;
        const double dis = std::abs(d1 - d2) / w;
        b.C = std::max(b.C, val);
        b.max_disagreement = std::max(b.max_disagreement, dis);
        if (ord > 0) {
          const double noise = 4.0 * eps * std::max(mx1, mx2) / std::pow(0.5 * h, ord) / w;
          if (dis > 1e-3 * (val + m0) && noise >= 0.1 * dis) {
            std::ostringstream os;
            os << "finite-difference noise dominates at lambda=" << lam << " |xi'|=" << A << " (h=" << h << ")";
            throw StepTooSmallError(os.str());
          }
        }
      }
      ++rep.n_points;
    }
  for (auto& b : rep.bounds) rep.M = std::max(rep.M, b.C);
  return rep;
}

}  // namespace fbs
