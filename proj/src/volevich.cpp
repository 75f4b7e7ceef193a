#include "fbstokes/volevich.hpp"

#include <algorithm>
#include <cmath>

namespace fbs {

std::string to_string(VolevichKind k) {
  switch (k) {
    case VolevichKind::L1: return "L1";
    case VolevichKind::L1b: return "L1b";
    case VolevichKind::L2: return "L2";
    case VolevichKind::L3: return "L3";
    case VolevichKind::L4: return "L4";
    case VolevichKind::L6: return "L6";
    case VolevichKind::L7: return "L7";
  }
  return "?";
}

VolevichKind volevich_kind_from_string(const std::string& s) {
  for (auto k : {VolevichKind::L1, VolevichKind::L1b, VolevichKind::L2, VolevichKind::L3, VolevichKind::L4,
                 VolevichKind::L6, VolevichKind::L7})
    if (to_string(k) == s) return k;
  throw DomainError("unknown Volevich kernel " + s);
}

double volevich_cutoff(double t) {
  const double s = t / 2.0;
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

QuadRule volevich_rule(VolevichKind kind, double A, cplx B, const VolevichQuadrature& q, double* upper) {
  double top = q.truncation_factor / B.real();
  switch (kind) {
    case VolevichKind::L2:
    case VolevichKind::L3:
    case VolevichKind::L4:
      if (A > 0.0) top = q.truncation_factor / std::min(A, B.real());
      break;
    case VolevichKind::L6:
    case VolevichKind::L7:
      top = 2.0;
      break;
    default: break;
  }
  if (upper) *upper = top;
  return composite_gauss_legendre(q.panels, q.order, 0.0, top);
}

namespace {

cplx kernel(VolevichKind kind, const cplx& sl, double A, const cplx& B, double x, double y) {
  const double s = x + y;
  switch (kind) {
    case VolevichKind::L1: return sl * std::exp(-B * s);
    case VolevichKind::L1b: return A * std::exp(-B * s);
    case VolevichKind::L2: return A * std::exp(-A * s);
    case VolevichKind::L3: return A * A * compute_M(s, A, B);
    case VolevichKind::L4: return sl * A * compute_M(s, A, B);
    case VolevichKind::L6: return volevich_cutoff(x) * std::exp(-A * s) * volevich_cutoff(y);
    case VolevichKind::L7: return volevich_cutoff(x) * A * std::exp(-A * s) * volevich_cutoff(y);
  }
  return 0.0;
}

}  // namespace

VolevichResult apply_volevich_operator(VolevichKind kind, const ResolventPoint& p, const VolevichSymbol& m,
                                       const std::vector<TangentialFrequency>& freqs, const VolevichDensity& g,
                                       const std::vector<double>& xs, const VolevichQuadrature& q) {
  if (freqs.empty() || xs.empty()) throw DomainError("apply_volevich_operator: empty grid");
  VolevichResult r;
  r.panels = q.panels;
  r.order = q.order;
  const cplx sl = principal_sqrt(p.lambda);
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    const auto& f = freqs[k];
    const cplx B = compute_B(p, f);
    double top = 0;
    const QuadRule rule = volevich_rule(kind, f.A, B, q, &top);
    r.y_upper.push_back(top);
    std::vector<cplx> gy(rule.size());
    for (std::size_t j = 0; j < rule.size(); ++j) gy[j] = g(k, rule.x[j]);
    const cplx mv = m(p, f);
    std::vector<cplx> row(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      cplx s = 0;
      for (std::size_t j = 0; j < rule.size(); ++j) s += rule.w[j] * kernel(kind, sl, f.A, B, xs[i], rule.x[j]) * gy[j];
      row[i] = mv * s;
    }
    r.values.push_back(std::move(row));
  }
  return r;
}

}  // namespace fbs
