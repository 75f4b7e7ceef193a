#pragma once
// Volevich-type integral operators in the normal variable: y_N-quadrature of
// exponential and divided-difference kernels applied to a density g(xi', y_N).

#include <functional>
#include <string>
#include <vector>

#include "fbstokes/quadrature.hpp"
#include "fbstokes/symbols.hpp"

namespace fbs {

// L1  : lambda^{1/2} e^{-B(x+y)}
// L1b : A e^{-B(x+y)}
// L2  : A e^{-A(x+y)}
// L3  : A^2 M(x+y)
// L4  : lambda^{1/2} A M(x+y)
// L6  : phi(x) e^{-A(x+y)} psi(y)
// L7  : phi(x) A e^{-A(x+y)} psi(y)
enum class VolevichKind { L1, L1b, L2, L3, L4, L6, L7 };

std::string to_string(VolevichKind k);
VolevichKind volevich_kind_from_string(const std::string& s);

// C-infinity bump supported in (-2, 2) used as the cutoffs phi, psi
double volevich_cutoff(double t);

struct VolevichQuadrature {
  int panels = 64;
  int order = 16;
  double truncation_factor = 40.0;  // y_N in [0, factor / decay rate]
};

using VolevichSymbol = std::function<cplx(const ResolventPoint&, const TangentialFrequency&)>;
// density value at frequency index k and normal coordinate y
using VolevichDensity = std::function<cplx(std::size_t k, double y)>;

struct VolevichResult {
  std::vector<std::vector<cplx>> values;  // [frequency][x]
  std::vector<double> y_upper;             // truncation point used per frequency
  int panels = 0, order = 0;
};

// y-rule used for one frequency
QuadRule volevich_rule(VolevichKind kind, double A, cplx B, const VolevichQuadrature& q, double* upper = nullptr);

VolevichResult apply_volevich_operator(VolevichKind kind, const ResolventPoint& p, const VolevichSymbol& m,
                                       const std::vector<TangentialFrequency>& freqs, const VolevichDensity& g,
                                       const std::vector<double>& xs, const VolevichQuadrature& q = {});

}  // namespace fbs
