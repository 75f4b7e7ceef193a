#pragma once
// Finite-difference audit of the multiplier classes M_{s,1} / M_{s,2}.

#include <functional>
#include <vector>

#include "fbstokes/common.hpp"

namespace fbs {

using SymbolEval = std::function<cplx(cplx lambda, const std::vector<double>& xi)>;

struct StepTooSmallError : Error {
  explicit StepTooSmallError(const std::string& m) : Error("step-too-small", m) {}
};

struct MultiIndexBound {
  std::vector<int> alpha;
  double C = 0;                  // grid max of |d^alpha m| / weight
  double max_disagreement = 0;   // normalized |D_h - D_{h/2}|
};

struct MultiplierReport {
  int order_s = 0;
  int type = 1;
  int max_deriv = 0;
  double rel_step = 0;
  std::vector<MultiIndexBound> bounds;
  double M = 0;
  std::size_t n_points = 0;
};

std::vector<std::vector<int>> multi_indices(int dim, int max_order);

MultiplierReport verify_multiplier_class(const SymbolEval& m, int order_s, int type,
                                         const std::vector<cplx>& lambdas,
                                         const std::vector<std::vector<double>>& xis, int max_deriv,
                                         double rel_step = 1e-3);

}  // namespace fbs
