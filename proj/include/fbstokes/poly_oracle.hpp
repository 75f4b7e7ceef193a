#pragma once
// Exact reference for the interior nonlinear terms on polynomial inputs.
// Multivariate polynomials in (y_1, .., y_N, t) with rational coefficients;
// V0 is carried as adj(I + K) / det(I + K) and differentiated by the quotient rule.

#include <array>
#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "fbstokes/fields.hpp"
#include "fbstokes/nonlinear_kernel.hpp"

namespace fbs {

using Rational = boost::multiprecision::cpp_rational;

class Poly {
 public:
  using Exp = std::array<int, 4>;  // powers of y_1, y_2, y_3, t

  Poly() = default;
  Poly(const Rational& c);  // NOLINT: constants
  static Poly var(int k);
  static Poly monomial(const Rational& c, Exp e);

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly operator-() const;
  Poly derivative(int k) const;
  Rational eval(const std::array<Rational, 4>& at) const;
  J4 eval_jet(const std::vector<J4>& y, const J4& t) const;
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  const std::map<Exp, Rational>& terms() const { return terms_; }

  friend Poly operator*(const Poly& a, const Poly& b);

 private:
  std::map<Exp, Rational> terms_;
  void prune();
};

Poly operator+(Poly a, const Poly& b);
Poly operator-(Poly a, const Poly& b);

struct PolyCase {
  int N = 3;
  std::vector<Poly> u, psi;
  Rational mu = 1, density = 1;
  FVariant variant = FVariant::hanzawa;
  Rational kappa = 0;
  std::array<Rational, 4> at{};  // (y, t)
};

struct OracleTerms {
  std::vector<Rational> f, gvec;
  Rational g;
};

// straightforward expansion of the displayed sums with rational-function derivatives
OracleTerms poly_oracle(const PolyCase& c);

// exact pointwise data for the shared kernel, from polynomial differentiation
PointData<Rational> poly_point_data(const PolyCase& c);

// the same polynomials as jet fields for the floating-point assembler
VecFieldST poly_field(std::vector<Poly> comps);

// seeded random polynomial input: u quadratic in y and linear in t, Psi quadratic with small coefficients
PolyCase random_poly_case(int N, std::uint64_t seed, int denominator = 16);

std::string to_string(const Rational& r);

}  // namespace fbs
