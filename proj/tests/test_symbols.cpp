#include "doctest.h"

#include <cmath>

#include "fbstokes/multiplier.hpp"
#include "fbstokes/rng.hpp"
#include "fbstokes/symbols.hpp"

using namespace fbs;

namespace {

ResolventPoint at(cplx lam, double mu = 1.0) {
  ResolventPoint p;
  p.lambda = lam;
  p.mu = mu;
  return p;
}

}  // namespace

TEST_CASE("B principal root") {
  CHECK(std::abs(compute_B(at(1.0), TangentialFrequency({0.0, 0.0})) - 1.0) < 1e-15);
  const cplx b = compute_B(at(kI), TangentialFrequency({0.0, 0.0}));
  CHECK(std::abs(b - std::polar(1.0, kPi / 4)) < 1e-15);
  CHECK_THROWS_AS(compute_B(at(-1.0), TangentialFrequency({0.0, 0.0})), BranchError);
  CHECK_THROWS_AS(principal_sqrt(0.0), BranchError);
}

TEST_CASE("B squares back and stays in the right half plane") {
  CounterRng rng(11);
  for (int k = 0; k < 2000; ++k) {
    const cplx lam = std::polar(std::exp(rng.uniform(0, 9)), rng.uniform(-0.75, 0.75) * kPi);
    const double mu = rng.uniform(0.5, 2.0);
    TangentialFrequency f({rng.uniform(-5, 5), rng.uniform(-5, 5)});
    const cplx B = compute_B(at(lam, mu), f);
    CHECK(B.real() > 0);
    CHECK(std::abs(B * B - (lam / mu + f.A * f.A)) <= 1e-12 * std::abs(B * B));
    CHECK(compute_B0(at(lam, mu), f).real() > 0);
  }
}

TEST_CASE("M values and the two evaluation paths") {
  CHECK(compute_M(0.0, 1.0, 2.0) == cplx(0.0));
  // e^{-2} - e^{-1}
  CHECK(std::abs(compute_M(1.0, 1.0, 2.0) - cplx(-0.23254415793482963)) < 1e-15);
  CHECK(std::abs(compute_M_quadrature(1.0, 1.0, 2.0) - cplx(-0.23254415793482963)) < 1e-13);
  for (double x : {0.1, 1.0, 3.0}) {
    const double A = 1.3;
    CHECK(std::abs(compute_M(x, A, A) - (-x * std::exp(-A * x))) < 1e-14);
    const cplx B = A + cplx(3e-5, 2e-5);
    const cplx q = compute_M_quadrature(x, A, B), d = compute_M_difference(x, A, B);
    CHECK(std::abs(q - d) <= 1e-10 * std::abs(q));
  }
}

TEST_CASE("M derivative recursions match finite differences") {
  const double A = 0.7;
  const cplx B(1.4, 0.6);
  const double x = 0.9, h = 1e-4;
  const cplx fd1 = (compute_M(x + h, A, B) - compute_M(x - h, A, B)) / (2 * h);
  const cplx fd2 = (compute_M(x + h, A, B) - 2.0 * compute_M(x, A, B) + compute_M(x - h, A, B)) / (h * h);
  CHECK(std::abs(fd1 - compute_dM(x, A, B)) < 1e-8);
  CHECK(std::abs(fd2 - compute_d2M(x, A, B)) < 1e-6);
}

TEST_CASE("D cubic, factorization and homogeneity") {
  CHECK(std::abs(compute_D(1.0, 2.0) - 17.0) < 1e-14);
  CHECK(std::abs(compute_D(0.0, cplx(1, 2)) - std::pow(cplx(1, 2), 3)) < 1e-13);
  CounterRng rng(3);
  for (int k = 0; k < 10000; ++k) {
    const cplx A = rng.cnormal(), B = rng.cnormal();
    const cplx s = A * A + B * B;
    const cplx lhs = s * s - 4.0 * A * A * A * B;
    const double sc = std::pow(std::abs(A) + std::abs(B), 4);
    REQUIRE(std::abs(lhs - (B - A) * compute_D(A, B)) <= 1e-12 * sc);
    REQUIRE(std::abs(compute_detL(A, B) - (B - A) * compute_D(A, B)) <= 1e-12 * sc);
    const double m = rng.uniform(0.1, 10);
    REQUIRE(std::abs(compute_D(m * A, m * B) - m * m * m * compute_D(A, B)) <= 1e-12 * m * m * m * sc);
  }
}

TEST_CASE("D alternative form on the dispersion relation") {
  CounterRng rng(5);
  for (int k = 0; k < 200; ++k) {
    const cplx lam = std::polar(rng.uniform(1, 50), rng.uniform(-0.7, 0.7) * kPi);
    const double mu = rng.uniform(0.5, 2);
    TangentialFrequency f({rng.uniform(0, 4), rng.uniform(0, 4)});
    const cplx B = compute_B(at(lam, mu), f);
    const cplx alt = B * (lam / mu + 4.0 * f.A * f.A) + f.A * lam / mu;
    CHECK(std::abs(alt - compute_D(f.A, B)) <= 1e-11 * std::abs(alt));
  }
}

TEST_CASE("B homogeneity under parabolic scaling") {
  const TangentialFrequency f({0.3, 0.4});
  const cplx lam(2, 1);
  for (double m : {0.5, 3.0, 20.0}) {
    const cplx lhs = compute_B(at(m * m * lam, 1.3), TangentialFrequency({m * 0.3, m * 0.4}));
    CHECK(std::abs(lhs - m * compute_B(at(lam, 1.3), f)) <= 1e-12 * std::abs(lhs));
  }
}

TEST_CASE("E_kappa special cases") {
  ResolventPoint p = at(cplx(2, 1), 1.5);
  p.sigma = 0.7;
  TangentialFrequency zero({0.0, 0.0});
  const cplx B = compute_B(p, zero);
  CHECK(std::abs(compute_E_kappa(p, zero) - p.mu * p.lambda * B * B * B) < 1e-12);
  p.sigma = 0;
  TangentialFrequency f({0.4, -1.0});
  CHECK(std::abs(compute_E_kappa(p, f) - p.mu * p.lambda * compute_D(f.A, compute_B(p, f))) < 1e-12);
}

TEST_CASE("bound constants on the sector grid") {
  SectorGrid g;
  g.n_lambda = 9;
  g.n_arg = 9;
  g.n_a = 11;
  g.mus = {0.5, 1.0, 2.0};
  const auto pts = expand_grid(g);
  const auto reB = estimate_bound_constant(SymbolKind::re_B, WeightKind::sqrt_lambda_plus_A, pts);
  CHECK(reB.c_min > 0);
  const auto absB = estimate_bound_constant(SymbolKind::abs_B, WeightKind::sqrt_lambda_over_mu_plus_A, pts);
  CHECK(absB.c_max <= 1 + 1e-12);
  const auto D = estimate_bound_constant(SymbolKind::abs_D, WeightKind::sqrt_lambda_over_mu_plus_A_cubed, pts);
  CHECK(D.c_max <= 6);
  CHECK(D.c_min > 0);

  const auto reB2 = estimate_bound_constant(SymbolKind::re_B, WeightKind::sqrt_lambda_plus_A, expand_grid(g.refined()));
  CHECK(std::abs(reB2.c_min - reB.c_min) / reB.c_min < 0.05);

  std::vector<GridPoint> one{pts[7]};
  const auto b1 = estimate_bound_constant(SymbolKind::abs_D, WeightKind::sqrt_lambda_over_mu_plus_A_cubed, one);
  const double direct = eval_symbol(SymbolKind::abs_D, one[0].point, one[0].freq) /
                        eval_weight(WeightKind::sqrt_lambda_over_mu_plus_A_cubed, one[0].point, one[0].freq);
  CHECK(b1.c_min == direct);
  CHECK(b1.c_max == direct);
  CHECK_THROWS_AS(estimate_bound_constant(SymbolKind::abs_D, WeightKind::sqrt_lambda_plus_A, {}), DomainError);
}

TEST_CASE("lambda1 search for the surface tension symbol") {
  SectorGrid g;
  g.n_lambda = 7;
  g.n_arg = 7;
  g.n_a = 9;
  g.a_max = 10;
  const auto r = find_lambda1(g, 1e-3);
  CHECK(r.lambda1 > 0);
  CHECK(r.bound.c_min >= 1e-3);
}

TEST_CASE("multiplier classes") {
  std::vector<cplx> lams;
  for (double r : {1.0, 10.0, 100.0})
    for (double a : {-2.0, 0.0, 2.0}) lams.push_back(std::polar(r, a));
  std::vector<std::vector<double>> xis{{0.3, 0.1}, {1.0, -2.0}, {5.0, 4.0}};

  auto one = [](cplx, const std::vector<double>&) { return cplx(1.0); };
  const auto r1 = verify_multiplier_class(one, 0, 1, lams, xis, 2);
  CHECK(r1.bounds[0].C == doctest::Approx(1.0));
  for (std::size_t k = 1; k < r1.bounds.size(); ++k) CHECK(r1.bounds[k].C < 1e-12);

  auto m2 = [](cplx lam, const std::vector<double>& xi) {
    ResolventPoint p;
    p.lambda = lam;
    const cplx B = compute_B(p, TangentialFrequency(xi));
    return principal_sqrt(lam) / (B * B * B);
  };
  const auto r2 = verify_multiplier_class(m2, -2, 1, lams, xis, 2);
  CHECK(std::isfinite(r2.M));
  CHECK(r2.M < 100);

  auto m3 = [](cplx lam, const std::vector<double>& xi) {
    ResolventPoint p;
    p.lambda = lam;
    TangentialFrequency f(xi);
    const cplx B = compute_B(p, f);
    return (B - f.A) / compute_D(f.A, B) * kI * xi[0] / f.A;
  };
  const auto r3 = verify_multiplier_class(m3, -2, 2, lams, xis, 2);
  CHECK(std::isfinite(r3.M));
  CHECK(r3.M < 100);
}
