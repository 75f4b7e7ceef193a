#include "doctest.h"

#include <cmath>

#include "fbstokes/halfspace.hpp"
#include "fbstokes/rng.hpp"

using namespace fbs;

namespace {

ResolventPoint at(cplx lam, double mu = 1.0, double sigma = 0.0) {
  ResolventPoint p;
  p.lambda = lam;
  p.mu = mu;
  p.sigma = sigma;
  return p;
}

cplx random_lambda(CounterRng& rng) {
  return std::polar(std::exp(rng.uniform(0.0, std::log(1e3))), rng.uniform(-0.75, 0.75) * kPi);
}

}  // namespace

TEST_CASE("Lopatinski closed form against a dense 2x2 solve") {
  CHECK(std::abs(solve_lopatinski(1.0, 2.0, 1.0, 0.0, 0.0).omega) == 0.0);
  CounterRng rng(21);
  for (int k = 0; k < 500; ++k) {
    const double A = rng.uniform(0.01, 10), mu = rng.uniform(0.5, 2);
    const cplx B = compute_B(at(random_lambda(rng), mu), TangentialFrequency({A}));
    const cplx rt = rng.cnormal(), rn = rng.cnormal();
    const auto s = solve_lopatinski(A, B, mu, rt, rn);
    Eigen::Matrix2cd L;
    L << 2 * A * A, A * A + B * B, A * A + B * B, 2 * A * B;
    Eigen::Vector2cd rhs(rt / mu, A * rn / mu);
    const Eigen::Vector2cd ab = L.fullPivLu().solve(rhs);
    CHECK(std::abs(ab[0] - s.alpha_N) <= 1e-11 * (std::abs(ab[0]) + std::abs(ab[1])));
    CHECK(std::abs(ab[1] - s.beta_N) <= 1e-11 * (std::abs(ab[0]) + std::abs(ab[1])));
    const cplx r1 = 2 * A * A * s.alpha_N + (A * A + B * B) * s.beta_N - rt / mu;
    CHECK(std::abs(r1) <= 1e-12 * (std::abs(rt / mu) + std::abs(2 * A * A * s.alpha_N) + std::abs((A * A + B * B) * s.beta_N)));
    CHECK(std::abs(s.omega - mu * (B * B - A * A) * s.alpha_N / A) <= 1e-10 * (std::abs(s.omega) + 1e-300));
  }
  CHECK_THROWS_AS(solve_lopatinski(1.0, 1.0, 1.0, 1.0, 1.0), SingularError);
}

TEST_CASE("Neumann model: zero data gives the zero profile") {
  const auto p = solve_neumann_model(at(cplx(1, 1)), TangentialFrequency({1.0, 0.0}), {0.0, 0.0, 0.0});
  for (auto c : p.coef_expA) CHECK(c == cplx(0.0));
  for (auto c : p.coef_expB) CHECK(c == cplx(0.0));
  for (auto c : p.coef_M) CHECK(c == cplx(0.0));
}

TEST_CASE("Neumann model residuals") {
  CounterRng rng(7);
  const auto pt = at(cplx(1, 1));
  const TangentialFrequency f({1.0, 0.0});
  std::vector<cplx> h{rng.cnormal(), rng.cnormal(), rng.cnormal()};
  const auto prof = solve_neumann_model(pt, f, h);
  std::vector<cplx> g{-h[0], -h[1], -h[2]};
  const auto r = neumann_residuals(prof, g, profile_sample_points(prof));
  CHECK(r.momentum <= 1e-9);
  CHECK(r.divergence <= 1e-9);
  CHECK(r.boundary_tangential <= 1e-10);
  CHECK(r.boundary_normal <= 1e-10);
  CHECK(divergence_coefficient_defect(prof) <= 1e-13);

  for (int k = 0; k < 200; ++k) {
    const double mu = rng.uniform(0.5, 2);
    const auto q = at(random_lambda(rng), mu);
    const TangentialFrequency fk({rng.normal() * 3, rng.normal() * 3});
    std::vector<cplx> hk{rng.cnormal(), rng.cnormal(), rng.cnormal()};
    const auto pk = solve_neumann_model(q, fk, hk);
    const auto rk = neumann_residuals(pk, {-hk[0], -hk[1], -hk[2]}, profile_sample_points(pk));
    REQUIRE(rk.max_interior() <= 1e-9);
    REQUIRE(rk.max_boundary() <= 1e-10);
  }
}

TEST_CASE("Neumann model at A = 0") {
  const auto prof = solve_neumann_model(at(cplx(2, 1)), TangentialFrequency({0.0, 0.0}), {1.0, cplx(0, 1), 2.0});
  const auto r = neumann_residuals(prof, {-1.0, cplx(0, -1), -2.0}, profile_sample_points(prof));
  CHECK(r.max_all() <= 1e-10);
  for (auto c : prof.coef_expA) CHECK(std::isfinite(std::abs(c)));
}

TEST_CASE("Neumann profile is linear in the data") {
  CounterRng rng(8);
  const auto pt = at(cplx(3, -2), 1.2);
  const TangentialFrequency f({0.8, -0.3});
  std::vector<cplx> h1{rng.cnormal(), rng.cnormal(), rng.cnormal()}, h2{rng.cnormal(), rng.cnormal(), rng.cnormal()};
  const cplx a = rng.cnormal(), b = rng.cnormal();
  std::vector<cplx> h(3);
  for (int j = 0; j < 3; ++j) h[j] = a * h1[j] + b * h2[j];
  const auto lhs = solve_neumann_model(pt, f, h);
  const auto rhs = a * solve_neumann_model(pt, f, h1) + b * solve_neumann_model(pt, f, h2);
  for (std::size_t k = 0; k < lhs.coef_expA.size(); ++k)
    CHECK(std::abs(lhs.coef_expA[k] - rhs.coef_expA[k]) <= 1e-12 * (1 + std::abs(lhs.coef_expA[k])));
  for (std::size_t k = 0; k < lhs.coef_expB.size(); ++k) {
    CHECK(std::abs(lhs.coef_expB[k] - rhs.coef_expB[k]) <= 1e-12 * (1 + std::abs(lhs.coef_expB[k])));
    CHECK(std::abs(lhs.coef_M[k] - rhs.coef_M[k]) <= 1e-12 * (1 + std::abs(lhs.coef_M[k])));
  }
}

TEST_CASE("Neumann coefficients vary continuously along a sector arc") {
  const TangentialFrequency f({1.0, 0.5});
  auto step = [&](int n) {
    double worst = 0;
    std::vector<cplx> prev;
    for (int k = 0; k <= n; ++k) {
      const double a = -0.74 * kPi + 1.48 * kPi * k / n;
      const auto prof = solve_neumann_model(at(std::polar(4.0, a)), f, {1.0, 0.0, 1.0});
      std::vector<cplx> cur(prof.coef_expB.begin(), prof.coef_expB.end());
      cur.push_back(prof.coef_expA.back());
      if (!prev.empty())
        for (std::size_t j = 0; j < cur.size(); ++j) worst = std::max(worst, std::abs(cur[j] - prev[j]));
      prev = cur;
    }
    return worst;
  };
  const double s1 = step(100), s2 = step(200);
  CHECK(s2 < 0.6 * s1);
}

TEST_CASE("surface tension model") {
  const auto z = solve_surface_tension_model(at(5.0, 1.0, 1.0), TangentialFrequency({1.0, 1.0}), 0.0);
  CHECK(*z.h_hat == cplx(0.0));
  for (auto c : z.coef_expB) CHECK(c == cplx(0.0));

  auto pt = at(5.0, 1.0, 1.0);
  const TangentialFrequency f({1.0, 1.0});
  const auto prof = solve_surface_tension_model(pt, f, 1.0);
  const auto r = tension_residuals(prof, 1.0, profile_sample_points(prof));
  CHECK(r.max_all() <= 1e-9);
  const cplx B = compute_B(pt, f);
  const cplx expected = pt.mu * compute_D(f.A, B) / compute_E_kappa(pt, f);
  CHECK(std::abs(*prof.h_hat - expected) <= 1e-14 * std::abs(expected));
  // eliminate h from the normal velocity trace
  const cplx wN = prof.eval(0.0).v[2];
  CHECK(std::abs(pt.lambda * *prof.h_hat + wN - 1.0) <= 1e-12);

  CounterRng rng(9);
  for (int k = 0; k < 200; ++k) {
    auto q = at(random_lambda(rng), rng.uniform(0.5, 2), rng.uniform(0, 2));
    q.a_kappa = {rng.normal(), rng.normal()};
    const TangentialFrequency fk({rng.normal() * 2, rng.normal() * 2});
    const cplx d = rng.cnormal();
    const auto pk = solve_surface_tension_model(q, fk, d);
    REQUIRE(tension_residuals(pk, d, profile_sample_points(pk)).max_all() <= 1e-9);
  }
}

TEST_CASE("surface tension model tends to the drift-free case") {
  auto p = at(cplx(2, 3), 1.0, 1.0);
  const TangentialFrequency f({0.7, 0.2});
  const cplx h0 = *solve_surface_tension_model(p, f, 1.0).h_hat;
  double prev = 1e300;
  for (double s : {1e-1, 1e-2, 1e-3, 1e-4}) {
    p.a_kappa = {s, -s};
    const double d = std::abs(*solve_surface_tension_model(p, f, 1.0).h_hat - h0);
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev < 1e-4);
}

TEST_CASE("auxiliary pressure") {
  const auto pt = at(1.0);
  const auto g = solve_pressure_auxiliary(pt, TangentialFrequency({0.0, 0.0}), 2.0);
  CHECK(std::abs(g.eval(0.0) - 2.0) < 1e-15);
  CHECK(std::abs(g.eval(1.5) - 2.0 * std::exp(-1.5)) < 1e-15);
  const auto q = at(cplx(3, 4));
  const TangentialFrequency f({1.0, 2.0});
  const auto h = solve_pressure_auxiliary(q, f, cplx(1, -1));
  for (double x : {0.0, 0.3, 2.0}) {
    const cplx res = (q.lambda + f.A * f.A) * h.eval(x) - h.d2(x);
    CHECK(std::abs(res) <= 1e-12 * std::abs(h.d2(x)) + 1e-300);
  }
  CHECK(std::abs(solve_pressure_auxiliary(q, f, 0.0).eval(1.0)) == 0.0);
}
