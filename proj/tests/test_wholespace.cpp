#include "doctest.h"

#include <cmath>

#include "fbstokes/rng.hpp"
#include "fbstokes/volevich.hpp"
#include "fbstokes/wholespace.hpp"

using namespace fbs;

namespace {

ResolventPoint at(cplx lam, double mu) {
  ResolventPoint p;
  p.lambda = lam;
  p.mu = mu;
  return p;
}

Vec random_xi(CounterRng& rng, int n) {
  Vec xi(n);
  for (int k = 0; k < n; ++k) xi[k] = rng.normal() * std::exp(rng.uniform(-2, 3));
  return xi;
}

// f_hat(xi) = a + (b . xi) c, a smooth random-looking field
FourierField random_field(std::uint64_t seed, int n) {
  CounterRng rng(seed);
  CVec a(n), c(n);
  Vec b(n);
  for (int k = 0; k < n; ++k) {
    a[k] = rng.cnormal();
    c[k] = rng.cnormal();
    b[k] = rng.normal();
  }
  return [=](const Vec& xi) -> CVec { return a + c * cplx(b.dot(xi)); };
}

}  // namespace

TEST_CASE("whole space residuals") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto sol = solve_wholespace(at(cplx(2, 3), 1.7), random_field(s, 3));
    CounterRng rng(100 + s);
    for (int k = 0; k < 1000; ++k) {
      const Vec xi = random_xi(rng, 3);
      REQUIRE(sol.momentum_residual(xi) <= 1e-10);
      REQUIRE(sol.divergence_residual(xi) <= 1e-10);
    }
  }
}

TEST_CASE("whole space special cases") {
  // solenoidal data: xi . f = 0
  FourierField sol_f = [](const Vec& xi) -> CVec {
    CVec f(3);
    f << xi[1], -xi[0], 0.0;
    return f;
  };
  const auto s = solve_wholespace(at(cplx(1, 1), 1.3), sol_f);
  const Vec xi(Vec::LinSpaced(3, 0.5, 1.5));
  const auto v = s.eval(xi);
  CHECK(std::abs(v.g_hat) < 1e-15);
  CHECK((v.u_hat - sol_f(xi) / (cplx(1, 1) + 1.3 * xi.squaredNorm())).norm() < 1e-15);

  // mu = 1: no correction term
  const auto f = random_field(4, 3);
  const auto s1 = solve_wholespace(at(cplx(2, -1), 1.0), f);
  CHECK((s1.eval(xi).u_hat - f(xi) / (cplx(2, -1) + xi.squaredNorm())).norm() < 1e-14);

  CHECK_THROWS_AS(s1.eval(Vec::Zero(3)), DomainError);
  CHECK_THROWS_AS(solve_wholespace(at(-2.0, 1.0), f), DomainError);
}

TEST_CASE("weak Laplace in the whole space") {
  CounterRng rng(2);
  // gradient field
  const cplx phi(0.3, -0.8);
  FourierField grad = [&](const Vec& xi) -> CVec { return kI * xi.cast<cplx>() * phi; };
  auto u = solve_weak_laplace_wholespace(grad);
  for (int k = 0; k < 20; ++k) CHECK(std::abs(u(random_xi(rng, 3)) - phi) < 1e-14);
  FourierField sol = [](const Vec& xi) -> CVec {
    CVec f(3);
    f << 0.0, xi[2], -xi[1];
    return f;
  };
  CHECK(std::abs(solve_weak_laplace_wholespace(sol)(Vec::LinSpaced(3, 1, 2))) < 1e-15);
  const auto f = random_field(9, 3);
  for (int k = 0; k < 1000; ++k) REQUIRE(weak_laplace_residual(f, random_xi(rng, 3)) <= 1e-12);
  CHECK_THROWS_AS(u(Vec::Zero(3)), DomainError);
}

TEST_CASE("weak Dirichlet: manufactured odd potential") {
  const double s = 0.5;
  auto phi = [&](const Vec& x) { return x[2] * std::exp(-x.squaredNorm() / (2 * s * s)); };
  WeakDirichletInput in;
  in.dim = 3;
  in.n = 96;
  in.smooth_extension = true;
  in.support_lo = Vec::Constant(3, -2.5);
  in.support_hi = Vec::Constant(3, 2.5);
  in.f = [&](const Vec& x) {
    const double e = std::exp(-x.squaredNorm() / (2 * s * s));
    Vec g(3);
    g[0] = -x[0] * x[2] / (s * s) * e;
    g[1] = -x[1] * x[2] / (s * s) * e;
    g[2] = (1 - x[2] * x[2] / (s * s)) * e;
    return g;
  };
  const auto r = solve_weak_dirichlet_halfspace(in);
  double err = 0;
  const std::size_t total = r.u.data.size();
  for (std::size_t t = 0; t < total; ++t) {
    std::vector<int> k(3);
    std::size_t q = t;
    for (int d = 2; d >= 0; --d) {
      k[d] = int(q % in.n);
      q /= in.n;
    }
    err = std::max(err, std::abs(r.u.data[r.u.index(k)] - phi(r.u.coord(k))));
  }
  CHECK(err < 1e-8);
  CHECK(r.boundary_max < 1e-12);
}

TEST_CASE("weak Dirichlet: zero data and boundary contact") {
  WeakDirichletInput in;
  in.dim = 2;
  in.n = 16;
  in.support_lo = Vec::Constant(2, 1.0);
  in.support_hi = Vec::Constant(2, 2.0);
  in.f = [](const Vec&) { return Vec::Zero(2).eval(); };
  const auto r = solve_weak_dirichlet_halfspace(in);
  for (double v : r.u.data) CHECK(v == 0.0);
  in.support_lo[1] = 0.0;
  CHECK_THROWS_AS(solve_weak_dirichlet_halfspace(in), Error);
}

TEST_CASE("weak Dirichlet: second order FD residual for a Gaussian bump") {
  const double s = 0.9;
  WeakDirichletInput in;
  in.dim = 2;
  in.support_lo = Vec(2);
  in.support_hi = Vec(2);
  in.support_lo << -5.0, 0.5;
  in.support_hi << 5.0, 10.5;
  in.f = [&](const Vec& x) {
    const double r2 = x[0] * x[0] + (x[1] - 5.5) * (x[1] - 5.5);
    Vec g(2);
    g << std::exp(-r2 / (s * s)), 0.5 * std::exp(-r2 / (s * s));
    return g;
  };
  std::vector<double> res;
  for (int n : {256, 512, 1024}) {
    in.n = n;
    const auto r = solve_weak_dirichlet_halfspace(in);
    res.push_back(r.laplacian_residual);
    CHECK(r.boundary_max < 1e-12);
  }
  const double o1 = std::log2(res[0] / res[1]), o2 = std::log2(res[1] / res[2]);
  CHECK(o1 > 1.9);
  CHECK(o2 > 1.9);
}

TEST_CASE("Volevich kernels") {
  ResolventPoint p;
  p.lambda = cplx(2, 1);
  const std::vector<TangentialFrequency> fs{TangentialFrequency({0.5, 0.5}), TangentialFrequency({2.0, -1.0})};
  const std::vector<double> xs{0.0, 0.3, 1.0, 2.5};
  auto m = [](const ResolventPoint&, const TangentialFrequency& f) { return cplx(1.0 + f.A, 0.5); };

  auto zero = [](std::size_t, double) { return cplx(0.0); };
  const auto r0 = apply_volevich_operator(VolevichKind::L4, p, m, fs, zero, xs);
  for (auto& row : r0.values)
    for (auto v : row) CHECK(v == cplx(0.0));

  auto expB = [&](std::size_t k, double y) { return std::exp(-compute_B(p, fs[k]) * y); };
  const auto r1 = apply_volevich_operator(VolevichKind::L1, p, m, fs, expB, xs);
  for (std::size_t k = 0; k < fs.size(); ++k) {
    const cplx B = compute_B(p, fs[k]);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const cplx ex = m(p, fs[k]) * std::sqrt(p.lambda) * std::exp(-B * xs[i]) / (2.0 * B);
      CHECK(std::abs(r1.values[k][i] - ex) <= 1e-12 * std::abs(ex));
    }
  }

  auto expA = [&](std::size_t k, double y) { return cplx(std::exp(-fs[k].A * y)); };
  const auto r3 = apply_volevich_operator(VolevichKind::L3, p, m, fs, expA, xs);
  for (std::size_t k = 0; k < fs.size(); ++k) {
    const double A = fs[k].A;
    const cplx B = compute_B(p, fs[k]);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double x = xs[i];
      const cplx ex = m(p, fs[k]) * A * A / (B - A) * (std::exp(-B * x) / (A + B) - std::exp(-A * x) / (2 * A));
      CHECK(std::abs(r3.values[k][i] - ex) <= 1e-12 * std::abs(ex));
    }
  }

  CHECK_THROWS_AS(apply_volevich_operator(VolevichKind::L1, p, m, {}, expB, xs), DomainError);
  CHECK(volevich_cutoff(0.0) == doctest::Approx(1.0));
  CHECK(volevich_cutoff(2.0) == 0.0);
  CHECK(volevich_kind_from_string("L6") == VolevichKind::L6);
}
