#include <doctest.h>

#include <cmath>

#include "fbstokes/nonlinear.hpp"
#include "fbstokes/poly_oracle.hpp"

using namespace fbs;

namespace {

Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

VecFieldST scaled(VecFieldST f, double s) {
  return [f, s](const std::vector<J4>& y, const J4& t) {
    std::vector<J4> r = f(y, t);
    for (auto& c : r) c = s * c;
    return r;
  };
}

DisplacementField sine_psi(int N, std::uint64_t seed, double amp) {
  CounterRng rng(seed, 3);
  DisplacementField d;
  d.N = N;
  d.delta_bound = 0.9;
  d.psi = sine_field(N, random_sine_modes(N, rng, 2, amp));
  return d;
}

FlowState interior_state(std::uint64_t seed, double psi_amp) {
  CounterRng rng(seed, 1);
  FlowState s;
  s.N = 3;
  s.u = sine_field(3, random_sine_modes(3, rng, 2, 1.0));
  s.psi = sine_psi(3, seed, psi_amp);
  s.mu = 0.7;
  s.t = 0.3;
  return s;
}

double slope(double e1, double e2, double r1, double r2) { return std::log(e1 / e2) / std::log(r1 / r2); }

}  // namespace

TEST_CASE("interior terms vanish without displacement") {
  FlowState s = interior_state(1, 0.0);
  s.psi.psi = zero_field(3);
  const Vec y = vec3(0.2, -0.1, 0.4);
  const FieldSample u = sample_field(s.u, y, s.t);
  const InteriorTerms t = assemble_interior(s, y);
  const Vec expect = -(u.grad * u.v);
  CHECK((t.f - expect).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(t.g == 0.0);
  CHECK(t.gvec.cwiseAbs().maxCoeff() == 0.0);

  s.variant = FVariant::partial_lagrange;
  s.kappa = Cutoff{2.0};
  CHECK(assemble_f(s, y).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("partial-Lagrange variant equals the Hanzawa form when d_t Psi = kappa u") {
  CounterRng rng(8, 1);
  const VecFieldST u = sine_field(3, random_sine_modes(3, rng, 2, 0.6, 1.5, false));
  const Cutoff kappa{0.5};
  FlowState s;
  s.u = u;
  s.t = 0.2;
  s.kappa = kappa;
  s.psi.delta_bound = 0.9;
  s.psi.psi = [u, kappa](const std::vector<J4>& y, const J4& t) {
    std::vector<J4> r = u(y, t);
    const J4 k = kappa.eval(y);
    for (auto& c : r) c = t * k * c;
    return r;
  };
  s.density = 1.3;
  for (const Vec& y : {vec3(0.6, 0.2, 0.1), vec3(0.1, 0.1, 0.1), vec3(0.7, 0.6, -0.2)}) {
    s.variant = FVariant::hanzawa;
    const Vec fh = assemble_f(s, y);
    s.variant = FVariant::partial_lagrange;
    const Vec fp = assemble_f(s, y);
    CHECK((fh - fp).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("symbolic oracle: exact equality on polynomial inputs") {
  for (int N : {2, 3})
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
      PolyCase c = random_poly_case(N, seed);
      if (seed % 3 == 0) {
        c.variant = FVariant::partial_lagrange;
        c.kappa = Rational(1, 3);
        c.density = Rational(5, 4);
      }
      const OracleTerms o = poly_oracle(c);
      const KernelTerms<Rational> k = evaluate_kernel(poly_point_data(c));
      REQUIRE(k.J > 0);
      for (int i = 0; i < N; ++i) {
        CHECK(o.f[i] == k.f[i]);
        CHECK(o.gvec[i] == k.gvec[i]);
      }
      CHECK(o.g == k.g);

      // floating-point assembler through jets on the same polynomials
      FlowState s;
      s.N = N;
      s.u = poly_field(c.u);
      s.psi.N = N;
      s.psi.delta_bound = 0.99;
      s.psi.psi = poly_field(c.psi);
      s.mu = c.mu.convert_to<double>();
      s.density = c.density.convert_to<double>();
      s.variant = c.variant;
      s.t = c.at[3].convert_to<double>();
      Vec y(N);
      for (int k2 = 0; k2 < N; ++k2) y[k2] = c.at[k2].convert_to<double>();
      if (c.variant == FVariant::partial_lagrange) continue;  // cutoff value is a free rational here
      const InteriorTerms t = assemble_interior(s, y);
      double scale = 1;
      for (int i = 0; i < N; ++i) scale = std::max(scale, std::abs(o.f[i].convert_to<double>()));
      for (int i = 0; i < N; ++i) {
        CHECK(std::abs(t.f[i] - o.f[i].convert_to<double>()) <= 1e-12 * scale);
        CHECK(std::abs(t.gvec[i] - o.gvec[i].convert_to<double>()) <= 1e-12);
      }
      CHECK(std::abs(t.g - o.g.convert_to<double>()) <= 1e-12);
    }
}

TEST_CASE("physical oracle: transformed momentum equals the pulled-back Eulerian operator") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    CounterRng rng(seed, 9);
    const VecFieldST v = sine_field(3, random_sine_modes(3, rng, 2, 1.0));
    const DisplacementField psi = sine_psi(3, seed + 100, 0.15);
    const Vec y = vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    const MomentumOracle o = momentum_oracle(v, psi, 0.8, y, 0.25);
    CHECK(o.residual <= 1e-12);
  }
  CounterRng rng(4, 2);
  DisplacementField psi2 = sine_psi(2, 77, 0.2);
  const MomentumOracle o2 = momentum_oracle(sine_field(2, random_sine_modes(2, rng, 2, 1.0)), psi2, 1.1,
                                            Vec::Constant(2, 0.3), 0.1);
  CHECK(o2.residual <= 1e-12);
}

TEST_CASE("div gvec = g at second order; printed flux misses J0 u") {
  const FlowState s = interior_state(5, 0.15);
  const Vec y = vec3(0.3, 0.1, -0.5);
  std::vector<double> gaps;
  const std::vector<double> hs{2e-2, 1e-2, 5e-3};
  for (double h : hs) gaps.push_back(flux_divergence_check(s, y, h).gap);
  for (int k = 0; k + 1 < int(hs.size()); ++k) CHECK(slope(gaps[k], gaps[k + 1], hs[k], hs[k + 1]) >= 1.9);
  CHECK(flux_divergence_check(s, y, 1e-3).printed_gap > 1e-3);
}

TEST_CASE("interior terms are quadratic in the perturbation amplitude") {
  const FlowState base = interior_state(6, 0.3);
  const Vec y = vec3(-0.2, 0.5, 0.3);
  std::vector<double> ef, eg;
  const std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4};
  for (double e : eps) {
    FlowState s = base;
    s.u = scaled(base.u, e);
    s.psi.psi = scaled(base.psi.psi, e);
    const InteriorTerms t = assemble_interior(s, y);
    ef.push_back(t.f.norm());
    eg.push_back(std::abs(t.g) + t.gvec.norm());
  }
  for (int k = 0; k + 1 < int(eps.size()); ++k) {
    CHECK(slope(ef[k], ef[k + 1], eps[k], eps[k + 1]) >= 1.9);
    CHECK(slope(eg[k], eg[k + 1], eps[k], eps[k + 1]) >= 1.9);
  }
}

TEST_CASE("sphere boundary terms") {
  const double R = 1.5;
  const GeometryAtPoint geo = compute_geometry(sphere_patch(R, 3), vec3(0.9, 0.4, 0).head(2));
  CounterRng rng(12, 4);
  const VecFieldST U = sine_field(3, random_sine_modes(3, rng, 2, 1.0));
  const HarmonicSeries hs{{{2, 0, 1.0}, {3, 2, 0.4}, {1, -1, 0.3}}};
  auto rho_eps = [&](double e) {
    return solid_harmonic_extension(hs, R, [e](const J4& t) { return e * (1.0 + 0.5 * t); });
  };

  SUBCASE("vanishing at rho = 0") {
    const FlowState s = sphere_flow_state(U, rho_eps(0.0), R, 0.9, 1.2, 0.2);
    CHECK(assemble_hprime(s, geo).norm() == 0.0);
    const NormalStress h = assemble_hN(s, geo);
    CHECK(std::abs(h.viscous) == 0.0);
    CHECK(std::abs(h.curvature) < 1e-12);
    CHECK(assemble_d(s, geo, false).d == 0.0);
    const FlowState z = sphere_flow_state(zero_field(3), rho_eps(0.0), R, 0.9, 1.2, 0.2);
    CHECK(std::abs(assemble_hN(z, geo).total()) < 1e-12);
  }

  SUBCASE("h' is tangential and linearizes at first order") {
    std::vector<double> err;
    const std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4};
    for (double e : eps) {
      const FlowState s = sphere_flow_state(U, rho_eps(e), R, 0.9, 1.2, 0.2);
      const Vec hp = assemble_hprime(s, geo);
      CHECK(std::abs(hp.dot(geo.x / R)) <= 1e-10);
      err.push_back((hp - hprime_linear_part(s, geo)).norm());
    }
    for (int k = 0; k + 1 < int(eps.size()); ++k) CHECK(slope(err[k], err[k + 1], eps[k], eps[k + 1]) >= 1.9);

    // exact stress balance: with the transported tangential condition satisfied, h' is the full correction
    const FlowState s = sphere_flow_state(U, rho_eps(0.05), R, 0.9, 1.2, 0.2);
    const BoundaryKinematics b = boundary_kinematics(s, geo);
    const Vec d = s.mu * (b.Du + b.Dcal) * b.nt;
    const Vec pit = d - d.dot(b.nt) * b.nt;
    const Vec lhs = s.mu * b.Du * b.n;
    const Vec tang = lhs - lhs.dot(b.n) * b.n;
    const Vec direct = tang - (pit - pit.dot(b.n) * b.n);
    CHECK((assemble_hprime(s, geo) - direct).norm() < 1e-13);
  }

  SUBCASE("hN: curvature remainder and viscous block are second order") {
    std::vector<double> ec, ev;
    const std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4};
    for (double e : eps) {
      const FlowState s = sphere_flow_state(U, rho_eps(e), R, 0.9, 1.2, 0.2);
      const NormalStress h = assemble_hN(s, geo);
      ec.push_back(std::abs(h.curvature));
      ev.push_back(std::abs(h.viscous - hN_viscous_linear_part(s, geo)));
    }
    for (int k = 0; k + 1 < int(eps.size()); ++k) {
      CHECK(slope(ec[k], ec[k + 1], eps[k], eps[k + 1]) >= 1.9);
      CHECK(slope(ev[k], ev[k + 1], eps[k], eps[k + 1]) >= 1.9);
    }
  }

  SUBCASE("kinematic term") {
    const auto steady = solid_harmonic_extension(hs, R, [](const J4&) { return J4(0.1); });
    const FlowState z = sphere_flow_state(zero_field(3), steady, R, 1.0, 1.0, 0.2);
    CHECK(assemble_d(z, geo, false).d == 0.0);
    // a moving height keeps -d_t rho <n, Q> even without velocity
    const FlowState zm = sphere_flow_state(zero_field(3), rho_eps(0.1), R, 1.0, 1.0, 0.2);
    const BoundaryKinematics bm = boundary_kinematics(zm, geo);
    CHECK(std::abs(assemble_d(zm, geo, false).d + bm.dt_rho * bm.n.dot(bm.Q)) < 1e-16);

    FlowState s = sphere_flow_state(U, rho_eps(0.08), R, 1.0, 1.0, 0.2);
    s.xi_prime = vec3(0.1, -0.2, 0.05);
    const KinematicTerms k = assemble_d(s, geo, false);
    CHECK(k.lhs_residual <= 1e-14);

    const BallQuadrature q = ball_quadrature(3, R, 12, 12, 24);
    const KinematicTerms kb = assemble_d(s, geo, true, &q);
    CHECK(kb.lhs_residual <= 1e-14);
    // d_t rho - n . P u = d~ with P u = u - mean(u)
    const BoundaryKinematics b = boundary_kinematics(s, geo);
    const double lhs = b.dt_rho - b.n.dot(b.u.v - kb.mean_u);
    const double exact_gap = (b.dt_rho * b.n + kb.xi_prime).dot(b.nt) - b.u.v.dot(b.nt);
    CHECK(std::abs(lhs - kb.d_ball - exact_gap) < 1e-13);

    const FlowState flat = sphere_flow_state(U, rho_eps(0.0), R, 1.0, 1.0, 0.2);
    const KinematicTerms kf = assemble_d(flat, geo, true, &q);
    CHECK(kf.d == 0.0);
    CHECK(kf.d_ball == 0.0);

    const BallQuadrature coarse = ball_quadrature(3, R, 2, 2, 2);
    try {
      assemble_d(s, geo, true, &coarse);
      FAIL("expected underresolved quadrature");
    } catch (const Error& e) {
      CHECK(e.kind == "quadrature-underresolved");
    }

    std::vector<double> ed;
    const std::vector<double> eps{1e-1, 1e-2, 1e-3};
    for (double e : eps) {
      const FlowState se = sphere_flow_state(scaled(U, e), rho_eps(e), R, 1.0, 1.0, 0.2);
      ed.push_back(std::abs(assemble_d(se, geo, false).d));
    }
    for (int k2 = 0; k2 + 1 < int(eps.size()); ++k2) CHECK(slope(ed[k2], ed[k2 + 1], eps[k2], eps[k2 + 1]) >= 1.9);
  }

  SUBCASE("unsupported reference surface") {
    FlowState s = interior_state(2, 0.1);
    try {
      assemble_hprime(s, geo);
      FAIL("expected unsupported surface");
    } catch (const Error& e) {
      CHECK(e.kind == "unsupported-surface");
    }
  }
}
