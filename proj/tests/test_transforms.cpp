#include <doctest.h>

#include <cmath>

#include "fbstokes/transforms.hpp"

using namespace fbs;

namespace {

Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

DisplacementField affine_displacement(const Mat& K, const Vec& c) {
  DisplacementField f;
  f.N = int(K.rows());
  f.delta_bound = 0.9;
  f.psi = [K, c](const std::vector<J4>& y, const J4& t) {
    std::vector<J4> out;
    for (int j = 0; j < K.rows(); ++j) {
      J4 s = c[j] * (1.0 + 0.0 * t);
      for (int i = 0; i < K.rows(); ++i) s += K(i, j) * y[i];
      out.push_back(s);
    }
    return out;
  };
  return f;
}

DisplacementField sine_displacement(int N, std::uint64_t seed, double amp) {
  CounterRng rng(seed, 7);
  DisplacementField f;
  f.N = N;
  f.delta_bound = 0.9;
  f.psi = sine_field(N, random_sine_modes(N, rng, 2, amp));
  return f;
}

}  // namespace

TEST_CASE("V0 and J: trivial, diagonal and Neumann cross-check") {
  const TransformState z = compute_V0_J(Mat::Zero(3, 3));
  CHECK(z.V0.cwiseAbs().maxCoeff() == 0.0);
  CHECK(z.J == 1.0);

  const double a = 0.2;
  const TransformState d = compute_V0_J(a * Mat::Identity(3, 3));
  for (int i = 0; i < 3; ++i) CHECK(std::abs(d.V0(i, i) + a / (1 + a)) < 1e-15);
  CHECK(std::abs(d.J - std::pow(1 + a, 3)) < 1e-14);

  CounterRng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Mat K(3, 3);
    for (int i = 0; i < 9; ++i) K.data()[i] = rng.normal();
    K *= 0.3 / K.jacobiSvd().singularValues()[0];
    const TransformState s = compute_V0_J(K);
    CHECK(s.inverse_defect <= 1e-12);
    REQUIRE(s.V0_series.size() == 9);
    CHECK(s.series_defect <= 1e-10);
    CHECK(std::abs(s.J0 - (s.J - 1.0)) == 0.0);
  }
  CHECK_THROWS_AS(compute_V0_J(-Mat::Identity(3, 3)), Error);
}

TEST_CASE("Hanzawa map: identity, translation, radial injectivity, delta violation") {
  DisplacementField zero;
  zero.psi = zero_field(3);
  const Vec y = vec3(0.3, -0.2, 0.5);
  CHECK((hanzawa_map(zero, Vec(), y, 0.0).x - y).norm() == 0.0);

  const Vec xi = vec3(1.0, 2.0, -0.5);
  std::vector<Vec> ys;
  CounterRng rng(5);
  for (int k = 0; k < 40; ++k) ys.push_back(vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)));
  const InjectivityWitness tr = injectivity_witness(zero, xi, ys, 0.0);
  CHECK(std::abs(tr.min_ratio - 1.0) < 1e-14);

  const double eps = 0.1;
  DisplacementField radial;
  radial.delta_bound = 0.9;
  radial.psi = [eps](const std::vector<J4>& y, const J4&) {
    const J4 w = eps * exp(-(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]));
    return std::vector<J4>{w * y[0], w * y[1], w * y[2]};
  };
  const InjectivityWitness w = injectivity_witness(radial, Vec(), ys, 0.0);
  CHECK(w.holds);
  CHECK(w.delta > 0.0);
  CHECK(w.delta < 3 * eps);

  radial.delta_bound = 0.01;
  try {
    hanzawa_map(radial, Vec(), vec3(0.1, 0.1, 0.1), 0.0);
    FAIL("expected delta violation");
  } catch (const Error& e) {
    CHECK(e.kind == "delta-violation");
  }
}

TEST_CASE("partial Lagrange map") {
  const Cutoff kappa{1.0};
  VelocityHistory zero{zero_field(3), {0.0, 0.1, 0.2}};
  const Vec y = vec3(0.2, 0.1, -0.3);
  CHECK((partial_lagrange_map(zero, kappa, y, 0.2).x - y).norm() == 0.0);

  CounterRng rng(3);
  VelocityHistory steady{sine_field(3, random_sine_modes(3, rng, 2, 0.5, 1.5, false)), {0.0, 0.05, 0.1, 0.15}};
  const Vec far = vec3(1.5, 1.4, 0.3);
  CHECK((partial_lagrange_map(steady, kappa, far, 0.15).x - far).norm() == 0.0);

  const double t = 0.12;
  const Vec y2 = vec3(0.9, 0.9, 0.4);
  std::vector<double> yd(y2.data(), y2.data() + 3);
  const Vec expect = y2 + t * kappa.eval(yd) * eval_field(steady.u, y2, 0.0);
  CHECK((partial_lagrange_map(steady, kappa, y2, t).x - expect).norm() < 1e-14);

  const DisplacementField psi = partial_lagrange_displacement(steady, kappa, 3, 0.5);
  CHECK((eval_field(psi.psi, y2, t) - (expect - y2)).norm() < 1e-14);
  const FieldSample s = sample_field(psi.psi, y2, t);
  CHECK((s.dt - kappa.eval(yd) * eval_field(steady.u, y2, t)).norm() < 1e-14);

  CHECK_THROWS_AS(partial_lagrange_map(steady, kappa, y2, 0.15, 1e-3), Error);

  // cutoff is C^2 across |y| = R and |y| = 2R
  for (double r0 : {1.0, 2.0}) {
    auto at = [&](double r) {
      std::vector<J4> p{J4::variable(r, 0), J4(0.0), J4(0.0)};
      return kappa.eval(p);
    };
    const J4 lo = at(r0 - 1e-9), hi = at(r0 + 1e-9);
    CHECK(std::abs(lo.v - hi.v) < 1e-8);
    CHECK(std::abs(lo.g[0] - hi.g[0]) < 1e-7);
    CHECK(std::abs(lo.h[0][0] - hi.h[0][0]) < 1e-6);
  }
}

TEST_CASE("divergence identity: trivial, affine exact, smooth second order") {
  CounterRng rng(21);
  const VecFieldST u = sine_field(3, random_sine_modes(3, rng, 2, 1.0));
  const Vec y = vec3(0.3, 0.4, -0.2);
  DisplacementField zero;
  zero.psi = zero_field(3);
  const DivergenceForms z = transformed_divergence(u, zero, y, 0.1, 1e-4);
  CHECK(std::abs(z.form_a - sample_field(u, y, 0.1).grad.trace()) < 1e-14);
  CHECK(z.gap < 1e-7);

  Mat K(3, 3);
  K << 0.1, 0.05, -0.02, 0.03, -0.08, 0.04, 0.0, 0.06, 0.12;
  Mat G(3, 3);
  G << 1.0, 2.0, -1.0, 0.5, -0.3, 0.7, 0.2, 0.1, 0.4;
  const VecFieldST lin = [G](const std::vector<J4>& y, const J4&) {
    std::vector<J4> out(3, J4(0.0));
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) out[i] += G(i, k) * y[k];
    return out;
  };
  const DivergenceForms a = transformed_divergence(lin, affine_displacement(K, vec3(0.1, 0, 0)), y, 0.0, 1e-2);
  CHECK(a.gap <= 1e-12);

  const DisplacementField psi = sine_displacement(3, 4, 0.1);
  std::vector<double> gaps;
  for (double h : {1e-2, 5e-3, 2.5e-3}) gaps.push_back(transformed_divergence(u, psi, y, 0.1, h).gap);
  for (int k = 0; k + 1 < int(gaps.size()); ++k) CHECK(std::log(gaps[k] / gaps[k + 1]) / std::log(2.0) >= 1.9);
  CHECK(transformed_divergence(u, psi, y, 0.1, 1e-3).printed_defect > 1e-4);

  auto inside = [](const Vec& z) { return z.norm() < 0.55; };
  try {
    transformed_divergence(u, psi, y, 0.1, 0.1, inside);
    FAIL("expected stencil error");
  } catch (const Error& e) {
    CHECK(e.kind == "stencil-out-of-domain");
  }
}

TEST_CASE("pushforward normal") {
  const Vec n = vec3(0, 0, 1);
  CHECK((pushforward_normal(compute_V0_J(Mat::Zero(3, 3)), n) - n).norm() == 0.0);

  // shear x_3 = y_3 + s y_1 tilts the plane normal to (-s, 0, 1)/sqrt(1+s^2)
  const double s = 0.3;
  Mat K = Mat::Zero(3, 3);
  K(0, 2) = s;
  const Vec nt = pushforward_normal(compute_V0_J(K), n);
  CHECK(std::abs(nt.norm() - 1.0) < 1e-14);
  CHECK((nt - vec3(-s, 0, 1) / std::sqrt(1 + s * s)).norm() < 1e-14);

  // sphere height rho = eps h: n_t - (n - eps grad_Gamma h) = O(eps^2)
  const double R = 1.5;
  HarmonicSeries hs{{{2, 0, 1.0}, {3, 1, 0.5}}};
  const Vec yb = R * vec3(std::sin(0.7) * std::cos(0.4), std::sin(0.7) * std::sin(0.4), std::cos(0.7));
  const Vec nb = yb / R;
  const ScalarSample h = sample_scalar(solid_harmonic_extension(hs, R), yb, 0.0);
  const Vec grad_t = h.grad - h.grad.dot(nb) * nb;
  std::vector<double> errs, epss{1e-1, 1e-2, 1e-3, 1e-4};
  for (double eps : epss) {
    const DisplacementField f = sphere_height_displacement(
        solid_harmonic_extension(hs, R, [eps](const J4&) { return J4(eps); }), R);
    const Vec ntp = pushforward_normal(transform_state(f, yb, 0.0), nb);
    errs.push_back((ntp - (nb - eps * grad_t)).norm());
  }
  for (int k = 0; k + 1 < int(errs.size()); ++k) CHECK(std::log10(errs[k] / errs[k + 1]) >= 1.9);
}

TEST_CASE("Reynolds transport") {
  const Vec y = vec3(0.3, -0.4, 0.8);
  const Flow c = linear_in_time_flow(3, [](const std::vector<J4>&, const J4&) {
    return std::vector<J4>{J4(1.0), J4(-2.0), J4(0.5)};
  }, "const");
  const ReynoldsReport rc = reynolds_transport_check(c, y, 0.3, {1e-1, 1e-2});
  CHECK(std::abs(rc.J - 1.0) < 1e-15);
  for (const auto& r : rc.records) CHECK(r.fd_error < 1e-14);

  const double t = 0.4;
  const ReynoldsReport rd = reynolds_transport_check(dilation_flow(3), y, t, {1e-1, 5e-2, 2.5e-2});
  CHECK(std::abs(rd.J - std::pow(1 + t, 3)) < 1e-13);
  CHECK(rd.analytic_residual < 1e-13);
  for (const auto& r : rd.records) CHECK(std::abs(r.fd_error - r.dt * r.dt) < 1e-12);
  CHECK(rd.min_order >= 1.99);

  CounterRng rng(9);
  const Flow f = linear_in_time_flow(3, sine_field(3, random_sine_modes(3, rng, 2, 0.4, 1.5, false)), "sine");
  const ReynoldsReport rf = reynolds_transport_check(f, y, 0.2, {1e-1, 5e-2, 2.5e-2, 1.25e-2});
  CHECK(rf.analytic_residual < 1e-13);
  CHECK(rf.orders_measured >= 2);
  CHECK(rf.min_order >= 1.9);
}

TEST_CASE("area derivative of moving spheres") {
  const AreaDerivative s = area_derivative_check(3, 2.0, 0.0, 0.0);
  CHECK(std::abs(s.fd_rate) < 1e-8);
  CHECK(std::abs(s.curvature_form) < 1e-12);

  const AreaDerivative a = area_derivative_check(3, 2.0, 1.0, 0.0);
  CHECK(std::abs(a.closed_form - 16 * kPi) < 1e-12);
  CHECK(a.residual <= 1e-8);

  const AreaDerivative b = area_derivative_check(3, 2.0, -1.0, 0.0);
  CHECK(std::abs(b.curvature_form + 16 * kPi) < 1e-8);

  const AreaDerivative c = area_derivative_check(2, 1.5, 1.0, 0.25);
  CHECK(std::abs(c.closed_form - 2 * kPi) < 1e-12);
  CHECK(c.residual <= 1e-8);
}
