#include "fbstokes/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fbs {

namespace {

double spectral_norm(const Mat& K) {
  if (K.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(K);
  return svd.singularValues()[0];
}

}  // namespace

TransformState compute_V0_J(const Mat& K) {
  const int N = int(K.rows());
  TransformState s;
  s.N = N;
  s.K = K;
  const Mat I = Mat::Identity(N, N);
  const Mat A = I + K;
  s.J = A.determinant();
  s.J0 = s.J - 1.0;
  if (!(std::abs(s.J) > 1e-12)) throw Error("near-singular", "det(I + grad Psi) vanishes");
  s.V0 = A.partialPivLu().inverse() - I;
  s.inverse_defect = (A * (I + s.V0) - I).cwiseAbs().maxCoeff();
  s.k_norm = spectral_norm(K);
  if (s.k_norm <= 0.5) {
    Mat term = -K, sum = Mat::Zero(N, N);
    for (int k = 0; k < 200 && term.cwiseAbs().maxCoeff() > 1e-18; ++k) {
      sum += term;
      term = -term * K;
    }
    s.V0_series = sum;
    s.series_defect = (sum - s.V0).cwiseAbs().maxCoeff();
  }
  return s;
}

Mat displacement_gradient(const FieldSample& s) { return s.grad.transpose(); }

std::vector<Mat> displacement_gradient_derivs(const FieldSample& s) {
  const int N = int(s.v.size());
  std::vector<Mat> dK(N, Mat(N, N));
  for (int m = 0; m < N; ++m)
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) dK[m](i, j) = s.hess[j](m, i);
  return dK;
}

std::vector<Mat> dV0(const Mat& V0, const std::vector<Mat>& dK) {
  const Mat P = Mat::Identity(V0.rows(), V0.cols()) + V0;
  std::vector<Mat> out;
  out.reserve(dK.size());
  for (const Mat& d : dK) out.push_back(-P * d * P);
  return out;
}

TransformState transform_state(const DisplacementField& f, const Vec& y, double t) {
  return compute_V0_J(displacement_gradient(sample_field(f.psi, y, t)));
}

HanzawaPoint hanzawa_map(const DisplacementField& f, const Vec& xi_t, const Vec& y, double t) {
  const FieldSample s = sample_field(f.psi, y, t);
  HanzawaPoint h;
  h.k_norm = spectral_norm(displacement_gradient(s));
  if (h.k_norm > f.delta_bound) throw Error("delta-violation", "|grad Psi| exceeds the configured delta");
  h.x = y + s.v;
  if (xi_t.size() == y.size()) h.x += xi_t;
  return h;
}

InjectivityWitness injectivity_witness(const DisplacementField& f, const Vec& xi_t, const std::vector<Vec>& ys,
                                       double t) {
  InjectivityWitness w;
  std::vector<Vec> xs;
  xs.reserve(ys.size());
  for (const Vec& y : ys) {
    const HanzawaPoint h = hanzawa_map(f, xi_t, y, t);
    w.delta = std::max(w.delta, h.k_norm);
    xs.push_back(h.x);
  }
  w.min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < ys.size(); ++a)
    for (std::size_t b = a + 1; b < ys.size(); ++b) {
      const double dy = (ys[a] - ys[b]).norm();
      if (dy == 0.0) continue;
      w.min_ratio = std::min(w.min_ratio, (xs[a] - xs[b]).norm() / dy);
      ++w.pairs;
    }
  w.holds = w.pairs == 0 || w.min_ratio >= 1.0 - w.delta - 1e-14;
  return w;
}

ScalarFieldST solid_harmonic_extension(const HarmonicSeries& s, double R, std::function<J4(const J4&)> amplitude) {
  return [s, R, amplitude](const std::vector<J4>& y, const J4& t) {
    if (y.size() != 3) throw DomainError("solid harmonic extension needs N = 3");
    const J4 r = sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
    if (!(r.v > 0.0)) throw DomainError("solid harmonic extension evaluated at the origin");
    J4 out(0.0);
    for (const auto& term : s.terms)
      out += term.coef * pow(r / R, term.l) * real_sph_harm(term.l, term.m, y[0] / r, y[1] / r, y[2] / r);
    return amplitude ? amplitude(t) * out : out;
  };
}

DisplacementField sphere_height_displacement(ScalarFieldST rho_ext, double R, double delta) {
  DisplacementField f;
  f.N = 3;
  f.delta_bound = delta;
  f.name = "sphere_height";
  f.psi = [rho_ext, R](const std::vector<J4>& y, const J4& t) {
    const J4 rho = rho_ext(y, t);
    std::vector<J4> out;
    for (const J4& c : y) out.push_back(rho * c / R);
    return out;
  };
  return f;
}

// ---- partial Lagrange ----

namespace {

// trapezoid weights on the snapshots up to t, the last (partial) node is t itself
std::vector<std::pair<double, double>> trapezoid_nodes(const std::vector<double>& times, double t) {
  if (times.empty() || times.front() != 0.0) throw DomainError("snapshot times must start at 0");
  std::vector<double> nodes;
  for (double s : times) {
    if (s < t) nodes.push_back(s);
  }
  nodes.push_back(t);
  std::vector<std::pair<double, double>> out;
  if (t == 0.0) return out;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    double w = 0;
    if (k > 0) w += 0.5 * (nodes[k] - nodes[k - 1]);
    if (k + 1 < nodes.size()) w += 0.5 * (nodes[k + 1] - nodes[k]);
    out.emplace_back(nodes[k], w);
  }
  return out;
}

double h1inf_norm(const VecFieldST& u, const Cutoff& kappa, const Vec& y, double s) {
  std::vector<J4> yj = seed_point(y);
  const J4 k = kappa.eval(yj);
  const std::vector<J4> uv = u(yj, J4(s));
  double val = 0, grad = 0;
  for (const J4& c : uv) {
    const J4 ku = k * c;
    val = std::max(val, std::abs(ku.v));
    for (int m = 0; m < int(y.size()); ++m) grad = std::max(grad, std::abs(ku.g[m]));
  }
  return val + grad;
}

}  // namespace

PartialLagrangeResult partial_lagrange_map(const VelocityHistory& h, const Cutoff& kappa, const Vec& y, double t,
                                           double delta, const std::vector<Vec>& check_points) {
  PartialLagrangeResult r;
  const auto nodes = trapezoid_nodes(h.times, t);
  std::vector<Vec> checks = check_points;
  checks.push_back(y);
  for (const auto& [s, w] : nodes) {
    double m = 0;
    for (const Vec& c : checks) m = std::max(m, h1inf_norm(h.u, kappa, c, s));
    r.delta_measured += w * m;
  }
  if (r.delta_measured > delta) throw Error("delta-violation", "int_0^t |kappa u|_{H^1_inf} exceeds delta");
  std::vector<double> yd(y.data(), y.data() + y.size());
  const double k = kappa.eval(yd);
  r.x = y;
  if (k == 0.0) return r;
  Vec disp = Vec::Zero(y.size());
  for (const auto& [s, w] : nodes) disp += w * eval_field(h.u, y, s);
  r.x += k * disp;
  return r;
}

DisplacementField partial_lagrange_displacement(const VelocityHistory& h, const Cutoff& kappa, int N, double delta) {
  DisplacementField f;
  f.N = N;
  f.delta_bound = delta;
  f.name = "partial_lagrange";
  f.psi = [h, kappa, N](const std::vector<J4>& y, const J4& t) {
    std::vector<J4> out(N, J4(0.0));
    // prefix sum over full segments, then the partial segment carries the time jet
    double tk = 0;
    for (double s : h.times)
      if (s < t.v) tk = s;
    for (const auto& [s, w] : trapezoid_nodes(h.times, tk)) {
      const std::vector<J4> u = h.u(y, J4(s));
      for (int i = 0; i < N; ++i) out[i] += w * u[i];
    }
    if (t.v > tk) {
      const std::vector<J4> u0 = h.u(y, J4(tk));
      const std::vector<J4> u1 = h.u(y, t);
      const J4 half = 0.5 * (t - tk);
      for (int i = 0; i < N; ++i) out[i] += half * (u0[i] + u1[i]);
    }
    const J4 k = kappa.eval(y);
    for (auto& c : out) c = k * c;
    return out;
  };
  return f;
}

// ---- divergence identity ----

DivergenceForms transformed_divergence(const VecFieldST& u, const DisplacementField& f, const Vec& y, double t,
                                       double h, const DomainPredicate& inside) {
  const int N = int(y.size());
  DivergenceForms d;
  const FieldSample us = sample_field(u, y, t);
  const TransformState s = transform_state(f, y, t);
  d.form_a = us.grad.trace() + (s.V0.transpose() * us.grad).trace();

  auto fluxes = [&](const Vec& z, Vec& full, Vec& printed) {
    if (inside && !inside(z)) throw Error("stencil-out-of-domain", "finite-difference stencil leaves the domain");
    const TransformState sz = transform_state(f, z, t);
    const Vec uz = eval_field(u, z, t);
    full = sz.J * (Mat::Identity(N, N) + sz.V0).transpose() * uz;
    printed = uz + sz.J * sz.V0.transpose() * uz;
  };
  double div_full = 0, div_printed = 0;
  for (int k = 0; k < N; ++k) {
    Vec zp = y, zm = y;
    zp[k] += h;
    zm[k] -= h;
    Vec fp, pp, fm, pm;
    fluxes(zp, fp, pp);
    fluxes(zm, fm, pm);
    div_full += (fp[k] - fm[k]) / (2 * h);
    div_printed += (pp[k] - pm[k]) / (2 * h);
  }
  d.form_b = div_full / s.J;
  d.form_b_printed = div_printed / s.J;
  d.gap = std::abs(d.form_a - d.form_b);
  d.printed_defect = std::abs(d.form_b_printed - d.form_a);
  return d;
}

Vec pushforward_normal(const TransformState& s, const Vec& n) {
  const Vec m = (Mat::Identity(s.N, s.N) + s.V0) * n;
  const double len = m.norm();
  if (!(len > 1e-14)) throw Error("degenerate-normal", "transported normal vanishes");
  return m / len;
}

// ---- Reynolds transport ----

Flow dilation_flow(int N) {
  Flow f;
  f.N = N;
  f.name = "builtin:dilation";
  f.phi = [](const std::vector<J4>& y, const J4& t) {
    std::vector<J4> x;
    for (const J4& c : y) x.push_back((1.0 + t) * c);
    return x;
  };
  f.w = [](const std::vector<J4>& y, const J4&) { return y; };
  return f;
}

Flow linear_in_time_flow(int N, VecFieldST w, std::string name) {
  Flow f;
  f.N = N;
  f.name = std::move(name);
  f.w = w;
  f.phi = [w](const std::vector<J4>& y, const J4& t) {
    std::vector<J4> x = w(y, J4(0.0));
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = y[i] + t * x[i];
    return x;
  };
  return f;
}

namespace {

Mat flow_gradient(const Flow& flow, const Vec& y, double t, Mat* dF = nullptr) {
  const FieldSample s = sample_field(flow.phi, y, t);
  if (dF) {
    const int N = int(y.size());
    const std::vector<J4> r = flow.phi(seed_point(y), J4::variable(t, kTimeVar));
    dF->resize(N, N);
    for (int i = 0; i < N; ++i)
      for (int k = 0; k < N; ++k) (*dF)(i, k) = r[i].h[k][kTimeVar];
  }
  return s.grad;
}

}  // namespace

ReynoldsReport reynolds_transport_check(const Flow& flow, const Vec& y, double t, const std::vector<double>& dt_list) {
  ReynoldsReport rep;
  Mat dF;
  const Mat F = flow_gradient(flow, y, t, &dF);
  const TransformState s = compute_V0_J(F.transpose() - Mat::Identity(F.rows(), F.cols()));
  rep.J = s.J;
  const FieldSample w = sample_field(flow.w, y, t);
  const double div_x = (w.grad * (Mat::Identity(s.N, s.N) + s.V0).transpose()).trace();
  const double rhs = div_x * s.J;
  const double dJ = s.J * (F.partialPivLu().solve(dF)).trace();
  rep.analytic_residual = std::abs(dJ - rhs);
  for (double dt : dt_list) {
    if (!(dt > 0.0)) throw DomainError("dt must be positive");
    const double Jp = flow_gradient(flow, y, t + dt).determinant();
    const double Jm = flow_gradient(flow, y, t - dt).determinant();
    rep.records.push_back({dt, std::abs((Jp - Jm) / (2 * dt) - rhs)});
  }
  std::vector<ReynoldsRecord> sorted = rep.records;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.dt > b.dt; });
  rep.min_order = std::numeric_limits<double>::infinity();
  const double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
    const auto& a = sorted[k];
    const auto& b = sorted[k + 1];
    const double floor_b = 1e3 * eps * std::max(1.0, std::abs(s.J)) / b.dt;
    if (b.fd_error <= floor_b || a.fd_error <= 0.0 || a.dt == b.dt) continue;
    rep.min_order = std::min(rep.min_order, std::log(a.fd_error / b.fd_error) / std::log(a.dt / b.dt));
    ++rep.orders_measured;
  }
  return rep;
}

// ---- area derivative ----

AreaDerivative area_derivative_check(int N, double R0, double speed, double t, int n_theta, int n_phi, double dt) {
  AreaDerivative a;
  const double R = R0 + speed * t;
  if (!(R > 0.0)) throw DomainError("sphere radius must stay positive");
  const ChartQuadrature q = N == 3 ? polar_chart_quadrature(n_theta, n_phi) : circle_chart_quadrature(n_phi);
  auto area = [&](double r) { return surface_area(sphere_patch(r, N), q); };
  a.fd_rate = (area(R0 + speed * (t + dt)) - area(R0 + speed * (t - dt))) / (2 * dt);
  const SurfacePatch p = sphere_patch(R, N);
  for (std::size_t k = 0; k < q.theta.size(); ++k) {
    const GeometryAtPoint geo = compute_geometry(p, q.theta[k]);
    const double dA = q.w[k] * std::sqrt(geo.g);
    const Vec xdot = speed * geo.x / R;
    // d_j xdot = (speed / R) tau_j on the radial family
    double div = 0;
    for (int i = 0; i < N - 1; ++i)
      for (int j = 0; j < N - 1; ++j) div += geo.Ginv(i, j) * geo.tau.col(i).dot(geo.tau.col(j)) * speed / R;
    a.first_variation += dA * div;
    a.curvature_form -= dA * geo.H * geo.n.dot(xdot);
  }
  const double omega = sphere_area(N, 1.0);
  a.closed_form = (N - 1) * omega * std::pow(R, N - 2) * speed;
  const double sc = std::max(1.0, std::abs(a.closed_form));
  a.residual = std::max({std::abs(a.fd_rate - a.closed_form), std::abs(a.first_variation - a.closed_form),
                         std::abs(a.curvature_form - a.closed_form)}) / sc;
  return a;
}

}  // namespace fbs
