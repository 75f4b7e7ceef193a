#include "fbstokes/nonlinear.hpp"

#include <cmath>

namespace fbs {

FlowState sphere_flow_state(VecFieldST u, ScalarFieldST rho_ext, double R, double mu, double sigma, double t) {
  FlowState s;
  s.N = 3;
  s.u = std::move(u);
  s.R = R;
  s.rho = rho_ext;
  s.psi = sphere_height_displacement(rho_ext, R, 0.9);
  s.mu = mu;
  s.sigma = sigma;
  s.t = t;
  return s;
}

namespace {

SqMat<double> to_sq(const Mat& m) {
  SqMat<double> r(int(m.rows()));
  for (int i = 0; i < r.n; ++i)
    for (int j = 0; j < r.n; ++j) r(i, j) = m(i, j);
  return r;
}

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), Eigen::Index(v.size())); }

}  // namespace

PointData<double> point_data(const FlowState& s, const Vec& y) {
  const int N = int(y.size());
  if (N != s.N) throw DomainError("point dimension does not match the flow state");
  const FieldSample us = sample_field(s.u, y, s.t);
  const FieldSample ps = sample_field(s.psi.psi, y, s.t);
  PointData<double> p;
  p.N = N;
  p.u.assign(us.v.data(), us.v.data() + N);
  p.dtu.assign(us.dt.data(), us.dt.data() + N);
  p.dtpsi.assign(ps.dt.data(), ps.dt.data() + N);
  p.du = to_sq(us.grad);
  for (int i = 0; i < N; ++i) p.d2u.push_back(to_sq(us.hess[i]));
  p.K = to_sq(displacement_gradient(ps));
  for (const Mat& m : displacement_gradient_derivs(ps)) p.dK.push_back(to_sq(m));
  p.mu = s.mu;
  p.density = s.density;
  p.variant = s.variant;
  if (s.variant == FVariant::partial_lagrange) {
    std::vector<double> yd(y.data(), y.data() + N);
    p.kappa = s.kappa.eval(yd);
  }
  return p;
}

InteriorTerms assemble_interior(const FlowState& s, const Vec& y) {
  const PointData<double> p = point_data(s, y);
  InteriorTerms r;
  Mat K(p.N, p.N);
  for (int i = 0; i < p.N; ++i)
    for (int j = 0; j < p.N; ++j) K(i, j) = p.K(i, j);
  r.transform = compute_V0_J(K);
  if (r.transform.k_norm > s.psi.delta_bound)
    throw Error("delta-violation", "|grad Psi| exceeds the configured delta");
  const KernelTerms<double> k = evaluate_kernel(p);
  r.f = to_vec(k.f);
  r.g = k.g;
  r.gvec = to_vec(k.gvec);
  r.gvec_printed = to_vec(k.gvec_printed);
  return r;
}

Vec assemble_f(const FlowState& s, const Vec& y) { return assemble_interior(s, y).f; }

DivergenceTerms assemble_g_gvec(const FlowState& s, const Vec& y) {
  const InteriorTerms t = assemble_interior(s, y);
  return {t.g, t.gvec};
}

FluxCheck flux_divergence_check(const FlowState& s, const Vec& y, double h) {
  FluxCheck c;
  c.g = assemble_interior(s, y).g;
  for (int k = 0; k < int(y.size()); ++k) {
    Vec yp = y, ym = y;
    yp[k] += h;
    ym[k] -= h;
    const InteriorTerms a = assemble_interior(s, yp), b = assemble_interior(s, ym);
    c.div_gvec += (a.gvec[k] - b.gvec[k]) / (2 * h);
    c.div_gvec_printed += (a.gvec_printed[k] - b.gvec_printed[k]) / (2 * h);
  }
  c.gap = std::abs(c.div_gvec - c.g);
  c.printed_gap = std::abs(c.div_gvec_printed - c.g);
  return c;
}

MomentumOracle momentum_oracle(const VecFieldST& v, const DisplacementField& psi, double mu, const Vec& y, double t) {
  const int N = int(y.size());
  FlowState s;
  s.N = N;
  s.psi = psi;
  s.t = t;
  s.mu = mu;
  s.u = [v, psi](const std::vector<J4>& yy, const J4& tt) {
    const std::vector<J4> d = psi.psi(yy, tt);
    std::vector<J4> x(yy.size());
    for (std::size_t k = 0; k < yy.size(); ++k) x[k] = yy[k] + d[k];
    return v(x, tt);
  };
  const FieldSample us = sample_field(s.u, y, t);
  const Vec f = assemble_f(s, y);
  MomentumOracle o;
  o.transformed = us.dt - f;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) o.transformed[i] -= mu * (us.hess[i](j, j) + us.hess[j](i, j));

  const Vec x = y + eval_field(psi.psi, y, t);
  const FieldSample vs = sample_field(v, x, t);
  Vec phys = vs.dt + vs.grad * vs.v;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) phys[i] -= mu * (vs.hess[i](j, j) + vs.hess[j](i, j));
  const TransformState ts = transform_state(psi, y, t);
  o.physical = (Mat::Identity(N, N) + ts.K) * phys;
  o.residual = (o.transformed - o.physical).cwiseAbs().maxCoeff() /
               std::max(1.0, o.physical.cwiseAbs().maxCoeff());
  return o;
}

// ---- sphere boundary terms ----

namespace {

void require_sphere(const FlowState& s, const GeometryAtPoint& geo) {
  if (s.N != 3 || !s.rho || geo.x.size() != 3)
    throw Error("unsupported-surface", "boundary terms are implemented for the reference sphere in R^3");
  if (std::abs(geo.x.norm() - s.R) > 1e-9 * s.R)
    throw Error("unsupported-surface", "boundary point is not on the reference sphere");
}

Mat sym_grad(const Mat& grad) { return grad + grad.transpose(); }

// (DD_D grad u)_ij = sum_k V0_jk d_k u_i + V0_ik d_k u_j
Mat dd_block(const Mat& V0, const Mat& grad) { return grad * V0.transpose() + V0 * grad.transpose(); }

J4 embed(const J2& a) {
  J4 e(a.v);
  for (int i = 0; i < 2; ++i) {
    e.g[i] = a.g[i];
    for (int k = 0; k < 2; ++k) e.h[i][k] = a.h[i][k];
  }
  return e;
}

J2 project(const J4& a) {
  J2 e(a.v);
  for (int i = 0; i < 2; ++i) {
    e.g[i] = a.g[i];
    for (int k = 0; k < 2; ++k) e.h[i][k] = a.h[i][k];
  }
  return e;
}

J2 rho_on_chart(const ScalarFieldST& rho, double R, double t, const J2& ph, const J2& th) {
  const J2 st = sin(th);
  const std::vector<J4> y{embed(R * cos(ph) * st), embed(R * sin(ph) * st), embed(R * cos(th))};
  return project(rho(y, J4(t)));
}

}  // namespace

BoundaryKinematics boundary_kinematics(const FlowState& s, const GeometryAtPoint& geo) {
  require_sphere(s, geo);
  BoundaryKinematics b;
  const Vec& y = geo.x;
  b.n = y / s.R;
  b.transform = transform_state(s.psi, y, s.t);
  b.nt = pushforward_normal(b.transform, b.n);
  b.delta = b.nt - b.n;
  const ScalarSample r = sample_scalar(s.rho, y, s.t);
  b.rho = r.v;
  b.dt_rho = r.dt;
  const int M = int(geo.tau.cols());
  Vec dp(M);
  for (int j = 0; j < M; ++j) dp[j] = r.grad.dot(geo.tau.col(j));
  b.grad_rho = geo.tau * (geo.Ginv * dp);
  b.Q = b.delta + b.grad_rho;
  b.u = sample_field(s.u, y, s.t);
  b.Du = sym_grad(b.u.grad);
  b.Dcal = dd_block(b.transform.V0, b.u.grad);
  return b;
}

Vec assemble_hprime(const FlowState& s, const GeometryAtPoint& geo) {
  const BoundaryKinematics b = boundary_kinematics(s, geo);
  const Vec& n = b.n;
  auto pi0 = [&](const Vec& a) -> Vec { return a - a.dot(n) * n; };
  // Pi_t a = Pi_0 a + <W, a> n + <n, a> W - <W, a> W with W = n - n_t
  const Vec W = -b.delta;
  const Vec d = s.mu * (b.Du + b.Dcal) * b.nt;
  const Vec rest = s.mu * b.Dcal * n - s.mu * (b.Du + b.Dcal) * W + n.dot(d) * W - W.dot(d) * W;
  return -pi0(rest);
}

Vec hprime_linear_part(const FlowState& s, const GeometryAtPoint& geo) {
  const BoundaryKinematics b = boundary_kinematics(s, geo);
  const Vec& n = b.n;
  auto pi0 = [&](const Vec& a) -> Vec { return a - a.dot(n) * n; };
  const Vec delta1 = -b.grad_rho;
  const Mat D1 = dd_block(-b.transform.K, b.u.grad);
  return -s.mu * (pi0(b.Du * delta1) + pi0(D1 * n) - (b.Du * n).dot(n) * delta1);
}

NormalStress assemble_hN(const FlowState& s, const GeometryAtPoint& geo) {
  const BoundaryKinematics b = boundary_kinematics(s, geo);
  NormalStress h;
  h.viscous = -s.mu * b.n.dot(b.Du * b.delta) - s.mu * b.n.dot(b.Dcal * (b.n + b.delta));
  const double theta = geo.theta[0];
  if (std::abs(std::sin(theta)) < 1e-6) throw Error("pole-proximity", "polar chart evaluated too close to a pole");
  const ScalarFieldST rho = s.rho;
  const double R = s.R, t = s.t;
  SphericalGraph graph{[rho, R, t](const J2& ph, const J2& th) { return R + rho_on_chart(rho, R, t, ph, th); }};
  h.H_t = mean_curvature(spherical_graph_patch(graph), geo.theta).H_forms;
  const ChartScalarFn on_sphere = [rho, R, t](const J2& th, const J2& ph) { return rho_on_chart(rho, R, t, ph, th); };
  const double lb = laplace_beltrami(sphere_patch(R, 3), on_sphere, geo.theta).christoffel_form;
  h.B_rho = lb + 2.0 / (R * R) * b.rho;
  h.curvature = s.sigma * (h.H_t + 2.0 / R - h.B_rho);
  return h;
}

double hN_viscous_linear_part(const FlowState& s, const GeometryAtPoint& geo) {
  const BoundaryKinematics b = boundary_kinematics(s, geo);
  const Mat D1 = dd_block(-b.transform.K, b.u.grad);
  return -s.mu * b.n.dot(b.Du * (-b.grad_rho)) - s.mu * b.n.dot(D1 * b.n);
}

KinematicTerms assemble_d(const FlowState& s, const GeometryAtPoint& geo, bool with_barycenter,
                          const BallQuadrature* q) {
  const BoundaryKinematics b = boundary_kinematics(s, geo);
  KinematicTerms k;
  const int N = s.N;
  k.xi_prime = s.xi_prime.size() == N ? s.xi_prime : Vec::Zero(N);
  k.mean_u = Vec::Zero(N);
  k.mean_uJ0 = Vec::Zero(N);
  if (with_barycenter) {
    if (!q || q->N != N || std::abs(q->R - s.R) > 1e-12 * s.R)
      throw Error("quadrature-underresolved", "ball quadrature missing or built for another ball");
    double vol = 0;
    for (double w : q->w) vol += w;
    if (q->y.size() < 64 || std::abs(vol - ball_volume(N, s.R)) > 1e-10 * vol)
      throw Error("quadrature-underresolved", "ball quadrature does not resolve |B_R|");
    for (std::size_t p = 0; p < q->y.size(); ++p) {
      const Vec u = eval_field(s.u, q->y[p], s.t);
      const double J0 = transform_state(s.psi, q->y[p], s.t).J0;
      k.mean_u += q->w[p] * u;
      k.mean_uJ0 += q->w[p] * J0 * u;
    }
    k.mean_u /= vol;
    k.mean_uJ0 /= vol;
    k.xi_prime = k.mean_u + k.mean_uJ0;
  }
  const Vec& u = b.u.v;
  const Vec& xi = k.xi_prime;
  k.d = u.dot(b.Q) - b.dt_rho * b.n.dot(b.Q) + xi.dot(b.grad_rho) - xi.dot(b.Q);
  k.d_ball = k.d - u.dot(b.grad_rho) - b.n.dot(k.mean_uJ0);
  const double lhs = b.dt_rho + xi.dot(b.n) - b.n.dot(u) + u.dot(b.grad_rho) - k.d;
  const double exact = (b.dt_rho * b.n + xi).dot(b.nt) - u.dot(b.nt);
  k.lhs_residual = std::abs(lhs - exact);
  return k;
}

}  // namespace fbs
