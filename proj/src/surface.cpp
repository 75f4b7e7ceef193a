#include "fbstokes/surface.hpp"

#include <cmath>

namespace fbs {

namespace {

struct RankError : Error {
  explicit RankError(const std::string& m) : Error("rank-deficiency", m) {}
};

J2 param(const Vec& theta, int k) {
  return k < theta.size() ? J2::variable(theta[k], k) : J2(0.0);
}

using VecFn = std::function<std::vector<J2>(const J2&, const J2&)>;

// jet-valued evaluation, derivatives either analytic or by central differences
std::vector<J2> eval_jets(const SurfacePatch& p, const VecFn& fn, const Vec& theta) {
  const int m = p.dim_param();
  if (theta.size() != m) throw DomainError("parameter point has wrong dimension");
  if (p.mode == DerivMode::analytic) return fn(param(theta, 0), param(theta, 1));

  auto values = [&](const Vec& t) {
    const auto r = fn(J2(t[0]), J2(m > 1 ? t[1] : 0.0));
    std::vector<double> v(r.size());
    for (std::size_t k = 0; k < r.size(); ++k) v[k] = r[k].v;
    return v;
  };
  Vec h(m);
  for (int i = 0; i < m; ++i) {
    h[i] = p.fd_step * (p.hi[i] - p.lo[i]);
    if (!(h[i] > 1e-9)) throw Error("step-too-small", "finite-difference step below roundoff floor");
  }
  const auto f0 = values(theta);
  std::vector<J2> out(f0.size());
  for (std::size_t c = 0; c < f0.size(); ++c) out[c].v = f0[c];
  for (int i = 0; i < m; ++i) {
    Vec tp = theta, tm = theta;
    tp[i] += h[i];
    tm[i] -= h[i];
    const auto fp = values(tp), fm = values(tm);
    for (std::size_t c = 0; c < f0.size(); ++c) {
      out[c].g[i] = (fp[c] - fm[c]) / (2 * h[i]);
      out[c].h[i][i] = (fp[c] - 2 * f0[c] + fm[c]) / (h[i] * h[i]);
    }
    for (int j = i + 1; j < m; ++j) {
      Vec a = theta, b = theta, cc = theta, d = theta;
      a[i] += h[i], a[j] += h[j];
      b[i] += h[i], b[j] -= h[j];
      cc[i] -= h[i], cc[j] += h[j];
      d[i] -= h[i], d[j] -= h[j];
      const auto fa = values(a), fb = values(b), fc = values(cc), fd = values(d);
      for (std::size_t c = 0; c < f0.size(); ++c) {
        out[c].h[i][j] = (fa[c] - fb[c] - fc[c] + fd[c]) / (4 * h[i] * h[j]);
        out[c].h[j][i] = out[c].h[i][j];
      }
    }
  }
  return out;
}

}  // namespace

ChartDerivs chart_derivs(const SurfacePatch& p, const Vec& theta) {
  const int N = p.N, m = p.dim_param();
  const auto c = eval_jets(p, p.chart, theta);
  if (int(c.size()) != N) throw DomainError("chart returned wrong number of components");
  ChartDerivs d;
  d.x.resize(N);
  d.tau.resize(N, m);
  d.tau2.assign(m, std::vector<Vec>(m, Vec::Zero(N)));
  for (int k = 0; k < N; ++k) {
    d.x[k] = c[k].v;
    for (int i = 0; i < m; ++i) {
      d.tau(k, i) = c[k].g[i];
      for (int j = 0; j < m; ++j) d.tau2[i][j][k] = c[k].h[i][j];
    }
  }
  return d;
}

ScalarDerivs scalar_derivs(const SurfacePatch& p, const ChartScalarFn& f, const Vec& theta) {
  const int m = p.dim_param();
  const auto c = eval_jets(p, [&](const J2& a, const J2& b) { return std::vector<J2>{f(a, b)}; }, theta)[0];
  ScalarDerivs s;
  s.v = c.v;
  s.grad.resize(m);
  s.hess.resize(m, m);
  for (int i = 0; i < m; ++i) {
    s.grad[i] = c.g[i];
    for (int j = 0; j < m; ++j) s.hess(i, j) = c.h[i][j];
  }
  return s;
}

Vec cofactor_normal(const Mat& tau) {
  const int N = int(tau.rows());
  Vec h(N);
  Mat M(N, N);
  M.leftCols(N - 1) = tau;
  for (int i = 0; i < N; ++i) {
    M.col(N - 1) = Vec::Unit(N, i);
    h[i] = M.determinant();
  }
  const double nrm = h.norm();
  if (!(nrm > 1e-14 * std::pow(tau.norm(), N - 1))) throw RankError("tangent vectors are linearly dependent");
  return h / nrm;
}

Vec unit_normal(const SurfacePatch& p, const Vec& theta) { return cofactor_normal(chart_derivs(p, theta).tau); }

GeometryAtPoint compute_geometry(const SurfacePatch& p, const Vec& theta) {
  const int m = p.dim_param();
  const ChartDerivs d = chart_derivs(p, theta);
  GeometryAtPoint geo;
  geo.theta = theta;
  geo.x = d.x;
  geo.tau = d.tau;
  geo.tau2 = d.tau2;
  geo.G = d.tau.transpose() * d.tau;
  geo.g = geo.G.determinant();
  if (!(geo.g > 1e-24 * std::pow(geo.G.trace(), m))) throw RankError("degenerate first fundamental form");
  geo.Ginv = geo.G.inverse();
  geo.n = cofactor_normal(d.tau);
  geo.L.resize(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) geo.L(i, j) = d.tau2[i][j].dot(geo.n);
  geo.dG.assign(m, Mat::Zero(m, m));
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) geo.dG[k](i, j) = d.tau2[i][k].dot(d.tau.col(j)) + d.tau.col(i).dot(d.tau2[j][k]);
  geo.christoffel.assign(m, Mat::Zero(m, m));
  for (int r = 0; r < m; ++r)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        double s = 0;
        for (int k = 0; k < m; ++k) s += geo.Ginv(r, k) * (geo.dG[i](j, k) + geo.dG[j](k, i) - geo.dG[k](i, j));
        geo.christoffel[r](i, j) = 0.5 * s;
      }
  geo.H = (geo.Ginv * geo.L).trace();
  geo.Hcal = geo.H / (p.N - 1);
  return geo;
}

FundamentalForms fundamental_forms(const SurfacePatch& p, const Vec& theta) {
  const auto geo = compute_geometry(p, theta);
  return {geo.G, geo.L, geo.Ginv, geo.g};
}

std::vector<Mat> christoffel(const SurfacePatch& p, const Vec& theta) { return compute_geometry(p, theta).christoffel; }

std::vector<Mat> christoffel_direct(const GeometryAtPoint& geo) {
  const int m = int(geo.G.rows());
  const Mat up = geo.tau * geo.Ginv;  // columns tau^k
  std::vector<Mat> out(m, Mat::Zero(m, m));
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) out[k](i, j) = geo.tau2[i][j].dot(up.col(k));
  return out;
}

LaplaceBeltramiValue laplace_beltrami(const GeometryAtPoint& geo, const ScalarDerivs& f) {
  const int m = int(geo.G.rows());
  const Mat& Gi = geo.Ginv;
  LaplaceBeltramiValue r;
  double second = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) second += Gi(i, j) * f.hess(i, j);
  double conn = 0;
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k)
      for (int j = 0; j < m; ++j) conn += Gi(i, k) * geo.christoffel[j](i, k) * f.grad[j];
  r.christoffel_form = second - conn;

  double first = 0;
  for (int i = 0; i < m; ++i) {
    const Mat dGi = -Gi * geo.dG[i] * Gi;
    const double dlog = 0.5 * (Gi * geo.dG[i]).trace();
    for (int j = 0; j < m; ++j) first += (dGi(i, j) + dlog * Gi(i, j)) * f.grad[j];
  }
  r.divergence_form = second + first;
  return r;
}

LaplaceBeltramiValue laplace_beltrami(const SurfacePatch& p, const ChartScalarFn& f, const Vec& theta) {
  return laplace_beltrami(compute_geometry(p, theta), scalar_derivs(p, f, theta));
}

ChartScalarFn restrict_ambient(const SurfacePatch& p, AmbientFn f) {
  return [chart = p.chart, f = std::move(f)](const J2& a, const J2& b) { return f(chart(a, b)); };
}

MeanCurvature mean_curvature(const SurfacePatch& p, const Vec& theta) {
  const int N = p.N, m = p.dim_param();
  const GeometryAtPoint geo = compute_geometry(p, theta);
  MeanCurvature mc;
  mc.n = geo.n;
  mc.H_forms = geo.H;
  mc.H_mean = geo.H / (N - 1);
  mc.laplace_x.resize(N);
  for (int k = 0; k < N; ++k) {
    ScalarDerivs s;
    s.v = geo.x[k];
    s.grad = geo.tau.row(k).transpose();
    s.hess.resize(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) s.hess(i, j) = geo.tau2[i][j][k];
    mc.laplace_x[k] = laplace_beltrami(geo, s).divergence_form;
  }
  mc.H_laplace = mc.laplace_x.dot(geo.n);

  // d_i (sqrt g g^{ij} tau_j) by central differences
  auto W = [&](const Vec& t, int i) {
    const GeometryAtPoint gt = compute_geometry(p, t);
    Vec w = Vec::Zero(N);
    for (int j = 0; j < m; ++j) w += std::sqrt(gt.g) * gt.Ginv(i, j) * gt.tau.col(j);
    return w;
  };
  Vec lhs = Vec::Zero(N);
  for (int i = 0; i < m; ++i) {
    const double h = 1e-4 * (p.hi[i] - p.lo[i]);
    Vec tp = theta, tm = theta;
    tp[i] += h;
    tm[i] -= h;
    lhs += (W(tp, i) - W(tm, i)) / (2 * h);
  }
  const Vec rhs = std::sqrt(geo.g) * geo.H * geo.n;
  mc.identity_residual = (lhs - rhs).norm() / std::max(rhs.norm(), std::sqrt(geo.g));
  return mc;
}

// ---- patches ----

SurfacePatch sphere_patch(double R, int N) {
  SurfacePatch p;
  p.N = N;
  p.name = "sphere";
  if (N == 3) {
    p.lo = Vec::Zero(2);
    p.hi = Vec(2);
    p.hi << kPi, 2 * kPi;
    p.chart = [R](const J2& t, const J2& ph) {
      return std::vector<J2>{R * sin(t) * cos(ph), R * sin(t) * sin(ph), R * cos(t)};
    };
  } else if (N == 2) {
    p.lo = Vec::Zero(1);
    p.hi = Vec::Constant(1, 2 * kPi);
    p.chart = [R](const J2& t, const J2&) { return std::vector<J2>{R * cos(t), -R * sin(t)}; };
  } else {
    throw DomainError("sphere_patch supports N = 2, 3");
  }
  return p;
}

SurfacePatch cylinder_patch(double R, double height) {
  SurfacePatch p;
  p.N = 3;
  p.name = "cylinder";
  p.lo = Vec(2);
  p.hi = Vec(2);
  p.lo << 0.0, -height / 2;
  p.hi << 2 * kPi, height / 2;
  p.chart = [R](const J2& t, const J2& z) { return std::vector<J2>{R * cos(t), R * sin(t), z}; };
  return p;
}

SurfacePatch graph_patch(int N, ChartScalarFn h, Vec lo, Vec hi) {
  SurfacePatch p;
  p.N = N;
  p.name = "graph";
  p.lo = std::move(lo);
  p.hi = std::move(hi);
  if (N == 3)
    p.chart = [h](const J2& a, const J2& b) { return std::vector<J2>{a, b, h(a, b)}; };
  else if (N == 2)
    p.chart = [h](const J2& a, const J2&) { return std::vector<J2>{a, h(a, J2(0.0))}; };
  else
    throw DomainError("graph_patch supports N = 2, 3");
  return p;
}

SurfacePatch plane_patch(int N) {
  auto p = graph_patch(N, [](const J2&, const J2&) { return J2(0.0); }, Vec::Constant(N - 1, -1.0),
                       Vec::Constant(N - 1, 1.0));
  p.name = "plane";
  return p;
}

SphericalGraph spherical_graph_from_series(double R, const HarmonicSeries& s) {
  return {[R, s](const J2& ph, const J2& t) { return R + s.eval(cos(ph) * sin(t), sin(ph) * sin(t), cos(t)); }};
}

SurfacePatch spherical_graph_patch(const SphericalGraph& graph) {
  SurfacePatch p;
  p.N = 3;
  p.name = "spherical_graph";
  p.lo = Vec::Zero(2);
  p.hi = Vec(2);
  p.hi << kPi, 2 * kPi;
  p.chart = [r = graph.r](const J2& t, const J2& ph) {
    const J2 rv = r(ph, t);
    return std::vector<J2>{rv * cos(ph) * sin(t), rv * sin(ph) * sin(t), rv * cos(t)};
  };
  return p;
}

double spherical_graph_mean_curvature(const SphericalGraph& graph, double phi, double theta) {
  const double s = std::sin(theta), c = std::cos(theta);
  if (std::abs(s) < 1e-6) throw Error("pole-proximity", "polar chart evaluated too close to a pole");
  const J2 rj = graph.r(J2::variable(phi, 0), J2::variable(theta, 1));
  const double r = rj.v, rp = rj.g[0], rt = rj.g[1];
  const double rpp = rj.h[0][0], rpt = rj.h[0][1], rtt = rj.h[1][1];
  const double W = std::sqrt(r * r + rt * rt + rp * rp / (s * s));
  const double Wp = (r * rp + rt * rpt + rp * rpp / (s * s)) / W;
  const double Wt = (r * rt + rt * rtt + rp * rpt / (s * s) - rp * rp * c / (s * s * s)) / W;
  const double dphi_term = rpp / (s * W) - rp * Wp / (s * W * W);
  const double dtheta_term = (c * rt + s * rtt) / W - s * rt * Wt / (W * W);
  return (dphi_term + dtheta_term) / (r * s) - 2.0 / W;
}

}  // namespace fbs
