#include "fbstokes/sphere.hpp"

#include <cmath>
#include <limits>

#include "fbstokes/quadrature.hpp"

namespace fbs {

SphereQuadrature sphere_quadrature(int N, double R, int n_theta, int n_phi) {
  SphereQuadrature q;
  q.N = N;
  q.R = R;
  if (N == 2) {
    for (int k = 0; k < n_theta; ++k) {
      const double t = 2 * kPi * k / n_theta;
      Vec y(2);
      y << R * std::cos(t), -R * std::sin(t);
      q.y.push_back(y);
      q.chart.push_back(Vec::Constant(1, t));
      q.w.push_back(2 * kPi * R / n_theta);
    }
    return q;
  }
  if (N != 3) throw DomainError("sphere_quadrature supports N = 2, 3");
  if (n_phi <= 0) n_phi = 2 * n_theta;
  const QuadRule gl = gauss_legendre(n_theta, -1.0, 1.0);
  for (std::size_t a = 0; a < gl.size(); ++a) {
    const double z = gl.x[a], t = std::acos(z), s = std::sqrt(1 - z * z);
    for (int b = 0; b < n_phi; ++b) {
      const double ph = 2 * kPi * b / n_phi;
      Vec y(3);
      y << R * s * std::cos(ph), R * s * std::sin(ph), R * z;
      Vec c(2);
      c << t, ph;
      q.y.push_back(y);
      q.chart.push_back(c);
      q.w.push_back(gl.w[a] * 2 * kPi / n_phi * R * R);
    }
  }
  return q;
}

ChartQuadrature polar_chart_quadrature(int n_theta, int n_phi) {
  ChartQuadrature q;
  const QuadRule gl = gauss_legendre(n_theta, 0.0, kPi);
  for (std::size_t a = 0; a < gl.size(); ++a)
    for (int b = 0; b < n_phi; ++b) {
      Vec c(2);
      c << gl.x[a], 2 * kPi * b / n_phi;
      q.theta.push_back(c);
      q.w.push_back(gl.w[a] * 2 * kPi / n_phi);
    }
  return q;
}

ChartQuadrature circle_chart_quadrature(int n) {
  ChartQuadrature q;
  for (int k = 0; k < n; ++k) {
    q.theta.push_back(Vec::Constant(1, 2 * kPi * k / n));
    q.w.push_back(2 * kPi / n);
  }
  return q;
}

BallQuadrature ball_quadrature(int N, double R, int n_r, int n_theta, int n_phi) {
  BallQuadrature b;
  b.N = N;
  b.R = R;
  const QuadRule rr = gauss_legendre(n_r, 0.0, R);
  const SphereQuadrature s = sphere_quadrature(N, 1.0, n_theta, n_phi);
  for (std::size_t i = 0; i < rr.size(); ++i)
    for (std::size_t k = 0; k < s.y.size(); ++k) {
      b.y.push_back(rr.x[i] * s.y[k]);
      b.w.push_back(rr.w[i] * std::pow(rr.x[i], N - 1) * s.w[k]);
    }
  return b;
}

double sphere_area(int N, double R) { return N == 2 ? 2 * kPi * R : 4 * kPi * R * R; }
double ball_volume(int N, double R) { return sphere_area(N, R) * R / N; }

double sphere_laplacian_eigenvalue(int l, int N, double R) { return -double(l) * (l + N - 2) / (R * R); }
double operator_B_eigenvalue(int l, int N, double R) {
  return sphere_laplacian_eigenvalue(l, N, R) + (N - 1) / (R * R);
}

double SphericalExpansion::eval(const Vec& y) const {
  const Vec w = y / y.norm();
  double s = 0;
  for (const auto& [lm, c] : coef) s += c * real_sph_harm(lm.first, lm.second, w[0], w[1], w[2]);
  return s;
}

double SphericalExpansion::norm2() const {
  double s = 0;
  for (const auto& [lm, c] : coef) s += c * c;
  return s * R * R;
}

SphericalExpansion sphere_operator_B(const SphericalExpansion& h) {
  if (h.lmax < 2) throw DomainError("expansion needs lmax >= 2");
  SphericalExpansion out = h;
  for (auto& [lm, c] : out.coef) {
    if (lm.first > h.lmax) throw DomainError("coefficient beyond lmax");
    c *= operator_B_eigenvalue(lm.first, 3, h.R);
  }
  return out;
}

SpectralGap spectral_gap(double R, int lmax, int N) {
  SpectralGap g;
  g.c = std::numeric_limits<double>::infinity();
  for (int l = 2; l <= lmax; ++l) {
    const double v = -operator_B_eigenvalue(l, N, R);
    if (v < g.c) {
      g.c = v;
      g.argmin_l = l;
    }
  }
  return g;
}

double rayleigh_quotient_B(const SphericalExpansion& h, int n_theta, int n_phi) {
  const SurfacePatch p = sphere_patch(h.R, 3);
  const double R = h.R;
  HarmonicSeries series;
  for (const auto& [lm, c] : h.coef) series.terms.push_back({lm.first, lm.second, c});
  const ChartScalarFn f = [series](const J2& t, const J2& ph) {
    return series.eval(sin(t) * cos(ph), sin(t) * sin(ph), cos(t));
  };
  const SphereQuadrature q = sphere_quadrature(3, R, n_theta, n_phi);
  double num = 0, den = 0;
  for (std::size_t k = 0; k < q.y.size(); ++k) {
    const ScalarDerivs s = scalar_derivs(p, f, q.chart[k]);
    const double Bh = laplace_beltrami(compute_geometry(p, q.chart[k]), s).divergence_form + 2.0 / (R * R) * s.v;
    num += q.w[k] * Bh * s.v;
    den += q.w[k] * s.v * s.v;
  }
  return -num / den;
}

RigidBasis rigid_basis(double R, int N, const BallQuadrature& q) {
  if (N < 2 || N > 3) throw DomainError("rigid_basis supports N = 2, 3");
  RigidBasis b;
  b.N = N;
  b.R = R;
  const double vol = ball_volume(N, R);
  b.c0 = 1.0 / std::sqrt(vol);
  b.c1 = std::sqrt((N + 2) / (2 * R * R * vol));
  for (int i = 0; i < N; ++i) {
    b.fields.push_back([c = b.c0, i, N](const Vec&) { return Vec(c * Vec::Unit(N, i)); });
    b.labels.push_back("e" + std::to_string(i + 1));
  }
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) {
      b.fields.push_back([c = b.c1, i, j, N](const Vec& y) {
        Vec v = Vec::Zero(N);
        v[j] = c * y[i];
        v[i] = -c * y[j];
        return v;
      });
      b.labels.push_back("x" + std::to_string(i + 1) + "e" + std::to_string(j + 1) + "-x" + std::to_string(j + 1) +
                         "e" + std::to_string(i + 1));
    }
  const int M = b.count();
  b.gram = Mat::Zero(M, M);
  for (std::size_t k = 0; k < q.y.size(); ++k) {
    std::vector<Vec> v(M);
    for (int a = 0; a < M; ++a) v[a] = b.fields[a](q.y[k]);
    for (int a = 0; a < M; ++a)
      for (int c = 0; c < M; ++c) b.gram(a, c) += q.w[k] * v[a].dot(v[c]);
  }
  return b;
}

CompatibilityResidual compatibility_residual(const std::function<double(const Vec&)>& rho0, double R,
                                             const SphereQuadrature& q) {
  const int N = q.N;
  auto binom = [](int n, int k) {
    double c = 1;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
  };
  CompatibilityResidual r;
  r.barycenter = Vec::Zero(N);
  double area = 0;
  for (std::size_t k = 0; k < q.y.size(); ++k) {
    const double s = rho0(q.y[k]) / R;
    double vol = 0, bar = 0, pw = 1;
    for (int j = 1; j <= N + 1; ++j) {
      pw *= s;
      if (j <= N) vol += binom(N, j) * pw;
      bar += binom(N + 1, j) * pw;
    }
    r.volume += q.w[k] * vol;
    r.barycenter += q.w[k] * bar * q.y[k] / R;
    area += q.w[k];
  }
  r.volume /= area;
  r.barycenter /= area;
  return r;
}

double ClosedSurfaceIdentities::max_abs() const {
  return std::max(integral_laplace_x.cwiseAbs().maxCoeff(), angular.cwiseAbs().maxCoeff());
}

ClosedSurfaceIdentities closed_surface_identities(const SurfacePatch& p, const ChartQuadrature& q) {
  const int N = p.N;
  ClosedSurfaceIdentities r;
  r.integral_laplace_x = Vec::Zero(N);
  r.angular = Mat::Zero(N, N);
  for (std::size_t k = 0; k < q.theta.size(); ++k) {
    const GeometryAtPoint geo = compute_geometry(p, q.theta[k]);
    const MeanCurvature mc = mean_curvature(p, q.theta[k]);
    const double dA = q.w[k] * std::sqrt(geo.g);
    r.area += dA;
    r.integral_laplace_x += dA * mc.laplace_x;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        r.angular(i, j) += dA * (geo.x[i] * mc.laplace_x[j] - geo.x[j] * mc.laplace_x[i]);
  }
  return r;
}

double surface_area(const SurfacePatch& p, const ChartQuadrature& q) {
  double a = 0;
  for (std::size_t k = 0; k < q.theta.size(); ++k) a += q.w[k] * std::sqrt(compute_geometry(p, q.theta[k]).g);
  return a;
}

}  // namespace fbs
