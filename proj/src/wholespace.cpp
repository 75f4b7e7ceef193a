#include "fbstokes/wholespace.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <fftw3.h>

namespace fbs {

WholeSpaceSample WholeSpaceSolution::eval(const Vec& xi) const {
  const double r2 = xi.squaredNorm();
  if (r2 == 0.0) throw DomainError("whole-space solver evaluated at xi = 0");
  const CVec f = f_hat(xi);
  WholeSpaceSample s;
  cplx idf = 0, xf = 0;
  for (int k = 0; k < xi.size(); ++k) {
    idf += kI * xi[k] * f[k];
    xf += xi[k] * f[k];
  }
  const cplx a = lambda + mu * r2, b = lambda + r2;
  s.u_hat = f / a;
  for (int k = 0; k < xi.size(); ++k) s.u_hat[k] += (mu - 1.0) * xi[k] * xf / (a * b);
  s.g_hat = idf / b;
  s.gvec_hat = (f + kI * xi.cast<cplx>() * s.g_hat) / lambda;
  cplx idg = 0;
  for (int k = 0; k < xi.size(); ++k) idg += kI * xi[k] * s.gvec_hat[k];
  s.q_hat = 2.0 * mu * s.g_hat - (idf - lambda * idg) / r2;
  return s;
}

double WholeSpaceSolution::momentum_residual(const Vec& xi) const {
  const WholeSpaceSample s = eval(xi);
  const CVec f = f_hat(xi);
  const double r2 = xi.squaredNorm();
  cplx xu = 0;
  for (int k = 0; k < xi.size(); ++k) xu += xi[k] * s.u_hat[k];
  double worst = 0;
  for (int k = 0; k < xi.size(); ++k) {
    const cplx t1 = lambda * s.u_hat[k], t2 = mu * r2 * s.u_hat[k], t3 = mu * xi[k] * xu, t4 = kI * xi[k] * s.q_hat;
    const cplx res = t1 + t2 + t3 + t4 - f[k];
    const double sc = std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4) + std::abs(f[k]);
    worst = std::max(worst, sc == 0.0 ? 0.0 : std::abs(res) / sc);
  }
  return worst;
}

double WholeSpaceSolution::divergence_residual(const Vec& xi) const {
  const WholeSpaceSample s = eval(xi);
  cplx d = 0;
  double sc = std::abs(s.g_hat);
  for (int k = 0; k < xi.size(); ++k) {
    d += kI * xi[k] * s.u_hat[k];
    sc += std::abs(xi[k] * s.u_hat[k]);
  }
  return sc == 0.0 ? 0.0 : std::abs(d - s.g_hat) / sc;
}

WholeSpaceSolution solve_wholespace(const ResolventPoint& p, FourierField f_hat) {
  if (!p.admissible()) throw DomainError("lambda outside the admissible sector");
  return {p.lambda, p.mu, std::move(f_hat)};
}

std::function<cplx(const Vec&)> solve_weak_laplace_wholespace(FourierField f_hat) {
  return [f_hat = std::move(f_hat)](const Vec& xi) {
    const double r2 = xi.squaredNorm();
    if (r2 == 0.0) throw DomainError("weak Laplace solver evaluated at xi = 0");
    const CVec f = f_hat(xi);
    cplx d = 0;
    for (int k = 0; k < xi.size(); ++k) d += kI * xi[k] * f[k];
    return -d / r2;
  };
}

double weak_laplace_residual(const FourierField& f_hat, const Vec& xi) {
  const cplx u = solve_weak_laplace_wholespace(f_hat)(xi);
  const CVec f = f_hat(xi);
  cplx d = 0;
  double sc = 0;
  for (int k = 0; k < xi.size(); ++k) {
    d += kI * xi[k] * f[k];
    sc += std::abs(xi[k] * f[k]);
  }
  const cplx res = -xi.squaredNorm() * u - d;
  return sc == 0.0 ? std::abs(res) : std::abs(res) / sc;
}

// ---- weak Dirichlet ----

std::size_t GridField::index(const std::vector<int>& k) const {
  std::size_t id = 0;
  for (int d = 0; d < dim; ++d) id = id * n + ((k[d] % n) + n) % n;
  return id;
}

Vec GridField::coord(const std::vector<int>& k) const {
  Vec x(dim);
  for (int d = 0; d < dim; ++d) x[d] = lo[d] + h * k[d];
  return x;
}

namespace {

template <class F>
void for_each_index(int dim, int n, F&& fn) {
  std::vector<int> k(dim, 0);
  const std::size_t total = static_cast<std::size_t>(std::pow(n, dim) + 0.5);
  for (std::size_t t = 0; t < total; ++t) {
    std::size_t r = t;
    for (int d = dim - 1; d >= 0; --d) {
      k[d] = int(r % n);
      r /= n;
    }
    fn(k);
  }
}

}  // namespace

WeakDirichletResult solve_weak_dirichlet_halfspace(const WeakDirichletInput& in) {
  const int N = in.dim, n = in.n;
  if (N < 2 || N > 3) throw DomainError("weak Dirichlet solver supports N = 2, 3");
  if (n < 4 || n % 2) throw DomainError("grid size must be even and >= 4");
  if (in.support_lo.size() != N || in.support_hi.size() != N) throw DomainError("support box has wrong dimension");
  if (in.support_lo[N - 1] <= 0.0 && !in.smooth_extension)
    throw Error("support-touches-boundary", "support of f reaches x_N = 0; extensions are not smooth");
  if (in.support_lo[N - 1] < 0.0 && in.smooth_extension && in.support_lo[N - 1] != -in.support_hi[N - 1])
    throw Error("support-touches-boundary", "smooth-extension support must be symmetric in x_N");

  double diam = 0;
  for (int d = 0; d < N; ++d) diam = std::max(diam, in.support_hi[d] - in.support_lo[d]);
  diam = std::max(diam, in.support_hi[N - 1]);  // the reflected copy must fit as well
  const double L = 4.0 * diam;

  WeakDirichletResult res;
  res.box_side = L;
  GridField& u = res.u;
  u.dim = N;
  u.n = n;
  u.h = L / n;
  u.lo = Vec(N);
  for (int d = 0; d < N - 1; ++d) u.lo[d] = 0.5 * (in.support_lo[d] + in.support_hi[d]) - 0.5 * L;
  u.lo[N - 1] = -0.5 * L;  // x_N = 0 sits on grid index n/2
  const std::size_t total = static_cast<std::size_t>(std::pow(n, N) + 0.5);

  // odd extension for tangential components, even for the normal one
  std::vector<std::vector<double>> ext(N, std::vector<double>(total, 0.0));
  for_each_index(N, n, [&](const std::vector<int>& k) {
    Vec x = u.coord(k);
    const double xn = x[N - 1];
    if (xn == 0.0) {
      Vec fv = in.f(x);
      ext[N - 1][u.index(k)] = fv[N - 1];
      return;
    }
    const double sgn = xn > 0 ? 1.0 : -1.0;
    x[N - 1] = std::abs(xn);
    bool inside = true;
    for (int d = 0; d < N; ++d) inside = inside && x[d] >= in.support_lo[d] - 1e-12 && x[d] <= in.support_hi[d] + 1e-12;
    if (!inside && !in.smooth_extension) return;
    const Vec fv = in.f(x);
    for (int d = 0; d < N - 1; ++d) ext[d][u.index(k)] = sgn * fv[d];
    ext[N - 1][u.index(k)] = fv[N - 1];
  });

  std::vector<int> dims(N, n);
  fftw_complex* buf = fftw_alloc_complex(total);
  fftw_complex* acc = fftw_alloc_complex(total);
  fftw_plan fwd = fftw_plan_dft(N, dims.data(), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_plan bwd = fftw_plan_dft(N, dims.data(), acc, acc, FFTW_BACKWARD, FFTW_ESTIMATE);
  for (std::size_t t = 0; t < total; ++t) acc[t][0] = acc[t][1] = 0.0;

  auto wavenumber = [&](int k) {
    const int kk = k <= n / 2 ? k : k - n;
    return 2.0 * kPi * kk / L;
  };
  for (int c = 0; c < N; ++c) {
    for (std::size_t t = 0; t < total; ++t) {
      buf[t][0] = ext[c][t];
      buf[t][1] = 0.0;
    }
    fftw_execute(fwd);
    for_each_index(N, n, [&](const std::vector<int>& k) {
      const std::size_t id = u.index(k);
      double r2 = 0;
      for (int d = 0; d < N; ++d) r2 += std::pow(wavenumber(k[d]), 2);
      if (r2 == 0.0) return;
      // Nyquist derivative is set to zero to keep the result real
      const double xi_c = (k[c] == n / 2) ? 0.0 : wavenumber(k[c]);
      const cplx F(buf[id][0], buf[id][1]);
      const cplx v = -kI * xi_c * F / r2;
      acc[id][0] += v.real();
      acc[id][1] += v.imag();
    });
  }
  fftw_execute(bwd);
  u.data.resize(total);
  for (std::size_t t = 0; t < total; ++t) u.data[t] = acc[t][0] / double(total);
  fftw_destroy_plan(fwd);
  fftw_destroy_plan(bwd);
  fftw_free(buf);
  fftw_free(acc);

  // checks on the half space part of the grid
  const int k0 = n / 2;
  for_each_index(N, n, [&](const std::vector<int>& k) {
    if (k[N - 1] == k0) res.boundary_max = std::max(res.boundary_max, std::abs(u.data[u.index(k)]));
    if (k[N - 1] <= k0 || k[N - 1] >= n - 1) return;
    double lap = 0;
    for (int d = 0; d < N; ++d) {
      auto kp = k, km = k;
      kp[d] += 1;
      km[d] -= 1;
      lap += (u.data[u.index(kp)] - 2 * u.data[u.index(k)] + u.data[u.index(km)]) / (u.h * u.h);
    }
    const Vec x = u.coord(k);
    double div = 0;
    for (int d = 0; d < N; ++d) {
      Vec xp = x, xm = x;
      xp[d] += u.h;
      xm[d] -= u.h;
      auto val = [&](const Vec& y) {
        if (y[N - 1] <= 0.0 && !in.smooth_extension) return 0.0;
        return in.f(y)[d];
      };
      div += (val(xp) - val(xm)) / (2 * u.h);
    }
    res.laplacian_residual = std::max(res.laplacian_residual, std::abs(lap - div));
  });
  return res;
}

}  // namespace fbs
