#include "fbstokes/halfspace.hpp"

#include <algorithm>
#include <cmath>

#include "fbstokes/quadrature.hpp"

namespace fbs {

LopatinskiSolution solve_lopatinski(double A, cplx B, double mu, cplx rhs_t, cplx rhs_n) {
  const cplx D = compute_D(A, B);
  const cplx det = (B - A) * D;
  const double scale = std::pow(std::abs(A) + std::abs(B), 4);
  if (!(std::abs(det) > 1e-14 * scale)) throw SingularError("Lopatinski determinant (B-A)D vanishes");
  const cplx s = A * A + B * B;
  LopatinskiSolution r;
  r.beta_N = (s * rhs_t - 2.0 * A * A * A * rhs_n) / (mu * det);
  r.alpha_N = -(2.0 * A * B * rhs_t - s * A * rhs_n) / (mu * det);
  // mu (B^2-A^2) alpha_N / A with the factor A cancelled, valid at A = 0
  r.omega = -(A + B) * (2.0 * B * rhs_t - s * rhs_n) / D;
  return r;
}

ProfileSample FourierProfile::eval(double x) const {
  const int N = dim();
  const double A = freq.A;
  const cplx eA = std::exp(-A * x), eB = std::exp(-B * x);
  const cplx M = compute_M(x, A, B);
  const cplx dM = -eB - A * M;
  const cplx d2M = (A + B) * eB + A * A * M;
  ProfileSample s;
  s.v.resize(N);
  s.dv.resize(N);
  s.d2v.resize(N);
  for (int j = 0; j < N; ++j) {
    s.v[j] = coef_expA[j] * eA + coef_expB[j] * eB + coef_M[j] * M;
    s.dv[j] = -A * coef_expA[j] * eA - B * coef_expB[j] * eB + coef_M[j] * dM;
    s.d2v[j] = A * A * coef_expA[j] * eA + B * B * coef_expB[j] * eB + coef_M[j] * d2M;
  }
  s.theta = coef_expA[N] * eA;
  s.dtheta = -A * coef_expA[N] * eA;
  return s;
}

FourierProfile zero_profile(const ResolventPoint& p, const TangentialFrequency& f) {
  FourierProfile z;
  z.point = p;
  z.freq = f;
  z.B = compute_B(p, f);
  const int N = int(f.xi.size()) + 1;
  z.coef_expA.assign(N + 1, 0.0);
  z.coef_expB.assign(N, 0.0);
  z.coef_M.assign(N, 0.0);
  return z;
}

FourierProfile operator+(const FourierProfile& a, const FourierProfile& b) {
  FourierProfile r = a;
  for (std::size_t k = 0; k < r.coef_expA.size(); ++k) r.coef_expA[k] += b.coef_expA[k];
  for (std::size_t k = 0; k < r.coef_expB.size(); ++k) {
    r.coef_expB[k] += b.coef_expB[k];
    r.coef_M[k] += b.coef_M[k];
  }
  if (a.h_hat || b.h_hat) r.h_hat = a.h_hat.value_or(0.0) + b.h_hat.value_or(0.0);
  return r;
}

FourierProfile operator*(cplx s, const FourierProfile& a) {
  FourierProfile r = a;
  for (auto& c : r.coef_expA) c *= s;
  for (auto& c : r.coef_expB) c *= s;
  for (auto& c : r.coef_M) c *= s;
  if (r.h_hat) r.h_hat = s * *r.h_hat;
  return r;
}

namespace {

// Mode coefficients for data gf entering the algebraic rows with the opposite sign,
// i.e. the boundary rows of the returned profile equal -gf.
FourierProfile closed_form(const ResolventPoint& p, const TangentialFrequency& f, const std::vector<cplx>& gf) {
  FourierProfile prof = zero_profile(p, f);
  const int N = prof.dim();
  if (int(gf.size()) != N) throw DomainError("boundary datum must have N components");
  const double A = f.A, mu = p.mu;
  const cplx B = prof.B;
  cplx G = 0;
  for (int j = 0; j < N - 1; ++j) G += kI * f.xi[j] * gf[j];
  const cplx gN = gf[N - 1];
  const LopatinskiSolution lop = solve_lopatinski(A, B, mu, G, gN);
  const cplx D = compute_D(A, B);
  const cplx X = 2.0 * B * G - (A * A + B * B) * gN;
  const cplx tang = ((3.0 * B - A) * G - B * (B - A) * gN) / (mu * D * B);
  for (int j = 0; j < N - 1; ++j) {
    prof.coef_expB[j] = gf[j] / (mu * B) + kI * f.xi[j] * tang;
    prof.coef_M[j] = -kI * f.xi[j] * X / (mu * D);
  }
  prof.coef_expB[N - 1] = ((B - A) * G + A * (A + B) * gN) / (mu * D);
  prof.coef_M[N - 1] = A * X / (mu * D);
  prof.coef_expA[N] = lop.omega;
  return prof;
}

double rel(cplx res, std::initializer_list<cplx> terms) {
  double s = 0;
  for (cplx t : terms) s += std::abs(t);
  if (s == 0.0) return std::abs(res) == 0.0 ? 0.0 : 1.0;
  return std::abs(res) / s;
}

}  // namespace

FourierProfile neumann_profile_from_g(const ResolventPoint& p, const TangentialFrequency& f, const std::vector<cplx>& g) {
  std::vector<cplx> gf(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) gf[k] = -g[k];
  return closed_form(p, f, gf);
}

FourierProfile solve_neumann_model(const ResolventPoint& p, const TangentialFrequency& f, const std::vector<cplx>& h_hat0) {
  std::vector<cplx> g(h_hat0.size());
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = -h_hat0[k];
  return neumann_profile_from_g(p, f, g);
}

FourierProfile solve_surface_tension_model(const ResolventPoint& p, const TangentialFrequency& f, cplx d_hat) {
  const cplx E = compute_E_kappa(p, f);
  const cplx B = compute_B(p, f);
  const cplx D = compute_D(f.A, B);
  const double scale = p.mu * (std::abs(p.lambda) + f.A) * std::pow(std::abs(B) + f.A, 3) + 1e-300;
  if (!(std::abs(E) > 1e-13 * scale)) throw SingularError("E_kappa vanishes");
  const cplx h = p.mu * D * d_hat / E;
  const int N = int(f.xi.size()) + 1;
  // normal row 2 mu d_N w_N - q = -sigma A^2 h
  std::vector<cplx> g(N, 0.0);
  g[N - 1] = -p.sigma * f.A * f.A * h;
  FourierProfile prof = neumann_profile_from_g(p, f, g);
  prof.h_hat = h;
  return prof;
}

std::vector<double> profile_sample_points(const FourierProfile& prof, int n) {
  return chebyshev_points(n, 0.0, 10.0 / prof.B.real());
}

namespace {

void interior_residuals(const FourierProfile& prof, const std::vector<double>& xs, ResidualSet& r) {
  const int N = prof.dim();
  const double A = prof.freq.A, mu = prof.point.mu;
  const cplx lam = prof.point.lambda;
  for (double x : xs) {
    const ProfileSample s = prof.eval(x);
    for (int j = 0; j < N; ++j) {
      const cplx a = lam * s.v[j], b = mu * A * A * s.v[j], c = -mu * s.d2v[j];
      const cplx d = j < N - 1 ? kI * prof.freq.xi[j] * s.theta : s.dtheta;
      r.momentum = std::max(r.momentum, rel(a + b + c + d, {a, b, c, d}));
    }
    cplx div = s.dv[N - 1];
    double sc = std::abs(s.dv[N - 1]);
    for (int j = 0; j < N - 1; ++j) {
      const cplx t = kI * prof.freq.xi[j] * s.v[j];
      div += t;
      sc += std::abs(t);
    }
    r.divergence = std::max(r.divergence, sc == 0.0 ? std::abs(div) : std::abs(div) / sc);
  }
}

}  // namespace

ResidualSet neumann_residuals(const FourierProfile& prof, const std::vector<cplx>& g, const std::vector<double>& xs) {
  ResidualSet r;
  interior_residuals(prof, xs, r);
  const int N = prof.dim();
  const double mu = prof.point.mu;
  const ProfileSample s = prof.eval(0.0);
  for (int j = 0; j < N - 1; ++j) {
    const cplx a = mu * s.dv[j], b = mu * kI * prof.freq.xi[j] * s.v[N - 1];
    r.boundary_tangential = std::max(r.boundary_tangential, rel(a + b - g[j], {a, b, g[j]}));
  }
  const cplx a = 2.0 * mu * s.dv[N - 1], b = -s.theta;
  r.boundary_normal = rel(a + b - g[N - 1], {a, b, g[N - 1]});
  return r;
}

ResidualSet tension_residuals(const FourierProfile& prof, cplx d_hat, const std::vector<double>& xs) {
  ResidualSet r;
  interior_residuals(prof, xs, r);
  const int N = prof.dim();
  const double mu = prof.point.mu, A = prof.freq.A;
  const cplx h = prof.h_hat.value_or(0.0);
  const ProfileSample s = prof.eval(0.0);
  for (int j = 0; j < N - 1; ++j) {
    const cplx a = mu * s.dv[j], b = mu * kI * prof.freq.xi[j] * s.v[N - 1];
    r.boundary_tangential = std::max(r.boundary_tangential, rel(a + b, {a, b}));
  }
  const cplx a = 2.0 * mu * s.dv[N - 1], b = -s.theta, c = prof.point.sigma * A * A * h;
  r.boundary_normal = rel(a + b + c, {a, b, c});
  double drift = 0;
  for (std::size_t j = 0; j < prof.point.a_kappa.size() && j < prof.freq.xi.size(); ++j)
    drift += prof.freq.xi[j] * prof.point.a_kappa[j];
  const cplx k1 = prof.point.lambda * h, k2 = kI * drift * h, k3 = s.v[N - 1];
  r.kinematic = rel(k1 + k2 + k3 - d_hat, {k1, k2, k3, d_hat});
  return r;
}

double divergence_coefficient_defect(const FourierProfile& prof) {
  const int N = prof.dim();
  const double A = prof.freq.A;
  const cplx B = prof.B;
  // e^{-Ax}, e^{-Bx} and M coefficients of sum i xi_j v_j + d_N v_N, using M' = -e^{-Bx} - A M
  cplx cA = -A * prof.coef_expA[N - 1], cB = -B * prof.coef_expB[N - 1] - prof.coef_M[N - 1],
       cM = -A * prof.coef_M[N - 1];
  double sc = std::abs(A * prof.coef_expA[N - 1]) + std::abs(B * prof.coef_expB[N - 1]) +
              std::abs(prof.coef_M[N - 1]) * (1.0 + A);
  for (int j = 0; j < N - 1; ++j) {
    const cplx ix = kI * prof.freq.xi[j];
    cA += ix * prof.coef_expA[j];
    cB += ix * prof.coef_expB[j];
    cM += ix * prof.coef_M[j];
    sc += std::abs(ix) * (std::abs(prof.coef_expA[j]) + std::abs(prof.coef_expB[j]) + std::abs(prof.coef_M[j]));
  }
  if (sc == 0.0) return 0.0;
  return (std::abs(cA) + std::abs(cB) + std::abs(cM)) / sc;
}

PressureAux solve_pressure_auxiliary(const ResolventPoint& p, const TangentialFrequency& f, cplx rho_hat0) {
  return {compute_B0(p, f), rho_hat0};
}

}  // namespace fbs
