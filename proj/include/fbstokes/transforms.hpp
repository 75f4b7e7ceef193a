#pragma once
// Hanzawa and partial-Lagrange changes of variables x = y + Psi(y, t) (+ xi(t)),
// the inverse-Jacobian algebra V0, J and the transport identities.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fbstokes/fields.hpp"
#include "fbstokes/sphere.hpp"
#include "fbstokes/surface.hpp"

namespace fbs {

struct DisplacementField {
  int N = 3;
  VecFieldST psi;
  double delta_bound = 0.5;
  std::string name;
};

struct TransformState {
  int N = 3;
  Mat K;     // K(i, j) = d_i Psi_j
  Mat V0;    // (I + K)(I + V0) = I
  double J = 1, J0 = 0;
  Mat V0_series;  // truncated Neumann series, empty when not applicable
  double series_defect = 0;
  double inverse_defect = 0;  // max |(I+K)(I+V0) - I|
  double k_norm = 0;          // spectral norm of K
};

// direct inverse plus, when |K| <= 1/2, the Neumann series sum_{k>=1} (-K)^k
TransformState compute_V0_J(const Mat& K);

// K = grad^T from a field sample (grad(i,k) = d_k Psi_i)
Mat displacement_gradient(const FieldSample& s);

TransformState transform_state(const DisplacementField& f, const Vec& y, double t);

// d_m V0 = -(I + V0) d_m K (I + V0), dK[m](i, j) = d_m d_i Psi_j
std::vector<Mat> displacement_gradient_derivs(const FieldSample& s);
std::vector<Mat> dV0(const Mat& V0, const std::vector<Mat>& dK);

struct HanzawaPoint {
  Vec x;
  double k_norm = 0;
};

// throws Error("delta-violation") when |grad Psi| > delta_bound at y
HanzawaPoint hanzawa_map(const DisplacementField& f, const Vec& xi_t, const Vec& y, double t);

struct InjectivityWitness {
  double delta = 0;      // sampled sup |grad Psi|
  double min_ratio = 0;  // min |x1 - x2| / |y1 - y2|
  bool holds = false;    // min_ratio >= 1 - delta
  std::size_t pairs = 0;
};
InjectivityWitness injectivity_witness(const DisplacementField& f, const Vec& xi_t, const std::vector<Vec>& ys,
                                       double t);

// rho_ext(y, t) = a(t) sum c (|y|/R)^l Y_lm(y/|y|), the solid-harmonic extension (N = 3)
ScalarFieldST solid_harmonic_extension(const HarmonicSeries& s, double R,
                                       std::function<J4(const J4&)> amplitude = {});

// Psi(y, t) = rho_ext(y, t) y / R, which moves S_R onto |x| = R + rho
DisplacementField sphere_height_displacement(ScalarFieldST rho_ext, double R, double delta = 0.5);

// ---- partial Lagrange ----

struct Cutoff {
  double R = 1;
  // 1 on B_R, 0 outside B_2R, C^2 quintic smoothstep in |y| between
  template <class T>
  T eval(const std::vector<T>& y) const {
    using std::sqrt;
    T r2 = T(0.0);
    for (const auto& c : y) r2 += c * c;
    const double rv = std::sqrt(value_of(r2));
    if (rv <= R) return T(1.0);
    if (rv >= 2 * R) return T(0.0);
    const T s = (sqrt(r2) - R) / R;
    return 1.0 - s * s * s * (10.0 - s * (15.0 - 6.0 * s));
  }
};

struct VelocityHistory {
  VecFieldST u;
  std::vector<double> times;  // snapshot times, increasing, starting at 0
};

struct PartialLagrangeResult {
  Vec x;
  double delta_measured = 0;  // trapezoid of max over check points of |kappa u| + |grad(kappa u)|
};

// x = y + kappa(y) int_0^t u(y, s) ds over the snapshots not later than t
PartialLagrangeResult partial_lagrange_map(const VelocityHistory& h, const Cutoff& kappa, const Vec& y, double t,
                                           double delta = 0.5, const std::vector<Vec>& check_points = {});

// Psi(y, t) = kappa(y) int_0^t u ds as a displacement field (trapezoid on the snapshots)
DisplacementField partial_lagrange_displacement(const VelocityHistory& h, const Cutoff& kappa, int N, double delta);

// ---- divergence identity ----

struct DivergenceForms {
  double form_a = 0;          // div u + V0 : grad u
  double form_b = 0;          // J^-1 div(J (I + V0)^T u), central differences
  double form_b_printed = 0;  // J^-1 (div u + div(J V0^T u)), central differences
  double printed_defect = 0;  // |form_b_printed - form_a|
  double gap = 0;             // |form_a - form_b|
};

using DomainPredicate = std::function<bool(const Vec&)>;

// throws Error("stencil-out-of-domain") if a stencil point fails the predicate
DivergenceForms transformed_divergence(const VecFieldST& u, const DisplacementField& f, const Vec& y, double t,
                                       double h, const DomainPredicate& inside = {});

// ---- pushforward normal ----

// n_t = (I + V0) n / |(I + V0) n|; throws Error("degenerate-normal")
Vec pushforward_normal(const TransformState& s, const Vec& n);

// ---- Reynolds transport ----

struct Flow {
  int N = 3;
  VecFieldST phi;  // flow map phi_t(y)
  VecFieldST w;    // Lagrangian velocity d_t phi_t(y)
  std::string name;
};

Flow dilation_flow(int N = 3);
// phi_t(y) = y + t w(y)
Flow linear_in_time_flow(int N, VecFieldST w, std::string name);

struct ReynoldsRecord {
  double dt = 0;
  double fd_error = 0;  // |central dJ/dt - (div_x w) J|
};

struct ReynoldsReport {
  std::vector<ReynoldsRecord> records;
  double analytic_residual = 0;  // jet dJ/dt versus (div_x w) J
  double J = 1;
  double min_order = 0;          // min slope over consecutive dt pairs above the noise floor
  int orders_measured = 0;
};

ReynoldsReport reynolds_transport_check(const Flow& flow, const Vec& y, double t, const std::vector<double>& dt_list);

// ---- area derivative ----

struct AreaDerivative {
  double fd_rate = 0;         // central difference of |Gamma_t|
  double first_variation = 0; // int sqrt g g^{ij} <tau_i, d_j xdot>
  double curvature_form = 0;  // -int H <n, xdot>
  double closed_form = 0;     // (N-1) omega_N R^{N-2} speed
  double residual = 0;        // max deviation from the closed form
};

// sphere of radius R0 + speed t at time t
AreaDerivative area_derivative_check(int N, double R0, double speed, double t, int n_theta = 48, int n_phi = 96,
                                     double dt = 1e-3);

}  // namespace fbs
