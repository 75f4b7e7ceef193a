#pragma once
// Nonlinear terms of the equations transported to the reference domain:
// momentum f, divergence g and its flux form gvec, and on the reference
// sphere the tangential stress h', the normal stress hN and the kinematic d.

#include <optional>

#include "fbstokes/nonlinear_kernel.hpp"
#include "fbstokes/sphere.hpp"
#include "fbstokes/transforms.hpp"

namespace fbs {

struct FlowState {
  int N = 3;
  VecFieldST u;
  DisplacementField psi;
  double t = 0;
  double mu = 1, sigma = 1;
  double density = 1;
  FVariant variant = FVariant::hanzawa;
  Cutoff kappa;

  // reference sphere S_R; psi = rho_ext y / R when rho is set
  double R = 1;
  ScalarFieldST rho;
  Vec xi_prime;  // barycenter velocity, zero when empty
};

// Psi built from the height extension rho_ext on S_R
FlowState sphere_flow_state(VecFieldST u, ScalarFieldST rho_ext, double R, double mu, double sigma, double t = 0);

PointData<double> point_data(const FlowState& s, const Vec& y);

struct InteriorTerms {
  Vec f, gvec, gvec_printed;
  double g = 0;
  TransformState transform;
};

InteriorTerms assemble_interior(const FlowState& s, const Vec& y);
Vec assemble_f(const FlowState& s, const Vec& y);

struct DivergenceTerms {
  double g = 0;
  Vec gvec;
};
DivergenceTerms assemble_g_gvec(const FlowState& s, const Vec& y);

struct FluxCheck {
  double g = 0;
  double div_gvec = 0;          // central differences with step h
  double div_gvec_printed = 0;  // same for -J V0^T u alone
  double gap = 0;
  double printed_gap = 0;
};
FluxCheck flux_divergence_check(const FlowState& s, const Vec& y, double h);

// left side of the physical momentum equation with zero pressure moved to the reference domain:
// d_t u - mu Div D(u) - f, against (I + K)[d_t v + v.grad v - mu Div D(v)] at x = y + Psi,
// where u(y, t) = v(y + Psi(y, t), t)
struct MomentumOracle {
  Vec transformed, physical;
  double residual = 0;
};
MomentumOracle momentum_oracle(const VecFieldST& v, const DisplacementField& psi, double mu, const Vec& y, double t);

// ---- sphere boundary terms ----

struct BoundaryKinematics {
  Vec n, nt, delta;   // delta = n_t - n
  Vec grad_rho;       // g^{ij} tau_i d_j rho
  Vec Q;              // n_t - n + grad_rho
  double rho = 0, dt_rho = 0;
  TransformState transform;
  FieldSample u;
  Mat Du, Dcal;       // D(u), DD_D(k) grad u
};
BoundaryKinematics boundary_kinematics(const FlowState& s, const GeometryAtPoint& geo);

// exact realization of the tangential block: Pi_0[mu D(u) n] - Pi_0 Pi_t mu (D + DD) n_t
Vec assemble_hprime(const FlowState& s, const GeometryAtPoint& geo);
// first-order part in Psi: -mu [Pi_0 D delta1 + Pi_0 DD1 n - <D n, n> delta1], delta1 = -grad_rho
Vec hprime_linear_part(const FlowState& s, const GeometryAtPoint& geo);

struct NormalStress {
  double viscous = 0;     // -<n, mu D(u) delta> - <n, mu DD(n + delta)>
  double curvature = 0;   // sigma (H(Gamma_t) + (N-1)/R - B rho)
  double H_t = 0, B_rho = 0;
  double total() const { return viscous + curvature; }
};
NormalStress assemble_hN(const FlowState& s, const GeometryAtPoint& geo);
double hN_viscous_linear_part(const FlowState& s, const GeometryAtPoint& geo);

struct KinematicTerms {
  double d = 0;
  double d_ball = 0;            // d - <u | grad' rho> - n . (1/|B_R|) int u J0
  Vec xi_prime;                 // used barycenter velocity
  Vec mean_u, mean_uJ0;         // ball averages when with_barycenter
  double lhs_residual = 0;      // (d_t rho + xi'.n - n.u + <u|grad' rho> - d) - (<d_t rho n + xi', n_t> - u.n_t)
};

KinematicTerms assemble_d(const FlowState& s, const GeometryAtPoint& geo, bool with_barycenter,
                          const BallQuadrature* q = nullptr);

}  // namespace fbs
