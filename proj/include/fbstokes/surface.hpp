#pragma once
// Parametrized hypersurfaces in R^N (N = 2, 3): frames, fundamental forms,
// Christoffel symbols, Laplace-Beltrami and mean curvature.

#include <functional>
#include <string>
#include <vector>

#include "fbstokes/common.hpp"
#include "fbstokes/harmonics.hpp"
#include "fbstokes/jet.hpp"

namespace fbs {

using J2 = Jet<2>;
// chart in at most two parameters; for curves only the first is used
using ChartFn = std::function<std::vector<J2>(const J2& t0, const J2& t1)>;
using ChartScalarFn = std::function<J2(const J2& t0, const J2& t1)>;

enum class DerivMode { analytic, finite_difference };

struct SurfacePatch {
  int N = 3;
  Vec lo, hi;  // parameter box, length N-1
  ChartFn chart;
  DerivMode mode = DerivMode::analytic;
  double fd_step = 1e-4;  // relative to the box side
  std::string name;

  int dim_param() const { return N - 1; }
};

struct ChartDerivs {
  Vec x;                               // phi(theta)
  Mat tau;                             // N x (N-1), columns tau_i
  std::vector<std::vector<Vec>> tau2;  // tau2[i][j] = d_i d_j phi
};

struct ScalarDerivs {
  double v = 0;
  Vec grad;  // N-1
  Mat hess;
};

struct GeometryAtPoint {
  Vec theta, x, n;
  Mat tau;
  std::vector<std::vector<Vec>> tau2;
  Mat G, Ginv, L;
  double g = 0;
  std::vector<Mat> dG;            // dG[k] = d_k G
  std::vector<Mat> christoffel;   // christoffel[k](i,j) = Lambda^k_ij from metric derivatives
  double H = 0;                   // g^{ij} l_ij, with Delta x = H n
  double Hcal = 0;                // H / (N-1)
};

ChartDerivs chart_derivs(const SurfacePatch& p, const Vec& theta);
ScalarDerivs scalar_derivs(const SurfacePatch& p, const ChartScalarFn& f, const Vec& theta);

// cofactor normal h_i = det[tau_1 .. tau_{N-1}, e_i], normalized
Vec unit_normal(const SurfacePatch& p, const Vec& theta);
Vec cofactor_normal(const Mat& tau);

GeometryAtPoint compute_geometry(const SurfacePatch& p, const Vec& theta);

struct FundamentalForms {
  Mat G, L, Ginv;
  double g = 0;
};
FundamentalForms fundamental_forms(const SurfacePatch& p, const Vec& theta);

// christoffel[k](i,j) from metric derivatives, and the direct <tau_ij, tau^k> form
std::vector<Mat> christoffel(const SurfacePatch& p, const Vec& theta);
std::vector<Mat> christoffel_direct(const GeometryAtPoint& geo);

struct LaplaceBeltramiValue {
  double christoffel_form = 0;  // g^{ij} d_i d_j f - g^{ik} Lambda^j_ik d_j f
  double divergence_form = 0;   // g^{-1/2} d_i (g^{1/2} g^{ij} d_j f)
};
LaplaceBeltramiValue laplace_beltrami(const SurfacePatch& p, const ChartScalarFn& f, const Vec& theta);
LaplaceBeltramiValue laplace_beltrami(const GeometryAtPoint& geo, const ScalarDerivs& f);

// f(x) restricted to the patch
using AmbientFn = std::function<J2(const std::vector<J2>& x)>;
ChartScalarFn restrict_ambient(const SurfacePatch& p, AmbientFn f);

struct MeanCurvature {
  double H_laplace = 0;  // (Delta_Gamma phi) . n, divergence form
  double H_forms = 0;    // g^{ij} l_ij
  double H_mean = 0;     // mean of the principal curvatures, H_forms / (N - 1)
  Vec n;
  Vec laplace_x;         // Delta_Gamma phi
  double identity_residual = 0;  // d_i(sqrt g g^{ij} tau_j) - sqrt g H n, by finite differences of the left side
};
MeanCurvature mean_curvature(const SurfacePatch& p, const Vec& theta);

// ---- concrete patches ----

// N = 3: (theta, phi) -> R(sin t cos p, sin t sin p, cos t), outward cofactor normal
// N = 2: t -> R(cos t, -sin t), outward cofactor normal
SurfacePatch sphere_patch(double R, int N = 3);
// (theta, z) -> (R cos theta, R sin theta, z)
SurfacePatch cylinder_patch(double R, double height = 2.0);
// x_N = h(x'), normal proportional to (-grad h, 1)
SurfacePatch graph_patch(int N, ChartScalarFn h, Vec lo, Vec hi);
SurfacePatch plane_patch(int N = 3);

// |x| = r(phi, theta) on the polar chart omega = (cos p sin t, sin p sin t, cos t)
struct SphericalGraph {
  std::function<J2(const J2& phi, const J2& theta)> r;
};

SphericalGraph spherical_graph_from_series(double R, const HarmonicSeries& s);
// chart order (theta, phi) so the cofactor normal is outward
SurfacePatch spherical_graph_patch(const SphericalGraph& graph);

// closed-form divergence expression for the doubled mean curvature of |x| = r
double spherical_graph_mean_curvature(const SphericalGraph& graph, double phi, double theta);

}  // namespace fbs
