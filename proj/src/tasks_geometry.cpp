#include "fbstokes/rng.hpp"
#include "fbstokes/sphere.hpp"
#include "task_util.hpp"

namespace fbs {

using namespace detail;

// ---------------- loaders ----------------

namespace {

HarmonicSeries parse_series(const json& j, const std::string& key) {
  if (!j.is_array()) throw ConfigError(key, "key '" + key + "' must be an array of [l, m, coef]");
  HarmonicSeries s;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer() || !e[2].is_number())
      throw ConfigError(key, "key '" + key + "' entries must be [l, m, coef] with integer l, m");
    const int l = e[0].get<int>(), m = e[1].get<int>();
    if (l < 0 || std::abs(m) > l) throw ConfigError(key, "key '" + key + "' needs l >= 0 and |m| <= l");
    s.terms.push_back({l, m, e[2].get<double>()});
  }
  return s;
}

json series_json(const HarmonicSeries& s) {
  json a = json::array();
  for (const auto& t : s.terms) a.push_back(json::array({t.l, t.m, t.coef}));
  return a;
}

}  // namespace

LoadedSurface load_surface(const json& raw, const std::string& key) {
  const json j = resolve_json_value(raw, key);
  ConfigReader c(j, key + ".");
  LoadedSurface s;
  s.kind = c.string("kind");
  if (s.kind == "sphere") {
    s.R = c.positive("R", 1.0);
    s.N = int(c.integer("N", 3));
    if (s.N < 2 || s.N > 3) throw ConfigError(key + ".N", "key '" + key + ".N' must be 2 or 3");
    s.patch = sphere_patch(s.R, s.N);
    s.resolved = {{"kind", s.kind}, {"R", s.R}, {"N", s.N}};
  } else if (s.kind == "spherical_graph") {
    s.R = c.positive("R", 1.0);
    s.series = parse_series(c.raw("r_series"), key + ".r_series");
    s.patch = spherical_graph_patch(spherical_graph_from_series(s.R, s.series));
    s.resolved = {{"kind", s.kind}, {"R", s.R}, {"r_series", series_json(s.series)}};
  } else if (s.kind == "graph") {
    const json& hs = c.raw("h_series");
    if (!hs.is_array()) throw ConfigError(key + ".h_series", "key '" + key + ".h_series' must be an array");
    for (const auto& e : hs) {
      if (!e.is_array() || e.size() != 3)
        throw ConfigError(key + ".h_series", "key '" + key + ".h_series' entries must be [amp, k1, k2]");
      for (const auto& x : e)
        if (!x.is_number()) throw ConfigError(key + ".h_series", "key '" + key + ".h_series' must hold numbers");
      s.h_series.push_back({e[0].get<double>(), e[1].get<double>(), e[2].get<double>()});
    }
    Vec lo = Vec::Constant(2, -1.0), hi = Vec::Constant(2, 1.0);
    if (c.has("box")) {
      const json& b = c.raw("box");
      if (!b.is_array() || b.size() != 2 || !b[0].is_array() || !b[1].is_array() || b[0].size() != 2 ||
          b[1].size() != 2)
        throw ConfigError(key + ".box", "key '" + key + ".box' must be [[lo1, lo2], [hi1, hi2]]");
      for (int k = 0; k < 2; ++k) {
        if (!b[0][k].is_number() || !b[1][k].is_number())
          throw ConfigError(key + ".box", "key '" + key + ".box' must hold numbers");
        lo[k] = b[0][k].get<double>();
        hi[k] = b[1][k].get<double>();
        if (!(hi[k] > lo[k])) throw ConfigError(key + ".box", "key '" + key + ".box' must have hi > lo");
      }
    }
    const auto terms = s.h_series;
    ChartScalarFn h = [terms](const J2& a, const J2& b) {
      J2 v(0.0);
      for (const auto& t : terms) v += t[0] * cos(t[1] * a + t[2] * b);
      return v;
    };
    s.patch = graph_patch(3, h, lo, hi);
    json hs_out = json::array();
    for (const auto& t : s.h_series) hs_out.push_back(json::array({t[0], t[1], t[2]}));
    s.resolved = {{"kind", s.kind},
                  {"h_series", hs_out},
                  {"box", json::array({json::array({lo[0], lo[1]}), json::array({hi[0], hi[1]})})}};
  } else {
    throw ConfigError(key + ".kind", "key '" + key + ".kind' must be sphere, spherical_graph or graph");
  }
  c.finish();
  return s;
}

LoadedFlow load_flow(const json& raw, const std::string& key) {
  LoadedFlow f;
  if (raw.is_string() && raw.get<std::string>().rfind("builtin:", 0) == 0) {
    const std::string name = raw.get<std::string>();
    if (name != "builtin:dilation") throw ConfigError(key, "unknown builtin flow '" + name + "'");
    f.flow = dilation_flow(3);
    f.resolved = {{"kind", "dilation"}, {"N", 3}};
    return f;
  }
  const json j = resolve_json_value(raw, key);
  ConfigReader c(j, key + ".");
  const std::string kind = c.string("kind");
  const int N = int(c.integer("N", 3));
  if (N < 2 || N > 3) throw ConfigError(key + ".N", "key '" + key + ".N' must be 2 or 3");
  if (kind == "dilation") {
    f.flow = dilation_flow(N);
    f.resolved = {{"kind", kind}, {"N", N}};
  } else if (kind == "linear") {
    // phi_t(y) = y + t w(y) with w a sum of sine modes
    std::vector<SineMode> modes;
    if (c.has("modes")) {
      const json& ms = c.raw("modes");
      if (!ms.is_array()) throw ConfigError(key + ".modes", "key '" + key + ".modes' must be an array");
      for (std::size_t k = 0; k < ms.size(); ++k) {
        const std::string mk = key + ".modes[" + std::to_string(k) + "].";
        ConfigReader m(ms[k], mk);
        SineMode sm;
        sm.component = int(m.integer("component"));
        if (sm.component < 0 || sm.component >= N)
          throw ConfigError(mk + "component", "key '" + mk + "component' out of range");
        sm.amp = m.number("amp");
        sm.k = m.numbers("k");
        if (int(sm.k.size()) != N) throw ConfigError(mk + "k", "key '" + mk + "k' must have N entries");
        sm.phase = m.number("phase", 0.0);
        if (m.number("omega", 0.0) != 0.0)
          throw ConfigError(mk + "omega", "key '" + mk + "omega' must be 0 for a linear-in-time flow");
        m.finish();
        modes.push_back(sm);
      }
    } else {
      const std::uint64_t seed = c.seed("seed", 0);
      const int per = int(c.integer("per_component", 2));
      const double amp = c.number("amp", 0.4);
      CounterRng rng(seed, 0xf10);
      modes = random_sine_modes(N, rng, per, amp, 1.5, false);
    }
    json ms = json::array();
    for (const auto& m : modes)
      ms.push_back({{"component", m.component}, {"amp", m.amp}, {"k", m.k}, {"phase", m.phase}});
    f.flow = linear_in_time_flow(N, sine_field(N, modes), "linear");
    f.resolved = {{"kind", kind}, {"N", N}, {"modes", ms}};
  } else {
    throw ConfigError(key + ".kind", "key '" + key + ".kind' must be dilation or linear");
  }
  c.finish();
  return f;
}

// ---------------- curvature ----------------

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

// sign(n_N) div(grad h / W) for h = sum amp cos(k . t)
double graph_curvature_closed_form(const std::vector<std::array<double, 3>>& terms, const Vec& t, double n_last) {
  double h1 = 0, h2 = 0, h11 = 0, h12 = 0, h22 = 0;
  for (const auto& c : terms) {
    const double arg = c[1] * t[0] + c[2] * t[1];
    h1 -= c[0] * c[1] * std::sin(arg);
    h2 -= c[0] * c[2] * std::sin(arg);
    h11 -= c[0] * c[1] * c[1] * std::cos(arg);
    h12 -= c[0] * c[1] * c[2] * std::cos(arg);
    h22 -= c[0] * c[2] * c[2] * std::cos(arg);
  }
  const double W2 = 1 + h1 * h1 + h2 * h2, W = std::sqrt(W2);
  const double H = (h11 + h22 - (h1 * h1 * h11 + 2 * h1 * h2 * h12 + h2 * h2 * h22) / W2) / W;
  return n_last >= 0 ? H : -H;
}

struct ChartPoint {
  Vec theta;
};

}  // namespace

Report curvature(const json& config, const RunOptions& opt) {
  ConfigReader c(config);
  c.has("task");
  const LoadedSurface surf = load_surface(c.raw("surface"));
  const long long n = c.integer("n_samples", 1000);
  if (n < 0) throw ConfigError("n_samples", "key 'n_samples' must be >= 0");
  const std::uint64_t seed = c.seed("seed", 0);
  const double tol = c.positive("tol", surf.kind == "sphere" ? 1e-10 : 1e-8);
  const double pole_margin = c.positive("pole_margin", 0.02);
  std::vector<double> eps = c.numbers("eps_list", {});
  const double slope_min = c.positive("slope_min", 1.9);
  if (!eps.empty()) {
    require_sorted_decreasing(eps, "eps_list");
    if (surf.kind != "spherical_graph")
      throw ConfigError("eps_list", "key 'eps_list' needs a spherical_graph surface");
  }
  c.finish();

  json resolved = {{"surface", surf.resolved}, {"n_samples", n},          {"seed", seed},
                   {"tol", tol},               {"pole_margin", pole_margin}, {"eps_list", eps},
                   {"slope_min", slope_min}};
  Report r = start_report("curvature", resolved, seed);
  r.columns = {"theta_1", "theta_2", "H", "H_reference", "residual"};
  r.metrics = {"H", "residual"};

  std::vector<ChartPoint> pts;
  const bool polar = surf.kind != "graph" && surf.N == 3;
  for (long long k = 0; k < n; ++k) {
    CounterRng rng(seed, 0xc0000000ULL + std::uint64_t(k));
    if (polar)
      pts.push_back({vec2(rng.uniform(pole_margin, kPi - pole_margin), rng.uniform(0, 2 * kPi))});
    else if (surf.kind == "graph")
      pts.push_back({vec2(rng.uniform(surf.patch.lo[0], surf.patch.hi[0]), rng.uniform(surf.patch.lo[1], surf.patch.hi[1]))});
    else
      pts.push_back({Vec::Constant(1, rng.uniform(0, 2 * kPi))});
  }
  const SphericalGraph graph = spherical_graph_from_series(surf.R, surf.series);
  const std::function<std::vector<Cell>(const ChartPoint&)> inputs = [](const ChartPoint& p) {
    return std::vector<Cell>{p.theta[0], p.theta.size() > 1 ? p.theta[1] : 0.0};
  };
  const std::function<Outcome(const ChartPoint&)> op = [&](const ChartPoint& p) {
    const MeanCurvature mc = mean_curvature(surf.patch, p.theta);
    double ref = 0;
    if (surf.kind == "sphere")
      ref = -(surf.N - 1) / surf.R;
    else if (surf.kind == "spherical_graph")
      ref = spherical_graph_mean_curvature(graph, p.theta[1], p.theta[0]);
    else
      ref = graph_curvature_closed_form(surf.h_series, p.theta, mc.n[2]);
    const double res = std::max(std::abs(mc.H_forms - ref), std::abs(mc.H_laplace - ref));
    Outcome o;
    o.values = {mc.H_forms, ref, res};
    o.status = res <= tol ? Status::ok : Status::fail;
    return o;
  };
  r.records = sweep(pts, inputs, op, 3, opt.threads);

  if (!eps.empty()) {
    // <H n_t, n_t> on R + eps rho against -(N-1)/R + eps B rho
    const double R = surf.R;
    const std::vector<Vec> probes{vec2(0.3, 0.0), vec2(0.9, 1.0), vec2(1.4, 2.0), vec2(2.2, 4.0),
                                  vec2(0.7, 5.5), vec2(1.9, 3.1), vec2(2.7, 0.4), vec2(1.1, 2.6)};
    std::vector<double> err;
    json lin = json::array();
    for (double e : eps) {
      HarmonicSeries scaled = surf.series;
      for (auto& t : scaled.terms) t.coef *= e;
      const SurfacePatch p = spherical_graph_patch(spherical_graph_from_series(R, scaled));
      double worst = 0;
      for (const Vec& th : probes) {
        const double x = std::sin(th[0]) * std::cos(th[1]), y = std::sin(th[0]) * std::sin(th[1]),
                     z = std::cos(th[0]);
        double Brho = 0;
        for (const auto& t : scaled.terms) Brho += t.coef * operator_B_eigenvalue(t.l, 3, R) * real_sph_harm(t.l, t.m, x, y, z);
        worst = std::max(worst, std::abs(mean_curvature(p, th).H_forms - (-2.0 / R + Brho)));
      }
      err.push_back(worst);
      lin.push_back({{"eps", e}, {"remainder", worst}});
    }
    r.data["linearization"] = lin;
    r.checks.push_back(make_check("linearization_slope", min_slope(err, eps), ">=", slope_min));
  }
  r.finalize();
  return r;
}

// ---------------- transport-check ----------------

Report transport_check(const json& config, const RunOptions& opt) {
  ConfigReader c(config);
  c.has("task");
  const LoadedFlow lf = load_flow(c.has("flow") ? c.raw("flow") : json("builtin:dilation"));
  const int N = lf.flow.N;
  std::vector<double> dts = c.numbers("dt_list", {1e-1, 5e-2, 2.5e-2, 1.25e-2});
  require_sorted_decreasing(dts, "dt_list");
  std::vector<double> yv = c.numbers("y", {0.3, -0.4, 0.8});
  if (int(yv.size()) < N) throw ConfigError("y", "key 'y' needs N entries");
  yv.resize(N);
  const double t = c.number("t", 0.4);
  const double order_min = c.positive("order_min", 1.9);
  const double analytic_tol = c.positive("analytic_tol", 1e-12);
  const bool area = c.boolean("area_check", true);
  const double area_tol = c.positive("area_tol", 1e-8);
  c.finish();

  json resolved = {{"flow", lf.resolved},      {"dt_list", dts},       {"y", yv},
                   {"t", t},                   {"order_min", order_min}, {"analytic_tol", analytic_tol},
                   {"area_check", area},       {"area_tol", area_tol}};
  Report r = start_report("transport-check", resolved, 0);
  r.columns = {"dt", "fd_error", "order"};
  r.metrics = {"fd_error"};

  const Vec y = Eigen::Map<const Vec>(yv.data(), N);
  const ReynoldsReport rep = reynolds_transport_check(lf.flow, y, t, dts);
  for (std::size_t k = 0; k < rep.records.size(); ++k) {
    Record rec;
    const double order = k == 0 ? std::numeric_limits<double>::quiet_NaN()
                                : slope(rep.records[k - 1].fd_error, rep.records[k].fd_error, rep.records[k - 1].dt,
                                        rep.records[k].dt);
    rec.cells = {rep.records[k].dt, rep.records[k].fd_error, order};
    r.records.push_back(rec);
  }
  r.data["J"] = rep.J;
  r.data["orders_measured"] = rep.orders_measured;
  r.checks.push_back(make_check("analytic_residual", rep.analytic_residual, "<=", analytic_tol));
  if (rep.orders_measured > 0) {
    r.checks.push_back(make_check("min_order", rep.min_order, ">=", order_min));
  } else {
    double worst = 0;
    for (const auto& x : rep.records) worst = std::max(worst, x.fd_error);
    r.checks.push_back(make_check("fd_error_below_noise", worst, "<=", 1e3 * 2.2e-16 * std::max(1.0, std::abs(rep.J)) / dts.back()));
  }
  if (area) {
    json a = json::array();
    const std::pair<int, double> cases[] = {{3, 2.0}, {2, 1.5}};
    double worst = 0;
    for (const auto& [n, R0] : cases) {
      const AreaDerivative ad = area_derivative_check(n, R0, 1.0, 0.0);
      worst = std::max(worst, ad.residual);
      a.push_back({{"N", n},
                   {"R", R0},
                   {"fd_rate", ad.fd_rate},
                   {"first_variation", ad.first_variation},
                   {"curvature_form", ad.curvature_form},
                   {"closed_form", ad.closed_form}});
    }
    r.data["area_derivative"] = a;
    r.checks.push_back(make_check("area_derivative_residual", worst, "<=", area_tol));
  }
  (void)opt;
  r.finalize();
  return r;
}

// ---------------- ball-spectra ----------------

Report ball_spectra(const json& config, const RunOptions& opt) {
  ConfigReader c(config);
  c.has("task");
  const double R = c.positive("R", 1.0);
  const long long lmax = c.integer("lmax", 8);
  if (lmax < 2 || lmax > 40) throw ConfigError("lmax", "key 'lmax' must lie in [2, 40]");
  const long long n_samples = c.integer("n_samples", 10);
  if (n_samples < 1) throw ConfigError("n_samples", "key 'n_samples' must be >= 1");
  const std::uint64_t seed = c.seed("seed", 0);
  const double tol_eig = c.positive("tol_eigen", 1e-8);
  const double tol_kernel = c.positive("tol_kernel", 1e-10);
  const double tol_gap = c.positive("tol_gap", 1e-10);
  const double tol_gram = c.positive("tol_gram", 1e-8);
  c.finish();

  json resolved = {{"R", R},         {"lmax", lmax},           {"n_samples", n_samples}, {"seed", seed},
                   {"tol_eigen", tol_eig}, {"tol_kernel", tol_kernel}, {"tol_gap", tol_gap}, {"tol_gram", tol_gram}};
  Report r = start_report("ball-spectra", resolved, seed);
  r.columns = {"l", "laplace_eigenvalue", "B_eigenvalue", "residual"};
  r.metrics = {"residual"};

  const SurfacePatch s = sphere_patch(R);
  std::vector<int> ls;
  for (int l = 0; l <= lmax; ++l) ls.push_back(l);
  const std::function<std::vector<Cell>(const int&)> inputs = [&](const int& l) {
    return std::vector<Cell>{(long long)l};
  };
  // R^2 max |Delta Y_lm + l(l+1)/R^2 Y_lm| over m and sampled points
  const std::function<Outcome(const int&)> op = [&](const int& l) {
    const double ev = sphere_laplacian_eigenvalue(l, 3, R);
    double worst = 0;
    for (int m = -l; m <= l; ++m) {
      auto f = [l, m](const J2& t, const J2& p) { return real_sph_harm(l, m, sin(t) * cos(p), sin(t) * sin(p), cos(t)); };
      for (long long k = 0; k < n_samples; ++k) {
        CounterRng rng(seed, (std::uint64_t(l) << 40) | (std::uint64_t(m + l) << 20) | std::uint64_t(k));
        const Vec th = vec2(rng.uniform(0.05, kPi - 0.05), rng.uniform(0, 2 * kPi));
        const double lb = laplace_beltrami(s, f, th).divergence_form;
        worst = std::max(worst, R * R * std::abs(lb - ev * f(J2(th[0]), J2(th[1])).v));
      }
    }
    Outcome o;
    o.values = {ev, operator_B_eigenvalue(l, 3, R), worst};
    o.status = worst <= tol_eig ? Status::ok : Status::fail;
    return o;
  };
  r.records = sweep(ls, inputs, op, 3, opt.threads);

  double kernel = 0;
  for (int i = 0; i < 3; ++i) {
    const auto f = restrict_ambient(s, [i](const std::vector<J2>& x) { return x[i]; });
    for (int k = 0; k < int(n_samples); ++k) {
      CounterRng rng(seed, 0xb0000ULL + std::uint64_t(3 * k + i));
      const Vec th = vec2(rng.uniform(0.05, kPi - 0.05), rng.uniform(0, 2 * kPi));
      kernel = std::max(kernel, std::abs(laplace_beltrami(s, f, th).divergence_form +
                                         2 / (R * R) * chart_derivs(s, th).x[i]));
    }
  }
  r.checks.push_back(make_check("B_kernel_x_i", kernel, "<=", tol_kernel));

  const SpectralGap gap = spectral_gap(R, int(lmax), 3);
  r.checks.push_back(make_check("gap_minus_4_over_R2", std::abs(gap.c - 4 / (R * R)), "<=", tol_gap));
  r.checks.push_back(make_check("gap_argmin_l_minus_2", std::abs(gap.argmin_l - 2), "<=", 0.0));
  r.data["spectral_gap"] = {{"c", gap.c}, {"argmin_l", gap.argmin_l}};

  SphericalExpansion mix;
  mix.R = R;
  CounterRng rng(seed, 0x4a11);
  for (int l = 2; l <= std::min<long long>(lmax, 6); ++l)
    for (int m = -l; m <= l; ++m) mix.coef[{l, m}] = rng.normal();
  const double rq = rayleigh_quotient_B(mix) / gap.c;
  r.checks.push_back(make_check("rayleigh_over_gap", rq, ">=", 1.0 - 1e-10));

  json rigid = json::array();
  for (int N : {2, 3}) {
    const BallQuadrature q = ball_quadrature(N, R, 8, 8, 16);
    const RigidBasis b = rigid_basis(R, N, q);
    const double gram = (b.gram - Mat::Identity(b.count(), b.count())).cwiseAbs().maxCoeff();
    const double c1 = std::sqrt((N + 2) / (2 * R * R * ball_volume(N, R)));
    r.checks.push_back(make_check("rigid_gram_N" + std::to_string(N), gram, "<=", tol_gram));
    r.checks.push_back(make_check("rigid_c1_N" + std::to_string(N), std::abs(b.c1 - c1) / c1, "<=", 1e-14));
    rigid.push_back({{"N", N}, {"count", b.count()}, {"c0", b.c0}, {"c1", b.c1}, {"labels", b.labels}});
  }
  r.data["rigid_basis"] = rigid;
  r.finalize();
  return r;
}

}  // namespace fbs
