#include "fbstokes/nonlinear.hpp"
#include "fbstokes/poly_oracle.hpp"
#include "task_util.hpp"

namespace fbs {

using namespace detail;

std::vector<std::string> audit_cases() {
  return {"interior", "flux", "symbolic", "physical", "partial-lagrange", "sphere"};
}

namespace {

Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

VecFieldST scaled(VecFieldST f, double s) {
  return [f, s](const std::vector<J4>& y, const J4& t) {
    std::vector<J4> r = f(y, t);
    for (auto& c : r) c = s * c;
    return r;
  };
}

FlowState interior_state(std::uint64_t seed, double psi_amp) {
  CounterRng rng(seed, 1);
  FlowState s;
  s.N = 3;
  s.u = sine_field(3, random_sine_modes(3, rng, 2, 1.0));
  CounterRng prng(seed, 3);
  s.psi.N = 3;
  s.psi.delta_bound = 0.9;
  s.psi.psi = sine_field(3, random_sine_modes(3, prng, 2, psi_amp));
  s.mu = 0.7;
  s.t = 0.3;
  return s;
}

double max_abs(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

struct AuditConfig {
  std::string name;
  std::vector<double> eps;
  std::uint64_t seed = 1;
  double slope_min = 1.9;
  long long n_cases = 12;
};

void interior_case(const AuditConfig& a, Report& r, int threads) {
  const FlowState base = interior_state(a.seed, 0.3);
  const Vec y = vec3(-0.2, 0.5, 0.3);
  r.columns = {"eps", "f_norm", "g_abs", "gvec_norm"};
  r.metrics = {"f_norm", "g_abs", "gvec_norm"};
  const std::function<std::vector<Cell>(const double&)> inputs = [](const double& e) { return std::vector<Cell>{e}; };
  const std::function<Outcome(const double&)> op = [&](const double& e) {
    FlowState s = base;
    s.u = scaled(base.u, e);
    s.psi.psi = scaled(base.psi.psi, e);
    const InteriorTerms t = assemble_interior(s, y);
    return Outcome{{t.f.norm(), std::abs(t.g), t.gvec.norm()}, Status::ok};
  };
  r.records = sweep(a.eps, inputs, op, 3, threads);
  std::vector<double> ef = column_values(r, "f_norm"), eg = column_values(r, "g_abs"), ev = column_values(r, "gvec_norm");
  r.checks.push_back(make_check("slope_f", min_slope(ef, a.eps), ">=", a.slope_min));
  r.checks.push_back(make_check("slope_g", min_slope(eg, a.eps), ">=", a.slope_min));
  r.checks.push_back(make_check("slope_gvec", min_slope(ev, a.eps), ">=", a.slope_min));

  FlowState z = base;
  z.psi.psi = zero_field(3);
  const FieldSample u = sample_field(z.u, y, z.t);
  const InteriorTerms t0 = assemble_interior(z, y);
  r.checks.push_back(make_check("f_minus_convection_at_psi_0", max_abs(t0.f + u.grad * u.v), "<=", 0.0));
  r.checks.push_back(make_check("g_at_psi_0", std::abs(t0.g), "<=", 0.0));
  r.checks.push_back(make_check("gvec_at_psi_0", max_abs(t0.gvec), "<=", 0.0));
}

void flux_case(const AuditConfig& a, Report& r, int threads) {
  const FlowState s = interior_state(a.seed + 4, 0.15);
  const Vec y = vec3(0.3, 0.1, -0.5);
  r.columns = {"h", "g", "div_gvec", "gap", "printed_gap"};
  r.metrics = {"gap", "printed_gap"};
  const std::function<std::vector<Cell>(const double&)> inputs = [](const double& h) { return std::vector<Cell>{h}; };
  const std::function<Outcome(const double&)> op = [&](const double& h) {
    const FluxCheck f = flux_divergence_check(s, y, h);
    return Outcome{{f.g, f.div_gvec, f.gap, f.printed_gap}, Status::ok};
  };
  r.records = sweep(a.eps, inputs, op, 4, threads);
  r.checks.push_back(make_check("slope_div_gvec_minus_g", min_slope(column_values(r, "gap"), a.eps), ">=", a.slope_min));
}

struct SymbolicPoint {
  int N = 3;
  std::uint64_t seed = 1;
};

void symbolic_case(const AuditConfig& a, Report& r, int threads) {
  r.columns = {"N", "seed", "variant", "f_equal", "g_equal", "gvec_equal", "float_deviation"};
  r.metrics = {"float_deviation"};
  std::vector<SymbolicPoint> pts;
  for (int N : {2, 3})
    for (long long k = 0; k < a.n_cases; ++k) pts.push_back({N, a.seed + std::uint64_t(k)});
  const std::function<std::vector<Cell>(const SymbolicPoint&)> inputs = [](const SymbolicPoint& p) {
    return std::vector<Cell>{(long long)p.N, (long long)p.seed,
                             std::string(p.seed % 3 == 0 ? "partial_lagrange" : "hanzawa")};
  };
  const std::function<Outcome(const SymbolicPoint&)> op = [](const SymbolicPoint& p) {
    PolyCase c = random_poly_case(p.N, p.seed);
    if (p.seed % 3 == 0) {
      c.variant = FVariant::partial_lagrange;
      c.kappa = Rational(1, 3);
      c.density = Rational(5, 4);
    }
    const OracleTerms o = poly_oracle(c);
    const KernelTerms<Rational> k = evaluate_kernel(poly_point_data(c));
    bool fe = true, ge = o.g == k.g, ve = true;
    for (int i = 0; i < p.N; ++i) {
      fe = fe && o.f[i] == k.f[i];
      ve = ve && o.gvec[i] == k.gvec[i];
    }
    // floating-point assembler through jets on the same polynomials (Hanzawa only)
    double dev = 0;
    if (c.variant == FVariant::hanzawa) {
      FlowState s;
      s.N = p.N;
      s.u = poly_field(c.u);
      s.psi.N = p.N;
      s.psi.delta_bound = 0.99;
      s.psi.psi = poly_field(c.psi);
      s.mu = c.mu.convert_to<double>();
      s.density = c.density.convert_to<double>();
      s.t = c.at[3].convert_to<double>();
      Vec y(p.N);
      for (int i = 0; i < p.N; ++i) y[i] = c.at[i].convert_to<double>();
      const InteriorTerms t = assemble_interior(s, y);
      double scale = 1;
      for (int i = 0; i < p.N; ++i) scale = std::max(scale, std::abs(o.f[i].convert_to<double>()));
      for (int i = 0; i < p.N; ++i)
        dev = std::max({dev, std::abs(t.f[i] - o.f[i].convert_to<double>()) / scale,
                        std::abs(t.gvec[i] - o.gvec[i].convert_to<double>())});
      dev = std::max(dev, std::abs(t.g - o.g.convert_to<double>()));
    }
    Outcome out{{(long long)fe, (long long)ge, (long long)ve, dev}, Status::ok};
    if (!(fe && ge && ve) || dev > 1e-12) out.status = Status::fail;
    return out;
  };
  r.records = sweep(pts, inputs, op, 4, threads);
}

void physical_case(const AuditConfig& a, Report& r, int threads) {
  r.columns = {"seed", "residual"};
  r.metrics = {"residual"};
  std::vector<std::uint64_t> seeds;
  for (long long k = 0; k < a.n_cases; ++k) seeds.push_back(a.seed + std::uint64_t(k));
  const std::function<std::vector<Cell>(const std::uint64_t&)> inputs = [](const std::uint64_t& s) {
    return std::vector<Cell>{(long long)s};
  };
  const std::function<Outcome(const std::uint64_t&)> op = [](const std::uint64_t& seed) {
    CounterRng rng(seed, 9);
    const VecFieldST v = sine_field(3, random_sine_modes(3, rng, 2, 1.0));
    CounterRng prng(seed + 100, 3);
    DisplacementField psi;
    psi.delta_bound = 0.9;
    psi.psi = sine_field(3, random_sine_modes(3, prng, 2, 0.15));
    const Vec y = vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    const MomentumOracle o = momentum_oracle(v, psi, 0.8, y, 0.25);
    return Outcome{{o.residual}, o.residual <= 1e-12 ? Status::ok : Status::fail};
  };
  r.records = sweep(seeds, inputs, op, 1, threads);
}

void partial_lagrange_case(const AuditConfig& a, Report& r, int threads) {
  CounterRng rng(a.seed + 7, 1);
  const VecFieldST u = sine_field(3, random_sine_modes(3, rng, 2, 0.6, 1.5, false));
  const Cutoff kappa{0.5};
  FlowState s;
  s.u = u;
  s.t = 0.2;
  s.kappa = kappa;
  s.density = 1.3;
  s.psi.delta_bound = 0.9;
  s.psi.psi = [u, kappa](const std::vector<J4>& y, const J4& t) {
    std::vector<J4> v = u(y, t);
    const J4 k = kappa.eval(y);
    for (auto& c : v) c = t * k * c;
    return v;
  };
  r.columns = {"y_1", "y_2", "y_3", "kappa", "variant_gap"};
  r.metrics = {"variant_gap"};
  std::vector<Vec> ys;
  for (long long k = 0; k < a.n_cases; ++k) {
    CounterRng pr(a.seed, 0x91000ULL + std::uint64_t(k));
    ys.push_back(vec3(pr.uniform(-0.8, 0.8), pr.uniform(-0.8, 0.8), pr.uniform(-0.8, 0.8)));
  }
  const std::function<std::vector<Cell>(const Vec&)> inputs = [&](const Vec& y) {
    return std::vector<Cell>{y[0], y[1], y[2], kappa.eval(std::vector<double>{y[0], y[1], y[2]})};
  };
  const std::function<Outcome(const Vec&)> op = [&](const Vec& y) {
    FlowState h = s, p = s;
    h.variant = FVariant::hanzawa;
    p.variant = FVariant::partial_lagrange;
    const double gap = max_abs(assemble_f(h, y) - assemble_f(p, y));
    return Outcome{{gap}, gap <= 1e-13 ? Status::ok : Status::fail};
  };
  r.records = sweep(ys, inputs, op, 1, threads);

  FlowState z = interior_state(a.seed, 0.0);
  z.psi.psi = zero_field(3);
  z.variant = FVariant::partial_lagrange;
  z.kappa = Cutoff{2.0};
  r.checks.push_back(make_check("f_at_kappa_1_psi_0", max_abs(assemble_f(z, vec3(0.2, -0.1, 0.4))), "<=", 0.0));
}

void sphere_case(const AuditConfig& a, Report& r, int threads) {
  const double R = 1.5;
  Vec th(2);
  th << 0.9, 0.4;
  const GeometryAtPoint geo = compute_geometry(sphere_patch(R, 3), th);
  CounterRng rng(a.seed + 11, 4);
  const VecFieldST U = sine_field(3, random_sine_modes(3, rng, 2, 1.0));
  const HarmonicSeries hs{{{2, 0, 1.0}, {3, 2, 0.4}, {1, -1, 0.3}}};
  auto rho_eps = [&](double e) {
    return solid_harmonic_extension(hs, R, [e](const J4& t) { return e * (1.0 + 0.5 * t); });
  };
  r.columns = {"eps", "hprime_remainder", "hprime_normal", "hN_curvature", "hN_viscous_remainder", "d_abs"};
  r.metrics = {"hprime_remainder", "hprime_normal", "hN_curvature", "hN_viscous_remainder", "d_abs"};
  const std::function<std::vector<Cell>(const double&)> inputs = [](const double& e) { return std::vector<Cell>{e}; };
  const std::function<Outcome(const double&)> op = [&](const double& e) {
    const FlowState s = sphere_flow_state(U, rho_eps(e), R, 0.9, 1.2, 0.2);
    const Vec hp = assemble_hprime(s, geo);
    const NormalStress h = assemble_hN(s, geo);
    const FlowState sd = sphere_flow_state(scaled(U, e), rho_eps(e), R, 1.0, 1.0, 0.2);
    Outcome o{{(hp - hprime_linear_part(s, geo)).norm(), std::abs(hp.dot(geo.x / R)), std::abs(h.curvature),
               std::abs(h.viscous - hN_viscous_linear_part(s, geo)), std::abs(assemble_d(sd, geo, false).d)},
              Status::ok};
    if (std::get<double>(o.values[1]) > 1e-10) o.status = Status::fail;
    return o;
  };
  r.records = sweep(a.eps, inputs, op, 5, threads);
  for (const char* col : {"hprime_remainder", "hN_curvature", "hN_viscous_remainder", "d_abs"})
    r.checks.push_back(make_check(std::string("slope_") + col, min_slope(column_values(r, col), a.eps), ">=", a.slope_min));

  const FlowState s0 = sphere_flow_state(U, rho_eps(0.0), R, 0.9, 1.2, 0.2);
  const NormalStress h0 = assemble_hN(s0, geo);
  const double exact_zero =
      std::max({assemble_hprime(s0, geo).norm(), std::abs(h0.viscous), std::abs(assemble_d(s0, geo, false).d)});
  r.checks.push_back(make_check("boundary_terms_at_rho_0", exact_zero, "<=", 0.0));
  r.checks.push_back(make_check("hN_curvature_at_rho_0", std::abs(h0.curvature), "<=", 1e-12));
}

}  // namespace

Report nonlinear_audit(const json& config, const RunOptions& opt) {
  ConfigReader c(config);
  c.has("task");
  AuditConfig a;
  a.name = c.string("case", "interior");
  const auto names = audit_cases();
  if (std::find(names.begin(), names.end(), a.name) == names.end()) {
    std::string list;
    for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
    throw ConfigError("case", "key 'case' must be one of " + list);
  }
  const bool fd = a.name == "flux";
  a.eps = c.numbers("eps_list", fd ? std::vector<double>{2e-2, 1e-2, 5e-3} : std::vector<double>{1e-1, 1e-2, 1e-3, 1e-4});
  require_sorted_decreasing(a.eps, "eps_list");
  a.seed = c.seed("seed", 1);
  a.slope_min = c.positive("slope_min", 1.9);
  a.n_cases = c.integer("n_cases", a.name == "physical" ? 5 : 12);
  if (a.n_cases < 1) throw ConfigError("n_cases", "key 'n_cases' must be >= 1");
  c.finish();

  json resolved = {{"case", a.name}, {"eps_list", a.eps}, {"seed", a.seed}, {"slope_min", a.slope_min},
                   {"n_cases", a.n_cases}};
  Report r = start_report("nonlinear-audit", resolved, a.seed);
  if (a.name == "interior")
    interior_case(a, r, opt.threads);
  else if (a.name == "flux")
    flux_case(a, r, opt.threads);
  else if (a.name == "symbolic")
    symbolic_case(a, r, opt.threads);
  else if (a.name == "physical")
    physical_case(a, r, opt.threads);
  else if (a.name == "partial-lagrange")
    partial_lagrange_case(a, r, opt.threads);
  else
    sphere_case(a, r, opt.threads);
  r.finalize();
  return r;
}

}  // namespace fbs
