#include "fbstokes/halfspace.hpp"
#include "fbstokes/rng.hpp"
#include "fbstokes/symbols.hpp"
#include "fbstokes/wholespace.hpp"
#include "task_util.hpp"

namespace fbs {

using namespace detail;

// ---------------- verify-symbols ----------------

namespace {

struct SymbolsConfig {
  SectorGrid grid;
  double e0_floor = 1e-3;
  double lambda1_margin = 2.0;
  double drift_tol = 0.05;
  bool refine = true;
  long long n_factorization = 10000;
  double factorization_tol = 1e-12;
  std::uint64_t seed = 0;
};

SymbolsConfig parse_symbols(const ConfigReader& c, json& resolved) {
  SymbolsConfig s;
  SectorGrid& g = s.grid;
  g.eps = c.number("sector_angle", kPi / 4);
  if (!(g.eps > 0 && g.eps < kPi / 2)) throw ConfigError("sector_angle", "key 'sector_angle' must lie in (0, pi/2)");
  g.lambda0 = c.positive("lambda0", 1.0);
  g.lambda_max = c.positive("lambda_max", 1e4);
  if (!(g.lambda_max >= g.lambda0)) throw ConfigError("lambda_max", "key 'lambda_max' must be >= lambda0");
  g.n_lambda = int(c.integer("n_lambda", 17));
  g.n_arg = int(c.integer("n_arg", 17));
  g.n_a = int(c.integer("n_a", 161));
  for (const char* k : {"n_lambda", "n_arg", "n_a"})
    if (c.integer(k, 1) < 1) throw ConfigError(k, std::string("key '") + k + "' must be >= 1");
  g.a_min = c.number("a_min", 1e-3);
  g.a_max = c.positive("a_max", 1e2);
  if (g.a_min < 0 || g.a_min > g.a_max) throw ConfigError("a_min", "key 'a_min' must lie in [0, a_max]");
  g.mus = c.numbers("mu", {0.5, 1.0, 2.0});
  if (g.mus.empty()) throw ConfigError("mu", "key 'mu' must not be empty");
  for (double m : g.mus)
    if (!(m > 0)) throw ConfigError("mu", "key 'mu' must hold positive values");
  g.sigma = c.number("sigma", 1.0);
  if (g.sigma < 0) throw ConfigError("sigma", "key 'sigma' must be >= 0");
  g.dim = int(c.integer("dim", 3));
  if (g.dim < 2 || g.dim > 3) throw ConfigError("dim", "key 'dim' must be 2 or 3");
  g.a_kappa = c.numbers("a_kappa", {});
  if (!g.a_kappa.empty() && int(g.a_kappa.size()) != g.dim - 1)
    throw ConfigError("a_kappa", "key 'a_kappa' must have dim - 1 entries");
  s.e0_floor = c.positive("e0_floor", s.e0_floor);
  s.drift_tol = c.positive("drift_tol", s.drift_tol);
  s.lambda1_margin = c.number("lambda1_margin", s.lambda1_margin);
  if (!(s.lambda1_margin >= 1)) throw ConfigError("lambda1_margin", "key 'lambda1_margin' must be >= 1");
  s.refine = c.boolean("refine", s.refine);
  s.n_factorization = c.integer("n_factorization", s.n_factorization);
  if (s.n_factorization < 0) throw ConfigError("n_factorization", "key 'n_factorization' must be >= 0");
  s.factorization_tol = c.positive("factorization_tol", s.factorization_tol);
  s.seed = c.seed("seed", 0);
  resolved = {{"sector_angle", g.eps},   {"lambda0", g.lambda0}, {"lambda_max", g.lambda_max},
              {"n_lambda", g.n_lambda},  {"n_arg", g.n_arg},     {"a_min", g.a_min},
              {"a_max", g.a_max},        {"n_a", g.n_a},         {"mu", g.mus},
              {"sigma", g.sigma},        {"dim", g.dim},         {"a_kappa", g.a_kappa},
              {"e0_floor", s.e0_floor},  {"drift_tol", s.drift_tol}, {"refine", s.refine},
              {"lambda1_margin", s.lambda1_margin},
              {"n_factorization", s.n_factorization}, {"factorization_tol", s.factorization_tol},
              {"seed", s.seed}};
  return s;
}

const SymbolKind kSymbols[] = {SymbolKind::re_B, SymbolKind::abs_B, SymbolKind::abs_D, SymbolKind::abs_E0};
const WeightKind kWeights[] = {WeightKind::sqrt_lambda_plus_A, WeightKind::sqrt_lambda_over_mu_plus_A,
                               WeightKind::sqrt_lambda_over_mu_plus_A_cubed, WeightKind::E0_weight};
const char* const kRatioCols[] = {"ReB_ratio", "absB_ratio", "absD_ratio", "absE0_ratio"};

Outcome symbol_ratios(const GridPoint& gp) {
  Outcome o;
  for (int k = 0; k < 4; ++k) {
    const double w = eval_weight(kWeights[k], gp.point, gp.freq);
    if (!(w > 0)) throw DomainError("normalizer not positive");
    o.values.push_back(eval_symbol(kSymbols[k], gp.point, gp.freq) / w);
  }
  return o;
}

json grid_point_json(const GridPoint& gp) {
  return {{"lambda", cjson(gp.point.lambda)}, {"mu", gp.point.mu}, {"A", gp.freq.A}};
}

}  // namespace

Report verify_symbols(const json& config, const RunOptions& opt) {
  ConfigReader c(config);
  c.has("task");
  json resolved;
  const SymbolsConfig s = parse_symbols(c, resolved);
  c.finish();

  Report r = start_report("verify-symbols", resolved, s.seed);
  r.columns = {"mu", "lambda_re", "lambda_im", "A"};
  for (const char* col : kRatioCols) r.columns.push_back(col);
  r.metrics.assign(std::begin(kRatioCols), std::end(kRatioCols));

  const std::vector<GridPoint> pts = expand_grid(s.grid);
  const std::function<std::vector<Cell>(const GridPoint&)> inputs = [](const GridPoint& gp) {
    return std::vector<Cell>{gp.point.mu, gp.point.lambda.real(), gp.point.lambda.imag(), gp.freq.A};
  };
  const std::function<Outcome(const GridPoint&)> op = symbol_ratios;
  r.records = sweep(pts, inputs, op, 4, opt.threads);

  std::vector<double> mins, maxs;
  json extremes = json::object();
  for (int k = 0; k < 4; ++k) {
    const auto v = column_values(r, kRatioCols[k]);
    mins.push_back(vmin(v));
    maxs.push_back(vmax(v));
    const std::size_t c_idx = r.column(kRatioCols[k]);
    std::size_t amin = 0, amax = 0;
    for (std::size_t i = 0; i < r.records.size(); ++i) {
      if (r.records[i].status == Status::error) continue;
      const double x = std::get<double>(r.records[i].cells[c_idx]);
      if (x == mins[k] && amin == 0) amin = i + 1;
      if (x == maxs[k] && amax == 0) amax = i + 1;
    }
    extremes[kRatioCols[k]] = {{"min", mins[k]},
                               {"max", maxs[k]},
                               {"argmin", amin ? grid_point_json(pts[amin - 1]) : json()},
                               {"argmax", amax ? grid_point_json(pts[amax - 1]) : json()}};
  }
  r.data["extremes"] = extremes;
  r.checks.push_back(make_check("min_ReB_ratio", mins[0], ">", 0.0));
  r.checks.push_back(make_check("max_absB_ratio", maxs[1], "<=", 1.0 + 1e-12));
  r.checks.push_back(make_check("max_absD_ratio", maxs[2], "<=", 6.0));

  // E0 bound on the sector beyond the zeros of E0
  const double lambda1 = e0_zero_radius(s.grid.mus, s.grid.sigma, s.grid.eps);
  SectorGrid eg = s.grid;
  eg.a_kappa.clear();
  eg.lambda0 = std::max(s.grid.lambda0, s.lambda1_margin * lambda1);
  eg.lambda_max = std::max(s.grid.lambda_max, eg.lambda0);
  const std::function<Outcome(const GridPoint&)> e0_op = [](const GridPoint& gp) {
    const double w = eval_weight(WeightKind::E0_weight, gp.point, gp.freq);
    if (!(w > 0)) throw DomainError("normalizer not positive");
    return Outcome{{eval_symbol(SymbolKind::abs_E0, gp.point, gp.freq) / w}, Status::ok};
  };
  auto grid_min = [&](const SectorGrid& g) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& rec : sweep(expand_grid(g), std::function<std::vector<Cell>(const GridPoint&)>{}, e0_op, 1,
                                 opt.threads))
      if (rec.status != Status::error) m = std::min(m, std::get<double>(rec.cells[0]));
    return m;
  };
  const double e0_min = grid_min(eg);
  r.checks.push_back(make_check("lambda1", lambda1, ">=", 0.0));
  r.checks.push_back(make_check("min_absE0_ratio_beyond_lambda1", e0_min, ">", 0.0));
  json e0 = {{"lambda1", lambda1},
             {"margin", s.lambda1_margin},
             {"lambda0_used", eg.lambda0},
             {"lambda_max_used", eg.lambda_max},
             {"min", e0_min},
             {"min_on_base_grid", mins[3]}};

  if (s.refine) {
    const std::vector<GridPoint> fine = expand_grid(s.grid.refined());
    const auto recs = sweep(fine, std::function<std::vector<Cell>(const GridPoint&)>{}, op, 4, opt.threads);
    json drift = json::object();
    for (int k = 0; k < 3; ++k) {
      double m = std::numeric_limits<double>::infinity();
      for (const auto& rec : recs)
        if (rec.status != Status::error) m = std::min(m, std::get<double>(rec.cells[k]));
      const double d = std::abs(m - mins[k]) / std::abs(mins[k]);
      drift[kRatioCols[k]] = {{"min_refined", m}, {"relative_drift", d}};
      r.checks.push_back(make_check(std::string("min_drift_") + kRatioCols[k], d, "<", s.drift_tol));
    }
    const double e0_fine = grid_min(eg.refined());
    const double d = std::abs(e0_fine - e0_min) / e0_min;
    e0["min_refined"] = e0_fine;
    e0["relative_drift"] = d;
    r.checks.push_back(make_check("min_drift_absE0_ratio_beyond_lambda1", d, "<", s.drift_tol));
    r.data["refined"] = {{"points", fine.size()}, {"drift", drift}};
  }
  r.data["E0"] = e0;

  if (s.n_factorization > 0) {
    // (A^2 + B^2)^2 - 4 A^3 B = (B - A) D(A, B) on random complex pairs
    double worst = 0;
    CounterRng rng(s.seed, 0xfac);
    for (long long k = 0; k < s.n_factorization; ++k) {
      const cplx A = rng.cnormal(), B = rng.cnormal();
      const cplx q = A * A + B * B;
      const cplx lhs = q * q - 4.0 * A * A * A * B;
      const double sc = std::pow(std::abs(A) + std::abs(B), 4);
      worst = std::max(worst, std::abs(lhs - (B - A) * compute_D(A, B)) / sc);
    }
    r.checks.push_back(make_check("factorization_residual", worst, "<=", s.factorization_tol));
  }

  try {
    const Lambda1Result l1 = find_lambda1(s.grid, s.e0_floor);
    r.data["lambda1_grid_bisection"] = {{"lambda1", l1.lambda1}, {"floor", s.e0_floor}, {"c_min", l1.bound.c_min},
                         {"iterations", l1.iterations}};
  } catch (const Error& e) {
    r.data["lambda1_grid_bisection"] = {{"error", e.kind + ": " + e.what()}};
  }
  r.finalize();
  return r;
}

// ---------------- solve-halfspace ----------------

namespace {

struct Triple {
  ResolventPoint point;
  std::vector<double> xi;
  std::vector<cplx> data;  // h_hat (Neumann) or d_hat (tension)
};

std::vector<cplx> complex_list(const json& j, const std::string& key) {
  if (!j.is_array()) throw ConfigError(key, "key '" + key + "' must be an array of [re, im] pairs");
  std::vector<cplx> out;
  for (const auto& e : j) {
    if (e.is_number()) {
      out.push_back(e.get<double>());
      continue;
    }
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw ConfigError(key, "key '" + key + "' must hold [re, im] pairs");
    out.push_back({e[0].get<double>(), e[1].get<double>()});
  }
  return out;
}

json complex_list_json(const std::vector<cplx>& v) {
  json a = json::array();
  for (cplx z : v) a.push_back(cjson(z));
  return a;
}

}  // namespace

Report solve_halfspace(const json& config, const RunOptions& opt) {
  ConfigReader c(config);
  c.has("task");
  const std::string model = c.string("model", "neumann");
  if (model != "neumann" && model != "tension") throw ConfigError("model", "key 'model' must be neumann or tension");
  const bool tension = model == "tension";
  ResolventPoint base;
  base.lambda = c.complex("lambda", {1.0, 1.0});
  base.mu = c.positive("mu", 1.0);
  base.sigma = c.number("sigma", tension ? 1.0 : 0.0);
  if (base.sigma < 0) throw ConfigError("sigma", "key 'sigma' must be >= 0");
  base.sector_angle = c.number("sector_angle", kPi / 4);
  base.lambda0 = c.positive("lambda0", 1.0);
  std::vector<double> xi = c.numbers("xi", {1.0, 0.0});
  if (xi.empty() || xi.size() > 2) throw ConfigError("xi", "key 'xi' must have 1 or 2 entries (N = 2, 3)");
  const int N = int(xi.size()) + 1;
  base.a_kappa = c.numbers("a_kappa", {});
  if (!base.a_kappa.empty() && int(base.a_kappa.size()) != N - 1)
    throw ConfigError("a_kappa", "key 'a_kappa' must have as many entries as 'xi'");
  const std::uint64_t seed = c.seed("seed", 0);
  const double tol = c.positive("tol", 1e-9);
  const double tol_boundary = c.positive("tol_boundary", tension ? tol : 1e-10);
  const int n_points = int(c.integer("n_points", 32));
  if (n_points < 2) throw ConfigError("n_points", "key 'n_points' must be >= 2");
  const long long n_random = c.integer("n_random", 0);
  if (n_random < 0) throw ConfigError("n_random", "key 'n_random' must be >= 0");

  json data_resolved;
  std::vector<Triple> triples;
  if (n_random == 0) {
    if (!base.admissible()) throw ConfigError("lambda", "key 'lambda' lies outside the sector");
    Triple t{base, xi, {}};
    const json raw = c.has("data") ? c.raw("data") : json("random");
    if (raw.is_string() && raw.get<std::string>() == "random") {
      CounterRng rng(seed, 11);
      for (int k = 0; k < (tension ? 1 : N); ++k) t.data.push_back(rng.cnormal());
    } else {
      const json d = resolve_json_value(raw, "data");
      ConfigReader dr(d, "data.");
      if (tension) {
        t.data = {dr.complex("d_hat", 0.0)};
        if (!dr.has("d_hat")) throw ConfigError("data.d_hat", "missing required key 'data.d_hat'");
      } else {
        t.data = complex_list(dr.raw("h_hat"), "data.h_hat");
        if (int(t.data.size()) != N) throw ConfigError("data.h_hat", "key 'data.h_hat' must have N entries");
      }
      dr.finish();
    }
    data_resolved = complex_list_json(t.data);
    triples.push_back(t);
  } else {
    for (long long k = 0; k < n_random; ++k) {
      CounterRng rng(seed, 1000 + std::uint64_t(k));
      Triple t{base, {}, {}};
      const double amax = kPi - base.sector_angle;
      t.point.lambda = std::polar(base.lambda0 * std::exp(rng.uniform(0.0, std::log(1e3))), rng.uniform(-amax, amax));
      for (int j = 0; j < N - 1; ++j) t.xi.push_back(3.0 * rng.normal());
      for (int j = 0; j < (tension ? 1 : N); ++j) t.data.push_back(rng.cnormal());
      triples.push_back(t);
    }
    data_resolved = "random";
  }
  c.finish();

  json resolved = {{"model", model},       {"lambda", cjson(base.lambda)}, {"mu", base.mu},
                   {"sigma", base.sigma},  {"sector_angle", base.sector_angle}, {"lambda0", base.lambda0},
                   {"xi", xi},             {"a_kappa", base.a_kappa},  {"seed", seed},
                   {"tol", tol},           {"tol_boundary", tol_boundary}, {"n_points", n_points},
                   {"n_random", n_random}, {"data", data_resolved}};
  Report r = start_report("solve-halfspace", resolved, seed);
  r.columns = {"lambda_re", "lambda_im", "xi_1", "xi_2", "momentum", "divergence", "boundary_tangential",
               "boundary_normal", "kinematic"};
  r.metrics = {"momentum", "divergence", "boundary_tangential", "boundary_normal", "kinematic"};

  const std::function<std::vector<Cell>(const Triple&)> inputs = [](const Triple& t) {
    return std::vector<Cell>{t.point.lambda.real(), t.point.lambda.imag(), t.xi[0], t.xi.size() > 1 ? t.xi[1] : 0.0};
  };
  const std::function<Outcome(const Triple&)> op = [&](const Triple& t) {
    const TangentialFrequency f(t.xi);
    ResidualSet res;
    if (tension) {
      const FourierProfile p = solve_surface_tension_model(t.point, f, t.data[0]);
      res = tension_residuals(p, t.data[0], profile_sample_points(p, n_points));
    } else {
      const FourierProfile p = solve_neumann_model(t.point, f, t.data);
      std::vector<cplx> g;
      for (cplx h : t.data) g.push_back(-h);
      res = neumann_residuals(p, g, profile_sample_points(p, n_points));
    }
    Outcome o;
    o.values = {res.momentum, res.divergence, res.boundary_tangential, res.boundary_normal, res.kinematic};
    o.status = res.max_interior() <= tol && res.max_boundary() <= tol_boundary ? Status::ok : Status::fail;
    return o;
  };
  r.records = sweep(triples, inputs, op, 5, opt.threads);

  if (n_random == 0 && r.records[0].status != Status::error) {
    const Triple& t = triples[0];
    const TangentialFrequency f(t.xi);
    const FourierProfile p =
        tension ? solve_surface_tension_model(t.point, f, t.data[0]) : solve_neumann_model(t.point, f, t.data);
    json prof = {{"B", cjson(p.B)},
                 {"coef_expA", complex_list_json(p.coef_expA)},
                 {"coef_expB", complex_list_json(p.coef_expB)},
                 {"coef_M", complex_list_json(p.coef_M)},
                 {"divergence_coefficient_defect", divergence_coefficient_defect(p)}};
    if (p.h_hat) prof["h_hat"] = cjson(*p.h_hat);
    r.data["profile"] = prof;
  }
  if (tension) {
    double worst = 0;
    for (std::size_t k = 0; k < triples.size(); ++k) {
      if (r.records[k].status == Status::error) continue;
      const Triple& t = triples[k];
      const TangentialFrequency f(t.xi);
      const FourierProfile p = solve_surface_tension_model(t.point, f, t.data[0]);
      const cplx expected = t.point.mu * compute_D(f.A, p.B) / compute_E_kappa(t.point, f) * t.data[0];
      worst = std::max(worst, std::abs(*p.h_hat - expected) / std::max(1e-300, std::abs(expected)));
    }
    r.checks.push_back(make_check("h_hat_symbol_relation", worst, "<=", 1e-12));
  }
  r.finalize();
  return r;
}

// ---------------- wholespace-check ----------------

namespace {

FourierField seeded_field(std::uint64_t seed, std::uint64_t field, int n) {
  CounterRng rng(seed, 0x5eed0000ULL + field);
  CVec a(n), c(n);
  Vec b(n);
  for (int k = 0; k < n; ++k) {
    a[k] = rng.cnormal();
    c[k] = rng.cnormal();
    b[k] = rng.normal();
  }
  return [=](const Vec& xi) -> CVec { return a + c * cplx(b.dot(xi)); };
}

struct XiPoint {
  std::size_t field = 0, sample = 0;
  Vec xi;
};

}  // namespace

Report wholespace_check(const json& config, const RunOptions& opt) {
  ConfigReader c(config);
  c.has("task");
  ResolventPoint p;
  p.lambda = c.complex("lambda", {2.0, 3.0});
  p.mu = c.positive("mu", 1.0);
  const long long n_samples = c.integer("n_samples", 1000);
  const long long n_fields = c.integer("n_fields", 10);
  if (n_samples < 0) throw ConfigError("n_samples", "key 'n_samples' must be >= 0");
  if (n_fields < 1) throw ConfigError("n_fields", "key 'n_fields' must be >= 1");
  const int dim = int(c.integer("dim", 3));
  if (dim < 2 || dim > 3) throw ConfigError("dim", "key 'dim' must be 2 or 3");
  const std::uint64_t seed = c.seed("seed", 0);
  const double tol = c.positive("tol", 1e-10);
  c.finish();
  if (p.lambda == cplx(0.0)) throw ConfigError("lambda", "key 'lambda' must be nonzero");

  json resolved = {{"lambda", cjson(p.lambda)}, {"mu", p.mu},   {"n_samples", n_samples}, {"n_fields", n_fields},
                   {"dim", dim},                {"seed", seed}, {"tol", tol}};
  Report r = start_report("wholespace-check", resolved, seed);
  r.columns = {"field", "sample", "xi_norm", "momentum", "divergence"};
  r.metrics = {"momentum", "divergence"};

  std::vector<WholeSpaceSolution> sols;
  for (long long f = 0; f < n_fields; ++f) sols.push_back(solve_wholespace(p, seeded_field(seed, f, dim)));
  std::vector<XiPoint> pts;
  for (long long f = 0; f < n_fields; ++f)
    for (long long k = 0; k < n_samples; ++k) {
      CounterRng rng(seed, (std::uint64_t(f + 1) << 32) | std::uint64_t(k));
      Vec xi(dim);
      for (int j = 0; j < dim; ++j) xi[j] = rng.normal() * std::exp(rng.uniform(-2, 3));
      pts.push_back({std::size_t(f), std::size_t(k), xi});
    }
  const std::function<std::vector<Cell>(const XiPoint&)> inputs = [](const XiPoint& q) {
    return std::vector<Cell>{(long long)q.field, (long long)q.sample, q.xi.norm()};
  };
  const std::function<Outcome(const XiPoint&)> op = [&](const XiPoint& q) {
    const WholeSpaceSolution& s = sols[q.field];
    Outcome o;
    const double m = s.momentum_residual(q.xi), d = s.divergence_residual(q.xi);
    o.values = {m, d};
    o.status = m <= tol && d <= tol ? Status::ok : Status::fail;
    return o;
  };
  r.records = sweep(pts, inputs, op, 2, opt.threads);
  r.finalize();
  return r;
}

}  // namespace fbs
