// Acceptance run: one PASS/FAIL line per criterion.
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "fbstokes/fields.hpp"
#include "fbstokes/harmonics.hpp"
#include "fbstokes/rng.hpp"
#include "fbstokes/tasks.hpp"
#include "fbstokes/transforms.hpp"

using namespace fbs;

namespace {

struct Line {
  bool pass = true;
  std::vector<std::string> notes;

  void add(bool ok, const std::string& note) {
    pass = pass && ok;
    notes.push_back(note + (ok ? "" : " [FAIL]"));
  }
  void add(const Report& r, const std::string& label) {
    std::ostringstream os;
    os << label << ": " << (r.pass ? "ok" : "fail") << " (" << r.records.size() << " records";
    if (r.count(Status::fail) + r.count(Status::error) > 0)
      os << ", " << r.count(Status::fail) << " failed, " << r.count(Status::error) << " errors";
    for (const auto& c : r.checks)
      if (!c.pass) os << "; " << c.name << " = " << format_double(c.value) << " not " << c.relation << ' ' << format_double(c.bound);
    os << ")";
    pass = pass && r.pass;
    notes.push_back(os.str());
  }
};

const Check* find_check(const Report& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double column_max(const Report& r, const std::string& col) {
  for (const auto& s : r.summary)
    if (s.column == col) return s.max;
  return NAN;
}

Report run(json config, int threads = 1) { return run_task(config, RunOptions{threads}); }

int g_failed = 0;

void emit(int id, const std::string& title, const Line& l) {
  std::printf("criterion %2d %-34s %s\n", id, title.c_str(), l.pass ? "PASS" : "FAIL");
  for (const auto& n : l.notes) std::printf("    %s\n", n.c_str());
  if (!l.pass) ++g_failed;
}

Line check_names(const Report& r, const std::vector<std::string>& names) {
  Line l;
  for (const auto& n : names) {
    const Check* c = find_check(r, n);
    if (!c) {
      l.add(false, n + " missing");
      continue;
    }
    l.add(c->pass, n + " = " + sci(c->value) + " " + c->relation + " " + sci(c->bound));
  }
  return l;
}

}  // namespace

int main() {
  const Report symbols = run({{"task", "verify-symbols"}});

  emit(1, "D factorization", check_names(symbols, {"factorization_residual"}));

  {
    Line l;
    const Report r = run({{"task", "solve-halfspace"}, {"model", "neumann"}, {"n_random", 100}, {"seed", 1},
                          {"xi", {1.0, 0.0}}, {"mu", 1.0}, {"sigma", 0.0}});
    l.add(r, "100 random triples");
    l.add(column_max(r, "momentum") <= 1e-9 && column_max(r, "divergence") <= 1e-9,
          "max interior residual " + sci(std::max(column_max(r, "momentum"), column_max(r, "divergence"))));
    l.add(column_max(r, "boundary_tangential") <= 1e-10 && column_max(r, "boundary_normal") <= 1e-10,
          "max boundary residual " +
              sci(std::max(column_max(r, "boundary_tangential"), column_max(r, "boundary_normal"))));
    emit(2, "Neumann model problem", l);
  }

  {
    Line l;
    const Report r = run({{"task", "solve-halfspace"}, {"model", "tension"}, {"n_random", 100}, {"seed", 2},
                          {"xi", {1.0, 0.0}}, {"mu", 1.0}, {"sigma", 1.0}, {"a_kappa", {0.3, -0.2}}});
    l.add(r, "100 random triples");
    l.add(column_max(r, "kinematic") <= 1e-9, "max kinematic residual " + sci(column_max(r, "kinematic")));
    const Check* h = find_check(r, "h_hat_symbol_relation");
    l.add(h && h->pass, "h_hat relation " + sci(h ? h->value : NAN));
    emit(3, "surface tension model problem", l);
  }

  {
    Line l = check_names(symbols, {"min_ReB_ratio", "max_absB_ratio", "max_absD_ratio",
                                   "min_absE0_ratio_beyond_lambda1", "min_drift_ReB_ratio", "min_drift_absB_ratio",
                                   "min_drift_absD_ratio", "min_drift_absE0_ratio_beyond_lambda1"});
    const json& e0 = symbols.data.at("E0");
    l.notes.push_back("lambda1 = " + sci(e0.at("lambda1").get<double>()) + ", E0 grid starts at |lambda| = " +
                      sci(e0.at("lambda0_used").get<double>()));
    emit(4, "symbol bounds", l);
  }

  {
    Line l;
    const Report r = run({{"task", "wholespace-check"}, {"n_samples", 1000}, {"n_fields", 10}});
    l.add(r, "10 fields x 1000 frequencies");
    emit(5, "whole-space resolvent", l);
  }

  {
    Line l;
    for (auto [N, R] : {std::pair{3, 1.0}, std::pair{3, 2.5}, std::pair{2, 1.5}}) {
      const Report r = run({{"task", "curvature"},
                            {"surface", {{"kind", "sphere"}, {"R", R}, {"N", N}}},
                            {"n_samples", 200},
                            {"tol", 1e-10}});
      l.add(r, "sphere N=" + std::to_string(N) + " R=" + sci(R));
    }
    const double c = 0.1 / real_sph_harm(1, 0, 0.0, 0.0, 1.0);
    const Report g = run({{"task", "curvature"},
                          {"surface", {{"kind", "spherical_graph"}, {"R", 1.0}, {"r_series", {{1, 0, c}}}}},
                          {"n_samples", 1000},
                          {"tol", 1e-8}});
    l.add(g, "r = 1 + 0.1 cos(theta), max residual " + sci(column_max(g, "residual")));
    const Report y = run({{"task", "curvature"},
                          {"surface", {{"kind", "spherical_graph"}, {"R", 1.0}, {"r_series", {{2, 0, 1.0}}}}},
                          {"n_samples", 10},
                          {"eps_list", {1e-1, 1e-2, 1e-3, 1e-4}}});
    const Check* s = find_check(y, "linearization_slope");
    l.add(y.pass && s, "linearization slope " + sci(s ? s->value : NAN));
    emit(6, "mean curvature", l);
  }

  {
    Line l;
    for (double R : {1.0, 2.0}) {
      const Report r = run({{"task", "ball-spectra"}, {"R", R}, {"lmax", 8}});
      l.add(r, "R=" + sci(R) + ", max eigen residual " + sci(column_max(r, "residual")));
    }
    emit(7, "sphere spectra", l);
  }

  {
    Line l;
    CounterRng rng(31);
    double defect = 0;
    for (int k = 0; k < 1000; ++k) {
      const int N = 2 + k % 2;
      Mat K(N, N);
      for (int i = 0; i < N * N; ++i) K.data()[i] = rng.normal();
      K *= 0.5 / K.jacobiSvd().singularValues()[0];
      defect = std::max(defect, compute_V0_J(K).inverse_defect);
    }
    l.add(defect <= 1e-12, "(I + grad Psi)(I + V0) - I max " + sci(defect));

    CounterRng urng(21);
    const VecFieldST u = sine_field(3, random_sine_modes(3, urng, 2, 1.0));
    CounterRng prng(4, 7);
    DisplacementField psi;
    psi.N = 3;
    psi.delta_bound = 0.9;
    psi.psi = sine_field(3, random_sine_modes(3, prng, 2, 0.1));
    Vec y(3);
    y << 0.3, 0.4, -0.2;
    std::vector<double> gaps;
    for (double h : {1e-2, 5e-3, 2.5e-3}) gaps.push_back(transformed_divergence(u, psi, y, 0.1, h).gap);
    double slope = INFINITY;
    for (std::size_t k = 0; k + 1 < gaps.size(); ++k) slope = std::min(slope, std::log2(gaps[k] / gaps[k + 1]));
    l.add(slope >= 1.9, "divergence identity FD slope " + sci(slope));

    l.add(run({{"task", "transport-check"}, {"flow", "builtin:dilation"}}), "Reynolds, dilation flow");
    const Report lin = run({{"task", "transport-check"}, {"flow", {{"kind", "linear"}, {"N", 3}, {"seed", 5}}}});
    l.add(lin, "Reynolds and area derivative, sine flow");
    const Report b = run({{"task", "ball-spectra"}, {"R", 1.5}, {"lmax", 4}});
    const Line g = check_names(b, {"rigid_gram_N2", "rigid_gram_N3", "rigid_c1_N2", "rigid_c1_N3"});
    l.pass = l.pass && g.pass;
    for (const auto& n : g.notes) l.notes.push_back("R=1.5 " + n);
    emit(8, "domain transforms", l);
  }

  {
    Line l;
    for (const char* c : {"interior", "flux", "symbolic", "physical", "partial-lagrange", "sphere"})
      l.add(run({{"task", "nonlinear-audit"}, {"case", c}}), c);
    emit(9, "nonlinear terms", l);
  }

  {
    Line l;
    const std::vector<json> configs = {
        {{"task", "verify-symbols"}, {"n_lambda", 9}, {"n_arg", 9}, {"n_a", 41}},
        {{"task", "solve-halfspace"}, {"model", "tension"}, {"n_random", 50}},
        {{"task", "wholespace-check"}, {"n_samples", 200}},
        {{"task", "curvature"}, {"surface", {{"kind", "spherical_graph"}, {"r_series", {{3, 1, 0.05}}}}}},
        {{"task", "transport-check"}},
        {{"task", "ball-spectra"}},
        {{"task", "nonlinear-audit"}, {"case", "symbolic"}},
    };
    for (const auto& cfg : configs) {
      const Report a = run(cfg, 1), b = run(cfg, 1), p = run(cfg, 4);
      const bool same = to_json(a) == to_json(b) && to_csv(a) == to_csv(b);
      const bool par = to_json(a) == to_json(p) && to_csv(a) == to_csv(p);
      l.add(same && par, cfg.at("task").get<std::string>() + ": repeat " + (same ? "identical" : "differs") +
                             ", 4 threads " + (par ? "identical" : "differs"));
    }
    emit(10, "determinism", l);
  }

  std::printf("%d of 10 criteria passed\n", 10 - g_failed);
  return g_failed == 0 ? 0 : 1;
}
