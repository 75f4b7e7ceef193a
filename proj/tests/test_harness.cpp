#include <doctest.h>

#include <chrono>
#include <cmath>
#include <complex>
#include <fstream>
#include <thread>

#include "fbstokes/symbols.hpp"
#include "fbstokes/tasks.hpp"

using namespace fbs;

namespace {

using Inputs = std::function<std::vector<Cell>(const int&)>;
using Op = std::function<Outcome(const int&)>;

const Inputs kInputs = [](const int& k) { return std::vector<Cell>{(long long)k}; };

Outcome square(const int& k) { return {{double(k) * k}, Status::ok}; }

std::string error_key(const json& config) {
  try {
    run_task(config);
  } catch (const ConfigError& e) {
    return e.key;
  }
  return "";
}

// E0 written out with an independent principal root
cplx e0_direct(double mu, double sigma, double A, cplx lambda) {
  const cplx B = std::sqrt(lambda / mu + A * A);
  const cplx D = B * B * B + A * B * B + 3.0 * A * A * B - A * A * A;
  return mu * lambda * D + sigma * A * A * A * (A + B);
}

}  // namespace

TEST_CASE("sweep: empty grid, single point, order under threads") {
  CHECK(sweep(std::vector<int>{}, kInputs, Op(square), 1, 4).empty());

  const auto one = sweep(std::vector<int>{7}, kInputs, Op(square), 1, 1);
  REQUIRE(one.size() == 1);
  CHECK(std::get<double>(one[0].cells[1]) == std::get<double>(square(7).values[0]));

  std::vector<int> pts(200);
  for (int k = 0; k < 200; ++k) pts[k] = k;
  const Op slow = [](const int& k) {
    if (k % 17 == 0) std::this_thread::sleep_for(std::chrono::microseconds(200));
    return square(k);
  };
  const auto serial = sweep(pts, kInputs, slow, 1, 1);
  const auto parallel = sweep(pts, kInputs, slow, 1, 8);
  REQUIRE(parallel.size() == pts.size());
  for (int k = 0; k < 200; ++k) {
    CHECK(std::get<long long>(parallel[k].cells[0]) == k);
    CHECK(parallel[k].cells == serial[k].cells);
  }
}

TEST_CASE("sweep: thrown errors become error records") {
  const Op op = [](const int& k) -> Outcome {
    if (k == 2) throw DomainError("bad point");
    if (k == 3) throw std::runtime_error("plain");
    return {{1.0, 2.0}, k == 1 ? Status::fail : Status::ok};
  };
  const auto recs = sweep(std::vector<int>{0, 1, 2, 3}, kInputs, op, 2, 2);
  REQUIRE(recs.size() == 4);
  CHECK(recs[0].status == Status::ok);
  CHECK(recs[1].status == Status::fail);
  CHECK(recs[2].status == Status::error);
  CHECK(recs[2].error.find("bad point") != std::string::npos);
  CHECK(recs[3].status == Status::error);
  REQUIRE(recs[2].cells.size() == 3);
  CHECK(std::get<long long>(recs[2].cells[0]) == 2);
  CHECK(std::isnan(std::get<double>(recs[2].cells[1])));
}

TEST_CASE("nearest-rank summary") {
  std::vector<double> v;
  for (int k = 100; k >= 1; --k) v.push_back(k);
  const ColumnSummary s = summarize("x", v);
  CHECK(s.n == 100);
  CHECK(s.min == 1);
  CHECK(s.max == 100);
  CHECK(s.p50 == 50);
  CHECK(s.p99 == 99);
  CHECK(nearest_rank({3.0}, 0.5) == 3.0);
  CHECK(nearest_rank({1.0, 2.0, 3.0}, 0.5) == 2.0);
  CHECK(summarize("x", {}).n == 0);
}

TEST_CASE("report summary agrees with records") {
  const Report r = run_task({{"task", "wholespace-check"}, {"n_samples", 50}, {"n_fields", 2}});
  const std::size_t col = r.column("momentum");
  std::vector<double> v;
  for (const auto& rec : r.records) v.push_back(std::get<double>(rec.cells[col]));
  std::sort(v.begin(), v.end());
  for (const auto& s : r.summary) {
    if (s.column != "momentum") continue;
    CHECK(s.n == v.size());
    CHECK(s.min == v.front());
    CHECK(s.max == v.back());
    CHECK(s.p50 == v[std::size_t(std::ceil(0.5 * v.size())) - 1]);
    CHECK(s.p99 == v[std::size_t(std::ceil(0.99 * v.size())) - 1]);
  }
}

TEST_CASE("checks and pass flag") {
  CHECK(make_check("a", 1.0, "<=", 1.0).pass);
  CHECK_FALSE(make_check("a", 1.0, "<", 1.0).pass);
  CHECK(make_check("a", 2.0, ">", 1.0).pass);
  CHECK_FALSE(make_check("a", NAN, ">=", 0.0).pass);
  CHECK_THROWS(make_check("a", 1.0, "==", 1.0));
}

TEST_CASE("serialization is deterministic and thread independent") {
  const json cfg = {{"task", "solve-halfspace"}, {"model", "neumann"}, {"n_random", 40}, {"seed", 9}};
  const Report a = run_task(cfg), b = run_task(cfg), p = run_task(cfg, RunOptions{4});
  CHECK(to_csv(a) == to_csv(b));
  CHECK(to_json(a) == to_json(b));
  CHECK(to_csv(a) == to_csv(p));
  CHECK(to_json(a) == to_json(p));

  const json j = json::parse(to_json(a));
  CHECK(j["records"].size() == 40);
  CHECK(j["provenance"]["config_hash"] == a.provenance.config_hash);
  CHECK(j["provenance"]["version"] == kVersion);
  CHECK(j["provenance"]["schema"] == kSchemaVersion);

  const std::string csv = to_csv(a);
  CHECK(csv.rfind("# fbstokes solve-halfspace schema=1", 0) == 0);
  CHECK(csv.find("index,status,lambda_re,lambda_im,xi_1,xi_2,momentum,divergence,boundary_tangential,"
                 "boundary_normal,kinematic,error\n") != std::string::npos);

  json other = cfg;
  other["seed"] = 10;
  CHECK(run_task(other).provenance.config_hash != a.provenance.config_hash);
  json reordered = json::object();
  for (auto it = cfg.rbegin(); it != cfg.rend(); ++it) reordered[it.key()] = it.value();
  CHECK(config_hash(reordered) == config_hash(cfg));
}

TEST_CASE("config errors name the offending key") {
  CHECK(error_key(json::array()) == "<root>");
  CHECK(error_key({{"mu", 1}}) == "task");
  CHECK(error_key({{"task", "nope"}}) == "task");
  CHECK(error_key({{"task", "curvature"}, {"surface", {{"kind", "sphere"}}}, {"n_smaples", 3}}) == "n_smaples");
  CHECK(error_key({{"task", "curvature"}, {"surface", {{"kind", "sphere"}, {"R", -1}}}}) == "surface.R");
  CHECK(error_key({{"task", "curvature"}, {"surface", {{"kind", "cube"}}}}) == "surface.kind");
  CHECK(error_key({{"task", "verify-symbols"}, {"n_a", "many"}}) == "n_a");
  CHECK(error_key({{"task", "verify-symbols"}, {"mu", {1, -2}}}) == "mu");
  CHECK(error_key({{"task", "solve-halfspace"}, {"model", "neumann"}, {"lambda", {-5, 0}}}) == "lambda");
  CHECK(error_key({{"task", "nonlinear-audit"}, {"case", "interior"}, {"eps_list", {1e-3, 1e-2}}}) == "eps_list");
  CHECK(error_key({{"task", "transport-check"}, {"flow", "builtin:swirl"}}) == "flow");

  const std::string path = "harness_malformed.json";
  std::ofstream("harness_malformed.json") << "{\"kind\": \"sphere\", ";
  CHECK(error_key({{"task", "curvature"}, {"surface", path}}) == "surface");
  std::remove(path.c_str());
}

TEST_CASE("curvature task on the unit sphere records H = -2") {
  const Report r = run_task({{"task", "curvature"}, {"surface", {{"kind", "sphere"}, {"R", 1.0}}}, {"n_samples", 20}});
  CHECK(r.pass);
  REQUIRE(r.records.size() == 20);
  for (const auto& rec : r.records) CHECK(std::abs(std::get<double>(rec.cells[r.column("H")]) + 2.0) <= 1e-10);
}

TEST_CASE("verify-symbols on the default grid") {
  const Report r = run_task({{"task", "verify-symbols"}, {"refine", false}, {"n_factorization", 0}});
  bool found = false;
  for (const auto& c : r.checks)
    if (c.name == "min_ReB_ratio") {
      found = true;
      CHECK(c.pass);
      CHECK(c.value > 0);
    }
  CHECK(found);
}

TEST_CASE("1e3-point residual sweep stays under tolerance at p99") {
  const Report r = run_task({{"task", "wholespace-check"}, {"n_samples", 100}, {"n_fields", 10}});
  REQUIRE(r.records.size() == 1000);
  for (const auto& s : r.summary) CHECK(s.p99 <= 1e-10);
  CHECK(r.pass);
}

TEST_CASE("E0 sector zeros against a Newton solve on the boundary ray") {
  const double mu = 0.5, sigma = 1.0, eps = kPi / 4;
  // unknowns (r, A) with E0(A, r e^{i(pi - eps)}) = 0
  double r = 3.0, A = 2.5;
  const cplx dir = std::polar(1.0, kPi - eps);
  for (int it = 0; it < 50; ++it) {
    const cplx F = e0_direct(mu, sigma, A, r * dir);
    const double h = 1e-7;
    const cplx Fr = (e0_direct(mu, sigma, A, (r + h) * dir) - e0_direct(mu, sigma, A, (r - h) * dir)) / (2 * h);
    const cplx FA = (e0_direct(mu, sigma, A + h, r * dir) - e0_direct(mu, sigma, A - h, r * dir)) / (2 * h);
    const double det = Fr.real() * FA.imag() - FA.real() * Fr.imag();
    const double dr = (F.real() * FA.imag() - FA.real() * F.imag()) / det;
    const double dA = (Fr.real() * F.imag() - F.real() * Fr.imag()) / det;
    r -= dr;
    A -= dA;
    if (std::abs(dr) + std::abs(dA) < 1e-14) break;
  }
  CHECK(std::abs(e0_direct(mu, sigma, A, r * dir)) < 1e-10);
  CHECK(e0_zero_radius({mu}, sigma, eps) == doctest::Approx(r).epsilon(1e-6));
  CHECK(e0_zero_radius({0.5, 1.0, 2.0}, sigma, eps) == doctest::Approx(r).epsilon(1e-6));

  for (const auto& z : e0_sector_zeros(1.0, sigma, eps)) {
    CHECK(std::abs(std::arg(z.lambda)) <= kPi - eps + 1e-12);
    CHECK(std::abs(e0_direct(1.0, sigma, z.A, z.lambda)) <= 1e-8 * std::pow(std::abs(z.lambda) + z.A, 4));
  }
  CHECK(e0_sector_zeros(1.0, 0.0, eps).empty());
  // zero modulus falls with the viscosity
  CHECK(e0_zero_radius({2.0}, sigma, eps) < e0_zero_radius({1.0}, sigma, eps));
  CHECK(e0_zero_radius({1.0}, sigma, eps) < e0_zero_radius({0.5}, sigma, eps));
}
