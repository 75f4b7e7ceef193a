#pragma once
// Shared plumbing for the task implementations.

#include <cmath>
#include <numeric>

#include "fbstokes/report.hpp"
#include "fbstokes/tasks.hpp"

namespace fbs::detail {

inline double slope(double e1, double e2, double r1, double r2) { return std::log(e1 / e2) / std::log(r1 / r2); }

// minimum slope over consecutive pairs; +inf when fewer than two values
inline double min_slope(const std::vector<double>& err, const std::vector<double>& step) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < err.size(); ++k) m = std::min(m, slope(err[k], err[k + 1], step[k], step[k + 1]));
  return m;
}

inline std::vector<std::size_t> indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t(0));
  return v;
}

inline Report start_report(std::string task, json resolved, std::uint64_t seed) {
  Report r;
  r.task = std::move(task);
  resolved["task"] = r.task;
  r.provenance.config_hash = config_hash(resolved);
  r.provenance.seed = seed;
  r.data["config"] = resolved;
  return r;
}

inline std::vector<double> column_values(const Report& r, const std::string& col) {
  const std::size_t c = r.column(col);
  std::vector<double> v;
  for (const auto& rec : r.records)
    if (rec.status != Status::error) v.push_back(std::get<double>(rec.cells[c]));
  return v;
}

inline double vmin(const std::vector<double>& v) {
  double m = std::numeric_limits<double>::infinity();
  for (double x : v) m = std::min(m, x);
  return m;
}

inline double vmax(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  return m;
}

inline json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

inline void require_sorted_decreasing(const std::vector<double>& v, const std::string& key) {
  if (v.size() < 2) throw ConfigError(key, "key '" + key + "' needs at least two values");
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!(v[k] > 0)) throw ConfigError(key, "key '" + key + "' must hold positive values");
    if (k > 0 && !(v[k] < v[k - 1])) throw ConfigError(key, "key '" + key + "' must be strictly decreasing");
  }
}

}  // namespace fbs::detail
