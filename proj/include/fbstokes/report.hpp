#pragma once
// Verification reports, ordered parallel sweeps and strict config readers.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <set>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "json.hpp"

#include "fbstokes/common.hpp"

namespace fbs {

using json = nlohmann::json;

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

using Cell = std::variant<double, long long, std::string>;

enum class Status { ok, fail, error };
std::string to_string(Status s);

struct Record {
  std::vector<Cell> cells;  // aligned with Report::columns
  Status status = Status::ok;
  std::string error;
};

struct Check {
  std::string name;
  double value = 0;
  std::string relation;  // one of <=, <, >=, >
  double bound = 0;
  bool pass = false;
};

Check make_check(std::string name, double value, std::string relation, double bound);

struct ColumnSummary {
  std::string column;
  std::size_t n = 0;
  double min = 0, max = 0, p50 = 0, p99 = 0;
};

// nearest-rank quantile of a sorted sample, q in (0, 1]
double nearest_rank(const std::vector<double>& sorted, double q);
ColumnSummary summarize(const std::string& column, std::vector<double> values);

struct Provenance {
  std::string config_hash;
  std::string version = kVersion;
  int schema = kSchemaVersion;
  std::uint64_t seed = 0;
};

struct Report {
  std::string task;
  std::vector<std::string> columns;
  std::vector<std::string> metrics;  // numeric columns that get a summary
  std::vector<Record> records;
  std::vector<Check> checks;
  std::vector<ColumnSummary> summary;
  json data = json::object();        // task specific extras, JSON only
  Provenance provenance;
  bool pass = false;

  std::size_t column(const std::string& name) const;
  // fills summary and pass from records and checks
  void finalize();
  std::size_t count(Status s) const;
};

std::string format_double(double v);
std::string to_csv(const Report& r);
std::string to_json(const Report& r);

// FNV-1a over the canonical (sorted-key, compact) dump
std::string config_hash(const json& config);

// ---- sweep ----

struct Outcome {
  std::vector<Cell> values;
  Status status = Status::ok;
};

int resolve_threads(int threads);

// Applies op to every point on up to `threads` workers. Records come back in grid order.
// An exception inside op becomes an error record with NaN outputs.
template <class P>
std::vector<Record> sweep(const std::vector<P>& points, const std::function<std::vector<Cell>(const P&)>& inputs,
                          const std::function<Outcome(const P&)>& op, std::size_t n_outputs, int threads) {
  std::vector<Record> out(points.size());
  auto work = [&](std::size_t k) {
    Record& r = out[k];
    r.cells = inputs ? inputs(points[k]) : std::vector<Cell>{};
    const std::size_t n_in = r.cells.size();
    try {
      Outcome o = op(points[k]);
      if (o.values.size() != n_outputs) throw std::logic_error("sweep: output arity mismatch");
      r.cells.insert(r.cells.end(), o.values.begin(), o.values.end());
      r.status = o.status;
    } catch (const Error& e) {
      r.status = Status::error;
      r.error = e.kind + ": " + e.what();
    } catch (const std::exception& e) {
      r.status = Status::error;
      r.error = e.what();
    }
    if (r.status == Status::error) {
      r.cells.resize(n_in);
      r.cells.insert(r.cells.end(), n_outputs, Cell(std::numeric_limits<double>::quiet_NaN()));
    }
  };
  const int nt = std::min<int>(resolve_threads(threads), int(std::max<std::size_t>(1, points.size())));
  if (nt <= 1) {
    for (std::size_t k = 0; k < points.size(); ++k) work(k);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < nt; ++w)
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < points.size(); k = next++) work(k);
    });
  for (auto& t : pool) t.join();
  return out;
}

// ---- config reading ----

// Typed access to a JSON object; every key read is remembered so finish() can reject the rest.
class ConfigReader {
 public:
  ConfigReader(const json& j, std::string prefix = "");

  bool has(const std::string& key) const;
  double number(const std::string& key, double def) const;
  double number(const std::string& key) const;
  double positive(const std::string& key, double def) const;
  long long integer(const std::string& key, long long def) const;
  long long integer(const std::string& key) const;
  std::uint64_t seed(const std::string& key, std::uint64_t def) const;
  bool boolean(const std::string& key, bool def) const;
  std::string string(const std::string& key, const std::string& def) const;
  std::string string(const std::string& key) const;
  std::vector<double> numbers(const std::string& key, std::vector<double> def) const;
  std::vector<double> numbers(const std::string& key) const;
  cplx complex(const std::string& key, cplx def) const;
  const json& raw(const std::string& key) const;
  std::string path(const std::string& key) const { return prefix_ + key; }
  void finish() const;

 private:
  const json& j_;
  std::string prefix_;
  mutable std::set<std::string> used_;
  const json& get(const std::string& key) const;
};

}  // namespace fbs
