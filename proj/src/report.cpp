#include "fbstokes/report.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>

namespace fbs {

std::string to_string(Status s) {
  switch (s) {
    case Status::ok: return "ok";
    case Status::fail: return "fail";
    case Status::error: return "error";
  }
  return "?";
}

Check make_check(std::string name, double value, std::string relation, double bound) {
  Check c{std::move(name), value, std::move(relation), bound, false};
  if (c.relation == "<=")
    c.pass = value <= bound;
  else if (c.relation == "<")
    c.pass = value < bound;
  else if (c.relation == ">=")
    c.pass = value >= bound;
  else if (c.relation == ">")
    c.pass = value > bound;
  else
    throw std::logic_error("unknown relation " + c.relation);
  return c;
}

double nearest_rank(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double pos = std::ceil(q * double(sorted.size()));
  const std::size_t k = std::size_t(std::clamp(pos, 1.0, double(sorted.size()))) - 1;
  return sorted[k];
}

ColumnSummary summarize(const std::string& column, std::vector<double> values) {
  ColumnSummary s;
  s.column = column;
  std::erase_if(values, [](double v) { return std::isnan(v); });
  std::sort(values.begin(), values.end());
  s.n = values.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  s.min = values.empty() ? nan : values.front();
  s.max = values.empty() ? nan : values.back();
  s.p50 = nearest_rank(values, 0.5);
  s.p99 = nearest_rank(values, 0.99);
  return s;
}

std::size_t Report::column(const std::string& name) const {
  for (std::size_t k = 0; k < columns.size(); ++k)
    if (columns[k] == name) return k;
  throw std::logic_error("no column " + name);
}

void Report::finalize() {
  summary.clear();
  for (const auto& m : metrics) {
    const std::size_t c = column(m);
    std::vector<double> v;
    for (const auto& r : records) {
      if (r.status == Status::error) continue;
      if (const double* d = std::get_if<double>(&r.cells[c])) v.push_back(*d);
      if (const long long* i = std::get_if<long long>(&r.cells[c])) v.push_back(double(*i));
    }
    summary.push_back(summarize(m, std::move(v)));
  }
  pass = true;
  for (const auto& r : records) pass = pass && r.status == Status::ok;
  for (const auto& c : checks) pass = pass && c.pass;
}

std::size_t Report::count(Status s) const {
  return std::size_t(std::count_if(records.begin(), records.end(), [s](const Record& r) { return r.status == s; }));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string o = "\"";
  for (char c : s) {
    if (c == '"') o += '"';
    o += c;
  }
  return o + "\"";
}

std::string cell_text(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return format_double(*d);
  if (const long long* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return csv_escape(std::get<std::string>(c));
}

nlohmann::ordered_json cell_json(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) {
    if (std::isfinite(*d)) return *d;
    return format_double(*d);
  }
  if (const long long* i = std::get_if<long long>(&c)) return *i;
  return std::get<std::string>(c);
}

nlohmann::ordered_json number_json(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

}  // namespace

std::string to_csv(const Report& r) {
  std::ostringstream os;
  os << "# fbstokes " << r.task << " schema=" << r.provenance.schema << " version=" << r.provenance.version
     << " config_hash=" << r.provenance.config_hash << " seed=" << r.provenance.seed << '\n';
  os << "# pass=" << (r.pass ? "true" : "false") << " records=" << r.records.size()
     << " failed=" << r.count(Status::fail) << " errors=" << r.count(Status::error) << '\n';
  for (const auto& c : r.checks)
    os << "# check " << c.name << ' ' << format_double(c.value) << ' ' << c.relation << ' ' << format_double(c.bound)
       << ' ' << (c.pass ? "PASS" : "FAIL") << '\n';
  for (const auto& s : r.summary)
    os << "# summary " << s.column << " n=" << s.n << " min=" << format_double(s.min) << " max=" << format_double(s.max)
       << " p50=" << format_double(s.p50) << " p99=" << format_double(s.p99) << '\n';
  os << "index,status";
  for (const auto& c : r.columns) os << ',' << c;
  os << ",error\n";
  for (std::size_t k = 0; k < r.records.size(); ++k) {
    const Record& rec = r.records[k];
    os << k << ',' << to_string(rec.status);
    for (const auto& c : rec.cells) os << ',' << cell_text(c);
    os << ',' << csv_escape(rec.error) << '\n';
  }
  return os.str();
}

std::string to_json(const Report& r) {
  nlohmann::ordered_json j;
  j["task"] = r.task;
  j["pass"] = r.pass;
  j["provenance"] = {{"config_hash", r.provenance.config_hash},
                     {"version", r.provenance.version},
                     {"schema", r.provenance.schema},
                     {"seed", r.provenance.seed}};
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"value", number_json(c.value)},
                      {"relation", c.relation},
                      {"bound", number_json(c.bound)},
                      {"pass", c.pass}});
  j["checks"] = checks;
  auto summary = nlohmann::ordered_json::object();
  for (const auto& s : r.summary)
    summary[s.column] = {{"n", s.n},
                         {"min", number_json(s.min)},
                         {"max", number_json(s.max)},
                         {"p50", number_json(s.p50)},
                         {"p99", number_json(s.p99)}};
  j["summary"] = summary;
  j["counts"] = {{"records", r.records.size()},
                 {"failed", r.count(Status::fail)},
                 {"errors", r.count(Status::error)}};
  j["columns"] = r.columns;
  auto recs = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < r.records.size(); ++k) {
    const Record& rec = r.records[k];
    nlohmann::ordered_json o;
    o["index"] = k;
    o["status"] = to_string(rec.status);
    for (std::size_t c = 0; c < rec.cells.size() && c < r.columns.size(); ++c) o[r.columns[c]] = cell_json(rec.cells[c]);
    if (!rec.error.empty()) o["error"] = rec.error;
    recs.push_back(o);
  }
  j["records"] = recs;
  if (!r.data.empty()) j["data"] = nlohmann::ordered_json::parse(r.data.dump());
  return j.dump(2) + "\n";
}

std::string config_hash(const json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  return int(std::max(1u, std::thread::hardware_concurrency()));
}

// ---- ConfigReader ----

ConfigReader::ConfigReader(const json& j, std::string prefix) : j_(j), prefix_(std::move(prefix)) {
  if (!j_.is_object()) throw ConfigError(prefix_.empty() ? "<root>" : prefix_, "expected a JSON object");
}

bool ConfigReader::has(const std::string& key) const {
  used_.insert(key);
  return j_.contains(key) && !j_.at(key).is_null();
}

const json& ConfigReader::get(const std::string& key) const {
  used_.insert(key);
  if (!j_.contains(key)) throw ConfigError(path(key), "missing required key '" + path(key) + "'");
  return j_.at(key);
}

double ConfigReader::number(const std::string& key) const {
  const json& v = get(key);
  if (!v.is_number()) throw ConfigError(path(key), "key '" + path(key) + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(path(key), "key '" + path(key) + "' must be finite");
  return d;
}

double ConfigReader::number(const std::string& key, double def) const { return has(key) ? number(key) : def; }

double ConfigReader::positive(const std::string& key, double def) const {
  const double v = number(key, def);
  if (!(v > 0)) throw ConfigError(path(key), "key '" + path(key) + "' must be positive");
  return v;
}

long long ConfigReader::integer(const std::string& key) const {
  const json& v = get(key);
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d && std::abs(d) < 9e15) return (long long)d;
  }
  throw ConfigError(path(key), "key '" + path(key) + "' must be an integer");
}

long long ConfigReader::integer(const std::string& key, long long def) const { return has(key) ? integer(key) : def; }

std::uint64_t ConfigReader::seed(const std::string& key, std::uint64_t def) const {
  if (!has(key)) return def;
  const json& v = get(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  const long long s = integer(key);
  if (s < 0) throw ConfigError(path(key), "key '" + path(key) + "' must be a non-negative integer");
  return std::uint64_t(s);
}

bool ConfigReader::boolean(const std::string& key, bool def) const {
  if (!has(key)) return def;
  const json& v = get(key);
  if (!v.is_boolean()) throw ConfigError(path(key), "key '" + path(key) + "' must be true or false");
  return v.get<bool>();
}

std::string ConfigReader::string(const std::string& key) const {
  const json& v = get(key);
  if (!v.is_string()) throw ConfigError(path(key), "key '" + path(key) + "' must be a string");
  return v.get<std::string>();
}

std::string ConfigReader::string(const std::string& key, const std::string& def) const {
  return has(key) ? string(key) : def;
}

std::vector<double> ConfigReader::numbers(const std::string& key) const {
  const json& v = get(key);
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) throw ConfigError(path(key), "key '" + path(key) + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(path(key), "key '" + path(key) + "' must contain only numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<double> ConfigReader::numbers(const std::string& key, std::vector<double> def) const {
  return has(key) ? numbers(key) : def;
}

cplx ConfigReader::complex(const std::string& key, cplx def) const {
  if (!has(key)) return def;
  const auto v = numbers(key);
  if (v.size() == 1) return {v[0], 0.0};
  if (v.size() != 2) throw ConfigError(path(key), "key '" + path(key) + "' must be [re, im]");
  return {v[0], v[1]};
}

const json& ConfigReader::raw(const std::string& key) const { return get(key); }

void ConfigReader::finish() const {
  for (auto it = j_.begin(); it != j_.end(); ++it)
    if (!used_.count(it.key())) throw ConfigError(path(it.key()), "unknown key '" + path(it.key()) + "'");
}

}  // namespace fbs
