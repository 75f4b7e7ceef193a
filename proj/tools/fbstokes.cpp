// fbstokes command-line driver.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"

#include "fbstokes/tasks.hpp"

using namespace fbs;

namespace {

enum class Kind { number, integer, csv, complex, text };

struct Flag {
  std::string name;
  Kind kind;
};

struct Sub {
  std::string task;
  std::string help;
  std::vector<Flag> flags;
  CLI::App* app = nullptr;
  std::map<std::string, std::string> values;
};

std::string key_of(const std::string& flag) {
  std::string k = flag;
  for (char& c : k)
    if (c == '-') c = '_';
  return k;
}

double to_number(const std::string& s, const std::string& flag) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size()) throw ConfigError(key_of(flag), "--" + flag + ": '" + s + "' is not a number");
  return v;
}

json csv_numbers(const std::string& s, const std::string& flag) {
  json a = json::array();
  if (s.empty()) return a;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) a.push_back(to_number(item, flag));
  if (!s.empty() && s.back() == ',') throw ConfigError(key_of(flag), "--" + flag + ": trailing comma");
  return a;
}

json convert(const Flag& f, const std::string& v) {
  switch (f.kind) {
    case Kind::number: return to_number(v, f.name);
    case Kind::integer: {
      const double d = to_number(v, f.name);
      if (d != std::floor(d)) throw ConfigError(key_of(f.name), "--" + f.name + ": '" + v + "' is not an integer");
      return (long long)d;
    }
    case Kind::csv: return csv_numbers(v, f.name);
    case Kind::complex: {
      json a = csv_numbers(v, f.name);
      if (a.size() == 1) a.push_back(0.0);
      if (a.size() != 2) throw ConfigError(key_of(f.name), "--" + f.name + ": expected re,im");
      return a;
    }
    case Kind::text: return v;
  }
  return v;
}

std::vector<Sub> subcommands() {
  const Kind N = Kind::number, I = Kind::integer, C = Kind::csv, Z = Kind::complex, T = Kind::text;
  return {
      {"verify-symbols", "sector-grid bounds of B, D and E0 plus the D factorization",
       {{"sector-angle", N}, {"lambda0", N}, {"lambda-max", N}, {"n-lambda", I}, {"n-arg", I}, {"a-min", N},
        {"a-max", N}, {"n-a", I}, {"mu", C}, {"sigma", N}, {"a-kappa", C}, {"seed", I}, {"e0-floor", N},
        {"n-factorization", I}}},
      {"solve-halfspace", "half-space model problem residuals",
       {{"model", T}, {"lambda", Z}, {"xi", C}, {"mu", N}, {"sigma", N}, {"a-kappa", C}, {"data", T}, {"seed", I},
        {"tol", N}, {"tol-boundary", N}, {"n-points", I}, {"n-random", I}}},
      {"wholespace-check", "whole-space resolvent residuals",
       {{"lambda", Z}, {"mu", N}, {"n-samples", I}, {"n-fields", I}, {"seed", I}, {"tol", N}}},
      {"curvature", "mean curvature of a surface against its reference",
       {{"surface", T}, {"n-samples", I}, {"seed", I}, {"tol", N}, {"eps-list", C}}},
      {"transport-check", "Reynolds transport and area derivative",
       {{"flow", T}, {"dt-list", C}, {"y", C}, {"t", N}}},
      {"ball-spectra", "sphere spectra, spectral gap and rigid basis",
       {{"R", N}, {"lmax", I}, {"n-samples", I}, {"seed", I}}},
      {"nonlinear-audit", "transformed nonlinear terms",
       {{"case", T}, {"eps-list", C}, {"seed", I}, {"n-cases", I}}},
  };
}

int write_report(const Report& r, const std::string& format, const std::string& out) {
  const std::string text = format == "json" ? to_json(r) : to_csv(r);
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) {
      std::cerr << "error: out: cannot write '" << out << "'\n";
      return 2;
    }
    f << text;
  }
  std::cerr << r.task << ": " << (r.pass ? "PASS" : "FAIL") << " (" << r.records.size() << " records, "
            << r.count(Status::fail) << " failed, " << r.count(Status::error) << " errors";
  for (const auto& c : r.checks)
    if (!c.pass) std::cerr << "; check " << c.name << " = " << format_double(c.value) << " not " << c.relation << ' '
                           << format_double(c.bound);
  std::cerr << ")\n";
  return r.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fbstokes: verification harness for the free-boundary Stokes toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 1;
  std::string format;
  app.add_option("--threads", threads, "worker threads for sweeps (0 = hardware)")->check(CLI::NonNegativeNumber);
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"csv", "json"}));
  app.set_version_flag("--version", std::string(kVersion));

  std::vector<Sub> subs = subcommands();
  std::map<std::string, std::string> out_paths;
  for (auto& s : subs) {
    s.app = app.add_subcommand(s.task, s.help);
    for (const auto& f : s.flags) s.app->add_option("--" + f.name, s.values[f.name]);
    s.app->add_option("--out", out_paths[s.task], "report path (stdout when absent)");
  }
  std::string config_path, run_out;
  CLI::App* run = app.add_subcommand("run", "run the task named in a JSON config");
  run->add_option("--config", config_path, "JSON config")->required();
  run->add_option("--out", run_out, "report path (overrides the config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    json config = json::object();
    std::string out;
    if (run->parsed()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("config", "cannot open config '" + config_path + "'");
      std::stringstream ss;
      ss << in.rdbuf();
      try {
        config = json::parse(ss.str());
      } catch (const json::parse_error& e) {
        throw ConfigError("config", "malformed JSON in '" + config_path + "' at byte " + std::to_string(e.byte));
      }
      if (!config.is_object()) throw ConfigError("<root>", "config must be a JSON object");
      if (config.contains("out")) {
        if (!config["out"].is_string()) throw ConfigError("out", "key 'out' must be a string");
        out = config["out"].get<std::string>();
      }
      if (config.contains("format") && format.empty()) {
        if (!config["format"].is_string() || (config["format"] != "csv" && config["format"] != "json"))
          throw ConfigError("format", "key 'format' must be csv or json");
        format = config["format"].get<std::string>();
      }
      if (config.contains("threads") && app.count("--threads") == 0) {
        if (!config["threads"].is_number_integer() || config["threads"].get<int>() < 0)
          throw ConfigError("threads", "key 'threads' must be a non-negative integer");
        threads = config["threads"].get<int>();
      }
      if (!run_out.empty()) out = run_out;
    } else {
      for (auto& s : subs) {
        if (!s.app->parsed()) continue;
        config["task"] = s.task;
        for (const auto& f : s.flags)
          if (s.app->count("--" + f.name) > 0) config[key_of(f.name)] = convert(f, s.values[f.name]);
        out = out_paths[s.task];
      }
    }
    if (format.empty()) format = "csv";
    const Report r = run_task(config, RunOptions{threads});
    return write_report(r, format, out);
  } catch (const ConfigError& e) {
    std::cerr << "error: [" << e.key << "] " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.kind << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
