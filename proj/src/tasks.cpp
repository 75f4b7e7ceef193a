#include "fbstokes/tasks.hpp"

#include <fstream>
#include <sstream>

namespace fbs {

std::vector<std::string> task_names() {
  return {"verify-symbols", "solve-halfspace", "wholespace-check", "curvature",
          "transport-check", "ball-spectra",   "nonlinear-audit"};
}

json read_json_file(const std::string& path, const std::string& key) {
  std::ifstream in(path);
  if (!in) throw ConfigError(key, "key '" + key + "': cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw ConfigError(key, "key '" + key + "': malformed JSON in '" + path + "' at byte " + std::to_string(e.byte));
  }
}

json resolve_json_value(const json& v, const std::string& key) {
  if (v.is_string()) return read_json_file(v.get<std::string>(), key);
  if (!v.is_object()) throw ConfigError(key, "key '" + key + "' must be an object or a path to a JSON file");
  return v;
}

Report run_task(const json& config, const RunOptions& opt) {
  if (!config.is_object()) throw ConfigError("<root>", "config must be a JSON object");
  if (!config.contains("task")) throw ConfigError("task", "missing required key 'task'");
  if (!config.at("task").is_string()) throw ConfigError("task", "key 'task' must be a string");
  json c = config;
  for (const char* k : {"out", "format", "threads"}) c.erase(k);
  const std::string task = c.at("task").get<std::string>();
  if (task == "verify-symbols") return verify_symbols(c, opt);
  if (task == "solve-halfspace") return solve_halfspace(c, opt);
  if (task == "wholespace-check") return wholespace_check(c, opt);
  if (task == "curvature") return curvature(c, opt);
  if (task == "transport-check") return transport_check(c, opt);
  if (task == "ball-spectra") return ball_spectra(c, opt);
  if (task == "nonlinear-audit") return nonlinear_audit(c, opt);
  throw ConfigError("task", "unknown task '" + task + "'");
}

}  // namespace fbs
