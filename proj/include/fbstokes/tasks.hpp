#pragma once
// Named verification tasks. Each takes a JSON config, validates every key,
// runs its sweep and returns a finalized report.

#include <array>
#include <string>
#include <vector>

#include "fbstokes/report.hpp"
#include "fbstokes/surface.hpp"
#include "fbstokes/transforms.hpp"

namespace fbs {

struct RunOptions {
  int threads = 1;
};

std::vector<std::string> task_names();

// config["task"] selects the task; "out", "format" and "threads" are accepted and ignored here
Report run_task(const json& config, const RunOptions& opt = {});

Report verify_symbols(const json& config, const RunOptions& opt = {});
Report solve_halfspace(const json& config, const RunOptions& opt = {});
Report wholespace_check(const json& config, const RunOptions& opt = {});
Report curvature(const json& config, const RunOptions& opt = {});
Report transport_check(const json& config, const RunOptions& opt = {});
Report ball_spectra(const json& config, const RunOptions& opt = {});
Report nonlinear_audit(const json& config, const RunOptions& opt = {});

std::vector<std::string> audit_cases();

// reads and parses a JSON file; failures name `key`
json read_json_file(const std::string& path, const std::string& key);

// a string value is treated as a file path
json resolve_json_value(const json& v, const std::string& key);

struct LoadedSurface {
  std::string kind;
  int N = 3;
  double R = 1;
  SurfacePatch patch;
  HarmonicSeries series;                        // spherical_graph
  std::vector<std::array<double, 3>> h_series;  // graph: amp cos(k1 t1 + k2 t2)
  json resolved;
};

LoadedSurface load_surface(const json& j, const std::string& key = "surface");

struct LoadedFlow {
  Flow flow;
  json resolved;
};

LoadedFlow load_flow(const json& j, const std::string& key = "flow");

}  // namespace fbs
