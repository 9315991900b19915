#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "liouville/presets.hpp"

namespace liouville {

struct RunConfig {
  std::string problem;            // builtin id or "custom"
  std::string mode = "classical"; // classical | schrod | compare | convergence
  int n = 0;                      // cells per direction, 0 keeps the preset
  std::vector<int> levels;        // convergence ladder
  std::optional<double> dt;
  bool auto_dt = false;
  std::optional<double> T;
  std::string method = "cn";      // classical integrator
  std::string engine = "cn";      // Schrodingerized evolution
  int n_p = 0;
  double eps_target = 0.006737946999085467;
  double margin = 0.0;
  double alpha_minus = 1.0;
  std::optional<double> p_override;
  std::optional<double> p_L, p_R;  // p interval, overrides the preset
  bool p_designed = false;         // ignore any preset interval and p
  std::string out = "out";
  int threads = 0;
  double memory_cap_gib = 8.0;
  bool write_matrix = false;

  // custom 1D problem
  double x_min = -1.0, x_max = 1.0, xi_max = 1.0;
  std::vector<SpeedPiece1D> speed;
  std::string interface_model = "partial";
  std::vector<double> gauss;  // x0 xi0 sx sxi
};

/// `key = value` lines; '#' starts a comment. Errors carry source:line.
RunConfig parse_config(const std::string& text, const std::string& source = "config");
RunConfig load_config(const std::string& path);

/// Builds the problem a config describes (builtin preset or custom spec).
Problem problem_for(const RunConfig& cfg, int n_override = 0);

/// Executes the run, writes artifacts under cfg.out and returns the report.
nlohmann::json run(const RunConfig& cfg);

}  // namespace liouville
