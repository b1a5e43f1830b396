#pragma once

#include <optional>
#include <string>
#include <vector>

#include "svweno/harness/exact_riemann.hpp"
#include "svweno/solver.hpp"

namespace svweno {

struct PresetInfo {
  std::string name;
  std::string description;
};

/// Names and one-line descriptions of every built-in problem.
const std::vector<PresetInfo>& preset_catalog();

/// Built-in problem with its published domain, initial and boundary data,
/// final time and default resolution. Throws std::invalid_argument for an
/// unknown name.
ProblemConfig preset(const std::string& name);

/// Initial Riemann data of the 1D shock-tube presets (sod1d, lax1d).
std::optional<std::pair<Primitive1D, Primitive1D>> shock_tube_states(const std::string& name);

/// Double Mach reflection helpers.
State double_mach_post_shock();
State double_mach_pre_shock();
/// Shock foot on the line y = 1 at time t.
double double_mach_top_switch(double t);

/// User-facing overrides applied on top of a preset. Only set fields are
/// applied; this is the unit that round-trips through JSON.
struct RunSpec {
  std::string problem = "sine1d";
  std::optional<int> order;
  std::optional<int> nsv_x;
  std::optional<int> nsv_y;
  std::optional<double> tvb_m;
  std::optional<std::string> tvb_length;  // cv | sv
  std::optional<double> epsilon;
  std::optional<double> cfl;
  std::optional<double> t_final;
  std::optional<std::string> limiter;
  std::optional<bool> characteristic;
  std::optional<std::string> flux;  // local | global
  std::optional<bool> detect_every_stage;
  std::optional<bool> trace_fallback;
  std::optional<int> workers;

  ProblemConfig build() const;
  std::string to_json() const;
  static RunSpec from_json(const std::string& text);

  friend bool operator==(const RunSpec&, const RunSpec&) = default;
};

}  // namespace svweno
