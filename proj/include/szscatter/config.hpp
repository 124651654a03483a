#pragma once

#include <optional>
#include <string>
#include <vector>

#include "szscatter/bounds.hpp"
#include "szscatter/gauges.hpp"
#include "szscatter/potentials.hpp"

namespace szscatter {

enum class Mode { scatter, bounds, optimize, verify };

std::string to_string(Mode m);
/// Throws ValidationError("run.mode") for unknown names.
Mode parse_mode(const std::string& name);

struct Tolerances {
  double ode_tol = 1e-12;
  double quad_tol = 1e-10;
  double tail_tol = 1e-10;
  double max_step = kDefaultMaxStep;
};

struct Outputs {
  std::string csv_path;        ///< empty: standard output
  std::string plot_data_path;  ///< empty: no plot data
};

/// Gauge names accepted in [gauges] list.
inline const std::vector<std::string> kGaugeNames{"constant", "wkb", "special_delta", "antiphase", "user"};

struct RunConfig {
  Mode mode = Mode::scatter;
  PotentialProfile potential = PotentialProfile::free();
  EnergySpec units;  ///< hbar and mass; energy is set per sweep point
  std::vector<double> energies;
  std::vector<std::string> gauges{"constant"};
  std::optional<double> k_ref;  ///< default: left asymptotic wavenumber
  std::optional<GaugeTables> user_gauge;
  Tolerances tolerances;
  Outputs outputs;
  OptimizerConfig optimizer;
};

/// Line-oriented `key = value` text with `[section]` headers and '#' comments.
/// Relative table paths resolve against base_dir. Throws ParseError (with the
/// line number) for malformed lines, unknown sections or keys, and duplicate
/// keys; ValidationError (naming section.key) for bad values.
RunConfig parse_config(const std::string& text, const std::string& base_dir = "");
RunConfig load_config(const std::string& path);

}  // namespace szscatter
