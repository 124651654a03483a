#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "szscatter/config.hpp"

namespace szscatter {

struct ResultRow {
  double energy = 0.0;
  std::string gauge_id;
  std::optional<double> transmission;
  std::optional<double> reflection;
  std::optional<double> theta_integral;
  std::optional<double> t_lower;
  std::optional<double> r_upper;
  std::optional<double> margin_t;  ///< oracle_t - t_lower
  std::optional<double> oracle_t;
  double runtime_ms = 0.0;
};

struct RunResult {
  std::vector<ResultRow> rows;
  /// Messages for every bound violation seen in verify mode.
  std::vector<std::string> violations;
};

inline const char* const kCsvHeader =
    "energy,gauge_id,transmission,reflection,theta_integral,t_lower,r_upper,margin_t,oracle_t,runtime_ms";

/// Worker count from SZ_SCATTER_THREADS, else hardware concurrency; at least 1.
int default_thread_count();

/// Executes the configured mode over every energy. Energies are evaluated
/// concurrently; rows come back sorted by energy, gauges in config order.
/// Numerical errors propagate; bound violations are collected, not thrown.
RunResult run(const RunConfig& config, int threads = 0);

void write_csv(const std::vector<ResultRow>& rows, std::ostream& out);
void write_csv(const std::vector<ResultRow>& rows, const std::string& path);

/// One '#'-labeled block per gauge: energy, T (exact when known, else computed),
/// t_lower. Blocks separated by blank lines. Throws std::invalid_argument on
/// empty rows (no file is created) and IoError when the file cannot be written.
void emit_plot_data(const std::vector<ResultRow>& rows, const std::string& path);

}  // namespace szscatter
