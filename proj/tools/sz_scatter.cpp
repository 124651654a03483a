#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "szscatter/config.hpp"
#include "szscatter/errors.hpp"
#include "szscatter/sweep.hpp"

using namespace szscatter;

namespace {
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitViolation = 4;
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scattering amplitudes and transmission bounds for 1D potentials"};
  std::string config_path, mode, out_path;
  app.add_option("--config", config_path, "run configuration file")->required();
  app.add_option("--mode", mode, "override run mode")->check(CLI::IsMember({"scatter", "bounds", "optimize", "verify"}));
  app.add_option("--out", out_path, "CSV output path (overrides outputs.csv_path)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  RunConfig cfg;
  try {
    cfg = load_config(config_path);
    if (!mode.empty()) cfg.mode = parse_mode(mode);
    if (!out_path.empty()) cfg.outputs.csv_path = out_path;
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    const RunResult result = run(cfg);
    if (cfg.outputs.csv_path.empty())
      write_csv(result.rows, std::cout);
    else
      write_csv(result.rows, cfg.outputs.csv_path);
    if (!cfg.outputs.plot_data_path.empty()) emit_plot_data(result.rows, cfg.outputs.plot_data_path);
    for (const auto& v : result.violations) std::cerr << "bound violation: " << v << '\n';
    if (!result.violations.empty()) return kExitViolation;
  } catch (const BoundViolation& e) {
    std::cerr << "bound violation: " << e.what() << '\n';
    return kExitViolation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ValidationError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
