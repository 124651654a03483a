#include "szscatter/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <ostream>
#include <thread>

#include "szscatter/bounds.hpp"
#include "szscatter/errors.hpp"
#include "szscatter/oracle.hpp"
#include "szscatter/sz_core.hpp"

namespace szscatter {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string fmt(const std::optional<double>& v) {
  if (!v) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  return buf;
}

struct EnergyOutcome {
  std::vector<ResultRow> rows;
  std::vector<std::string> violations;
  std::string notes;
};

struct Context {
  const RunConfig& cfg;
  PotentialProfile potential;
  EnergySpec energy;
  WaveNumberField field;
  DomainGrid grid;
  double k_ref;
};

// Builds the named gauge, or returns nullopt (with a note) when it is not
// admissible at this energy.
std::optional<GaugeTriple> build_gauge(const Context& c, const std::string& name, std::string& notes) {
  auto base = [&] {
    GaugeTriple g = gauge_constant(c.k_ref);
    validate_gauge(g, c.grid);
    return g;
  };
  if (name == "constant") return base();
  if (name == "special_delta") return gauge_special_delta(base(), c.field, c.grid);
  if (name == "antiphase") return gauge_antiphase(base());
  if (name == "user") {
    GaugeTriple g = gauge_tabulated(*c.cfg.user_gauge, c.grid);
    validate_gauge(g, c.grid);
    return g;
  }
  try {
    GaugeTriple g = gauge_wkb(c.field, c.grid);
    validate_gauge(g, c.grid);
    return g;
  } catch (const TurningPoint& e) {
    notes += "E=" + fmt(c.energy.energy) + ": wkb gauge skipped (" + e.what() + ")\n";
    return std::nullopt;
  }
}

void fill_bounds(ResultRow& row, const BoundReport& r) {
  row.theta_integral = r.theta_integral;
  row.t_lower = r.t_lower;
  row.r_upper = r.r_upper;
}

EnergyOutcome evaluate(const RunConfig& cfg, double energy) {
  EnergySpec spec = cfg.units;
  spec.energy = energy;
  spec.validate();
  const Tolerances& tol = cfg.tolerances;
  WaveNumberField field = wavenumber_field(cfg.potential, spec);
  DomainGrid grid = truncate_domain(cfg.potential, spec, tol.tail_tol, tol.max_step);
  const double k_ref = cfg.k_ref.value_or(field.k_left());
  Context c{cfg, cfg.potential, spec, field, grid, k_ref};

  EnergyOutcome out;
  std::optional<OracleResult> oracle;
  if (cfg.mode == Mode::verify) oracle = direct_integrate(cfg.potential, spec, grid, tol.ode_tol);

  if (cfg.mode == Mode::optimize) {
    const auto start = Clock::now();
    const GaugeFamily family = interpolation_family(field, grid, k_ref);
    const OptimizedGauge best = optimize_gauge(cfg.potential, spec, family, grid, tol.quad_tol, cfg.optimizer);
    const ScatteringAmplitudes amp = scattering_amplitudes(cfg.potential, spec, best.gauge, grid, tol.ode_tol);
    ResultRow row;
    row.energy = energy;
    row.gauge_id = best.gauge.id;
    row.transmission = amp.transmission;
    row.reflection = amp.reflection;
    fill_bounds(row, best.report);
    row.runtime_ms = elapsed_ms(start);
    out.rows.push_back(row);
    return out;
  }

  for (const auto& name : cfg.gauges) {
    const auto start = Clock::now();
    std::optional<GaugeTriple> g = build_gauge(c, name, out.notes);
    if (!g) continue;
    ResultRow row;
    row.energy = energy;
    row.gauge_id = g->id;
    const ScatteringAmplitudes amp = scattering_amplitudes(cfg.potential, spec, *g, grid, tol.ode_tol);
    row.transmission = amp.transmission;
    row.reflection = amp.reflection;
    if (cfg.mode != Mode::scatter && g->is_real) {
      const BoundReport report = bound_report(cfg.potential, spec, *g, grid, tol.quad_tol);
      fill_bounds(row, report);
      if (oracle) {
        row.oracle_t = oracle->transmission;
        row.margin_t = oracle->transmission - report.t_lower;
        try {
          verify_bounds(report, *oracle);
        } catch (const BoundViolation& e) {
          out.violations.push_back("E=" + fmt(energy) + " gauge " + g->id + ": " + e.what());
        }
      }
    }
    row.runtime_ms = elapsed_ms(start);
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace

int default_thread_count() {
  if (const char* env = std::getenv("SZ_SCATTER_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

RunResult run(const RunConfig& config, int threads) {
  if (threads <= 0) threads = default_thread_count();
  const std::size_t n = config.energies.size();
  std::vector<EnergyOutcome> outcomes(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        outcomes[i] = evaluate(config, config.energies[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  RunResult result;
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    std::cerr << outcomes[i].notes;
    for (auto& r : outcomes[i].rows) result.rows.push_back(std::move(r));
    for (auto& v : outcomes[i].violations) result.violations.push_back(std::move(v));
  }
  return result;
}

void write_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << fmt(r.energy) << ',' << r.gauge_id << ',' << fmt(r.transmission) << ',' << fmt(r.reflection) << ','
        << fmt(r.theta_integral) << ',' << fmt(r.t_lower) << ',' << fmt(r.r_upper) << ',' << fmt(r.margin_t) << ','
        << fmt(r.oracle_t) << ',' << fmt(r.runtime_ms) << '\n';
  }
}

void write_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  write_csv(rows, out);
  if (!out) throw IoError("write failed for " + path);
}

void emit_plot_data(const std::vector<ResultRow>& rows, const std::string& path) {
  if (rows.empty()) throw std::invalid_argument("emit_plot_data: no rows");
  std::vector<std::string> order;
  std::map<std::string, std::vector<const ResultRow*>> blocks;
  for (const auto& r : rows) {
    if (!blocks.count(r.gauge_id)) order.push_back(r.gauge_id);
    blocks[r.gauge_id].push_back(&r);
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  bool first = true;
  for (const auto& id : order) {
    if (!first) out << "\n\n";
    first = false;
    out << "# gauge " << id << "\n# energy T t_lower\n";
    for (const ResultRow* r : blocks[id]) {
      const std::optional<double> t = r->oracle_t ? r->oracle_t : r->transmission;
      out << fmt(r->energy) << ' ' << (t ? fmt(t) : "nan") << ' ' << (r->t_lower ? fmt(r->t_lower) : "nan") << '\n';
    }
  }
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace szscatter
