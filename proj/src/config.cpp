#include "szscatter/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "szscatter/errors.hpp"

namespace szscatter {

namespace {

const std::map<std::string, std::set<std::string>> kSchema{
    {"run", {"mode"}},
    {"potential", {"kind", "v0", "width", "center", "sigma", "ell", "scale", "file"}},
    {"units", {"hbar", "mass"}},
    {"energies", {"values", "start", "stop", "count"}},
    {"gauges", {"list", "k_ref"}},
    {"user_gauge", {"phi_prime", "delta", "chi"}},
    {"tolerances", {"ode_tol", "quad_tol", "tail_tol", "max_step"}},
    {"outputs", {"csv_path", "plot_data_path"}},
    {"optimizer", {"scan_points", "s_tol"}},
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  int line;
};

using Sections = std::map<std::string, std::map<std::string, Entry>>;

double to_number(const Entry& e, const std::string& field) {
  std::size_t used = 0;
  double v;
  try {
    v = std::stod(e.value, &used);
  } catch (const std::exception&) {
    throw ParseError(e.line, field + ": expected a number, got '" + e.value + "'");
  }
  if (used != e.value.size()) throw ParseError(e.line, field + ": expected a number, got '" + e.value + "'");
  return v;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  if (base_dir.empty() || std::filesystem::path(path).is_absolute()) return path;
  return (std::filesystem::path(base_dir) / path).string();
}

Sections tokenize(const std::string& text) {
  Sections sections;
  std::string current = "run";
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(lineno, "unterminated section header");
      current = trim(line.substr(1, line.size() - 2));
      if (!kSchema.count(current)) throw ParseError(lineno, "unknown section [" + current + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!kSchema.at(current).count(key)) throw ParseError(lineno, "unknown key '" + key + "' in [" + current + "]");
    if (value.empty()) throw ParseError(lineno, "empty value for '" + key + "'");
    auto& sec = sections[current];
    if (sec.count(key)) throw ParseError(lineno, "duplicate key '" + key + "'");
    sec[key] = {value, lineno};
  }
  return sections;
}

}  // namespace

std::string to_string(Mode m) {
  switch (m) {
    case Mode::scatter:
      return "scatter";
    case Mode::bounds:
      return "bounds";
    case Mode::optimize:
      return "optimize";
    case Mode::verify:
      return "verify";
  }
  return "unknown";
}

Mode parse_mode(const std::string& name) {
  if (name == "scatter") return Mode::scatter;
  if (name == "bounds") return Mode::bounds;
  if (name == "optimize") return Mode::optimize;
  if (name == "verify") return Mode::verify;
  throw ValidationError("run.mode", "unknown mode '" + name + "'");
}

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
  const Sections s = tokenize(text);
  auto get = [&](const std::string& sec, const std::string& key) -> const Entry* {
    auto it = s.find(sec);
    if (it == s.end()) return nullptr;
    auto jt = it->second.find(key);
    return jt == it->second.end() ? nullptr : &jt->second;
  };
  auto number = [&](const std::string& sec, const std::string& key, double fallback) {
    const Entry* e = get(sec, key);
    return e ? to_number(*e, sec + "." + key) : fallback;
  };

  RunConfig cfg;
  if (const Entry* e = get("run", "mode")) cfg.mode = parse_mode(e->value);

  // Potential.
  const Entry* kind = get("potential", "kind");
  if (!kind) throw ValidationError("potential.kind", "required");
  try {
    if (kind->value == "square_barrier") {
      cfg.potential = PotentialProfile::square_barrier(number("potential", "v0", 1.0), number("potential", "width", 1.0),
                                                       number("potential", "center", 0.0));
    } else if (kind->value == "gaussian") {
      cfg.potential = PotentialProfile::gaussian(number("potential", "v0", 1.0), number("potential", "sigma", 1.0),
                                                 number("potential", "center", 0.0));
    } else if (kind->value == "poschl_teller") {
      const double ell = number("potential", "ell", 1.0);
      if (ell != std::floor(ell) || ell < 1) throw ValidationError("potential.ell", "must be a positive integer");
      cfg.potential = PotentialProfile::poschl_teller(static_cast<int>(ell), number("potential", "scale", 1.0));
    } else if (kind->value == "tabulated") {
      const Entry* file = get("potential", "file");
      if (!file) throw ValidationError("potential.file", "required for tabulated potentials");
      cfg.potential = PotentialProfile::tabulated(load_table(resolve(base_dir, file->value)));
    } else if (kind->value == "free") {
      cfg.potential = PotentialProfile::free();
    } else {
      throw ValidationError("potential.kind", "unknown kind '" + kind->value + "'");
    }
  } catch (const std::invalid_argument& err) {
    throw ValidationError("potential", err.what());
  }

  cfg.units.hbar = number("units", "hbar", 1.0);
  cfg.units.mass = number("units", "mass", 0.5);
  if (!(cfg.units.hbar > 0) || !std::isfinite(cfg.units.hbar)) throw ValidationError("units.hbar", "must be > 0");
  if (!(cfg.units.mass > 0) || !std::isfinite(cfg.units.mass)) throw ValidationError("units.mass", "must be > 0");

  // Energies.
  const Entry* values = get("energies", "values");
  const bool ranged = get("energies", "start") || get("energies", "stop") || get("energies", "count");
  if (values && ranged) throw ValidationError("energies", "give either values or start/stop/count");
  if (values) {
    for (const auto& item : split_list(values->value)) cfg.energies.push_back(to_number({item, values->line}, "energies.values"));
  } else if (ranged) {
    if (!get("energies", "start") || !get("energies", "stop") || !get("energies", "count"))
      throw ValidationError("energies", "start, stop and count are all required");
    const double start = number("energies", "start", 0), stop = number("energies", "stop", 0);
    const double count = number("energies", "count", 0);
    if (count < 1 || count != std::floor(count)) throw ValidationError("energies.count", "must be a positive integer");
    const int n = static_cast<int>(count);
    for (int i = 0; i < n; ++i) cfg.energies.push_back(n == 1 ? start : start + (stop - start) * i / (n - 1));
  }
  if (cfg.energies.empty()) throw ValidationError("energies", "at least one energy is required");
  for (double e : cfg.energies)
    if (!std::isfinite(e)) throw ValidationError("energies", "must be finite");
  std::sort(cfg.energies.begin(), cfg.energies.end());

  // Gauges.
  if (const Entry* list = get("gauges", "list")) cfg.gauges = split_list(list->value);
  if (cfg.mode != Mode::optimize && cfg.gauges.empty()) throw ValidationError("gauges.list", "at least one gauge");
  for (const auto& g : cfg.gauges)
    if (std::find(kGaugeNames.begin(), kGaugeNames.end(), g) == kGaugeNames.end())
      throw ValidationError("gauges.list", "unknown gauge '" + g + "'");
  if (get("gauges", "k_ref")) {
    cfg.k_ref = number("gauges", "k_ref", 0.0);
    if (!(*cfg.k_ref > 0)) throw ValidationError("gauges.k_ref", "must be > 0");
  }
  const bool wants_user = std::find(cfg.gauges.begin(), cfg.gauges.end(), "user") != cfg.gauges.end();
  if (const Entry* pp = get("user_gauge", "phi_prime")) {
    GaugeTables t;
    t.phi_prime = load_table(resolve(base_dir, pp->value));
    if (const Entry* d = get("user_gauge", "delta")) t.delta = load_table(resolve(base_dir, d->value));
    if (const Entry* c = get("user_gauge", "chi")) t.chi = load_table(resolve(base_dir, c->value));
    cfg.user_gauge = std::move(t);
  } else if (wants_user) {
    throw ValidationError("user_gauge.phi_prime", "required when gauges.list contains 'user'");
  }

  // Tolerances.
  auto positive = [&](const std::string& key, double fallback) {
    const double v = number("tolerances", key, fallback);
    if (!(v > 0) || !std::isfinite(v)) throw ValidationError("tolerances." + key, "must be positive");
    return v;
  };
  cfg.tolerances.ode_tol = positive("ode_tol", cfg.tolerances.ode_tol);
  cfg.tolerances.quad_tol = positive("quad_tol", cfg.tolerances.quad_tol);
  cfg.tolerances.tail_tol = positive("tail_tol", cfg.tolerances.tail_tol);
  cfg.tolerances.max_step = positive("max_step", cfg.tolerances.max_step);

  if (const Entry* e = get("outputs", "csv_path")) cfg.outputs.csv_path = resolve(base_dir, e->value);
  if (const Entry* e = get("outputs", "plot_data_path")) cfg.outputs.plot_data_path = resolve(base_dir, e->value);

  const double scan = number("optimizer", "scan_points", cfg.optimizer.scan_points);
  if (scan < 2 || scan != std::floor(scan)) throw ValidationError("optimizer.scan_points", "must be an integer >= 2");
  cfg.optimizer.scan_points = static_cast<int>(scan);
  cfg.optimizer.s_tol = number("optimizer", "s_tol", cfg.optimizer.s_tol);
  if (!(cfg.optimizer.s_tol > 0)) throw ValidationError("optimizer.s_tol", "must be positive");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::filesystem::path(path).parent_path().string());
}

}  // namespace szscatter
