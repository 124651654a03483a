#include "szscatter/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "szscatter/errors.hpp"

namespace szscatter {

ThetaField theta_field(const GaugeTriple& g, const WaveNumberField& w) {
  if (!g.is_real) throw ComplexGaugeRejected("bounds need a real gauge; " + g.id + " is complex");

  auto rho = std::make_shared<const RhoPair>(g, w);
  ThetaField t;
  t.gauge_id = g.id;
  t.theta = [rho](double x) {
    const GaugeTriple& gg = rho->gauge();
    const double pp = std::abs(gg.phi_prime(x).real());
    if (!(pp > gg.phi_prime_floor)) {
      std::ostringstream os;
      os << "theta: degenerate phi' at x = " << x;
      throw GaugeDegenerate(os.str());
    }
    return std::hypot(rho->rho1(x).real(), rho->rho2(x).real()) / (2.0 * pp);
  };

  for (double k : g.kinks) {
    const double before = g.phi_prime(std::nextafter(k, -INFINITY)).real();
    const double after = g.phi_prime(std::nextafter(k, INFINITY)).real();
    if (!(before * after > 0.0)) throw GaugeDegenerate("theta: phi' changes sign across a jump");
    t.jumps.emplace_back(k, 0.5 * std::abs(std::log(after / before)));
  }
  t.breakpoints = w.discontinuities();
  const std::vector<double> knots = w.potential().knots();
  t.breakpoints.insert(t.breakpoints.end(), knots.begin(), knots.end());
  t.breakpoints.insert(t.breakpoints.end(), g.kinks.begin(), g.kinks.end());
  return t;
}

double theta_integral(const ThetaField& t, const DomainGrid& grid, double tol, double* error_estimate) {
  if (!(tol > 0.0)) throw std::invalid_argument("theta_integral: tol must be > 0");
  std::vector<double> cuts{grid.x_min};
  for (const auto* pts : {&grid.breakpoints, &t.breakpoints})
    for (double b : *pts)
      if (b > grid.x_min && b < grid.x_max) cuts.push_back(b);
  cuts.push_back(grid.x_max);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  double total = 0.0, error = 0.0;
  // Each segment gets an equal share of a tenth of the absolute budget, turned
  // into a relative target with a single-rule estimate of its size.
  const double share = 0.1 * tol / static_cast<double>(cuts.size() - 1);
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const double lo = cuts[i - 1], hi = cuts[i];
    auto f = [&](double x) { return t.theta(inside(x, lo, hi)); };
    double err = 0.0, l1 = 0.0;
    GK::integrate(f, lo, hi, 0, 0.0, &err, &l1);
    const double rel = l1 > 0.0 ? std::clamp(share / l1, 1e-13, 1e-3) : 1e-3;
    total += GK::integrate(f, lo, hi, 20, rel, &err);
    error += err;
  }
  for (auto [x, weight] : t.jumps)
    if (x > grid.x_min && x < grid.x_max) total += weight;

  if (error_estimate) *error_estimate = error;
  if (!(error <= tol)) {
    std::ostringstream os;
    os << "theta integral error estimate " << error << " exceeds " << tol;
    throw NonConvergence(os.str());
  }
  return total;
}

BoundReport make_bound_report(double theta_integral, std::string gauge_id) {
  BoundReport r;
  r.theta_integral = theta_integral;
  r.alpha_bound = std::cosh(theta_integral);
  r.beta_bound = std::sinh(theta_integral);
  const double sech = 1.0 / r.alpha_bound;
  const double tanh = std::tanh(theta_integral);
  r.t_lower = sech * sech;
  r.r_upper = tanh * tanh;
  r.gauge_id = std::move(gauge_id);
  return r;
}

BoundReport bound_report(const PotentialProfile& p, const EnergySpec& e, const GaugeTriple& g,
                         const DomainGrid& grid, double tol) {
  const WaveNumberField w = wavenumber_field(p, e);
  return make_bound_report(theta_integral(theta_field(g, w), grid, tol), g.id);
}

GaugeFamily interpolation_family(const WaveNumberField& w, const DomainGrid& grid, double k_ref) {
  GaugeFamily f;
  f.name = "interp";
  f.s_min = 0.0;
  f.s_max = 1.0;
  f.baseline = 0.0;
  f.member = [w, grid, k_ref](double s) { return gauge_interpolated(w, grid, s, k_ref); };
  return f;
}

OptimizedGauge optimize_gauge(const PotentialProfile& p, const EnergySpec& e, const GaugeFamily& family,
                              const DomainGrid& grid, double tol, const OptimizerConfig& config) {
  if (!family.member || !(family.s_min <= family.s_max)) throw EmptyFamily("gauge family is empty");
  if (config.scan_points < 2 || !(config.s_tol > 0.0)) throw std::invalid_argument("optimize_gauge: bad config");
  const WaveNumberField w = wavenumber_field(p, e);

  auto evaluate = [&](double s) -> std::optional<double> {
    try {
      return theta_integral(theta_field(family.member(s), w), grid, tol);
    } catch (const TurningPoint&) {
      return std::nullopt;
    } catch (const GaugeDegenerate&) {
      return std::nullopt;
    }
  };

  struct Candidate {
    double s;
    double value;
  };
  std::optional<Candidate> best;
  auto consider = [&](double s, std::optional<double> v) {
    if (!v) return;
    if (!best || *v < best->value || (*v == best->value && s < best->s)) best = Candidate{s, *v};
  };

  const std::optional<double> baseline = evaluate(family.baseline);
  consider(family.baseline, baseline);

  const int n = config.scan_points;
  std::vector<double> grid_s(n);
  std::vector<std::optional<double>> grid_v(n);
  for (int i = 0; i < n; ++i) {
    grid_s[i] = family.s_min + (family.s_max - family.s_min) * i / (n - 1);
    grid_v[i] = grid_s[i] == family.baseline ? baseline : evaluate(grid_s[i]);
    consider(grid_s[i], grid_v[i]);
  }
  if (!best) throw InadmissibleFamily("no admissible member in gauge family " + family.name);

  // Golden section on the scan cell pair around the best scan point.
  auto scan_best = std::min_element(grid_v.begin(), grid_v.end(), [](const auto& a, const auto& b) {
    if (!a) return false;
    if (!b) return true;
    return *a < *b;
  });
  if (*scan_best) {
    const int i = static_cast<int>(scan_best - grid_v.begin());
    double lo = grid_s[std::max(0, i - 1)], hi = grid_s[std::min(n - 1, i + 1)];
    auto value = [&](double s) {
      auto v = evaluate(s);
      consider(s, v);
      return v ? *v : std::numeric_limits<double>::infinity();
    };
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - ratio * (hi - lo), b = lo + ratio * (hi - lo);
    double fa = value(a), fb = value(b);
    while (hi - lo > config.s_tol) {
      if (fa <= fb) {
        hi = b;
        b = a;
        fb = fa;
        a = hi - ratio * (hi - lo);
        fa = value(a);
      } else {
        lo = a;
        a = b;
        fa = fb;
        b = lo + ratio * (hi - lo);
        fb = value(b);
      }
    }
  }

  OptimizedGauge out;
  out.s = best->s;
  out.gauge = family.member(best->s);
  out.report = make_bound_report(best->value, out.gauge.id);
  out.baseline_admissible = baseline.has_value();
  if (baseline) out.baseline_report = make_bound_report(*baseline, family.member(family.baseline).id);
  return out;
}

VerificationRecord verify_bounds(const BoundReport& report, const OracleResult& exact) {
  VerificationRecord rec;
  rec.gauge_id = report.gauge_id;
  rec.transmission = exact.transmission;
  rec.reflection = exact.reflection;
  rec.t_lower = report.t_lower;
  rec.r_upper = report.r_upper;
  rec.margin_t = exact.transmission - report.t_lower;
  rec.margin_r = report.r_upper - exact.reflection;
  if (rec.margin_t < -kBoundSlack || rec.margin_r < -kBoundSlack) {
    std::ostringstream os;
    os.precision(17);
    os << "bound violated for gauge " << report.gauge_id << ": T=" << exact.transmission
       << " t_lower=" << report.t_lower << " R=" << exact.reflection << " r_upper=" << report.r_upper;
    throw BoundViolation(os.str());
  }
  return rec;
}

}  // namespace szscatter
