#include "szscatter/gauges.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "szscatter/errors.hpp"

namespace szscatter {

namespace {

GaugeTriple::Fn zero_fn() {
  return [](double) { return Complex{}; };
}

GaugeTriple::Fn constant_fn(double c) {
  return [c](double) { return Complex{c, 0.0}; };
}

std::vector<double> kinks_inside(const WaveNumberField& w, const DomainGrid& grid) {
  std::vector<double> out;
  for (double d : w.discontinuities())
    if (d > grid.x_min && d < grid.x_max) out.push_back(d);
  return out;
}

/// Nodes of the running integrals: grid cells plus every breakpoint.
std::vector<double> integration_nodes(const DomainGrid& grid, const std::vector<double>& extra) {
  std::vector<double> cuts = grid.breakpoints;
  cuts.insert(cuts.end(), extra.begin(), extra.end());
  return make_nodes(grid.x_min, grid.x_max, grid.max_step, cuts);
}

void require_above_barrier(const WaveNumberField& w, const DomainGrid& grid) {
  const auto nodes = grid.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::vector<double> probes{nodes[i]};
    if (i + 1 < nodes.size()) probes.push_back(0.5 * (nodes[i] + nodes[i + 1]));
    for (double x : probes) {
      // Both one-sided values at discontinuities.
      for (double y : {std::nextafter(x, -INFINITY), x, std::nextafter(x, INFINITY)}) {
        if (!(w.k_squared(y) > 0.0)) {
          std::ostringstream os;
          os << "turning point: k^2(" << y << ") = " << w.k_squared(y);
          throw TurningPoint(os.str());
        }
      }
    }
  }
}

}  // namespace

RhoPair::RhoPair(GaugeTriple gauge, WaveNumberField field) : gauge_(std::move(gauge)), field_(std::move(field)) {}

Complex RhoPair::rho1(double x) const {
  return gauge_.phi_double_prime(x) + 2.0 * gauge_.chi(x) * gauge_.phi_prime(x);
}

Complex RhoPair::rho2(double x) const {
  const Complex chi = gauge_.chi(x);
  const Complex pp = gauge_.phi_prime(x);
  return field_.k_squared(x) + chi * chi + gauge_.chi_prime(x) - pp * pp;
}

void validate_gauge(GaugeTriple& g, const DomainGrid& grid) {
  auto nodes = grid.nodes();
  std::vector<double> probes;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    probes.push_back(nodes[i]);
    if (i + 1 < nodes.size()) probes.push_back(0.5 * (nodes[i] + nodes[i + 1]));
  }
  for (double k : g.kinks) {
    probes.push_back(std::nextafter(k, -INFINITY));
    probes.push_back(std::nextafter(k, INFINITY));
  }

  double biggest = 0.0;
  for (double x : probes) biggest = std::max(biggest, std::abs(g.phi_prime(x)));
  g.phi_prime_floor = kDegeneracyRatio * biggest;

  for (double x : probes) {
    const Complex pp = g.phi_prime(x);
    if (!(std::abs(pp) > g.phi_prime_floor)) {
      std::ostringstream os;
      os << "gauge " << g.id << ": |phi'(" << x << ")| = " << std::abs(pp) << " is degenerate";
      throw GaugeDegenerate(os.str());
    }
  }
  if (g.is_real) {
    for (double x : nodes) {
      for (const auto* fn : {&g.phi, &g.phi_prime, &g.phi_double_prime, &g.delta, &g.delta_prime, &g.chi,
                             &g.chi_prime}) {
        if ((*fn)(x).imag() != 0.0)
          throw std::invalid_argument("gauge " + g.id + " is flagged real but has complex values");
      }
    }
  }
}

GaugeTriple gauge_constant(double k_ref) { return gauge_constant_chi(k_ref, 0.0); }

GaugeTriple gauge_constant_chi(double k_ref, double chi) {
  if (!(k_ref > 0.0)) throw std::invalid_argument("gauge_constant: k_ref must be > 0");
  GaugeTriple g;
  g.phi = [k_ref](double x) { return Complex{k_ref * x, 0.0}; };
  g.phi_prime = constant_fn(k_ref);
  g.phi_double_prime = zero_fn();
  g.delta = zero_fn();
  g.delta_prime = zero_fn();
  g.chi = constant_fn(chi);
  g.chi_prime = zero_fn();
  g.is_real = true;
  g.phi_prime_floor = kDegeneracyRatio * k_ref;
  std::ostringstream os;
  os << "constant";
  if (chi != 0.0) os << "(chi=" << chi << ")";
  g.id = os.str();
  return g;
}

GaugeTriple gauge_interpolated(const WaveNumberField& w, const DomainGrid& grid, double s, double k_ref) {
  if (!(k_ref > 0.0)) throw std::invalid_argument("gauge_interpolated: k_ref must be > 0");
  if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("gauge_interpolated: s must lie in [0, 1]");
  if (s > 0.0) require_above_barrier(w, grid);

  auto field = std::make_shared<const WaveNumberField>(w);
  auto phi_prime_real = [field, s, k_ref](double x) {
    const double k = s > 0.0 ? std::sqrt(field->k_squared(x)) : 0.0;
    return (1.0 - s) * k_ref + s * k;
  };

  GaugeTriple g;
  g.kinks = s > 0.0 ? kinks_inside(w, grid) : std::vector<double>{};
  auto phi = std::make_shared<const CumulativeIntegral<double>>(phi_prime_real, integration_nodes(grid, g.kinks));
  g.phi = [phi](double x) { return Complex{(*phi)(x), 0.0}; };
  g.phi_prime = [phi_prime_real](double x) { return Complex{phi_prime_real(x), 0.0}; };
  g.phi_double_prime = [field, s](double x) {
    if (s == 0.0) return Complex{};
    return Complex{s * field->k_squared_prime(x) / (2.0 * std::sqrt(field->k_squared(x))), 0.0};
  };
  g.delta = zero_fn();
  g.delta_prime = zero_fn();
  g.chi = zero_fn();
  g.chi_prime = zero_fn();
  g.is_real = true;
  std::ostringstream os;
  if (s == 1.0)
    os << "wkb";
  else
    os << "interp(s=" << s << ")";
  g.id = os.str();
  validate_gauge(g, grid);
  return g;
}

GaugeTriple gauge_wkb(const WaveNumberField& w, const DomainGrid& grid) {
  return gauge_interpolated(w, grid, 1.0, w.k_left());
}

GaugeTriple gauge_special_delta(const GaugeTriple& base, const WaveNumberField& w, const DomainGrid& grid) {
  for (double x : grid.nodes())
    if (base.delta(x) != Complex{} || base.delta_prime(x) != Complex{})
      throw std::invalid_argument("gauge_special_delta: base gauge must have Delta = 0");

  GaugeTriple g = base;
  validate_gauge(g, grid);
  auto rho = std::make_shared<const RhoPair>(base, w);
  auto rate = [rho](double x) { return diagonal_rate(rho->rho2(x), rho->gauge().phi_prime(x)); };
  std::vector<double> cuts = base.kinks;
  auto delta = std::make_shared<const CumulativeIntegral<Complex>>(rate, integration_nodes(grid, cuts));
  g.delta = [delta](double x) { return (*delta)(x); };
  g.delta_prime = rate;
  g.id = base.id + "+special_delta";
  return g;
}

GaugeTriple gauge_antiphase(const GaugeTriple& base) {
  GaugeTriple g = base;
  auto phi = base.phi;
  auto phi_prime = base.phi_prime;
  g.delta = [phi](double x) { return -phi(x); };
  g.delta_prime = [phi_prime](double x) { return -phi_prime(x); };
  g.id = base.id + "+antiphase";
  return g;
}

GaugeTriple gauge_tabulated(const GaugeTables& tables, const DomainGrid& grid) {
  auto cubic = [](const std::vector<std::pair<double, double>>& rows) {
    std::vector<double> x, y;
    for (auto [px, py] : rows) {
      x.push_back(px);
      y.push_back(py);
    }
    return std::make_shared<const MonotoneCubic>(std::move(x), std::move(y));
  };

  GaugeTriple g;
  auto pp = cubic(tables.phi_prime);
  auto phi = std::make_shared<const CumulativeIntegral<double>>([pp](double x) { return (*pp)(x); },
                                                                integration_nodes(grid, {pp->front_x(), pp->back_x()}));
  g.phi = [phi](double x) { return Complex{(*phi)(x), 0.0}; };
  g.phi_prime = [pp](double x) { return Complex{(*pp)(x), 0.0}; };
  g.phi_double_prime = [pp](double x) { return Complex{pp->derivative(x), 0.0}; };

  if (tables.delta) {
    auto d = cubic(*tables.delta);
    g.delta = [d](double x) { return Complex{(*d)(x), 0.0}; };
    g.delta_prime = [d](double x) { return Complex{d->derivative(x), 0.0}; };
  } else {
    g.delta = zero_fn();
    g.delta_prime = zero_fn();
  }
  if (tables.chi) {
    auto c = cubic(*tables.chi);
    g.chi = [c](double x) { return Complex{(*c)(x), 0.0}; };
    g.chi_prime = [c](double x) { return Complex{c->derivative(x), 0.0}; };
  } else {
    g.chi = zero_fn();
    g.chi_prime = zero_fn();
  }
  g.is_real = true;
  g.id = "user";
  validate_gauge(g, grid);
  return g;
}

double derivative_consistency(const GaugeTriple& g, const std::vector<double>& xs, double h) {
  double worst = 0.0;
  auto check = [&](const GaugeTriple::Fn& f, const GaugeTriple::Fn& df, double x) {
    const Complex fd = (f(x + h) - f(x - h)) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - df(x)));
  };
  for (double x : xs) {
    check(g.phi, g.phi_prime, x);
    check(g.phi_prime, g.phi_double_prime, x);
    check(g.delta, g.delta_prime, x);
    check(g.chi, g.chi_prime, x);
  }
  return worst;
}

}  // namespace szscatter
