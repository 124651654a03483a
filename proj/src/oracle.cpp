#include "szscatter/oracle.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "szscatter/errors.hpp"

namespace szscatter {

namespace odeint = boost::numeric::odeint;

namespace {

// (Re psi, Im psi, Re psi', Im psi')
using State = std::array<double, 4>;

/// sin(z)/z continued through zero, for real z or z = i|z| (then sinh|z|/|z|).
double sinc_squared(double k2, double width) {
  if (k2 == 0.0) return 1.0;
  const double z = std::sqrt(std::abs(k2)) * width;
  if (z < 1e-4) return 1.0 - (k2 > 0 ? 1.0 : -1.0) * z * z / 3.0;
  const double s = k2 > 0 ? std::sin(z) / z : std::sinh(z) / z;
  return s * s;
}

}  // namespace

std::string to_string(OracleMethod m) {
  switch (m) {
    case OracleMethod::direct_integration:
      return "direct_integration";
    case OracleMethod::analytic_square_barrier:
      return "analytic_square_barrier";
    case OracleMethod::analytic_reflectionless:
      return "analytic_reflectionless";
  }
  return "unknown";
}

OracleResult direct_integrate(const PotentialProfile& p, const EnergySpec& e, const DomainGrid& grid, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("direct_integrate: tol must be > 0");
  e.validate();
  const double c = e.coupling();
  const double kl2 = c * (e.energy - p.v_left()), kr2 = c * (e.energy - p.v_right());
  if (!(kl2 > 0.0) || !(kr2 > 0.0)) throw AsymptoticallyClosedChannel("direct_integrate: closed asymptotic channel");
  const double kl = std::sqrt(kl2), kr = std::sqrt(kr2);

  const std::vector<double> nodes = grid.nodes();
  std::vector<double> cuts{grid.x_min};
  for (double d : p.discontinuities())
    if (d > grid.x_min && d < grid.x_max) cuts.push_back(d);
  cuts.push_back(grid.x_max);

  OracleResult out;
  out.method = OracleMethod::direct_integration;

  const double amp = 1.0 / std::sqrt(kl);
  State y{amp, 0.0, 0.0, kl * amp};

  auto controlled = odeint::make_controlled(tol, tol, odeint::runge_kutta_fehlberg78<State>());
  const double dx0 = std::min(grid.max_step, 1e-2);
  const double min_step = 1e-14 * grid.width();

  auto sample = [&](double x, const State& s) {
    out.psi_samples.push_back({x, {s[0], s[1]}, {s[2], s[3]}});
  };
  sample(nodes.front(), y);

  std::size_t next_node = 1;
  double x = grid.x_min;
  for (std::size_t ci = 1; ci < cuts.size(); ++ci) {
    const double lo = cuts[ci - 1], hi = cuts[ci];
    auto rhs = [&](const State& s, State& ds, double t) {
      const double xe = inside(t, lo, hi);
      const double k2 = c * (e.energy - p(xe));
      ds[0] = s[2];
      ds[1] = s[3];
      ds[2] = -k2 * s[0];
      ds[3] = -k2 * s[1];
    };
    // Advance node by node so every grid node gets a sample.
    while (next_node < nodes.size() && nodes[next_node] <= hi) {
      const double target = nodes[next_node];
      double dt = std::min(dx0, target - x);
      while (x < target) {
        const bool last = dt >= target - x;
        if (last) dt = target - x;
        double xs = x;
        if (controlled.try_step(rhs, y, xs, dt) == odeint::success) {
          x = last ? target : xs;
        } else if (dt < min_step) {
          std::ostringstream os;
          os << "direct_integrate: step underflow at x = " << x;
          throw StepUnderflow(os.str());
        }
      }
      x = target;
      sample(x, y);
      ++next_node;
    }
  }

  const Complex psi{y[0], y[1]}, dpsi{y[2], y[3]};
  const Complex i{0.0, 1.0};
  const double x1 = grid.x_max;
  out.right_amplitude = 0.5 * (psi + dpsi / (i * kr)) * std::exp(-i * kr * x1);
  out.left_amplitude = 0.5 * (psi - dpsi / (i * kr)) * std::exp(i * kr * x1);
  const double incident = kr * std::norm(out.right_amplitude);
  out.transmission = 1.0 / incident;
  out.reflection = kr * std::norm(out.left_amplitude) / incident;
  return out;
}

OracleResult analytic_square_barrier(double v0, double width, const EnergySpec& e) {
  e.validate();
  if (!(e.energy > 0.0)) throw AsymptoticallyClosedChannel("analytic_square_barrier: E must be > 0");
  const double c = e.coupling();
  // V0^2 sin^2(k2 L) / (4E(E-V0)) = V0^2 c L^2 sinc^2(k2 L) / (4E), k2^2 = c (E - V0).
  const double k2sq = c * (e.energy - v0);
  const double term = v0 * v0 * c * width * width * sinc_squared(k2sq, width) / (4.0 * e.energy);
  OracleResult out;
  out.method = OracleMethod::analytic_square_barrier;
  out.transmission = 1.0 / (1.0 + term);
  out.reflection = term / (1.0 + term);
  return out;
}

OracleResult analytic_reflectionless(int ell, const EnergySpec& e) {
  if (ell < 1) throw std::invalid_argument("analytic_reflectionless: ell must be >= 1");
  e.validate();
  if (!(e.energy > 0.0)) throw AsymptoticallyClosedChannel("analytic_reflectionless: E must be > 0");
  OracleResult out;
  out.method = OracleMethod::analytic_reflectionless;
  out.transmission = 1.0;
  out.reflection = 0.0;
  return out;
}

}  // namespace szscatter
