#include "szscatter/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "szscatter/errors.hpp"

namespace szscatter {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double sech(double x) { return 1.0 / std::cosh(x); }

}  // namespace

PotentialProfile::PotentialProfile(Kind kind) : kind_(std::move(kind)) {
  std::visit(overloaded{
                 [&](const SquareBarrier& s) {
                   if (!(s.width >= 0.0)) throw std::invalid_argument("square barrier width must be >= 0");
                   if (s.v0 != 0.0 && s.width > 0.0)
                     discontinuities_ = {s.center - 0.5 * s.width, s.center + 0.5 * s.width};
                 },
                 [&](const Gaussian& g) {
                   if (!(g.sigma > 0.0)) throw std::invalid_argument("gaussian sigma must be > 0");
                 },
                 [&](const PoschlTeller& pt) {
                   if (pt.ell < 1) throw std::invalid_argument("poschl-teller ell must be >= 1");
                   if (!(pt.scale > 0.0)) throw std::invalid_argument("poschl-teller scale must be > 0");
                 },
                 [&](const Tabulated& t) {
                   v_left_ = t.table->front_y();
                   v_right_ = t.table->back_y();
                   // V' jumps where the table meets its clamped tails.
                   if (t.table->xs().size() > 1)
                     discontinuities_ = {t.table->front_x(), t.table->back_x()};
                 },
             },
             kind_);
}

PotentialProfile PotentialProfile::square_barrier(double v0, double width, double center) {
  return PotentialProfile(SquareBarrier{v0, width, center});
}

PotentialProfile PotentialProfile::gaussian(double v0, double sigma, double center) {
  return PotentialProfile(Gaussian{v0, sigma, center});
}

PotentialProfile PotentialProfile::poschl_teller(int ell, double scale) {
  return PotentialProfile(PoschlTeller{ell, scale});
}

PotentialProfile PotentialProfile::tabulated(std::vector<std::pair<double, double>> samples) {
  std::vector<double> x, y;
  x.reserve(samples.size());
  y.reserve(samples.size());
  for (auto [px, py] : samples) {
    x.push_back(px);
    y.push_back(py);
  }
  return PotentialProfile(Tabulated{std::make_shared<const MonotoneCubic>(std::move(x), std::move(y))});
}

PotentialProfile PotentialProfile::free() { return square_barrier(0.0, 0.0, 0.0); }

std::vector<double> PotentialProfile::knots() const {
  if (const auto* t = std::get_if<Tabulated>(&kind_)) {
    const auto xs = t->table->xs();
    return {xs.begin(), xs.end()};
  }
  return {};
}

double PotentialProfile::operator()(double x) const {
  return std::visit(overloaded{
                        [x](const SquareBarrier& s) {
                          const double lo = s.center - 0.5 * s.width, hi = s.center + 0.5 * s.width;
                          return (x >= lo && x <= hi) ? s.v0 : 0.0;
                        },
                        [x](const Gaussian& g) {
                          const double u = (x - g.center) / g.sigma;
                          return g.v0 * std::exp(-0.5 * u * u);
                        },
                        [x](const PoschlTeller& pt) {
                          const double s = sech(x / pt.scale);
                          return -pt.ell * (pt.ell + 1.0) * s * s / (pt.scale * pt.scale);
                        },
                        [x](const Tabulated& t) { return (*t.table)(x); },
                    },
                    kind_);
}

double PotentialProfile::derivative(double x) const {
  return std::visit(overloaded{
                        [](const SquareBarrier&) { return 0.0; },
                        [x](const Gaussian& g) {
                          const double u = (x - g.center) / g.sigma;
                          return -g.v0 * u / g.sigma * std::exp(-0.5 * u * u);
                        },
                        [x](const PoschlTeller& pt) {
                          const double u = x / pt.scale;
                          const double s = sech(u);
                          const double sc3 = pt.scale * pt.scale * pt.scale;
                          return 2.0 * pt.ell * (pt.ell + 1.0) * s * s * std::tanh(u) / sc3;
                        },
                        [x](const Tabulated& t) { return t.table->derivative(x); },
                    },
                    kind_);
}

bool PotentialProfile::is_flat() const {
  return std::visit(overloaded{
                        [](const SquareBarrier& s) { return s.v0 == 0.0 || s.width == 0.0; },
                        [](const Gaussian& g) { return g.v0 == 0.0; },
                        [](const PoschlTeller&) { return false; },
                        [](const Tabulated& t) {
                          auto ys = t.table->ys();
                          return std::all_of(ys.begin(), ys.end(), [&](double y) { return y == ys.front(); });
                        },
                    },
                    kind_);
}

std::string PotentialProfile::describe() const {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const SquareBarrier& s) {
                   os << "square_barrier(V0=" << s.v0 << ",width=" << s.width << ",center=" << s.center << ")";
                 },
                 [&](const Gaussian& g) {
                   os << "gaussian(V0=" << g.v0 << ",sigma=" << g.sigma << ",center=" << g.center << ")";
                 },
                 [&](const PoschlTeller& pt) { os << "poschl_teller(ell=" << pt.ell << ",scale=" << pt.scale << ")"; },
                 [&](const Tabulated& t) { os << "tabulated(" << t.table->xs().size() << " samples)"; },
             },
             kind_);
  return os.str();
}

void EnergySpec::validate() const {
  if (!std::isfinite(energy)) throw ValidationError("energy", "must be finite");
  if (!std::isfinite(hbar) || !(hbar > 0)) throw ValidationError("hbar", "must be finite and > 0");
  if (!std::isfinite(mass) || !(mass > 0)) throw ValidationError("mass", "must be finite and > 0");
}

WaveNumberField::WaveNumberField(PotentialProfile potential, EnergySpec energy)
    : potential_(std::move(potential)), energy_(energy), coupling_(energy.coupling()) {
  energy_.validate();
  const double kl2 = coupling_ * (energy_.energy - potential_.v_left());
  const double kr2 = coupling_ * (energy_.energy - potential_.v_right());
  if (!(kl2 > 0.0) || !(kr2 > 0.0)) {
    std::ostringstream os;
    os << "closed asymptotic channel: k^2(-inf)=" << kl2 << ", k^2(+inf)=" << kr2;
    throw AsymptoticallyClosedChannel(os.str());
  }
  k_left_ = std::sqrt(kl2);
  k_right_ = std::sqrt(kr2);
}

WaveNumberField wavenumber_field(const PotentialProfile& p, const EnergySpec& e) {
  return WaveNumberField(p, e);
}

std::vector<double> DomainGrid::nodes() const { return make_nodes(x_min, x_max, max_step, breakpoints); }

DomainGrid truncate_domain(const PotentialProfile& p, const EnergySpec& e, double tol, double max_step,
                           double max_half_width) {
  if (!(tol > 0.0)) throw ValidationError("tail_tolerance", "must be > 0");
  if (!(max_step > 0.0)) throw ValidationError("max_step", "must be > 0");
  e.validate();
  const double threshold = tol * std::max(std::abs(e.energy), 1.0);
  // Land strictly outside the analytic crossing point.
  const double widen = 1.0 + 1e-9;

  DomainGrid grid;
  grid.tail_tolerance = tol;
  grid.max_step = max_step;

  auto minimal = [&](double center) {
    grid.x_min = center - max_step;
    grid.x_max = center + max_step;
  };

  if (p.is_flat()) {
    minimal(0.0);
  } else {
    std::visit(overloaded{
                   [&](const SquareBarrier& s) {
                     grid.x_min = s.center - 0.5 * s.width - max_step;
                     grid.x_max = s.center + 0.5 * s.width + max_step;
                   },
                   [&](const Gaussian& g) {
                     const double amp = std::abs(g.v0);
                     if (amp < threshold) return minimal(g.center);
                     const double h = g.sigma * std::sqrt(2.0 * std::log(amp / threshold)) * widen;
                     grid.x_min = g.center - h;
                     grid.x_max = g.center + h;
                   },
                   [&](const PoschlTeller& pt) {
                     const double amp = pt.ell * (pt.ell + 1.0) / (pt.scale * pt.scale);
                     if (amp < threshold) return minimal(0.0);
                     const double h = pt.scale * std::acosh(std::sqrt(amp / threshold)) * widen;
                     grid.x_min = -h;
                     grid.x_max = h;
                   },
                   [&](const Tabulated& t) {
                     grid.x_min = t.table->front_x() - max_step;
                     grid.x_max = t.table->back_x() + max_step;
                   },
               },
               p.kind());
  }

  if (0.5 * grid.width() > max_half_width) {
    std::ostringstream os;
    os << p.describe() << " does not reach its asymptotes within half-width " << max_half_width;
    throw NoDecay(os.str());
  }
  if (!(std::abs(p(grid.x_min) - p.v_left()) < threshold) || !(std::abs(p(grid.x_max) - p.v_right()) < threshold))
    throw NoDecay(p.describe() + ": tail tolerance not met at the window edges");

  for (double d : p.discontinuities())
    if (d > grid.x_min && d < grid.x_max) grid.breakpoints.push_back(d);
  return grid;
}

std::vector<std::pair<double, double>> parse_table(std::istream& in) {
  std::vector<std::pair<double, double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double x, v;
    if (!(ls >> x)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw ParseError(lineno, "expected two numeric columns");
    }
    std::string extra;
    if (!(ls >> v) || (ls >> extra)) throw ParseError(lineno, "expected two numeric columns");
    if (!rows.empty() && !(x > rows.back().first))
      throw ParseError(lineno, "positions must be strictly increasing");
    rows.emplace_back(x, v);
  }
  if (rows.empty()) throw ParseError(lineno, "table has no samples");
  return rows;
}

std::vector<std::pair<double, double>> load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open table " + path);
  try {
    return parse_table(in);
  } catch (const ParseError& err) {
    throw ParseError(err.line(), path + ": " + err.what());
  }
}

}  // namespace szscatter
