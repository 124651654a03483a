#include "szscatter/sz_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "szscatter/errors.hpp"

namespace szscatter {

namespace {

constexpr Complex kI{0.0, 1.0};

using Vec2 = std::array<Complex, 2>;

Vec2 operator*(const Matrix2& m, const Vec2& v) {
  return {m(0, 0) * v[0] + m(0, 1) * v[1], m(1, 0) * v[0] + m(1, 1) * v[1]};
}

std::vector<double> generator_breakpoints(const RhoPair& r) {
  std::vector<double> out = r.field().discontinuities();
  const auto& kinks = r.gauge().kinks;
  out.insert(out.end(), kinks.begin(), kinks.end());
  return out;
}

bool is_kink(const GaugeTriple& g, double x) { return std::find(g.kinks.begin(), g.kinks.end(), x) != g.kinks.end(); }

/// Re-matching across a jump of phi' at x, travelling in direction dir:
/// (a, b) after = M_after^{-1} M_before (a, b) before.
Matrix2 kink_matrix(const GaugeTriple& g, double x, double dir) {
  const double before = std::nextafter(x, -dir * INFINITY);
  const double after = std::nextafter(x, dir * INFINITY);
  return basis_matrix(g, after).inverse() * basis_matrix(g, before);
}

/// A state sitting exactly on a kink uses the basis of the point value phi'(x).
/// These convert between that basis and the one-sided basis on the side of travel.
Matrix2 leave_kink(const GaugeTriple& g, double x, double dir) {
  return basis_matrix(g, std::nextafter(x, dir * INFINITY)).inverse() * basis_matrix(g, x);
}
Matrix2 arrive_at_kink(const GaugeTriple& g, double x, double dir) {
  return basis_matrix(g, x).inverse() * basis_matrix(g, std::nextafter(x, -dir * INFINITY));
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Stepper {
  const RhoPair& rho;
  const EvolveOptions& opts;
  double min_step;

  Vec2 rate(double x, const Vec2& y, double lo, double hi) const { return rhs_matrix(rho, inside(x, lo, hi)) * y; }

  /// Integrates y from x to end; both inside one smooth cell. Returns the step size to try next.
  double run(double& x, Vec2& y, double end, double h) const {
    const double lo = x, hi = end;
    const double dir = end > x ? 1.0 : -1.0;
    h = dir * std::min(std::abs(h), opts.max_step);
    Vec2 k1 = rate(x, y, lo, hi);

    auto axpy = [&](std::initializer_list<std::pair<double, const Vec2*>> terms, double step) {
      Vec2 out = y;
      for (auto [c, k] : terms)
        if (c != 0.0) {
          out[0] += step * c * (*k)[0];
          out[1] += step * c * (*k)[1];
        }
      return out;
    };

    while (dir * (end - x) > 0.0) {
      bool last = false;
      if (dir * (x + h - end) >= 0.0) {
        h = end - x;
        last = true;
      }
      const Vec2 k2 = rate(x + c2 * h, axpy({{a21, &k1}}, h), lo, hi);
      const Vec2 k3 = rate(x + c3 * h, axpy({{a31, &k1}, {a32, &k2}}, h), lo, hi);
      const Vec2 k4 = rate(x + c4 * h, axpy({{a41, &k1}, {a42, &k2}, {a43, &k3}}, h), lo, hi);
      const Vec2 k5 = rate(x + c5 * h, axpy({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}, h), lo, hi);
      const Vec2 k6 = rate(x + h, axpy({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}, h), lo, hi);
      const Vec2 y5 = axpy({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}}, h);
      const double x_new = last ? end : x + h;
      const Vec2 k7 = rate(x_new, y5, lo, hi);

      double err = 0.0;
      for (int i = 0; i < 2; ++i) {
        const Complex e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double scale = opts.tol * (1.0 + std::max(std::abs(y[i]), std::abs(y5[i])));
        err = std::max(err, std::abs(e) / scale);
      }

      if (err <= 1.0) {
        x = x_new;
        y = y5;
        k1 = k7;
        if (opts.observer) opts.observer({x, y[0], y[1]});
        const double grow = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        h = dir * std::min(std::abs(h) * grow, opts.max_step);
      } else {
        h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
        if (std::abs(h) < min_step) {
          std::ostringstream os;
          os << "step underflow at x = " << x << " (h = " << h << ")";
          throw StepUnderflow(os.str());
        }
      }
    }
    return h;
  }
};

/// Ordered product of midpoint exponentials over [a, b] with n equal steps.
Matrix2 midpoint_product(const RhoPair& r, double a, double b, long n) {
  const double h = (b - a) / static_cast<double>(n);
  Matrix2 prod = Matrix2::identity();
  for (long i = 0; i < n; ++i) {
    const double mid = a + (static_cast<double>(i) + 0.5) * h;
    prod = expm(Complex{h} * rhs_matrix(r, mid)) * prod;
  }
  return prod;
}

}  // namespace

Matrix2 operator*(const Matrix2& x, const Matrix2& y) {
  Matrix2 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out(i, j) = x(i, 0) * y(0, j) + x(i, 1) * y(1, j);
  return out;
}

Matrix2 operator+(const Matrix2& x, const Matrix2& y) {
  Matrix2 out;
  for (int i = 0; i < 4; ++i) out.m[i] = x.m[i] + y.m[i];
  return out;
}

Matrix2 operator-(const Matrix2& x, const Matrix2& y) {
  Matrix2 out;
  for (int i = 0; i < 4; ++i) out.m[i] = x.m[i] - y.m[i];
  return out;
}

Matrix2 operator*(Complex s, const Matrix2& x) {
  Matrix2 out;
  for (int i = 0; i < 4; ++i) out.m[i] = s * x.m[i];
  return out;
}

Matrix2 Matrix2::inverse() const {
  const Complex d = det();
  return {{m[3] / d, -m[1] / d, -m[2] / d, m[0] / d}};
}

double Matrix2::max_abs_diff(const Matrix2& other) const {
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(m[i] - other.m[i]));
  return worst;
}

Matrix2 expm(const Matrix2& a) {
  const Complex tau = 0.5 * a.trace();
  const Complex p = a(0, 0) - tau;  // traceless part is [[p, q], [r, -p]]
  const Complex q = a(0, 1), r = a(1, 0);
  const Complex delta = p * p + q * r;  // B^2 = delta I
  Complex ch, sh;                       // cosh(l), sinh(l)/l with l^2 = delta
  if (std::abs(delta) < 1e-6) {
    ch = 1.0 + delta * (0.5 + delta * (1.0 / 24 + delta / 720.0));
    sh = 1.0 + delta * (1.0 / 6 + delta * (1.0 / 120 + delta / 5040.0));
  } else {
    const Complex l = std::sqrt(delta);
    ch = std::cosh(l);
    sh = std::sinh(l) / l;
  }
  const Complex scale = std::exp(tau);
  return {{scale * (ch + sh * p), scale * sh * q, scale * sh * r, scale * (ch - sh * p)}};
}

CoefficientState TransferMatrix::apply(const CoefficientState& s) const {
  const Vec2 out = entries * Vec2{s.a, s.b};
  return {x_to, out[0], out[1]};
}

TransferMatrix compose(const TransferMatrix& later, const TransferMatrix& earlier) {
  return {later.entries * earlier.entries, earlier.x_from, later.x_to};
}

Matrix2 rhs_matrix(const RhoPair& r, double x) {
  const GaugeTriple& g = r.gauge();
  const Complex pp = g.phi_prime(x);
  if (!(std::abs(pp) > g.phi_prime_floor)) {
    std::ostringstream os;
    os << "gauge " << g.id << " degenerate at x = " << x << ": |phi'| = " << std::abs(pp);
    throw GaugeDegenerate(os.str());
  }
  const Complex rho1 = r.rho1(x);
  const Complex rho2 = r.rho2(x);
  const Complex theta = g.phi(x) + g.delta(x);
  const Complex diag = kI * (diagonal_rate(rho2, pp) - g.delta_prime(x));
  const Complex inv = 1.0 / (2.0 * pp);
  Matrix2 out;
  out(0, 0) = diag;
  out(0, 1) = (rho1 + kI * rho2) * inv * std::exp(-2.0 * kI * theta);
  out(1, 0) = (rho1 - kI * rho2) * inv * std::exp(2.0 * kI * theta);
  out(1, 1) = -diag;
  return out;
}

Matrix2 basis_matrix(const GaugeTriple& g, double x) {
  const Complex theta = g.phase(x);
  const Complex u = std::exp(kI * theta), v = std::exp(-kI * theta);
  const Complex s = std::sqrt(g.phi_prime(x));
  const Complex chi = g.chi(x);
  Matrix2 m;
  m(0, 0) = u / s;
  m(0, 1) = v / s;
  m(1, 0) = kI * s * u + chi * u / s;
  m(1, 1) = -kI * s * v + chi * v / s;
  return m;
}

CoefficientState evolve(const RhoPair& r, const CoefficientState& s0, double x_to, double tol) {
  EvolveOptions opts;
  opts.tol = tol;
  return evolve(r, s0, x_to, opts);
}

CoefficientState evolve(const RhoPair& r, const CoefficientState& s0, double x_to, const EvolveOptions& opts) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("evolve: tol must be > 0");
  if (opts.observer) opts.observer(s0);
  if (x_to == s0.x) return s0;

  const GaugeTriple& g = r.gauge();
  const double span = std::abs(x_to - s0.x);
  const double dir = x_to > s0.x ? 1.0 : -1.0;
  Stepper stepper{r, opts, 1e-14 * span};

  std::vector<double> stops = breakpoints_between(s0.x, x_to, generator_breakpoints(r));
  stops.push_back(x_to);

  double x = s0.x;
  Vec2 y{s0.a, s0.b};
  if (is_kink(g, x)) y = leave_kink(g, x, dir) * y;
  double h = dir * std::min(opts.max_step, span);
  for (double stop : stops) {
    h = stepper.run(x, y, stop, h);
    if (stop != x_to && is_kink(g, stop)) {
      y = kink_matrix(g, stop, dir) * y;
      if (opts.observer) opts.observer({x, y[0], y[1]});
    }
  }
  if (is_kink(g, x_to)) y = arrive_at_kink(g, x_to, dir) * y;
  return {x_to, y[0], y[1]};
}

TransferMatrix transfer_matrix(const RhoPair& r, double x_from, double x_to, int n_min, double tol) {
  if (n_min < 1) throw std::invalid_argument("transfer_matrix: n_min must be >= 1");
  TransferMatrix out{Matrix2::identity(), x_from, x_to};
  if (x_from == x_to) return out;

  const GaugeTriple& g = r.gauge();
  const double dir = x_to > x_from ? 1.0 : -1.0;
  std::vector<double> cuts{x_from};
  for (double c : breakpoints_between(x_from, x_to, generator_breakpoints(r))) cuts.push_back(c);
  cuts.push_back(x_to);

  const double total = std::abs(x_to - x_from);
  std::vector<long> base_steps;
  for (std::size_t i = 1; i < cuts.size(); ++i)
    base_steps.push_back(std::max(1L, static_cast<long>(std::ceil(n_min * std::abs(cuts[i] - cuts[i - 1]) / total))));

  auto product = [&](long factor) {
    Matrix2 e = is_kink(g, x_from) ? leave_kink(g, x_from, dir) : Matrix2::identity();
    for (std::size_t i = 1; i < cuts.size(); ++i) {
      e = midpoint_product(r, cuts[i - 1], cuts[i], base_steps[i - 1] * factor) * e;
      if (i + 1 < cuts.size() && is_kink(g, cuts[i])) e = kink_matrix(g, cuts[i], dir) * e;
    }
    if (is_kink(g, x_to)) e = arrive_at_kink(g, x_to, dir) * e;
    return e;
  };

  // The midpoint exponential rule is symmetric, so its error expands in even
  // powers of the step and Richardson columns remove h^2, h^4, ...
  constexpr int kMaxLevels = 16;
  constexpr int kMaxOrder = 4;
  std::vector<std::vector<Matrix2>> table;
  double last_diff = INFINITY;
  for (int level = 0; level < kMaxLevels; ++level) {
    std::vector<Matrix2> row{product(1L << level)};
    for (int m = 1; m <= std::min(level, kMaxOrder); ++m) {
      const double f = std::pow(4.0, m) - 1.0;
      row.push_back(row[m - 1] + Complex{1.0 / f} * (row[m - 1] - table[level - 1][m - 1]));
    }
    if (level >= 2) {
      const Matrix2& best = row.back();
      const Matrix2& prev = table[level - 1].back();
      last_diff = best.max_abs_diff(prev);
      if (last_diff < tol) {
        out.entries = best;
        return out;
      }
    }
    table.push_back(std::move(row));
  }
  std::ostringstream os;
  os << "transfer matrix refinement stalled at difference " << last_diff << " (tol " << tol << ")";
  throw NonConvergence(os.str());
}

WavefunctionSample reconstruct_psi(const GaugeTriple& g, const CoefficientState& s) {
  const Complex pp = g.phi_prime(s.x);
  if (!(std::abs(pp) > g.phi_prime_floor)) throw GaugeDegenerate("reconstruct_psi: degenerate phi'");
  const Vec2 out = basis_matrix(g, s.x) * Vec2{s.a, s.b};
  return {s.x, out[0], out[1]};
}

CoefficientState coefficients_from_psi(const GaugeTriple& g, const WavefunctionSample& w) {
  const Complex pp = g.phi_prime(w.x);
  if (!(std::abs(pp) > g.phi_prime_floor)) throw GaugeDegenerate("coefficients_from_psi: degenerate phi'");
  const Complex theta = g.phase(w.x);
  const Complex s = std::sqrt(pp);
  const Complex sum = s * w.psi;                                 // a u + b v
  const Complex diff = (w.psi_prime - g.chi(w.x) * w.psi) / (kI * s);  // a u - b v
  return {w.x, 0.5 * (sum + diff) * std::exp(-kI * theta), 0.5 * (sum - diff) * std::exp(kI * theta)};
}

double probability_current(const GaugeTriple& g, const CoefficientState& s) {
  const Complex pp = g.phi_prime(s.x);
  const double mag = std::abs(pp);
  const Complex theta = g.phase(s.x);
  const double moving = std::norm(s.a) * std::exp(-2.0 * theta.imag()) - std::norm(s.b) * std::exp(2.0 * theta.imag());
  const Complex cross = s.a * std::conj(s.b) * std::exp(2.0 * kI * theta.real());
  double current = pp.real() / mag * moving - 2.0 * pp.imag() / mag * cross.imag();
  const Complex chi = g.chi(s.x);
  if (chi.imag() != 0.0) current += chi.imag() * std::norm(reconstruct_psi(g, s).psi);
  return current;
}

ScatteringAmplitudes scattering_amplitudes(const PotentialProfile& p, const EnergySpec& e, const GaugeTriple& g,
                                           const DomainGrid& grid, double tol) {
  const WaveNumberField w = wavenumber_field(p, e);
  const RhoPair r(g, w);
  const double kl = w.k_left(), kr = w.k_right();

  // Unit-current right-moving wave on the left edge.
  const double x0 = grid.x_min;
  const Complex wave = 1.0 / std::sqrt(kl);
  CoefficientState start = coefficients_from_psi(g, {x0, wave, kI * kl * wave});
  if (const double mag = std::abs(start.a); mag > 0.0) {
    const Complex phase = std::conj(start.a) / mag;
    start.a *= phase;
    start.b *= phase;
  }

  ScatteringAmplitudes out;
  out.initial = start;
  out.final_state = evolve(r, start, grid.x_max, tol);
  out.alpha = out.final_state.a;
  out.beta = out.final_state.b;

  const WavefunctionSample edge = reconstruct_psi(g, out.final_state);
  const double x1 = grid.x_max;
  const Complex right = 0.5 * (edge.psi + edge.psi_prime / (kI * kr)) * std::exp(-kI * kr * x1);
  const Complex left = 0.5 * (edge.psi - edge.psi_prime / (kI * kr)) * std::exp(kI * kr * x1);
  const double incident = kr * std::norm(right);
  const double reflected = kr * std::norm(left);
  const double transmitted = kl * std::norm(wave);
  out.transmission = transmitted / incident;
  out.reflection = reflected / incident;
  return out;
}

}  // namespace szscatter
