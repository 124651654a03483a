#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "szscatter/numerics.hpp"

namespace szscatter {

/// V0 on the closed interval [center - width/2, center + width/2], zero elsewhere.
struct SquareBarrier {
  double v0;
  double width;
  double center;
};

struct Gaussian {
  double v0;
  double sigma;
  double center;
};

/// -ell(ell+1) sech^2(x/scale) / scale^2. Reflectionless for integer ell when
/// 2m/hbar^2 = 1.
struct PoschlTeller {
  int ell;
  double scale;
};

struct Tabulated {
  std::shared_ptr<const MonotoneCubic> table;
};

class PotentialProfile {
 public:
  using Kind = std::variant<SquareBarrier, Gaussian, PoschlTeller, Tabulated>;

  static PotentialProfile square_barrier(double v0, double width, double center = 0.0);
  static PotentialProfile gaussian(double v0, double sigma, double center = 0.0);
  static PotentialProfile poschl_teller(int ell, double scale = 1.0);
  static PotentialProfile tabulated(std::vector<std::pair<double, double>> samples);
  /// V = 0 everywhere.
  static PotentialProfile free();

  double operator()(double x) const;
  /// dV/dx away from discontinuities.
  double derivative(double x) const;

  double v_left() const { return v_left_; }
  double v_right() const { return v_right_; }
  /// Positions where V or dV/dx jumps.
  const std::vector<double>& discontinuities() const { return discontinuities_; }
  /// Sample positions of a tabulated profile, where the curvature of V jumps.
  std::vector<double> knots() const;
  /// Identically equal to its asymptotes.
  bool is_flat() const;

  const Kind& kind() const { return kind_; }
  std::string describe() const;

 private:
  explicit PotentialProfile(Kind kind);

  Kind kind_;
  double v_left_ = 0.0;
  double v_right_ = 0.0;
  std::vector<double> discontinuities_;
};

inline double evaluate_potential(const PotentialProfile& p, double x) { return p(x); }

struct EnergySpec {
  double energy = 0.0;
  double hbar = 1.0;
  double mass = 0.5;

  /// 2m / hbar^2.
  double coupling() const { return 2.0 * mass / (hbar * hbar); }
  void validate() const;
};

/// k^2(x) = 2m (E - V(x)) / hbar^2 with the asymptotic wavenumbers.
class WaveNumberField {
 public:
  WaveNumberField(PotentialProfile potential, EnergySpec energy);

  double k_squared(double x) const { return coupling_ * (energy_.energy - potential_(x)); }
  double k_squared_prime(double x) const { return -coupling_ * potential_.derivative(x); }
  double k_left() const { return k_left_; }
  double k_right() const { return k_right_; }

  const PotentialProfile& potential() const { return potential_; }
  const EnergySpec& energy() const { return energy_; }
  const std::vector<double>& discontinuities() const { return potential_.discontinuities(); }

 private:
  PotentialProfile potential_;
  EnergySpec energy_;
  double coupling_;
  double k_left_;
  double k_right_;
};

/// Throws AsymptoticallyClosedChannel unless both asymptotic channels are open.
WaveNumberField wavenumber_field(const PotentialProfile& p, const EnergySpec& e);

/// Finite window standing in for the whole real line.
struct DomainGrid {
  double x_min = -1.0;
  double x_max = 1.0;
  double tail_tolerance = 1e-10;
  double max_step = 0.05;
  /// Potential discontinuities inside the window.
  std::vector<double> breakpoints;

  double width() const { return x_max - x_min; }
  /// Cell boundaries no wider than max_step, containing every breakpoint.
  std::vector<double> nodes() const;
};

inline constexpr double kDefaultMaxStep = 0.05;
inline constexpr double kDefaultMaxHalfWidth = 1e3;

/// Smallest window outside which |V - asymptote| < tol * max(|E|, 1).
/// Throws NoDecay when that window would exceed max_half_width.
DomainGrid truncate_domain(const PotentialProfile& p, const EnergySpec& e, double tol,
                           double max_step = kDefaultMaxStep,
                           double max_half_width = kDefaultMaxHalfWidth);

/// Two-column (position, value) table; whitespace separated, '#' starts a comment.
std::vector<std::pair<double, double>> parse_table(std::istream& in);
std::vector<std::pair<double, double>> load_table(const std::string& path);

}  // namespace szscatter
