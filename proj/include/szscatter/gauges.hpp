#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "szscatter/numerics.hpp"
#include "szscatter/potentials.hpp"

namespace szscatter {

/// The auxiliary functions (phi, Delta, chi) of the two-wave decomposition
///
///   psi = [a e^{+i(phi+Delta)} + b e^{-i(phi+Delta)}] / sqrt(phi'),
///
/// with the derivatives the evolution generator needs. phi' may jump at the
/// listed kinks; phi, Delta and chi are continuous everywhere.
struct GaugeTriple {
  using Fn = std::function<Complex(double)>;

  Fn phi;
  Fn phi_prime;
  Fn phi_double_prime;
  Fn delta;
  Fn delta_prime;
  Fn chi;
  Fn chi_prime;
  bool is_real = true;
  std::vector<double> kinks;
  /// |phi'| at or below this is treated as zero.
  double phi_prime_floor = 0.0;
  std::string id;

  /// phi + Delta, the phase carried by the right-moving basis wave.
  Complex phase(double x) const { return phi(x) + delta(x); }
};

/// rho1 = phi'' + 2 chi phi',  rho2 = k^2 + chi^2 + chi' - phi'^2.
class RhoPair {
 public:
  RhoPair(GaugeTriple gauge, WaveNumberField field);

  Complex rho1(double x) const;
  Complex rho2(double x) const;

  const GaugeTriple& gauge() const { return gauge_; }
  const WaveNumberField& field() const { return field_; }

 private:
  GaugeTriple gauge_;
  WaveNumberField field_;
};

inline RhoPair rho_pair(const GaugeTriple& g, const WaveNumberField& w) { return RhoPair(g, w); }

/// rho2 / (2 phi'). The diagonal of the generator is i(this - Delta'); the
/// diagonal-free gauge sets Delta' to exactly this expression.
inline Complex diagonal_rate(Complex rho2, Complex phi_prime) { return rho2 / (2.0 * phi_prime); }

/// Degeneracy threshold relative to the largest |phi'| seen on the grid.
inline constexpr double kDegeneracyRatio = 1e-12;

/// Sets phi_prime_floor from the grid and checks |phi'| above it and the is_real flag.
/// Throws GaugeDegenerate.
void validate_gauge(GaugeTriple& g, const DomainGrid& grid);

/// phi = k_ref x, Delta = chi = 0.
GaugeTriple gauge_constant(double k_ref);
/// phi = k_ref x, Delta = 0, chi = c.
GaugeTriple gauge_constant_chi(double k_ref, double chi);

/// phi' = k(x), phi = ∫_{x_min} k. Throws TurningPoint when k^2 <= 0 on the grid.
GaugeTriple gauge_wkb(const WaveNumberField& w, const DomainGrid& grid);

/// phi' = (1 - s) k_ref + s k(x), chi = Delta = 0; s = 0 is gauge_constant(k_ref)
/// up to the origin of phi, s = 1 is gauge_wkb.
GaugeTriple gauge_interpolated(const WaveNumberField& w, const DomainGrid& grid, double s, double k_ref);

/// Delta' = rho2 / (2 phi'), which removes the diagonal of the generator.
GaugeTriple gauge_special_delta(const GaugeTriple& base, const WaveNumberField& w, const DomainGrid& grid);

/// Delta = -phi: the phase factors in the generator disappear.
GaugeTriple gauge_antiphase(const GaugeTriple& base);

/// User tables, interpolated by monotone cubics; derivatives come from the same
/// interpolants and phi from the running integral of phi'.
struct GaugeTables {
  std::vector<std::pair<double, double>> phi_prime;
  std::optional<std::vector<std::pair<double, double>>> delta;
  std::optional<std::vector<std::pair<double, double>>> chi;
};
GaugeTriple gauge_tabulated(const GaugeTables& tables, const DomainGrid& grid);

/// Largest central-difference mismatch over the sample points for the pairs
/// phi/phi', phi'/phi'', Delta/Delta', chi/chi'.
double derivative_consistency(const GaugeTriple& g, const std::vector<double>& xs, double h);

}  // namespace szscatter
