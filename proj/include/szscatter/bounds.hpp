#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "szscatter/gauges.hpp"
#include "szscatter/oracle.hpp"
#include "szscatter/potentials.hpp"

namespace szscatter {

/// theta(x) = sqrt(rho1^2 + rho2^2) / (2 |phi'|) for a real gauge. Delta never enters.
///
/// Where phi' jumps, the smooth part of rho1 misses a point mass; its weight,
/// |ln(phi'_+ / phi'_-)| / 2, is the limit of the integral of theta over any
/// monotone smoothing of the jump and is listed in `jumps`.
struct ThetaField {
  std::function<double(double)> theta;
  std::vector<std::pair<double, double>> jumps;
  std::vector<double> breakpoints;
  std::string gauge_id;

  double operator()(double x) const { return theta(x); }
};

/// Throws ComplexGaugeRejected for gauges not flagged real.
ThetaField theta_field(const GaugeTriple& g, const WaveNumberField& w);

/// Adaptive Gauss-Kronrod integral of theta over the window, split at every
/// breakpoint, plus the jump weights. Throws NonConvergence if the error
/// estimate exceeds tol.
double theta_integral(const ThetaField& t, const DomainGrid& grid, double tol, double* error_estimate = nullptr);

struct BoundReport {
  double theta_integral = 0.0;
  double alpha_bound = 1.0;  ///< cosh
  double beta_bound = 0.0;   ///< sinh
  double t_lower = 1.0;      ///< sech^2
  double r_upper = 0.0;      ///< tanh^2
  std::string gauge_id;
};

BoundReport make_bound_report(double theta_integral, std::string gauge_id);

BoundReport bound_report(const PotentialProfile& p, const EnergySpec& e, const GaugeTriple& g,
                         const DomainGrid& grid, double tol);

/// One-parameter family of real gauges.
struct GaugeFamily {
  std::string name;
  double s_min = 0.0;
  double s_max = 1.0;
  double baseline = 0.0;
  std::function<GaugeTriple(double)> member;
};

/// phi' = (1 - s) k_ref + s k(x), s in [0, 1]; baseline s = 0. Members with s > 0
/// are inadmissible below the barrier top.
GaugeFamily interpolation_family(const WaveNumberField& w, const DomainGrid& grid, double k_ref);

struct OptimizerConfig {
  int scan_points = 33;
  double s_tol = 1e-6;
};

struct OptimizedGauge {
  GaugeTriple gauge;
  BoundReport report;
  double s = 0.0;
  BoundReport baseline_report;
  bool baseline_admissible = false;
};

/// Coarse scan plus golden-section refinement of theta_integral over the family
/// parameter. Ties go to the smallest s. Throws EmptyFamily or InadmissibleFamily.
OptimizedGauge optimize_gauge(const PotentialProfile& p, const EnergySpec& e, const GaugeFamily& family,
                              const DomainGrid& grid, double tol, const OptimizerConfig& config = {});

inline constexpr double kBoundSlack = 1e-12;

struct VerificationRecord {
  std::string gauge_id;
  double transmission = 0.0;
  double reflection = 0.0;
  double t_lower = 0.0;
  double r_upper = 0.0;
  double margin_t = 0.0;  ///< T - t_lower
  double margin_r = 0.0;  ///< r_upper - R
};

/// Throws BoundViolation if T < t_lower - 1e-12 or R > r_upper + 1e-12.
VerificationRecord verify_bounds(const BoundReport& report, const OracleResult& exact);

}  // namespace szscatter
