#pragma once

#include <string>
#include <vector>

#include "szscatter/potentials.hpp"
#include "szscatter/sz_core.hpp"

namespace szscatter {

enum class OracleMethod { direct_integration, analytic_square_barrier, analytic_reflectionless };

std::string to_string(OracleMethod m);

/// Reference transmission/reflection computed without any gauge machinery.
struct OracleResult {
  double transmission = 0.0;
  double reflection = 0.0;
  std::vector<WavefunctionSample> psi_samples;
  OracleMethod method = OracleMethod::direct_integration;
  /// Plane-wave amplitudes on the right edge, psi = A e^{ikx} + B e^{-ikx}
  /// (direct integration only).
  Complex right_amplitude{};
  Complex left_amplitude{};
};

/// Integrates psi'' + k^2 psi = 0 as the pair (psi, psi') with a Fehlberg 7(8)
/// controlled stepper, starting from the unit-current wave e^{ik x}/sqrt(k) at
/// grid.x_min, then matches (psi, psi') at grid.x_max to e^{+-ikx}.
/// psi_samples holds psi at every grid node.
OracleResult direct_integrate(const PotentialProfile& p, const EnergySpec& e, const DomainGrid& grid, double tol);

/// Closed-form square-barrier transmission for E above, below and at V0.
OracleResult analytic_square_barrier(double v0, double width, const EnergySpec& e);

/// Poschl-Teller -ell(ell+1) sech^2 x is reflectionless at every positive energy.
OracleResult analytic_reflectionless(int ell, const EnergySpec& e);

}  // namespace szscatter
