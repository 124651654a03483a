#pragma once

#include <array>
#include <functional>

#include "szscatter/gauges.hpp"
#include "szscatter/numerics.hpp"
#include "szscatter/potentials.hpp"

namespace szscatter {

/// Dense 2x2 complex matrix, row major.
struct Matrix2 {
  std::array<Complex, 4> m{};

  static Matrix2 identity() { return {{Complex{1.0}, Complex{}, Complex{}, Complex{1.0}}}; }

  Complex& operator()(int i, int j) { return m[2 * i + j]; }
  const Complex& operator()(int i, int j) const { return m[2 * i + j]; }

  Complex det() const { return m[0] * m[3] - m[1] * m[2]; }
  Complex trace() const { return m[0] + m[3]; }
  Matrix2 inverse() const;
  double max_abs_diff(const Matrix2& other) const;

  friend Matrix2 operator*(const Matrix2& x, const Matrix2& y);
  friend Matrix2 operator+(const Matrix2& x, const Matrix2& y);
  friend Matrix2 operator-(const Matrix2& x, const Matrix2& y);
  friend Matrix2 operator*(Complex s, const Matrix2& x);
};

/// exp(M) in closed form: trace part times cosh/sinh of the traceless part.
Matrix2 expm(const Matrix2& a);

/// (x, a(x), b(x)).
struct CoefficientState {
  double x = 0.0;
  Complex a{1.0};
  Complex b{};
};

/// E(x_to, x_from): maps the column (a, b) at x_from to its value at x_to.
struct TransferMatrix {
  Matrix2 entries = Matrix2::identity();
  double x_from = 0.0;
  double x_to = 0.0;

  CoefficientState apply(const CoefficientState& s) const;
};

/// E(x2, x1) * E(x1, x0) = E(x2, x0).
TransferMatrix compose(const TransferMatrix& later, const TransferMatrix& earlier);

struct WavefunctionSample {
  double x = 0.0;
  Complex psi{};
  Complex psi_prime{};
};

struct ScatteringAmplitudes {
  Complex alpha{};
  Complex beta{};
  double transmission = 0.0;
  double reflection = 0.0;
  CoefficientState initial;
  CoefficientState final_state;
};

/// d/dx (a, b) = rhs_matrix * (a, b). Throws GaugeDegenerate when |phi'| is at the floor.
Matrix2 rhs_matrix(const RhoPair& r, double x);

/// Maps (a, b) at x to (psi, psi') at x.
Matrix2 basis_matrix(const GaugeTriple& g, double x);

struct EvolveOptions {
  double tol = 1e-12;
  double max_step = 0.25;
  /// Called with every accepted state, including the start and the end.
  std::function<void(const CoefficientState&)> observer;
};

/// Adaptive Dormand-Prince 5(4) integration of the coefficient pair from s0.x to
/// x_to. Steps stop at potential discontinuities; across a jump of phi' the pair
/// is re-matched so that psi and psi' stay continuous. A state located exactly on
/// a jump is expressed with the point value phi'(x). Throws StepUnderflow.
CoefficientState evolve(const RhoPair& r, const CoefficientState& s0, double x_to, const EvolveOptions& opts);
CoefficientState evolve(const RhoPair& r, const CoefficientState& s0, double x_to, double tol);

/// Ordered product of exp(h A(midpoint)) factors, later positions on the left,
/// refined by step doubling (with Richardson extrapolation across levels) until
/// successive estimates differ entrywise by less than tol. Throws NonConvergence.
TransferMatrix transfer_matrix(const RhoPair& r, double x_from, double x_to, int n_min = 64, double tol = 1e-11);

/// psi = [a e^{i(phi+Delta)} + b e^{-i(phi+Delta)}] / sqrt(phi'),
/// psi' = i sqrt(phi') [a e^{i(phi+Delta)} - b e^{-i(phi+Delta)}] + chi psi.
WavefunctionSample reconstruct_psi(const GaugeTriple& g, const CoefficientState& s);

/// Inverse of reconstruct_psi.
CoefficientState coefficients_from_psi(const GaugeTriple& g, const WavefunctionSample& w);

/// Im(psi* psi') from the coefficients, valid for complex gauges; equals
/// |a|^2 - |b|^2 for real gauges with phi' > 0.
double probability_current(const GaugeTriple& g, const CoefficientState& s);

/// Starts from the pure transmitted wave at grid.x_min, normalized so that
/// (a, b) = (1, 0) whenever the gauge basis is the asymptotic plane wave, and
/// evolves to grid.x_max. T and R come from the probability currents of the
/// plane-wave decomposition at the two edges.
ScatteringAmplitudes scattering_amplitudes(const PotentialProfile& p, const EnergySpec& e, const GaugeTriple& g,
                                           const DomainGrid& grid, double tol);

}  // namespace szscatter
