#pragma once

// Scalar utilities shared by the potential, gauge, bound and oracle modules.

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace szscatter {

using Complex = std::complex<double>;

/// Piecewise-cubic Hermite interpolant with Fritsch-Butland slopes (no overshoot
/// between samples). Outside the sample range it clamps to the end values.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double derivative(double x) const;

  double front_x() const { return x_.front(); }
  double back_x() const { return x_.back(); }
  double front_y() const { return y_.front(); }
  double back_y() const { return y_.back(); }
  std::span<const double> xs() const { return x_; }
  std::span<const double> ys() const { return y_; }
  bool empty() const { return x_.empty(); }

 private:
  std::size_t segment(double x) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;
};

/// Running integral F(x) = ∫_{nodes[0]}^{x} f, tabulated at the nodes with a
/// 10-point Gauss-Legendre rule per cell and completed on the partial cell.
/// The integrand may jump only at nodes.
template <class T>
class CumulativeIntegral {
 public:
  CumulativeIntegral() = default;
  CumulativeIntegral(std::function<T(double)> f, std::vector<double> nodes);

  T operator()(double x) const;
  double origin() const { return nodes_.front(); }

 private:
  std::function<T(double)> f_;
  std::vector<double> nodes_;
  std::vector<T> values_;
};

extern template class CumulativeIntegral<double>;
extern template class CumulativeIntegral<Complex>;

/// Fixed 10-point Gauss-Legendre integral of f over [a, b].
double gauss_legendre(const std::function<double(double)>& f, double a, double b);
Complex gauss_legendre(const std::function<Complex(double)>& f, double a, double b);

/// Sorted, de-duplicated nodes covering [lo, hi] with spacing at most max_step and
/// containing every breakpoint that lies strictly inside.
std::vector<double> make_nodes(double lo, double hi, double max_step,
                               std::span<const double> breakpoints);

/// x moved by one ulp into (lo, hi) when it sits on an end point. Used to pick the
/// one-sided value of a piecewise function on the cell [lo, hi].
inline double inside(double x, double lo, double hi) {
  if (lo > hi) std::swap(lo, hi);
  if (x <= lo) return std::nextafter(lo, hi);
  if (x >= hi) return std::nextafter(hi, lo);
  return x;
}

/// Breakpoints strictly between a and b (either order), sorted in the direction a -> b.
std::vector<double> breakpoints_between(double a, double b, std::span<const double> points);

}  // namespace szscatter
