#include "szscatter/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

namespace szscatter {

namespace {

double end_slope(double h0, double h1, double d0, double d1) {
  double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
  if (std::signbit(m) != std::signbit(d0) || d0 == 0.0) return 0.0;
  if (std::signbit(d0) != std::signbit(d1) && std::abs(m) > 3.0 * std::abs(d0)) return 3.0 * d0;
  return m;
}

}  // namespace

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  if (x_.size() != y_.size() || x_.empty())
    throw std::invalid_argument("monotone cubic: need matching, nonempty samples");
  for (std::size_t i = 1; i < x_.size(); ++i)
    if (!(x_[i] > x_[i - 1]))
      throw std::invalid_argument("monotone cubic: positions must be strictly increasing");

  const std::size_t n = x_.size();
  m_.assign(n, 0.0);
  if (n == 1) return;

  std::vector<double> h(n - 1), d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    d[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  if (n == 2) {
    m_[0] = m_[1] = d[0];
    return;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (d[k - 1] * d[k] <= 0.0) continue;
    const double w1 = 2.0 * h[k] + h[k - 1];
    const double w2 = h[k] + 2.0 * h[k - 1];
    m_[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
  }
  m_[0] = end_slope(h[0], h[1], d[0], d[1]);
  m_[n - 1] = end_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
}

std::size_t MonotoneCubic::segment(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - x_.begin());
  i = i == 0 ? 0 : i - 1;
  return std::min(i, x_.size() - 2);
}

double MonotoneCubic::operator()(double x) const {
  if (x <= x_.front()) return y_.front();
  if (x >= x_.back()) return y_.back();
  const std::size_t i = segment(x);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * y_[i] + h10 * h * m_[i] + h01 * y_[i + 1] + h11 * h * m_[i + 1];
}

double MonotoneCubic::derivative(double x) const {
  if (x_.size() < 2 || x < x_.front() || x > x_.back()) return 0.0;
  const std::size_t i = segment(x);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t;
  const double d00 = (6 * t2 - 6 * t) / h;
  const double d10 = 3 * t2 - 4 * t + 1;
  const double d01 = (-6 * t2 + 6 * t) / h;
  const double d11 = 3 * t2 - 2 * t;
  return d00 * y_[i] + d10 * m_[i] + d01 * y_[i + 1] + d11 * m_[i + 1];
}

double gauss_legendre(const std::function<double(double)>& f, double a, double b) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss<double, 10>::integrate(f, a, b);
}

Complex gauss_legendre(const std::function<Complex(double)>& f, double a, double b) {
  if (a == b) return {0.0, 0.0};
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  auto g = [&](double t) { return f(mid + half * t); };
  return half * boost::math::quadrature::gauss<double, 10>::integrate(g);
}

template <class T>
CumulativeIntegral<T>::CumulativeIntegral(std::function<T(double)> f, std::vector<double> nodes)
    : f_(std::move(f)), nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw std::invalid_argument("cumulative integral: need at least two nodes");
  values_.resize(nodes_.size());
  values_[0] = T{};
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    const double lo = nodes_[i - 1], hi = nodes_[i];
    std::function<T(double)> cell = [&](double x) { return f_(inside(x, lo, hi)); };
    values_[i] = values_[i - 1] + gauss_legendre(cell, lo, hi);
  }
}

template <class T>
T CumulativeIntegral<T>::operator()(double x) const {
  const double lo = nodes_.front(), hi = nodes_.back();
  if (x <= lo || x >= hi) {
    // Outside the table: integrate from the nearest end in cells no wider than the first one.
    const double end = x <= lo ? lo : hi;
    const T base = x <= lo ? values_.front() : values_.back();
    const double width = nodes_[1] - nodes_[0];
    const int n = std::max(1, static_cast<int>(std::ceil(std::abs(x - end) / width)));
    T acc{};
    for (int j = 0; j < n; ++j) {
      const double a = end + (x - end) * j / n, b = end + (x - end) * (j + 1) / n;
      std::function<T(double)> cell = [&](double s) { return f_(inside(s, a, b)); };
      acc += gauss_legendre(cell, a, b);
    }
    return base + acc;
  }
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
  if (x == nodes_[i]) return values_[i];
  const double a = nodes_[i], b = nodes_[i + 1];
  std::function<T(double)> cell = [&](double s) { return f_(inside(s, a, b)); };
  return values_[i] + gauss_legendre(cell, a, x);
}

template class CumulativeIntegral<double>;
template class CumulativeIntegral<Complex>;

std::vector<double> make_nodes(double lo, double hi, double max_step,
                               std::span<const double> breakpoints) {
  if (!(hi > lo) || !(max_step > 0)) throw std::invalid_argument("make_nodes: bad interval or step");
  std::vector<double> cuts{lo};
  for (double b : breakpoints)
    if (b > lo && b < hi) cuts.push_back(b);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<double> nodes{lo};
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const double a = cuts[i - 1], b = cuts[i];
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) / max_step)));
    for (int j = 1; j < n; ++j) nodes.push_back(a + (b - a) * j / n);
    nodes.push_back(b);
  }
  return nodes;
}

std::vector<double> breakpoints_between(double a, double b, std::span<const double> points) {
  std::vector<double> out;
  const double lo = std::min(a, b), hi = std::max(a, b);
  for (double p : points)
    if (p > lo && p < hi) out.push_back(p);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (b < a) std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace szscatter
