#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "szscatter/errors.hpp"
#include "szscatter/potentials.hpp"

using namespace szscatter;

namespace {
EnergySpec at(double e) {
  EnergySpec s;
  s.energy = e;
  return s;
}
}  // namespace

TEST_CASE("square barrier values") {
  const auto p = PotentialProfile::square_barrier(1.0, 1.0, 0.0);
  CHECK(evaluate_potential(p, 0.0) == 1.0);
  CHECK(evaluate_potential(p, 3.0) == 0.0);
  CHECK(evaluate_potential(p, -3.0) == 0.0);
  // closed interval
  CHECK(p(0.5) == 1.0);
  CHECK(p(-0.5) == 1.0);
  CHECK(p(std::nextafter(0.5, 1.0)) == 0.0);
  CHECK(p.derivative(0.2) == 0.0);
  REQUIRE(p.discontinuities().size() == 2);
  CHECK(p.discontinuities()[0] == -0.5);
  CHECK(p.discontinuities()[1] == 0.5);
  CHECK(p.v_left() == 0.0);
  CHECK(p.v_right() == 0.0);
  CHECK_FALSE(p.is_flat());
}

TEST_CASE("poschl-teller and gaussian values") {
  const auto pt = PotentialProfile::poschl_teller(1, 1.0);
  CHECK(pt(0.0) == doctest::Approx(-2.0).epsilon(1e-15));
  const auto pt2 = PotentialProfile::poschl_teller(2, 1.0);
  CHECK(pt2(0.0) == doctest::Approx(-6.0).epsilon(1e-15));
  CHECK(pt(1.0) == doctest::Approx(-2.0 / std::pow(std::cosh(1.0), 2)).epsilon(1e-14));

  const auto g = PotentialProfile::gaussian(1.0, 1.0);
  CHECK(g(0.0) == 1.0);
  CHECK(g(1.0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
  const double h = 1e-5;
  CHECK(g.derivative(0.7) == doctest::Approx((g(0.7 + h) - g(0.7 - h)) / (2 * h)).epsilon(1e-8));
  CHECK(pt.derivative(0.3) == doctest::Approx((pt(0.3 + h) - pt(0.3 - h)) / (2 * h)).epsilon(1e-8));
  CHECK(PotentialProfile::free().is_flat());
}

TEST_CASE("wavenumber field") {
  const auto w0 = wavenumber_field(PotentialProfile::free(), at(2.0));
  for (double x : {-10.0, 0.0, 3.3}) CHECK(w0.k_squared(x) == 2.0);

  const auto w = wavenumber_field(PotentialProfile::square_barrier(1, 1), at(2.0));
  CHECK(w.k_squared(0.0) == 1.0);
  CHECK(w.k_squared(2.0) == 2.0);

  const auto t = wavenumber_field(PotentialProfile::square_barrier(1, 1), at(0.5));
  CHECK(t.k_squared(0.0) == -0.5);
  CHECK(t.k_squared(1.0) == 0.5);
  CHECK(t.k_left() == doctest::Approx(std::sqrt(0.5)));
  CHECK(t.k_right() == doctest::Approx(std::sqrt(0.5)));

  EnergySpec u = at(2.0);
  u.mass = 1.0;
  u.hbar = 2.0;  // coupling 0.5
  CHECK(wavenumber_field(PotentialProfile::free(), u).k_squared(0.0) == doctest::Approx(1.0));
}

TEST_CASE("closed channels and invalid units") {
  CHECK_THROWS_AS(wavenumber_field(PotentialProfile::free(), at(0.0)), AsymptoticallyClosedChannel);
  CHECK_THROWS_AS(wavenumber_field(PotentialProfile::free(), at(-1.0)), AsymptoticallyClosedChannel);
  EnergySpec bad = at(1.0);
  bad.mass = -1.0;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("truncated domains") {
  const auto sq = truncate_domain(PotentialProfile::square_barrier(1, 1), at(1.0), 1e-10);
  CHECK(sq.x_min <= -0.5);
  CHECK(sq.x_max >= 0.5);
  REQUIRE(sq.breakpoints.size() == 2);

  const auto g = truncate_domain(PotentialProfile::gaussian(1, 1), at(1.0), 1e-10);
  const double expected = 6.78614042441511180;  // sqrt(2 ln 1e10)
  CHECK(g.x_max == doctest::Approx(expected).epsilon(1e-8));
  CHECK(g.x_min == doctest::Approx(-expected).epsilon(1e-8));
  CHECK(PotentialProfile::gaussian(1, 1)(g.x_max) <= 1e-10);

  const auto pt = truncate_domain(PotentialProfile::poschl_teller(1), at(0.5), 1e-10);
  CHECK(pt.x_max == doctest::Approx(12.5526462357976464).epsilon(1e-8));

  const auto f = truncate_domain(PotentialProfile::free(), at(1.0), 1e-10, 0.05);
  CHECK(f.x_min == -0.05);
  CHECK(f.x_max == 0.05);

  CHECK_THROWS_AS(truncate_domain(PotentialProfile::gaussian(1, 1000), at(1.0), 1e-10), NoDecay);
}

TEST_CASE("grid nodes include breakpoints and respect max_step") {
  const auto grid = truncate_domain(PotentialProfile::square_barrier(1, 1, 0.013), at(2.0), 1e-10, 0.1);
  const auto nodes = grid.nodes();
  CHECK(nodes.front() == grid.x_min);
  CHECK(nodes.back() == grid.x_max);
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    CHECK(nodes[i] > nodes[i - 1]);
    CHECK(nodes[i] - nodes[i - 1] <= 0.1 + 1e-12);
  }
  for (double b : grid.breakpoints) CHECK(std::find(nodes.begin(), nodes.end(), b) != nodes.end());
}

TEST_CASE("tabulated potentials") {
  std::istringstream in("# x V\n-1 0\n-0.5 0.5\n0 1\n0.5 0.5\n1 0\n");
  const auto samples = parse_table(in);
  REQUIRE(samples.size() == 5);
  const auto p = PotentialProfile::tabulated(samples);
  CHECK(p(0.0) == doctest::Approx(1.0));
  CHECK(p(-0.5) == doctest::Approx(0.5));
  CHECK(p(-5.0) == 0.0);
  CHECK(p(5.0) == 0.0);
  // monotone pieces stay within their sample bounds
  for (double x = -1.0; x <= 1.0; x += 0.01) {
    CHECK(p(x) >= -1e-15);
    CHECK(p(x) <= 1.0 + 1e-15);
  }

  CHECK_THROWS_AS(PotentialProfile::tabulated({{0, 1}, {0, 2}}), std::invalid_argument);
  std::istringstream unsorted("0 1\n0 2\n");
  CHECK_THROWS_AS(parse_table(unsorted), ParseError);
  std::istringstream garbage("0 1\nabc\n");
  try {
    parse_table(garbage);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(load_table("/nonexistent/table.dat"), IoError);
}
