// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "szscatter/bounds.hpp"
#include "szscatter/errors.hpp"
#include "szscatter/oracle.hpp"
#include "szscatter/sz_core.hpp"

using namespace szscatter;

namespace {

constexpr double kOdeTol = 1e-12;
constexpr double kQuadTol = 1e-10;
constexpr double kTailTol = 1e-10;

struct Case {
  std::string name;
  PotentialProfile potential;
  EnergySpec energy;
  WaveNumberField field;
  DomainGrid grid;
  std::vector<GaugeTriple> gauges;  // real presets admissible at this energy
  OracleResult direct;
  std::optional<OracleResult> analytic;
};

EnergySpec at(double e) {
  EnergySpec s;
  s.energy = e;
  return s;
}

Case make_case(const std::string& label, PotentialProfile p, double e) {
  const EnergySpec spec = at(e);
  WaveNumberField w = wavenumber_field(p, spec);
  DomainGrid grid = truncate_domain(p, spec, kTailTol);
  Case c{label, p, spec, w, grid, {}, direct_integrate(p, spec, grid, kOdeTol), std::nullopt};

  std::vector<GaugeTriple> bases;
  GaugeTriple constant = gauge_constant(w.k_left());
  validate_gauge(constant, grid);
  bases.push_back(constant);
  try {
    bases.push_back(gauge_wkb(w, grid));
  } catch (const TurningPoint&) {
  }
  for (const auto& b : bases) {
    c.gauges.push_back(b);
    c.gauges.push_back(gauge_special_delta(b, w, grid));
    c.gauges.push_back(gauge_antiphase(b));
  }
  if (const auto* sq = std::get_if<SquareBarrier>(&p.kind()))
    c.analytic = analytic_square_barrier(sq->v0, sq->width, spec);
  if (const auto* pt = std::get_if<PoschlTeller>(&p.kind()); pt && pt->scale == 1.0)
    c.analytic = analytic_reflectionless(pt->ell, spec);
  return c;
}

std::vector<Case> suite() {
  std::vector<Case> cases;
  for (double e : {0.5, 2.0, 5.0})
    cases.push_back(make_case("square E=" + std::to_string(e), PotentialProfile::square_barrier(1, 1), e));
  for (double e : {0.5, 2.0})
    cases.push_back(make_case("gaussian E=" + std::to_string(e), PotentialProfile::gaussian(1, 1), e));
  for (int ell : {1, 2})
    for (double e : {0.5, 1.0, 10.0})
      cases.push_back(make_case("pt" + std::to_string(ell) + " E=" + std::to_string(e),
                                PotentialProfile::poschl_teller(ell), e));
  return cases;
}

// The unit-current wave e^{ik(x - x_min)}/sqrt(k) expressed in gauge g.
CoefficientState start_state(const Case& c, const GaugeTriple& g) {
  const double k = c.field.k_left();
  const Complex psi = 1.0 / std::sqrt(k);
  return coefficients_from_psi(g, {c.grid.x_min, psi, Complex{0.0, k} * psi});
}

// psi at increasing positions xs, by evolving from the left edge through each one.
std::vector<Complex> psi_along(const Case& c, const GaugeTriple& g, const std::vector<double>& xs) {
  const RhoPair r(g, c.field);
  CoefficientState s = start_state(c, g);
  std::vector<Complex> out;
  out.reserve(xs.size());
  for (double x : xs) {
    if (x != s.x) s = evolve(r, s, x, kOdeTol);
    out.push_back(reconstruct_psi(g, s).psi);
  }
  return out;
}

struct Verdict {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Verdict()>& check) {
  Verdict v;
  try {
    v = check();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  if (!v.pass) ++failures;
  std::printf("%s  [%2d] %s: %s\n", v.pass ? "PASS" : "FAIL", id, title.c_str(), v.detail.c_str());
  std::fflush(stdout);
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Track the worst value and where it occurred.
struct Worst {
  double value = 0.0;
  std::string where;
  void update(double v, const std::string& w) {
    if (v > value || where.empty()) {
      value = std::max(value, v);
      where = w;
    }
  }
};

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<Case> cases = suite();

  report(1, "current conservation along evolution", [&] {
    const auto start = std::chrono::steady_clock::now();
    Worst w;
    for (const auto& c : cases) {
      for (const auto& g : c.gauges) {
        const RhoPair r(g, c.field);
        const CoefficientState s0 = start_state(c, g);
        const double j0 = std::norm(s0.a) - std::norm(s0.b);
        EvolveOptions opts;
        opts.tol = kOdeTol;
        opts.observer = [&](const CoefficientState& s) {
          w.update(std::abs(std::norm(s.a) - std::norm(s.b) - j0), c.name + " " + g.id);
        };
        evolve(r, s0, c.grid.x_max, opts);
      }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return Verdict{w.value < 1e-10 && secs < 10.0,
                   "max drift " + sci(w.value) + " (" + w.where + "), " + sci(secs) + " s"};
  });

  report(2, "oracle equivalence of transmission", [&] {
    Worst direct, analytic;
    for (const auto& c : cases) {
      for (const auto& g : c.gauges) {
        const double t = scattering_amplitudes(c.potential, c.energy, g, c.grid, kOdeTol).transmission;
        direct.update(std::abs(t - c.direct.transmission), c.name + " " + g.id);
        if (c.analytic && c.analytic->method == OracleMethod::analytic_square_barrier)
          analytic.update(std::abs(t - c.analytic->transmission), c.name + " " + g.id);
      }
    }
    const double t2 = analytic_square_barrier(1, 1, at(2.0)).transmission;
    // 30-digit evaluation of 1 / (1 + sin^2(1) / 8)
    const bool pass = direct.value < 1e-7 && analytic.value < 1e-6 && std::abs(t2 - 0.918687706882706660) < 1e-15;
    return Verdict{pass, "vs direct " + sci(direct.value) + ", vs analytic " + sci(analytic.value) +
                             ", T(V0=1,L=1,E=2) = " + std::to_string(t2)};
  });

  report(3, "gauge independence of T, R and psi", [&] {
    Worst dt, dr, dpsi;
    for (const auto& c : cases) {
      const std::vector<double> xs = c.grid.nodes();
      std::vector<Complex> ref(c.direct.psi_samples.size());
      double scale = 0.0;
      for (std::size_t i = 0; i < ref.size(); ++i) {
        ref[i] = c.direct.psi_samples[i].psi;
        scale = std::max(scale, std::abs(ref[i]));
      }
      const ScatteringAmplitudes first =
          scattering_amplitudes(c.potential, c.energy, c.gauges.front(), c.grid, kOdeTol);
      for (const auto& g : c.gauges) {
        const ScatteringAmplitudes a = scattering_amplitudes(c.potential, c.energy, g, c.grid, kOdeTol);
        dt.update(std::abs(a.transmission - first.transmission), c.name + " " + g.id);
        dr.update(std::abs(a.reflection - first.reflection), c.name + " " + g.id);
        const std::vector<Complex> psi = psi_along(c, g, xs);
        for (std::size_t i = 0; i < psi.size(); ++i)
          dpsi.update(std::abs(psi[i] - ref[i]) / scale, c.name + " " + g.id);
      }
    }
    return Verdict{dt.value < 1e-7 && dr.value < 1e-7 && dpsi.value < 1e-7,
                   "|dT| " + sci(dt.value) + ", |dR| " + sci(dr.value) + ", psi rel " + sci(dpsi.value) + " (" +
                       dpsi.where + ")"};
  });

  report(4, "path-ordered product realization", [&] {
    Worst ident, comp, agree;
    for (const auto& c : cases) {
      for (const auto& g : c.gauges) {
        const RhoPair r(g, c.field);
        const std::string at_case = c.name + " " + g.id;
        const double mid = 0.5 * (c.grid.x_min + c.grid.x_max);
        ident.update(transfer_matrix(r, mid, mid).entries.max_abs_diff(Matrix2::identity()), at_case);

        const double x1 = c.grid.x_min + 0.37 * c.grid.width();
        const TransferMatrix whole = transfer_matrix(r, c.grid.x_min, c.grid.x_max);
        const TransferMatrix parts =
            compose(transfer_matrix(r, x1, c.grid.x_max), transfer_matrix(r, c.grid.x_min, x1));
        comp.update(whole.entries.max_abs_diff(parts.entries), at_case);

        const CoefficientState s0 = start_state(c, g);
        const CoefficientState adaptive = evolve(r, s0, c.grid.x_max, kOdeTol);
        const CoefficientState product = whole.apply(s0);
        agree.update(std::max(std::abs(adaptive.a - product.a), std::abs(adaptive.b - product.b)), at_case);
      }
    }
    return Verdict{ident.value == 0.0 && comp.value < 1e-9 && agree.value < 1e-8,
                   "identity " + sci(ident.value) + ", composition " + sci(comp.value) + ", vs adaptive " +
                       sci(agree.value) + " (" + agree.where + ")"};
  });

  report(5, "transmission and reflection bounds hold", [&] {
    double worst_t = INFINITY, worst_r = INFINITY;
    std::string where;
    int checked = 0;
    for (const auto& c : cases) {
      std::vector<OracleResult> exact{c.direct};
      if (c.analytic) exact.push_back(*c.analytic);
      for (const auto& g : c.gauges) {
        const BoundReport b = bound_report(c.potential, c.energy, g, c.grid, kQuadTol);
        for (const auto& o : exact) {
          ++checked;
          const double mt = o.transmission - b.t_lower, mr = b.r_upper - o.reflection;
          if (mt < worst_t) where = c.name + " " + g.id;
          worst_t = std::min(worst_t, mt);
          worst_r = std::min(worst_r, mr);
        }
      }
    }
    const auto sq = make_case("square", PotentialProfile::square_barrier(1, 1), 2.0);
    const BoundReport b = bound_report(sq.potential, sq.energy, gauge_constant(std::sqrt(2.0)), sq.grid, kQuadTol);
    const bool concrete = std::abs(b.theta_integral - 1.0 / (2.0 * std::sqrt(2.0))) < 1e-12 &&
                          b.t_lower <= sq.analytic->transmission;
    return Verdict{worst_t >= -1e-12 && worst_r >= -1e-12 && concrete,
                   std::to_string(checked) + " checks, min T margin " + sci(worst_t) + " (" + where +
                       "), min R margin " + sci(worst_r) + "; square E=2 constant: theta " + sci(b.theta_integral) +
                       ", t_lower " + sci(b.t_lower) + " <= T " + sci(sq.analytic->transmission)};
  });

  report(6, "special-case degenerations are exact", [&] {
    long samples = 0, nonzero_diag = 0, nonzero_phase = 0;
    for (const auto& c : cases) {
      for (const auto& g : c.gauges) {
        const bool special = g.id.find("special_delta") != std::string::npos;
        const bool anti = g.id.find("antiphase") != std::string::npos;
        if (!special && !anti) continue;
        const RhoPair r(g, c.field);
        for (double x = c.grid.x_min; x <= c.grid.x_max; x += c.grid.width() / 997.0) {
          ++samples;
          if (special) {
            const Matrix2 m = rhs_matrix(r, x);
            if (m(0, 0) != Complex{} || m(1, 1) != Complex{}) ++nonzero_diag;
          }
          if (anti && g.phase(x) != Complex{}) ++nonzero_phase;
        }
      }
    }
    return Verdict{nonzero_diag == 0 && nonzero_phase == 0,
                   std::to_string(samples) + " samples, nonzero diagonals " + std::to_string(nonzero_diag) +
                       ", nonzero phases " + std::to_string(nonzero_phase)};
  });

  report(7, "theta does not depend on Delta", [&] {
    long samples = 0, mismatches = 0;
    for (const auto& c : cases) {
      // gauges come in triples sharing phi and chi: base, +special_delta, +antiphase
      for (std::size_t i = 0; i + 2 < c.gauges.size(); i += 3) {
        const ThetaField base = theta_field(c.gauges[i], c.field);
        const ThetaField sd = theta_field(c.gauges[i + 1], c.field);
        const ThetaField ap = theta_field(c.gauges[i + 2], c.field);
        for (double x = c.grid.x_min; x <= c.grid.x_max; x += c.grid.width() / 1009.0) {
          ++samples;
          const double t = base(x);
          if (sd(x) != t || ap(x) != t) ++mismatches;
        }
        if (base.jumps != sd.jumps || base.jumps != ap.jumps) ++mismatches;
      }
    }
    return Verdict{mismatches == 0, std::to_string(samples) + " samples, " + std::to_string(mismatches) + " mismatches"};
  });

  report(8, "Schroedinger residual converges at second order", [&] {
    const std::vector<double> hs{0.1, 0.05, 0.025, 0.0125};
    double lo = INFINITY, hi = 0.0;
    std::string where;
    for (const auto& c : cases) {
      // stencil centers kept clear of potential discontinuities
      std::vector<double> centers;
      const double a = c.grid.x_min + 0.15, b = c.grid.x_max - 0.15;
      for (int i = 0; i <= 40; ++i) {
        const double x = a + (b - a) * i / 40.0;
        bool clear = true;
        for (double d : c.potential.discontinuities()) clear = clear && std::abs(x - d) > 0.15;
        if (clear) centers.push_back(x);
      }
      for (const auto& g : c.gauges) {
        std::vector<double> residuals;
        for (double h : hs) {
          std::vector<double> xs;
          for (double x : centers) {
            xs.push_back(x - h);
            xs.push_back(x);
            xs.push_back(x + h);
          }
          const std::vector<Complex> psi = psi_along(c, g, xs);
          double worst = 0.0;
          for (std::size_t i = 0; i < centers.size(); ++i) {
            const Complex d2 = (psi[3 * i] - 2.0 * psi[3 * i + 1] + psi[3 * i + 2]) / (h * h);
            worst = std::max(worst, std::abs(d2 + c.field.k_squared(centers[i]) * psi[3 * i + 1]));
          }
          residuals.push_back(worst);
        }
        for (std::size_t i = 1; i < residuals.size(); ++i) {
          const double ratio = residuals[i - 1] / residuals[i];
          if (ratio < lo || ratio > hi) where = c.name + " " + g.id;
          lo = std::min(lo, ratio);
          hi = std::max(hi, ratio);
        }
      }
    }
    return Verdict{lo >= 2.5 && hi <= 6.0, "halving ratios in [" + sci(lo) + ", " + sci(hi) + "] (" + where + ")"};
  });

  report(9, "reflectionless potentials", [&] {
    Worst sz, direct;
    for (const auto& c : cases) {
      if (!std::holds_alternative<PoschlTeller>(c.potential.kind())) continue;
      direct.update(c.direct.reflection, c.name);
      for (const auto& g : c.gauges)
        sz.update(scattering_amplitudes(c.potential, c.energy, g, c.grid, kOdeTol).reflection, c.name + " " + g.id);
    }
    return Verdict{sz.value < 1e-7 && direct.value < 1e-7,
                   "max R: sz " + sci(sz.value) + ", direct " + sci(direct.value)};
  });

  report(10, "gauge optimizer improves on its baseline", [&] {
    double worst_gain = INFINITY, worst_margin = INFINITY;
    std::string where;
    for (const auto& c : cases) {
      const GaugeFamily family = interpolation_family(c.field, c.grid, c.field.k_left());
      const OptimizedGauge o = optimize_gauge(c.potential, c.energy, family, c.grid, kQuadTol);
      if (!o.baseline_admissible) return Verdict{false, "baseline inadmissible for " + c.name};
      const double gain = o.baseline_report.theta_integral - o.report.theta_integral;
      if (gain < worst_gain) where = c.name;
      worst_gain = std::min(worst_gain, gain);
      worst_margin = std::min({worst_margin, c.direct.transmission - o.report.t_lower,
                               o.report.r_upper - c.direct.reflection});
    }
    return Verdict{worst_gain >= 0.0 && worst_margin >= -1e-12,
                   "min theta reduction " + sci(worst_gain) + " (" + where + "), min bound margin " + sci(worst_margin)};
  });

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%d of 10 criteria failed, %.2f s\n", failures, secs);
  return failures == 0 ? 0 : 1;
}
