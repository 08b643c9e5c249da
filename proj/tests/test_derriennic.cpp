#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "linewalk/derriennic.hpp"
#include "linewalk/geometry.hpp"
#include "linewalk/presets.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace linewalk;

namespace {

Walk walk(const std::string& name) { return preset(name).system.cast<double>(); }

Interval<double> k_of(const std::string& name) {
  const auto k = recurrence_interval(preset(name).system);
  return {to_double(k.lo), to_double(k.hi)};
}

// n equally spaced points lo + i * step, each of mass `weight`.
EmpiricalRadonMeasure grid_pool(double lo, double step, std::size_t n, double weight) {
  std::vector<WeightedPoint> s;
  for (std::size_t i = 0; i < n; ++i) s.push_back({lo + static_cast<double>(i) * step, weight});
  return EmpiricalRadonMeasure(std::move(s), lo);
}

struct Pipeline {
  StationaryEstimate estimate;
  DerriennicChart chart;
  std::vector<double> grid;
  ConjugatedSystem conjugated;
};

Pipeline run_pipeline(const std::string& name, std::size_t iterations, std::size_t chains, std::size_t per_start,
                      double window, std::uint64_t seed) {
  const auto sys = walk(name);
  const auto k = k_of(name);
  const auto xi = BumpProfile::around(k);
  const auto kb = krylov_bogolyubov(sys, xi, iterations, chains, MonteCarlo{seed, 1});
  StationaryOptions opts;
  opts.pool.stop.retain = Interval<double>{-window, window};
  auto est = build_stationary(sys, kb, xi, per_start, MonteCarlo{seed + 1, 1}, opts);
  auto chart = build_chart(est.nu, k.midpoint());
  auto grid = chart_grid(chart, k);
  ConjugateOptions co;
  co.extra_nodes = grid;
  auto conj = conjugate(sys, chart, co);
  return {std::move(est), std::move(chart), std::move(grid), std::move(conj)};
}

}  // namespace

TEST_CASE("chart of a uniform pool is the identity") {
  const std::size_t n = 1000;
  const auto nu = grid_pool(0.0, 1.0 / n, n, 1.0 / n);
  const auto chart = build_chart(nu, 0.0);
  CHECK(chart(0.0) == 0.0);
  CHECK(chart.max_node_mass() == doctest::Approx(1.0 / n));
  for (int i = 0; i <= 200; ++i) {
    const double x = i / 200.0;
    CHECK(std::abs(chart(x) - x) <= 1.0 / n);
  }
  for (double x : nu.positions()) CHECK(std::abs(chart.inverse(chart(x)) - x) <= 1e-12);
}

TEST_CASE("chart arithmetic for a density-2 pool") {
  const std::size_t n = 2000;
  const auto raw = grid_pool(0.0, 1.0 / n, n, 2.0 / n);
  const auto nu = raw.normalized({0.0, 0.5});
  const auto chart = build_chart(nu, 0.0);
  CHECK(chart(1.0) == doctest::Approx(2.0).epsilon(2.0 / n));
  CHECK(chart(0.5) == doctest::Approx(1.0).epsilon(2.0 / n));
  // strictly increasing with affine tails at the boundary density
  CHECK(chart(-1.0) == doctest::Approx(-2.0).epsilon(1e-3));
  CHECK(chart(3.0) == doctest::Approx(6.0).epsilon(1e-3));
}

TEST_CASE("chart construction rejects degenerate input") {
  CHECK_THROWS_AS(build_chart(EmpiricalRadonMeasure({{1.0, 1.0}, {1.0, 2.0}}), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_chart(EmpiricalRadonMeasure(std::vector<WeightedPoint>{}), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_chart(grid_pool(0, 1, 10, 1), 20.0), std::invalid_argument);
  // samples closer than the width floor merge into one node
  const auto merged = build_chart(EmpiricalRadonMeasure({{0.0, 1.0}, {1e-12, 1.0}, {1.0, 1.0}}), 0.5);
  CHECK(merged.nodes().size() == 2);
  CHECK(merged.max_node_mass() == 2.0);
}

TEST_CASE("counting measure on the lattice conjugates translations to translations") {
  const auto nu = grid_pool(-50, 1, 101, 1.0);
  const auto chart = build_chart(nu, 0.0);
  for (int x = -50; x <= 50; ++x) CHECK(chart(x) == doctest::Approx(x).epsilon(1e-12));
  const auto sys = walk("translations-discrete");
  const auto conj = conjugate(sys, chart);
  CHECK(validate(conj.system, 1e-9).passed());
  for (std::size_t i = 0; i < sys.size(); ++i)
    for (double u = -40; u <= 40; u += 0.375)
      CHECK(conj.system.map(i)(u) == doctest::Approx(sys.map(i)(u)).epsilon(1e-12));
}

TEST_CASE("identity chart leaves the system unchanged") {
  // density one on [-64, 64] with nodes at multiples of 1/16: D is exactly x
  const auto nu = grid_pool(-64, 1.0 / 16, 2049, 1.0 / 16);
  const auto chart = build_chart(nu, 0.0);
  const auto sys = walk("affine");
  const auto conj = conjugate(sys, chart);
  for (std::size_t i = 0; i < sys.size(); ++i)
    for (double u : conj.nodes) CHECK(conj.system.map(i)(u) == doctest::Approx(sys.map(i)(u)).epsilon(1e-12));
  CHECK(conj.pairing_gap <= 1e-9);
  // x -> 2x keeps the fit hull to [-32, 32]
  CHECK(conj.grid_tolerance == doctest::Approx(64.0 / 511));
  CHECK(conj.nodes.front() == -32.0);
  CHECK(conj.nodes.back() == 32.0);

  // drift of the symmetric translations is exactly zero on a dyadic grid
  const auto tr = conjugate(walk("translations-discrete"), chart);
  std::vector<double> grid;
  for (int i = -16; i <= 16; ++i) grid.push_back(i / 8.0);
  CHECK(drift_profile(tr.system, grid).max_abs == 0.0);
}

TEST_CASE("pre-chart affine drift") {
  const auto& exact = preset("affine").system;
  CHECK(drift_at(exact, Rational(8)) == Rational(1));
  CHECK(drift_at(walk("affine"), 8.0) == 1.0);
  const double grid[] = {8.0};
  CHECK(drift_profile(walk("affine"), grid).max_abs == 1.0);
}

TEST_CASE("Lipschitz and displacement checks on translations") {
  const auto sys = walk("translations-discrete");  // weights 1/2
  const auto lip = lipschitz_check(sys, 0.0);
  for (const auto& g : lip.generators) {
    CHECK(g.value == 1.0);
    CHECK(g.bound == 2.0);
  }
  CHECK(lip.passed());
  const double grid[] = {-2.5, -1, 0, 0.25, 3};
  const auto disp = displacement_check(sys, grid, 0.0);
  CHECK(disp.phi_max == doctest::Approx(0.5));
  for (const auto& g : disp.generators) {
    CHECK(g.value == 1.0);
    CHECK(g.bound == doctest::Approx(2.0));
  }
  CHECK(disp.passed());

  // an identity-like generator has zero displacement
  auto gens = sys.generators();
  gens.push_back({"id", PLHomeo<double>::identity(), 0.0});
  for (auto& g : gens) g.weight = 1.0 / 3;
  const Walk with_id(gens, {1, 0, 2});
  const auto d = displacement_check(with_id, grid, 0.0);
  CHECK(d.generators[2].value == 0.0);
  CHECK(d.generators[2].passed);
}

TEST_CASE("slopes at a resolution") {
  // slope 100 on [0, 0.01], 1 elsewhere: a spike shorter than the resolution
  const auto g = PLHomeo<double>::piecewise({0.0, 0.01}, {1.0, 100.0, 1.0}, 0.0);
  CHECK(slope_at_resolution(g, 0.0) == 100.0);
  CHECK(slope_at_resolution(g, 1.0) == doctest::Approx(1.99));
  CHECK(slope_at_resolution(g, 0.001) == doctest::Approx(100.0));
  CHECK(slope_at_resolution(PLHomeo<double>::affine(2.0, 1.0), 0.5) == 2.0);
  // tails are never averaged away
  const auto tail = PLHomeo<double>::piecewise({0.0}, {1.0, 5.0}, 0.0);
  CHECK(slope_at_resolution(tail, 10.0) == 5.0);
}

TEST_CASE("augmentation to a minimal system") {
  const auto aug = augment_to_minimal(preset("translations-discrete").system);
  CHECK(aug.size() == 6);
  CHECK(validate(aug).passed());
  Rational total(0);
  for (std::size_t i = 0; i < aug.size(); ++i) total += aug.weight(i);
  CHECK(total == 1);
  CHECK(aug.weight(0) == Rational(1, 4));
  CHECK(aug.weight(4) == Rational(1, 8));
  CHECK(aug.map(4)(Rational(0)) == sqrt2_dyadic());
  const auto v = classify_structure(aug.cast<double>(), 100000, MonteCarlo{3, 1});
  CHECK(v.kind == Structure::translation_like);
  CHECK(validate(augment_to_minimal(preset("lifted-rotation").system)).passed());
  CHECK_THROWS(augment_to_minimal(aug, Rational(1)));
}

TEST_CASE("affine pipeline: zero drift, Lipschitz and displacement") {
  const auto p = run_pipeline("affine", 200, 20, 1, 4096, 31);
  const auto k = k_of("affine");
  CHECK(std::abs(p.chart(k.midpoint())) <= 1e-12);
  CHECK(validate(p.conjugated.system, 1e-6).passed());
  CHECK(p.conjugated.pairing_gap <= p.conjugated.grid_tolerance);

  // drift at the grid is the chart drift, evaluated through the fitted maps
  const auto sys = walk("affine");
  const auto profile = drift_profile(p.conjugated.system, p.grid);
  const auto noise = drift_bootstrap(sys, p.estimate, p.chart, p.grid, 1000, MonteCarlo{33, 1});
  REQUIRE(noise.sigma.size() == p.grid.size());
  for (std::size_t i = 0; i < p.grid.size(); ++i) {
    const double x = p.chart.inverse(p.grid[i]);
    double direct = 0;
    for (std::size_t l = 0; l < sys.size(); ++l) direct += sys.weight(l) * (p.chart(sys.map(l)(x)) - p.chart(x));
    CHECK(profile.drift[i] == doctest::Approx(direct).epsilon(1e-9).scale(1e-9));
    CHECK(noise.sigma[i] > 0);
    CHECK(std::abs(profile.drift[i]) <= 3 * noise.sigma[i]);
  }
  // the raw system is far from zero drift on the same points
  double raw = 0;
  for (std::size_t i = 0; i < p.grid.size(); ++i) raw = std::max(raw, std::abs(drift_at(sys, p.chart.inverse(p.grid[i]))));
  CHECK(raw > 0.05);

  const double h = p.conjugated.grid_tolerance;
  const auto lip = lipschitz_check(p.conjugated.system, 0.1, h);
  for (const auto& g : lip.generators) MESSAGE(g.name << " slope " << g.value << " bound " << g.bound);
  CHECK(lip.passed());
  CHECK(displacement_check(p.conjugated.system, p.grid).passed());

  // pushforward of nu under D is close to Lebesgue
  const auto& nu = p.estimate.nu;
  const double left = nu.mass(p.chart.inverse(-0.4), p.chart.inverse(0.0));
  const double right = nu.mass(p.chart.inverse(0.0), p.chart.inverse(0.4));
  CHECK(left == doctest::Approx(0.4).epsilon(0.1));
  CHECK(right == doctest::Approx(0.4).epsilon(0.1));

  // conjugation is functorial on the grid, up to the fit tolerance
  const auto& e = p.conjugated.system;
  const auto composite = compose(sys.map(0), sys.map(2));  // 2 (x + 1)
  for (double u : p.grid) {
    const double direct = p.chart(composite(p.chart.inverse(u)));
    CHECK(std::abs(e.map(0)(e.map(2)(u)) - direct) <= 2 * p.conjugated.grid_tolerance);
  }
}

TEST_CASE("chart inversion and export") {
  const auto p = run_pipeline("translations-minimal", 100, 10, 1, 8, 41);
  for (double x : p.chart.nodes()) CHECK(std::abs(p.chart.inverse(p.chart(x)) - x) <= 1e-9 * std::max(1.0, std::abs(x)));
  std::ostringstream out;
  write_chart_csv(out, p.chart);
  const std::string csv = out.str();
  CHECK(csv.rfind("x,D\n", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == p.chart.nodes().size() + 1);
}
