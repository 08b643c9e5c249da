#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "linewalk/presets.hpp"
#include "linewalk/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace linewalk;

namespace {

Walk walk(const std::string& name) { return preset(name).system.cast<double>(); }

Interval<double> k_of(const std::string& name) {
  const auto k = recurrence_interval(preset(name).system);
  return {to_double(k.lo), to_double(k.hi)};
}

// Two-sample Kolmogorov-Smirnov statistic, written out directly.
double ks_distance(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

std::vector<double> positions(const EmpiricalRadonMeasure& m) { return {m.positions().begin(), m.positions().end()}; }

EmpiricalRadonMeasure lattice(int lo, int hi, double offset = 0.0) {
  std::vector<WeightedPoint> s;
  for (int j = lo; j <= hi; ++j) s.push_back({j + offset, 1.0});
  return EmpiricalRadonMeasure(s, offset);
}

}  // namespace

TEST_CASE("test functions") {
  const auto t = TestFunction::trapezoid(0, 1, 0.5);
  CHECK(t(-0.5) == 0);
  CHECK(t(-0.25) == doctest::Approx(0.5));
  CHECK(t(0.3) == 1);
  CHECK(t(1.25) == doctest::Approx(0.5));
  CHECK(t(2) == 0);
  CHECK(t.lebesgue_integral() == doctest::Approx(1.5));
  CHECK(t.support().lo == -0.5);
  CHECK(TestFunction::hat(2, 1).lebesgue_integral() == doctest::Approx(1.0));
  CHECK(t.scaled(2)(0.5) == 2);
  CHECK(t.nonnegative());
  CHECK(!t.scaled(-1).nonnegative());
  CHECK_THROWS(TestFunction({0, 1}, {1, 0}));
  CHECK_THROWS(TestFunction({0, 0, 1}, {0, 1, 0}));
  CHECK_THROWS(TestFunction::trapezoid(1, 0, 0.1));
}

TEST_CASE("empirical measure queries") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pos(-3, 3), wt(0.1, 2);
  std::vector<WeightedPoint> s;
  for (int i = 0; i < 500; ++i) s.push_back({pos(rng), wt(rng)});
  s.push_back({0.5, 1.0});
  s.push_back({0.5, 2.0});
  const EmpiricalRadonMeasure nu(s, 0.25);

  auto brute = [&](double a, double b) {
    double m = 0;
    for (const auto& p : s)
      if (p.position >= a && p.position <= b) m += p.weight;
    return m;
  };
  for (int t = 0; t < 200; ++t) {
    double a = pos(rng), b = pos(rng);
    if (a > b) std::swap(a, b);
    CHECK(nu.mass(a, b) == doctest::Approx(brute(a, b)));
    // inclusion monotonicity
    CHECK(nu.mass(a - 0.1, b + 0.1) >= nu.mass(a, b));
  }
  CHECK(nu.mass(0.5, 0.5) == doctest::Approx(3.0));
  CHECK(nu.mass(1, 0) == 0);
  CHECK(nu.cdf(0.25) == doctest::Approx(brute(0.25, 0.25)));
  double prev = -1e300;
  for (double x = -4; x <= 4; x += 0.01) {
    CHECK(nu.cdf(x) >= prev - 1e-12);
    prev = nu.cdf(x);
  }
  CHECK(nu.cdf(-1) == doctest::Approx(-brute(-1, 0.25)));
  CHECK(nu.total() == doctest::Approx(brute(-10, 10)));

  const auto f = TestFunction::hat(0.3, 1.2);
  double direct = 0, composed = 0;
  const auto g = PLHomeo<double>::piecewise({0.0, 1.0}, {0.5, 2.0, 1.0}, 0.1);
  for (const auto& p : s) {
    direct += p.weight * f(p.position);
    composed += p.weight * f(g(p.position));
  }
  CHECK(nu.integrate(f) == doctest::Approx(direct));
  CHECK(nu.integrate_composed(f, g) == doctest::Approx(composed));

  const auto n1 = nu.normalized({0, 1});
  CHECK(n1.mass(0, 1) == doctest::Approx(1.0));
  const EmpiricalRadonMeasure parts[] = {nu, nu};
  const double c[] = {1.0, 0.5};
  CHECK(EmpiricalRadonMeasure::combine(parts, c).total() == doctest::Approx(1.5 * nu.total()));
  CHECK(nu.with_interval_scaled(0.4, 0.6, 2).mass(0.5, 0.5) == doctest::Approx(6.0));

  const EmpiricalRadonMeasure empty;
  CHECK(empty.mass(-1, 1) == 0);
  CHECK(empty.cdf(3) == 0);
  CHECK_THROWS(empty.normalized({0, 1}));
  CHECK_THROWS(EmpiricalRadonMeasure({{0.0, -1.0}}));
}

TEST_CASE("Krylov-Bogolyubov nu_0") {
  for (const auto& p : presets()) {
    INFO(p.name);
    const auto sys = walk(p.name);
    const auto xi = BumpProfile::around(k_of(p.name));
    const auto kb = krylov_bogolyubov(sys, xi, 200, 3, MonteCarlo{7, 1});
    CHECK(kb.nu0.total() == doctest::Approx(1.0));
    CHECK(kb.chains.size() == 3);
    CHECK(kb.nu0.hull().lo >= xi.outer.lo);
    CHECK(kb.nu0.hull().hi <= xi.outer.hi);
  }

  // {+-1}: the orbit of mid(K) = 0.5005 meets the outer interval only at 0.5005
  const auto k = k_of("translations-discrete");
  const auto xi = BumpProfile::around(k);
  const double start = k.midpoint();
  std::vector<double> reachable;
  for (int j = -10; j <= 10; ++j)
    if (xi.outer.contains(start + j)) reachable.push_back(start + j);
  const auto kb = krylov_bogolyubov(walk("translations-discrete"), xi, 100, 2, MonteCarlo{8, 1});
  for (double x : kb.nu0.positions())
    CHECK(std::any_of(reachable.begin(), reachable.end(), [x](double r) { return std::abs(r - x) < 1e-12; }));

  // seed replication on the affine system
  const auto aff = walk("affine");
  const auto axi = BumpProfile::around(k_of("affine"));
  const auto a = krylov_bogolyubov(aff, axi, 10000, 1, MonteCarlo{1, 1});
  const auto b = krylov_bogolyubov(aff, axi, 10000, 1, MonteCarlo{2, 1});
  CHECK(ks_distance(positions(a.nu0), positions(b.nu0)) <= 0.05);

  // determinism across thread counts
  const auto c1 = krylov_bogolyubov(aff, axi, 500, 8, MonteCarlo{3, 1});
  const auto c4 = krylov_bogolyubov(aff, axi, 500, 8, MonteCarlo{3, 4});
  CHECK(positions(c1.nu0) == positions(c4.nu0));
}

TEST_CASE("stationarity residual on exact inputs") {
  const auto sys = walk("translations-discrete");
  const auto nu = lattice(-20, 20);
  const TestFunction probes[] = {TestFunction::hat(0, 2), TestFunction::trapezoid(-3, 4, 1)};
  CHECK(stationarity_residual(sys, nu, probes) == 0.0);
  // one doubled weight breaks invariance
  const auto bad = nu.with_weight_scaled(20, 2.0);  // the atom at 0
  CHECK(bad.positions()[20] == 0.0);
  CHECK(stationarity_residual(sys, bad, probes) > 0.1);
}

TEST_CASE("build_stationary on the translation lattice") {
  const auto sys = walk("translations-discrete");
  const auto k = k_of("translations-discrete");
  const auto xi = BumpProfile::around(k);
  const auto kb = krylov_bogolyubov(sys, xi, 10, 8, MonteCarlo{11, 1});
  StationaryOptions opts;
  opts.pool.stop.retain = Interval<double>{-6.0, 7.0};
  // Runs longer than 1e5 steps (about 0.25%) are cut; they would add about
  // 2j * 0.0025 to the mass at distance j.
  opts.pool.stop.cap = 100000;
  const auto est = build_stationary(sys, kb, xi, 1250, MonteCarlo{12, 1}, opts);
  CHECK(est.nu.mass(k) == doctest::Approx(1.0));
  CHECK(est.batches.size() == 8);
  // counting measure on the orbit: every lattice point carries the mass of K
  for (int j = -3; j <= 3; ++j) {
    const double x = k.midpoint() + j;
    CHECK(est.nu.mass(x - 0.25, x + 0.25) == doctest::Approx(1.0).epsilon(0.05));
  }
  CHECK(est.nu.mass(k.midpoint() + 0.3, k.midpoint() + 0.7) == 0.0);

  const auto atoms = atom_scan(est.nu, 0.5);
  CHECK(atoms.size() >= 12);
  for (const auto& a : atoms) {
    const double j = a.position - k.midpoint();
    CHECK(std::abs(j - std::round(j)) < 1e-9);
  }
  const std::vector<double> mults(8, 1.0);
  CHECK(est.replica(mults).total() == doctest::Approx(est.nu.total()));
}

TEST_CASE("build_stationary on the affine system") {
  const auto sys = walk("affine");
  const auto k = k_of("affine");
  const auto xi = BumpProfile::around(k);
  const auto kb = krylov_bogolyubov(sys, xi, 1000, 40, MonteCarlo{21, 1});
  StationaryOptions opts;
  opts.pool.stop.retain = Interval<double>{-16.0, 16.0};
  const auto est = build_stationary(sys, kb, xi, 1, MonteCarlo{22, 1}, opts);
  CHECK(est.nu.mass(k) == doctest::Approx(1.0));
  CHECK(est.stats.truncated_fraction() < 0.01);

  const TestFunction probes[] = {TestFunction::hat(0.5, 0.5), TestFunction::hat(-1, 1), TestFunction::hat(2, 1.5),
                                 TestFunction::trapezoid(0, 1, 0.5), TestFunction::hat(0.2, 0.3)};
  const auto report = stationarity_check(sys, est, probes, 1000, MonteCarlo{23, 1});
  for (const auto& p : report.probes) CHECK(p.sigma > 0);
  CHECK(report.passed(3.0));
  const auto bad = stationarity_check(sys, est.with_interval_scaled(k.lo, k.midpoint(), 2.0), probes, 1000,
                                      MonteCarlo{23, 1});
  CHECK(bad.max_z() > 3.0);
  CHECK(stationarity_residual(sys, est.nu, probes) == doctest::Approx(report.max_abs_residual()));
}

TEST_CASE("ratio ergodic estimates") {
  const auto sys = walk("translations-minimal");
  const auto phi = TestFunction::trapezoid(0, 2, 0.01);
  const auto psi = TestFunction::trapezoid(0, 1, 0.01);
  const auto same = ratio_ergodic(sys, 0.0, phi, phi, 10000, RandomStream(1, 0));
  CHECK(same.ratio == 1.0);
  const auto twice = ratio_ergodic(sys, 0.0, phi.scaled(2), phi, 10000, RandomStream(1, 0));
  CHECK(twice.ratio == 2.0);

  // Lebesgue ratio of the two trapezoids, computed by hand: (1 + r) / (2 + r)
  const double lebesgue = 1.01 / 2.01;
  CHECK(psi.lebesgue_integral() / phi.lebesgue_integral() == doctest::Approx(lebesgue));
  std::vector<double> ratios;
  for (std::uint64_t i = 0; i < 9; ++i) ratios.push_back(ratio_ergodic(sys, 0.0, psi, phi, 1000000, RandomStream(2, i)).ratio);
  std::sort(ratios.begin(), ratios.end());
  CHECK(std::abs(ratios[4] - 0.5) <= 0.05);
  CHECK(std::abs(ratios[4] - lebesgue) <= 0.1 * lebesgue);

  // cocycle: r(psi, phi) r(phi, chi) = r(psi, chi) along one path
  const auto chi = TestFunction::hat(0.7, 0.6);
  const TestFunction fs[] = {psi, phi, chi};
  const auto sums = ergodic_sums(sys, 0.3, fs, 200000, RandomStream(3, 0));
  CHECK((sums[0] / sums[1]) * (sums[1] / sums[2]) == doctest::Approx(sums[0] / sums[2]).epsilon(1e-12));

  const auto far = ratio_ergodic(sys, 1000.0, psi, phi, 10, RandomStream(4, 0));
  CHECK(!far.recurrent());
  CHECK(std::isnan(far.ratio));
  CHECK_THROWS(ratio_ergodic(sys, 0.0, psi, phi.scaled(-1), 10, RandomStream(4, 0)));
}

TEST_CASE("uniqueness cross-check") {
  const auto sys = walk("translations-minimal");
  const auto phi = TestFunction::trapezoid(0, 2, 0.01);
  const auto psi = TestFunction::trapezoid(0, 1, 0.01);
  const auto trivial = uniqueness_cross_check(sys, 0.0, 7.3, phi, phi, 20000, 4, MonteCarlo{1, 1});
  CHECK(trivial.median_first == 1.0);
  CHECK(trivial.median_second == 1.0);
  const auto r = uniqueness_cross_check(sys, 0.0, 7.3, psi, phi, 1000000, 9, MonteCarlo{2, 1});
  CHECK(r.not_recurrent == 0);
  CHECK(r.relative_gap() <= 0.1);
  CHECK_THROWS(uniqueness_cross_check(sys, 1.0, 1.0, psi, phi, 10, 1, MonteCarlo{}));

  const auto aff = walk("affine");
  const auto k = k_of("affine");
  const auto xi = BumpProfile::around(k);
  const auto kb = krylov_bogolyubov(aff, xi, 1000, 40, MonteCarlo{31, 1});
  StationaryOptions opts;
  opts.pool.stop.retain = Interval<double>{-16.0, 16.0};
  const auto est = build_stationary(aff, kb, xi, 1, MonteCarlo{32, 1}, opts);
  const auto aphi = TestFunction::trapezoid(k.lo, k.hi, 0.5);
  const auto apsi = TestFunction::hat(0.5, 0.5);
  const auto three = uniqueness_cross_check(aff, 0.0, 3.0, apsi, aphi, 1000000, 9, MonteCarlo{33, 1}, &est.nu);
  REQUIRE(three.reference);
  CHECK(three.three_way_gap() <= 0.15);
}

TEST_CASE("atom scan") {
  CHECK(atom_scan(EmpiricalRadonMeasure(), 0.01).empty());
  const auto atoms = atom_scan(lattice(-3, 3), 0.5);
  REQUIRE(atoms.size() == 7);
  CHECK(atoms[0].position == -3.0);
  // nearly coincident samples merge
  const EmpiricalRadonMeasure pair({{1.0, 0.3}, {1.0 + 1e-12, 0.3}, {2.0, 0.1}});
  const auto merged = atom_scan(pair, 0.5);
  REQUIRE(merged.size() == 1);
  CHECK(merged[0].mass == doctest::Approx(0.6));

  const auto sys = walk("translations-minimal");
  const auto k = k_of("translations-minimal");
  const auto xi = BumpProfile::around(k);
  StationaryOptions opts;
  opts.pool.stop.retain = Interval<double>{-4.0, 4.0};
  // A finite pool lives on finitely many orbit points m + n sqrt 2, each with
  // a few percent of nu(K); lattice atoms carry all of it. The largest point
  // mass shrinks as the chains spread.
  auto largest_point_mass = [&](std::size_t iterations, std::uint64_t seed) {
    const auto kb = krylov_bogolyubov(sys, xi, iterations, 20, MonteCarlo{seed, 1});
    const auto est = build_stationary(sys, kb, xi, 2, MonteCarlo{seed + 1, 1}, opts);
    CHECK(atom_scan(est.nu, 0.1).empty());
    double m = 0;
    for (const auto& a : atom_scan(est.nu, 0.0)) m = std::max(m, a.mass);
    return m;
  };
  const double short_chains = largest_point_mass(100, 41);
  const double long_chains = largest_point_mass(1000, 43);
  CHECK(long_chains < short_chains);
}

TEST_CASE("window masses grow without saturation") {
  const std::vector<double> radii{4, 8, 16, 32};
  {
    const auto sys = walk("translations-minimal");
    const auto xi = BumpProfile::around(k_of("translations-minimal"));
    const auto kb = krylov_bogolyubov(sys, xi, 100, 20, MonteCarlo{51, 1});
    const auto w = bi_infiniteness_probe(sys, kb.nu0, xi, radii, 2, MonteCarlo{52, 1});
    for (std::size_t i = 1; i < w.masses.size(); ++i) CHECK(w.masses[i] >= w.masses[i - 1]);
    for (double g : w.growth()) CHECK(g == doctest::Approx(2.0).epsilon(0.15));
    CHECK(w.masses.back() >= 1.5 * w.masses[w.masses.size() - 2]);
  }
  {
    const auto sys = walk("affine");
    const auto xi = BumpProfile::around(k_of("affine"));
    const auto kb = krylov_bogolyubov(sys, xi, 500, 20, MonteCarlo{53, 1});
    const std::vector<double> octaves{1, 2, 4, 8, 16};
    const auto w = bi_infiniteness_probe(sys, kb.nu0, xi, octaves, 1, MonteCarlo{54, 1});
    for (double g : w.growth()) CHECK(g >= 1.2);
  }
  CHECK_THROWS(bi_infiniteness_probe(walk("affine"), EmpiricalRadonMeasure({{0.5, 1.0}}), BumpProfile::around({0, 1}),
                                     std::vector<double>{2, 1}, 1, MonteCarlo{}));
}

TEST_CASE("support diagnostic") {
  const auto sys = walk("translations-discrete");
  const auto pieces = minimal_set_estimate(sys, 0.5005, 20000, 0.5, RandomStream(61, 0));
  REQUIRE(pieces.size() > 10);
  for (const auto& p : pieces) CHECK(p.length() < 1e-9);
  const auto nu = lattice(-5, 5, 0.5005);
  CHECK(mass_outside(nu, pieces, 1e-9) == 0.0);
  const auto off_lattice = lattice(-5, 5, 0.75);
  CHECK(mass_outside(off_lattice, pieces, 1e-9) > 5.0);

  // dense orbit: near the start the sample leaves no gap
  const auto minimal = minimal_set_estimate(walk("translations-minimal"), 0.0, 200000, 0.1, RandomStream(62, 0));
  const auto core = std::find_if(minimal.begin(), minimal.end(), [](const auto& p) { return p.contains(0.0); });
  REQUIRE(core != minimal.end());
  CHECK(core->lo < -5.0);
  CHECK(core->hi > 5.0);
}
