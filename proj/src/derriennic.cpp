#include "linewalk/derriennic.hpp"

#include "linewalk/csv.hpp"
#include "linewalk/presets.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace linewalk {

DerriennicChart::DerriennicChart(PLHomeo<double> map, double origin, Interval<double> hull, std::vector<double> nodes,
                                 double max_node_mass)
    : map_(std::move(map)), origin_(origin), hull_(hull), nodes_(std::move(nodes)), max_node_mass_(max_node_mass) {}

namespace {

// Slope of the chord through nodes a and b.
double chord(const std::vector<double>& x, const std::vector<double>& y, std::size_t a, std::size_t b) {
  return (y[b] - y[a]) / (x[b] - x[a]);
}

PLHomeo<double> through_nodes(const std::vector<double>& x, const std::vector<double>& y, double left_tail,
                              double right_tail) {
  std::vector<double> slopes{left_tail};
  slopes.reserve(x.size() + 1);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) slopes.push_back(chord(x, y, i, i + 1));
  slopes.push_back(right_tail);
  return PLHomeo<double>::piecewise(x, std::move(slopes), y[0]);
}

}  // namespace

DerriennicChart build_chart(const EmpiricalRadonMeasure& nu, double x0, double width_floor) {
  if (nu.empty()) throw std::invalid_argument("chart needs a nonempty measure");
  const auto hull = nu.hull();
  if (!(hull.length() > 0)) throw std::invalid_argument("chart needs a measure with more than one point");
  if (!hull.contains(x0)) throw std::invalid_argument("chart origin must lie inside the sampled hull");
  const double floor = width_floor * hull.length();

  const auto pos = nu.positions();
  const auto w = nu.weights();
  std::vector<double> nodes, values;
  double below = 0, max_mass = 0;
  for (std::size_t i = 0; i < pos.size();) {
    const double start = pos[i];
    double mass = 0;
    for (; i < pos.size() && pos[i] - start < floor; ++i) mass += w[i];
    nodes.push_back(start);
    values.push_back(below + 0.5 * mass);
    below += mass;
    max_mass = std::max(max_mass, mass);
  }
  if (nodes.size() < 2) throw std::invalid_argument("chart needs a measure with more than one point");

  const std::size_t m = nodes.size();
  const std::size_t q = std::max<std::size_t>(1, m / 100);
  auto raw = through_nodes(nodes, values, chord(nodes, values, 0, q), chord(nodes, values, m - 1 - q, m - 1));
  const double offset = raw(x0);
  for (auto& v : values) v -= offset;
  raw = through_nodes(nodes, values, chord(nodes, values, 0, q), chord(nodes, values, m - 1 - q, m - 1));
  return DerriennicChart(std::move(raw), x0, hull, std::move(nodes), max_mass);
}

ConjugatedSystem conjugate(const Walk& system, const DerriennicChart& chart, const ConjugateOptions& options) {
  if (options.nodes < 2) throw std::invalid_argument("conjugate needs at least two nodes");
  Interval<double> hull;
  if (options.hull) {
    hull = *options.hull;
  } else {
    // where x and every g(x) stay inside the sampled positions
    Interval<double> x = chart.hull();
    for (const auto& gen : system.generators()) {
      x.lo = std::max(x.lo, gen.map.inverse_value(chart.hull().lo));
      x.hi = std::min(x.hi, gen.map.inverse_value(chart.hull().hi));
    }
    hull = {chart(x.lo), chart(x.hi)};
  }
  if (!(hull.lo < hull.hi)) throw std::invalid_argument("conjugate needs a nonempty hull");

  for (std::size_t attempt = 0; attempt <= options.max_refinements; ++attempt) {
    const std::size_t count = (options.nodes - 1) * (std::size_t{1} << attempt) + 1;
    std::vector<double> base(count);
    for (std::size_t k = 0; k < count; ++k)
      base[k] = hull.lo + (hull.hi - hull.lo) * static_cast<double>(k) / static_cast<double>(count - 1);
    base.insert(base.end(), options.extra_nodes.begin(), options.extra_nodes.end());
    // knots closer than a tiny fraction of the spacing are rounding duplicates
    const double merge = 1e-9 * (hull.hi - hull.lo) / static_cast<double>(count - 1);
    auto sorted = [merge](std::vector<double> u) {
      std::sort(u.begin(), u.end());
      u.erase(std::unique(u.begin(), u.end(), [merge](double a, double b) { return b - a <= merge; }), u.end());
      return u;
    };
    base = sorted(std::move(base));

    auto conj = [&](const PLHomeo<double>& g, double u) { return chart(g(chart.inverse(u))); };
    auto monotone = [](const std::vector<double>& v) {
      for (std::size_t k = 0; k < v.size(); ++k)
        if (!std::isfinite(v[k]) || (k > 0 && !(v[k - 1] < v[k]))) return false;
      return true;
    };

    std::vector<Generator<double>> gens = system.generators();
    bool ok = true;
    double pairing_gap = 0, spacing = 0;
    for (std::size_t i = 0; i < system.size() && ok; ++i) {
      const std::size_t j = system.pair(i);
      if (j < i) continue;
      // knots at the extra nodes and at their partner images, so both maps of
      // the pair are exact there
      std::vector<double> u = base;
      if (j != i)
        for (double e : options.extra_nodes) u.push_back(conj(system.map(j), e));
      u = sorted(std::move(u));
      std::vector<double> v(u.size());
      for (std::size_t k = 0; k < u.size(); ++k) v[k] = conj(system.map(i), u[k]);
      if (!monotone(u) || !monotone(v)) {
        ok = false;
        break;
      }
      for (std::size_t k = 1; k < base.size(); ++k) spacing = std::max(spacing, base[k] - base[k - 1]);
      const std::size_t last = u.size() - 1, q = std::max<std::size_t>(1, last / 32);
      gens[i].map = through_nodes(u, v, chord(u, v, 0, q), chord(u, v, last - q, last));
      if (j == i) continue;
      gens[j].map = invert(gens[i].map);
      for (double b : base)
        if (b >= v.front() && b <= v.back())
          pairing_gap = std::max(pairing_gap, std::abs(gens[j].map(b) - conj(system.map(j), b)));
    }
    if (!ok) continue;
    if (pairing_gap > spacing * (1 + 1e-9))
      throw std::runtime_error("conjugated inverse pairs disagree by " + format_number(pairing_gap) +
                               " (grid tolerance " + format_number(spacing) + ")");
    ConjugatedSystem out;
    out.system = Walk(std::move(gens), system.pairing());
    out.nodes = std::move(base);
    out.grid_tolerance = spacing;
    out.pairing_gap = pairing_gap;
    return out;
  }
  throw std::runtime_error("conjugated fit is not monotone after grid refinement");
}

DriftProfile drift_profile(const Walk& system, std::span<const double> grid) {
  DriftProfile p;
  p.grid.assign(grid.begin(), grid.end());
  for (double u : grid) {
    const double d = drift_at(system, u);
    p.drift.push_back(d);
    p.max_abs = std::max(p.max_abs, std::abs(d));
  }
  return p;
}

std::vector<double> chart_grid(const DerriennicChart& chart, const Interval<double>& k, std::size_t count) {
  if (count < 2) throw std::invalid_argument("chart grid needs at least two points");
  const double lo = chart(k.lo), hi = chart(k.hi);
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i)
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return grid;
}

DriftNoise drift_bootstrap(const Walk& system, const StationaryEstimate& estimate, const DerriennicChart& chart,
                           std::span<const double> grid, std::size_t resamples, const MonteCarlo& mc) {
  const std::size_t g_count = estimate.batches.size();
  if (g_count < 2) throw std::invalid_argument("drift bootstrap needs at least two batches");
  if (resamples < 2) throw std::invalid_argument("drift bootstrap needs at least two resamples");
  const auto n = static_cast<Eigen::Index>(grid.size());
  const auto g = static_cast<Eigen::Index>(g_count);

  // moved[b, i] = sum_g mu(g) batch_b[x_i, g x_i), signed; k_mass[b] = batch_b(K)
  Eigen::ArrayXXd moved(g, n);
  Eigen::ArrayXd k_mass(g);
  for (Eigen::Index b = 0; b < g; ++b) {
    const auto& part = estimate.batches[static_cast<std::size_t>(b)];
    k_mass(b) = part.mass(estimate.k);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double x = chart.inverse(grid[static_cast<std::size_t>(i)]);
      double s = 0;
      for (std::size_t l = 0; l < system.size(); ++l)
        s += system.weight(l) * (part.mass_below(system.map(l)(x)) - part.mass_below(x));
      moved(b, i) = s;
    }
  }

  auto stream = mc.stream(0);
  Eigen::ArrayXd sum = Eigen::ArrayXd::Zero(n), sumsq = Eigen::ArrayXd::Zero(n);
  Eigen::ArrayXd counts(g);
  for (std::size_t r = 0; r < resamples; ++r) {
    counts.setZero();
    for (std::size_t d = 0; d < g_count; ++d) counts(static_cast<Eigen::Index>(stream.next_u64() % g_count)) += 1;
    const double k = (counts * k_mass).sum();
    const Eigen::ArrayXd drift = (moved.colwise() * counts).colwise().sum().transpose() / k;
    sum += drift;
    sumsq += drift.square();
  }
  const double rs = static_cast<double>(resamples);
  DriftNoise out;
  out.resamples = resamples;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double m = sum(i) / rs;
    out.sigma.push_back(std::sqrt(std::max(0.0, (sumsq(i) - rs * m * m) / (rs - 1))));
  }
  return out;
}

bool BoundReport::passed() const {
  return std::all_of(generators.begin(), generators.end(), [](const auto& g) { return g.passed; });
}

double slope_at_resolution(const PLHomeo<double>& g, double resolution) {
  if (!(resolution > 0) || g.is_affine()) return g.max_slope();
  // tails count in full; inside, the steepest window of length `resolution`
  // has a breakpoint at one of its ends
  const auto s = g.slopes();
  double m = g.is_periodic() ? 0.0 : std::max(s.front(), s.back());
  for (double b : g.breakpoints()) {
    m = std::max(m, g.increment(b, resolution) / resolution);
    m = std::max(m, g.increment(b - resolution, resolution) / resolution);
  }
  return m;
}

BoundReport lipschitz_check(const Walk& conjugated, double tolerance, double resolution) {
  BoundReport r;
  for (const auto& gen : conjugated.generators()) {
    const double bound = (1 + tolerance) / gen.weight;
    const double slope = slope_at_resolution(gen.map, resolution);
    r.generators.push_back({gen.name, slope, bound, slope <= bound});
  }
  return r;
}

BoundReport displacement_check(const Walk& conjugated, std::span<const double> grid, double tolerance) {
  BoundReport r;
  for (double u : grid) r.phi_max = std::max(r.phi_max, phi_mu(conjugated, u));
  for (const auto& gen : conjugated.generators()) {
    double sup = 0;
    for (double u : grid) sup = std::max(sup, std::abs(gen.map(u) - u));
    const double bound = (1 + tolerance) * std::sqrt(2 * r.phi_max) / gen.weight;
    r.generators.push_back({gen.name, sup, bound, sup <= bound});
  }
  return r;
}

GeneratorSystem<Rational> augment_to_minimal(const GeneratorSystem<Rational>& system, const Rational& share) {
  if (!(share > 0) || !(share < 1)) throw std::invalid_argument("augmentation share must lie in (0, 1)");
  auto gens = system.generators();
  auto pairing = system.pairing();
  for (auto& g : gens) g.weight *= Rational(1) - share;
  const Rational w = share / 4;
  const Rational r2 = sqrt2_dyadic();
  const std::size_t base = gens.size();
  gens.push_back({"x+1", PLHomeo<Rational>::translation(Rational(1)), w});
  gens.push_back({"x-1", PLHomeo<Rational>::translation(Rational(-1)), w});
  gens.push_back({"x+sqrt2", PLHomeo<Rational>::translation(r2), w});
  gens.push_back({"x-sqrt2", PLHomeo<Rational>::translation(-r2), w});
  for (std::size_t p : {base + 1, base, base + 3, base + 2}) pairing.push_back(p);
  return GeneratorSystem<Rational>(std::move(gens), std::move(pairing));
}

void write_chart_csv(std::ostream& out, const DerriennicChart& chart) {
  CsvWriter csv(out);
  csv.header({"x", "D"});
  for (double x : chart.nodes()) {
    csv.field(x).field(chart(x));
    csv.end_row();
  }
}

}  // namespace linewalk
