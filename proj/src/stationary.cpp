#include "linewalk/stationary.hpp"

#include "linewalk/summary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace linewalk {

namespace {

constexpr std::size_t kStartBlock = 16;
const Interval<double> kRetainNothing{1.0, 0.0};

void merge_stats(PoolStats& into, const PoolStats& from) {
  into.runs += from.runs;
  into.truncated += from.truncated;
  into.steps += from.steps;
}

void count_run(PoolStats& stats, const StoppedRun& run) {
  ++stats.runs;
  stats.steps += run.stopping_time;
  if (run.truncated) ++stats.truncated;
}

void enforce_truncation_budget(const PoolStats& stats, const PoolOptions& options) {
  if (stats.truncated_fraction() > options.max_truncated_fraction)
    throw StoppingCapExceeded(options.stop.cap, stats.truncated, stats.runs);
}


double relative(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace

KrylovBogolyubovResult krylov_bogolyubov(const Walk& system, const BumpProfile& xi, std::size_t iterations,
                                         std::size_t batch, const MonteCarlo& mc, const PoolOptions& options) {
  if (iterations == 0 || batch == 0) throw std::invalid_argument("krylov_bogolyubov needs iterations and chains");
  const Stepper stepper(system);
  const double start = xi.inner.midpoint();
  StopOptions stop = options.stop;
  stop.retain = kRetainNothing;
  stop.keep_path = false;

  struct Chain {
    std::vector<double> points;
    PoolStats stats;
  };
  auto chains = run_blocks(batch, 1, mc.threads, [&](std::size_t begin, std::size_t end) {
    Chain c;
    for (std::size_t chain = begin; chain < end; ++chain) {
      RandomStream stream = mc.stream(chain);
      double y = start;
      for (std::size_t j = 0; j < iterations; ++j) {
        const auto run = stopped_walk_visit(stepper, y, xi, stream, stop, [](double) {});
        count_run(c.stats, run);
        if (run.truncated) {
          y = start;
          continue;
        }
        y = run.stop_point;
        c.points.push_back(y);
      }
    }
    return c;
  });

  KrylovBogolyubovResult out;
  std::size_t n = 0;
  for (const auto& c : chains) {
    merge_stats(out.stats, c.stats);
    n += c.points.size();
  }
  enforce_truncation_budget(out.stats, options);
  if (n == 0) throw StoppingCapExceeded(options.stop.cap, out.stats.truncated, out.stats.runs);
  std::vector<WeightedPoint> samples;
  samples.reserve(n);
  const double w = 1.0 / static_cast<double>(n);
  for (const auto& c : chains) {
    std::vector<WeightedPoint> part;
    part.reserve(c.points.size());
    for (double y : c.points) part.push_back({y, w});
    samples.insert(samples.end(), part.begin(), part.end());
    out.chains.emplace_back(std::move(part), start);
  }
  out.nu0 = EmpiricalRadonMeasure(std::move(samples), start);
  return out;
}

EmpiricalRadonMeasure StationaryEstimate::replica(std::span<const double> multiplicities) const {
  if (multiplicities.size() != batches.size()) throw std::invalid_argument("one multiplicity per batch");
  std::vector<double> c(multiplicities.begin(), multiplicities.end());
  for (auto& v : c) v /= static_cast<double>(batches.size());
  return EmpiricalRadonMeasure::combine(batches, c, nu.anchor());
}

StationaryEstimate StationaryEstimate::with_interval_scaled(double a, double b, double factor) const {
  StationaryEstimate out = *this;
  out.nu = nu.with_interval_scaled(a, b, factor);
  for (auto& m : out.batches) m = m.with_interval_scaled(a, b, factor);
  return out;
}

namespace {

// Start atoms grouped into batches; the stream of run j from atom i is
// stream(i * samples_per_start + j) with i counted across all groups.
StationaryEstimate build_from_groups(const Walk& system, const std::vector<std::vector<WeightedPoint>>& groups,
                                     double nu0_total, const BumpProfile& xi, std::size_t samples_per_start,
                                     const MonteCarlo& mc, const PoolOptions& options) {
  if (samples_per_start == 0) throw std::invalid_argument("build_stationary needs samples_per_start >= 1");
  struct Start {
    WeightedPoint atom;
    std::size_t group;
  };
  std::vector<Start> starts;
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (const auto& a : groups[g]) starts.push_back({a, g});
  if (starts.empty()) throw std::invalid_argument("build_stationary needs a nonempty nu_0");

  const Stepper stepper(system);
  const StopOptions& stop = options.stop;
  struct Block {
    std::vector<std::vector<WeightedPoint>> pools;
    PoolStats stats;
  };
  auto blocks = run_blocks(starts.size(), kStartBlock, mc.threads, [&](std::size_t begin, std::size_t end) {
    Block b;
    b.pools.resize(groups.size());
    for (std::size_t i = begin; i < end; ++i) {
      auto& pool = b.pools[starts[i].group];
      const double w = starts[i].atom.weight / static_cast<double>(samples_per_start);
      for (std::size_t j = 0; j < samples_per_start; ++j) {
        RandomStream stream = mc.stream(i * samples_per_start + j);
        const auto run = stopped_walk_visit(stepper, starts[i].atom.position, xi, stream, stop, [&](double y) {
          if (!stop.retain || stop.retain->contains(y)) pool.push_back({y, w});
        });
        count_run(b.stats, run);
      }
    }
    return b;
  });

  StationaryEstimate est;
  est.k = xi.inner;
  for (const auto& b : blocks) merge_stats(est.stats, b.stats);
  enforce_truncation_budget(est.stats, options);

  const std::size_t count = groups.size();
  std::vector<EmpiricalRadonMeasure> raw(count);
  for (std::size_t g = 0; g < count; ++g) {
    std::size_t n = 0;
    for (const auto& b : blocks) n += b.pools[g].size();
    std::vector<WeightedPoint> pool;
    pool.reserve(n);
    for (auto& b : blocks) {
      pool.insert(pool.end(), b.pools[g].begin(), b.pools[g].end());
      std::vector<WeightedPoint>().swap(b.pools[g]);
    }
    raw[g] = EmpiricalRadonMeasure(std::move(pool), xi.inner.midpoint());
  }
  double k_mass = 0;
  for (const auto& m : raw) k_mass += m.mass(est.k);
  if (!(k_mass > 0)) throw std::domain_error("stopped-run pool gives K no mass");
  est.raw_k_mass = k_mass / nu0_total;

  const double c = 1.0 / k_mass;
  const std::vector<double> coefficients(count, c);
  est.nu = EmpiricalRadonMeasure::combine(raw, coefficients, xi.inner.midpoint());
  est.batches.reserve(count);
  for (auto& m : raw) {
    est.batches.push_back(m.scaled(c * static_cast<double>(count)));
    m = EmpiricalRadonMeasure();
  }
  return est;
}

}  // namespace

StationaryEstimate build_stationary(const Walk& system, const EmpiricalRadonMeasure& nu0, const BumpProfile& xi,
                                    std::size_t samples_per_start, const MonteCarlo& mc,
                                    const StationaryOptions& options) {
  if (nu0.empty()) throw std::invalid_argument("build_stationary needs a nonempty nu_0");
  const std::size_t count = std::max<std::size_t>(1, std::min(options.batches, nu0.size()));
  std::vector<std::vector<WeightedPoint>> groups(count);
  const auto samples = nu0.samples();
  for (std::size_t i = 0; i < samples.size(); ++i) groups[i % count].push_back(samples[i]);
  return build_from_groups(system, groups, nu0.total(), xi, samples_per_start, mc, options.pool);
}

StationaryEstimate build_stationary(const Walk& system, const KrylovBogolyubovResult& kb, const BumpProfile& xi,
                                    std::size_t samples_per_start, const MonteCarlo& mc,
                                    const StationaryOptions& options) {
  if (kb.chains.size() < 2) return build_stationary(system, kb.nu0, xi, samples_per_start, mc, options);
  std::vector<std::vector<WeightedPoint>> groups;
  for (const auto& c : kb.chains)
    if (!c.empty()) groups.push_back(c.samples());
  return build_from_groups(system, groups, kb.nu0.total(), xi, samples_per_start, mc, options.pool);
}

namespace {

// int (P phi - phi) dnu and int |phi| dnu
std::pair<double, double> residual_parts(const Walk& system, const EmpiricalRadonMeasure& nu, const TestFunction& phi) {
  double p_phi = 0;
  for (std::size_t g = 0; g < system.size(); ++g)
    p_phi += to_double(system.weight(g)) * nu.integrate_composed(phi, system.map(g));
  return {p_phi - nu.integrate(phi), nu.integrate_abs(phi)};
}

}  // namespace

double stationarity_residual(const Walk& system, const EmpiricalRadonMeasure& nu, std::span<const TestFunction> probes) {
  double worst = 0;
  for (const auto& phi : probes) {
    const auto [num, den] = residual_parts(system, nu, phi);
    if (!(den > 0)) throw std::domain_error("probe has no mass under nu");
    worst = std::max(worst, std::abs(num) / den);
  }
  return worst;
}

double StationarityReport::max_abs_residual() const {
  double m = 0;
  for (const auto& p : probes) m = std::max(m, std::abs(p.residual));
  return m;
}

double StationarityReport::max_z() const {
  double m = 0;
  for (const auto& p : probes) m = std::max(m, p.z());
  return m;
}

StationarityReport stationarity_check(const Walk& system, const StationaryEstimate& estimate,
                                      std::span<const TestFunction> probes, std::size_t resamples,
                                      const MonteCarlo& mc) {
  const std::size_t groups = estimate.batches.size();
  if (groups < 2) throw std::invalid_argument("stationarity_check needs at least two batches");
  StationarityReport report;
  RandomStream stream = mc.stream(0);
  // one set of resampled batch counts, shared by all probes
  std::vector<std::vector<double>> counts(resamples, std::vector<double>(groups, 0.0));
  for (auto& c : counts)
    for (std::size_t d = 0; d < groups; ++d) c[static_cast<std::size_t>(stream.uniform() * static_cast<double>(groups))] += 1;

  for (const auto& phi : probes) {
    std::vector<double> num(groups), den(groups);
    for (std::size_t g = 0; g < groups; ++g) std::tie(num[g], den[g]) = residual_parts(system, estimate.batches[g], phi);
    const double total_den = std::accumulate(den.begin(), den.end(), 0.0);
    if (!(total_den > 0)) throw std::domain_error("probe has no mass under nu");
    ProbeResidual pr;
    pr.residual = std::accumulate(num.begin(), num.end(), 0.0) / total_den;
    double sum = 0, sum_sq = 0;
    std::size_t used = 0;
    for (const auto& c : counts) {
      double n = 0, d = 0;
      for (std::size_t g = 0; g < groups; ++g) n += c[g] * num[g], d += c[g] * den[g];
      if (!(d > 0)) continue;
      const double r = n / d;
      sum += r;
      sum_sq += r * r;
      ++used;
    }
    if (used > 1) {
      const double mean = sum / static_cast<double>(used);
      pr.sigma = std::sqrt(std::max(0.0, (sum_sq / static_cast<double>(used) - mean * mean)) *
                           static_cast<double>(used) / static_cast<double>(used - 1));
    }
    report.probes.push_back(pr);
  }
  return report;
}

std::vector<double> ergodic_sums(const Walk& system, double x, std::span<const TestFunction> fs, std::size_t n,
                                 RandomStream stream) {
  const Stepper stepper(system);
  std::vector<double> sums(fs.size(), 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < fs.size(); ++i) sums[i] += fs[i](x);
    x = stepper.step(x, stream);
  }
  return sums;
}

RatioEstimate ratio_ergodic(const Walk& system, double x, const TestFunction& psi, const TestFunction& phi,
                            std::size_t n, RandomStream stream) {
  if (!phi.nonnegative()) throw std::invalid_argument("ratio_ergodic needs a nonnegative denominator function");
  const TestFunction fs[] = {psi, phi};
  const auto sums = ergodic_sums(system, x, fs, n, stream);
  RatioEstimate r;
  r.sum_psi = sums[0];
  r.sum_phi = sums[1];
  r.ratio = r.recurrent() ? r.sum_psi / r.sum_phi : std::numeric_limits<double>::quiet_NaN();
  return r;
}

double UniquenessReport::relative_gap() const { return relative(median_first, median_second); }

double UniquenessReport::three_way_gap() const {
  double gap = relative_gap();
  if (reference) gap = std::max({gap, relative(median_first, *reference), relative(median_second, *reference)});
  return gap;
}

UniquenessReport uniqueness_cross_check(const Walk& system, double x1, double x2, const TestFunction& psi,
                                        const TestFunction& phi, std::size_t n, std::size_t trials,
                                        const MonteCarlo& mc, const EmpiricalRadonMeasure* nu) {
  if (x1 == x2) throw std::invalid_argument("uniqueness_cross_check needs two distinct starts");
  if (trials == 0) throw std::invalid_argument("uniqueness_cross_check needs trials");
  const MonteCarlo first = mc.child(1), second = mc.child(2);
  auto runs = run_blocks(2 * trials, 1, mc.threads, [&](std::size_t begin, std::size_t) {
    const bool is_first = begin < trials;
    const std::size_t i = is_first ? begin : begin - trials;
    return ratio_ergodic(system, is_first ? x1 : x2, psi, phi, n, (is_first ? first : second).stream(i));
  });
  UniquenessReport report;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    if (!runs[r].recurrent()) {
      ++report.not_recurrent;
      continue;
    }
    (r < trials ? report.ratios_first : report.ratios_second).push_back(runs[r].ratio);
  }
  report.median_first = median(report.ratios_first);
  report.median_second = median(report.ratios_second);
  if (nu) {
    const double den = nu->integrate(phi);
    if (den > 0) report.reference = nu->integrate(psi) / den;
  }
  return report;
}

std::vector<Atom> atom_scan(const EmpiricalRadonMeasure& nu, double resolution, double reference_mass,
                            double merge_tolerance) {
  std::vector<Atom> atoms;
  const auto xs = nu.positions();
  const auto ws = nu.weights();
  const double threshold = resolution * reference_mass;
  std::size_t i = 0;
  while (i < xs.size()) {
    double mass = 0, moment = 0;
    std::size_t j = i;
    do {
      mass += ws[j];
      moment += ws[j] * xs[j];
      ++j;
    } while (j < xs.size() && xs[j] - xs[j - 1] <= merge_tolerance * std::max(1.0, std::abs(xs[j])));
    if (mass > threshold) atoms.push_back({moment / mass, mass});
    i = j;
  }
  return atoms;
}

std::vector<double> WindowMasses::growth() const {
  std::vector<double> g;
  for (std::size_t i = 1; i < masses.size(); ++i) g.push_back(masses[i] / masses[i - 1]);
  return g;
}

WindowMasses bi_infiniteness_probe(const Walk& system, const EmpiricalRadonMeasure& nu0, const BumpProfile& xi,
                                   std::span<const double> radii, std::size_t samples_per_start,
                                   const MonteCarlo& mc, const PoolOptions& options) {
  if (radii.empty()) throw std::invalid_argument("bi_infiniteness_probe needs radii");
  for (std::size_t i = 0; i < radii.size(); ++i)
    if (!(radii[i] > 0) || (i > 0 && !(radii[i] > radii[i - 1])))
      throw std::invalid_argument("radii must be positive and increasing");
  const Stepper stepper(system);
  const auto starts = nu0.positions();
  const auto start_weights = nu0.weights();
  const Interval<double> k = xi.inner;

  struct Block {
    std::vector<double> bins;  // bins[i]: mass with radii[i-1] < |x| <= radii[i]
    double k_mass = 0;
    PoolStats stats;
  };
  auto blocks = run_blocks(starts.size(), kStartBlock, mc.threads, [&](std::size_t begin, std::size_t end) {
    Block b;
    b.bins.assign(radii.size(), 0.0);
    for (std::size_t i = begin; i < end; ++i) {
      const double w = start_weights[i] / static_cast<double>(samples_per_start);
      for (std::size_t j = 0; j < samples_per_start; ++j) {
        RandomStream stream = mc.stream(i * samples_per_start + j);
        const auto run = stopped_walk_visit(stepper, starts[i], xi, stream, options.stop, [&](double y) {
          if (k.contains(y)) b.k_mass += w;
          const auto it = std::lower_bound(radii.begin(), radii.end(), std::abs(y));
          if (it != radii.end()) b.bins[static_cast<std::size_t>(it - radii.begin())] += w;
        });
        count_run(b.stats, run);
      }
    }
    return b;
  });

  WindowMasses out;
  out.radii.assign(radii.begin(), radii.end());
  std::vector<double> bins(radii.size(), 0.0);
  double k_mass = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < bins.size(); ++i) bins[i] += b.bins[i];
    k_mass += b.k_mass;
    merge_stats(out.stats, b.stats);
  }
  enforce_truncation_budget(out.stats, options);
  if (!(k_mass > 0)) throw std::domain_error("stopped-run pool gives K no mass");
  out.raw_k_mass = k_mass / nu0.total();
  double acc = 0;
  for (double bin : bins) {
    acc += bin;
    out.masses.push_back(acc / k_mass);
  }
  return out;
}

std::vector<Interval<double>> minimal_set_estimate(const Walk& system, double x, std::size_t n, double gap,
                                                   RandomStream stream) {
  if (!(gap > 0)) throw std::invalid_argument("minimal_set_estimate needs a positive gap");
  auto positions = simulate(system, x, n, stream).positions;
  std::sort(positions.begin(), positions.end());
  std::vector<Interval<double>> pieces;
  for (double y : positions) {
    if (!std::isfinite(y)) continue;
    if (pieces.empty() || y - pieces.back().hi > gap)
      pieces.push_back({y, y});
    else
      pieces.back().hi = y;
  }
  return pieces;
}

double mass_outside(const EmpiricalRadonMeasure& nu, std::span<const Interval<double>> pieces, double pad) {
  if (pieces.empty()) return nu.total();
  std::vector<Interval<double>> sorted(pieces.begin(), pieces.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
  std::vector<Interval<double>> merged;
  for (const auto& p : sorted) {
    const Interval<double> w{p.lo - pad, p.hi + pad};
    if (!merged.empty() && w.lo <= merged.back().hi)
      merged.back().hi = std::max(merged.back().hi, w.hi);
    else
      merged.push_back(w);
  }
  double inside = 0;
  for (const auto& m : merged) inside += nu.mass(m);
  return nu.mass(merged.front().lo, merged.back().hi) - inside;
}

}  // namespace linewalk
