#include "linewalk/geometry.hpp"

#include "linewalk/csv.hpp"
#include "linewalk/summary.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>

namespace linewalk {

namespace {

constexpr std::size_t kTrialBlock = 64;

// Sums of d(X_k) - d_0 and its square per step, and optionally per batch.
struct MartingaleSums {
  Eigen::ArrayXd sum, sumsq;
  Eigen::ArrayXXd batch_sum;  // (n + 1) x G
};

MartingaleReport martingale_impl(const Walk& system, const EmpiricalRadonMeasure& nu,
                                 std::span<const EmpiricalRadonMeasure> batches, double x, double y, std::size_t n,
                                 std::size_t trials, const MonteCarlo& mc) {
  if (!(x <= y)) throw std::invalid_argument("martingale_check needs x <= y");
  if (trials == 0) throw std::invalid_argument("martingale_check needs trials");
  const Stepper stepper(system);
  const CoupledPair start{x, y - x};
  const NuDistance d(nu);
  const double initial = d(start.lower, start.upper());
  const std::size_t g_count = batches.size();
  std::vector<double> batch_initial(g_count);
  for (std::size_t g = 0; g < g_count; ++g) batch_initial[g] = NuDistance(batches[g])(start.lower, start.upper());

  const auto partials = run_blocks(trials, kTrialBlock, mc.threads, [&](std::size_t begin, std::size_t end) {
    MartingaleSums s{Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(n + 1)),
                     Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(n + 1)),
                     Eigen::ArrayXXd::Zero(static_cast<Eigen::Index>(n + 1), static_cast<Eigen::Index>(g_count))};
    for (std::size_t t = begin; t < end; ++t) {
      auto stream = mc.stream(t);
      CoupledPair p = start;
      for (std::size_t k = 0;; ++k) {
        const auto row = static_cast<Eigen::Index>(k);
        const double r = d(p.lower, p.upper()) - initial;
        s.sum(row) += r;
        s.sumsq(row) += r * r;
        for (std::size_t g = 0; g < g_count; ++g)
          s.batch_sum(row, static_cast<Eigen::Index>(g)) +=
              NuDistance(batches[g])(p.lower, p.upper()) - batch_initial[g];
        if (k == n) break;
        p = coupled_step(system, stepper.draw(stream), p);
      }
    }
    return s;
  });

  Eigen::ArrayXd sum = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(n + 1)), sumsq = sum;
  Eigen::ArrayXXd batch_sum = Eigen::ArrayXXd::Zero(static_cast<Eigen::Index>(n + 1), static_cast<Eigen::Index>(g_count));
  for (const auto& s : partials) {
    sum += s.sum;
    sumsq += s.sumsq;
    batch_sum += s.batch_sum;
  }
  const double t = static_cast<double>(trials);
  MartingaleReport report;
  report.initial = initial;
  report.trials = trials;
  report.mean.resize(n + 1);
  report.sigma.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const auto row = static_cast<Eigen::Index>(k);
    const double m = sum(row) / t;
    double var = trials > 1 ? std::max(0.0, (sumsq(row) - t * m * m) / (t - 1)) / t : 0.0;
    if (g_count > 1) {
      const Eigen::ArrayXd means = batch_sum.row(row).transpose() / t;
      const double spread = (means - means.mean()).square().sum() / static_cast<double>(g_count - 1);
      var += spread / static_cast<double>(g_count);
    }
    report.mean[k] = initial + m;
    report.sigma[k] = std::sqrt(var);
  }
  return report;
}

}  // namespace

double MartingaleReport::z(std::size_t k) const {
  const double r = std::abs(mean.at(k) - initial);
  if (sigma[k] > 0) return r / sigma[k];
  return r == 0 ? 0.0 : std::numeric_limits<double>::infinity();
}

double MartingaleReport::max_z() const {
  double m = 0;
  for (std::size_t k = 0; k < mean.size(); ++k) m = std::max(m, z(k));
  return m;
}

MartingaleReport martingale_check(const Walk& system, const EmpiricalRadonMeasure& nu, double x, double y,
                                  std::size_t n, std::size_t trials, const MonteCarlo& mc) {
  return martingale_impl(system, nu, {}, x, y, n, trials, mc);
}

MartingaleReport martingale_check(const Walk& system, const StationaryEstimate& estimate, double x, double y,
                                  std::size_t n, std::size_t trials, const MonteCarlo& mc) {
  return martingale_impl(system, estimate.nu, estimate.batches, x, y, n, trials, mc);
}

bool ContractionReport::median_decreasing() const {
  for (std::size_t i = 1; i < checkpoints.size(); ++i)
    if (!(checkpoints[i].median < checkpoints[i - 1].median)) return false;
  return !checkpoints.empty();
}

ContractionReport contraction_experiment(const Walk& system, double x, double y, const Interval<double>& j,
                                         std::size_t n, std::size_t trials, const MonteCarlo& mc,
                                         const ContractionOptions& options) {
  if (!(x < y)) throw std::invalid_argument("contraction_experiment needs x < y");
  if (!(j.lo <= j.hi)) throw std::invalid_argument("contraction_experiment needs a nonempty J");
  std::vector<std::size_t> steps = options.checkpoints;
  if (steps.empty()) steps = {n / 4, n / 2, n};
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  if (steps.back() > n) throw std::invalid_argument("checkpoint beyond the horizon");

  const Stepper stepper(system);
  const CoupledPair start{x, y - x};
  const double nan = std::numeric_limits<double>::quiet_NaN();

  struct Partial {
    std::vector<GapRecord> records;
    double max_change = 0;
  };
  const auto partials = run_blocks(trials, kTrialBlock, mc.threads, [&](std::size_t begin, std::size_t end) {
    Partial part;
    part.records.reserve((end - begin) * steps.size());
    for (std::size_t t = begin; t < end; ++t) {
      auto stream = mc.stream(t);
      CoupledPair p = start;
      std::size_t next = 0;
      for (std::size_t k = 0; next < steps.size(); ++k) {
        const double change = std::abs(p.gap - start.gap);
        if (change > part.max_change) part.max_change = change;
        if (k == steps[next]) {
          const double nu_gap = options.nu ? NuDistance(*options.nu)(p.lower, p.upper()) : nan;
          part.records.push_back({t, k, p.gap, nu_gap, j.contains(p.lower)});
          ++next;
          if (next == steps.size()) break;
        }
        p = coupled_step(system, stepper.draw(stream), p);
      }
    }
    return part;
  });

  ContractionReport report;
  report.initial_gap = start.gap;
  report.trials = trials;
  std::vector<std::vector<double>> gated(steps.size());
  std::vector<std::size_t> contracting(steps.size(), 0);
  for (const auto& part : partials) {
    report.max_gap_change = std::max(report.max_gap_change, part.max_change);
    for (std::size_t r = 0; r < part.records.size(); ++r) {
      const auto& rec = part.records[r];
      const std::size_t c = r % steps.size();
      if (!rec.gated) continue;
      gated[c].push_back(rec.gap_euclidean);
      if (rec.gap_euclidean < options.contract_below * start.gap) ++contracting[c];
    }
    if (options.keep_records) report.records.insert(report.records.end(), part.records.begin(), part.records.end());
  }
  for (std::size_t c = 0; c < steps.size(); ++c) {
    ContractionCheckpoint cp;
    cp.step = steps[c];
    cp.gated = gated[c].size();
    cp.median = median(gated[c]);
    cp.q90 = quantile(gated[c], 0.9);
    cp.contracting = contracting[c];
    cp.contracting_ci = binomial_interval(contracting[c], trials);
    report.checkpoints.push_back(cp);
  }
  return report;
}

GapExcursion gap_excursion(const Walk& system, const EmpiricalRadonMeasure& nu, double x, double y,
                           const Interval<double>& j, std::size_t n, std::size_t samples, RandomStream stream) {
  if (!(x < y)) throw std::invalid_argument("gap_excursion needs x < y");
  if (samples == 0 || samples > n) throw std::invalid_argument("gap_excursion needs 1 <= samples <= n");
  const Stepper stepper(system);
  const NuDistance d(nu);
  CoupledPair p{x, y - x};
  GapExcursion out;
  out.initial_gap = p.gap;
  out.initial_nu_gap = d(p.lower, p.upper());
  out.max_ratio = out.min_ratio = 1.0;
  double last_nu_gap = out.initial_nu_gap;
  std::size_t next = 1;
  for (std::size_t k = 1; k <= n; ++k) {
    p = coupled_step(system, stepper.draw(stream), p);
    const double ratio = p.gap / out.initial_gap;
    if (std::isfinite(ratio)) {
      out.max_ratio = std::max(out.max_ratio, ratio);
      out.min_ratio = std::min(out.min_ratio, ratio);
    }
    if (j.contains(p.lower)) last_nu_gap = d(p.lower, p.upper());
    if (k * samples >= next * n) {
      out.steps.push_back(k);
      out.nu_gaps.push_back(last_nu_gap);
      ++next;
    }
  }
  return out;
}

std::string to_string(Structure s) {
  switch (s) {
    case Structure::discrete_orbit: return "discrete-orbit";
    case Structure::translation_like: return "translation-like";
    case Structure::lift_like: return "lift-like";
    case Structure::strong_contraction_like: return "strong-contraction-like";
    case Structure::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::optional<Structure> parse_structure(const std::string& name) {
  for (auto s : {Structure::discrete_orbit, Structure::translation_like, Structure::lift_like,
                 Structure::strong_contraction_like, Structure::inconclusive})
    if (to_string(s) == name) return s;
  return std::nullopt;
}

namespace {

bool commutes_with_translation(const PLHomeo<double>& g, double unit) {
  if (g.is_translation()) return true;
  if (!g.is_periodic()) return false;
  const double r = unit / g.period();
  return std::abs(r - std::round(r)) <= 1e-12 * std::max(1.0, r);
}

double min_orbit_gap(const Walk& system, double x0, const Interval<double>& window, std::size_t samples,
                     RandomStream stream) {
  const Stepper stepper(system);
  std::vector<double> pts;
  pts.reserve(samples + 1);
  double x = x0;
  for (std::size_t k = 0; k <= samples; ++k) {
    if (window.contains(x)) pts.push_back(x);
    if (k < samples) x = stepper.step(x, stream);
  }
  std::sort(pts.begin(), pts.end());
  double gap = std::numeric_limits<double>::infinity();
  double last = std::numeric_limits<double>::quiet_NaN();
  for (double p : pts) {
    if (!std::isnan(last)) {
      const double dx = p - last;
      if (dx <= 1e-9 * std::max(1.0, std::abs(p))) continue;  // same orbit point up to rounding
      gap = std::min(gap, dx);
    }
    last = p;
  }
  return gap;
}

}  // namespace

StructureVerdict classify_structure(const Walk& system, std::size_t samples, const MonteCarlo& mc,
                                    const ClassifierOptions& options) {
  const auto k = recurrence_interval(system);
  const double len = k.length();
  const Interval<double> window{k.lo - 10 * len, k.hi + 10 * len};
  StructureVerdict v;
  v.min_orbit_gap = min_orbit_gap(system, k.midpoint(), window, samples, mc.child(1).stream(0));
  if (v.min_orbit_gap >= options.gap_lower_bound) {
    v.kind = Structure::discrete_orbit;
    v.reason = "orbit gaps stay above " + format_number(options.gap_lower_bound);
    return v;
  }

  const bool all_translations = std::all_of(system.generators().begin(), system.generators().end(),
                                            [](const auto& g) { return g.map.is_translation(); });
  if (all_translations) {
    v.kind = Structure::translation_like;
    v.reason = "every generator is a translation";
    return v;
  }

  const double x = k.lo + 0.25 * len;
  ContractionOptions copts;
  copts.checkpoints = {options.horizon / 2, options.horizon};
  copts.keep_records = true;
  const auto small = contraction_experiment(system, x, x + 0.5 * options.unit, window, options.horizon,
                                            options.trials, mc.child(2), copts);
  if (small.max_gap_change == 0) {
    v.kind = Structure::translation_like;
    v.reason = "coupled gaps are constant";
    return v;
  }

  const bool commuting = std::all_of(system.generators().begin(), system.generators().end(), [&](const auto& g) {
    return commutes_with_translation(g.map, options.unit);
  });
  if (commuting) {
    v.kind = Structure::lift_like;
    v.reason = "every generator commutes with x + " + format_number(options.unit);
    return v;
  }

  const auto large = contraction_experiment(system, x, x + 2 * options.unit, window, options.horizon,
                                            options.trials, mc.child(3), copts);
  const auto& lf = large.checkpoints.back();
  double large_min = std::numeric_limits<double>::infinity();
  for (const auto& r : large.records)
    if (r.gated) large_min = std::min(large_min, r.gap_euclidean);
  const bool small_contracts = small.checkpoints.back().contracting > 0;
  if (lf.gated > 0 && small_contracts && large_min >= options.unit) {
    v.kind = Structure::lift_like;
    v.reason = "small gaps contract while gaps above " + format_number(options.unit) + " never drop below it";
    return v;
  }

  if (lf.gated > 0 && lf.median <= options.contraction_factor * large.initial_gap) {
    v.kind = Structure::strong_contraction_like;
    v.reason = "median gated gap " + format_number(lf.median) + " after " + std::to_string(lf.step) +
               " steps from " + format_number(large.initial_gap);
    return v;
  }
  v.kind = Structure::inconclusive;
  v.reason = lf.gated == 0 ? "no gated trial at the horizon" : "neither contraction pattern is clear";
  return v;
}

void write_gap_csv(std::ostream& out, const std::vector<GapRecord>& records) {
  CsvWriter csv(out);
  csv.header({"trial", "step", "gap_euclidean", "gap_nu", "gated"});
  for (const auto& r : records) {
    csv.field(r.trial).field(r.step).field(r.gap_euclidean).field(r.gap_nu).field(r.gated);
    csv.end_row();
  }
}

}  // namespace linewalk
