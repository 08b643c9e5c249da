#include "linewalk/chain.hpp"

#include <cmath>

namespace linewalk {

namespace {

constexpr std::size_t kTrialBlock = 64;

}  // namespace

Trajectory simulate(const Walk& system, double x, std::size_t n, RandomStream stream) {
  const Stepper stepper(system);
  Trajectory t;
  t.start = x;
  t.seed = stream.key();
  t.positions.reserve(n + 1);
  t.letters.reserve(n);
  t.positions.push_back(x);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t letter = stepper.draw(stream);
    x = stepper.apply(letter, x);
    t.letters.push_back(static_cast<std::uint32_t>(letter));
    t.positions.push_back(x);
  }
  return t;
}

BumpProfile BumpProfile::around(const Interval<double>& inner, double widen) {
  if (!(inner.lo < inner.hi)) throw std::invalid_argument("bump profile needs a nondegenerate interval");
  if (!(widen > 0)) throw std::invalid_argument("bump profile needs a positive widening");
  const double pad = widen * inner.length();
  return {inner, {inner.lo - pad, inner.hi + pad}};
}

StoppedRun stopped_walk(const Walk& system, double x, const BumpProfile& xi, RandomStream& stream,
                        const StopOptions& options) {
  const Stepper stepper(system);
  std::vector<double> occupation, path;
  StoppedRun run = stopped_walk_visit(stepper, x, xi, stream, options, [&](double y) {
    if (!options.retain || options.retain->contains(y)) occupation.push_back(y);
    if (options.keep_path) path.push_back(y);
  });
  if (options.keep_path) path.push_back(run.stop_point);
  run.occupation = std::move(occupation);
  run.path = std::move(path);
  return run;
}

std::size_t visit_counts(const Trajectory& trajectory, const Interval<double>& k) {
  std::size_t n = 0;
  for (double x : trajectory.positions)
    if (k.contains(x)) ++n;
  return n;
}

OscillationStats oscillation_stats(const Walk& system, double x, std::size_t n, std::size_t trials,
                                   double upper, const MonteCarlo& mc, double tie_tolerance) {
  if (trials == 0) throw std::invalid_argument("oscillation_stats needs at least one trial");
  const double floor = x - tie_tolerance * std::max(1.0, std::abs(x));
  const Stepper stepper(system);
  const double lower = 2 * x - upper;
  struct Partial {
    std::vector<std::int64_t> above;
    std::int64_t up = 0, down = 0;
  };
  auto parts = run_blocks(trials, kTrialBlock, mc.threads, [&](std::size_t begin, std::size_t end) {
    Partial p;
    p.above.assign(n + 1, 0);
    for (std::size_t trial = begin; trial < end; ++trial) {
      RandomStream stream = mc.stream(trial);
      double y = x;
      double hi = x, lo = x;
      ++p.above[0];
      for (std::size_t k = 1; k <= n; ++k) {
        y = stepper.step(y, stream);
        if (y >= floor) ++p.above[k];
        hi = std::max(hi, y);
        lo = std::min(lo, y);
      }
      if (hi >= upper) ++p.up;
      if (lo <= lower) ++p.down;
    }
    return p;
  });
  OscillationStats s;
  s.trials = trials;
  s.upper = upper;
  s.lower = lower;
  std::vector<std::int64_t> above(n + 1, 0);
  std::int64_t up = 0, down = 0;
  for (const auto& p : parts) {
    for (std::size_t k = 0; k <= n; ++k) above[k] += p.above[k];
    up += p.up;
    down += p.down;
  }
  const double denom = static_cast<double>(trials);
  s.frac_exceed_up = static_cast<double>(up) / denom;
  s.frac_exceed_down = static_cast<double>(down) / denom;
  s.frac_stay_above_start.resize(static_cast<Eigen::Index>(n + 1));
  for (std::size_t k = 0; k <= n; ++k)
    s.frac_stay_above_start[static_cast<Eigen::Index>(k)] = static_cast<double>(above[k]) / denom;
  return s;
}

Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> visit_count_table(
    const Walk& system, double x, const Interval<double>& k, std::span<const std::size_t> checkpoints,
    std::size_t trials, const MonteCarlo& mc) {
  for (std::size_t j = 1; j < checkpoints.size(); ++j)
    if (checkpoints[j] < checkpoints[j - 1]) throw std::invalid_argument("checkpoints must be ascending");
  const Stepper stepper(system);
  const std::size_t n = checkpoints.empty() ? 0 : checkpoints.back();
  const auto cols = static_cast<Eigen::Index>(checkpoints.size());
  auto rows = run_blocks(trials, kTrialBlock, mc.threads, [&](std::size_t begin, std::size_t end) {
    std::vector<std::int64_t> out;
    for (std::size_t trial = begin; trial < end; ++trial) {
      RandomStream stream = mc.stream(trial);
      double y = x;
      std::int64_t visits = k.contains(y) ? 1 : 0;
      std::size_t j = 0;
      while (j < checkpoints.size() && checkpoints[j] == 0) out.push_back(visits), ++j;
      for (std::size_t step = 1; step <= n; ++step) {
        y = stepper.step(y, stream);
        if (k.contains(y)) ++visits;
        while (j < checkpoints.size() && checkpoints[j] == step) out.push_back(visits), ++j;
      }
    }
    return out;
  });
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> table(static_cast<Eigen::Index>(trials), cols);
  Eigen::Index row = 0;
  for (const auto& block : rows) {
    for (std::size_t i = 0; i < block.size(); i += checkpoints.size(), ++row)
      for (Eigen::Index c = 0; c < cols; ++c) table(row, c) = block[i + static_cast<std::size_t>(c)];
  }
  return table;
}

WordEventStats word_event_frequency(const Walk& system, double x, const Interval<double>& k,
                                    std::span<const std::size_t> word, std::size_t n, std::size_t trials,
                                    const MonteCarlo& mc) {
  if (trials == 0) throw std::invalid_argument("word_event_frequency needs at least one trial");
  if (word.size() > n) throw std::invalid_argument("word longer than the horizon");
  for (std::size_t letter : word)
    if (letter >= system.size()) throw std::invalid_argument("word letter out of range");
  struct Partial {
    std::int64_t hit_trials = 0;
    double hits = 0, hits_sq = 0, occupancy = 0;
  };
  const std::size_t last = n - word.size();
  auto parts = run_blocks(trials, kTrialBlock, mc.threads, [&](std::size_t begin, std::size_t end) {
    Partial p;
    for (std::size_t trial = begin; trial < end; ++trial) {
      const Trajectory t = simulate(system, x, n, mc.stream(trial));
      double hits = 0, occ = 0;
      for (std::size_t i = 0; i <= last; ++i) {
        if (!k.contains(t.positions[i])) continue;
        occ += 1;
        bool match = true;
        for (std::size_t j = 0; j < word.size() && match; ++j) match = t.letters[i + j] == word[j];
        if (match) hits += 1;
      }
      if (hits > 0) ++p.hit_trials;
      p.hits += hits;
      p.hits_sq += hits * hits;
      p.occupancy += occ;
    }
    return p;
  });
  Partial total;
  for (const auto& p : parts) {
    total.hit_trials += p.hit_trials;
    total.hits += p.hits;
    total.hits_sq += p.hits_sq;
    total.occupancy += p.occupancy;
  }
  const double m = static_cast<double>(trials);
  WordEventStats s;
  s.trials = trials;
  s.hit_fraction = static_cast<double>(total.hit_trials) / m;
  s.mean_hits = total.hits / m;
  const double var = std::max(0.0, total.hits_sq / m - s.mean_hits * s.mean_hits);
  s.mean_hits_se = std::sqrt(var / m);
  s.mean_occupancy = total.occupancy / m;
  s.word_probability = 1.0;
  for (std::size_t letter : word) s.word_probability *= to_double(system.weight(letter));
  return s;
}

}  // namespace linewalk
