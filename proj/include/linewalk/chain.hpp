#pragma once

// The Markov chain X_n^x = g_n o ... o g_1 (x) on the line: trajectories,
// oscillation and recurrence statistics, xi-stopped runs and word events.
// Simulation runs on the double cast of a generator system.

#include "linewalk/generator_system.hpp"
#include "linewalk/random.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace linewalk {

using Walk = GeneratorSystem<double>;

/// Stepping data for one generator system: maps and letter sampler.
class Stepper {
 public:
  explicit Stepper(const Walk& system) : system_(&system), sampler_(system) {}

  std::size_t draw(RandomStream& stream) const { return sampler_(stream); }
  double apply(std::size_t letter, double x) const { return system_->map(letter)(x); }
  double step(double x, RandomStream& stream) const { return apply(draw(stream), x); }
  const Walk& system() const { return *system_; }

 private:
  const Walk* system_;
  LetterSampler sampler_;
};

struct Trajectory {
  double start = 0;
  std::vector<double> positions;       // X_0 .. X_n
  std::vector<std::uint32_t> letters;  // letters[k] moves positions[k] to positions[k + 1]
  std::uint64_t seed = 0;              // key of the stream that produced it
};

Trajectory simulate(const Walk& system, double x, std::size_t n, RandomStream stream);

/// Trapezoid: 1 on `inner`, 0 outside `outer`, linear in between.
struct BumpProfile {
  Interval<double> inner;
  Interval<double> outer;

  /// Outer interval = inner widened by `widen` times its length on each side.
  static BumpProfile around(const Interval<double>& inner, double widen = 0.2);

  double operator()(double x) const {
    if (x < outer.lo || x > outer.hi) return 0.0;
    if (x >= inner.lo && x <= inner.hi) return 1.0;
    if (x < inner.lo) return (x - outer.lo) / (inner.lo - outer.lo);
    return (outer.hi - x) / (outer.hi - inner.hi);
  }
};

enum class CapPolicy {
  raise,     // throw StoppingCapExceeded
  truncate,  // return the run flagged `truncated`
};

struct StopOptions {
  std::size_t cap = 10'000'000;
  CapPolicy on_cap = CapPolicy::raise;
  /// Occupation samples outside this window are dropped; nullopt keeps all.
  std::optional<Interval<double>> retain;
  bool keep_path = false;
};

class StoppingCapExceeded : public std::runtime_error {
 public:
  StoppingCapExceeded(std::size_t steps, double position)
      : std::runtime_error("stopping cap reached after " + std::to_string(steps) +
                           " steps (position " + std::to_string(position) + ")"),
        steps_(steps),
        position_(position) {}
  /// A pool of stopped runs with too many truncated at `cap` steps.
  StoppingCapExceeded(std::size_t cap, std::size_t truncated, std::size_t runs)
      : std::runtime_error(std::to_string(truncated) + " of " + std::to_string(runs) +
                           " stopped runs reached the cap of " + std::to_string(cap) + " steps"),
        steps_(cap),
        position_(std::numeric_limits<double>::quiet_NaN()) {}
  std::size_t steps() const { return steps_; }
  double position() const { return position_; }

 private:
  std::size_t steps_;
  double position_;
};

struct StoppedRun {
  double start = 0;
  std::size_t stopping_time = 0;  // T >= 1
  double stop_point = 0;          // X_T
  std::vector<double> occupation; // X_0 .. X_{T-1}, filtered by StopOptions::retain
  std::vector<double> path;       // X_0 .. X_T when keep_path
  bool truncated = false;         // cap reached, or the walk left the floating-point range
};

/// After each move to X_{n+1} the walk stops with probability xi(X_{n+1}).
StoppedRun stopped_walk(const Walk& system, double x, const BumpProfile& xi, RandomStream& stream,
                        const StopOptions& options = {});

/// Same run, but visit(X_k) is called for k = 0 .. T-1 instead of filling
/// `occupation`; `retain` and `keep_path` are ignored.
template <typename Visit>
StoppedRun stopped_walk_visit(const Stepper& stepper, double x, const BumpProfile& xi, RandomStream& stream,
                              const StopOptions& options, Visit&& visit) {
  StoppedRun run;
  run.start = x;
  for (std::size_t t = 1;; ++t) {
    visit(x);
    x = stepper.step(x, stream);
    const double p = xi(x);
    bool stop = p >= 1.0;
    if (!stop && p > 0.0) stop = stream.uniform() < p;
    if (stop || t >= options.cap || !std::isfinite(x)) {
      run.stopping_time = t;
      run.stop_point = x;
      if (!stop) {
        if (options.on_cap == CapPolicy::raise) throw StoppingCapExceeded(t, x);
        run.truncated = true;
      }
      return run;
    }
  }
}

/// Number of indices k with X_k in K.
std::size_t visit_counts(const Trajectory& trajectory, const Interval<double>& k);

struct OscillationStats {
  std::size_t trials = 0;
  double upper = 0;  // threshold A
  double lower = 0;  // mirrored threshold 2x - A
  double frac_exceed_up = 0;
  double frac_exceed_down = 0;
  Eigen::ArrayXd frac_stay_above_start;  // P(X_k >= x), k = 0..n, ties included

  /// Binomial standard error of a fraction near p over `trials`.
  double sigma(double p) const { return std::sqrt(p * (1 - p) / static_cast<double>(trials)); }
};

/// A position within tie_tolerance * max(1, |x|) below x counts as X_k >= x:
/// exact returns to x (g then g^{-1}) land an ulp or so to either side in
/// double arithmetic, and counting them as misses drags the fraction below
/// 1/2 on lattice-like walks.
OscillationStats oscillation_stats(const Walk& system, double x, std::size_t n, std::size_t trials,
                                   double upper, const MonteCarlo& mc, double tie_tolerance = 1e-9);

/// counts(t, j) = number of k <= checkpoints[j] with X_k in K for trial t.
Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> visit_count_table(
    const Walk& system, double x, const Interval<double>& k, std::span<const std::size_t> checkpoints,
    std::size_t trials, const MonteCarlo& mc);

struct WordEventStats {
  std::size_t trials = 0;
  double hit_fraction = 0;      // trials with at least one hit
  double mean_hits = 0;
  double mean_hits_se = 0;
  double mean_occupancy = 0;    // mean #{k <= n - |word| : X_k in K}
  double word_probability = 0;  // product of the letters' weights
};

/// Counts k <= n - |word| with X_k in K followed by the letters of `word`.
WordEventStats word_event_frequency(const Walk& system, double x, const Interval<double>& k,
                                    std::span<const std::size_t> word, std::size_t n, std::size_t trials,
                                    const MonteCarlo& mc);

}  // namespace linewalk
