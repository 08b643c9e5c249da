#pragma once

// The nu-distance d(x, y) = nu[x, y) between points of the line, its
// martingale property along coupled trajectories, contraction experiments and
// a heuristic classifier of the dynamics.
//
// Coupled trajectories X_k^x <= X_k^y share their letters. The pair is carried
// as (lower point, gap) and the gap is advanced with PLHomeo::increment, so a
// contracting gap stays resolved long after the two points would coincide in
// floating point.

#include "linewalk/chain.hpp"
#include "linewalk/measure.hpp"
#include "linewalk/stationary.hpp"

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace linewalk {

/// d(x, y) = nu[min, max); half-open so that d is additive on ordered
/// triples even across atoms. Holds a reference to nu.
class NuDistance {
 public:
  explicit NuDistance(const EmpiricalRadonMeasure& nu) : nu_(&nu) {}

  double operator()(double x, double y) const {
    if (y < x) std::swap(x, y);
    return nu_->mass_below(y) - nu_->mass_below(x);
  }
  const EmpiricalRadonMeasure& measure() const { return *nu_; }

 private:
  const EmpiricalRadonMeasure* nu_;
};

struct CoupledPair {
  double lower = 0;
  double gap = 0;  // X^y - X^x >= 0

  double upper() const { return lower + gap; }
};

inline CoupledPair coupled_step(const Walk& system, std::size_t letter, const CoupledPair& p) {
  const auto& g = system.map(letter);
  return {g(p.lower), g.increment(p.lower, p.gap)};
}

struct MartingaleReport {
  double initial = 0;          // d(x, y)
  std::vector<double> mean;    // mean of d(X_k^x, X_k^y) for k = 0..n
  std::vector<double> sigma;   // standard error of mean[k] - initial
  std::size_t trials = 0;

  double z(std::size_t k) const;
  double max_z() const;
  bool passed(double threshold = 3.0) const { return max_z() <= threshold; }
};

/// Per-step means of d over coupled trajectories from x < y, against a fixed
/// nu; sigma is the trial standard error.
MartingaleReport martingale_check(const Walk& system, const EmpiricalRadonMeasure& nu, double x, double y,
                                  std::size_t n, std::size_t trials, const MonteCarlo& mc);

/// As above against estimate.nu, with sigma also carrying the spread of the
/// same statistic across the estimate's batches.
MartingaleReport martingale_check(const Walk& system, const StationaryEstimate& estimate, double x, double y,
                                  std::size_t n, std::size_t trials, const MonteCarlo& mc);

struct GapRecord {
  std::size_t trial = 0;
  std::size_t step = 0;
  double gap_euclidean = 0;
  double gap_nu = 0;  // NaN without a measure
  bool gated = false; // X_step^x in J
};

struct ContractionCheckpoint {
  std::size_t step = 0;
  std::size_t gated = 0;
  double median = 0;  // over gated trials; NaN when none is gated
  double q90 = 0;
  std::size_t contracting = 0;        // gated with gap < contract_below * initial gap
  Interval<double> contracting_ci{};  // 95% interval for contracting / trials
};

struct ContractionOptions {
  std::vector<std::size_t> checkpoints;  // empty: n/4, n/2, n
  double contract_below = 0.1;
  const EmpiricalRadonMeasure* nu = nullptr;
  bool keep_records = false;
};

struct ContractionReport {
  double initial_gap = 0;
  std::size_t trials = 0;
  std::vector<ContractionCheckpoint> checkpoints;
  double max_gap_change = 0;  // max over trials and steps of |gap_k - initial gap|
  std::vector<GapRecord> records;  // per trial and checkpoint, when requested

  /// Gated medians strictly decrease across checkpoints.
  bool median_decreasing() const;
};

/// Gap 1_J(X_k^x) |X_k^y - X_k^x| along coupled trajectories, summarised over
/// the gated trials at each checkpoint.
ContractionReport contraction_experiment(const Walk& system, double x, double y, const Interval<double>& j,
                                         std::size_t n, std::size_t trials, const MonteCarlo& mc,
                                         const ContractionOptions& options = {});

struct GapExcursion {
  double initial_gap = 0, initial_nu_gap = 0;
  double max_ratio = 0, min_ratio = 0;  // extremes of gap_k / initial gap
  std::vector<std::size_t> steps;
  std::vector<double> nu_gaps;  // nu-gap at the last visit of X^x to J up to steps[i]
};

/// One long coupled run; the nu-gap is read when X^x is in J, where the pool
/// resolves nu.
GapExcursion gap_excursion(const Walk& system, const EmpiricalRadonMeasure& nu, double x, double y,
                           const Interval<double>& j, std::size_t n, std::size_t samples, RandomStream stream);

enum class Structure { discrete_orbit, translation_like, lift_like, strong_contraction_like, inconclusive };

std::string to_string(Structure s);
std::optional<Structure> parse_structure(const std::string& name);

struct ClassifierOptions {
  double gap_lower_bound = 0.01;   // orbit gaps above this count as bounded below
  double contraction_factor = 0.2; // confirmed strong contraction: median gap below factor * initial
  double unit = 1.0;               // period tested for commutation and the large/small gap scale
  std::size_t horizon = 20000;
  std::size_t trials = 1000;
};

struct StructureVerdict {
  Structure kind = Structure::inconclusive;
  std::string reason;
  double min_orbit_gap = 0;
};

/// Decision tree: discrete orbit, then translations or constant gaps, then
/// commutation with x + unit or contraction only below the unit, then
/// confirmed strong contraction; otherwise inconclusive. `samples` orbit
/// points are used for the discreteness test.
StructureVerdict classify_structure(const Walk& system, std::size_t samples, const MonteCarlo& mc,
                                    const ClassifierOptions& options = {});

void write_gap_csv(std::ostream& out, const std::vector<GapRecord>& records);

}  // namespace linewalk
