#pragma once

// Invariant Radon measures of the walk: the xi-stopped Krylov-Bogolyubov
// construction nu_0, the pooled occupation measure nu built from it, the
// ratio-ergodic estimator, and probes for atoms, support, growth and
// uniqueness.

#include "linewalk/chain.hpp"
#include "linewalk/measure.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace linewalk {

struct PoolStats {
  std::size_t runs = 0;
  std::size_t truncated = 0;  // runs that hit the step cap or left the floating-point range
  std::uint64_t steps = 0;

  double truncated_fraction() const { return runs == 0 ? 0.0 : static_cast<double>(truncated) / static_cast<double>(runs); }
};

/// Stopped runs are capped and truncated; a pool whose truncated fraction
/// exceeds `max_truncated_fraction` fails with StoppingCapExceeded.
struct PoolOptions {
  StopOptions stop = truncating();
  double max_truncated_fraction = 0.01;

  static StopOptions truncating() {
    StopOptions s;
    s.on_cap = CapPolicy::truncate;
    return s;
  }
};

struct KrylovBogolyubovResult {
  EmpiricalRadonMeasure nu0;                 // probability measure on the outer interval of xi
  std::vector<EmpiricalRadonMeasure> chains; // per-chain parts, nu0 = sum of chains
  PoolStats stats;
};

/// `batch` independent chains of `iterations` stopped runs each, every chain
/// started at the midpoint of K = xi.inner; nu_0 is the Cesaro average of the
/// stop points. A truncated run contributes no sample and its chain restarts
/// at the midpoint.
KrylovBogolyubovResult krylov_bogolyubov(const Walk& system, const BumpProfile& xi, std::size_t iterations,
                                         std::size_t batch, const MonteCarlo& mc, const PoolOptions& options = {});

struct StationaryOptions {
  PoolOptions pool;
  /// Disjoint groups of start points, used for error bars, when nu_0 comes
  /// without chain structure.
  std::size_t batches = 20;
};

struct StationaryEstimate {
  EmpiricalRadonMeasure nu;                   // nu(K) = 1
  std::vector<EmpiricalRadonMeasure> batches; // nu = mean of batches
  Interval<double> k;
  double raw_k_mass = 0;  // nu(K) before normalization, per unit of nu_0 mass
  PoolStats stats;

  /// (1/G) sum_g c_g batch_g.
  EmpiricalRadonMeasure replica(std::span<const double> multiplicities) const;
  /// Applies with_interval_scaled to nu and every batch.
  StationaryEstimate with_interval_scaled(double a, double b, double factor) const;
};

/// Occupation pools of `samples_per_start` stopped runs from each atom of nu_0,
/// weighted w_i / samples_per_start and rescaled to nu(K) = 1. Batches are
/// atoms taken round-robin.
StationaryEstimate build_stationary(const Walk& system, const EmpiricalRadonMeasure& nu0, const BumpProfile& xi,
                                    std::size_t samples_per_start, const MonteCarlo& mc,
                                    const StationaryOptions& options = {});

/// As above with one batch per Krylov-Bogolyubov chain, so that the error bars
/// also carry the fluctuation of nu_0 (atoms of one chain are correlated).
StationaryEstimate build_stationary(const Walk& system, const KrylovBogolyubovResult& kb, const BumpProfile& xi,
                                    std::size_t samples_per_start, const MonteCarlo& mc,
                                    const StationaryOptions& options = {});

/// max over probes of |int P phi dnu - int phi dnu| / int |phi| dnu.
double stationarity_residual(const Walk& system, const EmpiricalRadonMeasure& nu, std::span<const TestFunction> probes);

struct ProbeResidual {
  double residual = 0;  // signed, relative to int |phi| dnu
  double sigma = 0;     // bootstrap standard deviation
  double z() const { return sigma > 0 ? std::abs(residual) / sigma : (residual == 0 ? 0.0 : INFINITY); }
};

struct StationarityReport {
  std::vector<ProbeResidual> probes;
  double max_abs_residual() const;
  double max_z() const;
  bool passed(double threshold = 3.0) const { return max_z() <= threshold; }
};

/// Residual per probe with a noise floor from a bootstrap over the batches.
StationarityReport stationarity_check(const Walk& system, const StationaryEstimate& estimate,
                                      std::span<const TestFunction> probes, std::size_t resamples,
                                      const MonteCarlo& mc);

/// Sums S_N f = sum_{k < N} f(X_k) for several functions along one trajectory.
std::vector<double> ergodic_sums(const Walk& system, double x, std::span<const TestFunction> fs, std::size_t n,
                                 RandomStream stream);

struct RatioEstimate {
  double ratio = 0;  // NaN when not yet recurrent
  double sum_psi = 0;
  double sum_phi = 0;
  bool recurrent() const { return sum_phi > 0; }
};

/// S_N psi / S_N phi along one trajectory from x; phi must be nonnegative.
RatioEstimate ratio_ergodic(const Walk& system, double x, const TestFunction& psi, const TestFunction& phi,
                            std::size_t n, RandomStream stream);

struct UniquenessReport {
  std::vector<double> ratios_first, ratios_second;  // recurrent runs only
  std::size_t not_recurrent = 0;
  double median_first = 0, median_second = 0;
  std::optional<double> reference;  // int psi dnu / int phi dnu

  /// |m1 - m2| / max(|m1|, |m2|).
  double relative_gap() const;
  /// Largest pairwise relative gap among the two medians and the reference.
  double three_way_gap() const;
};

UniquenessReport uniqueness_cross_check(const Walk& system, double x1, double x2, const TestFunction& psi,
                                        const TestFunction& phi, std::size_t n, std::size_t trials,
                                        const MonteCarlo& mc, const EmpiricalRadonMeasure* nu = nullptr);

struct Atom {
  double position = 0;
  double mass = 0;
};

/// Groups samples closer than merge_tolerance * max(1, |x|) and returns the
/// groups with mass above resolution * reference_mass.
std::vector<Atom> atom_scan(const EmpiricalRadonMeasure& nu, double resolution, double reference_mass = 1.0,
                            double merge_tolerance = 1e-9);

struct WindowMasses {
  std::vector<double> radii;
  std::vector<double> masses;  // nu[-M, M] with nu(K) = 1
  double raw_k_mass = 0;
  PoolStats stats;

  /// masses[i] / masses[i - 1] for i >= 1.
  std::vector<double> growth() const;
};

/// Window masses of the pooled occupation measure, counted on the fly
/// without storing the pool.
WindowMasses bi_infiniteness_probe(const Walk& system, const EmpiricalRadonMeasure& nu0, const BumpProfile& xi,
                                   std::span<const double> radii, std::size_t samples_per_start,
                                   const MonteCarlo& mc, const PoolOptions& options = {});

/// Closure of a long orbit sample of x, as the union of intervals obtained by
/// cutting the sorted sample at gaps wider than `gap`.
std::vector<Interval<double>> minimal_set_estimate(const Walk& system, double x, std::size_t n, double gap,
                                                   RandomStream stream);

/// nu-mass inside the hull of `pieces` but outside every piece widened by `pad`.
double mass_outside(const EmpiricalRadonMeasure& nu, std::span<const Interval<double>> pieces, double pad);

}  // namespace linewalk
