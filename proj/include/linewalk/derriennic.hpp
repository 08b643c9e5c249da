#pragma once

// Zero-drift coordinates: the chart D(x) = nu[x_0, x] built from a stationary
// Radon measure, the conjugated system D g D^{-1}, and checks of its drift,
// Lipschitz constants and displacement bound.

#include "linewalk/chain.hpp"
#include "linewalk/measure.hpp"
#include "linewalk/stationary.hpp"

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace linewalk {

/// Monotone PL chart. Nodes are the merged sample positions p_i with
/// D(p_i) = nu(-inf, p_i) + w_i / 2 - offset, so that D(x_0) = 0; beyond the
/// sampled hull D is affine with the boundary density as slope.
class DerriennicChart {
 public:
  DerriennicChart(PLHomeo<double> map, double origin, Interval<double> hull, std::vector<double> nodes,
                  double max_node_mass);

  double operator()(double x) const { return map_(x); }
  double inverse(double u) const { return map_.inverse_value(u); }

  const PLHomeo<double>& map() const { return map_; }
  double origin() const { return origin_; }
  Interval<double> hull() const { return hull_; }  // sampled positions
  Interval<double> image_hull() const { return {map_(hull_.lo), map_(hull_.hi)}; }
  std::span<const double> nodes() const { return nodes_; }
  /// Largest merged node mass, the step by which D resolves nu.
  double max_node_mass() const { return max_node_mass_; }

 private:
  PLHomeo<double> map_;
  double origin_;
  Interval<double> hull_;
  std::vector<double> nodes_;
  double max_node_mass_;
};

/// Samples closer than width_floor * (hull length) are merged into one node.
/// Fails on an empty or single-node measure and when x0 lies outside the hull.
DerriennicChart build_chart(const EmpiricalRadonMeasure& nu, double x0, double width_floor = 1e-9);

struct ConjugateOptions {
  std::size_t nodes = 512;
  /// In chart coordinates; by default the image of the positions x with x and
  /// every g(x) inside the chart's sampled hull.
  std::optional<Interval<double>> hull;
  std::vector<double> extra_nodes;        // added to the uniform grid, e.g. evaluation points
  std::size_t max_refinements = 3;        // node doublings tried when a fit is not monotone
};

struct ConjugatedSystem {
  Walk system;
  std::vector<double> nodes;   // fit nodes in chart coordinates
  double grid_tolerance = 0;   // largest node spacing
  double pairing_gap = 0;      // sup over nodes of |invert(fit g) - fit(g^{-1})|
};

/// Each generator g with index below its partner is fitted through the nodes
/// u -> D(g(D^{-1}(u))); the partner is the exact inverse of that fit. Weights
/// and pairing are kept. Throws when the pairing gap exceeds the grid
/// tolerance.
ConjugatedSystem conjugate(const Walk& system, const DerriennicChart& chart, const ConjugateOptions& options = {});

struct DriftProfile {
  std::vector<double> grid;
  std::vector<double> drift;
  double max_abs = 0;
};

DriftProfile drift_profile(const Walk& system, std::span<const double> grid);

/// `count` evenly spaced points of the chart image of K, ends included.
std::vector<double> chart_grid(const DerriennicChart& chart, const Interval<double>& k, std::size_t count = 11);

struct DriftNoise {
  std::vector<double> sigma;  // per grid point
  std::size_t resamples = 0;
};

/// Spread of the post-chart drift at the grid points over chart replicas:
/// each replica rebuilds D from a multinomial reweighting of the estimate's
/// batches, renormalized on K, and evaluates sum_g mu(g) (D(g x) - D(x)) at
/// the fixed points x = D^{-1}(u).
DriftNoise drift_bootstrap(const Walk& system, const StationaryEstimate& estimate, const DerriennicChart& chart,
                           std::span<const double> grid, std::size_t resamples, const MonteCarlo& mc);

struct GeneratorBound {
  std::string name;
  double value = 0;  // max slope, or sup displacement
  double bound = 0;
  bool passed = false;
};

struct BoundReport {
  std::vector<GeneratorBound> generators;
  double phi_max = 0;  // displacement only: max of Phi_mu over the grid
  bool passed() const;
};

/// Max slope of every generator against (1 + tolerance) / weight. With a
/// positive resolution, slopes are chords at least that long (plus the
/// tails), so pieces shorter than the fit grid do not count on their own.
BoundReport lipschitz_check(const Walk& conjugated, double tolerance = 0.1, double resolution = 0.0);

/// Largest chord slope over windows of length `resolution` anchored at a
/// breakpoint, and the tail slopes; the max piece slope when resolution is 0.
double slope_at_resolution(const PLHomeo<double>& g, double resolution);

/// sup over the grid of |g(u) - u| against (1 + tolerance) sqrt(2 max Phi_mu) / weight.
BoundReport displacement_check(const Walk& conjugated, std::span<const double> grid, double tolerance = 0.1);

/// Adds x +- 1 and x +- sqrt(2) with total weight `share`, scaling the
/// original weights by 1 - share, so that every orbit becomes dense.
GeneratorSystem<Rational> augment_to_minimal(const GeneratorSystem<Rational>& system,
                                             const Rational& share = Rational(1, 2));

void write_chart_csv(std::ostream& out, const DerriennicChart& chart);

}  // namespace linewalk
