#pragma once

// Weighted sample pools standing in for Radon measures on the line, and the
// compactly supported piecewise-linear test functions integrated against them.

#include "linewalk/pl_homeo.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace linewalk {

struct WeightedPoint {
  double position = 0;
  double weight = 0;
};

/// Continuous piecewise-linear function, zero outside [xs.front(), xs.back()].
class TestFunction {
 public:
  TestFunction() = default;
  /// Nodes must be strictly increasing; the end values must be zero.
  TestFunction(std::vector<double> xs, std::vector<double> ys);

  /// 1 on [a, b], linear down to 0 on [a - ramp, a] and [b, b + ramp].
  static TestFunction trapezoid(double a, double b, double ramp);
  static TestFunction hat(double center, double half_width);

  double operator()(double x) const;
  Interval<double> support() const { return {xs_.front(), xs_.back()}; }
  bool nonnegative() const;
  double lebesgue_integral() const;
  TestFunction scaled(double c) const;

  const std::vector<double>& nodes() const { return xs_; }
  const std::vector<double>& values() const { return ys_; }

 private:
  std::vector<double> xs_{0.0, 1.0};
  std::vector<double> ys_{0.0, 0.0};
};

class EmpiricalRadonMeasure {
 public:
  EmpiricalRadonMeasure() = default;
  /// Sorts the samples; weights must be positive and finite.
  explicit EmpiricalRadonMeasure(std::vector<WeightedPoint> samples, double anchor = 0.0);

  std::size_t size() const { return positions_.size(); }
  bool empty() const { return positions_.empty(); }
  double anchor() const { return anchor_; }
  double total() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
  /// Smallest and largest sample position.
  Interval<double> hull() const;

  /// Mass of the closed interval [a, b]; 0 when a > b.
  double mass(double a, double b) const;
  double mass(const Interval<double>& k) const { return mass(k.lo, k.hi); }
  /// Signed CDF anchored at the anchor: mass[x0, x] or -mass[x, x0].
  double cdf(double x) const;
  /// Mass strictly below x.
  double mass_below(double x) const;

  double integrate(const TestFunction& f) const;
  double integrate_abs(const TestFunction& f) const;
  /// Integral of f o g, summing only samples in g^{-1}(supp f).
  double integrate_composed(const TestFunction& f, const PLHomeo<double>& g) const;

  EmpiricalRadonMeasure scaled(double c) const;
  /// Rescaled so that mass(k) = 1.
  EmpiricalRadonMeasure normalized(const Interval<double>& k) const;
  EmpiricalRadonMeasure with_anchor(double x0) const;
  /// Weights of samples inside [a, b] multiplied by `factor`.
  EmpiricalRadonMeasure with_interval_scaled(double a, double b, double factor) const;
  EmpiricalRadonMeasure with_weight_scaled(std::size_t index, double factor) const;

  std::span<const double> positions() const { return positions_; }
  std::span<const double> weights() const { return weights_; }
  std::vector<WeightedPoint> samples() const;

  /// sum_i c_i * parts_i as one pool.
  static EmpiricalRadonMeasure combine(std::span<const EmpiricalRadonMeasure> parts, std::span<const double> coefficients,
                                       double anchor = 0.0);

 private:
  std::size_t lower(double x) const;  // first index with position >= x
  std::size_t upper(double x) const;  // first index with position > x

  std::vector<double> positions_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;  // cumulative_[i] = weights_[0] + ... + weights_[i]
  double anchor_ = 0;
};

}  // namespace linewalk
