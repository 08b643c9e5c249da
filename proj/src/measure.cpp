#include "linewalk/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace linewalk {

TestFunction::TestFunction(std::vector<double> xs, std::vector<double> ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.size() < 2 || xs_.size() != ys_.size()) throw std::invalid_argument("test function needs >= 2 matching nodes");
  for (std::size_t i = 1; i < xs_.size(); ++i)
    if (!(xs_[i - 1] < xs_[i])) throw std::invalid_argument("test function nodes must increase");
  if (ys_.front() != 0.0 || ys_.back() != 0.0) throw std::invalid_argument("test function must vanish at its end nodes");
  for (double y : ys_)
    if (!std::isfinite(y)) throw std::invalid_argument("test function values must be finite");
}

TestFunction TestFunction::trapezoid(double a, double b, double ramp) {
  if (!(a <= b) || !(ramp > 0)) throw std::invalid_argument("trapezoid needs a <= b and ramp > 0");
  if (a == b) return TestFunction({a - ramp, a, a + ramp}, {0, 1, 0});
  return TestFunction({a - ramp, a, b, b + ramp}, {0, 1, 1, 0});
}

TestFunction TestFunction::hat(double center, double half_width) {
  return trapezoid(center, center, half_width);
}

double TestFunction::operator()(double x) const {
  if (x <= xs_.front() || x >= xs_.back()) return 0.0;
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - xs_.begin());
  const double t = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
  return ys_[i - 1] + t * (ys_[i] - ys_[i - 1]);
}

bool TestFunction::nonnegative() const {
  return std::all_of(ys_.begin(), ys_.end(), [](double y) { return y >= 0; });
}

double TestFunction::lebesgue_integral() const {
  double s = 0;
  for (std::size_t i = 1; i < xs_.size(); ++i) s += 0.5 * (ys_[i - 1] + ys_[i]) * (xs_[i] - xs_[i - 1]);
  return s;
}

TestFunction TestFunction::scaled(double c) const {
  auto ys = ys_;
  for (auto& y : ys) y *= c;
  return TestFunction(xs_, std::move(ys));
}

EmpiricalRadonMeasure::EmpiricalRadonMeasure(std::vector<WeightedPoint> samples, double anchor) : anchor_(anchor) {
  for (const auto& s : samples)
    if (!(s.weight > 0) || !std::isfinite(s.weight) || !std::isfinite(s.position))
      throw std::invalid_argument("measure samples need finite positions and positive weights");
  std::sort(samples.begin(), samples.end(),
            [](const WeightedPoint& a, const WeightedPoint& b) { return a.position < b.position; });
  positions_.reserve(samples.size());
  weights_.reserve(samples.size());
  cumulative_.reserve(samples.size());
  double acc = 0;
  for (const auto& s : samples) {
    positions_.push_back(s.position);
    weights_.push_back(s.weight);
    acc += s.weight;
    cumulative_.push_back(acc);
  }
}

Interval<double> EmpiricalRadonMeasure::hull() const {
  if (empty()) throw std::logic_error("hull of an empty measure");
  return {positions_.front(), positions_.back()};
}

std::size_t EmpiricalRadonMeasure::lower(double x) const {
  return static_cast<std::size_t>(std::lower_bound(positions_.begin(), positions_.end(), x) - positions_.begin());
}

std::size_t EmpiricalRadonMeasure::upper(double x) const {
  return static_cast<std::size_t>(std::upper_bound(positions_.begin(), positions_.end(), x) - positions_.begin());
}

double EmpiricalRadonMeasure::mass_below(double x) const {
  const std::size_t i = lower(x);
  return i == 0 ? 0.0 : cumulative_[i - 1];
}

double EmpiricalRadonMeasure::mass(double a, double b) const {
  if (a > b) return 0.0;
  const std::size_t i = lower(a), j = upper(b);
  if (j <= i) return 0.0;
  return cumulative_[j - 1] - (i == 0 ? 0.0 : cumulative_[i - 1]);
}

double EmpiricalRadonMeasure::cdf(double x) const {
  return x >= anchor_ ? mass(anchor_, x) : -mass(x, anchor_);
}

double EmpiricalRadonMeasure::integrate(const TestFunction& f) const {
  const auto s = f.support();
  double total = 0;
  for (std::size_t i = lower(s.lo), j = upper(s.hi); i < j; ++i) total += weights_[i] * f(positions_[i]);
  return total;
}

double EmpiricalRadonMeasure::integrate_abs(const TestFunction& f) const {
  const auto s = f.support();
  double total = 0;
  for (std::size_t i = lower(s.lo), j = upper(s.hi); i < j; ++i) total += weights_[i] * std::abs(f(positions_[i]));
  return total;
}

double EmpiricalRadonMeasure::integrate_composed(const TestFunction& f, const PLHomeo<double>& g) const {
  const auto s = f.support();
  const double lo = g.inverse_value(s.lo), hi = g.inverse_value(s.hi);
  double total = 0;
  for (std::size_t i = lower(lo), j = upper(hi); i < j; ++i) total += weights_[i] * f(g(positions_[i]));
  return total;
}

EmpiricalRadonMeasure EmpiricalRadonMeasure::scaled(double c) const {
  if (!(c > 0) || !std::isfinite(c)) throw std::invalid_argument("measure scale must be positive");
  EmpiricalRadonMeasure out = *this;
  for (auto& w : out.weights_) w *= c;
  for (auto& w : out.cumulative_) w *= c;
  return out;
}

EmpiricalRadonMeasure EmpiricalRadonMeasure::normalized(const Interval<double>& k) const {
  const double m = mass(k);
  if (!(m > 0)) throw std::domain_error("cannot normalize: the measure gives K no mass");
  return scaled(1.0 / m);
}

EmpiricalRadonMeasure EmpiricalRadonMeasure::with_anchor(double x0) const {
  EmpiricalRadonMeasure out = *this;
  out.anchor_ = x0;
  return out;
}

std::vector<WeightedPoint> EmpiricalRadonMeasure::samples() const {
  std::vector<WeightedPoint> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = {positions_[i], weights_[i]};
  return out;
}

EmpiricalRadonMeasure EmpiricalRadonMeasure::with_interval_scaled(double a, double b, double factor) const {
  auto s = samples();
  for (auto& p : s)
    if (p.position >= a && p.position <= b) p.weight *= factor;
  return EmpiricalRadonMeasure(std::move(s), anchor_);
}

EmpiricalRadonMeasure EmpiricalRadonMeasure::with_weight_scaled(std::size_t index, double factor) const {
  if (index >= size()) throw std::out_of_range("sample index out of range");
  auto s = samples();
  s[index].weight *= factor;
  return EmpiricalRadonMeasure(std::move(s), anchor_);
}

EmpiricalRadonMeasure EmpiricalRadonMeasure::combine(std::span<const EmpiricalRadonMeasure> parts,
                                                     std::span<const double> coefficients, double anchor) {
  if (parts.size() != coefficients.size()) throw std::invalid_argument("combine needs one coefficient per part");
  std::size_t n = 0;
  for (std::size_t p = 0; p < parts.size(); ++p)
    if (coefficients[p] > 0) n += parts[p].size();
  std::vector<WeightedPoint> all;
  all.reserve(n);
  for (std::size_t p = 0; p < parts.size(); ++p) {
    if (coefficients[p] == 0) continue;
    if (coefficients[p] < 0) throw std::invalid_argument("combine coefficients must be nonnegative");
    for (std::size_t i = 0; i < parts[p].size(); ++i)
      all.push_back({parts[p].positions_[i], parts[p].weights_[i] * coefficients[p]});
  }
  return EmpiricalRadonMeasure(std::move(all), anchor);
}

}  // namespace linewalk
