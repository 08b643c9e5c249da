#pragma once

// Piecewise-linear orientation-preserving homeomorphisms of the real line.
//
// A PLHomeo is either
//   * finite: finitely many breakpoints, affine on both unbounded tails, or
//   * periodic: g(x + p) = g(x) + p, described by its breakpoints in [0, p).
// Both forms are kept canonical (no two adjacent pieces share a slope), so
// equality of PLHomeo values is equality of maps.

#include "linewalk/scalar.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace linewalk {

template <typename Scalar>
struct Interval {
  Scalar lo;
  Scalar hi;

  bool contains(const Scalar& x) const { return lo <= x && x <= hi; }
  Scalar length() const { return hi - lo; }
  Scalar midpoint() const { return (lo + hi) / 2; }
};

/// Closed component of a fixed set; a missing end is infinite.
template <typename Scalar>
struct FixedComponent {
  std::optional<Scalar> lo;
  std::optional<Scalar> hi;

  bool is_point() const { return lo && hi && *lo == *hi; }
  bool contains(const Scalar& x) const { return (!lo || *lo <= x) && (!hi || x <= *hi); }
  friend bool operator==(const FixedComponent&, const FixedComponent&) = default;
};

/// Fix(g). For a periodic set, `components` lie in [origin, origin + period]
/// and the set is their union translated by period * Z.
template <typename Scalar>
struct FixedSet {
  std::vector<FixedComponent<Scalar>> components;
  Scalar period{0};
  Scalar origin{0};

  bool empty() const { return components.empty(); }
  bool is_periodic() const { return period > 0; }
  bool is_whole_line() const {
    return components.size() == 1 && !components[0].lo && !components[0].hi;
  }

  bool contains(const Scalar& x) const {
    Scalar y = x;
    if (is_periodic()) y = x - ScalarTraits<Scalar>::floor((x - origin) / period) * period;
    for (const auto& c : components)
      if (c.contains(y)) return true;
    return false;
  }

  std::optional<Scalar> witness() const {
    if (components.empty()) return std::nullopt;
    const auto& c = components.front();
    if (c.lo) return *c.lo;
    if (c.hi) return *c.hi;
    return Scalar(0);
  }
};

template <typename Scalar>
class PLHomeo {
 public:
  PLHomeo() : slopes_{Scalar(1)}, anchor_(0), period_(0) {}

  static PLHomeo identity() { return PLHomeo(); }

  /// x -> a x + b, a > 0.
  static PLHomeo affine(const Scalar& a, const Scalar& b) {
    if (!(a > 0)) throw std::invalid_argument("affine map needs a positive slope");
    PLHomeo g;
    g.slopes_ = {a};
    g.anchor_ = b;
    return g;
  }

  static PLHomeo translation(const Scalar& t) { return affine(Scalar(1), t); }

  /// slopes[0] is the left tail, slopes[i + 1] the slope on [b_i, b_{i+1});
  /// anchor_value = g(breakpoints[0]). With no breakpoints, anchor_value = g(0).
  static PLHomeo piecewise(std::vector<Scalar> breakpoints, std::vector<Scalar> slopes,
                           Scalar anchor_value) {
    if (slopes.size() != breakpoints.size() + 1)
      throw std::invalid_argument("piecewise map needs one more slope than breakpoints");
    check_slopes(slopes);
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
      if (!(breakpoints[i - 1] < breakpoints[i]))
        throw std::invalid_argument("breakpoints must be strictly ascending");
    if (breakpoints.empty()) return affine(slopes[0], anchor_value);

    std::vector<Scalar> values(breakpoints.size());
    values[0] = anchor_value;
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
      values[i] = values[i - 1] + slopes[i] * (breakpoints[i] - breakpoints[i - 1]);

    PLHomeo g;
    g.slopes_ = {slopes[0]};
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
      if (slopes[i] == slopes[i + 1]) continue;
      g.bps_.push_back(breakpoints[i]);
      g.vals_.push_back(values[i]);
      g.slopes_.push_back(slopes[i + 1]);
    }
    if (g.bps_.empty())
      return affine(slopes[0], values[0] - slopes[0] * breakpoints[0]);
    g.anchor_ = g.vals_[0];
    return g;
  }

  /// g(x + period) = g(x) + period. breakpoints lie in [0, period), slopes[i]
  /// applies on [b_i, b_{i+1}) cyclically, anchor_value = g(breakpoints[0]).
  static PLHomeo periodic(const Scalar& period, std::vector<Scalar> breakpoints,
                          std::vector<Scalar> slopes, Scalar anchor_value) {
    if (!(period > 0)) throw std::invalid_argument("period must be positive");
    if (breakpoints.empty()) {
      if (slopes.size() != 1 || slopes[0] != 1)
        throw std::invalid_argument("a periodic map without breakpoints must be a translation");
      return translation(anchor_value);
    }
    if (slopes.size() != breakpoints.size())
      throw std::invalid_argument("periodic map needs one slope per breakpoint");
    check_slopes(slopes);
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
      if (breakpoints[i] < 0 || !(breakpoints[i] < period))
        throw std::invalid_argument("periodic breakpoints must lie in [0, period)");
      if (i > 0 && !(breakpoints[i - 1] < breakpoints[i]))
        throw std::invalid_argument("breakpoints must be strictly ascending");
    }
    const std::size_t k = breakpoints.size();
    std::vector<Scalar> values(k);
    values[0] = anchor_value;
    Scalar advance = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const Scalar next = (i + 1 < k) ? breakpoints[i + 1] : breakpoints[0] + period;
      const Scalar step = slopes[i] * (next - breakpoints[i]);
      if (i + 1 < k) values[i + 1] = values[i] + step;
      advance += step;
    }
    if constexpr (ScalarTraits<Scalar>::is_exact) {
      if (advance != period) throw std::invalid_argument("periodic slopes must advance by one period");
    } else {
      using std::abs;
      if (abs(advance - period) > 1e-9 * period)
        throw std::invalid_argument("periodic slopes must advance by one period");
    }

    PLHomeo g;
    g.period_ = period;
    g.slopes_.clear();
    for (std::size_t i = 0; i < k; ++i) {
      const Scalar& before = slopes[(i + k - 1) % k];
      if (before == slopes[i]) continue;
      g.bps_.push_back(breakpoints[i]);
      g.vals_.push_back(values[i]);
      g.slopes_.push_back(slopes[i]);
    }
    if (g.bps_.empty()) {
      if (slopes[0] != 1) throw std::invalid_argument("a periodic map with one slope must be a translation");
      return translation(values[0] - breakpoints[0]);
    }
    g.anchor_ = g.vals_[0];
    return g;
  }

  Scalar operator()(const Scalar& x) const {
    if (is_periodic()) {
      const Scalar q = ScalarTraits<Scalar>::floor((x - bps_[0]) / period_);
      const Scalar y = x - q * period_;
      const std::size_t i = locate(bps_, y);
      return vals_[i] + slopes_[i] * (y - bps_[i]) + q * period_;
    }
    if (bps_.empty()) return slopes_[0] * x + anchor_;
    if (x < bps_[0]) return vals_[0] + slopes_[0] * (x - bps_[0]);
    const std::size_t i = locate(bps_, x);
    return vals_[i] + slopes_[i + 1] * (x - bps_[i]);
  }

  /// g^{-1}(y) without building the inverse.
  Scalar inverse_value(const Scalar& y) const {
    if (is_periodic()) {
      const Scalar q = ScalarTraits<Scalar>::floor((y - vals_[0]) / period_);
      const Scalar z = y - q * period_;
      const std::size_t i = locate(vals_, z);
      return bps_[i] + (z - vals_[i]) / slopes_[i] + q * period_;
    }
    if (bps_.empty()) return (y - anchor_) / slopes_[0];
    if (y < vals_[0]) return bps_[0] + (y - vals_[0]) / slopes_[0];
    const std::size_t i = locate(vals_, y);
    return bps_[i] + (y - vals_[i]) / slopes_[i + 1];
  }

  /// g(x + h) - g(x) for h >= 0, summed piece by piece so that a small gap
  /// keeps its relative precision instead of cancelling.
  Scalar increment(const Scalar& x, Scalar h) const {
    if (!(h > 0)) return Scalar(0);
    if (bps_.empty()) return slopes_[0] * h;
    Scalar total(0);
    if (is_periodic()) {
      const Scalar full = ScalarTraits<Scalar>::floor(h / period_);
      total += full * period_;
      h -= full * period_;
      const Scalar q = ScalarTraits<Scalar>::floor((x - bps_[0]) / period_);
      Scalar pos = x - q * period_;
      const std::size_t k = bps_.size();
      std::size_t j = static_cast<std::size_t>(std::upper_bound(bps_.begin(), bps_.end(), pos) - bps_.begin());
      Scalar shift(0);
      for (;;) {
        if (j == k) {
          j = 0;
          shift += period_;
        }
        const Scalar knot = bps_[j] + shift;
        const Scalar& slope = slopes_[(j + k - 1) % k];
        if (!(knot < pos + h)) return total + slope * h;
        total += slope * (knot - pos);
        h -= knot - pos;
        pos = knot;
        ++j;
      }
    }
    std::size_t j = static_cast<std::size_t>(std::upper_bound(bps_.begin(), bps_.end(), x) - bps_.begin());
    Scalar pos = x;
    while (j < bps_.size() && bps_[j] < pos + h) {
      total += slopes_[j] * (bps_[j] - pos);
      h -= bps_[j] - pos;
      pos = bps_[j];
      ++j;
    }
    return total + slopes_[j] * h;
  }

  /// Slope of the piece containing [x, x + eps).
  Scalar right_slope(const Scalar& x) const {
    if (is_periodic()) {
      const Scalar q = ScalarTraits<Scalar>::floor((x - bps_[0]) / period_);
      return slopes_[locate(bps_, x - q * period_)];
    }
    if (bps_.empty() || x < bps_[0]) return slopes_[0];
    return slopes_[locate(bps_, x) + 1];
  }

  /// Breakpoints strictly inside (lo, hi), ascending.
  std::vector<Scalar> breakpoints_in(const Scalar& lo, const Scalar& hi) const {
    std::vector<Scalar> out;
    if (!(lo < hi)) return out;
    if (!is_periodic()) {
      for (const auto& b : bps_)
        if (lo < b && b < hi) out.push_back(b);
      return out;
    }
    Scalar shift = ScalarTraits<Scalar>::floor((lo - bps_[0]) / period_) * period_;
    for (;; shift += period_) {
      if (!(bps_[0] + shift < hi)) break;
      for (const auto& b : bps_) {
        const Scalar x = b + shift;
        if (lo < x && x < hi) out.push_back(x);
      }
    }
    return out;
  }

  bool is_periodic() const { return period_ > 0; }
  const Scalar& period() const { return period_; }
  bool is_affine() const { return !is_periodic() && bps_.empty(); }
  bool is_translation() const { return is_affine() && slopes_[0] == 1; }
  bool is_identity() const { return is_translation() && anchor_ == 0; }

  std::span<const Scalar> breakpoints() const { return bps_; }
  /// Finite form: size breakpoints + 1 (left tail first). Periodic: one per breakpoint.
  std::span<const Scalar> slopes() const { return slopes_; }
  /// g(b_0); for an affine map, g(0).
  const Scalar& anchor_value() const { return anchor_; }

  /// (a, b) with g(x) = a x + b; only for affine maps.
  std::pair<Scalar, Scalar> affine_coefficients() const {
    if (!is_affine()) throw std::logic_error("map is not affine");
    return {slopes_[0], anchor_};
  }

  Scalar max_slope() const { return *std::max_element(slopes_.begin(), slopes_.end()); }
  Scalar min_slope() const { return *std::min_element(slopes_.begin(), slopes_.end()); }

  template <typename To>
  PLHomeo<To> cast() const {
    std::vector<To> b, s;
    for (const auto& v : bps_) b.push_back(scalar_cast<To>(v));
    for (const auto& v : slopes_) s.push_back(scalar_cast<To>(v));
    if (is_periodic())
      return PLHomeo<To>::periodic(scalar_cast<To>(period_), std::move(b), std::move(s),
                                   scalar_cast<To>(anchor_));
    if (bps_.empty()) return PLHomeo<To>::affine(s[0], scalar_cast<To>(anchor_));
    return PLHomeo<To>::piecewise(std::move(b), std::move(s), scalar_cast<To>(anchor_));
  }

  friend bool operator==(const PLHomeo& a, const PLHomeo& b) {
    return a.period_ == b.period_ && a.bps_ == b.bps_ && a.slopes_ == b.slopes_ &&
           a.anchor_ == b.anchor_;
  }

 private:
  static void check_slopes(const std::vector<Scalar>& slopes) {
    for (const auto& s : slopes)
      if (!(s > 0)) throw std::invalid_argument("slopes must be strictly positive");
  }

  // Index of the last knot <= x (0 when x precedes every knot).
  static std::size_t locate(const std::vector<Scalar>& knots, const Scalar& x) {
    auto it = std::upper_bound(knots.begin(), knots.end(), x);
    return it == knots.begin() ? 0 : static_cast<std::size_t>(it - knots.begin()) - 1;
  }

  std::vector<Scalar> bps_;
  std::vector<Scalar> slopes_;
  std::vector<Scalar> vals_;
  Scalar anchor_;
  Scalar period_;
};

/// g o h.
template <typename Scalar>
PLHomeo<Scalar> compose(const PLHomeo<Scalar>& g, const PLHomeo<Scalar>& h) {
  if (!g.is_periodic() && !h.is_periodic()) {
    std::vector<Scalar> cuts(h.breakpoints().begin(), h.breakpoints().end());
    for (const auto& b : g.breakpoints()) cuts.push_back(h.inverse_value(b));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    if (cuts.empty()) {
      const auto [ga, gb] = g.affine_coefficients();
      const auto [ha, hb] = h.affine_coefficients();
      return PLHomeo<Scalar>::affine(ga * ha, ga * hb + gb);
    }
    std::vector<Scalar> slopes;
    slopes.reserve(cuts.size() + 1);
    auto slope_at = [&](const Scalar& x) { return g.right_slope(h(x)) * h.right_slope(x); };
    slopes.push_back(slope_at(cuts.front() - 1));
    for (std::size_t i = 0; i < cuts.size(); ++i) {
      const Scalar mid = (i + 1 < cuts.size()) ? (cuts[i] + cuts[i + 1]) / 2 : cuts[i] + 1;
      slopes.push_back(slope_at(mid));
    }
    const Scalar anchor = g(h(cuts.front()));
    return PLHomeo<Scalar>::piecewise(std::move(cuts), std::move(slopes), anchor);
  }

  Scalar period;
  if (g.is_periodic() && h.is_periodic()) {
    if (g.period() != h.period())
      throw std::domain_error("composition of periodic maps with different periods");
    period = g.period();
  } else if (g.is_periodic() && h.is_translation()) {
    period = g.period();
  } else if (h.is_periodic() && g.is_translation()) {
    period = h.period();
  } else {
    throw std::domain_error("composition of a periodic map with a non-translation is not piecewise-linear with finitely many pieces");
  }

  std::vector<Scalar> cuts{Scalar(0)};
  for (const auto& b : h.breakpoints()) cuts.push_back(b);
  const Scalar h0 = h(Scalar(0));
  for (const auto& y : g.breakpoints_in(h0, h0 + period)) cuts.push_back(h.inverse_value(y));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<Scalar> slopes;
  slopes.reserve(cuts.size());
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    const Scalar next = (i + 1 < cuts.size()) ? cuts[i + 1] : cuts[0] + period;
    const Scalar mid = (cuts[i] + next) / 2;
    slopes.push_back(g.right_slope(h(mid)) * h.right_slope(mid));
  }
  const Scalar anchor = g(h(cuts.front()));
  return PLHomeo<Scalar>::periodic(period, std::move(cuts), std::move(slopes), anchor);
}

template <typename Scalar>
PLHomeo<Scalar> invert(const PLHomeo<Scalar>& g) {
  const auto bps = g.breakpoints();
  const auto slopes = g.slopes();
  if (g.is_periodic()) {
    const Scalar& p = g.period();
    struct Knot {
      Scalar at, preimage, slope;
    };
    std::vector<Knot> knots;
    for (std::size_t i = 0; i < bps.size(); ++i) {
      const Scalar value = g(bps[i]);
      const Scalar q = ScalarTraits<Scalar>::floor(value / p);
      knots.push_back({value - q * p, bps[i] - q * p, Scalar(1) / slopes[i]});
    }
    std::sort(knots.begin(), knots.end(), [](const Knot& a, const Knot& b) { return a.at < b.at; });
    std::vector<Scalar> at, inv_slopes;
    for (const auto& k : knots) {
      at.push_back(k.at);
      inv_slopes.push_back(k.slope);
    }
    return PLHomeo<Scalar>::periodic(p, std::move(at), std::move(inv_slopes), knots.front().preimage);
  }
  if (bps.empty()) {
    const auto [a, b] = g.affine_coefficients();
    return PLHomeo<Scalar>::affine(Scalar(1) / a, -b / a);
  }
  std::vector<Scalar> at, inv_slopes;
  for (const auto& b : bps) at.push_back(g(b));
  for (const auto& s : slopes) inv_slopes.push_back(Scalar(1) / s);
  return PLHomeo<Scalar>::piecewise(std::move(at), std::move(inv_slopes), bps[0]);
}

namespace detail {

template <typename Scalar>
void merge_components(std::vector<FixedComponent<Scalar>>& comps) {
  auto lo_less = [](const FixedComponent<Scalar>& a, const FixedComponent<Scalar>& b) {
    if (!a.lo) return static_cast<bool>(b.lo);
    if (!b.lo) return false;
    return *a.lo < *b.lo;
  };
  std::sort(comps.begin(), comps.end(), lo_less);
  std::vector<FixedComponent<Scalar>> out;
  for (auto& c : comps) {
    if (!out.empty()) {
      auto& last = out.back();
      if (!last.hi || (c.lo && *c.lo <= *last.hi) || !c.lo) {
        if (last.hi && (!c.hi || *last.hi < *c.hi)) last.hi = c.hi;
        continue;
      }
    }
    out.push_back(std::move(c));
  }
  comps = std::move(out);
}

// Solutions of s (x - x_ref) + y_ref = x on a closed piece with optional ends.
template <typename Scalar>
void piece_fixed(const std::optional<Scalar>& lo, const std::optional<Scalar>& hi, const Scalar& slope,
                 const Scalar& x_ref, const Scalar& y_ref, std::vector<FixedComponent<Scalar>>& out) {
  const Scalar offset = y_ref - x_ref;
  if (slope == 1) {
    if (offset == 0) out.push_back({lo, hi});
    return;
  }
  const Scalar x = x_ref - offset / (slope - 1);
  if ((!lo || *lo <= x) && (!hi || x <= *hi)) out.push_back({x, x});
}

}  // namespace detail

template <typename Scalar>
FixedSet<Scalar> fixed_points(const PLHomeo<Scalar>& g) {
  FixedSet<Scalar> set;
  const auto bps = g.breakpoints();
  const auto slopes = g.slopes();
  if (g.is_affine()) {
    detail::piece_fixed<Scalar>(std::nullopt, std::nullopt, slopes[0], Scalar(0), g.anchor_value(),
                                set.components);
    return set;
  }
  if (g.is_periodic()) {
    set.period = g.period();
    set.origin = bps[0];
    for (std::size_t i = 0; i < bps.size(); ++i) {
      const Scalar next = (i + 1 < bps.size()) ? bps[i + 1] : bps[0] + g.period();
      detail::piece_fixed<Scalar>(bps[i], next, slopes[i], bps[i], g(bps[i]), set.components);
    }
    std::erase_if(set.components, [&](const FixedComponent<Scalar>& c) {
      return c.is_point() && *c.lo == bps[0] + g.period();
    });
    detail::merge_components(set.components);
    return set;
  }
  detail::piece_fixed<Scalar>(std::nullopt, bps[0], slopes[0], bps[0], g(bps[0]), set.components);
  for (std::size_t i = 0; i < bps.size(); ++i) {
    std::optional<Scalar> hi;
    if (i + 1 < bps.size()) hi = bps[i + 1];
    detail::piece_fixed<Scalar>(bps[i], hi, slopes[i + 1], bps[i], g(bps[i]), set.components);
  }
  detail::merge_components(set.components);
  return set;
}

/// Intersection of two non-periodic fixed sets.
template <typename Scalar>
FixedSet<Scalar> intersect(const FixedSet<Scalar>& a, const FixedSet<Scalar>& b) {
  if (a.is_periodic() || b.is_periodic())
    throw std::logic_error("intersect expects non-periodic sets; use common_fixed_set");
  FixedSet<Scalar> out;
  for (const auto& ca : a.components) {
    for (const auto& cb : b.components) {
      std::optional<Scalar> lo = ca.lo, hi = ca.hi;
      if (cb.lo && (!lo || *lo < *cb.lo)) lo = cb.lo;
      if (cb.hi && (!hi || *cb.hi < *hi)) hi = cb.hi;
      if (lo && hi && *hi < *lo) continue;
      out.components.push_back({lo, hi});
    }
  }
  detail::merge_components(out.components);
  return out;
}

/// Copies of a periodic set's components meeting [lo, hi], clipped to it.
template <typename Scalar>
FixedSet<Scalar> unroll(const FixedSet<Scalar>& set, const Scalar& lo, const Scalar& hi) {
  FixedSet<Scalar> out;
  if (!set.is_periodic()) throw std::logic_error("unroll expects a periodic set");
  Scalar shift = ScalarTraits<Scalar>::floor((lo - set.origin) / set.period) * set.period - set.period;
  for (; set.origin + shift <= hi; shift += set.period) {
    for (const auto& c : set.components) {
      Scalar clo = *c.lo + shift, chi = *c.hi + shift;
      if (clo < lo) clo = lo;
      if (hi < chi) chi = hi;
      if (clo <= chi) out.components.push_back({clo, chi});
    }
  }
  detail::merge_components(out.components);
  return out;
}

/// Points fixed by every map. Periodic sets must share one period. A ray of
/// the non-periodic part meeting a periodic part is clipped to one period, so
/// the result decides emptiness exactly but may under-report such rays.
template <typename Scalar>
FixedSet<Scalar> common_fixed_set(const std::vector<FixedSet<Scalar>>& sets) {
  std::optional<FixedSet<Scalar>> finite, periodic;
  for (const auto& s : sets) {
    if (s.empty()) return {};
    if (!s.is_periodic()) {
      finite = finite ? intersect(*finite, s) : s;
      if (finite->empty()) return {};
      continue;
    }
    if (!periodic) {
      periodic = s;
      continue;
    }
    if (periodic->period != s.period)
      throw std::domain_error("fixed sets with different periods are not supported");
    const Scalar lo = periodic->origin;
    const Scalar hi = lo + periodic->period;
    FixedSet<Scalar> both = intersect(unroll(*periodic, lo, hi), unroll(s, lo, hi));
    both.period = periodic->period;
    both.origin = lo;
    periodic = std::move(both);
    if (periodic->empty()) return {};
  }
  if (!periodic) return finite ? *finite : FixedSet<Scalar>{{{std::nullopt, std::nullopt}}};
  if (!finite) return *periodic;

  const Scalar p = periodic->period;
  FixedSet<Scalar> out;
  for (const auto& c : finite->components) {
    Scalar lo, hi;
    if (c.lo && c.hi) {
      lo = *c.lo;
      hi = *c.hi;
    } else if (c.hi) {
      lo = *c.hi - p;
      hi = *c.hi;
    } else if (c.lo) {
      lo = *c.lo;
      hi = *c.lo + p;
    } else {
      lo = periodic->origin;
      hi = lo + p;
    }
    auto part = unroll(*periodic, lo, hi);
    out.components.insert(out.components.end(), part.components.begin(), part.components.end());
  }
  detail::merge_components(out.components);
  return out;
}

/// Exact integral of g over [lo, hi].
template <typename Scalar>
Scalar integral(const PLHomeo<Scalar>& g, const Scalar& lo, const Scalar& hi) {
  if (!(lo < hi)) return Scalar(0);
  Scalar total = 0;
  Scalar x = lo, gx = g(lo);
  auto cuts = g.breakpoints_in(lo, hi);
  cuts.push_back(hi);
  for (const auto& next : cuts) {
    const Scalar gn = g(next);
    total += (next - x) * (gx + gn) / 2;
    x = next;
    gx = gn;
  }
  return total;
}

/// Area of {(x, y): x < c < y < g(x)}.
template <typename Scalar>
Scalar phi_half(const PLHomeo<Scalar>& g, const Scalar& c) {
  const Scalar lo = g.inverse_value(c);
  if (!(lo < c)) return Scalar(0);
  return integral(g, lo, c) - c * (c - lo);
}

/// Phi_g(c): area of {x < c < y < g(x)} together with {x < c < y < g^{-1}(x)};
/// `inverse` must be invert(g).
template <typename Scalar>
Scalar phi(const PLHomeo<Scalar>& g, const PLHomeo<Scalar>& inverse, const Scalar& c) {
  return phi_half(g, c) + phi_half(inverse, c);
}

template <typename Scalar>
Scalar phi(const PLHomeo<Scalar>& g, const Scalar& c) {
  return phi(g, invert(g), c);
}

/// |int_a^b [(g(x) - x) + (g^{-1}(x) - x)] dx - (Phi_g(b) - Phi_g(a))|.
template <typename Scalar>
Scalar phi_increment_residual(const PLHomeo<Scalar>& g, const Scalar& a, const Scalar& b) {
  if (!(a < b)) throw std::invalid_argument("phi_increment_residual needs a < b");
  const PLHomeo<Scalar> inverse = invert(g);
  const Scalar displacement = integral(g, a, b) + integral(inverse, a, b) - (b * b - a * a);
  const Scalar increment = phi(g, inverse, b) - phi(g, inverse, a);
  using std::abs;
  return abs(displacement - increment);
}

}  // namespace linewalk
