#pragma once

// Finitely supported symmetric measures on PL homeomorphisms: the generator
// list with weights, the inverse pairing, the standing-hypothesis checks and
// the exact drift / Phi_mu calculus.

#include "linewalk/pl_homeo.hpp"
#include "linewalk/random.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace linewalk {

template <typename Scalar>
struct Generator {
  std::string name;
  PLHomeo<Scalar> map;
  Scalar weight;
};

template <typename Scalar>
class GeneratorSystem {
 public:
  GeneratorSystem() = default;

  /// pairing[i] is the index of the inverse of generator i (an involution).
  GeneratorSystem(std::vector<Generator<Scalar>> generators, std::vector<std::size_t> pairing)
      : gens_(std::move(generators)), pair_(std::move(pairing)) {
    if (pair_.size() != gens_.size())
      throw std::invalid_argument("pairing must list one partner per generator");
    for (std::size_t i = 0; i < pair_.size(); ++i) {
      if (pair_[i] >= gens_.size()) throw std::invalid_argument("pairing index out of range");
      if (pair_[pair_[i]] != i) throw std::invalid_argument("pairing must be an involution");
    }
  }

  /// From explicit pairs [i, j]; every index must occur in exactly one pair.
  static GeneratorSystem from_pairs(std::vector<Generator<Scalar>> generators,
                                    const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> pairing(generators.size(), unset);
    for (const auto& [i, j] : pairs) {
      if (i >= generators.size() || j >= generators.size())
        throw std::invalid_argument("pair index out of range");
      if (pairing[i] != unset || pairing[j] != unset)
        throw std::invalid_argument("generator listed in more than one pair");
      pairing[i] = j;
      pairing[j] = i;
    }
    for (std::size_t i = 0; i < pairing.size(); ++i)
      if (pairing[i] == unset)
        throw std::invalid_argument("generator " + std::to_string(i) + " has no inverse pair");
    return GeneratorSystem(std::move(generators), std::move(pairing));
  }

  /// Pairs each generator with an appended inverse; weights are split evenly.
  static GeneratorSystem symmetrized(const std::vector<std::pair<std::string, PLHomeo<Scalar>>>& maps) {
    std::vector<Generator<Scalar>> gens;
    std::vector<std::size_t> pairing;
    const Scalar w = Scalar(1) / Scalar(static_cast<long>(2 * maps.size()));
    for (std::size_t i = 0; i < maps.size(); ++i) {
      gens.push_back({maps[i].first, maps[i].second, w});
      gens.push_back({maps[i].first + "^-1", invert(maps[i].second), w});
      pairing.push_back(2 * i + 1);
      pairing.push_back(2 * i);
    }
    return GeneratorSystem(std::move(gens), std::move(pairing));
  }

  std::size_t size() const { return gens_.size(); }
  bool empty() const { return gens_.empty(); }
  const Generator<Scalar>& generator(std::size_t i) const { return gens_.at(i); }
  const PLHomeo<Scalar>& map(std::size_t i) const { return gens_.at(i).map; }
  const Scalar& weight(std::size_t i) const { return gens_.at(i).weight; }
  std::size_t pair(std::size_t i) const { return pair_.at(i); }
  const std::vector<Generator<Scalar>>& generators() const { return gens_; }
  const std::vector<std::size_t>& pairing() const { return pair_; }

  template <typename To>
  GeneratorSystem<To> cast() const {
    std::vector<Generator<To>> out;
    out.reserve(gens_.size());
    for (const auto& g : gens_) out.push_back({g.name, g.map.template cast<To>(), scalar_cast<To>(g.weight)});
    return GeneratorSystem<To>(std::move(out), pair_);
  }

 private:
  std::vector<Generator<Scalar>> gens_;
  std::vector<std::size_t> pair_;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  std::optional<double> common_fixed_point;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return !checks.empty();
  }
  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
  std::string summary() const {
    std::ostringstream os;
    for (const auto& c : checks)
      os << (c.passed ? "pass " : "FAIL ") << c.name << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
    return os.str();
  }
};

namespace detail {

template <typename Scalar>
bool maps_match(const PLHomeo<Scalar>& a, const PLHomeo<Scalar>& b, double tolerance) {
  if constexpr (ScalarTraits<Scalar>::is_exact) {
    (void)tolerance;
    return a == b;
  } else {
    std::vector<double> probes{-1e3, -1.0, 0.0, 1.0, 1e3};
    for (auto x : a.breakpoints()) probes.push_back(x);
    for (auto x : b.breakpoints()) probes.push_back(x);
    for (double x : probes) {
      if (std::abs(a(x) - b(x)) > tolerance * (1.0 + std::abs(x))) return false;
    }
    return a.is_periodic() == b.is_periodic();
  }
}

}  // namespace detail

/// Checks the standing hypotheses: nonempty finite support, positive weights
/// summing to one, mu(g) = mu(g^{-1}) with exact inverse pairs, and no point
/// fixed by every generator. `tolerance` applies to inexact scalars only.
template <typename Scalar>
ValidationReport validate(const GeneratorSystem<Scalar>& system, double tolerance = 1e-9) {
  ValidationReport report;
  if (system.empty()) {
    report.checks.push_back({"nonempty", false, "system has no generators"});
    return report;
  }
  report.checks.push_back({"nonempty", true, std::to_string(system.size()) + " generators"});

  {
    CheckResult c{"weights positive", true, ""};
    for (std::size_t i = 0; i < system.size(); ++i) {
      if (!(system.weight(i) > 0)) {
        c.passed = false;
        c.detail = "generator '" + system.generator(i).name + "' has weight " +
                   ScalarTraits<Scalar>::to_string(system.weight(i));
        break;
      }
    }
    report.checks.push_back(c);
  }
  {
    Scalar total = 0;
    for (std::size_t i = 0; i < system.size(); ++i) total += system.weight(i);
    bool ok;
    if constexpr (ScalarTraits<Scalar>::is_exact) {
      ok = total == 1;
    } else {
      ok = std::abs(total - 1.0) <= tolerance;
    }
    report.checks.push_back({"weights sum to one", ok, "sum = " + ScalarTraits<Scalar>::to_string(total)});
  }
  {
    CheckResult w{"symmetric weights", true, ""};
    CheckResult m{"inverse pairs", true, ""};
    for (std::size_t i = 0; i < system.size(); ++i) {
      const std::size_t j = system.pair(i);
      if (j < i) continue;
      bool weights_equal;
      if constexpr (ScalarTraits<Scalar>::is_exact) {
        weights_equal = system.weight(i) == system.weight(j);
      } else {
        weights_equal = std::abs(system.weight(i) - system.weight(j)) <= tolerance;
      }
      if (!weights_equal && w.passed) {
        w.passed = false;
        w.detail = "mu(" + system.generator(i).name + ") = " + ScalarTraits<Scalar>::to_string(system.weight(i)) +
                   " but mu(" + system.generator(j).name + ") = " + ScalarTraits<Scalar>::to_string(system.weight(j));
      }
      if (m.passed) {
        bool ok = true;
        try {
          ok = detail::maps_match(invert(system.map(i)), system.map(j), tolerance);
        } catch (const std::exception&) {
          ok = false;
        }
        if (!ok) {
          m.passed = false;
          m.detail = "'" + system.generator(j).name + "' is not the inverse of '" + system.generator(i).name + "'";
        }
      }
    }
    report.checks.push_back(w);
    report.checks.push_back(m);
  }
  {
    CheckResult c{"irreducible", true, ""};
    try {
      std::vector<FixedSet<Scalar>> sets;
      for (std::size_t i = 0; i < system.size(); ++i) sets.push_back(fixed_points(system.map(i)));
      const auto common = common_fixed_set(sets);
      if (!common.empty()) {
        c.passed = false;
        const auto w = common.witness();
        report.common_fixed_point = to_double(*w);
        c.detail = "common fixed point " + ScalarTraits<Scalar>::to_string(*w);
      }
    } catch (const std::domain_error& e) {
      c.passed = false;
      c.detail = e.what();
    }
    report.checks.push_back(c);
  }
  return report;
}

/// Throws std::invalid_argument carrying the report when validation fails.
template <typename Scalar>
void require_valid(const GeneratorSystem<Scalar>& system, double tolerance = 1e-9) {
  const auto report = validate(system, tolerance);
  if (!report.passed()) throw std::invalid_argument("generator system rejected:\n" + report.summary());
}

/// g_n o ... o g_1 for the word [1st letter, ..., nth letter].
template <typename Scalar>
PLHomeo<Scalar> compose_word(const GeneratorSystem<Scalar>& system, std::span<const std::size_t> word) {
  PLHomeo<Scalar> f = PLHomeo<Scalar>::identity();
  for (std::size_t i : word) f = compose(system.map(i), f);
  return f;
}

/// K = [A, B] with g(A) < B for every generator.
template <typename Scalar>
Interval<Scalar> recurrence_interval(const GeneratorSystem<Scalar>& system, const Scalar& a = Scalar(0),
                                     const Scalar& margin = Scalar(1) / Scalar(1000)) {
  if (system.empty()) throw std::invalid_argument("recurrence_interval needs generators");
  Scalar top = a;
  for (std::size_t i = 0; i < system.size(); ++i) {
    const Scalar v = system.map(i)(a);
    if (top < v) top = v;
  }
  return {a, top + margin};
}

/// sum_g mu(g) (g(x) - x).
template <typename Scalar>
Scalar drift_at(const GeneratorSystem<Scalar>& system, const Scalar& x) {
  Scalar d = 0;
  for (std::size_t i = 0; i < system.size(); ++i) d += system.weight(i) * (system.map(i)(x) - x);
  return d;
}

/// sum_g mu(g) Phi_g(c), using the pairing for g^{-1}.
template <typename Scalar>
Scalar phi_mu(const GeneratorSystem<Scalar>& system, const Scalar& c) {
  Scalar total = 0;
  for (std::size_t i = 0; i < system.size(); ++i)
    total += system.weight(i) * phi(system.map(i), system.map(system.pair(i)), c);
  return total;
}

/// max over the grid of |drift|.
template <typename Scalar>
Scalar derriennic_residual(const GeneratorSystem<Scalar>& system, std::span<const Scalar> grid) {
  Scalar worst = 0;
  for (const auto& x : grid) {
    using std::abs;
    const Scalar d = abs(drift_at(system, x));
    if (worst < d) worst = d;
  }
  return worst;
}

/// Draws generator indices i.i.d. from the system's weights.
class LetterSampler {
 public:
  LetterSampler() = default;
  template <typename Scalar>
  explicit LetterSampler(const GeneratorSystem<Scalar>& system) {
    double acc = 0;
    for (std::size_t i = 0; i < system.size(); ++i) {
      acc += to_double(system.weight(i));
      cumulative_.push_back(acc);
    }
    for (auto& c : cumulative_) c /= acc;
  }

  std::size_t operator()(double u) const {
    std::size_t i = 0;
    while (i + 1 < cumulative_.size() && u >= cumulative_[i]) ++i;
    return i;
  }
  std::size_t operator()(RandomStream& stream) const { return (*this)(stream.uniform()); }

 private:
  std::vector<double> cumulative_;
};

template <typename Scalar>
std::size_t sample_letter(const GeneratorSystem<Scalar>& system, RandomStream& stream) {
  return LetterSampler(system)(stream);
}

}  // namespace linewalk
