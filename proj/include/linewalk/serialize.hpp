#pragma once

// JSON form of PL maps, generator systems and test functions. Readers report
// the offending field as a path such as "system.generators[2].map.slopes[1]".

#include "linewalk/generator_system.hpp"
#include "linewalk/measure.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace linewalk {

using Json = nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Exact values are written as strings ("3/4"); doubles as JSON numbers.
Json scalar_to_json(const Rational& x);
Json scalar_to_json(double x);

/// Accepts integers, strings "p/q" or decimal literals, and JSON decimals,
/// which are read by their shortest decimal spelling (0.1 is 1/10).
Rational rational_from_json(const Json& j, const std::string& path);
double double_from_json(const Json& j, const std::string& path);

template <typename Scalar>
Scalar scalar_from_json(const Json& j, const std::string& path) {
  if constexpr (std::is_same_v<Scalar, double>)
    return double_from_json(j, path);
  else
    return rational_from_json(j, path);
}

/// Field `key` of object `j`, or a ConfigError naming `path.key`.
const Json& require_field(const Json& j, const std::string& path, const std::string& key);
std::string join_path(const std::string& path, const std::string& key);
std::string index_path(const std::string& path, std::size_t i);

/// Recognizes {"type": "identity"}, {"type": "translation", "by"},
/// {"type": "affine", "slope", "offset"},
/// {"type": "piecewise", "breakpoints", "slopes", "value"} with value = g(b_0)
/// and slopes[0] the left tail, and
/// {"type": "periodic", "period", "breakpoints", "slopes", "value"}.
template <typename Scalar>
Json map_to_json(const PLHomeo<Scalar>& g) {
  auto list = [](auto span) {
    Json a = Json::array();
    for (const auto& v : span) a.push_back(scalar_to_json(v));
    return a;
  };
  if (g.is_translation()) return {{"type", "translation"}, {"by", scalar_to_json(g.anchor_value())}};
  if (g.is_affine()) {
    const auto [a, b] = g.affine_coefficients();
    return {{"type", "affine"}, {"slope", scalar_to_json(a)}, {"offset", scalar_to_json(b)}};
  }
  Json out = {{"type", g.is_periodic() ? "periodic" : "piecewise"},
              {"breakpoints", list(g.breakpoints())},
              {"slopes", list(g.slopes())},
              {"value", scalar_to_json(g.anchor_value())}};
  if (g.is_periodic()) out["period"] = scalar_to_json(g.period());
  return out;
}

template <typename Scalar>
PLHomeo<Scalar> map_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected a map object");
  const Json& type = require_field(j, path, "type");
  if (!type.is_string()) throw ConfigError(join_path(path, "type"), "expected a string");
  const std::string t = type.get<std::string>();
  auto scalar = [&](const std::string& key) { return scalar_from_json<Scalar>(require_field(j, path, key), join_path(path, key)); };
  auto list = [&](const std::string& key) {
    const Json& a = require_field(j, path, key);
    const std::string p = join_path(path, key);
    if (!a.is_array()) throw ConfigError(p, "expected an array");
    std::vector<Scalar> out;
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(scalar_from_json<Scalar>(a[i], index_path(p, i)));
    return out;
  };
  auto only = [&](std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : j.items()) {
      bool known = false;
      for (const char* key : keys) known = known || k == key;
      if (!known) throw ConfigError(join_path(path, k), "unknown field for a " + t + " map");
    }
  };
  try {
    if (t == "identity") {
      only({"type"});
      return PLHomeo<Scalar>::identity();
    }
    if (t == "translation") {
      only({"type", "by"});
      return PLHomeo<Scalar>::translation(scalar("by"));
    }
    if (t == "affine") {
      only({"type", "slope", "offset"});
      return PLHomeo<Scalar>::affine(scalar("slope"), scalar("offset"));
    }
    if (t == "piecewise") {
      only({"type", "breakpoints", "slopes", "value"});
      return PLHomeo<Scalar>::piecewise(list("breakpoints"), list("slopes"), scalar("value"));
    }
    if (t == "periodic") {
      only({"type", "period", "breakpoints", "slopes", "value"});
      return PLHomeo<Scalar>::periodic(scalar("period"), list("breakpoints"), list("slopes"), scalar("value"));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(join_path(path, "type"), "unknown map type '" + t + "'");
}

/// {"generators": [{"name", "map", "weight"}], "pairs": [[i, j], ...]}.
template <typename Scalar>
Json system_to_json(const GeneratorSystem<Scalar>& system) {
  Json gens = Json::array();
  for (const auto& g : system.generators())
    gens.push_back({{"name", g.name}, {"map", map_to_json(g.map)}, {"weight", scalar_to_json(g.weight)}});
  Json pairs = Json::array();
  for (std::size_t i = 0; i < system.size(); ++i)
    if (i <= system.pair(i)) pairs.push_back({i, system.pair(i)});
  return {{"generators", gens}, {"pairs", pairs}};
}

template <typename Scalar>
GeneratorSystem<Scalar> system_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected a system object");
  for (const auto& [k, v] : j.items())
    if (k != "generators" && k != "pairs") throw ConfigError(join_path(path, k), "unknown field");
  const std::string gpath = join_path(path, "generators");
  const Json& gens = require_field(j, path, "generators");
  if (!gens.is_array() || gens.empty()) throw ConfigError(gpath, "expected a nonempty array");
  std::vector<Generator<Scalar>> out;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const std::string p = index_path(gpath, i);
    const Json& g = gens[i];
    if (!g.is_object()) throw ConfigError(p, "expected a generator object");
    for (const auto& [k, v] : g.items())
      if (k != "name" && k != "map" && k != "weight") throw ConfigError(join_path(p, k), "unknown field");
    const Json& name = require_field(g, p, "name");
    if (!name.is_string()) throw ConfigError(join_path(p, "name"), "expected a string");
    out.push_back({name.get<std::string>(), map_from_json<Scalar>(require_field(g, p, "map"), join_path(p, "map")),
                   scalar_from_json<Scalar>(require_field(g, p, "weight"), join_path(p, "weight"))});
  }
  const std::string ppath = join_path(path, "pairs");
  const Json& pairs = require_field(j, path, "pairs");
  if (!pairs.is_array()) throw ConfigError(ppath, "expected an array of index pairs");
  std::vector<std::pair<std::size_t, std::size_t>> idx;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const Json& p = pairs[i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number_unsigned() || !p[1].is_number_unsigned())
      throw ConfigError(index_path(ppath, i), "expected [i, j] with generator indices");
    idx.emplace_back(p[0].get<std::size_t>(), p[1].get<std::size_t>());
  }
  try {
    return GeneratorSystem<Scalar>::from_pairs(std::move(out), idx);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(ppath, e.what());
  }
}

/// {"type": "hat", "center", "half_width"}, {"type": "trapezoid", "a", "b",
/// "ramp"} or {"type": "nodes", "x", "y"}; written in the nodes form.
Json test_function_to_json(const TestFunction& f);
TestFunction test_function_from_json(const Json& j, const std::string& path);

}  // namespace linewalk
