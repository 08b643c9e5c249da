#include "linewalk/serialize.hpp"

#include "linewalk/csv.hpp"

#include <cmath>

namespace linewalk {

Json scalar_to_json(const Rational& x) {
  if (boost::multiprecision::denominator(x) == 1) {
    const BigInt& n = boost::multiprecision::numerator(x);
    if (n >= std::numeric_limits<long long>::min() && n <= std::numeric_limits<long long>::max())
      return n.convert_to<long long>();
  }
  return ScalarTraits<Rational>::to_string(x);
}

Json scalar_to_json(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite value has no JSON form");
  return x;
}

Rational rational_from_json(const Json& j, const std::string& path) {
  try {
    if (j.is_number_integer()) return j.is_number_unsigned() ? Rational(j.get<unsigned long long>()) : Rational(j.get<long long>());
    if (j.is_number_float()) return parse_rational(format_number(j.get<double>()));
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(path, "expected a number or a string such as \"3/4\"");
}

double double_from_json(const Json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return to_double(rational_from_json(j, path));
  throw ConfigError(path, "expected a number");
}

const Json& require_field(const Json& j, const std::string& path, const std::string& key) {
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError(join_path(path, key), "missing field");
  return *it;
}

std::string join_path(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

Json test_function_to_json(const TestFunction& f) {
  return {{"type", "nodes"}, {"x", f.nodes()}, {"y", f.values()}};
}

TestFunction test_function_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected a test function object");
  const Json& type = require_field(j, path, "type");
  if (!type.is_string()) throw ConfigError(join_path(path, "type"), "expected a string");
  const std::string t = type.get<std::string>();
  auto num = [&](const char* key) { return double_from_json(require_field(j, path, key), join_path(path, key)); };
  auto list = [&](const char* key) {
    const Json& a = require_field(j, path, key);
    if (!a.is_array()) throw ConfigError(join_path(path, key), "expected an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(double_from_json(a[i], index_path(join_path(path, key), i)));
    return out;
  };
  auto only = [&](std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : j.items()) {
      bool known = false;
      for (const char* key : keys) known = known || k == key;
      if (!known) throw ConfigError(join_path(path, k), "unknown field for a " + t + " function");
    }
  };
  try {
    if (t == "hat") {
      only({"type", "center", "half_width"});
      return TestFunction::hat(num("center"), num("half_width"));
    }
    if (t == "trapezoid") {
      only({"type", "a", "b", "ramp"});
      return TestFunction::trapezoid(num("a"), num("b"), num("ramp"));
    }
    if (t == "nodes") {
      only({"type", "x", "y"});
      return TestFunction(list("x"), list("y"));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(join_path(path, "type"), "unknown test function type '" + t + "'");
}

}  // namespace linewalk
