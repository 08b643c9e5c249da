#include "linewalk/presets.hpp"

#include <cmath>
#include <stdexcept>

namespace linewalk {

namespace {

using R = Rational;
using Map = PLHomeo<R>;

GeneratorSystem<R> uniform_pairs(std::vector<std::pair<std::string, Map>> maps) {
  return GeneratorSystem<R>::symmetrized(maps);
}

std::vector<Preset> build_presets() {
  std::vector<Preset> out;
  out.push_back({"translations-discrete", "x+1 and x-1; every orbit is a translate of Z",
                 uniform_pairs({{"t", Map::translation(R(1))}})});
  out.push_back({"translations-minimal", "x+/-1 and x+/-sqrt(2); every orbit is dense",
                 uniform_pairs({{"t", Map::translation(R(1))}, {"s", Map::translation(sqrt2_dyadic())}})});
  out.push_back({"affine", "2x, x/2, x+1, x-1; expansion and translation in the affine group",
                 uniform_pairs({{"e", Map::affine(R(2), R(0))}, {"t", Map::translation(R(1))}})});
  out.push_back({"lifted-rotation", "x+/-1 and a PL lift of a circle map with an attracting fixed point",
                 uniform_pairs({{"t", Map::translation(R(1))}, {"l", circle_lift()}})});
  // Thompson's F acting on the line: B is the identity left of 0, x/2 on
  // [0, 2] and x - 1 right of 2.
  out.push_back({"thompson-like", "x+1 and a dyadic PL map with identity and translation tails",
                 uniform_pairs({{"a", Map::translation(R(1))},
                                {"b", Map::piecewise({R(0), R(2)}, {R(1), R(1, 2), R(1)}, R(0))}})});
  return out;
}

}  // namespace

Rational sqrt2_dyadic() { return ScalarTraits<Rational>::from_double(std::sqrt(2.0)); }

PLHomeo<Rational> circle_lift() {
  return PLHomeo<R>::periodic(R(1), {R(0), R(1, 4), R(1, 2), R(3, 4)},
                              {R(1, 2), R(3, 2), R(3, 2), R(1, 2)}, R(0));
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = build_presets();
  return all;
}

const Preset& preset(const std::string& name) {
  for (const auto& p : presets())
    if (p.name == name) return p;
  throw std::out_of_range("unknown preset '" + name + "'");
}

}  // namespace linewalk
