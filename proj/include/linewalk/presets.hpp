#pragma once

#include "linewalk/generator_system.hpp"

#include <string>
#include <vector>

namespace linewalk {

struct Preset {
  std::string name;
  std::string description;
  GeneratorSystem<Rational> system;
};

/// The named scenarios, each with uniform symmetric weights.
const std::vector<Preset>& presets();

/// Throws std::out_of_range for unknown names.
const Preset& preset(const std::string& name);

/// The lift used by the lifted-rotation preset: commutes with x + 1, fixes
/// Z and 1/2 + Z, attracting at Z.
PLHomeo<Rational> circle_lift();

/// Dyadic rational equal to the double nearest sqrt(2).
Rational sqrt2_dyadic();

}  // namespace linewalk
