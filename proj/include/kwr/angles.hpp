#pragma once

#include <string>
#include <vector>

#include "kwr/mp.hpp"

#include "json.hpp"

namespace kwr {

enum class Mode { Discrete, Continuous };

inline const char* mode_name(Mode m) { return m == Mode::Discrete ? "discrete" : "continuous"; }

// The raw angles theta_1..theta_r. In Discrete mode an implicit 0-th
// coordinate 2*pi participates in all relation vectors.
struct AngleSystem {
  Mode mode = Mode::Discrete;
  std::vector<Real> angles;     // working precision
  std::vector<double> angles_d; // mirrors for sampling paths
  int precision_bits = 256;

  int r() const { return static_cast<int>(angles.size()); }

  static AngleSystem make(Mode mode, std::vector<Real> angles, int precision_bits);

  // Accepted entry forms: decimal string, {"pi_multiple":"p/q"},
  // {"arg_of":{"re":"...","im":"..."}}.
  static AngleSystem from_json(const nlohmann::json& j, int precision_bits);
  static AngleSystem from_file(const std::string& path, int precision_bits);
};

}  // namespace kwr
