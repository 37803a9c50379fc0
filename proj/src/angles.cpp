#include "kwr/angles.hpp"

#include <cmath>
#include <fstream>

namespace kwr {

AngleSystem AngleSystem::make(Mode mode, std::vector<Real> angles, int precision_bits) {
  if (angles.empty()) throw DimensionMismatch("need at least one angle");
  if (precision_bits < 128) throw Error("precision_bits must be >= 128", 1);
  PrecisionGuard guard(precision_bits);
  Real sep = ldexp(Real(1), -precision_bits / 2);
  for (size_t i = 0; i < angles.size(); ++i) {
    if (!mpfr_number_p(angles[i].backend().data()))
      throw ParseError("angle " + std::to_string(i + 1) + " is not finite");
    for (size_t j = 0; j < i; ++j)
      if (abs(angles[i] - angles[j]) < sep)
        throw Error("angles " + std::to_string(j + 1) + " and " + std::to_string(i + 1) +
                        " coincide at working precision",
                    1);
  }
  AngleSystem sys;
  sys.mode = mode;
  sys.precision_bits = precision_bits;
  sys.angles = std::move(angles);
  sys.angles_d.reserve(sys.angles.size());
  for (const Real& a : sys.angles) sys.angles_d.push_back(static_cast<double>(a));
  return sys;
}

namespace {

Real parse_angle_entry(const nlohmann::json& e) {
  if (e.is_string()) return parse_real(e.get<std::string>());
  if (e.is_number()) return Real(e.get<double>());
  if (e.is_object()) {
    if (e.contains("pi_multiple")) {
      Rat q = parse_rat(e["pi_multiple"].get<std::string>());
      return mp_pi() * Real(numerator(q)) / Real(denominator(q));
    }
    if (e.contains("arg_of")) {
      const auto& z = e["arg_of"];
      Real re = parse_real(z.at("re").get<std::string>());
      Real im = parse_real(z.at("im").get<std::string>());
      return atan2(im, re);
    }
  }
  throw ParseError("unrecognized angle entry: " + e.dump());
}

}  // namespace

AngleSystem AngleSystem::from_json(const nlohmann::json& j, int precision_bits) {
  PrecisionGuard guard(precision_bits);
  Mode mode = Mode::Discrete;
  if (j.contains("mode")) {
    std::string m = j["mode"].get<std::string>();
    if (m == "discrete")
      mode = Mode::Discrete;
    else if (m == "continuous")
      mode = Mode::Continuous;
    else
      throw ParseError("mode must be 'discrete' or 'continuous', got '" + m + "'");
  }
  if (!j.contains("angles") || !j["angles"].is_array())
    throw ParseError("angle file needs an 'angles' array");
  std::vector<Real> angles;
  for (const auto& e : j["angles"]) angles.push_back(parse_angle_entry(e));
  return make(mode, std::move(angles), precision_bits);
}

AngleSystem AngleSystem::from_file(const std::string& path, int precision_bits) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open angle file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& ex) {
    throw ParseError("invalid JSON in '" + path + "': " + ex.what());
  }
  return from_json(j, precision_bits);
}

}  // namespace kwr
