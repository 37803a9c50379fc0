#pragma once

#include <map>
#include <optional>
#include <string>

#include "kwr/density.hpp"
#include "kwr/rootfind.hpp"

#include "json.hpp"

namespace kwr {

// Function-field race data: group classes, character table, L-polynomials
// per nontrivial character, and optional oracle inputs.
struct RaceSpec {
  int64_t q = 0;
  std::vector<std::string> class_names;     // identity class first
  std::vector<int64_t> class_sizes;
  std::vector<std::string> char_names;      // row labels; trivial first
  std::vector<std::vector<Cplx>> char_table;  // rows = characters
  std::vector<int> class_square_map;          // class idx -> class of squares
  std::vector<std::vector<int64_t>> lpolys;   // per char; trivial row empty
  std::optional<std::vector<int64_t>> zeta_numerator;
  std::vector<int> contestants;               // class indices, race order
  // oracle inputs
  std::vector<std::vector<int64_t>> defining_poly;        // X-power -> F_q[t] coeffs
  std::map<std::vector<int>, int> frobenius_patterns;     // sorted factor degrees -> class
  std::optional<int> infinite_place_class;
  int genus = 0;
  int precision_bits = 256;
  double dedup_tol_scale = 0x1.0p-30;

  int n_classes() const { return static_cast<int>(class_names.size()); }
  int n_chars() const { return static_cast<int>(char_names.size()); }
  int64_t group_order() const;
  int class_index(const std::string& name) const;
  int64_t class_sqrt_count(int c) const;  // #(C^{1/2})

  void validate() const;
  static RaceSpec from_json(const nlohmann::json& j, int precision_bits = 256);
  static RaceSpec from_file(const std::string& path, int precision_bits = 256);
};

// Deduplicated positive-imaginary inverse zeros across the nontrivial
// characters, plus exact vanishing orders at u = +-q^{-1/2}.
struct ZeroRegistry {
  std::vector<MpComplex> gamma;            // |gamma| = sqrt(q), Im > 0
  std::vector<Real> theta;                 // arg gamma in (0, pi)
  std::vector<std::map<int, int>> mult;    // zero -> (char idx -> order)
  std::vector<int> ord_plus;               // per char: order at u = +q^{-1/2}
  std::vector<int> ord_minus;              // per char: order at u = -q^{-1/2}
};

// All inverse zeros gamma = 1/u of 1 + c_1 u + ... with multiplicity; each
// checked against |gamma| = sqrt(q) within tol*sqrt(q) (RHViolation).
std::vector<PolyRoot> lpoly_inverse_zeros(const std::vector<int64_t>& coeffs, int64_t q,
                                          double tol = 0x1.0p-30, int bits = 256);

// Collect, deduplicate and register the zeros; the angle system is
// (theta_1, .., theta_r, pi) in Discrete mode.
std::pair<AngleSystem, ZeroRegistry> angles_from_spec(const RaceSpec& spec);

struct ExplicitFormulaCoeffs {
  std::vector<Rat> r_C;                  // per class
  std::vector<double> z_C;
  std::vector<double> a_pi;
  std::vector<std::vector<Cplx>> a;      // zero j -> per-class a_j(C)
};

ExplicitFormulaCoeffs explicit_coeffs(const RaceSpec& spec, const ZeroRegistry& reg);

struct BuiltRace {
  RaceFunctions rf;         // one function per contestant, arity r+1
  AngleSystem sys;
  RelationLattice lat;
  ClosureDescription cd;
  ZeroRegistry reg;
  ExplicitFormulaCoeffs coeffs;
};

BuiltRace build_race(const RaceSpec& spec, int64_t max_coeff = 10000);

// Cumulative variant (prime divisors of degree <= n) with zero weights
// gamma/(gamma-1); includes zeta-numerator zeros when the genus is positive.
BuiltRace build_cumulative_race(const RaceSpec& spec, int64_t max_coeff = 10000);

}  // namespace kwr
