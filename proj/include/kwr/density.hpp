#pragma once

#include <optional>
#include <string>

#include "kwr/sampler.hpp"

namespace kwr {

struct RaceFunctions {
  std::vector<LaurentPoly> fs;  // ordered contestants, D >= 2, shared arity
  bool error_term_present = false;
  std::vector<std::string> names;  // optional labels

  int D() const { return static_cast<int>(fs.size()); }
  int r() const { return fs.empty() ? 0 : fs[0].r; }
  void validate() const;
  RaceFunctions permuted(const std::vector<int>& order) const;
};

enum class Existence { Exists, BoundsOnly };
enum class TieStatus { WitnessFound, LikelyTied };

struct CosetReport {
  std::vector<TieStatus> pair_status;   // D-1 adjacent pairs
  std::vector<int64_t> pair_witness;    // witness n, or -1
  double p_strict = 0;
  double p_weak = 0;
  double se_strict = 0;
  double se_weak = 0;
  double discarded_fraction = 0;
  bool exact = false;

  bool certified() const {
    for (TieStatus s : pair_status)
      if (s == TieStatus::LikelyTied) return false;
    return true;
  }
};

struct DensityReport {
  Existence existence = Existence::Exists;
  EstimateWithCI value;  // strict-ordering estimate; authoritative when Exists
  double lower = 0;      // valid bounds in either case
  double upper = 1;
  std::vector<CosetReport> per_coset;
  int64_t d = 1;
  std::optional<int64_t> positivity_witness;  // first strict-ordering n found
  // assumption ledger
  int precision_bits = 256;
  int64_t n_max = 0;
  // almost-periodic extras
  std::optional<int> truncation;
  std::optional<double> sensitivity;
};

// Per-adjacent-pair strictness tolerance: 2^-30 * (1 + |f_j| + |f_{j+1}|)
// in coefficient l1 mass.
std::vector<double> pair_tolerances(const RaceFunctions& rf);

// Asymptotic density of {n : F_1(n) > ... > F_D(n)} for the given contestant
// order. Exact in the degenerate case, per-coset Monte Carlo otherwise; coset
// tie certificates come from the vanishing scan with the given n_max.
DensityReport density_discrete(const RaceFunctions& rf, const ClosureDescription& cd,
                               const SamplerConfig& cfg, int64_t n_max = -1);

// Continuous analogue (single coset, tie scan on a y-grid).
DensityReport density_continuous(const RaceFunctions& rf, const ClosureDescription& cd,
                                 const SamplerConfig& cfg, double y_max = -1.0);

// Finite-X truncation of the defining counting function; the oracle side of
// the agreement checks. stderr is the iid binomial proxy sqrt(p(1-p)/X).
EstimateWithCI empirical_density(const RaceFunctions& rf, const AngleSystem& sys, double X);

struct PositivityReport {
  std::optional<int64_t> strict_n;     // F_1(n) > ... > F_D(n) beyond tolerance
  std::optional<int64_t> violation_n;  // weak ordering fails beyond tolerance
  std::optional<double> strict_y;      // continuous grid hits
  std::optional<double> violation_y;
  bool none_found() const {
    return !strict_n && !violation_n && !strict_y && !violation_y;
  }
};

// Scan n <= n_max (integers; a y-grid in Continuous mode) for a strict
// witness (certifies lower density > 0) and a weak-ordering violation
// (certifies upper density < 1).
PositivityReport positivity_check(const RaceFunctions& rf, const ClosureDescription& cd,
                                  int64_t n_max);

}  // namespace kwr
