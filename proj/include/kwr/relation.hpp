#pragma once

#include <cstdint>
#include <vector>

#include "kwr/angles.hpp"

namespace kwr {

// Verified integer linear relations among (2*pi, theta_1..theta_r) in
// Discrete mode (slot 0 holds the 2*pi coefficient) or among the angles alone
// in Continuous mode. Vectors are primitive and linearly independent; the set
// is canonicalized as the HNF basis of the saturated detected lattice.
struct RelationLattice {
  std::vector<std::vector<int64_t>> relations;
  int precision_bits = 256;
  int64_t max_coeff = 10000;

  int vec_len(const AngleSystem& sys) const {
    return sys.mode == Mode::Discrete ? sys.r() + 1 : sys.r();
  }
  int rank() const { return static_cast<int>(relations.size()); }
};

// true iff |v . x| < 2^(-precision_bits/2) * ||v||_1 * max(|theta|, 2*pi)
// where x = (2*pi, theta) in Discrete mode and x = theta otherwise.
bool verify_relation(const AngleSystem& sys, const std::vector<int64_t>& v, int precision_bits);

// LLL on the scaled angle vector, followed by exact re-verification of every
// candidate. A candidate whose normalized residual falls inside the ambiguous
// band [2^(-p/2), 2^(-p/4)] raises PrecisionTooLow.
RelationLattice detect_relations(const AngleSystem& sys, int64_t max_coeff = 10000,
                                 int precision_bits = 256);

}  // namespace kwr
