#pragma once

#include "kwr/density.hpp"

namespace kwr {

// Closed-form first and second moments of f(nu^a Z) for degree-<=1
// conjugate-symmetric polynomials f = c + sum a_k X_k + conj(a_k) X_k^{-1}.
struct MomentReport {
  std::vector<double> mean;      // per coset a = 0..d-1
  std::vector<double> variance;  // per coset
  std::vector<int> nondegenerate;  // indices with theta_i not in pi*Q
  std::vector<int> degenerate;     // indices with theta_i in pi*Q

  struct PairRelation {
    int i, j;   // i < j, both nondegenerate
    int sign;   // +1: theta_i + theta_j in pi*Q; -1: theta_i - theta_j in pi*Q
  };
  std::vector<PairRelation> pair_relations;
};

// Raises UnsupportedRelationShape when the lattice carries a relation among
// nondegenerate angles that is not of the pair form theta_i +- theta_j in
// pi*Q (the closed forms are then not asserted; fall back to Monte Carlo).
MomentReport closed_form_moments(const LaurentPoly& f, const ClosureDescription& cd,
                                 const RelationLattice& lat);

// Adjacent pair (j, j+1) excluded from ties when on every coset the means or
// the variances separate; feeds existence certificates for degree-1 races.
std::vector<bool> moment_tie_exclusion(const RaceFunctions& rf, const ClosureDescription& cd,
                                       const RelationLattice& lat);

}  // namespace kwr
