#pragma once

#include <optional>
#include <vector>

#include "kwr/mp.hpp"

namespace kwr {

using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;  // row major
using IntVec = std::vector<Int>;
using IntMat = std::vector<IntVec>;

// Solve A x = b exactly over Q (A given row major, columns = unknowns).
// Returns nullopt when the system is inconsistent. When the solution is not
// unique an arbitrary member of the solution set is returned (free variables
// set to zero).
std::optional<RatVec> solve_linear(RatMat A, RatVec b);

int rank(RatMat A);

// Row-style Hermite normal form of the lattice spanned by the rows.
// Zero rows are dropped; pivots are positive and entries above a pivot are
// reduced into [0, pivot). The result is a canonical basis of the row lattice.
IntMat hnf(IntMat rows);

// Basis of the integer kernel {u : A u = 0}. Kernel lattices are saturated.
IntMat integer_kernel(const IntMat& A);

// Basis of the saturation of the row lattice: (Q-span of rows) intersected
// with Z^n. Returned in HNF.
IntMat saturate(const IntMat& rows);

Int ivec_gcd(const IntVec& v);

}  // namespace kwr
