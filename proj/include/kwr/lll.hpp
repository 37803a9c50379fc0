#pragma once

#include "kwr/exact.hpp"

namespace kwr {

// In-place LLL reduction (delta = 99/100) of the lattice spanned by the rows.
// Exact rational Gram-Schmidt; rows must be linearly independent.
void lll_reduce(IntMat& basis);

}  // namespace kwr
