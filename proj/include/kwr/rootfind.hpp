#pragma once

#include <vector>

#include "kwr/mp.hpp"

namespace kwr {

struct PolyRoot {
  MpComplex z;
  int multiplicity;
};

// Squarefree decomposition over Q: p = prod f_k^k (Yun). Returns the list of
// (primitive integer factor, exponent k) with nonconstant factors only.
std::vector<std::pair<std::vector<Int>, int>> squarefree_decompose(std::vector<Int> p);

// All complex roots of an integer polynomial with exact multiplicities
// (from the squarefree decomposition), each refined to `bits` precision.
// Coefficients are c[0] + c[1] u + ... + c[deg] u^deg.
std::vector<PolyRoot> integer_poly_roots(const std::vector<Int>& coeffs, int bits);

// Exact order of vanishing at u = sign / sqrt(q) (sign = +-1, q not a
// perfect square), via arithmetic in Q(sqrt q).
int order_at_sqrt_inv(const std::vector<Int>& coeffs, int64_t q, int sign);

}  // namespace kwr
