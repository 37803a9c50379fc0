#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "kwr/exact.hpp"
#include "kwr/relation.hpp"

namespace kwr {

// Computable model of the orbit closure: basis indices B, exact rationals
// c_j / b_{k,j} with theta_j = 2*pi*c_j + sum_k b_{k,j} theta_{B[k]}, the
// common denominator d, integer exponents h_{k,j} = d*b_{k,j} and
// l_j = d*c_j, and nu = (e^{i theta_1}, .., e^{i theta_r}). The closure is
// the union over a < d of nu^a H, H = image of (z_1..z_m) ->
// (prod_k z_k^{h_{k,j}})_j.
struct ClosureDescription {
  Mode mode = Mode::Discrete;
  int r = 0;
  int precision_bits = 256;
  std::vector<int> basis;              // ascending original indices (0-based), size m
  std::vector<Rat> c;                  // size r; zero on basis indices and in Continuous mode
  std::vector<std::vector<Rat>> b;     // m x r; b[k][basis[k]] = 1
  int64_t d = 1;
  std::vector<std::vector<int64_t>> h; // m x r; h[k][j] = d*b[k][j]
  std::vector<int64_t> l;              // size r; l[j] = d*c_j
  std::vector<Real> theta;             // copy of the angles
  std::vector<double> theta_d;
  std::vector<std::complex<double>> nu;
  bool degenerate = false;

  int m() const { return static_cast<int>(basis.size()); }

  // theta_i in pi*Q, decided from the exact decomposition (Discrete mode).
  bool angle_in_pi_q(int i) const;

  // Exact decomposition of e . theta as 2*pi*c + sum_k b_k theta_{B[k]}.
  std::pair<Rat, RatVec> decompose_combination(const std::vector<int64_t>& e) const;

  // nu_j^a as a double complex, with the phase reduced at high precision.
  std::complex<double> nu_pow(int j, int64_t a) const;
};

ClosureDescription extract_closure(const AngleSystem& sys, const RelationLattice& lat);

}  // namespace kwr
