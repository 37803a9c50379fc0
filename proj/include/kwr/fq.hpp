#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kwr/errors.hpp"

namespace kwr {
namespace fq {

// Dense arithmetic over F_q[t] for small prime q, tuned for the prime
// enumeration kernel. Residue-ring elements live in fixed uint16 arrays so
// the convolution loops vectorize.
constexpr int kMaxN = 16;  // supported modulus degree (exclusive)

struct Elem {
  uint16_t c[kMaxN] = {0};  // coefficients, reduced mod q, degree < n
};

bool is_prime_int(int64_t q);

// Fixed modulus context: R = F_q[t] / (P), P monic of degree n.
class Modulus {
 public:
  Modulus(int64_t q, const std::vector<uint16_t>& monic_P);

  int64_t q() const { return q_; }
  int n() const { return n_; }

  Elem zero() const { return {}; }
  Elem one() const;
  Elem from_coeffs(const std::vector<int64_t>& coeffs) const;  // reduces mod P

  void add(const Elem& a, const Elem& b, Elem& out) const;
  void sub(const Elem& a, const Elem& b, Elem& out) const;
  void mul(const Elem& a, const Elem& b, Elem& out) const;
  void scalar_mul(const Elem& a, uint32_t s, Elem& out) const;
  bool is_zero(const Elem& a) const;
  bool equal(const Elem& a, const Elem& b) const;
  Elem inverse(const Elem& a) const;          // throws on non-unit
  Elem pow(const Elem& a, int64_t e) const;

  // Legendre-style character: a^((q^n - 1)/2); returns +1, -1, or 0.
  int sqr_character(const Elem& a) const;

  uint32_t inv_scalar(uint32_t s) const { return scalar_inv_[s]; }

 private:
  int64_t q_;
  int n_;
  uint16_t P_[kMaxN + 1];
  std::vector<uint32_t> scalar_inv_;
};

// Polynomials over R = F_q[t]/(P) in a second variable X, dense, low degree.
struct RPoly {
  std::vector<Elem> c;
  int deg() const { return static_cast<int>(c.size()) - 1; }
};

RPoly rpoly_trim(const Modulus& R, RPoly p);
RPoly rpoly_mul(const Modulus& R, const RPoly& a, const RPoly& b);
RPoly rpoly_rem(const Modulus& R, RPoly a, const RPoly& b);
RPoly rpoly_gcd(const Modulus& R, RPoly a, RPoly b);
RPoly rpoly_derivative(const Modulus& R, const RPoly& p);
// resultant of a and b (b = a' typically), via the Euclidean chain
Elem rpoly_resultant(const Modulus& R, RPoly a, RPoly b);

// Degree pattern of the X-squarefree monic fbar via successive Frobenius
// root counts, pruned by a candidate pattern set. Patterns are sorted
// ascending degree multisets. Returns the index into `candidates`, or -1
// when fbar is not squarefree (ramified).
int classify_pattern(const Modulus& R, const RPoly& fbar,
                     const std::vector<std::vector<int>>& candidates);

// Monic irreducible enumeration: all monic irreducibles of degree exactly n
// over F_q as packed coefficient indices (index = sum c_i q^i, c_n = 1
// implicit), via a polynomial Eratosthenes sieve. `lower` must hold the
// irreducible lists for all degrees <= n/2.
std::vector<std::vector<uint32_t>> sieve_irreducibles(int64_t q, int n_max, int threads);

// Decode a sieve index into coefficients (c_0..c_{n-1}, then the monic 1).
std::vector<uint16_t> decode_monic(int64_t q, int n, uint32_t index);
std::string poly_to_string(int64_t q, const std::vector<uint16_t>& coeffs);

}  // namespace fq
}  // namespace kwr
