#pragma once

#include <functional>

#include "kwr/laurent.hpp"
#include "kwr/rng.hpp"

namespace kwr {

struct SamplerConfig {
  uint64_t seed = 0;
  int64_t n_samples = 100000;  // per coset
  int64_t chunk = 16384;       // samples per deterministic sub-stream
  int threads = 0;             // 0 = hardware concurrency

  void validate() const {
    if (n_samples < 1) throw Error("n_samples must be >= 1", 1);
    if (chunk < 1) throw Error("chunk must be >= 1", 1);
  }
};

enum class Method { MonteCarlo, ExactEnumeration, OrbitAverage };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::MonteCarlo: return "MonteCarlo";
    case Method::ExactEnumeration: return "ExactEnumeration";
    default: return "OrbitAverage";
  }
}

struct EstimateWithCI {
  double value = 0;
  double stderr_ = 0;
  int64_t n = 0;
  Method method = Method::MonteCarlo;
};

// f compiled against the closure: the term with exponent e contributes
// coeff * exp(i(a*(e.theta) + sum_k g_k phi_k)) at the coset-a draw with
// basis angles phi, where g_k = sum_j e_j h_{k,j}. Coset phases are reduced
// at working precision once at construction.
class ClosureEvaluator {
 public:
  ClosureEvaluator(const LaurentPoly& f, const ClosureDescription& cd);
  double value(int64_t a, const std::vector<double>& phi) const;
  std::complex<double> value_complex(int64_t a, const std::vector<double>& phi) const;

 private:
  struct Term {
    Cplx coeff;
    std::vector<double> g;
    std::vector<double> offset;
  };
  std::vector<Term> terms_;
  bool symmetric_ = false;
  double tol_ = 0;
};

// One draw of nu^a * Z, coordinates in original angle order.
TorusPoint sample_Z(const ClosureDescription& cd, int64_t a, Stream& stream);

// The d points nu^0, .., nu^(d-1) of a degenerate closure.
std::vector<TorusPoint> enumerate_orbit(const ClosureDescription& cd);

// (1/d) sum_a E f(nu^a Z): exact enumeration in the degenerate case,
// chunked Monte Carlo otherwise. Reproducible: estimates depend only on
// (seed, chunking), not on scheduling.
EstimateWithCI expectation(const LaurentPoly& f, const ClosureDescription& cd,
                           const SamplerConfig& cfg);

// Deterministic orbit average: (1/X) sum_{n<=X} f(orbit(n)) in Discrete mode,
// composite-midpoint quadrature over [0, X] in Continuous mode.
EstimateWithCI orbit_average(const LaurentPoly& f, const AngleSystem& sys, double X);

// Runs fn(0..n_chunks-1), possibly concurrently; caller owns any output
// slots. Results must not depend on execution order.
void parallel_chunks(int64_t n_chunks, int threads, const std::function<void(int64_t)>& fn);

}  // namespace kwr
