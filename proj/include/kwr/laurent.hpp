#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "kwr/closure.hpp"

#include "json.hpp"

namespace kwr {

using Cplx = std::complex<double>;

struct TorusPoint {
  std::vector<Cplx> coords;

  TorusPoint() = default;
  explicit TorusPoint(std::vector<Cplx> c, bool validate = true);
  int r() const { return static_cast<int>(coords.size()); }
};

// Sparse Laurent polynomial on T^r: exponent vector -> complex coefficient.
// Real-valued on the torus when the coefficient at -e is conj of the one at
// e; construction does not force that, eval() checks it.
struct LaurentPoly {
  int r = 0;
  std::map<std::vector<int32_t>, Cplx> terms;

  static LaurentPoly zero(int r) { return LaurentPoly{r, {}}; }
  static LaurentPoly constant(int r, Cplx c);
  static LaurentPoly monomial(int r, std::vector<int32_t> e, Cplx a);
  // a*X_k + conj(a)*X_k^{-1}
  static LaurentPoly cosine_pair(int r, int k, Cplx a);

  void add_term(const std::vector<int32_t>& e, Cplx a);
  LaurentPoly operator+(const LaurentPoly& o) const;
  LaurentPoly operator-(const LaurentPoly& o) const;
  LaurentPoly scaled(Cplx s) const;

  bool is_constant() const;
  bool is_real_on_torus(double tol = 1e-9) const;
  double coeff_abs_sum() const;
  // 2^-30 * (1 + sum |a_e|)
  double real_tol() const;

  std::complex<double> eval_complex(const TorusPoint& z) const;
  // Re of the complex value; for conjugate-symmetric polynomials the
  // imaginary part is asserted below real_tol() (NotRealOnTorus otherwise).
  double eval(const TorusPoint& z) const;

  nlohmann::json to_json() const;
  static LaurentPoly from_json(const nlohmann::json& j, bool require_real = true);
};

// Per-term frequencies e.theta precomputed at working precision, so that
// exact-lattice monomials evaluate with frequency exactly zero. Evaluates
// t -> f(e^{i theta_1 t}, ..., e^{i theta_r t}).
class OrbitEvaluator {
 public:
  OrbitEvaluator(const LaurentPoly& f, const std::vector<Real>& theta, Mode mode,
                 int precision_bits);
  OrbitEvaluator(const LaurentPoly& f, const AngleSystem& sys)
      : OrbitEvaluator(f, sys.angles, sys.mode, sys.precision_bits) {}
  OrbitEvaluator(const LaurentPoly& f, const ClosureDescription& cd)
      : OrbitEvaluator(f, cd.theta, cd.mode, cd.precision_bits) {}

  std::complex<double> value_complex(double t) const;
  double value(double t) const;  // same realness contract as LaurentPoly::eval

 private:
  struct Term {
    Cplx coeff;
    double freq;  // e.theta, reduced mod 2*pi in Discrete mode
  };
  std::vector<Term> terms_;
  bool symmetric_;
  double tol_;
};

double orbit_value(const LaurentPoly& f, const AngleSystem& sys, double t);

struct VanishingScan {
  std::optional<int64_t> witness;  // first n with |f(orbit(n))| > tol
  double tol;
  bool likely_identically_zero() const { return !witness.has_value(); }
};

// Scan n = a, a+d, a+2d, ... <= n_max for a nonvanishing orbit value of f.
// A witness certifies zero tie mass on the coset; no witness is a heuristic
// flag only.
VanishingScan coset_vanishing(const LaurentPoly& f, const ClosureDescription& cd, int64_t a,
                              int64_t n_max = -1, double tol = -1.0);

// Continuous analogue: scan a y-grid for |f(orbit(y))| > tol.
VanishingScan continuous_vanishing(const LaurentPoly& f, const ClosureDescription& cd,
                                   double y_max = -1.0, double tol = -1.0);

}  // namespace kwr
