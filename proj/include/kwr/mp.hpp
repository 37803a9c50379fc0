#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <complex>
#include <string>

#include "kwr/errors.hpp"

namespace kwr {

using Real = boost::multiprecision::mpfr_float;   // variable precision
using Rat = boost::multiprecision::mpq_rational;  // exact rationals
using Int = boost::multiprecision::mpz_int;       // exact integers

inline int bits_to_digits10(int bits) { return static_cast<int>(bits * 0.30103) + 6; }

// Scoped default-precision switch for mpfr_float. Precision is given in bits;
// a few guard digits are added on top.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(int bits) : saved_(Real::default_precision()) {
    Real::default_precision(bits_to_digits10(bits));
  }
  ~PrecisionGuard() { Real::default_precision(saved_); }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_;
};

// pi at the current default precision.
inline Real mp_pi() {
  Real p;
  mpfr_const_pi(p.backend().data(), MPFR_RNDN);
  return p;
}

inline Real parse_real(const std::string& s) {
  try {
    return Real(s);
  } catch (const std::exception&) {
    throw ParseError("bad real literal '" + s + "'");
  }
}

// "p", "p/q" -> exact rational.
inline Rat parse_rat(const std::string& s) {
  try {
    return Rat(s);
  } catch (const std::exception&) {
    throw ParseError("bad rational literal '" + s + "'");
  }
}

// Minimal complex type over Real; std::complex is not specified for
// user-defined scalars, so we carry our own.
struct MpComplex {
  Real re, im;

  MpComplex() : re(0), im(0) {}
  MpComplex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  explicit MpComplex(const Real& r) : re(r), im(0) {}

  MpComplex operator+(const MpComplex& o) const { return {re + o.re, im + o.im}; }
  MpComplex operator-(const MpComplex& o) const { return {re - o.re, im - o.im}; }
  MpComplex operator*(const MpComplex& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  MpComplex operator/(const MpComplex& o) const {
    Real n = o.re * o.re + o.im * o.im;
    return {(re * o.re + im * o.im) / n, (im * o.re - re * o.im) / n};
  }
  MpComplex operator-() const { return {-re, -im}; }

  MpComplex conj() const { return {re, -im}; }
  Real norm() const { return re * re + im * im; }
  Real abs() const { return sqrt(norm()); }
  Real arg() const { return atan2(im, re); }

  std::complex<double> to_double() const {
    return {static_cast<double>(re), static_cast<double>(im)};
  }
};

inline MpComplex operator*(const Real& s, const MpComplex& z) { return {s * z.re, s * z.im}; }

}  // namespace kwr
