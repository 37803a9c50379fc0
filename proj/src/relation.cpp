#include "kwr/relation.hpp"

#include <algorithm>

#include "kwr/exact.hpp"
#include "kwr/lll.hpp"

namespace kwr {

namespace {

std::vector<Real> relation_vector_x(const AngleSystem& sys) {
  std::vector<Real> x;
  if (sys.mode == Mode::Discrete) x.push_back(2 * mp_pi());
  for (const Real& a : sys.angles) x.push_back(a);
  return x;
}

Real residual_scale(const std::vector<Real>& x) {
  Real m = 0;
  for (const Real& v : x) m = std::max(m, Real(abs(v)));
  return m;
}

// |v.x| / (||v||_1 * scale); returns -1 for the zero vector.
Real normalized_residual(const std::vector<Real>& x, const std::vector<int64_t>& v) {
  Real dot = 0;
  int64_t l1 = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    dot += Real(v[i]) * x[i];
    l1 += std::abs(v[i]);
  }
  if (l1 == 0) return Real(-1);
  return abs(dot) / (Real(l1) * residual_scale(x));
}

}  // namespace

bool verify_relation(const AngleSystem& sys, const std::vector<int64_t>& v, int precision_bits) {
  PrecisionGuard guard(precision_bits + 64);
  std::vector<Real> x = relation_vector_x(sys);
  if (v.size() != x.size())
    throw DimensionMismatch("relation vector has length " + std::to_string(v.size()) +
                            ", expected " + std::to_string(x.size()));
  Real res = normalized_residual(x, v);
  if (res < 0) return true;  // zero vector
  return res < ldexp(Real(1), -precision_bits / 2);
}

RelationLattice detect_relations(const AngleSystem& sys, int64_t max_coeff, int precision_bits) {
  if (sys.r() < 1) throw DimensionMismatch("empty angle system");
  if (precision_bits < 128) throw Error("precision_bits must be >= 128", 1);
  if (max_coeff < 1) throw Error("max_coeff must be >= 1", 1);
  PrecisionGuard guard(precision_bits + 64);

  std::vector<Real> x = relation_vector_x(sys);
  const size_t n = x.size();

  // Rows (e_i | round(2^p * x_i)). Exact relations keep the last column at
  // rounding-noise size, so they come out of LLL as the short basis vectors.
  IntMat basis(n, IntVec(n + 1, 0));
  for (size_t i = 0; i < n; ++i) {
    basis[i][i] = 1;
    Real scaled = ldexp(x[i], precision_bits);
    Int z;
    mpfr_get_z(z.backend().data(), scaled.backend().data(), MPFR_RNDN);
    basis[i][n] = z;
  }
  lll_reduce(basis);

  Real accept = ldexp(Real(1), -precision_bits / 2);
  Real ambiguous = ldexp(Real(1), -precision_bits / 4);

  std::vector<std::vector<int64_t>> verified;
  RatMat rat_rows;
  for (const IntVec& row : basis) {
    IntVec cand(row.begin(), row.begin() + n);
    Int g = ivec_gcd(cand);
    if (g == 0) continue;
    for (Int& c : cand) c /= g;
    // sign: first nonzero positive
    for (const Int& c : cand) {
      if (c == 0) continue;
      if (c < 0)
        for (Int& y : cand) y = -y;
      break;
    }
    bool in_bound = true;
    std::vector<int64_t> v64(n);
    for (size_t i = 0; i < n; ++i) {
      if (abs(cand[i]) > max_coeff) {
        in_bound = false;
        break;
      }
      v64[i] = static_cast<int64_t>(cand[i]);
    }
    if (!in_bound) continue;
    Real res = normalized_residual(x, v64);
    if (res >= ambiguous) continue;
    if (res >= accept)
      throw PrecisionTooLow("candidate relation has residual in the ambiguous band; raise "
                            "precision_bits (residual " +
                            res.str(8) + ")");
    // keep only if independent of what we already have
    RatMat probe = rat_rows;
    probe.emplace_back(v64.begin(), v64.end());
    if (rank(probe) == static_cast<int>(probe.size())) {
      rat_rows = std::move(probe);
      verified.push_back(std::move(v64));
    }
  }

  RelationLattice lat;
  lat.precision_bits = precision_bits;
  lat.max_coeff = max_coeff;
  if (verified.empty()) return lat;

  // Canonical form: HNF basis of the saturation. Saturating is sound here
  // because v/g satisfies the same real relation as v. Fall back to the raw
  // verified vectors if canonical rows break the coefficient bound.
  IntMat raw;
  for (const auto& v : verified) raw.emplace_back(v.begin(), v.end());
  IntMat canon = hnf(saturate(raw));
  bool ok = canon.size() == verified.size();
  std::vector<std::vector<int64_t>> canon64;
  for (const IntVec& row : canon) {
    std::vector<int64_t> v64(n);
    for (size_t i = 0; i < n && ok; ++i) {
      if (abs(row[i]) > max_coeff) ok = false;
      else v64[i] = static_cast<int64_t>(row[i]);
    }
    if (!ok) break;
    if (!(normalized_residual(x, v64) < accept)) ok = false;
    canon64.push_back(std::move(v64));
  }
  lat.relations = ok ? std::move(canon64) : std::move(verified);
  return lat;
}

}  // namespace kwr
