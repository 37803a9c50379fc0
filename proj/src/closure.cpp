#include "kwr/closure.hpp"

#include <cmath>

namespace kwr {

bool ClosureDescription::angle_in_pi_q(int i) const {
  if (mode != Mode::Discrete) return false;
  for (int k = 0; k < m(); ++k)
    if (b[k][i] != 0) return false;
  return true;
}

std::pair<Rat, RatVec> ClosureDescription::decompose_combination(
    const std::vector<int64_t>& e) const {
  if (static_cast<int>(e.size()) != r) throw DimensionMismatch("combination length != r");
  Rat cc(0);
  RatVec bb(m(), Rat(0));
  for (int j = 0; j < r; ++j) {
    if (e[j] == 0) continue;
    cc += Rat(e[j]) * c[j];
    for (int k = 0; k < m(); ++k) bb[k] += Rat(e[j]) * b[k][j];
  }
  return {cc, bb};
}

std::complex<double> ClosureDescription::nu_pow(int j, int64_t a) const {
  if (a == 0) return {1.0, 0.0};
  PrecisionGuard guard(precision_bits);
  Real phase = fmod(theta[j] * Real(a), 2 * mp_pi());
  double p = static_cast<double>(phase);
  return {std::cos(p), std::sin(p)};
}

ClosureDescription extract_closure(const AngleSystem& sys, const RelationLattice& lat) {
  const int r = sys.r();
  const bool discrete = sys.mode == Mode::Discrete;
  const size_t len = discrete ? r + 1 : r;
  for (const auto& v : lat.relations)
    if (v.size() != len) throw DimensionMismatch("lattice vector length does not match mode");

  PrecisionGuard guard(sys.precision_bits);

  ClosureDescription cd;
  cd.mode = sys.mode;
  cd.r = r;
  cd.precision_bits = sys.precision_bits;
  cd.theta = sys.angles;
  cd.theta_d = sys.angles_d;

  // Columns of the solve: [2*pi axis (discrete)] + chosen basis axes + the
  // lattice rows as spanning vectors. theta_j is dependent exactly when e_j
  // lies in that span.
  auto solve_for = [&](const std::vector<int>& chosen, int j) -> std::optional<RatVec> {
    size_t ncols = (discrete ? 1 : 0) + chosen.size() + lat.relations.size();
    RatMat A(len, RatVec(ncols, Rat(0)));
    size_t col = 0;
    if (discrete) A[0][col++] = 1;
    for (int k : chosen) A[(discrete ? 1 : 0) + k][col++] = 1;
    for (const auto& rel : lat.relations) {
      for (size_t i = 0; i < len; ++i) A[i][col] = Rat(rel[i]);
      ++col;
    }
    RatVec rhs(len, Rat(0));
    rhs[(discrete ? 1 : 0) + j] = 1;
    return solve_linear(std::move(A), std::move(rhs));
  };

  cd.c.assign(r, Rat(0));
  std::vector<RatVec> dep_b(r);  // per angle: coefficients over cd.basis
  for (int j = 0; j < r; ++j) {
    auto sol = solve_for(cd.basis, j);
    if (sol) {
      size_t col = 0;
      if (discrete) cd.c[j] = (*sol)[col++];
      dep_b[j].resize(cd.basis.size());
      for (size_t k = 0; k < cd.basis.size(); ++k) dep_b[j][k] = (*sol)[col++];
    } else {
      dep_b[j].assign(cd.basis.size(), Rat(0));
      cd.basis.push_back(j);
      for (int i = 0; i <= j; ++i) dep_b[i].push_back(i == j ? Rat(1) : Rat(0));
    }
  }

  const int m = static_cast<int>(cd.basis.size());
  cd.b.assign(m, RatVec(r, Rat(0)));
  for (int j = 0; j < r; ++j)
    for (int k = 0; k < m; ++k) cd.b[k][j] = dep_b[j][k];

  cd.degenerate = discrete && m == 0;

  // d = lcm of the denominators of every c_j and b_{k,j} in lowest terms.
  Int dd(1);
  for (int j = 0; j < r; ++j) {
    dd = lcm(dd, denominator(cd.c[j]));
    for (int k = 0; k < m; ++k) dd = lcm(dd, denominator(cd.b[k][j]));
  }
  if (dd > Int(int64_t(1) << 62)) throw Error("common denominator d exceeds 2^62", 2);
  cd.d = static_cast<int64_t>(dd);

  cd.h.assign(m, std::vector<int64_t>(r, 0));
  cd.l.assign(r, 0);
  auto to_i64 = [](const Rat& q, const char* what) {
    if (denominator(q) != 1) throw InternalError(std::string(what) + " not integral");
    Int n = numerator(q);
    if (abs(n) > Int(int64_t(1) << 62)) throw Error(std::string(what) + " exceeds 2^62", 2);
    return static_cast<int64_t>(n);
  };
  for (int j = 0; j < r; ++j) {
    cd.l[j] = to_i64(Rat(cd.d) * cd.c[j], "l_j");
    for (int k = 0; k < m; ++k) cd.h[k][j] = to_i64(Rat(cd.d) * cd.b[k][j], "h_kj");
  }

  // Every lattice relation must reduce to zero in the extracted basis.
  for (const auto& rel : lat.relations) {
    Rat two_pi_coeff = discrete ? Rat(rel[0]) : Rat(0);
    RatVec basis_coeff(m, Rat(0));
    for (int j = 0; j < r; ++j) {
      int64_t vj = rel[discrete ? j + 1 : j];
      if (vj == 0) continue;
      two_pi_coeff += Rat(vj) * cd.c[j];
      for (int k = 0; k < m; ++k) basis_coeff[k] += Rat(vj) * cd.b[k][j];
    }
    bool zero = two_pi_coeff == 0;
    for (const Rat& q : basis_coeff) zero = zero && q == 0;
    if (!zero)
      throw InconsistentLattice("a relation does not vanish in the extracted basis");
  }

  if (discrete && !cd.degenerate && cd.angle_in_pi_q(cd.basis[0]))
    throw InternalError("first basis angle lies in pi*Q");

  cd.nu.reserve(r);
  for (int j = 0; j < r; ++j) {
    double t = sys.angles_d[j];
    cd.nu.push_back({std::cos(t), std::sin(t)});
  }
  return cd;
}

}  // namespace kwr
