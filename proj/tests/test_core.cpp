#include <catch2/catch_amalgamated.hpp>

#include "kwr/closure.hpp"
#include "kwr/exact.hpp"
#include "kwr/lll.hpp"
#include "kwr/relation.hpp"

using namespace kwr;

namespace {

// The worked S3 system: theta_1 = arg(-2 + i*sqrt(3)),
// theta_2 = arg((-1 + 3i*sqrt(3))/2), theta_3 = pi.
AngleSystem s3_angles(int bits = 256) {
  PrecisionGuard guard(bits);
  Real s3 = sqrt(Real(3));
  Real t1 = atan2(s3, Real(-2));
  Real t2 = atan2(3 * s3 / 2, Real(-1) / 2);
  return AngleSystem::make(Mode::Discrete, {t1, t2, mp_pi()}, bits);
}

IntMat to_int_mat(const std::vector<std::vector<int64_t>>& rows) {
  IntMat m;
  for (const auto& r : rows) m.emplace_back(r.begin(), r.end());
  return m;
}

bool same_lattice(const std::vector<std::vector<int64_t>>& a,
                  const std::vector<std::vector<int64_t>>& b) {
  return hnf(to_int_mat(a)) == hnf(to_int_mat(b));
}

}  // namespace

TEST_CASE("hnf canonicalizes row lattices") {
  IntMat m = {{Int(2), Int(4)}, {Int(4), Int(2)}};
  IntMat h = hnf(m);
  REQUIRE(h.size() == 2);
  // det preserved: 2*4-4*2... rows (2,4),(4,2): det = -12 -> |det| 12
  REQUIRE(h[0][0] * h[1][1] == 12);
  // unimodular shuffles of the basis do not change the HNF
  IntMat m2 = {{Int(6), Int(6)}, {Int(4), Int(2)}};
  REQUIRE(hnf(m2) == h);
}

TEST_CASE("integer kernel and saturation") {
  IntMat a = {{Int(1), Int(1), Int(-1)}};
  IntMat k = integer_kernel(a);
  REQUIRE(k.size() == 2);
  IntMat sat = saturate({{Int(2), Int(2), Int(-2)}});
  REQUIRE(sat.size() == 1);
  REQUIRE(sat[0] == IntVec{Int(1), Int(1), Int(-1)});

  // saturation of {(1,1),(1,-1)} is all of Z^2
  IntMat sat2 = saturate({{Int(1), Int(1)}, {Int(1), Int(-1)}});
  REQUIRE(sat2.size() == 2);
  REQUIRE(sat2[0][0] == 1);
  REQUIRE(sat2[1][1] == 1);
  REQUIRE(sat2[0][1] == 0);
}

TEST_CASE("solve_linear handles inconsistent and underdetermined systems") {
  RatMat A = {{Rat(1), Rat(2)}, {Rat(2), Rat(4)}};
  REQUIRE(!solve_linear(A, {Rat(1), Rat(3)}).has_value());
  auto sol = solve_linear(A, {Rat(1), Rat(2)});
  REQUIRE(sol.has_value());
  REQUIRE((*sol)[0] + 2 * (*sol)[1] == 1);
}

TEST_CASE("lll finds an integer relation") {
  // x = (1, sqrt(2)) scaled: relation-free; with x = (1, 2) the vector (2,-1)
  // appears as a short row.
  IntMat basis = {{Int(1), Int(0), Int(1) << 40}, {Int(0), Int(1), Int(2) * (Int(1) << 40)}};
  lll_reduce(basis);
  bool found = false;
  for (const auto& row : basis)
    if ((row[0] == 2 && row[1] == -1 && row[2] == 0) ||
        (row[0] == -2 && row[1] == 1 && row[2] == 0))
      found = true;
  REQUIRE(found);
}

TEST_CASE("S3 angles: detected relations match the worked example") {
  AngleSystem sys = s3_angles();
  RelationLattice lat = detect_relations(sys, 10000, 256);
  // theta_1 + theta_2 = 4*pi/3 and theta_3 = pi:
  REQUIRE(lat.rank() == 2);
  REQUIRE(same_lattice(lat.relations, {{-2, 3, 3, 0}, {-1, 0, 0, 2}}));
}

TEST_CASE("single generic angle yields the empty lattice") {
  PrecisionGuard guard(256);
  AngleSystem sys = AngleSystem::make(Mode::Discrete, {Real(1)}, 256);
  RelationLattice lat = detect_relations(sys, 1000000, 256);
  REQUIRE(lat.rank() == 0);
}

TEST_CASE("continuous (e, 2e, 3e) has a rank-2 lattice") {
  PrecisionGuard guard(256);
  Real e = exp(Real(1));
  AngleSystem sys = AngleSystem::make(Mode::Continuous, {e, 2 * e, 3 * e}, 256);
  RelationLattice lat = detect_relations(sys, 10000, 256);
  REQUIRE(lat.rank() == 2);
  REQUIRE(same_lattice(lat.relations, {{2, -1, 0}, {3, 0, -1}}));
  // verify by direct substitution at 256 bits
  REQUIRE(verify_relation(sys, {2, -1, 0}, 256));
  REQUIRE(verify_relation(sys, {3, 0, -1}, 256));
}

TEST_CASE("verify_relation on the S3 system") {
  AngleSystem sys = s3_angles();
  REQUIRE(verify_relation(sys, {-2, 3, 3, 0}, 256));
  REQUIRE(verify_relation(sys, {0, 0, 0, 0}, 256));
  REQUIRE(!verify_relation(sys, {0, 1, -1, 0}, 256));
  // residual of theta_1 - theta_2 is about 0.667 radians
  {
    PrecisionGuard guard(256);
    double diff = static_cast<double>(abs(sys.angles[0] - sys.angles[1]));
    REQUIRE(diff > 0.6);
    REQUIRE(diff < 0.7);
  }
  REQUIRE_THROWS_AS(verify_relation(sys, {0, 1, -1}, 256), DimensionMismatch);
}

TEST_CASE("S3 closure matches the worked example exactly") {
  AngleSystem sys = s3_angles();
  RelationLattice lat = detect_relations(sys);
  ClosureDescription cd = extract_closure(sys, lat);
  REQUIRE(cd.m() == 1);
  REQUIRE(cd.basis == std::vector<int>{0});
  REQUIRE(cd.c[1] == Rat(2, 3));
  REQUIRE(cd.b[0][1] == Rat(-1));
  REQUIRE(cd.c[2] == Rat(1, 2));
  REQUIRE(cd.b[0][2] == Rat(0));
  REQUIRE(cd.d == 6);
  REQUIRE(cd.h[0][1] == -6);
  REQUIRE(cd.h[0][2] == 0);
  REQUIRE(cd.l[1] == 4);
  REQUIRE(cd.l[2] == 3);
  REQUIRE(!cd.degenerate);
}

TEST_CASE("pi/2 closure is degenerate with d = 4") {
  PrecisionGuard guard(256);
  AngleSystem sys = AngleSystem::make(Mode::Discrete, {mp_pi() / 2}, 256);
  ClosureDescription cd = extract_closure(sys, detect_relations(sys));
  REQUIRE(cd.degenerate);
  REQUIRE(cd.d == 4);
  REQUIRE(cd.c[0] == Rat(1, 4));
  REQUIRE(std::abs(cd.nu[0].real()) < 1e-12);
  REQUIRE(cd.nu[0].imag() == Catch::Approx(1.0));
}

TEST_CASE("continuous (e, 2e) closure") {
  PrecisionGuard guard(256);
  Real e = exp(Real(1));
  AngleSystem sys = AngleSystem::make(Mode::Continuous, {e, 2 * e}, 256);
  ClosureDescription cd = extract_closure(sys, detect_relations(sys));
  REQUIRE(cd.m() == 1);
  REQUIRE(cd.b[0][1] == Rat(2));
  REQUIRE(cd.d == 1);
  REQUIRE(!cd.degenerate);
}

TEST_CASE("round trip: dependent angles reconstruct from (c, b)") {
  AngleSystem sys = s3_angles();
  RelationLattice lat = detect_relations(sys);
  ClosureDescription cd = extract_closure(sys, lat);
  PrecisionGuard guard(256);
  Real tol = ldexp(Real(1), -256 / 2 + 8);
  for (int j = 0; j < cd.r; ++j) {
    Real rec = 2 * mp_pi() * Real(numerator(cd.c[j])) / Real(denominator(cd.c[j]));
    for (int k = 0; k < cd.m(); ++k)
      rec += Real(numerator(cd.b[k][j])) / Real(denominator(cd.b[k][j])) *
             sys.angles[cd.basis[k]];
    REQUIRE(abs(rec - sys.angles[j]) < tol);
  }
}

TEST_CASE("d is invariant under permuting the non-basis angles") {
  PrecisionGuard guard(256);
  Real s3 = sqrt(Real(3));
  Real t1 = atan2(s3, Real(-2));
  Real t2 = atan2(3 * s3 / 2, Real(-1) / 2);
  AngleSystem a = AngleSystem::make(Mode::Discrete, {t1, t2, mp_pi()}, 256);
  AngleSystem b = AngleSystem::make(Mode::Discrete, {t1, mp_pi(), t2}, 256);
  ClosureDescription ca = extract_closure(a, detect_relations(a));
  ClosureDescription cb = extract_closure(b, detect_relations(b));
  REQUIRE(ca.d == cb.d);
}

TEST_CASE("degeneracy flag agrees with per-angle pi-rationality") {
  PrecisionGuard guard(256);
  AngleSystem sys = AngleSystem::make(Mode::Discrete, {mp_pi() / 2, mp_pi() / 3}, 256);
  RelationLattice lat = detect_relations(sys);
  ClosureDescription cd = extract_closure(sys, lat);
  REQUIRE(cd.degenerate);
  // lattice contains a vector supported on {2pi-slot, i} for each i:
  // span(L) must intersect span{e_0, e_{i+1}} nontrivially
  for (int i = 0; i < sys.r(); ++i) {
    RatMat rows;
    for (const auto& v : lat.relations) rows.emplace_back(v.begin(), v.end());
    int r0 = rank(rows);
    RatVec e0(sys.r() + 1, Rat(0)), ei(sys.r() + 1, Rat(0));
    e0[0] = 1;
    ei[i + 1] = 1;
    rows.push_back(e0);
    rows.push_back(ei);
    REQUIRE(rank(rows) < r0 + 2);
  }
}

TEST_CASE("lattice relations re-expressed in the basis vanish exactly") {
  PrecisionGuard guard(256);
  // planted: t3 = 2pi/5 + t1 - 2 t2, t4 = pi/3 + t2
  Real t1 = sqrt(Real(2)), t2 = sqrt(Real(3));
  Real t3 = 2 * mp_pi() / 5 + t1 - 2 * t2;
  Real t4 = mp_pi() / 3 + t2;
  AngleSystem sys = AngleSystem::make(Mode::Discrete, {t1, t2, t3, t4}, 256);
  RelationLattice lat = detect_relations(sys);
  REQUIRE(lat.rank() == 2);
  ClosureDescription cd = extract_closure(sys, lat);  // throws if a relation fails to vanish
  REQUIRE(cd.m() == 2);
  REQUIRE(cd.c[2] == Rat(1, 5));
  REQUIRE(cd.b[0][2] == Rat(1));
  REQUIRE(cd.b[1][2] == Rat(-2));
  REQUIRE(cd.c[3] == Rat(1, 6));
  REQUIRE(cd.b[1][3] == Rat(1));
  REQUIRE(cd.d == 30);
}

TEST_CASE("detection rejects out-of-bound coefficients") {
  PrecisionGuard guard(256);
  // t2 = (101/100) t1: relation (0, 101, -100) needs coefficients > 50
  Real t1 = sqrt(Real(2));
  AngleSystem sys = AngleSystem::make(Mode::Discrete, {t1, Real(101) / 100 * t1}, 256);
  RelationLattice small = detect_relations(sys, 50, 256);
  REQUIRE(small.rank() == 0);
  RelationLattice big = detect_relations(sys, 200, 256);
  REQUIRE(big.rank() == 1);
  REQUIRE(same_lattice(big.relations, {{0, 101, -100}}));
}
