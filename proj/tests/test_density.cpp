#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "kwr/density.hpp"
#include "kwr/relation.hpp"

using namespace kwr;

namespace {

AngleSystem s3_angles(int bits = 256) {
  PrecisionGuard guard(bits);
  Real s3 = sqrt(Real(3));
  Real t1 = atan2(s3, Real(-2));
  Real t2 = atan2(3 * s3 / 2, Real(-1) / 2);
  return AngleSystem::make(Mode::Discrete, {t1, t2, mp_pi()}, bits);
}

// The three S3 race functions (explicit-formula shape, error term present).
RaceFunctions s3_race() {
  RaceFunctions rf;
  rf.error_term_present = true;
  rf.names = {"C1", "C2", "C3"};
  LaurentPoly f1 = LaurentPoly::constant(3, -1.5);
  f1 = f1 + LaurentPoly::cosine_pair(3, 2, Cplx(-0.75, 0));
  f1 = f1 + LaurentPoly::cosine_pair(3, 0, Cplx(-1, 0));
  f1 = f1 + LaurentPoly::cosine_pair(3, 1, Cplx(-2, 0));
  LaurentPoly f2 = LaurentPoly::constant(3, 0.5);
  f2 = f2 + LaurentPoly::cosine_pair(3, 2, Cplx(0.25, 0));
  f2 = f2 + LaurentPoly::cosine_pair(3, 0, Cplx(1, 0));
  LaurentPoly f3 = LaurentPoly::cosine_pair(3, 0, Cplx(-1, 0)) +
                   LaurentPoly::cosine_pair(3, 1, Cplx(1, 0));
  rf.fs = {f1, f2, f3};
  return rf;
}

std::vector<std::vector<int>> all_orderings(int D) {
  std::vector<int> idx(D);
  for (int i = 0; i < D; ++i) idx[i] = i;
  std::vector<std::vector<int>> all;
  do {
    all.push_back(idx);
  } while (std::next_permutation(idx.begin(), idx.end()));
  return all;
}

}  // namespace

TEST_CASE("degenerate density: theta = pi/2 race is exactly 1/4") {
  PrecisionGuard guard(256);
  AngleSystem sys = AngleSystem::make(Mode::Discrete, {mp_pi() / 2}, 256);
  ClosureDescription cd = extract_closure(sys, detect_relations(sys));
  RaceFunctions rf;
  rf.fs = {LaurentPoly::cosine_pair(1, 0, Cplx(1, 0)), LaurentPoly::zero(1)};
  SamplerConfig cfg;
  DensityReport rep = density_discrete(rf, cd, cfg);
  REQUIRE(rep.value.method == Method::ExactEnumeration);
  REQUIRE(rep.value.value == 0.25);
  REQUIRE(rep.existence == Existence::Exists);
  // exact densities are multiples of 1/d
  REQUIRE(rep.value.value * static_cast<double>(rep.d) == 1.0);
}

TEST_CASE("degenerate density with error term and a tie gives bounds") {
  PrecisionGuard guard(256);
  AngleSystem sys = AngleSystem::make(Mode::Discrete, {mp_pi() / 2}, 256);
  ClosureDescription cd = extract_closure(sys, detect_relations(sys));
  RaceFunctions rf;
  rf.error_term_present = true;
  rf.fs = {LaurentPoly::cosine_pair(1, 0, Cplx(1, 0)), LaurentPoly::zero(1)};
  DensityReport rep = density_discrete(rf, cd, SamplerConfig{});
  // orbit values 2,0,-2,0 vs 0: ties at odd points
  REQUIRE(rep.existence == Existence::BoundsOnly);
  REQUIRE(rep.lower == 0.25);
  REQUIRE(rep.upper == 0.75);
}

TEST_CASE("S3 race: all six orderings exist with density in (0,1)") {
  AngleSystem sys = s3_angles();
  ClosureDescription cd = extract_closure(sys, detect_relations(sys));
  RaceFunctions rf = s3_race();
  SamplerConfig cfg;
  cfg.seed = 2024;
  cfg.n_samples = 20000;
  double total = 0, total_var = 0;
  for (const auto& ord : all_orderings(3)) {
    DensityReport rep = density_discrete(rf.permuted(ord), cd, cfg);
    REQUIRE(rep.existence == Existence::Exists);
    REQUIRE(rep.value.value > 0.001);
    REQUIRE(rep.value.value < 0.999);
    total += rep.value.value;
    total_var += rep.value.stderr_ * rep.value.stderr_;
  }
  REQUIRE(std::abs(total - 1.0) <= 6 * 3 * std::sqrt(total_var / 6.0) + 0.01);
}

TEST_CASE("half-line density for a free angle") {
  PrecisionGuard guard(256);
  AngleSystem sys = AngleSystem::make(Mode::Discrete, {Real(1)}, 256);
  ClosureDescription cd = extract_closure(sys, detect_relations(sys));
  RaceFunctions rf;
  rf.fs = {LaurentPoly::cosine_pair(1, 0, Cplx(1, 0)), LaurentPoly::zero(1)};
  SamplerConfig cfg;
  cfg.seed = 9;
  cfg.n_samples = 200000;
  DensityReport rep = density_discrete(rf, cd, cfg);
  REQUIRE(rep.existence == Existence::Exists);
  REQUIRE(std::abs(rep.value.value - 0.5) <= 3 * rep.value.stderr_ + 1e-6);
}

TEST_CASE("continuous density: no pi-rational degeneracy") {
  PrecisionGuard guard(256);
  AngleSystem sys = AngleSystem::make(Mode::Continuous, {mp_pi() / 2}, 256);
  ClosureDescription cd = extract_closure(sys, detect_relations(sys));
  RaceFunctions rf;
  rf.fs = {LaurentPoly::cosine_pair(1, 0, Cplx(1, 0)), LaurentPoly::zero(1)};
  SamplerConfig cfg;
  cfg.seed = 10;
  cfg.n_samples = 200000;
  DensityReport rep = density_continuous(rf, cd, cfg);
  REQUIRE(rep.existence == Existence::Exists);
  REQUIRE(std::abs(rep.value.value - 0.5) <= 3 * rep.value.stderr_ + 1e-6);
}

TEST_CASE("continuous density with identical contestants collapses to bounds") {
  PrecisionGuard guard(256);
  AngleSystem sys = AngleSystem::make(Mode::Continuous, {Real(1)}, 256);
  ClosureDescription cd = extract_closure(sys, detect_relations(sys));
  LaurentPoly f = LaurentPoly::cosine_pair(1, 0, Cplx(1, 0));
  RaceFunctions rf;
  rf.fs = {f, f};
  DensityReport rep = density_continuous(rf, cd, SamplerConfig{});
  REQUIRE(rep.existence == Existence::BoundsOnly);
  REQUIRE(rep.lower == 0.0);
  REQUIRE(rep.upper == 1.0);  // weak ordering holds a.s. (exact tie)
}

TEST_CASE("continuous density with a planted relation: P(2cos(2U) > 1) = 1/3") {
  PrecisionGuard guard(256);
  AngleSystem sys = AngleSystem::make(Mode::Continuous, {Real(1), Real(2)}, 256);
  RelationLattice lat = detect_relations(sys);
  REQUIRE(lat.rank() == 1);
  ClosureDescription cd = extract_closure(sys, lat);
  RaceFunctions rf;
  rf.fs = {LaurentPoly::cosine_pair(2, 1, Cplx(1, 0)), LaurentPoly::constant(2, 1.0)};
  SamplerConfig cfg;
  cfg.seed = 11;
  cfg.n_samples = 300000;
  DensityReport rep = density_continuous(rf, cd, cfg);
  REQUIRE(rep.existence == Existence::Exists);
  // oracle: measure of {u : cos u > 1/2} on the circle is 1/3
  REQUIRE(std::abs(rep.value.value - 1.0 / 3.0) <= 3 * rep.value.stderr_ + 1e-6);
}

TEST_CASE("empirical density agrees with the MC density for the S3 race") {
  AngleSystem sys = s3_angles();
  ClosureDescription cd = extract_closure(sys, detect_relations(sys));
  RaceFunctions rf = s3_race();
  SamplerConfig cfg;
  cfg.seed = 21;
  cfg.n_samples = 50000;
  DensityReport rep = density_discrete(rf, cd, cfg);
  EstimateWithCI emp = empirical_density(rf, sys, 1e5);
  double band = 3 * std::sqrt(rep.value.stderr_ * rep.value.stderr_ +
                              emp.stderr_ * emp.stderr_);
  REQUIRE(std::abs(rep.value.value - emp.value) <= band + 0.01);
}

TEST_CASE("empirical density of a constant race and a periodic race") {
  PrecisionGuard guard(256);
  AngleSystem sys = AngleSystem::make(Mode::Discrete, {mp_pi() / 2}, 256);
  RaceFunctions constant_race;
  constant_race.fs = {LaurentPoly::constant(1, 1.0), LaurentPoly::zero(1)};
  REQUIRE(empirical_density(constant_race, sys, 1000).value == 1.0);

  RaceFunctions rf;
  rf.fs = {LaurentPoly::cosine_pair(1, 0, Cplx(1, 0)), LaurentPoly::zero(1)};
  EstimateWithCI e = empirical_density(rf, sys, 4e5);
  REQUIRE(e.value == 0.25);  // exactly periodic orbit
}

TEST_CASE("positivity witnesses exist for all six S3 orderings") {
  AngleSystem sys = s3_angles();
  ClosureDescription cd = extract_closure(sys, detect_relations(sys));
  RaceFunctions rf = s3_race();
  std::vector<int64_t> first;
  for (const auto& ord : all_orderings(3)) {
    PositivityReport rep = positivity_check(rf.permuted(ord), cd, 10000);
    REQUIRE(rep.strict_n.has_value());
    first.push_back(*rep.strict_n);
  }
  // orderings in lexicographic permutation order of (C1,C2,C3)
  REQUIRE(first == std::vector<int64_t>{23, 1, 2, 0, 17, 4});
}

TEST_CASE("positivity: no strict witness when the race is lost everywhere") {
  PrecisionGuard guard(256);
  AngleSystem sys = AngleSystem::make(Mode::Discrete, {Real(1)}, 256);
  ClosureDescription cd = extract_closure(sys, detect_relations(sys));
  RaceFunctions rf;
  rf.fs = {LaurentPoly::zero(1), LaurentPoly::constant(1, 1.0)};
  PositivityReport rep = positivity_check(rf, cd, 2000);
  REQUIRE(!rep.strict_n.has_value());
  REQUIRE(rep.violation_n.has_value());
}

TEST_CASE("positivity on the degenerate pi/2 race: strict at 0, violation at 2") {
  PrecisionGuard guard(256);
  AngleSystem sys = AngleSystem::make(Mode::Discrete, {mp_pi() / 2}, 256);
  ClosureDescription cd = extract_closure(sys, detect_relations(sys));
  RaceFunctions rf;
  rf.fs = {LaurentPoly::cosine_pair(1, 0, Cplx(1, 0)), LaurentPoly::zero(1)};
  PositivityReport rep = positivity_check(rf, cd, 100);
  REQUIRE(rep.strict_n == 0);
  // weak ordering first fails beyond tolerance at n=2 (values -2 vs 0); the
  // tie at n=1 does not violate the weak ordering
  REQUIRE(rep.violation_n == 2);
}

TEST_CASE("tie mass warning triggers on a nearly-tied certified race") {
  AngleSystem sys = s3_angles();
  ClosureDescription cd = extract_closure(sys, detect_relations(sys));
  LaurentPoly f1 = LaurentPoly::cosine_pair(3, 0, Cplx(1, 0));
  // difference 4e-9*cos sits above the vanishing tolerance (witnesses found)
  // but below the pair strictness tolerance (every sample discarded)
  LaurentPoly f2 = f1 + LaurentPoly::cosine_pair(3, 1, Cplx(2e-9, 0));
  RaceFunctions rf;
  rf.fs = {f1, f2};
  SamplerConfig cfg;
  cfg.n_samples = 2000;
  REQUIRE_THROWS_AS(density_discrete(rf, cd, cfg, 2000000), TieMassWarning);
}

TEST_CASE("likely-tied cosets produce sandwich bounds") {
  AngleSystem sys = s3_angles();
  ClosureDescription cd = extract_closure(sys, detect_relations(sys));
  // contestants equal on every coset: f2 = f1 identically
  LaurentPoly f1 = LaurentPoly::cosine_pair(3, 0, Cplx(1, 0));
  RaceFunctions rf;
  rf.fs = {f1, f1};
  SamplerConfig cfg;
  cfg.n_samples = 5000;
  DensityReport rep = density_discrete(rf, cd, cfg);
  REQUIRE(rep.existence == Existence::BoundsOnly);
  REQUIRE(rep.lower == 0.0);
  REQUIRE(rep.upper == 1.0);
  REQUIRE(rep.lower <= rep.value.value + 1e-12);
  REQUIRE(rep.value.value <= rep.upper + 1e-12);
}

TEST_CASE("shrinking ties: relaxed thresholds decrease to the strict density") {
  AngleSystem sys = s3_angles();
  ClosureDescription cd = extract_closure(sys, detect_relations(sys));
  RaceFunctions rf = s3_race();
  SamplerConfig cfg;
  cfg.seed = 31;
  cfg.n_samples = 40000;
  DensityReport rep = density_discrete(rf, cd, cfg);

  // direct MC of P(f1 > f2 - 1/k > f3 - 2/k) via sample_Z
  auto relaxed = [&](double inv_k) {
    std::vector<ClosureEvaluator> evs;
    for (const LaurentPoly& f : rf.fs) evs.emplace_back(f, cd);
    int64_t hits = 0, n = 0;
    for (int64_t a = 0; a < cd.d; ++a) {
      Stream st = Stream::keyed(555, a, 0, 0);
      std::vector<double> phi(cd.m());
      for (int i = 0; i < 40000; ++i) {
        for (int k = 0; k < cd.m(); ++k) phi[k] = st.angle();
        double v1 = evs[0].value(a, phi), v2 = evs[1].value(a, phi),
               v3 = evs[2].value(a, phi);
        if (v1 > v2 - inv_k && v2 > v3 - inv_k) ++hits;
        ++n;
      }
    }
    return static_cast<double>(hits) / static_cast<double>(n);
  };
  double p10 = relaxed(0.1), p100 = relaxed(0.01), p1000 = relaxed(0.001);
  double se = rep.value.stderr_ + 1.0 / std::sqrt(40000.0 * 6);
  REQUIRE(p10 >= p100 - 3 * se);
  REQUIRE(p100 >= p1000 - 3 * se);
  REQUIRE(std::abs(p1000 - rep.value.value) <= 5 * se);
}

TEST_CASE("randomized planted-relation race: MC vs orbit truth") {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> base(0.4, 2.8);
  std::uniform_int_distribution<int> small(-2, 2);
  for (int trial = 0; trial < 3; ++trial) {
    PrecisionGuard guard(256);
    // two free angles + one planted combination
    Real t1(base(rng)), t2(base(rng));
    t1 = sqrt(t1);
    t2 = exp(Real(1)) / t2;
    Real t3 = 2 * mp_pi() * Rat(1, 3).convert_to<Real>() + t1 - t2;
    AngleSystem sys = AngleSystem::make(Mode::Discrete, {t1, t2, t3}, 256);
    ClosureDescription cd = extract_closure(sys, detect_relations(sys));
    REQUIRE(cd.d == 3);

    RaceFunctions rf;
    for (int j = 0; j < 2; ++j) {
      LaurentPoly f = LaurentPoly::constant(3, small(rng) * 0.25);
      for (int k = 0; k < 3; ++k)
        f = f + LaurentPoly::cosine_pair(3, k, Cplx(small(rng) * 0.5, small(rng) * 0.25));
      rf.fs.push_back(f);
    }
    if ((rf.fs[0] - rf.fs[1]).terms.empty()) continue;
    SamplerConfig cfg;
    cfg.seed = 808 + trial;
    cfg.n_samples = 60000;
    DensityReport rep = density_discrete(rf, cd, cfg);
    EstimateWithCI emp = empirical_density(rf, sys, 2e5);
    double band =
        3 * std::sqrt(rep.value.stderr_ * rep.value.stderr_ + emp.stderr_ * emp.stderr_);
    REQUIRE(std::abs(rep.value.value - emp.value) <= band + 0.02);
  }
}
