#include "kwr/density.hpp"

#include <algorithm>
#include <cmath>

namespace kwr {

void RaceFunctions::validate() const {
  if (D() < 2) throw Error("a race needs at least two contestants", 1);
  for (const LaurentPoly& f : fs) {
    if (f.r != r()) throw DimensionMismatch("race functions have mixed arity");
    if (!f.is_real_on_torus())
      throw NotRealOnTorus("race function is not conjugate-symmetric");
  }
}

RaceFunctions RaceFunctions::permuted(const std::vector<int>& order) const {
  if (static_cast<int>(order.size()) != D()) throw DimensionMismatch("permutation size");
  RaceFunctions out;
  out.error_term_present = error_term_present;
  for (int idx : order) {
    out.fs.push_back(fs.at(idx));
    if (!names.empty()) out.names.push_back(names.at(idx));
  }
  return out;
}

std::vector<double> pair_tolerances(const RaceFunctions& rf) {
  std::vector<double> tol;
  for (int j = 0; j + 1 < rf.D(); ++j)
    tol.push_back(0x1.0p-30 *
                  (1.0 + rf.fs[j].coeff_abs_sum() + rf.fs[j + 1].coeff_abs_sum()));
  return tol;
}

namespace {

double wilson_halfwidth(double k, double n) {
  const double z = 1.0;
  double denom = n + z * z;
  return z * std::sqrt(std::max(0.0, k * (n - k) / n + z * z / 4)) / denom;
}

// binomial stderr with Wilson fallback when the estimate hugs {0,1}
double binom_se(double k, double n) {
  if (n <= 0) return 0;
  double p = k / n;
  double se = std::sqrt(std::max(0.0, p * (1 - p) / n));
  if (p < 5 * se || 1 - p < 5 * se || se == 0) se = std::max(se, wilson_halfwidth(k, n));
  return se;
}

struct CosetMC {
  double strict = 0, weak = 0, discarded = 0;
  int64_t n = 0;
};

// Monte Carlo tallies on one coset. A sample with any adjacent |diff| below
// tolerance is discarded from the strict tally (it still counts as weakly
// ordered); the discarded fraction quantifies floating-point tie mass.
CosetMC run_coset_mc(const std::vector<ClosureEvaluator>& evs, const std::vector<double>& tol,
                     const ClosureDescription& cd, int64_t a, const SamplerConfig& cfg,
                     uint64_t salt) {
  const int D = static_cast<int>(evs.size());
  const int m = cd.m();
  const int64_t n_chunks = (cfg.n_samples + cfg.chunk - 1) / cfg.chunk;
  std::vector<CosetMC> out(n_chunks);
  parallel_chunks(n_chunks, cfg.threads, [&](int64_t ci) {
    int64_t lo = ci * cfg.chunk;
    int64_t hi = std::min(cfg.n_samples, lo + cfg.chunk);
    Stream st = Stream::keyed(cfg.seed, static_cast<uint64_t>(a) ^ salt,
                              static_cast<uint64_t>(ci), 0xd1);
    std::vector<double> phi(m), vals(D);
    CosetMC& o = out[ci];
    for (int64_t i = lo; i < hi; ++i) {
      for (int k = 0; k < m; ++k) phi[k] = st.angle();
      for (int j = 0; j < D; ++j) vals[j] = evs[j].value(a, phi);
      bool strict = true, weak = true, tie = false;
      for (int j = 0; j + 1 < D; ++j) {
        double diff = vals[j] - vals[j + 1];
        if (std::abs(diff) <= tol[j]) tie = true;
        if (diff <= tol[j]) strict = false;
        if (diff < -tol[j]) weak = false;
      }
      if (tie)
        o.discarded += 1;
      else if (strict)
        o.strict += 1;
      if (weak) o.weak += 1;
      o.n += 1;
    }
  });
  CosetMC total;
  for (const CosetMC& o : out) {
    total.strict += o.strict;
    total.weak += o.weak;
    total.discarded += o.discarded;
    total.n += o.n;
  }
  return total;
}

DensityReport degenerate_density(const RaceFunctions& rf, const ClosureDescription& cd) {
  std::vector<double> tol = pair_tolerances(rf);
  std::vector<OrbitEvaluator> evs;
  for (const LaurentPoly& f : rf.fs) evs.emplace_back(f, cd);
  const int D = rf.D();
  int64_t strict_count = 0, weak_count = 0;
  bool any_tie = false;
  DensityReport rep;
  rep.d = cd.d;
  rep.precision_bits = cd.precision_bits;
  for (int64_t a = 0; a < cd.d; ++a) {
    std::vector<double> vals(D);
    for (int j = 0; j < D; ++j) vals[j] = evs[j].value(static_cast<double>(a));
    CosetReport cr;
    cr.exact = true;
    bool strict = true, weak = true;
    for (int j = 0; j + 1 < D; ++j) {
      double diff = vals[j] - vals[j + 1];
      bool tied = std::abs(diff) <= tol[j];
      any_tie = any_tie || tied;
      cr.pair_status.push_back(tied ? TieStatus::LikelyTied : TieStatus::WitnessFound);
      cr.pair_witness.push_back(tied ? -1 : a);
      if (diff <= tol[j]) strict = false;
      if (diff < -tol[j]) weak = false;
    }
    if (strict) {
      ++strict_count;
      if (!rep.positivity_witness) rep.positivity_witness = a;
    }
    if (weak) ++weak_count;
    cr.p_strict = strict ? 1 : 0;
    cr.p_weak = weak ? 1 : 0;
    rep.per_coset.push_back(std::move(cr));
  }
  double ds = static_cast<double>(cd.d);
  rep.lower = static_cast<double>(strict_count) / ds;
  rep.upper = rf.error_term_present ? static_cast<double>(weak_count) / ds : rep.lower;
  rep.value = {rep.lower, 0.0, cd.d, Method::ExactEnumeration};
  // Without an error term the density is exactly the strict count. With one,
  // equality needs a tie-free orbit.
  rep.existence =
      (!rf.error_term_present || !any_tie) ? Existence::Exists : Existence::BoundsOnly;
  if (rep.existence == Existence::Exists) rep.upper = rep.lower;
  return rep;
}

}  // namespace

DensityReport density_discrete(const RaceFunctions& rf, const ClosureDescription& cd,
                               const SamplerConfig& cfg, int64_t n_max) {
  rf.validate();
  cfg.validate();
  if (rf.r() != cd.r) throw DimensionMismatch("race arity != closure arity");
  if (cd.mode != Mode::Discrete) throw ModeMismatch("density_discrete needs a Discrete closure");
  if (n_max < 0) n_max = 10000 * cd.d;

  if (cd.degenerate) {
    DensityReport rep = degenerate_density(rf, cd);
    rep.n_max = n_max;
    return rep;
  }

  std::vector<double> tol = pair_tolerances(rf);
  const int D = rf.D();
  std::vector<ClosureEvaluator> evs;
  for (const LaurentPoly& f : rf.fs) evs.emplace_back(f, cd);

  DensityReport rep;
  rep.d = cd.d;
  rep.precision_bits = cd.precision_bits;
  rep.n_max = n_max;
  bool all_certified = true;
  double lower_sum = 0, upper_sum = 0, strict_sum = 0;
  double var_strict = 0;

  for (int64_t a = 0; a < cd.d; ++a) {
    CosetReport cr;
    for (int j = 0; j + 1 < D; ++j) {
      VanishingScan scan = coset_vanishing(rf.fs[j] - rf.fs[j + 1], cd, a, n_max);
      cr.pair_status.push_back(scan.witness ? TieStatus::WitnessFound : TieStatus::LikelyTied);
      cr.pair_witness.push_back(scan.witness.value_or(-1));
    }
    CosetMC mc = run_coset_mc(evs, tol, cd, a, cfg, 0);
    double n_strict_eff = static_cast<double>(mc.n) - mc.discarded;
    cr.p_strict = n_strict_eff > 0 ? mc.strict / n_strict_eff : 0.0;
    cr.p_weak = mc.n > 0 ? mc.weak / static_cast<double>(mc.n) : 0.0;
    cr.se_strict = binom_se(mc.strict, n_strict_eff);
    cr.se_weak = binom_se(mc.weak, static_cast<double>(mc.n));
    cr.discarded_fraction = mc.n > 0 ? mc.discarded / static_cast<double>(mc.n) : 0.0;

    bool certified = cr.certified();
    if (certified && cr.discarded_fraction > 1e-3)
      throw TieMassWarning("coset " + std::to_string(a) + " discarded fraction " +
                           std::to_string(cr.discarded_fraction) +
                           " despite tie witnesses (raise samples or review inputs)");
    all_certified = all_certified && certified;

    strict_sum += cr.p_strict;
    var_strict += cr.se_strict * cr.se_strict;
    if (certified) {
      lower_sum += cr.p_strict;
      upper_sum += cr.p_strict;
    } else {
      upper_sum += cr.p_weak;
    }
    rep.per_coset.push_back(std::move(cr));
  }

  double ds = static_cast<double>(cd.d);
  rep.existence = all_certified ? Existence::Exists : Existence::BoundsOnly;
  rep.value = {strict_sum / ds, std::sqrt(var_strict) / ds, cfg.n_samples * cd.d,
               Method::MonteCarlo};
  rep.lower = lower_sum / ds;
  rep.upper = upper_sum / ds;

  // cheap positivity probe for the report
  {
    std::vector<OrbitEvaluator> oevs;
    for (const LaurentPoly& f : rf.fs) oevs.emplace_back(f, cd);
    int64_t probe_max = std::min<int64_t>(n_max, 10 * cd.d + 100);
    for (int64_t n = 0; n <= probe_max && !rep.positivity_witness; ++n) {
      bool strict = true;
      double prev = oevs[0].value(static_cast<double>(n));
      for (int j = 1; j < D && strict; ++j) {
        double v = oevs[j].value(static_cast<double>(n));
        strict = prev - v > tol[j - 1];
        prev = v;
      }
      if (strict) rep.positivity_witness = n;
    }
  }
  return rep;
}

DensityReport density_continuous(const RaceFunctions& rf, const ClosureDescription& cd,
                                 const SamplerConfig& cfg, double y_max) {
  rf.validate();
  cfg.validate();
  if (rf.r() != cd.r) throw DimensionMismatch("race arity != closure arity");
  if (cd.mode != Mode::Continuous)
    throw ModeMismatch("density_continuous needs a Continuous closure");

  std::vector<double> tol = pair_tolerances(rf);
  const int D = rf.D();
  std::vector<ClosureEvaluator> evs;
  for (const LaurentPoly& f : rf.fs) evs.emplace_back(f, cd);

  DensityReport rep;
  rep.d = 1;
  rep.precision_bits = cd.precision_bits;
  CosetReport cr;
  for (int j = 0; j + 1 < D; ++j) {
    VanishingScan scan = continuous_vanishing(rf.fs[j] - rf.fs[j + 1], cd, y_max);
    cr.pair_status.push_back(scan.witness ? TieStatus::WitnessFound : TieStatus::LikelyTied);
    cr.pair_witness.push_back(scan.witness.value_or(-1));
  }
  CosetMC mc = run_coset_mc(evs, tol, cd, 0, cfg, 0);
  double n_strict_eff = static_cast<double>(mc.n) - mc.discarded;
  cr.p_strict = n_strict_eff > 0 ? mc.strict / n_strict_eff : 0.0;
  cr.p_weak = mc.n > 0 ? mc.weak / static_cast<double>(mc.n) : 0.0;
  cr.se_strict = binom_se(mc.strict, n_strict_eff);
  cr.se_weak = binom_se(mc.weak, static_cast<double>(mc.n));
  cr.discarded_fraction = mc.n > 0 ? mc.discarded / static_cast<double>(mc.n) : 0.0;
  bool certified = cr.certified();
  if (certified && cr.discarded_fraction > 1e-3)
    throw TieMassWarning("discarded fraction " + std::to_string(cr.discarded_fraction) +
                         " despite tie witnesses");
  rep.existence = certified ? Existence::Exists : Existence::BoundsOnly;
  rep.value = {cr.p_strict, cr.se_strict, mc.n, Method::MonteCarlo};
  rep.lower = certified ? cr.p_strict : 0.0;
  rep.upper = certified ? cr.p_strict : cr.p_weak;
  rep.per_coset.push_back(std::move(cr));
  return rep;
}

EstimateWithCI empirical_density(const RaceFunctions& rf, const AngleSystem& sys, double X) {
  rf.validate();
  if (X < 1) throw Error("empirical_density needs X >= 1", 1);
  std::vector<double> tol = pair_tolerances(rf);
  const int D = rf.D();
  std::vector<OrbitEvaluator> evs;
  for (const LaurentPoly& f : rf.fs) evs.emplace_back(f, sys);

  auto strict_at = [&](double t) -> int {
    // 1 strict, 0 not, -1 discarded (numerical tie)
    double prev = evs[0].value(t);
    bool strict = true, tie = false;
    for (int j = 1; j < D; ++j) {
      double v = evs[j].value(t);
      double diff = prev - v;
      if (std::abs(diff) <= tol[j - 1]) tie = true;
      if (diff <= tol[j - 1]) strict = false;
      prev = v;
    }
    if (tie) return -1;
    return strict ? 1 : 0;
  };

  double count = 0, total = 0;
  if (sys.mode == Mode::Discrete) {
    int64_t n_max = static_cast<int64_t>(X);
    for (int64_t n = 1; n <= n_max; ++n) {
      total += 1;
      count += strict_at(static_cast<double>(n)) == 1 ? 1 : 0;
    }
  } else {
    double max_freq = 0;
    {
      PrecisionGuard guard(sys.precision_bits);
      for (const LaurentPoly& f : rf.fs)
        for (const auto& [e, a] : f.terms) {
          Real fr = 0;
          for (int k = 0; k < sys.r(); ++k)
            if (e[k] != 0) fr += Real(static_cast<long>(e[k])) * sys.angles[k];
          max_freq = std::max(max_freq, std::abs(static_cast<double>(fr)));
        }
    }
    double step = max_freq > 0 ? std::min(0.1, M_PI / (4 * max_freq)) : 0.1;
    int64_t n = static_cast<int64_t>(std::ceil(X / step));
    for (int64_t i = 0; i < n; ++i) {
      total += 1;
      count += strict_at((static_cast<double>(i) + 0.5) * (X / static_cast<double>(n))) == 1
                   ? 1
                   : 0;
    }
  }
  double p = total > 0 ? count / total : 0.0;
  double se = total > 0 ? std::sqrt(std::max(0.0, p * (1 - p) / total)) : 0.0;
  return {p, se, static_cast<int64_t>(total), Method::OrbitAverage};
}

PositivityReport positivity_check(const RaceFunctions& rf, const ClosureDescription& cd,
                                  int64_t n_max) {
  rf.validate();
  if (n_max < 1) throw Error("positivity_check needs n_max >= 1", 1);
  std::vector<double> tol = pair_tolerances(rf);
  const int D = rf.D();
  std::vector<OrbitEvaluator> evs;
  for (const LaurentPoly& f : rf.fs) evs.emplace_back(f, cd);

  PositivityReport rep;
  auto inspect = [&](double t) {
    bool strict = true, weak = true;
    double prev = evs[0].value(t);
    for (int j = 1; j < D; ++j) {
      double v = evs[j].value(t);
      double diff = prev - v;
      if (diff <= tol[j - 1]) strict = false;
      if (diff < -tol[j - 1]) weak = false;
      prev = v;
    }
    return std::make_pair(strict, weak);
  };

  if (cd.mode == Mode::Discrete) {
    for (int64_t n = 0; n <= n_max; ++n) {
      auto [strict, weak] = inspect(static_cast<double>(n));
      if (strict && !rep.strict_n) rep.strict_n = n;
      if (!weak && !rep.violation_n) rep.violation_n = n;
      if (rep.strict_n && rep.violation_n) break;
    }
  } else {
    double max_freq = 0;
    {
      PrecisionGuard guard(cd.precision_bits);
      for (const LaurentPoly& f : rf.fs)
        for (const auto& [e, a] : f.terms) {
          Real fr = 0;
          for (int k = 0; k < cd.r; ++k)
            if (e[k] != 0) fr += Real(static_cast<long>(e[k])) * cd.theta[k];
          max_freq = std::max(max_freq, std::abs(static_cast<double>(fr)));
        }
    }
    double step = max_freq > 0 ? std::min(0.1, M_PI / (4 * max_freq)) : 0.1;
    for (double y = 0; y <= static_cast<double>(n_max); y += step) {
      auto [strict, weak] = inspect(y);
      if (strict && !rep.strict_y) rep.strict_y = y;
      if (!weak && !rep.violation_y) rep.violation_y = y;
      if (rep.strict_y && rep.violation_y) break;
    }
  }
  return rep;
}

}  // namespace kwr
