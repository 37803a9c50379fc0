#include "kwr/moments.hpp"

#include <cmath>

namespace kwr {

namespace {

struct Degree1 {
  double c;
  std::vector<Cplx> a;  // coefficient on X_k (conj on X_k^{-1})
};

Degree1 parse_degree1(const LaurentPoly& f) {
  if (!f.is_real_on_torus())
    throw NotRealOnTorus("closed-form moments need a conjugate-symmetric polynomial");
  Degree1 out;
  out.c = 0;
  out.a.assign(f.r, Cplx(0, 0));
  for (const auto& [e, coeff] : f.terms) {
    int support = -1, val = 0;
    for (int k = 0; k < f.r; ++k) {
      if (e[k] == 0) continue;
      if (support >= 0 || std::abs(e[k]) > 1)
        throw Error("polynomial is not of degree <= 1 shape", 1);
      support = k;
      val = e[k];
    }
    if (support < 0)
      out.c = coeff.real();
    else if (val == 1)
      out.a[support] = coeff;
  }
  return out;
}

// Exact integer relation vectors implied by the decomposition data: one per
// degenerate angle, one per pi-rational pair combination.
IntMat known_relation_rows(const ClosureDescription& cd, const std::vector<int>& degenerate,
                           const std::vector<MomentReport::PairRelation>& pairs) {
  IntMat rows;
  auto push = [&](const Rat& two_pi_coeff, int i, int j, int sign) {
    Int q = denominator(two_pi_coeff);
    IntVec v(cd.r + 1, Int(0));
    v[0] = -numerator(two_pi_coeff);
    v[i + 1] += q;
    if (j >= 0) v[j + 1] += sign * q;
    rows.push_back(std::move(v));
  };
  for (int i : degenerate) push(cd.c[i], i, -1, 0);
  for (const auto& p : pairs) {
    std::vector<int64_t> e(cd.r, 0);
    e[p.i] = 1;
    e[p.j] = p.sign;
    auto [cc, bb] = cd.decompose_combination(e);
    push(cc, p.i, p.j, p.sign);
  }
  return rows;
}

}  // namespace

MomentReport closed_form_moments(const LaurentPoly& f, const ClosureDescription& cd,
                                 const RelationLattice& lat) {
  if (cd.mode != Mode::Discrete)
    throw ModeMismatch("closed_form_moments is stated for the Discrete setting");
  if (f.r != cd.r) throw DimensionMismatch("polynomial arity != closure arity");
  Degree1 deg1 = parse_degree1(f);

  MomentReport rep;
  for (int i = 0; i < cd.r; ++i)
    (cd.angle_in_pi_q(i) ? rep.degenerate : rep.nondegenerate).push_back(i);

  // pi*Q membership of theta_i +- theta_j decided from the exact
  // decomposition, never from fresh floating tests
  for (size_t ii = 0; ii < rep.nondegenerate.size(); ++ii)
    for (size_t jj = ii + 1; jj < rep.nondegenerate.size(); ++jj) {
      int i = rep.nondegenerate[ii], j = rep.nondegenerate[jj];
      for (int sign : {+1, -1}) {
        std::vector<int64_t> e(cd.r, 0);
        e[i] = 1;
        e[j] = sign;
        auto [cc, bb] = cd.decompose_combination(e);
        bool in_pi_q = true;
        for (const Rat& q : bb) in_pi_q = in_pi_q && q == 0;
        if (in_pi_q) rep.pair_relations.push_back({i, j, sign});
      }
    }

  // the lattice must not know more than the split + pair relations
  {
    IntMat known = known_relation_rows(cd, rep.degenerate, rep.pair_relations);
    RatMat known_q, lat_q;
    for (const auto& v : known) known_q.emplace_back(v.begin(), v.end());
    for (const auto& v : lat.relations) lat_q.emplace_back(v.begin(), v.end());
    if (rank(lat_q) > rank(known_q))
      throw UnsupportedRelationShape(
          "lattice has a relation among nondegenerate angles beyond pair form; "
          "use Monte Carlo moments");
  }

  for (int64_t a = 0; a < cd.d; ++a) {
    double mean = deg1.c;
    for (int k : rep.degenerate) mean += 2 * (deg1.a[k] * cd.nu_pow(k, a)).real();

    double var = 0;
    for (int k : rep.nondegenerate) var += 2 * std::norm(deg1.a[k]);
    for (const auto& p : rep.pair_relations) {
      Cplx phase = cd.nu_pow(p.i, a) *
                   (p.sign > 0 ? cd.nu_pow(p.j, a) : std::conj(cd.nu_pow(p.j, a)));
      Cplx aj = p.sign > 0 ? deg1.a[p.j] : std::conj(deg1.a[p.j]);
      var += 4 * (deg1.a[p.i] * aj * phase).real();
    }
    rep.mean.push_back(mean);
    rep.variance.push_back(var);
  }
  return rep;
}

std::vector<bool> moment_tie_exclusion(const RaceFunctions& rf, const ClosureDescription& cd,
                                       const RelationLattice& lat) {
  rf.validate();
  std::vector<MomentReport> reports;
  for (const LaurentPoly& f : rf.fs) reports.push_back(closed_form_moments(f, cd, lat));
  double scale = 1.0;
  for (const LaurentPoly& f : rf.fs) scale = std::max(scale, f.coeff_abs_sum());
  const double tol = 1e-9 * scale;
  std::vector<bool> excluded;
  for (int j = 0; j + 1 < rf.D(); ++j) {
    bool all_cosets = true;
    for (int64_t a = 0; a < cd.d && all_cosets; ++a) {
      bool mean_sep = std::abs(reports[j].mean[a] - reports[j + 1].mean[a]) > tol;
      bool var_sep = std::abs(reports[j].variance[a] - reports[j + 1].variance[a]) > tol;
      all_cosets = mean_sep || var_sep;
    }
    excluded.push_back(all_cosets);
  }
  return excluded;
}

}  // namespace kwr
