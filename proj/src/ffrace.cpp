#include "kwr/ffrace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace kwr {

int64_t RaceSpec::group_order() const {
  int64_t g = 0;
  for (int64_t s : class_sizes) g += s;
  return g;
}

int RaceSpec::class_index(const std::string& name) const {
  for (int i = 0; i < n_classes(); ++i)
    if (class_names[i] == name) return i;
  throw ParseError("unknown class '" + name + "'");
}

int64_t RaceSpec::class_sqrt_count(int c) const {
  int64_t total = 0;
  for (int d = 0; d < n_classes(); ++d)
    if (class_square_map[d] == c) total += class_sizes[d];
  return total;
}

void RaceSpec::validate() const {
  if (q < 2) throw ParseError("q must be a prime power >= 2");
  if (n_classes() < 1 || class_sizes[0] != 1)
    throw ParseError("first class must be the identity class of size 1");
  if (n_chars() != n_classes()) throw ParseError("character table must be square");
  const int64_t order = group_order();
  // first row trivial
  for (const Cplx& v : char_table[0])
    if (std::abs(v - Cplx(1, 0)) > 1e-12) throw ParseError("first character row must be trivial");
  // dims: sum of squares = |G|
  int64_t dim_sq = 0;
  for (int i = 0; i < n_chars(); ++i) {
    double dim = char_table[i][0].real();
    if (std::abs(char_table[i][0].imag()) > 1e-12 || dim < 1 ||
        std::abs(dim - std::round(dim)) > 1e-9)
      throw ParseError("character dimension must be a positive integer");
    dim_sq += static_cast<int64_t>(std::llround(dim * dim));
  }
  if (dim_sq != order) throw ParseError("sum of squared dimensions != group order");
  // orthonormality under the class-size weighting
  for (int i = 0; i < n_chars(); ++i)
    for (int j = 0; j <= i; ++j) {
      Cplx ip(0, 0);
      for (int c = 0; c < n_classes(); ++c)
        ip += static_cast<double>(class_sizes[c]) * char_table[i][c] *
              std::conj(char_table[j][c]);
      ip /= static_cast<double>(order);
      Cplx expect = i == j ? Cplx(1, 0) : Cplx(0, 0);
      if (std::abs(ip - expect) > 0x1.0p-30)
        throw ParseError("character rows " + std::to_string(i) + "," + std::to_string(j) +
                         " are not orthonormal");
    }
  // class_square_map well-formed, and every element has exactly one square
  int64_t sqrt_total = 0;
  for (int c = 0; c < n_classes(); ++c) {
    if (class_square_map[c] < 0 || class_square_map[c] >= n_classes())
      throw ParseError("class_square_map out of range");
    sqrt_total += class_sqrt_count(c);
  }
  if (sqrt_total != order) throw ParseError("sum of #(C^{1/2}) != group order");
  // L-polynomials: constant term 1 for nontrivial characters
  if (static_cast<int>(lpolys.size()) != n_chars())
    throw ParseError("need one lpoly entry per character (trivial may be empty)");
  for (int i = 1; i < n_chars(); ++i) {
    if (lpolys[i].empty() || lpolys[i][0] != 1)
      throw ParseError("lpoly of " + char_names[i] + " must have constant term 1");
  }
  if (contestants.size() < 2) throw ParseError("need at least two contestants");
  for (int c : contestants)
    if (c < 0 || c >= n_classes()) throw ParseError("contestant index out of range");
}

namespace {

Cplx parse_cplx_entry(const nlohmann::json& e) {
  auto parse_part = [](const nlohmann::json& v) -> double {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      Rat r = parse_rat(v.get<std::string>());
      return static_cast<double>(Rat(r));
    }
    throw ParseError("bad numeric entry " + v.dump());
  };
  if (e.is_number()) return {e.get<double>(), 0};
  if (e.is_string()) return {parse_part(e), 0};
  if (e.is_object()) {
    double re = e.contains("re") ? parse_part(e["re"]) : 0.0;
    double im = e.contains("im") ? parse_part(e["im"]) : 0.0;
    return {re, im};
  }
  throw ParseError("bad character table entry " + e.dump());
}

}  // namespace

RaceSpec RaceSpec::from_json(const nlohmann::json& j, int precision_bits) {
  RaceSpec spec;
  spec.precision_bits = precision_bits;
  try {
    spec.q = j.at("q").get<int64_t>();
    for (const auto& c : j.at("classes")) {
      spec.class_names.push_back(c.at("name").get<std::string>());
      spec.class_sizes.push_back(c.at("size").get<int64_t>());
    }
    for (const auto& row : j.at("char_table")) {
      std::vector<Cplx> r;
      for (const auto& e : row) r.push_back(parse_cplx_entry(e));
      if (r.size() != spec.class_names.size())
        throw ParseError("character row width != number of classes");
      spec.char_table.push_back(std::move(r));
    }
    if (j.contains("char_names"))
      spec.char_names = j["char_names"].get<std::vector<std::string>>();
    else
      for (size_t i = 0; i < spec.char_table.size(); ++i)
        spec.char_names.push_back("chi" + std::to_string(i));
    for (int c = 0; c < spec.n_classes(); ++c) {
      std::string to = j.at("class_square_map").at(spec.class_names[c]).get<std::string>();
      spec.class_square_map.push_back(spec.class_index(to));
    }
    spec.lpolys.resize(spec.n_chars());
    for (const auto& [name, coeffs] : j.at("lpolys").items()) {
      bool found = false;
      for (int i = 0; i < spec.n_chars(); ++i)
        if (spec.char_names[i] == name) {
          spec.lpolys[i] = coeffs.get<std::vector<int64_t>>();
          found = true;
        }
      if (!found) throw ParseError("lpoly for unknown character '" + name + "'");
    }
    if (j.contains("zeta_numerator"))
      spec.zeta_numerator = j["zeta_numerator"].get<std::vector<int64_t>>();
    if (j.contains("genus")) spec.genus = j["genus"].get<int>();
    for (const auto& name : j.at("contestants"))
      spec.contestants.push_back(spec.class_index(name.get<std::string>()));
    if (j.contains("defining_poly"))
      spec.defining_poly = j["defining_poly"].get<std::vector<std::vector<int64_t>>>();
    if (j.contains("frobenius_patterns"))
      for (const auto& [name, pat] : j["frobenius_patterns"].items()) {
        std::vector<int> p = pat.get<std::vector<int>>();
        std::sort(p.begin(), p.end());
        spec.frobenius_patterns[p] = spec.class_index(name);
      }
    if (j.contains("infinite_place_class"))
      spec.infinite_place_class =
          spec.class_index(j["infinite_place_class"].get<std::string>());
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("race spec: ") + ex.what());
  }
  spec.validate();
  return spec;
}

RaceSpec RaceSpec::from_file(const std::string& path, int precision_bits) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open race spec '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& ex) {
    throw ParseError("invalid JSON in '" + path + "': " + ex.what());
  }
  return from_json(j, precision_bits);
}

std::vector<PolyRoot> lpoly_inverse_zeros(const std::vector<int64_t>& coeffs, int64_t q,
                                          double tol, int bits) {
  if (coeffs.empty() || coeffs[0] != 1)
    throw ParseError("L-polynomial must have constant term 1");
  PrecisionGuard guard(bits + 64);
  std::vector<Int> p(coeffs.begin(), coeffs.end());
  std::vector<PolyRoot> roots = integer_poly_roots(p, bits);
  Real sq = sqrt(Real(q));
  std::vector<PolyRoot> gammas;
  for (const PolyRoot& r : roots) {
    MpComplex gamma = MpComplex(Real(1), Real(0)) / r.z;
    Real dev = abs(gamma.abs() - sq);
    if (dev > tol * sq)
      throw RHViolation("|gamma| = " + gamma.abs().str(8) + " vs sqrt(q) = " + sq.str(8));
    gammas.push_back({gamma, r.multiplicity});
  }
  return gammas;
}

std::pair<AngleSystem, ZeroRegistry> angles_from_spec(const RaceSpec& spec) {
  PrecisionGuard guard(spec.precision_bits + 64);
  ZeroRegistry reg;
  reg.ord_plus.assign(spec.n_chars(), 0);
  reg.ord_minus.assign(spec.n_chars(), 0);
  Real sq = sqrt(Real(spec.q));
  Real dedup = spec.dedup_tol_scale * sq;

  for (int chi = 1; chi < spec.n_chars(); ++chi) {
    const auto& coeffs = spec.lpolys[chi];
    int degree = static_cast<int>(coeffs.size()) - 1;
    if (degree < 1) continue;
    std::vector<Int> p(coeffs.begin(), coeffs.end());
    reg.ord_plus[chi] = order_at_sqrt_inv(p, spec.q, +1);
    reg.ord_minus[chi] = order_at_sqrt_inv(p, spec.q, -1);
    std::vector<PolyRoot> gammas =
        lpoly_inverse_zeros(coeffs, spec.q, spec.dedup_tol_scale, spec.precision_bits);
    int positive_mult = 0;
    std::vector<std::pair<Real, std::pair<MpComplex, int>>> todo;  // theta-sorted
    for (const PolyRoot& g : gammas) {
      if (g.z.im <= dedup) continue;  // conjugates and real zeros
      positive_mult += g.multiplicity;
      todo.push_back({g.z.arg(), {g.z, g.multiplicity}});
    }
    // conservation: 2*(positive) + real orders = degree
    if (2 * positive_mult + reg.ord_plus[chi] + reg.ord_minus[chi] != degree)
      throw Error("zero multiplicities of " + spec.char_names[chi] +
                      " do not account for deg L",
                  2);
    std::sort(todo.begin(), todo.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [theta, gm] : todo) {
      // deduplicate across characters ("without multiplicity")
      int found = -1;
      for (size_t k = 0; k < reg.gamma.size() && found < 0; ++k)
        if ((reg.gamma[k] - gm.first).abs() < dedup) found = static_cast<int>(k);
      if (found < 0) {
        reg.gamma.push_back(gm.first);
        reg.theta.push_back(theta);
        reg.mult.emplace_back();
        found = static_cast<int>(reg.gamma.size()) - 1;
      }
      reg.mult[found][chi] += gm.second;
    }
  }

  // conjugate closure: each positive zero must appear in the conjugate
  // character with the same order
  for (size_t k = 0; k < reg.gamma.size(); ++k)
    for (const auto& [chi, m] : reg.mult[k]) {
      int conj_chi = -1;
      for (int c2 = 1; c2 < spec.n_chars() && conj_chi < 0; ++c2) {
        bool match = true;
        for (int col = 0; col < spec.n_classes() && match; ++col)
          match = std::abs(spec.char_table[c2][col] - std::conj(spec.char_table[chi][col])) <
                  1e-9;
        if (match) conj_chi = c2;
      }
      if (conj_chi < 0) throw ParseError("character table not closed under conjugation");
      auto it = reg.mult[k].find(conj_chi);
      int m2 = it == reg.mult[k].end() ? 0 : it->second;
      if (m2 != m)
        throw Error("conjugate character zero orders differ at a registered zero", 2);
    }

  std::vector<Real> angles = reg.theta;
  angles.push_back(mp_pi());
  AngleSystem sys = AngleSystem::make(Mode::Discrete, std::move(angles), spec.precision_bits);
  return {std::move(sys), std::move(reg)};
}

ExplicitFormulaCoeffs explicit_coeffs(const RaceSpec& spec, const ZeroRegistry& reg) {
  ExplicitFormulaCoeffs out;
  const int nc = spec.n_classes();
  for (int c = 0; c < nc; ++c)
    out.r_C.push_back((Rat(1) - Rat(spec.class_sqrt_count(c), spec.class_sizes[c])) / 2);
  for (int c = 0; c < nc; ++c) {
    Cplx z(0, 0), api(0, 0);
    for (int chi = 1; chi < spec.n_chars(); ++chi) {
      z -= std::conj(spec.char_table[chi][c]) * static_cast<double>(reg.ord_plus[chi]);
      api += std::conj(spec.char_table[chi][c]) * static_cast<double>(reg.ord_minus[chi]);
    }
    if (std::abs(z.imag()) > 1e-9 || std::abs(api.imag()) > 1e-9)
      throw Error("z_C / a_pi came out complex; character data inconsistent", 2);
    out.z_C.push_back(z.real());
    out.a_pi.push_back(static_cast<double>(out.r_C[c].convert_to<double>()) - api.real());
  }
  for (size_t k = 0; k < reg.gamma.size(); ++k) {
    std::vector<Cplx> row(nc, Cplx(0, 0));
    for (const auto& [chi, m] : reg.mult[k])
      for (int c = 0; c < nc; ++c)
        row[c] += std::conj(spec.char_table[chi][c]) * static_cast<double>(m);
    out.a.push_back(std::move(row));
  }
  return out;
}

namespace {

BuiltRace build_common(const RaceSpec& spec, int64_t max_coeff, bool cumulative) {
  spec.validate();
  auto [sys0, reg0] = angles_from_spec(spec);
  ZeroRegistry reg = std::move(reg0);
  AngleSystem sys = std::move(sys0);
  ExplicitFormulaCoeffs coeffs = explicit_coeffs(spec, reg);

  PrecisionGuard guard(spec.precision_bits);
  const int r = static_cast<int>(reg.gamma.size());

  // zeta-numerator zeros (cumulative variant, genus > 0): deduplicated
  // against the character zeros; fresh ones become extra angle coordinates
  // inserted before the pi carrier
  std::vector<MpComplex> zeta_gamma;          // fresh zeros, Im > 0
  std::vector<int> zeta_mult;
  std::vector<std::pair<int, int>> zeta_onto; // (registry index, multiplicity)
  double zeta_const = 0, zeta_pi = 0;         // real-zero contributions
  double sq_d0 = std::sqrt(static_cast<double>(spec.q));
  if (cumulative && spec.genus > 0) {
    if (!spec.zeta_numerator)
      throw MissingZetaNumerator("cumulative race with genus > 0 needs zeta_numerator");
    std::vector<int64_t> zn = *spec.zeta_numerator;
    std::vector<PolyRoot> gs =
        lpoly_inverse_zeros(zn, spec.q, spec.dedup_tol_scale, spec.precision_bits);
    Real sq = sqrt(Real(spec.q));
    Real tol = spec.dedup_tol_scale * sq;
    for (const PolyRoot& g : gs) {
      if (g.z.im > tol) {
        int found = -1;
        for (size_t k = 0; k < reg.gamma.size() && found < 0; ++k)
          if ((reg.gamma[k] - g.z).abs() < tol) found = static_cast<int>(k);
        if (found >= 0) {
          zeta_onto.push_back({found, g.multiplicity});
        } else {
          int dup = -1;
          for (size_t k = 0; k < zeta_gamma.size() && dup < 0; ++k)
            if ((zeta_gamma[k] - g.z).abs() < tol) dup = static_cast<int>(k);
          if (dup >= 0)
            zeta_mult[dup] += g.multiplicity;
          else {
            zeta_gamma.push_back(g.z);
            zeta_mult.push_back(g.multiplicity);
          }
        }
      } else if (abs(g.z.im) <= tol) {
        double gamma_d = static_cast<double>(g.z.re);
        double w = gamma_d / (gamma_d - 1.0);
        if (gamma_d > 0)
          zeta_const -= 2.0 * w * g.multiplicity;
        else
          zeta_pi -= 2.0 * w * g.multiplicity;
      }
    }
  }

  // rebuild the angle system when zeta zeros add coordinates
  int r_extra = static_cast<int>(zeta_gamma.size());
  if (r_extra > 0) {
    std::vector<Real> angles = reg.theta;
    for (const MpComplex& g : zeta_gamma) angles.push_back(g.arg());
    angles.push_back(mp_pi());
    sys = AngleSystem::make(Mode::Discrete, std::move(angles), spec.precision_bits);
  }
  const int arity = r + r_extra + 1;
  const int pi_idx = arity - 1;

  RaceFunctions rf;
  rf.error_term_present = true;
  double sq_d = std::sqrt(static_cast<double>(spec.q));
  for (int ci : spec.contestants) {
    rf.names.push_back(spec.class_names[ci]);
    double r_c = coeffs.r_C[ci].convert_to<double>();
    LaurentPoly f = LaurentPoly::zero(arity);
    if (!cumulative) {
      f.add_term(std::vector<int32_t>(arity, 0), Cplx(r_c + coeffs.z_C[ci], 0));
      f = f + LaurentPoly::cosine_pair(arity, pi_idx, Cplx(coeffs.a_pi[ci] / 2, 0));
      for (int k = 0; k < r; ++k)
        f = f + LaurentPoly::cosine_pair(arity, k, -coeffs.a[k][ci]);
    } else {
      double qq = static_cast<double>(spec.q);
      f.add_term(std::vector<int32_t>(arity, 0), Cplx(r_c * (qq + sq_d) / (qq - 1), 0));
      f = f + LaurentPoly::cosine_pair(arity, pi_idx,
                                       Cplx(r_c * (qq - sq_d) / (2 * (qq - 1)), 0));
      // nontrivial characters, weighted gamma/(gamma-1)
      for (int k = 0; k < r; ++k) {
        Cplx gamma = reg.gamma[k].to_double();
        Cplx w = gamma / (gamma - Cplx(1, 0));
        Cplx coeff(0, 0);
        for (const auto& [chi, m] : reg.mult[k])
          coeff += std::conj(spec.char_table[chi][ci]) * static_cast<double>(m);
        std::vector<int32_t> e(arity, 0);
        e[k] = 1;
        f.add_term(e, -coeff * w);
        e[k] = -1;
        f.add_term(e, -std::conj(coeff * w));
      }
      // real zeros of nontrivial characters at +-sqrt(q), weighted
      Cplx const_extra(zeta_const, 0), pi_extra(zeta_pi, 0);
      for (int chi = 1; chi < spec.n_chars(); ++chi) {
        if (reg.ord_plus[chi]) {
          double w = sq_d0 / (sq_d0 - 1);
          const_extra -= std::conj(spec.char_table[chi][ci]) *
                         (w * static_cast<double>(reg.ord_plus[chi]));
        }
        if (reg.ord_minus[chi]) {
          double w = -sq_d0 / (-sq_d0 - 1);
          pi_extra -= std::conj(spec.char_table[chi][ci]) *
                      (w * static_cast<double>(reg.ord_minus[chi]));
        }
      }
      if (std::abs(const_extra.imag()) > 1e-9 || std::abs(pi_extra.imag()) > 1e-9)
        throw Error("cumulative real-zero weights came out complex", 2);
      f.add_term(std::vector<int32_t>(arity, 0), Cplx(const_extra.real(), 0));
      f = f + LaurentPoly::cosine_pair(arity, pi_idx, Cplx(pi_extra.real() / 2, 0));
      // zeta zeros sharing a character-zero coordinate
      for (const auto& [k, m] : zeta_onto) {
        Cplx gamma = reg.gamma[k].to_double();
        Cplx w = gamma / (gamma - Cplx(1, 0));
        std::vector<int32_t> e(arity, 0);
        e[k] = 1;
        f.add_term(e, -2.0 * static_cast<double>(m) * w);
        e[k] = -1;
        f.add_term(e, -2.0 * static_cast<double>(m) * std::conj(w));
      }
      // fresh zeta-zero coordinates, weight -2 m gamma/(gamma-1)
      for (int k = 0; k < r_extra; ++k) {
        Cplx gamma = zeta_gamma[k].to_double();
        Cplx w = gamma / (gamma - Cplx(1, 0));
        std::vector<int32_t> e(arity, 0);
        e[r + k] = 1;
        f.add_term(e, -2.0 * static_cast<double>(zeta_mult[k]) * w);
        e[r + k] = -1;
        f.add_term(e, -2.0 * static_cast<double>(zeta_mult[k]) * std::conj(w));
      }
    }
    if (!f.is_real_on_torus())
      throw Error("race function is not real on the torus; character data inconsistent", 2);
    rf.fs.push_back(std::move(f));
  }

  RelationLattice lat = detect_relations(sys, max_coeff, spec.precision_bits);
  ClosureDescription cd = extract_closure(sys, lat);
  return {std::move(rf), std::move(sys), std::move(lat), std::move(cd), std::move(reg),
          std::move(coeffs)};
}

}  // namespace

BuiltRace build_race(const RaceSpec& spec, int64_t max_coeff) {
  return build_common(spec, max_coeff, false);
}

BuiltRace build_cumulative_race(const RaceSpec& spec, int64_t max_coeff) {
  return build_common(spec, max_coeff, true);
}

}  // namespace kwr
