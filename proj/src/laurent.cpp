#include "kwr/laurent.hpp"

#include <algorithm>
#include <cmath>

namespace kwr {

TorusPoint::TorusPoint(std::vector<Cplx> c, bool validate) : coords(std::move(c)) {
  if (!validate) return;
  for (const Cplx& z : coords)
    if (std::abs(std::abs(z) - 1.0) > 0x1.0p-40)
      throw Error("torus point coordinate off the unit circle", 1);
}

LaurentPoly LaurentPoly::constant(int r, Cplx c) {
  LaurentPoly f = zero(r);
  f.add_term(std::vector<int32_t>(r, 0), c);
  return f;
}

LaurentPoly LaurentPoly::monomial(int r, std::vector<int32_t> e, Cplx a) {
  if (static_cast<int>(e.size()) != r) throw DimensionMismatch("monomial exponent length");
  LaurentPoly f = zero(r);
  f.add_term(e, a);
  return f;
}

LaurentPoly LaurentPoly::cosine_pair(int r, int k, Cplx a) {
  LaurentPoly f = zero(r);
  std::vector<int32_t> e(r, 0);
  e[k] = 1;
  f.add_term(e, a);
  e[k] = -1;
  f.add_term(e, std::conj(a));
  return f;
}

void LaurentPoly::add_term(const std::vector<int32_t>& e, Cplx a) {
  if (static_cast<int>(e.size()) != r) throw DimensionMismatch("term exponent length");
  auto it = terms.find(e);
  if (it == terms.end()) {
    if (a != Cplx(0, 0)) terms.emplace(e, a);
    return;
  }
  it->second += a;
  if (it->second == Cplx(0, 0)) terms.erase(it);
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
  if (r != o.r) throw DimensionMismatch("adding polynomials of different arity");
  LaurentPoly f = *this;
  for (const auto& [e, a] : o.terms) f.add_term(e, a);
  return f;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const {
  if (r != o.r) throw DimensionMismatch("subtracting polynomials of different arity");
  LaurentPoly f = *this;
  for (const auto& [e, a] : o.terms) f.add_term(e, -a);
  return f;
}

LaurentPoly LaurentPoly::scaled(Cplx s) const {
  LaurentPoly f = zero(r);
  if (s == Cplx(0, 0)) return f;
  for (const auto& [e, a] : terms) f.terms.emplace(e, a * s);
  return f;
}

bool LaurentPoly::is_constant() const {
  for (const auto& [e, a] : terms)
    for (int32_t x : e)
      if (x != 0) return false;
  return true;
}

bool LaurentPoly::is_real_on_torus(double tol) const {
  for (const auto& [e, a] : terms) {
    std::vector<int32_t> ne(e.size());
    for (size_t i = 0; i < e.size(); ++i) ne[i] = -e[i];
    auto it = terms.find(ne);
    Cplx mirror = it == terms.end() ? Cplx(0, 0) : it->second;
    if (std::abs(mirror - std::conj(a)) > tol * (1.0 + std::abs(a))) return false;
  }
  return true;
}

double LaurentPoly::coeff_abs_sum() const {
  double s = 0;
  for (const auto& [e, a] : terms) s += std::abs(a);
  return s;
}

double LaurentPoly::real_tol() const { return 0x1.0p-30 * (1.0 + coeff_abs_sum()); }

std::complex<double> LaurentPoly::eval_complex(const TorusPoint& z) const {
  if (z.r() != r) throw DimensionMismatch("torus point arity != polynomial arity");
  Cplx sum(0, 0);
  for (const auto& [e, a] : terms) {
    Cplx m(1, 0);
    for (int k = 0; k < r; ++k) {
      int32_t ek = e[k];
      if (ek == 0) continue;
      // z^-1 = conj(z) on the torus
      Cplx base = ek > 0 ? z.coords[k] : std::conj(z.coords[k]);
      int32_t p = ek > 0 ? ek : -ek;
      Cplx acc(1, 0);
      while (p) {
        if (p & 1) acc *= base;
        base *= base;
        p >>= 1;
      }
      m *= acc;
    }
    sum += a * m;
  }
  return sum;
}

double LaurentPoly::eval(const TorusPoint& z) const {
  Cplx w = eval_complex(z);
  if (is_real_on_torus() && std::abs(w.imag()) >= real_tol())
    throw NotRealOnTorus("imaginary part " + std::to_string(w.imag()));
  return w.real();
}

nlohmann::json LaurentPoly::to_json() const {
  nlohmann::json terms_json = nlohmann::json::array();
  for (const auto& [e, a] : terms) {
    nlohmann::json t;
    t["exponents"] = e;
    t["re"] = std::to_string(a.real());
    t["im"] = std::to_string(a.imag());
    terms_json.push_back(t);
  }
  return {{"r", r}, {"terms", terms_json}};
}

LaurentPoly LaurentPoly::from_json(const nlohmann::json& j, bool require_real) {
  if (!j.contains("r") || !j.contains("terms"))
    throw ParseError("laurent polynomial needs 'r' and 'terms'");
  LaurentPoly f = zero(j["r"].get<int>());
  for (const auto& t : j["terms"]) {
    std::vector<int32_t> e = t.at("exponents").get<std::vector<int32_t>>();
    double re = 0, im = 0;
    if (t.contains("re"))
      re = t["re"].is_string() ? std::stod(t["re"].get<std::string>()) : t["re"].get<double>();
    if (t.contains("im"))
      im = t["im"].is_string() ? std::stod(t["im"].get<std::string>()) : t["im"].get<double>();
    f.add_term(e, Cplx(re, im));
  }
  if (require_real && !f.is_real_on_torus())
    throw ParseError("polynomial is not conjugate-symmetric (not real on the torus)");
  return f;
}

OrbitEvaluator::OrbitEvaluator(const LaurentPoly& f, const std::vector<Real>& theta, Mode mode,
                               int precision_bits) {
  if (static_cast<int>(theta.size()) != f.r)
    throw DimensionMismatch("angle count != polynomial arity");
  PrecisionGuard guard(precision_bits);
  Real two_pi = 2 * mp_pi();
  for (const auto& [e, a] : f.terms) {
    Real freq = 0;
    for (size_t k = 0; k < theta.size(); ++k)
      if (e[k] != 0) freq += Real(static_cast<long>(e[k])) * theta[k];
    if (mode == Mode::Discrete) {
      // reduce once at high precision; exact-lattice frequencies become 0.0
      freq = fmod(freq, two_pi);
    }
    terms_.push_back({a, static_cast<double>(freq)});
  }
  symmetric_ = f.is_real_on_torus();
  tol_ = f.real_tol();
}

std::complex<double> OrbitEvaluator::value_complex(double t) const {
  Cplx sum(0, 0);
  for (const Term& term : terms_) {
    double phase = term.freq * t;
    sum += term.coeff * Cplx(std::cos(phase), std::sin(phase));
  }
  return sum;
}

double OrbitEvaluator::value(double t) const {
  Cplx w = value_complex(t);
  if (symmetric_ && std::abs(w.imag()) >= tol_)
    throw NotRealOnTorus("imaginary part " + std::to_string(w.imag()) + " at t=" +
                         std::to_string(t));
  return w.real();
}

double orbit_value(const LaurentPoly& f, const AngleSystem& sys, double t) {
  return OrbitEvaluator(f, sys).value(t);
}

VanishingScan coset_vanishing(const LaurentPoly& f, const ClosureDescription& cd, int64_t a,
                              int64_t n_max, double tol) {
  if (cd.mode != Mode::Discrete) throw ModeMismatch("coset_vanishing needs Discrete mode");
  if (a < 0 || a >= cd.d)
    throw CosetOutOfRange(std::to_string(a) + " not in [0," + std::to_string(cd.d) + ")");
  if (n_max < 0) n_max = 10000 * cd.d;
  if (tol < 0) tol = f.real_tol();
  OrbitEvaluator ev(f, cd);
  VanishingScan scan{std::nullopt, tol};
  for (int64_t n = a; n <= n_max; n += cd.d) {
    if (std::abs(ev.value_complex(static_cast<double>(n))) > tol) {
      scan.witness = n;
      return scan;
    }
  }
  return scan;
}

VanishingScan continuous_vanishing(const LaurentPoly& f, const ClosureDescription& cd,
                                   double y_max, double tol) {
  if (cd.mode != Mode::Continuous)
    throw ModeMismatch("continuous_vanishing needs Continuous mode");
  if (tol < 0) tol = f.real_tol();
  OrbitEvaluator ev(f, cd);

  // step resolves the fastest oscillation; y_max from the smallest frequency
  // gap
  double max_freq = 0.0, min_gap = 0.0;
  {
    std::vector<double> freqs;
    PrecisionGuard guard(cd.precision_bits);
    for (const auto& [e, ce] : f.terms) {
      Real fr = 0;
      for (int k = 0; k < cd.r; ++k)
        if (e[k] != 0) fr += Real(static_cast<long>(e[k])) * cd.theta[k];
      double fd = std::abs(static_cast<double>(fr));
      if (fd > 0) freqs.push_back(fd);
      max_freq = std::max(max_freq, fd);
    }
    std::sort(freqs.begin(), freqs.end());
    freqs.erase(std::unique(freqs.begin(), freqs.end()), freqs.end());
    if (!freqs.empty()) {
      min_gap = freqs[0];
      for (size_t i = 1; i < freqs.size(); ++i)
        min_gap = std::min(min_gap, freqs[i] - freqs[i - 1]);
    }
  }
  VanishingScan scan{std::nullopt, tol};
  if (max_freq == 0.0) {
    if (std::abs(ev.value_complex(0.0)) > tol) scan.witness = 0;
    return scan;
  }
  double step = std::min(0.1, M_PI / (4 * max_freq));
  if (y_max <= 0) y_max = min_gap > 0 ? 1e3 * (2 * M_PI / min_gap) : 1e4;
  int64_t steps = static_cast<int64_t>(y_max / step) + 1;
  for (int64_t i = 0; i <= steps; ++i) {
    if (std::abs(ev.value_complex(i * step)) > tol) {
      scan.witness = i;
      return scan;
    }
  }
  return scan;
}

}  // namespace kwr
