#include "kwr/rootfind.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace kwr {

namespace {

using QPoly = std::vector<Rat>;

QPoly trim(QPoly p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

int deg(const QPoly& p) { return static_cast<int>(p.size()) - 1; }

QPoly derivative(const QPoly& p) {
  QPoly d;
  for (size_t k = 1; k < p.size(); ++k) d.push_back(Rat(static_cast<long>(k)) * p[k]);
  return trim(d);
}

QPoly monic(QPoly p) {
  p = trim(p);
  if (p.empty()) return p;
  Rat lc = p.back();
  for (Rat& c : p) c /= lc;
  return p;
}

QPoly rem(QPoly a, const QPoly& b) {
  a = trim(a);
  while (deg(a) >= deg(b) && !a.empty()) {
    Rat f = a.back() / b.back();
    int shift = deg(a) - deg(b);
    for (int i = 0; i <= deg(b); ++i) a[shift + i] -= f * b[i];
    a = trim(a);
  }
  return a;
}

QPoly divide_exact(QPoly a, const QPoly& b) {
  a = trim(a);
  QPoly q(std::max(0, deg(a) - deg(b) + 1), Rat(0));
  while (deg(a) >= deg(b) && !a.empty()) {
    Rat f = a.back() / b.back();
    int shift = deg(a) - deg(b);
    q[shift] = f;
    for (int i = 0; i <= deg(b); ++i) a[shift + i] -= f * b[i];
    a = trim(a);
  }
  if (!a.empty()) throw InternalError("polynomial division not exact");
  return trim(q);
}

QPoly poly_gcd(QPoly a, QPoly b) {
  a = trim(a);
  b = trim(b);
  while (!b.empty()) {
    QPoly r = rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

std::vector<Int> to_primitive_int(const QPoly& p) {
  Int lcm_den(1);
  for (const Rat& c : p) lcm_den = lcm(lcm_den, denominator(c));
  std::vector<Int> out;
  Int g(0);
  for (const Rat& c : p) {
    Rat scaled = c * Rat(lcm_den);
    out.push_back(numerator(scaled));
    g = gcd(g, out.back());
  }
  if (g > 1)
    for (Int& c : out) c /= g;
  if (!out.empty() && out.back() < 0)
    for (Int& c : out) c = -c;
  return out;
}

}  // namespace

std::vector<std::pair<std::vector<Int>, int>> squarefree_decompose(std::vector<Int> p) {
  QPoly f;
  for (const Int& c : p) f.emplace_back(c);
  f = trim(f);
  std::vector<std::pair<std::vector<Int>, int>> out;
  if (deg(f) < 1) return out;

  // Yun's algorithm
  QPoly fp = derivative(f);
  QPoly a = poly_gcd(f, fp);
  QPoly b = divide_exact(f, a);
  QPoly c = divide_exact(fp, a);
  QPoly d = trim([&] {
    QPoly db = derivative(b);
    QPoly r = c;
    r.resize(std::max(r.size(), db.size()), Rat(0));
    for (size_t i = 0; i < db.size(); ++i) r[i] -= db[i];
    return r;
  }());
  int k = 1;
  while (deg(b) >= 1) {
    QPoly g = poly_gcd(b, d);
    if (deg(g) >= 1) out.emplace_back(to_primitive_int(g), k);
    b = divide_exact(b, g.empty() ? QPoly{Rat(1)} : g);
    QPoly cc = divide_exact(d, g.empty() ? QPoly{Rat(1)} : g);
    QPoly db = derivative(b);
    d = cc;
    d.resize(std::max(d.size(), db.size()), Rat(0));
    for (size_t i = 0; i < db.size(); ++i) d[i] -= db[i];
    d = trim(d);
    ++k;
  }
  return out;
}

namespace {

// Durand-Kerner at machine precision on a squarefree polynomial.
std::vector<std::complex<double>> dk_roots(const std::vector<double>& c) {
  int n = static_cast<int>(c.size()) - 1;
  std::vector<std::complex<double>> z(n);
  // Cauchy-style radius
  double radius = 0;
  for (int i = 0; i < n; ++i) radius = std::max(radius, std::abs(c[i] / c[n]));
  radius = 1 + radius;
  for (int i = 0; i < n; ++i)
    z[i] = std::polar(radius * (0.5 + 0.5 * (i + 1) / n), 0.7 + 2 * M_PI * i / n);
  auto eval = [&](std::complex<double> x) {
    std::complex<double> v = c[n];
    for (int k = n - 1; k >= 0; --k) v = v * x + c[k];
    return v;
  };
  for (int iter = 0; iter < 600; ++iter) {
    double worst = 0;
    for (int i = 0; i < n; ++i) {
      std::complex<double> denom = c[n];
      for (int j = 0; j < n; ++j)
        if (j != i) denom *= z[i] - z[j];
      std::complex<double> delta = eval(z[i]) / denom;
      z[i] -= delta;
      worst = std::max(worst, std::abs(delta));
    }
    if (worst < 1e-14 * radius) break;
  }
  return z;
}

}  // namespace

std::vector<PolyRoot> integer_poly_roots(const std::vector<Int>& coeffs, int bits) {
  std::vector<PolyRoot> out;
  auto factors = squarefree_decompose(coeffs);
  PrecisionGuard guard(bits + 64);
  for (const auto& [fac, mult] : factors) {
    int n = static_cast<int>(fac.size()) - 1;
    if (n < 1) continue;
    std::vector<double> cd;
    double scale = 0;
    for (const Int& c : fac) scale = std::max(scale, std::abs(static_cast<double>(c)));
    for (const Int& c : fac) cd.push_back(static_cast<double>(c) / scale);
    std::vector<std::complex<double>> approx = dk_roots(cd);

    std::vector<MpComplex> mp_coeff;
    for (const Int& c : fac) mp_coeff.emplace_back(Real(c), Real(0));
    auto eval_both = [&](const MpComplex& x) {
      MpComplex v(Real(0), Real(0)), dv(Real(0), Real(0));
      for (int k = n; k >= 0; --k) {
        dv = dv * x + v;
        v = v * x + mp_coeff[k];
      }
      return std::make_pair(v, dv);
    };
    for (const std::complex<double>& a : approx) {
      MpComplex z(Real(a.real()), Real(a.imag()));
      // Newton polish: quadratic convergence from ~1e-14 to target bits
      int steps = 3 + static_cast<int>(std::ceil(std::log2((bits + 64) / 40.0)));
      for (int s = 0; s < steps; ++s) {
        auto [v, dv] = eval_both(z);
        if (dv.norm() == 0) throw InternalError("Newton hit a critical point");
        z = z - v / dv;
      }
      auto [v, dv] = eval_both(z);
      Real res = v.abs();
      Real tol = ldexp(Real(1), -bits / 2);
      if (res > tol)
        throw InternalError("root refinement failed to converge (residual " + res.str(6) +
                            ")");
      out.push_back({z, mult});
    }
    // roots of a squarefree factor must be pairwise distinct
    for (size_t i = out.size() - n; i < out.size(); ++i)
      for (size_t j = out.size() - n; j < i; ++j)
        if ((out[i].z - out[j].z).abs() < ldexp(Real(1), -bits / 4))
          throw InternalError("duplicate root after refinement");
  }
  return out;
}

int order_at_sqrt_inv(const std::vector<Int>& coeffs, int64_t q, int sign) {
  // arithmetic in Q(sqrt q): values a + b*sqrt(q)
  using QS = std::pair<Rat, Rat>;
  auto eval = [&](const std::vector<Rat>& p) -> QS {
    // Horner at x = sign*sqrt(q)/q: (a+b s)(x) with x = (0, sign/q)
    Rat a(0), b(0);
    for (int k = static_cast<int>(p.size()) - 1; k >= 0; --k) {
      // (a + b sqrt q) * sign*sqrt(q)/q = sign*b + (sign*a/q) sqrt q
      Rat na = Rat(sign) * b + p[k];
      Rat nb = Rat(sign) * a / q;
      a = na;
      b = nb;
    }
    return {a, b};
  };
  std::vector<Rat> p;
  for (const Int& c : coeffs) p.emplace_back(c);
  int degree = static_cast<int>(p.size()) - 1;
  for (int order = 0; order <= degree; ++order) {
    auto [a, b] = eval(p);
    if (a != 0 || b != 0) return order;
    // differentiate
    std::vector<Rat> d;
    for (size_t k = 1; k < p.size(); ++k) d.push_back(Rat(static_cast<long>(k)) * p[k]);
    p = std::move(d);
  }
  return degree + 1;
}

}  // namespace kwr
