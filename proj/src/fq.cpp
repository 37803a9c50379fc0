#include "kwr/fq.hpp"

#include <algorithm>
#include <cstring>

namespace kwr {
namespace fq {

bool is_prime_int(int64_t q) {
  if (q < 2) return false;
  for (int64_t d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

Modulus::Modulus(int64_t q, const std::vector<uint16_t>& monic_P) : q_(q) {
  if (!is_prime_int(q)) throw UnsupportedField("q = " + std::to_string(q) + " is not prime");
  if (q >= 64) throw UnsupportedField("q too large for the enumeration kernel");
  n_ = static_cast<int>(monic_P.size()) - 1;
  if (n_ < 1 || n_ >= kMaxN) throw UnsupportedField("modulus degree out of range");
  if (monic_P[n_] % q != 1) throw Error("modulus must be monic", 1);
  std::memset(P_, 0, sizeof(P_));
  for (int i = 0; i <= n_; ++i) P_[i] = monic_P[i] % q;
  scalar_inv_.assign(q, 0);
  for (uint32_t s = 1; s < static_cast<uint32_t>(q); ++s)
    for (uint32_t t = 1; t < static_cast<uint32_t>(q); ++t)
      if (s * t % q == 1) scalar_inv_[s] = t;
}

Elem Modulus::one() const {
  Elem e;
  e.c[0] = 1;
  return e;
}

Elem Modulus::from_coeffs(const std::vector<int64_t>& coeffs) const {
  std::vector<uint32_t> work(std::max(coeffs.size(), size_t(1)), 0);
  for (size_t i = 0; i < coeffs.size(); ++i) {
    int64_t v = coeffs[i] % q_;
    if (v < 0) v += q_;
    work[i] = static_cast<uint32_t>(v);
  }
  for (int k = static_cast<int>(work.size()) - 1; k >= n_; --k) {
    uint32_t s = work[k] % q_;
    work[k] = 0;
    if (s == 0) continue;
    uint32_t neg = static_cast<uint32_t>(q_) - s;
    for (int i = 0; i < n_; ++i) work[k - n_ + i] = (work[k - n_ + i] + neg * P_[i]) % q_;
  }
  Elem e;
  for (int i = 0; i < n_ && i < static_cast<int>(work.size()); ++i)
    e.c[i] = static_cast<uint16_t>(work[i] % q_);
  return e;
}

void Modulus::add(const Elem& a, const Elem& b, Elem& out) const {
  for (int i = 0; i < n_; ++i) {
    uint32_t s = a.c[i] + b.c[i];
    out.c[i] = static_cast<uint16_t>(s >= static_cast<uint32_t>(q_) ? s - q_ : s);
  }
  for (int i = n_; i < kMaxN; ++i) out.c[i] = 0;
}

void Modulus::sub(const Elem& a, const Elem& b, Elem& out) const {
  for (int i = 0; i < n_; ++i) {
    uint32_t s = a.c[i] + static_cast<uint32_t>(q_) - b.c[i];
    out.c[i] = static_cast<uint16_t>(s >= static_cast<uint32_t>(q_) ? s - q_ : s);
  }
  for (int i = n_; i < kMaxN; ++i) out.c[i] = 0;
}

void Modulus::mul(const Elem& a, const Elem& b, Elem& out) const {
  uint32_t acc[2 * kMaxN] = {0};
  for (int i = 0; i < n_; ++i) {
    uint32_t ai = a.c[i];
    if (!ai) continue;
    const uint16_t* bc = b.c;
    uint32_t* row = acc + i;
    for (int j = 0; j < n_; ++j) row[j] += ai * bc[j];
  }
  for (int k = 2 * n_ - 2; k >= n_; --k) {
    uint32_t s = acc[k] % q_;
    if (!s) continue;
    uint32_t neg = static_cast<uint32_t>(q_) - s;
    uint32_t* row = acc + (k - n_);
    for (int i = 0; i < n_; ++i) row[i] += neg * P_[i];
  }
  for (int i = 0; i < n_; ++i) out.c[i] = static_cast<uint16_t>(acc[i] % q_);
  for (int i = n_; i < kMaxN; ++i) out.c[i] = 0;
}

void Modulus::scalar_mul(const Elem& a, uint32_t s, Elem& out) const {
  s %= q_;
  for (int i = 0; i < n_; ++i) out.c[i] = static_cast<uint16_t>(a.c[i] * s % q_);
  for (int i = n_; i < kMaxN; ++i) out.c[i] = 0;
}

bool Modulus::is_zero(const Elem& a) const {
  for (int i = 0; i < n_; ++i)
    if (a.c[i]) return false;
  return true;
}

bool Modulus::equal(const Elem& a, const Elem& b) const {
  for (int i = 0; i < n_; ++i)
    if (a.c[i] != b.c[i]) return false;
  return true;
}

namespace {

int arr_deg(const uint16_t* c, int cap) {
  for (int i = cap - 1; i >= 0; --i)
    if (c[i]) return i;
  return -1;
}

}  // namespace

Elem Modulus::inverse(const Elem& a) const {
  uint16_t r0[kMaxN + 1] = {0}, r1[kMaxN + 1] = {0};
  uint16_t s0[kMaxN + 1] = {0}, s1[kMaxN + 1] = {0};
  for (int i = 0; i <= n_; ++i) r0[i] = P_[i];
  for (int i = 0; i < n_; ++i) r1[i] = a.c[i];
  s1[0] = 1;
  int d0 = n_, d1 = arr_deg(r1, n_);
  if (d1 < 0) throw Error("inverse of zero in residue ring", 3);
  while (d1 > 0) {
    while (d0 >= d1) {
      uint32_t f = static_cast<uint32_t>(r0[d0]) * scalar_inv_[r1[d1]] % q_;
      int shift = d0 - d1;
      if (f) {
        uint32_t neg = static_cast<uint32_t>(q_) - f;
        for (int i = 0; i <= d1; ++i)
          r0[shift + i] = static_cast<uint16_t>((r0[shift + i] + neg * r1[i]) % q_);
        for (int i = 0; i + shift <= n_; ++i)
          s0[shift + i] = static_cast<uint16_t>((s0[shift + i] + neg * s1[i]) % q_);
      }
      d0 = arr_deg(r0, d0 + 1);
      if (d0 < d1) break;
    }
    std::swap_ranges(r0, r0 + kMaxN + 1, r1);
    std::swap_ranges(s0, s0 + kMaxN + 1, s1);
    std::swap(d0, d1);
  }
  if (d1 != 0) throw Error("element is not a unit (gcd with modulus nontrivial)", 2);
  uint32_t inv_lead = scalar_inv_[r1[0]];
  Elem out;
  for (int i = 0; i < n_; ++i) out.c[i] = static_cast<uint16_t>(s1[i] * inv_lead % q_);
  return out;
}

Elem Modulus::pow(const Elem& a, int64_t e) const {
  Elem base = a, result = one(), sq;
  while (e > 0) {
    if (e & 1) mul(result, base, result);
    mul(base, base, sq);
    base = sq;
    e >>= 1;
  }
  return result;
}

int Modulus::sqr_character(const Elem& a) const {
  if (is_zero(a)) return 0;
  int64_t size = 1;
  for (int i = 0; i < n_; ++i) size *= q_;
  Elem r = pow(a, (size - 1) / 2);
  return equal(r, one()) ? 1 : -1;
}

RPoly rpoly_trim(const Modulus& R, RPoly p) {
  while (!p.c.empty() && R.is_zero(p.c.back())) p.c.pop_back();
  return p;
}

RPoly rpoly_mul(const Modulus& R, const RPoly& a, const RPoly& b) {
  if (a.c.empty() || b.c.empty()) return {};
  RPoly out;
  out.c.assign(a.c.size() + b.c.size() - 1, R.zero());
  Elem tmp;
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (R.is_zero(a.c[i])) continue;
    for (size_t j = 0; j < b.c.size(); ++j) {
      R.mul(a.c[i], b.c[j], tmp);
      R.add(out.c[i + j], tmp, out.c[i + j]);
    }
  }
  return rpoly_trim(R, out);
}

RPoly rpoly_rem(const Modulus& R, RPoly a, const RPoly& b) {
  a = rpoly_trim(R, a);
  if (b.c.empty()) throw InternalError("remainder by zero polynomial");
  Elem lead_inv = R.inverse(b.c.back());
  Elem f, tmp;
  while (!a.c.empty() && a.deg() >= b.deg()) {
    R.mul(a.c.back(), lead_inv, f);
    int shift = a.deg() - b.deg();
    for (int i = 0; i <= b.deg(); ++i) {
      R.mul(f, b.c[i], tmp);
      R.sub(a.c[shift + i], tmp, a.c[shift + i]);
    }
    a = rpoly_trim(R, a);
  }
  return a;
}

RPoly rpoly_gcd(const Modulus& R, RPoly a, RPoly b) {
  a = rpoly_trim(R, a);
  b = rpoly_trim(R, b);
  while (!b.c.empty()) {
    RPoly r = rpoly_rem(R, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.c.empty()) {
    Elem inv = R.inverse(a.c.back());
    Elem tmp;
    for (Elem& c : a.c) {
      R.mul(c, inv, tmp);
      c = tmp;
    }
  }
  return a;
}

RPoly rpoly_derivative(const Modulus& R, const RPoly& p) {
  RPoly d;
  for (size_t k = 1; k < p.c.size(); ++k) {
    Elem e;
    R.scalar_mul(p.c[k], static_cast<uint32_t>(k % R.q()), e);
    d.c.push_back(e);
  }
  return rpoly_trim(R, d);
}

Elem rpoly_resultant(const Modulus& R, RPoly a, RPoly b) {
  a = rpoly_trim(R, a);
  b = rpoly_trim(R, b);
  Elem res = R.one(), tmp;
  while (true) {
    if (b.c.empty()) {
      if (a.deg() > 0) return R.zero();
      return res;
    }
    if (b.deg() == 0) {
      Elem p = R.pow(b.c[0], a.deg());
      R.mul(res, p, tmp);
      return tmp;
    }
    RPoly r = rpoly_rem(R, a, b);
    int da = a.deg(), db = b.deg(), dr = r.deg();
    Elem lc_pow = R.pow(b.c.back(), da - (dr < 0 ? 0 : dr));
    R.mul(res, lc_pow, tmp);
    res = tmp;
    if ((da & 1) && (db & 1)) {
      Elem neg;
      R.sub(R.zero(), res, neg);
      res = neg;
    }
    a = std::move(b);
    b = std::move(r);
  }
}

namespace {

// Frobenius machinery on A = R[X]/(fbar), fbar monic squarefree of degree m.
struct FrobeniusCtx {
  const Modulus& R;
  RPoly fbar;
  int m;
  std::vector<uint16_t> mat;           // n x n, mat[col*n + row]: sigma(t^col)
  std::vector<std::vector<Elem>> psi;  // psi[j] = (X^q)^j mod fbar

  FrobeniusCtx(const Modulus& Rm, const RPoly& f) : R(Rm), fbar(f), m(f.deg()) {
    const int n = R.n();
    Elem u = R.pow(R.from_coeffs({0, 1}), R.q());
    mat.assign(static_cast<size_t>(n) * n, 0);
    Elem ui = R.one();
    for (int col = 0; col < n; ++col) {
      for (int row = 0; row < n; ++row) mat[col * n + row] = ui.c[row];
      if (col + 1 < n) {
        Elem next;
        R.mul(ui, u, next);
        ui = next;
      }
    }
    RPoly x;
    x.c.assign(2, R.zero());
    x.c[1] = R.one();
    RPoly p = x, acc;
    acc.c.assign(1, R.one());
    int64_t e = R.q();
    while (e > 0) {
      if (e & 1) acc = rpoly_rem(R, rpoly_mul(R, acc, p), fbar);
      p = rpoly_rem(R, rpoly_mul(R, p, p), fbar);
      e >>= 1;
    }
    psi.resize(m);
    RPoly pj;
    pj.c.assign(1, R.one());
    for (int j = 0; j < m; ++j) {
      std::vector<Elem> coeffs(m, R.zero());
      for (int i = 0; i <= pj.deg() && i < m; ++i) coeffs[i] = pj.c[i];
      psi[j] = std::move(coeffs);
      if (j + 1 < m) pj = rpoly_rem(R, rpoly_mul(R, pj, acc), fbar);
    }
  }

  Elem sigma(const Elem& c) const {
    const int n = R.n();
    uint32_t acc[kMaxN] = {0};
    for (int col = 0; col < n; ++col) {
      uint32_t ci = c.c[col];
      if (!ci) continue;
      const uint16_t* column = mat.data() + static_cast<size_t>(col) * n;
      for (int row = 0; row < n; ++row) acc[row] += ci * column[row];
    }
    Elem out;
    for (int row = 0; row < n; ++row)
      out.c[row] = static_cast<uint16_t>(acc[row] % R.q());
    return out;
  }

  void frobenius(std::vector<Elem>& v) const {
    std::vector<Elem> out(m, R.zero());
    Elem s, tmp;
    for (int j = 0; j < m; ++j) {
      s = sigma(v[j]);
      if (R.is_zero(s)) continue;
      for (int i = 0; i < m; ++i) {
        R.mul(s, psi[j][i], tmp);
        R.add(out[i], tmp, out[i]);
      }
    }
    v = std::move(out);
  }
};

}  // namespace

int classify_pattern(const Modulus& R, const RPoly& fbar_in,
                     const std::vector<std::vector<int>>& candidates) {
  RPoly fbar = rpoly_trim(R, fbar_in);
  const int m = fbar.deg();
  if (m < 1) throw Error("defining polynomial degenerates mod P", 2);

  RPoly deriv = rpoly_derivative(R, fbar);
  std::vector<int> alive;
  for (size_t i = 0; i < candidates.size(); ++i) alive.push_back(static_cast<int>(i));

  if (R.q() != 2) {
    // resultant doubles as the ramification check and the Stickelberger
    // discriminant
    Elem res = rpoly_resultant(R, fbar, deriv);
    if (R.is_zero(res)) return -1;
    Elem disc = res;
    if ((static_cast<int64_t>(m) * (m - 1) / 2) % 2 == 1) {
      Elem neg;
      R.sub(R.zero(), disc, neg);
      disc = neg;
    }
    int chi = R.sqr_character(disc);
    int want_parity = chi == 1 ? (m % 2) : ((m + 1) % 2);
    std::vector<int> filtered;
    for (int idx : alive)
      if (static_cast<int>(candidates[idx].size()) % 2 == want_parity)
        filtered.push_back(idx);
    alive = std::move(filtered);
  } else {
    RPoly g = rpoly_gcd(R, fbar, deriv);
    if (g.deg() > 0) return -1;
  }

  if (alive.empty()) throw Error("no declared pattern matches the factorization", 2);
  if (alive.size() == 1) return alive[0];

  FrobeniusCtx ctx(R, fbar);
  std::vector<Elem> v(ctx.m, R.zero());
  v[1] = R.one();  // v = X
  for (int k = 1; k <= m && alive.size() > 1; ++k) {
    for (int step = 0; step < R.n(); ++step) ctx.frobenius(v);
    RPoly diff;
    diff.c = v;
    Elem one = R.one();
    R.sub(diff.c[1], one, diff.c[1]);
    RPoly g = rpoly_gcd(R, rpoly_trim(R, diff), fbar);
    int rk = std::max(0, g.deg());
    std::vector<int> filtered;
    for (int idx : alive) {
      int expect = 0;
      for (int d : candidates[idx])
        if (k % d == 0) expect += d;
      if (expect == rk) filtered.push_back(idx);
    }
    alive = std::move(filtered);
  }
  if (alive.size() != 1)
    throw Error("patterns indistinguishable by root counts up to deg f", 2);
  return alive[0];
}

std::vector<uint16_t> decode_monic(int64_t q, int n, uint32_t index) {
  std::vector<uint16_t> c(n + 1, 0);
  for (int i = 0; i < n; ++i) {
    c[i] = static_cast<uint16_t>(index % q);
    index = static_cast<uint32_t>(index / q);
  }
  c[n] = 1;
  return c;
}

std::string poly_to_string(int64_t q, const std::vector<uint16_t>& coeffs) {
  (void)q;
  std::string out;
  for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i) {
    if (!coeffs[i]) continue;
    if (!out.empty()) out += "+";
    if (i == 0 || coeffs[i] != 1) out += std::to_string(coeffs[i]);
    if (i >= 1) out += i == 1 ? "t" : "t^" + std::to_string(i);
  }
  return out.empty() ? "0" : out;
}

}  // namespace fq
}  // namespace kwr
