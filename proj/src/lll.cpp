#include "kwr/lll.hpp"

namespace kwr {

namespace {


Rat dot(const RatVec& a, const IntVec& b) {
  Rat s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * Rat(b[i]);
  return s;
}

Rat dot(const RatVec& a, const RatVec& b) {
  Rat s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct Gso {
  std::vector<RatVec> star;  // orthogonalized rows
  std::vector<Rat> norm;     // |b*_i|^2
  RatMat mu;

  void compute(const IntMat& b) {
    const size_t k = b.size();
    const size_t n = k ? b[0].size() : 0;
    star.assign(k, RatVec(n, Rat(0)));
    norm.assign(k, Rat(0));
    mu.assign(k, RatVec(k, Rat(0)));
    for (size_t i = 0; i < k; ++i) {
      mu[i][i] = 1;
      for (size_t j = 0; j < n; ++j) star[i][j] = Rat(b[i][j]);
      for (size_t j = 0; j < i; ++j) {
        mu[i][j] = norm[j] == 0 ? Rat(0) : dot(star[j], b[i]) / norm[j];
        for (size_t t = 0; t < n; ++t) star[i][t] -= mu[i][j] * star[j][t];
      }
      norm[i] = dot(star[i], star[i]);
    }
  }
};

Int round_rat(const Rat& q) {
  Int num = numerator(q), den = denominator(q);
  Int twice = 2 * num + den;  // floor((2n + d) / (2d)) = round(n/d) toward +inf at .5
  Int r = twice / (2 * den);
  if (twice < 0 && twice % (2 * den) != 0) r -= 1;
  return r;
}

}  // namespace

void lll_reduce(IntMat& basis) {
  const size_t k = basis.size();
  if (k < 2) return;
  const Rat delta(99, 100);

  Gso g;
  g.compute(basis);

  auto size_reduce = [&](size_t i, size_t j) {
    Int r = round_rat(g.mu[i][j]);
    if (r == 0) return;
    for (size_t t = 0; t < basis[i].size(); ++t) basis[i][t] -= r * basis[j][t];
    for (size_t t = 0; t <= j; ++t) g.mu[i][t] -= Rat(r) * g.mu[j][t];
  };

  size_t i = 1;
  while (i < k) {
    for (size_t j = i; j-- > 0;) size_reduce(i, j);
    Rat lhs = g.norm[i];
    Rat rhs = (delta - g.mu[i][i - 1] * g.mu[i][i - 1]) * g.norm[i - 1];
    if (lhs >= rhs) {
      ++i;
    } else {
      std::swap(basis[i], basis[i - 1]);
      g.compute(basis);  // small dimensions; recompute keeps this simple
      if (i > 1) --i;
    }
  }
}

}  // namespace kwr
