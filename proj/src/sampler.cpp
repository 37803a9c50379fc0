#include "kwr/sampler.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

namespace kwr {

void parallel_chunks(int64_t n_chunks, int threads, const std::function<void(int64_t)>& fn) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  threads = static_cast<int>(std::min<int64_t>(threads, n_chunks));
  if (threads <= 1) {
    for (int64_t i = 0; i < n_chunks; ++i) fn(i);
    return;
  }
  std::atomic<int64_t> next(0);
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex err_mu;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      while (true) {
        int64_t i = next.fetch_add(1);
        if (i >= n_chunks) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

TorusPoint sample_Z(const ClosureDescription& cd, int64_t a, Stream& stream) {
  if (cd.mode == Mode::Discrete) {
    if (cd.degenerate)
      throw DegenerateClosure("sample_Z rejected; use enumerate_orbit");
    if (a < 0 || a >= cd.d)
      throw CosetOutOfRange(std::to_string(a) + " not in [0," + std::to_string(cd.d) + ")");
  } else if (a != 0) {
    throw CosetOutOfRange("continuous closures have a single coset a=0");
  }
  const int m = cd.m();
  std::vector<double> phi(m);
  for (int k = 0; k < m; ++k) phi[k] = stream.angle();
  std::vector<Cplx> coords(cd.r);
  for (int j = 0; j < cd.r; ++j) {
    double angle = 0;
    for (int k = 0; k < m; ++k)
      if (cd.h[k][j] != 0) angle += static_cast<double>(cd.h[k][j]) * phi[k];
    Cplx z(std::cos(angle), std::sin(angle));
    coords[j] = a == 0 ? z : cd.nu_pow(j, a) * z;
  }
  return TorusPoint(std::move(coords), false);
}

std::vector<TorusPoint> enumerate_orbit(const ClosureDescription& cd) {
  if (!cd.degenerate) throw NotDegenerate("enumerate_orbit needs a degenerate closure");
  std::vector<TorusPoint> pts;
  pts.reserve(cd.d);
  for (int64_t a = 0; a < cd.d; ++a) {
    std::vector<Cplx> coords(cd.r);
    for (int j = 0; j < cd.r; ++j) coords[j] = cd.nu_pow(j, a);
    pts.emplace_back(std::move(coords), false);
  }
  return pts;
}

ClosureEvaluator::ClosureEvaluator(const LaurentPoly& f, const ClosureDescription& cd) {
  PrecisionGuard guard(cd.precision_bits);
  Real two_pi = 2 * mp_pi();
  const int m = cd.m();
  for (const auto& [e, a_e] : f.terms) {
    Term t;
    t.coeff = a_e;
    t.g.resize(m);
    for (int k = 0; k < m; ++k) {
      int64_t g = 0;
      for (int j = 0; j < cd.r; ++j) g += static_cast<int64_t>(e[j]) * cd.h[k][j];
      t.g[k] = static_cast<double>(g);
    }
    Real freq = 0;
    for (int j = 0; j < cd.r; ++j)
      if (e[j] != 0) freq += Real(static_cast<long>(e[j])) * cd.theta[j];
    t.offset.resize(cd.d);
    for (int64_t a = 0; a < cd.d; ++a)
      t.offset[a] = static_cast<double>(fmod(freq * Real(a), two_pi));
    terms_.push_back(std::move(t));
  }
  symmetric_ = f.is_real_on_torus();
  tol_ = f.real_tol();
}

std::complex<double> ClosureEvaluator::value_complex(int64_t a,
                                                     const std::vector<double>& phi) const {
  Cplx sum(0, 0);
  for (const Term& t : terms_) {
    double phase = t.offset[a];
    for (size_t k = 0; k < t.g.size(); ++k) phase += t.g[k] * phi[k];
    sum += t.coeff * Cplx(std::cos(phase), std::sin(phase));
  }
  return sum;
}

double ClosureEvaluator::value(int64_t a, const std::vector<double>& phi) const {
  Cplx sum = value_complex(a, phi);
  if (symmetric_ && std::abs(sum.imag()) >= tol_)
    throw NotRealOnTorus("imaginary part " + std::to_string(sum.imag()) + " in sampler");
  return sum.real();
}

EstimateWithCI expectation(const LaurentPoly& f, const ClosureDescription& cd,
                           const SamplerConfig& cfg) {
  cfg.validate();
  if (f.r != cd.r) throw DimensionMismatch("polynomial arity != closure arity");

  if (f.is_constant()) {
    Cplx c = f.terms.empty() ? Cplx(0, 0) : f.terms.begin()->second;
    return {c.real(), 0.0, 0, Method::ExactEnumeration};
  }
  if (cd.degenerate) {
    double sum = 0;
    for (const TorusPoint& p : enumerate_orbit(cd)) sum += f.eval(p);
    return {sum / static_cast<double>(cd.d), 0.0, cd.d, Method::ExactEnumeration};
  }

  ClosureEvaluator compiled(f, cd);
  const int m = cd.m();
  const int64_t n_chunks_per_coset = (cfg.n_samples + cfg.chunk - 1) / cfg.chunk;
  const int64_t total_chunks = n_chunks_per_coset * cd.d;
  struct ChunkOut {
    double sum = 0, sumsq = 0;
    int64_t n = 0;
  };
  std::vector<ChunkOut> out(total_chunks);
  parallel_chunks(total_chunks, cfg.threads, [&](int64_t idx) {
    int64_t a = idx / n_chunks_per_coset;
    int64_t chunk_idx = idx % n_chunks_per_coset;
    int64_t lo = chunk_idx * cfg.chunk;
    int64_t hi = std::min(cfg.n_samples, lo + cfg.chunk);
    Stream st = Stream::keyed(cfg.seed, static_cast<uint64_t>(a),
                              static_cast<uint64_t>(chunk_idx), 0x5a);
    std::vector<double> phi(m);
    ChunkOut& o = out[idx];
    for (int64_t i = lo; i < hi; ++i) {
      for (int k = 0; k < m; ++k) phi[k] = st.angle();
      double v = compiled.value(a, phi);
      o.sum += v;
      o.sumsq += v * v;
      ++o.n;
    }
  });

  // fixed-order reduction per coset, then across cosets
  double total_var = 0;
  double grand_mean = 0;
  for (int64_t a = 0; a < cd.d; ++a) {
    double s = 0, ss = 0;
    int64_t n = 0;
    for (int64_t c = 0; c < n_chunks_per_coset; ++c) {
      const ChunkOut& o = out[a * n_chunks_per_coset + c];
      s += o.sum;
      ss += o.sumsq;
      n += o.n;
    }
    double mean = s / static_cast<double>(n);
    double var = std::max(0.0, ss / static_cast<double>(n) - mean * mean);
    grand_mean += mean;
    total_var += var / static_cast<double>(n);
  }
  grand_mean /= static_cast<double>(cd.d);
  double se = std::sqrt(total_var) / static_cast<double>(cd.d);
  return {grand_mean, se, cfg.n_samples * cd.d, Method::MonteCarlo};
}

EstimateWithCI orbit_average(const LaurentPoly& f, const AngleSystem& sys, double X) {
  if (X < 1) throw Error("orbit_average needs X >= 1", 1);
  OrbitEvaluator ev(f, sys);
  if (sys.mode == Mode::Discrete) {
    int64_t n_max = static_cast<int64_t>(X);
    double sum = 0;
    for (int64_t n = 1; n <= n_max; ++n) sum += ev.value(static_cast<double>(n));
    return {sum / static_cast<double>(n_max), 0.0, n_max, Method::OrbitAverage};
  }
  // composite midpoint with step resolving the fastest oscillation
  double max_freq = 0;
  {
    PrecisionGuard guard(sys.precision_bits);
    for (const auto& [e, a] : f.terms) {
      Real fr = 0;
      for (int k = 0; k < sys.r(); ++k)
        if (e[k] != 0) fr += Real(static_cast<long>(e[k])) * sys.angles[k];
      max_freq = std::max(max_freq, std::abs(static_cast<double>(fr)));
    }
  }
  double step = max_freq > 0 ? std::min(0.1, M_PI / (4 * max_freq)) : 0.1;
  int64_t n = static_cast<int64_t>(std::ceil(X / step));
  step = X / static_cast<double>(n);
  double sum = 0;
  for (int64_t i = 0; i < n; ++i) sum += ev.value((static_cast<double>(i) + 0.5) * step);
  return {sum / static_cast<double>(n), 0.0, n, Method::OrbitAverage};
}

}  // namespace kwr
