#pragma once

// Thin FFTW wrapper: cached 3D r2c/c2r plans plus the padding and
// truncation maps between spectra of different sizes. All transforms are
// out-of-place and thread-safe; plan creation is serialized.

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <cstdlib>
#include <map>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace nsnorm {

using Complex = std::complex<double>;

namespace fft {

/// Worker cap from NSNORM_THREADS (default: hardware concurrency).
/// Results never depend on this value.
inline std::size_t thread_count() {
  if (const char* env = std::getenv("NSNORM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0, count). Each index is independent.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers = std::min(thread_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

/// Sum of term(p) over the m^3 points of a cube. Partial sums are taken per
/// z-plane and combined in plane order, so the result is bit-stable for any
/// worker count.
template <class Term>
double plane_sum(std::size_t m, Term&& term) {
  std::vector<double> partial(m, 0.0);
  const std::size_t plane = m * m;
  parallel_for(m, [&](std::size_t iz) {
    double s = 0.0;
    const std::size_t base = iz * plane;
    for (std::size_t p = 0; p < plane; ++p) s += term(base + p);
    partial[iz] = s;
  });
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

namespace detail {

class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan forward(std::size_t m) { return get(m, true); }
  fftw_plan backward(std::size_t m) { return get(m, false); }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t m, bool fwd) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_pair(m, fwd);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    const int d = static_cast<int>(m);
    const std::size_t real_size = m * m * m;
    const std::size_t spec_size = m * m * (m / 2 + 1);
    double* r = fftw_alloc_real(real_size);
    fftw_complex* c = fftw_alloc_complex(spec_size);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = fwd ? fftw_plan_dft_r2c_3d(d, d, d, r, c, flags)
                         : fftw_plan_dft_c2r_3d(d, d, d, c, r, flags);
    fftw_free(r);
    fftw_free(c);
    if (plan == nullptr) throw std::runtime_error("fftw: plan creation failed for m=" + std::to_string(m));
    plans_.emplace(key, plan);
    return plan;
  }

  std::mutex mutex_;
  std::map<std::pair<std::size_t, bool>, fftw_plan> plans_;
};

}  // namespace detail

inline std::size_t spectral_size(std::size_t m) { return m * m * (m / 2 + 1); }

/// Unnormalized synthesis: out(x) = sum_k spec(k) e^{i k x} on an m^3 grid.
inline void inverse(std::size_t m, std::span<const Complex> spec, std::span<double> out) {
  if (spec.size() != spectral_size(m) || out.size() != m * m * m)
    throw std::invalid_argument("fft::inverse: size mismatch");
  std::vector<Complex> scratch(spec.begin(), spec.end());  // c2r destroys its input
  fftw_execute_dft_c2r(detail::PlanCache::instance().backward(m),
                       reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
}

/// Analysis normalized by 1/m^3, the inverse of `inverse`.
inline void forward(std::size_t m, std::span<const double> in, std::span<Complex> spec) {
  if (spec.size() != spectral_size(m) || in.size() != m * m * m)
    throw std::invalid_argument("fft::forward: size mismatch");
  fftw_execute_dft_r2c(detail::PlanCache::instance().forward(m), const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(spec.data()));
  const double scale = 1.0 / static_cast<double>(m * m * m);
  for (auto& c : spec) c *= scale;
}

namespace detail {

// Targets of source position i (size n) on a full axis of size m >= n.
// A Nyquist entry is split evenly between +n/2 and -n/2.
inline int axis_targets(std::size_t i, std::size_t n, std::size_t m, std::size_t (&dst)[2], double (&w)[2]) {
  if (m == n) {
    dst[0] = i;
    w[0] = 1.0;
    return 1;
  }
  if (i == n / 2) {
    dst[0] = n / 2;
    dst[1] = m - n / 2;
    w[0] = w[1] = 0.5;
    return 2;
  }
  dst[0] = i < n / 2 ? i : m - (n - i);
  w[0] = 1.0;
  return 1;
}

}  // namespace detail

/// Zero-pads an n-spectrum to an m-spectrum (m >= n). The padded synthesis
/// is the trigonometric interpolant of the original samples.
inline std::vector<Complex> pad(std::span<const Complex> src, std::size_t n, std::size_t m) {
  if (m < n) throw std::invalid_argument("fft::pad: target smaller than source");
  std::vector<Complex> dst(spectral_size(m), Complex{0.0, 0.0});
  const std::size_t hn = n / 2 + 1;
  const std::size_t hm = m / 2 + 1;
  for (std::size_t iz = 0; iz < n; ++iz) {
    std::size_t tz[2];
    double wz[2];
    const int cz = detail::axis_targets(iz, n, m, tz, wz);
    for (std::size_t iy = 0; iy < n; ++iy) {
      std::size_t ty[2];
      double wy[2];
      const int cy = detail::axis_targets(iy, n, m, ty, wy);
      for (std::size_t ix = 0; ix < hn; ++ix) {
        const double wx = (ix == n / 2 && m != n) ? 0.5 : 1.0;
        const Complex c = src[(iz * n + iy) * hn + ix];
        if (c == Complex{}) continue;
        for (int a = 0; a < cz; ++a)
          for (int b = 0; b < cy; ++b) dst[(tz[a] * m + ty[b]) * hm + ix] += c * (wx * wy[b] * wz[a]);
      }
    }
  }
  return dst;
}

/// Keeps the modes of an m-spectrum with |k_axis| < n/2 (n <= m); the
/// Nyquist planes of the result are zero.
inline std::vector<Complex> truncate(std::span<const Complex> src, std::size_t m, std::size_t n) {
  if (n > m) throw std::invalid_argument("fft::truncate: target larger than source");
  std::vector<Complex> dst(spectral_size(n), Complex{0.0, 0.0});
  const std::size_t hn = n / 2 + 1;
  const std::size_t hm = m / 2 + 1;
  const long half = static_cast<long>(n / 2);
  auto src_pos = [&](long k) { return static_cast<std::size_t>(k >= 0 ? k : static_cast<long>(m) + k); };
  for (std::size_t iz = 0; iz < n; ++iz) {
    const long kz = iz <= n / 2 ? static_cast<long>(iz) : static_cast<long>(iz) - static_cast<long>(n);
    if (std::labs(kz) >= half) continue;
    for (std::size_t iy = 0; iy < n; ++iy) {
      const long ky = iy <= n / 2 ? static_cast<long>(iy) : static_cast<long>(iy) - static_cast<long>(n);
      if (std::labs(ky) >= half) continue;
      for (std::size_t ix = 0; ix + 1 < hn; ++ix)
        dst[(iz * n + iy) * hn + ix] = src[(src_pos(kz) * m + src_pos(ky)) * hm + ix];
    }
  }
  return dst;
}

}  // namespace fft
}  // namespace nsnorm
