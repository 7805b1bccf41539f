#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "nsnorm/errors.hpp"

namespace nsnorm {

/// Uniform periodic grid on the cube [0, length)^3.
///
/// Spectral storage follows the real-to-complex layout: x is the halved
/// axis (n/2 + 1 stored modes), y and z are full. Physical samples are
/// x-fastest. Signed mode indices run over {-n/2+1, ..., n/2}; the physical
/// wavenumber is index * (2 pi / length).
struct Grid {
  std::size_t n = 0;
  double length = 2.0 * std::numbers::pi;
  double dealias_fraction = 2.0 / 3.0;

  std::size_t half() const { return n / 2 + 1; }
  std::size_t physical_size() const { return n * n * n; }
  std::size_t spectral_size() const { return n * n * half(); }
  double volume() const { return length * length * length; }
  double spacing() const { return length / static_cast<double>(n); }
  /// Fundamental wavenumber 2 pi / length.
  double k0() const { return 2.0 * std::numbers::pi / length; }

  /// Signed mode index of storage position i along a full axis.
  long signed_index(std::size_t i) const {
    return i <= n / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(n);
  }
  /// Storage position of signed index k along a full axis (k mod n).
  std::size_t storage_index(long k) const {
    const long nn = static_cast<long>(n);
    return static_cast<std::size_t>(((k % nn) + nn) % nn);
  }
  bool is_nyquist(long k) const { return std::labs(k) == static_cast<long>(n / 2); }

  /// Largest retained |index| per axis under the dealias rule.
  double dealias_cutoff() const { return dealias_fraction * static_cast<double>(n) / 2.0; }
  bool retained(long kx, long ky, long kz) const {
    const double c = dealias_cutoff() + 1e-12;
    return std::labs(kx) <= c && std::labs(ky) <= c && std::labs(kz) <= c;
  }

  /// Flat spectral offset for storage positions (iz, iy, ix).
  std::size_t spectral_offset(std::size_t iz, std::size_t iy, std::size_t ix) const {
    return (iz * n + iy) * half() + ix;
  }

  /// Sorted signed indices of one axis.
  std::vector<long> axis_indices() const {
    std::vector<long> out;
    for (long k = -static_cast<long>(n / 2) + 1; k <= static_cast<long>(n / 2); ++k) out.push_back(k);
    return out;
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.n == b.n && a.length == b.length && a.dealias_fraction == b.dealias_fraction;
  }
};

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline Grid make_grid(std::size_t n, double length = 2.0 * std::numbers::pi,
                      double dealias_fraction = 2.0 / 3.0) {
  if (!is_power_of_two(n) || n < 8 || n > 512)
    throw config_error("grid: n must be a power of two in [8, 512], got " + std::to_string(n));
  if (!(length > 0.0) || !std::isfinite(length))
    throw config_error("grid: length must be positive and finite");
  if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0))
    throw config_error("grid: dealias_fraction must lie in (0, 1]");
  return Grid{n, length, dealias_fraction};
}

/// Visit every stored mode. `weight` is 2 for modes whose Hermitian partner
/// is implicit (0 < kx < n/2) and 1 on the kx = 0 and kx = n/2 planes, so
/// sum(weight * g(|c|^2)) runs over the full lattice.
template <class Fn>
void for_each_mode(const Grid& g, Fn&& fn) {
  const std::size_t n = g.n;
  const std::size_t h = g.half();
  for (std::size_t iz = 0; iz < n; ++iz) {
    const long kz = g.signed_index(iz);
    for (std::size_t iy = 0; iy < n; ++iy) {
      const long ky = g.signed_index(iy);
      std::size_t idx = (iz * n + iy) * h;
      for (std::size_t ix = 0; ix < h; ++ix, ++idx) {
        const long kx = static_cast<long>(ix);
        const double weight = (ix == 0 || ix == n / 2) ? 1.0 : 2.0;
        fn(idx, kx, ky, kz, weight);
      }
    }
  }
}

}  // namespace nsnorm
