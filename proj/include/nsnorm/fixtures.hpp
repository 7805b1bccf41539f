#pragma once

// Closed-form and random test fields. Trigonometric fixtures are built
// mode by mode, so their coefficients are exact in binary.

#include <cmath>
#include <cstdint>
#include <random>

#include "nsnorm/field.hpp"

namespace nsnorm {

/// v = A (sin x cos y cos z, -cos x sin y cos z, 0) on the grid's unit cell
/// (coordinates scaled by 2 pi / length).
inline SpectralField taylor_green(const Grid& g, double amplitude) {
  SpectralField f(g);
  const Complex cx{0.0, -amplitude / 8.0};  // sin(k.x) carries -i/2, times A/4
  for (long sy : {-1L, 1L})
    for (long sz : {-1L, 1L}) {
      add_real_mode(f, 0, 1, sy, sz, cx);
      add_real_mode(f, 1, sy, 1, sz, -cx);
    }
  return f;
}

/// Arnold-Beltrami-Childress flow (a sin z + c cos y, b sin x + a cos z,
/// c sin y + b cos x); curl v = v when length = 2 pi.
inline SpectralField abc_flow(const Grid& g, double a, double b, double c) {
  SpectralField f(g);
  const Complex sin_c{0.0, -0.5};
  const Complex cos_c{0.5, 0.0};
  add_real_mode(f, 0, 0, 0, 1, a * sin_c);
  add_real_mode(f, 0, 0, 1, 0, c * cos_c);
  add_real_mode(f, 1, 1, 0, 0, b * sin_c);
  add_real_mode(f, 1, 0, 0, 1, a * cos_c);
  add_real_mode(f, 2, 0, 1, 0, c * sin_c);
  add_real_mode(f, 2, 1, 0, 0, b * cos_c);
  return f;
}

/// amplitude * cos(k.x) in component `comp`.
inline SpectralField cosine_mode(const Grid& g, int comp, long kx, long ky, long kz, double amplitude = 1.0) {
  SpectralField f(g);
  add_real_mode(f, comp, kx, ky, kz, Complex{amplitude / 2.0, 0.0});
  return f;
}

namespace detail {

inline bool upper_half(long kx, long ky, long kz) {
  return kx > 0 || (kx == 0 && (ky > 0 || (ky == 0 && kz > 0)));
}

template <class Accept>
SpectralField random_field(const Grid& g, double energy_slope, long k_max, std::uint64_t seed, int components,
                           Accept&& accept) {
  if (k_max < 1 || k_max >= static_cast<long>(g.n / 2))
    throw config_error("random field: k_max must lie in [1, n/2 - 1]");
  SpectralField f(g);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double k0 = g.k0();
  for (long kz = -k_max; kz <= k_max; ++kz)
    for (long ky = -k_max; ky <= k_max; ++ky)
      for (long kx = 0; kx <= k_max; ++kx) {
        if (!upper_half(kx, ky, kz)) continue;
        const long k2 = kx * kx + ky * ky + kz * kz;
        if (k2 > k_max * k_max || !accept(kx, ky, kz)) continue;
        const double amp = std::pow(k0 * std::sqrt(static_cast<double>(k2)), energy_slope) / std::sqrt(2.0);
        for (int c = 0; c < components; ++c) {
          const double re = normal(rng);
          const double im = normal(rng);
          add_real_mode(f, c, kx, ky, kz, Complex{amp * re, amp * im} / 2.0);
        }
      }
  return leray_project(std::move(f));
}

}  // namespace detail

/// Gaussian solenoidal field with coefficient amplitude ~ |k|^energy_slope on
/// 0 < |k| <= k_max (integer index norm). Deterministic per seed.
inline SpectralField random_solenoidal(const Grid& g, double energy_slope, long k_max, std::uint64_t seed) {
  return detail::random_field(g, energy_slope, k_max, seed, 3, [](long, long, long) { return true; });
}

/// z-independent random solenoidal field with v_z = 0.
inline SpectralField random_planar(const Grid& g, double energy_slope, long k_max, std::uint64_t seed) {
  return detail::random_field(g, energy_slope, k_max, seed, 2, [](long, long, long kz) { return kz == 0; });
}

}  // namespace nsnorm
