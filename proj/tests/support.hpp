#pragma once

#include <cmath>
#include <numbers>

#include "nsnorm/nsnorm.hpp"

namespace nsnorm::testing {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kPi3 = kPi * kPi * kPi;

// Brute-force quadrature values (tests/oracles/fixture_oracles.py).
inline constexpr double kTaylorGreenL2Sq = 62.01255336059961;
inline constexpr double kTaylorGreenGradSq = 186.0376600817989;
inline constexpr double kTaylorGreenLapSq = 558.1129802453964;
inline constexpr double kTaylorGreenL3 = 3.444711935922582;
inline constexpr double kTaylorGreenL4 = 2.3219626180211055;
inline constexpr double kTaylorGreenGradL6 = 2.3734641066907574;
inline constexpr double kCosModeL2 = 11.136655993663412;
inline constexpr double kCosModeSobolevRatio = 0.1854144026946833;
inline constexpr double kCosModeHHalf = 175.39798799989052;
inline constexpr double kCosModeHHalfHom = 124.02510672119926;
inline constexpr double kAbcL2Sq = 744.1506403271954;

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

inline double max_abs(const SpectralField& f) {
  double m = 0.0;
  for (const auto& c : f.coeffs)
    for (const auto& v : c) m = std::max(m, std::abs(v));
  return m;
}

/// v = (0, cos x, 0)
inline SpectralField cos_mode(const Grid& g) { return cosine_mode(g, 1, 1, 0, 0, 1.0); }

}  // namespace nsnorm::testing
