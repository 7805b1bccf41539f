#pragma once

// Norms of periodic velocity fields. Every integral runs over the field's
// fundamental cell (the whole box unless the field came out of rescale).

#include <cmath>
#include <stdexcept>

#include "nsnorm/field.hpp"
#include "nsnorm/sampling.hpp"

namespace nsnorm {

struct NormReport {
  double l2 = 0.0;
  double l3 = 0.0;
  double l4 = 0.0;
  double grad_l2_sq = 0.0;
  double lap_l2_sq = 0.0;
  double h_half_sq = 0.0;
  double h_half_hom_sq = 0.0;
};

namespace detail {

// volume * sum_k w(|k|^2) |v_hat(k)|^2 on the fundamental cell.
template <class Weight>
double weighted_mode_sum(const SpectralField& f, Weight&& weight) {
  const SpectralField cell = fundamental_cell(f);
  double s = 0.0;
  for_each_mode(cell.grid, [&](std::size_t idx, long kx, long ky, long kz, double mult) {
    const double amp = std::norm(cell.coeffs[0][idx]) + std::norm(cell.coeffs[1][idx]) + std::norm(cell.coeffs[2][idx]);
    if (amp == 0.0) return;
    s += mult * weight(wavevector(cell.grid, kx, ky, kz).norm_sq) * amp;
  });
  return cell.grid.volume() * s;
}

inline double lp_from_samples(const CellSamples& s, double p) {
  const auto& v = s.v;
  const double integral = s.weight * fft::plane_sum(s.m, [&](std::size_t i) {
    const double mag2 = v[0][i] * v[0][i] + v[1][i] * v[1][i] + v[2][i] * v[2][i];
    return p == 2.0 ? mag2 : std::pow(mag2, 0.5 * p);
  });
  return std::pow(integral, 1.0 / p);
}

inline void check_exponent(double p) {
  if (!(p >= 1.0 && p <= 8.0)) throw std::invalid_argument("lp_norm: p must lie in [1, 8]");
}

}  // namespace detail

/// Parseval form of the squared L2 norm (exact).
inline double l2_norm_sq(const SpectralField& f) {
  return detail::weighted_mode_sum(f, [](double) { return 1.0; });
}

/// [int |v|^p dV]^{1/p} by uniform quadrature of the pointwise Euclidean
/// norm on the zero-padded (oversample * n)^3 grid. |v|^p is not
/// band-limited for p != 2, so the padding controls quadrature aliasing;
/// where |v| vanishes on whole planes (Taylor-Green) convergence is only
/// algebraic in the grid spacing.
inline double lp_norm(const SpectralField& f, double p, std::size_t oversample = 2) {
  detail::check_exponent(p);
  check_oversample(oversample);
  if (f.is_zero()) return 0.0;
  return detail::lp_from_samples(sample_cell(f, oversample, kVelocity), p);
}

/// int |grad v|^2 dV = volume * sum |k|^2 |v_hat|^2.
inline double grad_l2_norm_sq(const SpectralField& f) {
  return detail::weighted_mode_sum(f, [](double k2) { return k2; });
}

/// int |lap v|^2 dV = volume * sum |k|^4 |v_hat|^2.
inline double lap_l2_norm_sq(const SpectralField& f) {
  return detail::weighted_mode_sum(f, [](double k2) { return k2 * k2; });
}

/// Squared H^{1/2} norm with Fourier weight (1 + |k|^2)^{1/2}, or |k| for
/// the homogeneous seminorm. Only the homogeneous weight is invariant under
/// v -> lambda v(lambda x).
inline double h_half_norm_sq(const SpectralField& f, bool homogeneous) {
  if (homogeneous) return detail::weighted_mode_sum(f, [](double k2) { return std::sqrt(k2); });
  return detail::weighted_mode_sum(f, [](double k2) { return std::sqrt(1.0 + k2); });
}

/// ||v||_{L^p} / ||v||_{L^q} for q >= p.
///
/// On a finite cell Omega Hölder gives ratio <= |Omega|^{1/p - 1/q}, with
/// equality for fields of constant magnitude. The constant depends on
/// |Omega|; it is not uniform over subsets.
inline double embedding_ratio(const SpectralField& f, double p, double q, std::size_t oversample = 2) {
  detail::check_exponent(p);
  detail::check_exponent(q);
  if (q < p) throw std::invalid_argument("embedding_ratio: need q >= p");
  if (f.is_zero()) throw undefined_ratio_error("embedding_ratio: zero field");
  if (p == q) return 1.0;
  const CellSamples s = sample_cell(f, oversample, kVelocity);
  return detail::lp_from_samples(s, p) / detail::lp_from_samples(s, q);
}

/// Hölder bound |Omega|^{1/p - 1/q} for the field's fundamental cell.
inline double embedding_bound(const SpectralField& f, double p, double q) {
  const double vol = f.grid.volume() / std::pow(static_cast<double>(f.periods), 3);
  return std::pow(vol, 1.0 / p - 1.0 / q);
}

inline NormReport norm_report(const SpectralField& f, std::size_t oversample = 2) {
  NormReport r;
  const double l2sq = l2_norm_sq(f);
  r.l2 = std::sqrt(l2sq);
  if (!f.is_zero()) {
    const CellSamples s = sample_cell(f, oversample, kVelocity);
    r.l3 = detail::lp_from_samples(s, 3.0);
    r.l4 = detail::lp_from_samples(s, 4.0);
  }
  r.grad_l2_sq = grad_l2_norm_sq(f);
  r.lap_l2_sq = lap_l2_norm_sq(f);
  r.h_half_sq = h_half_norm_sq(f, false);
  r.h_half_hom_sq = h_half_norm_sq(f, true);
  return r;
}

}  // namespace nsnorm
