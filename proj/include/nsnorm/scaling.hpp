#pragma once

// The Navier-Stokes scale transformation v_lambda(x, t) = lambda v(lambda x,
// lambda^2 t), P_lambda = lambda^2 P(lambda x, lambda^2 t), for integer
// lambda on the periodic box.
//
// For integer lambda the map is an exact index remap: mode k of v becomes
// mode lambda k of v_lambda with amplitude times lambda. The result has
// period length / lambda, and norms integrate over that cell, which
// reproduces the whole-space laws
//   |v_lambda|^p_{L^p} = lambda^{p-3} |v|^p_{L^p},   |v_lambda|_{H^1/2 hom} = |v|_{H^1/2 hom}.

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nsnorm/norms.hpp"
#include "nsnorm/solver.hpp"

namespace nsnorm {

inline constexpr double kLadderTolerance = 1e-9;
inline constexpr double kInvarianceTolerance = 1e-10;
inline constexpr double kCovarianceTolerance = 1e-9;
/// Modes below this fraction of the peak amplitude count as roundoff in rescale.
inline constexpr double kRoundoffFloor = 1e-12;

struct ScalingRow {
  long lambda = 1;
  double p = 0.0;
  double measured = 0.0;   // |v_lambda|^p / |v|^p
  double predicted = 0.0;  // lambda^{p-3}
  double abs_error() const { return std::abs(measured - predicted); }
  /// |measured / predicted - 1|
  double rel_error() const { return std::abs(measured / predicted - 1.0); }
};

struct ScalingReport {
  long lambda = 1;
  std::vector<ScalingRow> rows;
  double h_half_hom_ratio = 0.0;
  double h_half_inhom_ratio = 0.0;
  double ns_residual_covariance = 0.0;
  double pressure_mismatch = 0.0;
};

/// v -> lambda v(lambda x): exact spectral remap on the same grid, time
/// relabeled t -> t / lambda^2, periods multiplied by lambda. Throws
/// rescale_overflow_error if a populated mode leaves |k_axis| < n/2. Modes
/// below kRoundoffFloor of the peak amplitude (transform noise in fields
/// read back from physical samples) are dropped.
inline SpectralField rescale(const SpectralField& f, long lambda) {
  if (lambda < 1) throw std::invalid_argument("rescale: lambda must be a positive integer");
  const double lam = static_cast<double>(lambda);
  SpectralField out(f.grid);
  out.time = f.time / (lam * lam);
  out.periods = f.periods * lambda;
  if (lambda == 1) {
    out.coeffs = f.coeffs;
    return out;
  }
  const long limit = static_cast<long>(f.grid.n / 2);
  double peak = 0.0;
  for (const auto& c : f.coeffs)
    for (const auto& v : c) peak = std::max(peak, std::abs(v));
  const double floor = kRoundoffFloor * peak;
  for_each_mode(f.grid, [&](std::size_t idx, long kx, long ky, long kz, double) {
    const bool populated =
        std::abs(f.coeffs[0][idx]) > floor || std::abs(f.coeffs[1][idx]) > floor || std::abs(f.coeffs[2][idx]) > floor;
    if (!populated) return;
    const long tx = lambda * kx, ty = lambda * ky, tz = lambda * kz;
    if (std::labs(tx) >= limit || std::labs(ty) >= limit || std::labs(tz) >= limit)
      throw rescale_overflow_error("rescale: lambda=" + std::to_string(lambda) + " maps mode (" + std::to_string(kx) + "," +
                                       std::to_string(ky) + "," + std::to_string(kz) + ") outside |k| < " +
                                       std::to_string(limit),
                                   lambda);
    const std::size_t dst = detail::offset_of(f.grid, tx, ty, tz);
    for (int c = 0; c < 3; ++c) out.coeffs[c][dst] = lam * f.coeffs[c][idx];
  });
  return out;
}

/// One row per p: measured |v_lambda|^p_{L^p} / |v|^p_{L^p} against lambda^{p-3}.
inline std::vector<ScalingRow> verify_lp_ladder(const SpectralField& f, long lambda, std::span<const double> p_list,
                                                std::size_t oversample = 2) {
  if (f.is_zero()) throw undefined_ratio_error("verify_lp_ladder: zero field");
  const SpectralField scaled_field = rescale(f, lambda);
  const CellSamples base = sample_cell(f, oversample, kVelocity);
  const CellSamples image = sample_cell(scaled_field, oversample, kVelocity);
  std::vector<ScalingRow> rows;
  for (double p : p_list) {
    detail::check_exponent(p);
    ScalingRow r;
    r.lambda = lambda;
    r.p = p;
    r.measured = std::pow(detail::lp_from_samples(image, p) / detail::lp_from_samples(base, p), p);
    r.predicted = std::pow(static_cast<double>(lambda), p - 3.0);
    rows.push_back(r);
  }
  return rows;
}

/// (homogeneous ratio, inhomogeneous ratio) of squared H^{1/2} norms of
/// v_lambda and v. Only the homogeneous ratio is expected to be 1.
inline std::pair<double, double> verify_h_half(const SpectralField& f, long lambda) {
  if (f.is_zero()) throw undefined_ratio_error("verify_h_half: zero field");
  const SpectralField s = rescale(f, lambda);
  return {h_half_norm_sq(s, true) / h_half_norm_sq(f, true), h_half_norm_sq(s, false) / h_half_norm_sq(f, false)};
}

namespace detail {

// Relative l2 mismatch between `image` and the remap k -> lambda k of
// `source` with amplitude factor `weight`, over |m_axis| < n/2.
template <std::size_t N>
double remap_mismatch(const Grid& g, const std::array<const Spectrum*, N>& image,
                      const std::array<const Spectrum*, N>& source, long lambda, double weight) {
  const long limit = static_cast<long>(g.n / 2);
  double diff = 0.0, scale_a = 0.0, scale_b = 0.0;
  for_each_mode(g, [&](std::size_t idx, long kx, long ky, long kz, double w) {
    if (std::labs(kx) >= limit || std::labs(ky) >= limit || std::labs(kz) >= limit) return;
    const bool divisible = kx % lambda == 0 && ky % lambda == 0 && kz % lambda == 0;
    const std::size_t src = divisible ? offset_of(g, kx / lambda, ky / lambda, kz / lambda) : 0;
    for (std::size_t c = 0; c < N; ++c) {
      const Complex expected = divisible ? weight * (*source[c])[src] : Complex{};
      const Complex actual = (*image[c])[idx];
      diff += w * std::norm(actual - expected);
      scale_a += w * std::norm(actual);
      scale_b += w * std::norm(expected);
    }
  });
  const double scale = std::sqrt(std::max(scale_a, scale_b));
  return scale == 0.0 ? 0.0 : std::sqrt(diff) / scale;
}

inline SpectralField ns_residual(const SpectralField& f, double nu) {
  SpectralField r = nonlinear_term_exact(f);
  axpy(r, nu, laplacian(f));
  return r;
}

}  // namespace detail

/// Relative mismatch between R[v_lambda] and lambda^3 R[v](lambda x), where
/// R[v] = -P_L[(v.grad)v] + nu lap v is evaluated with exact products.
inline double verify_ns_covariance(const SpectralField& f, long lambda, double nu) {
  const SpectralField image_field = rescale(f, lambda);
  if (f.is_zero()) return 0.0;
  const SpectralField r = detail::ns_residual(f, nu);
  const SpectralField r_image = detail::ns_residual(image_field, nu);
  const double lam = static_cast<double>(lambda);
  return detail::remap_mismatch<3>(f.grid, {&r_image.coeffs[0], &r_image.coeffs[1], &r_image.coeffs[2]},
                                   {&r.coeffs[0], &r.coeffs[1], &r.coeffs[2]}, lambda, lam * lam * lam);
}

/// Relative mismatch between P[v_lambda] and lambda^2 P[v](lambda x).
inline double verify_pressure_scaling(const SpectralField& f, long lambda, double rho0) {
  const SpectralField image_field = rescale(f, lambda);
  if (f.is_zero()) return 0.0;
  const ScalarField p = recover_pressure(f, rho0);
  const ScalarField p_image = recover_pressure(image_field, rho0);
  const double lam = static_cast<double>(lambda);
  return detail::remap_mismatch<1>(f.grid, {&p_image.coeffs}, {&p.coeffs}, lambda, lam * lam);
}

inline ScalingReport scaling_report(const SpectralField& f, long lambda, std::span<const double> p_list, double nu,
                                    double rho0 = 1.0) {
  ScalingReport rep;
  rep.lambda = lambda;
  rep.rows = verify_lp_ladder(f, lambda, p_list);
  std::tie(rep.h_half_hom_ratio, rep.h_half_inhom_ratio) = verify_h_half(f, lambda);
  rep.ns_residual_covariance = verify_ns_covariance(f, lambda, nu);
  rep.pressure_mismatch = verify_pressure_scaling(f, lambda, rho0);
  return rep;
}

/// True when every contracted quantity of the report is within tolerance:
/// ladder rows, p = 3 invariance, homogeneous H^{1/2} invariance and the
/// covariance/pressure mismatches.
inline bool within_contract(const ScalingReport& r) {
  for (const auto& row : r.rows) {
    if (row.rel_error() >= kLadderTolerance) return false;
    if (row.p == 3.0 && row.abs_error() > kInvarianceTolerance) return false;
  }
  return std::abs(r.h_half_hom_ratio - 1.0) <= kInvarianceTolerance && r.ns_residual_covariance <= kCovarianceTolerance &&
         r.pressure_mismatch <= kCovarianceTolerance;
}

}  // namespace nsnorm
