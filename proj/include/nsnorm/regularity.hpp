#pragma once

// Poincare step, L3 smallness criterion and the Gronwall decay audit.
//
// On the zero-mean torus of side L the Poincare constant is explicit,
// K = (2 pi / L)^2, because the spectrum is bounded away from k = 0. On the
// whole space no such K exists for generic fields.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>

#include "nsnorm/balance_audit.hpp"
#include "nsnorm/norms.hpp"

namespace nsnorm {

/// Relative rise of |grad v|^2 between samples tolerated before decay is
/// declared non-monotone.
inline constexpr double kMonotoneTolerance = 1e-9;
/// Normalized tolerance for discrete differential inequalities.
inline constexpr double kResidualTolerance = 1e-3;

struct CriterionVerdict {
  double l3_at_t0 = 0.0;
  double l3_sq_at_t0 = 0.0;  // the squared variant of the criterion, reported only
  double h_half_at_t0 = 0.0;  // |v|_{H^1/2} at t0, no threshold attached
  double threshold = 0.0;     // nu / C
  bool satisfied = false;     // l3_at_t0 <= threshold
  double poincare_K = 1.0;
  bool decay_monotone = true;
  double max_enstrophy_over_initial = 1.0;
  double max_l3_over_initial = 1.0;
  bool inequality_holds = true;
  double max_inequality_residual = 0.0;
};

/// K = (2 pi / cell length)^2 for the field's fundamental cell.
inline double poincare_constant(const SpectralField& f) {
  const double k0 = f.grid.k0() * static_cast<double>(f.periods);
  return k0 * k0;
}

/// |lap v|^2 / |grad v|^2; at least poincare_constant(f) for zero-mean fields.
inline double poincare_ratio(const SpectralField& f) {
  const double grad = grad_l2_norm_sq(f);
  if (grad == 0.0) throw undefined_ratio_error("poincare_ratio: zero field");
  return lap_l2_norm_sq(f) / grad;
}

/// Evaluates |v|_L3 against nu / C. Trajectory fields of the verdict keep
/// their defaults.
inline CriterionVerdict smallness_check(const SpectralField& f, double nu, double c) {
  if (!(nu > 0.0) || !(c > 0.0)) throw config_error("smallness_check: nu and C must be positive");
  CriterionVerdict v;
  v.l3_at_t0 = lp_norm(f, 3.0);
  v.l3_sq_at_t0 = v.l3_at_t0 * v.l3_at_t0;
  v.h_half_at_t0 = std::sqrt(h_half_norm_sq(f, false));
  v.threshold = nu / c;
  v.satisfied = v.l3_at_t0 <= v.threshold;
  v.poincare_K = poincare_constant(f);
  return v;
}

/// Audits a sampled trajectory:
///  - the differential inequality
///      d/dt |grad v|^2 + K (2 nu - 2 C |v|_L3) |grad v|^2 <= 0
///    at every interior sample, normalized by 2 nu K |grad v|^2;
///  - monotone non-increase of |grad v|^2 across all samples;
///  - max |grad v|^2(t) / |grad v|^2(0) and max |v|_L3(t) / |v|_L3(0).
/// Both flags are computed whether or not the smallness condition held.
inline CriterionVerdict gronwall_audit(std::span<const DiagnosticsRecord> r, double nu, double c, double k) {
  if (r.size() < 3) throw insufficient_data_error("gronwall_audit: need at least 3 records");
  if (!(nu > 0.0) || !(c > 0.0) || !(k > 0.0)) throw config_error("gronwall_audit: nu, C and K must be positive");
  CriterionVerdict v;
  v.l3_at_t0 = r.front().norms.l3;
  v.l3_sq_at_t0 = v.l3_at_t0 * v.l3_at_t0;
  v.h_half_at_t0 = std::sqrt(r.front().norms.h_half_sq);
  v.threshold = nu / c;
  v.satisfied = v.l3_at_t0 <= v.threshold;
  v.poincare_K = k;

  const double g0 = r.front().norms.grad_l2_sq;
  const double l0 = r.front().norms.l3;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double g = r[i].norms.grad_l2_sq;
    if (g0 > 0.0) v.max_enstrophy_over_initial = std::max(v.max_enstrophy_over_initial, g / g0);
    if (l0 > 0.0) v.max_l3_over_initial = std::max(v.max_l3_over_initial, r[i].norms.l3 / l0);
    if (i > 0 && g > r[i - 1].norms.grad_l2_sq * (1.0 + kMonotoneTolerance)) v.decay_monotone = false;
  }
  for (std::size_t i = 1; i + 1 < r.size(); ++i) {
    const double rate = (r[i + 1].norms.grad_l2_sq - r[i - 1].norms.grad_l2_sq) / (r[i + 1].t - r[i - 1].t);
    const double g = r[i].norms.grad_l2_sq;
    const double lhs = rate + k * (2.0 * nu - 2.0 * c * r[i].norms.l3) * g;
    const double res = detail::normalized(lhs, 2.0 * nu * k * g);
    v.max_inequality_residual = std::max(v.max_inequality_residual, res);
  }
  v.inequality_holds = v.max_inequality_residual <= kResidualTolerance;
  return v;
}

}  // namespace nsnorm
