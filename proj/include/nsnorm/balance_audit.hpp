#pragma once

// Enstrophy/energy budget checks and the Hölder-Sobolev chain behind the
// L3 smallness criterion:
//
//   (1/2) d/dt |v|^2     = -nu |grad v|^2
//   (1/2) d/dt |grad v|^2 + nu |lap v|^2 = -S,
//   S = int d_i v_j d_i v_k d_k v_j dV = -int v_k d_k v_j lap v_j dV,
//   |S| <= |v|_{L3} |grad v|_{L6} |lap v|_{L2} <= C |v|_{L3} |lap v|^2_{L2}.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "nsnorm/norms.hpp"
#include "nsnorm/sampling.hpp"

namespace nsnorm {

/// One time sample of the tracked norms and budget terms.
struct DiagnosticsRecord {
  double t = 0.0;
  double energy = 0.0;  // 0.5 * l2^2
  NormReport norms;
  double stretching = 0.0;
  double energy_residual = std::numeric_limits<double>::quiet_NaN();
  double enstrophy_residual = std::numeric_limits<double>::quiet_NaN();
};

struct ChainReport {
  double stretching_abs = 0.0;
  double holder_bound = 0.0;   // |v|_L3 |grad v|_L6 |lap v|_L2
  double sobolev_ratio = 0.0;  // |grad v|_L6 / |lap v|_L2
  double chain_ratio = 0.0;    // |S| / (|v|_L3 |lap v|^2_L2)
};

struct ConstantsEstimate {
  double c_emp = 0.0;
  double c_sob = 0.0;
  std::size_t argmax_emp = 0;  // corpus position of the maximizer
  std::size_t argmax_sob = 0;
};

namespace detail {

inline double stretching_from(const CellSamples& s) {
  const auto& g = s.grad;
  return s.weight * fft::plane_sum(s.m, [&](std::size_t p) {
    double acc = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double gij = g[3 * i + j][p];
        double inner = 0.0;
        for (int k = 0; k < 3; ++k) inner += g[3 * i + k][p] * g[3 * k + j][p];
        acc += gij * inner;
      }
    return acc;
  });
}

inline double stretching_ibp_from(const CellSamples& s) {
  const auto& v = s.v;
  const auto& g = s.grad;
  const auto& l = s.lap;
  return -s.weight * fft::plane_sum(s.m, [&](std::size_t p) {
    double acc = 0.0;
    for (int k = 0; k < 3; ++k) {
      double inner = 0.0;
      for (int j = 0; j < 3; ++j) inner += g[3 * k + j][p] * l[j][p];
      acc += v[k][p] * inner;
    }
    return acc;
  });
}

inline double grad_l6_from(const CellSamples& s) {
  const auto& g = s.grad;
  const double integral = s.weight * fft::plane_sum(s.m, [&](std::size_t p) {
    double f2 = 0.0;
    for (int e = 0; e < 9; ++e) f2 += g[e][p] * g[e][p];
    return f2 * f2 * f2;
  });
  return std::pow(integral, 1.0 / 6.0);
}

// Central difference of y at interior sample i.
inline double central_rate(std::span<const DiagnosticsRecord> r, std::size_t i, double (*y)(const DiagnosticsRecord&)) {
  return (y(r[i + 1]) - y(r[i - 1])) / (r[i + 1].t - r[i - 1].t);
}

inline double normalized(double numerator, double denominator) {
  if (denominator == 0.0) return numerator == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), numerator);
  return numerator / denominator;
}

inline void require_interior(std::span<const DiagnosticsRecord> r) {
  if (r.size() < 3) throw insufficient_data_error("need at least 3 diagnostics records");
}

}  // namespace detail

/// S = int d_i v_j d_i v_k d_k v_j dV by oversampled quadrature. The
/// integrand is cubic, so oversample >= 2 makes it exact for fields inside
/// the 2/3 band.
inline double vortex_stretching(const SpectralField& f, std::size_t oversample = 2) {
  if (f.is_zero()) return 0.0;
  return detail::stretching_from(sample_cell(f, oversample, kGradient));
}

/// Integration-by-parts form -int v_k (d_k v_j) lap v_j dV; equals
/// vortex_stretching for solenoidal fields.
inline double vortex_stretching_ibp(const SpectralField& f, std::size_t oversample = 2) {
  if (f.is_zero()) return 0.0;
  return detail::stretching_ibp_from(sample_cell(f, oversample, kVelocity | kGradient | kLaplacian));
}

/// Full diagnostics sample of one field (residuals left NaN).
inline DiagnosticsRecord diagnose(const SpectralField& f, std::size_t oversample = 2) {
  DiagnosticsRecord rec;
  rec.t = f.time;
  const double l2sq = l2_norm_sq(f);
  rec.energy = 0.5 * l2sq;
  rec.norms.l2 = std::sqrt(l2sq);
  rec.norms.grad_l2_sq = grad_l2_norm_sq(f);
  rec.norms.lap_l2_sq = lap_l2_norm_sq(f);
  rec.norms.h_half_sq = h_half_norm_sq(f, false);
  rec.norms.h_half_hom_sq = h_half_norm_sq(f, true);
  if (!f.is_zero()) {
    const CellSamples s = sample_cell(f, oversample, kVelocity | kGradient);
    rec.norms.l3 = detail::lp_from_samples(s, 3.0);
    rec.norms.l4 = detail::lp_from_samples(s, 4.0);
    rec.stretching = detail::stretching_from(s);
  }
  return rec;
}

/// (dE/dt + nu |grad v|^2) / (nu |grad v|^2) at each interior sample.
inline std::vector<double> energy_residual(std::span<const DiagnosticsRecord> r, double nu) {
  detail::require_interior(r);
  std::vector<double> out;
  for (std::size_t i = 1; i + 1 < r.size(); ++i) {
    const double rate = detail::central_rate(r, i, [](const DiagnosticsRecord& d) { return d.energy; });
    const double diss = nu * r[i].norms.grad_l2_sq;
    out.push_back(detail::normalized(rate + diss, diss));
  }
  return out;
}

/// (d/dt (|grad v|^2 / 2) + nu |lap v|^2 + S) / (nu |lap v|^2) at each
/// interior sample.
inline std::vector<double> enstrophy_residual(std::span<const DiagnosticsRecord> r, double nu) {
  detail::require_interior(r);
  std::vector<double> out;
  for (std::size_t i = 1; i + 1 < r.size(); ++i) {
    const double rate = detail::central_rate(r, i, [](const DiagnosticsRecord& d) { return 0.5 * d.norms.grad_l2_sq; });
    const double diss = nu * r[i].norms.lap_l2_sq;
    out.push_back(detail::normalized(rate + diss + r[i].stretching, diss));
  }
  return out;
}

/// Discrete form of the Lemma inequality at each interior sample:
/// (d/dt (|grad v|^2 / 2) + nu |lap v|^2 - C |v|_L3 |lap v|^2) / (nu |lap v|^2).
/// Non-positive values (up to tolerance) mean the inequality holds.
inline std::vector<double> chain_residual(std::span<const DiagnosticsRecord> r, double nu, double c) {
  detail::require_interior(r);
  std::vector<double> out;
  for (std::size_t i = 1; i + 1 < r.size(); ++i) {
    const double rate = detail::central_rate(r, i, [](const DiagnosticsRecord& d) { return 0.5 * d.norms.grad_l2_sq; });
    const double lap = r[i].norms.lap_l2_sq;
    out.push_back(detail::normalized(rate + nu * lap - c * r[i].norms.l3 * lap, nu * lap));
  }
  return out;
}

/// Fills the residual fields of interior records in place; endpoints stay NaN.
inline void fill_residuals(std::vector<DiagnosticsRecord>& r, double nu) {
  if (r.size() < 3) return;
  const auto e = energy_residual(r, nu);
  const auto z = enstrophy_residual(r, nu);
  for (std::size_t i = 1; i + 1 < r.size(); ++i) {
    r[i].energy_residual = e[i - 1];
    r[i].enstrophy_residual = z[i - 1];
  }
}

inline ChainReport chain_report(const SpectralField& f, std::size_t oversample = 2) {
  if (f.is_zero()) throw undefined_ratio_error("chain_report: zero field");
  const CellSamples s = sample_cell(f, oversample, kVelocity | kGradient);
  ChainReport c;
  const double l3 = detail::lp_from_samples(s, 3.0);
  const double l6 = detail::grad_l6_from(s);
  const double lap_sq = lap_l2_norm_sq(f);
  const double lap = std::sqrt(lap_sq);
  c.stretching_abs = std::abs(detail::stretching_from(s));
  c.holder_bound = l3 * l6 * lap;
  c.sobolev_ratio = l6 / lap;
  c.chain_ratio = c.stretching_abs / (l3 * lap_sq);
  return c;
}

/// Corpus maxima of chain_ratio (C_emp) and sobolev_ratio (C_sob). A corpus
/// maximum is only a lower bound on the best constants.
inline ConstantsEstimate estimate_constants(std::span<const SpectralField> corpus, std::size_t oversample = 2) {
  if (corpus.empty()) throw std::invalid_argument("estimate_constants: empty corpus");
  std::vector<ChainReport> reports(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) reports[i] = chain_report(corpus[i], oversample);
  ConstantsEstimate e;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (i == 0 || reports[i].chain_ratio > e.c_emp) {
      e.c_emp = reports[i].chain_ratio;
      e.argmax_emp = i;
    }
    if (i == 0 || reports[i].sobolev_ratio > e.c_sob) {
      e.c_sob = reports[i].sobolev_ratio;
      e.argmax_sob = i;
    }
  }
  return e;
}

}  // namespace nsnorm
