#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nsnorm/fft.hpp"
#include "nsnorm/grid.hpp"

namespace nsnorm {

using Spectrum = std::vector<Complex>;

/// Velocity field stored as Fourier coefficients of its three components,
/// v(x) = sum_k v_hat(k) e^{i k.x}, so that
/// int |v|^2 dV = volume * sum_k |v_hat(k)|^2.
///
/// `periods` counts how many copies of the field's fundamental cell fit
/// along each edge of the box. Ordinary fields have periods == 1; the
/// integer rescaling v -> lambda v(lambda x) multiplies it by lambda, and
/// every norm integrates over one fundamental cell.
struct SpectralField {
  Grid grid;
  std::array<Spectrum, 3> coeffs;
  double time = 0.0;
  long periods = 1;

  SpectralField() = default;
  explicit SpectralField(const Grid& g) : grid(g) {
    for (auto& c : coeffs) c.assign(g.spectral_size(), Complex{});
  }

  Complex& at(int comp, std::size_t idx) { return coeffs[comp][idx]; }
  const Complex& at(int comp, std::size_t idx) const { return coeffs[comp][idx]; }

  bool is_zero() const {
    for (const auto& c : coeffs)
      for (const auto& v : c)
        if (v != Complex{}) return false;
    return true;
  }
};

/// Gradient tensor; entry 3*i + j holds the coefficients of d_i v_j.
struct TensorField {
  Grid grid;
  std::array<Spectrum, 9> coeffs;

  explicit TensorField(const Grid& g) : grid(g) {
    for (auto& c : coeffs) c.assign(g.spectral_size(), Complex{});
  }
  Spectrum& entry(int i, int j) { return coeffs[3 * i + j]; }
  const Spectrum& entry(int i, int j) const { return coeffs[3 * i + j]; }
};

struct ScalarField {
  Grid grid;
  Spectrum coeffs;

  explicit ScalarField(const Grid& g) : grid(g), coeffs(g.spectral_size(), Complex{}) {}
};

namespace detail {

inline std::size_t offset_of(const Grid& g, long kx, long ky, long kz) {
  return g.spectral_offset(g.storage_index(kz), g.storage_index(ky), static_cast<std::size_t>(kx));
}

/// Physical wavevector components; odd operators see zero on Nyquist axes.
struct Wavevector {
  double x, y, z;
  double norm_sq;  // |k|^2 including Nyquist components
};

inline Wavevector wavevector(const Grid& g, long kx, long ky, long kz) {
  const double k0 = g.k0();
  const double fx = k0 * static_cast<double>(kx);
  const double fy = k0 * static_cast<double>(ky);
  const double fz = k0 * static_cast<double>(kz);
  return {g.is_nyquist(kx) ? 0.0 : fx, g.is_nyquist(ky) ? 0.0 : fy, g.is_nyquist(kz) ? 0.0 : fz,
          fx * fx + fy * fy + fz * fz};
}

}  // namespace detail

/// Adds the real function c e^{ik.x} + conj(c) e^{-ik.x} (signed indices k)
/// to component `comp`, writing whichever half-spectrum entries store it.
inline void add_real_mode(SpectralField& f, int comp, long kx, long ky, long kz, Complex c) {
  const Grid& g = f.grid;
  const long lim = static_cast<long>(g.n / 2);
  if (std::labs(kx) >= lim || std::labs(ky) >= lim || std::labs(kz) >= lim)
    throw std::out_of_range("add_real_mode: mode outside the grid band");
  if (kx == 0 && ky == 0 && kz == 0) {
    f.at(comp, 0) += Complex{2.0 * c.real(), 0.0};
    return;
  }
  if (kx < 0) {
    kx = -kx;
    ky = -ky;
    kz = -kz;
    c = std::conj(c);
  }
  f.at(comp, detail::offset_of(g, kx, ky, kz)) += c;
  if (kx == 0) f.at(comp, detail::offset_of(g, 0, -ky, -kz)) += std::conj(c);
}

/// Samples an arbitrary spectrum on an (oversample * n)^3 grid.
inline std::vector<double> synthesize(const Grid& g, std::span<const Complex> spec, std::size_t oversample = 1) {
  const std::size_t m = g.n * oversample;
  std::vector<double> out(m * m * m);
  if (oversample == 1) {
    fft::inverse(m, spec, out);
  } else {
    const auto padded = fft::pad(spec, g.n, m);
    fft::inverse(m, padded, out);
  }
  return out;
}

/// Physical samples, component-major, x fastest: 3 * n^3 values.
inline std::vector<double> to_physical(const SpectralField& f) {
  const std::size_t np = f.grid.physical_size();
  std::vector<double> out(3 * np);
  fft::parallel_for(3, [&](std::size_t c) {
    fft::inverse(f.grid.n, f.coeffs[c], std::span<double>(out.data() + c * np, np));
  });
  return out;
}

namespace detail {

// Makes the kx = 0 and kx = n/2 planes exactly Hermitian in (ky, kz).
inline void symmetrize_planes(const Grid& g, Spectrum& s) {
  for (std::size_t ix : {std::size_t{0}, g.n / 2}) {
    for (std::size_t iz = 0; iz < g.n; ++iz) {
      for (std::size_t iy = 0; iy < g.n; ++iy) {
        const std::size_t jz = (g.n - iz) % g.n;
        const std::size_t jy = (g.n - iy) % g.n;
        const std::size_t a = g.spectral_offset(iz, iy, ix);
        const std::size_t b = g.spectral_offset(jz, jy, ix);
        if (b < a) continue;
        const Complex avg = 0.5 * (s[a] + std::conj(s[b]));
        s[a] = avg;
        s[b] = std::conj(avg);
      }
    }
  }
}

}  // namespace detail

/// Forward transform of 3 * n^3 real samples (component-major, x fastest).
inline SpectralField from_physical(std::span<const double> samples, const Grid& g) {
  const std::size_t np = g.physical_size();
  if (samples.size() != 3 * np)
    throw std::invalid_argument("from_physical: expected " + std::to_string(3 * np) + " samples, got " +
                                std::to_string(samples.size()));
  SpectralField f(g);
  fft::parallel_for(3, [&](std::size_t c) {
    fft::forward(g.n, samples.subspan(c * np, np), f.coeffs[c]);
    detail::symmetrize_planes(g, f.coeffs[c]);
  });
  return f;
}

/// Leray projection v <- v - k (k.v)/|k|^2. Also removes the mean and every
/// Nyquist mode, so the output is exactly zero-mean and solenoidal.
inline SpectralField leray_project(SpectralField f) {
  const Grid& g = f.grid;
  for_each_mode(g, [&](std::size_t idx, long kx, long ky, long kz, double) {
    if ((kx == 0 && ky == 0 && kz == 0) || g.is_nyquist(kx) || g.is_nyquist(ky) || g.is_nyquist(kz)) {
      for (auto& c : f.coeffs) c[idx] = Complex{};
      return;
    }
    const auto k = detail::wavevector(g, kx, ky, kz);
    const Complex dot = k.x * f.coeffs[0][idx] + k.y * f.coeffs[1][idx] + k.z * f.coeffs[2][idx];
    const Complex s = dot / k.norm_sq;
    f.coeffs[0][idx] -= k.x * s;
    f.coeffs[1][idx] -= k.y * s;
    f.coeffs[2][idx] -= k.z * s;
  });
  return f;
}

/// Largest |k.v_hat| / |v_hat| over populated modes with k != 0.
inline double max_divergence_ratio(const SpectralField& f) {
  double worst = 0.0;
  for_each_mode(f.grid, [&](std::size_t idx, long kx, long ky, long kz, double) {
    const auto k = detail::wavevector(f.grid, kx, ky, kz);
    const double amp = std::sqrt(std::norm(f.coeffs[0][idx]) + std::norm(f.coeffs[1][idx]) + std::norm(f.coeffs[2][idx]));
    if (amp == 0.0 || k.norm_sq == 0.0) return;
    const Complex dot = k.x * f.coeffs[0][idx] + k.y * f.coeffs[1][idx] + k.z * f.coeffs[2][idx];
    worst = std::max(worst, std::abs(dot) / (amp * std::sqrt(k.norm_sq)));
  });
  return worst;
}

inline TensorField gradient(const SpectralField& f) {
  TensorField t(f.grid);
  for_each_mode(f.grid, [&](std::size_t idx, long kx, long ky, long kz, double) {
    const auto k = detail::wavevector(f.grid, kx, ky, kz);
    const double kk[3] = {k.x, k.y, k.z};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) t.entry(i, j)[idx] = Complex{0.0, kk[i]} * f.coeffs[j][idx];
  });
  return t;
}

inline SpectralField laplacian(const SpectralField& f) {
  SpectralField out = f;
  for_each_mode(f.grid, [&](std::size_t idx, long kx, long ky, long kz, double) {
    const double k2 = detail::wavevector(f.grid, kx, ky, kz).norm_sq;
    for (auto& c : out.coeffs) c[idx] *= -k2;
  });
  return out;
}

inline SpectralField curl(const SpectralField& f) {
  SpectralField out(f.grid);
  out.time = f.time;
  out.periods = f.periods;
  for_each_mode(f.grid, [&](std::size_t idx, long kx, long ky, long kz, double) {
    const auto k = detail::wavevector(f.grid, kx, ky, kz);
    const Complex i{0.0, 1.0};
    const Complex vx = f.coeffs[0][idx], vy = f.coeffs[1][idx], vz = f.coeffs[2][idx];
    out.coeffs[0][idx] = i * (k.y * vz - k.z * vy);
    out.coeffs[1][idx] = i * (k.z * vx - k.x * vz);
    out.coeffs[2][idx] = i * (k.x * vy - k.y * vx);
  });
  return out;
}

/// Zeroes every mode outside the dealias band.
inline SpectralField dealias(SpectralField f) {
  for_each_mode(f.grid, [&](std::size_t idx, long kx, long ky, long kz, double) {
    if (!f.grid.retained(kx, ky, kz))
      for (auto& c : f.coeffs) c[idx] = Complex{};
  });
  return f;
}

inline SpectralField scaled(SpectralField f, double alpha) {
  for (auto& c : f.coeffs)
    for (auto& v : c) v *= alpha;
  return f;
}

/// sum_k w |a_hat(k) - b_hat(k)|^2 over the full lattice (no volume factor).
inline double mode_distance_sq(const SpectralField& a, const SpectralField& b) {
  double s = 0.0;
  for_each_mode(a.grid, [&](std::size_t idx, long, long, long, double w) {
    for (int c = 0; c < 3; ++c) s += w * std::norm(a.coeffs[c][idx] - b.coeffs[c][idx]);
  });
  return s;
}

/// Mode-sum inner product Re sum_k conj(a_hat) . b_hat over the full lattice.
inline double mode_inner(const SpectralField& a, const SpectralField& b) {
  double s = 0.0;
  for_each_mode(a.grid, [&](std::size_t idx, long, long, long, double w) {
    for (int c = 0; c < 3; ++c) s += w * (std::conj(a.coeffs[c][idx]) * b.coeffs[c][idx]).real();
  });
  return s;
}

/// The field restricted to one fundamental cell, expressed on a grid of
/// length / periods with the same n: mode periods*k of f becomes mode k.
/// Identity for periods == 1.
inline SpectralField fundamental_cell(const SpectralField& f) {
  if (f.periods == 1) return f;
  const long q = f.periods;
  Grid cg = f.grid;
  cg.length = f.grid.length / static_cast<double>(q);
  SpectralField cell(cg);
  cell.time = f.time;
  for_each_mode(f.grid, [&](std::size_t idx, long kx, long ky, long kz, double) {
    const bool populated = f.coeffs[0][idx] != Complex{} || f.coeffs[1][idx] != Complex{} || f.coeffs[2][idx] != Complex{};
    if (!populated) return;
    if (kx % q != 0 || ky % q != 0 || kz % q != 0)
      throw std::logic_error("fundamental_cell: populated mode is not a multiple of periods");
    const std::size_t dst = detail::offset_of(cg, kx / q, ky / q, kz / q);
    for (int c = 0; c < 3; ++c) cell.coeffs[c][dst] = f.coeffs[c][idx];
  });
  return cell;
}

}  // namespace nsnorm
