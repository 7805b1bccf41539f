#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "nsnorm/field.hpp"

namespace nsnorm {

/// Physical samples of v, grad v and lap v on an (oversample * n)^3 grid of
/// the field's fundamental cell. Empty arrays were not requested.
struct CellSamples {
  std::size_t m = 0;
  double weight = 0.0;  // quadrature weight: cell volume / m^3
  std::array<std::vector<double>, 3> v;
  std::array<std::vector<double>, 9> grad;  // 3*i + j -> d_i v_j
  std::array<std::vector<double>, 3> lap;
};

enum SampleSet : unsigned { kVelocity = 1u, kGradient = 2u, kLaplacian = 4u };

inline void check_oversample(std::size_t oversample) {
  if (oversample != 1 && oversample != 2 && oversample != 4)
    throw std::invalid_argument("oversample must be 1, 2 or 4");
}

inline CellSamples sample_cell(const SpectralField& f, std::size_t oversample, unsigned which) {
  check_oversample(oversample);
  const SpectralField cell = fundamental_cell(f);
  CellSamples s;
  s.m = cell.grid.n * oversample;
  s.weight = cell.grid.volume() / static_cast<double>(s.m * s.m * s.m);

  std::vector<const Spectrum*> sources;
  std::vector<std::vector<double>*> targets;
  if (which & kVelocity)
    for (int c = 0; c < 3; ++c) {
      sources.push_back(&cell.coeffs[c]);
      targets.push_back(&s.v[c]);
    }
  std::optional<TensorField> grad;
  if (which & kGradient) {
    grad = gradient(cell);
    for (int e = 0; e < 9; ++e) {
      sources.push_back(&grad->coeffs[e]);
      targets.push_back(&s.grad[e]);
    }
  }
  SpectralField lap;
  if (which & kLaplacian) {
    lap = laplacian(cell);
    for (int c = 0; c < 3; ++c) {
      sources.push_back(&lap.coeffs[c]);
      targets.push_back(&s.lap[c]);
    }
  }
  fft::parallel_for(sources.size(), [&](std::size_t i) {
    *targets[i] = synthesize(cell.grid, *sources[i], oversample);
  });
  return s;
}

}  // namespace nsnorm
