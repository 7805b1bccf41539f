#pragma once

// Pseudo-spectral incompressible Navier-Stokes on the periodic box:
//
//   d/dt v_hat = -nu |k|^2 v_hat + N(v),   N(v) = -P_L[(v.grad) v]^,
//
// advanced by classical RK4 on the integrating-factor variable
// w_hat = e^{nu |k|^2 t} v_hat, so diffusion is exact.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nsnorm/balance_audit.hpp"
#include "nsnorm/field.hpp"
#include "nsnorm/fixtures.hpp"
#include "nsnorm/norms.hpp"

namespace nsnorm {

/// Initial-condition recipe. `kind` is one of: zero, taylor_green, abc,
/// random, planar_random, cosine.
struct InitialCondition {
  std::string kind = "taylor_green";
  double amplitude = 1.0;
  double a = 1.0, b = 1.0, c = 1.0;
  double energy_slope = -1.0;
  long k_max = 4;
  std::uint64_t seed = 0;
  /// When set, the field is rescaled so that |v|_{L3} equals this value.
  std::optional<double> l3_norm;
};

struct SimulationConfig {
  Grid grid = make_grid(32);
  double nu = 0.1;
  double rho0 = 1.0;
  double dt = 1e-3;
  double t_end = 1.0;
  InitialCondition initial_condition;
  long output_every = 1;
  long snapshot_every = 0;  // 0 disables snapshots
  std::size_t oversample = 2;
  bool advection = true;  // test hook: false leaves pure viscous decay

  void validate() const {
    auto finite_pos = [](double x) { return std::isfinite(x) && x > 0.0; };
    if (!finite_pos(nu)) throw config_error("physics.nu must be positive and finite");
    if (!finite_pos(rho0)) throw config_error("physics.rho0 must be positive and finite");
    if (!finite_pos(dt)) throw config_error("time.dt must be positive and finite");
    if (!finite_pos(t_end)) throw config_error("time.t_end must be positive and finite");
    if (output_every < 1) throw config_error("outputs.diagnostics_every must be >= 1");
    if (snapshot_every < 0) throw config_error("outputs.snapshot_every must be >= 0");
    if (oversample != 1 && oversample != 2 && oversample != 4) throw config_error("outputs.oversample must be 1, 2 or 4");
    (void)make_grid(grid.n, grid.length, grid.dealias_fraction);
  }

  long step_count() const { return static_cast<long>(std::ceil(t_end / dt - 1e-9)); }
};

struct TrajectoryState {
  SpectralField field;
  long step_index = 0;
  double max_cfl = 0.0;  // dt max|v| / dx seen by the last step
};

/// Non-finite coefficients after a step. Carries the records produced so far.
class blowup_error : public std::runtime_error {
 public:
  blowup_error(long step, std::vector<DiagnosticsRecord> partial)
      : std::runtime_error("non-finite velocity coefficients after step " + std::to_string(step)),
        step_(step),
        partial_(std::move(partial)) {}
  long step() const noexcept { return step_; }
  const std::vector<DiagnosticsRecord>& partial_records() const noexcept { return partial_; }
  std::optional<DiagnosticsRecord> last_finite() const {
    if (partial_.empty()) return std::nullopt;
    return partial_.back();
  }

 private:
  long step_;
  std::vector<DiagnosticsRecord> partial_;
};

/// Spectra of the six products v_i v_j, ordered xx, xy, xz, yy, yz, zz.
using ProductSpectra = std::array<Spectrum, 6>;

namespace detail {

constexpr int kPairs[6][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};

inline int pair_slot(int i, int j) {
  static constexpr int slot[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
  return slot[i][j];
}

}  // namespace detail

/// Products v_i v_j evaluated on a pad * n grid and returned on the n grid.
/// pad == 1 is the 2/3-rule path (caller masks input and output); pad == 2
/// is exact on |k_axis| < n/2 for any input.
inline ProductSpectra quadratic_products(const SpectralField& f, std::size_t pad, double* max_speed = nullptr) {
  const Grid& g = f.grid;
  const std::size_t m = g.n * pad;
  const std::size_t np = m * m * m;
  std::array<std::vector<double>, 3> u;
  fft::parallel_for(3, [&](std::size_t c) { u[c] = synthesize(g, f.coeffs[c], pad); });
  if (max_speed) {
    double s2 = 0.0;
    for (std::size_t p = 0; p < np; ++p) s2 = std::max(s2, u[0][p] * u[0][p] + u[1][p] * u[1][p] + u[2][p] * u[2][p]);
    *max_speed = std::sqrt(s2);
  }
  ProductSpectra out;
  fft::parallel_for(6, [&](std::size_t s) {
    const auto& a = u[detail::kPairs[s][0]];
    const auto& b = u[detail::kPairs[s][1]];
    std::vector<double> prod(np);
    for (std::size_t p = 0; p < np; ++p) prod[p] = a[p] * b[p];
    Spectrum spec(fft::spectral_size(m));
    fft::forward(m, prod, spec);
    out[s] = pad == 1 ? std::move(spec) : fft::truncate(spec, m, g.n);
  });
  return out;
}

namespace detail {

// -div(v v)^ = -i k_j Q_ij, optionally masked, then Leray-projected.
inline SpectralField negative_divergence(const Grid& g, const ProductSpectra& q, bool mask) {
  SpectralField out(g);
  const Complex i1{0.0, 1.0};
  for_each_mode(g, [&](std::size_t idx, long kx, long ky, long kz, double) {
    if (mask && !g.retained(kx, ky, kz)) return;
    const auto k = wavevector(g, kx, ky, kz);
    const double kk[3] = {k.x, k.y, k.z};
    for (int i = 0; i < 3; ++i) {
      Complex acc{};
      for (int j = 0; j < 3; ++j) acc += kk[j] * q[pair_slot(i, j)][idx];
      out.coeffs[i][idx] = -i1 * acc;
    }
  });
  return leray_project(std::move(out));
}

}  // namespace detail

/// -P_L[(v.grad)v] with 2/3-rule dealiasing: the input is masked to the
/// dealias band, products are formed on the native grid, the result is
/// masked and projected. Computed in divergence form div(v v), which equals
/// the advective form for the (solenoidal) masked input.
inline SpectralField nonlinear_term(const SpectralField& f, double* max_speed = nullptr) {
  const SpectralField u = dealias(f);
  SpectralField out = detail::negative_divergence(f.grid, quadratic_products(u, 1, max_speed), true);
  out.time = f.time;
  out.periods = f.periods;
  return out;
}

/// -P_L[(v.grad)v] with exact (2x zero-padded) products on |k_axis| < n/2.
inline SpectralField nonlinear_term_exact(const SpectralField& f) {
  SpectralField out = detail::negative_divergence(f.grid, quadratic_products(f, 2), false);
  out.time = f.time;
  out.periods = f.periods;
  return out;
}

/// Zero-mean pressure from -lap P / rho0 = d_i d_j (v_i v_j), with exact
/// products.
inline ScalarField recover_pressure(const SpectralField& f, double rho0) {
  if (!(rho0 > 0.0)) throw config_error("recover_pressure: rho0 must be positive");
  const Grid& g = f.grid;
  const ProductSpectra q = quadratic_products(f, 2);
  ScalarField p(g);
  for_each_mode(g, [&](std::size_t idx, long kx, long ky, long kz, double) {
    const auto k = detail::wavevector(g, kx, ky, kz);
    if (k.norm_sq == 0.0) return;
    const double kk[3] = {k.x, k.y, k.z};
    Complex acc{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) acc += kk[i] * kk[j] * q[detail::pair_slot(i, j)][idx];
    p.coeffs[idx] = -rho0 * acc / k.norm_sq;
  });
  return p;
}

namespace detail {

inline void axpy(SpectralField& y, double a, const SpectralField& x) {
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < y.coeffs[c].size(); ++i) y.coeffs[c][i] += a * x.coeffs[c][i];
}

// Multiplies each mode by exp(-nu |k|^2 tau).
inline void apply_decay(SpectralField& f, const std::vector<double>& factor) {
  for (auto& c : f.coeffs)
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= factor[i];
}

inline std::vector<double> decay_factors(const Grid& g, double nu, double tau) {
  std::vector<double> out(g.spectral_size());
  for_each_mode(g, [&](std::size_t idx, long kx, long ky, long kz, double) {
    out[idx] = std::exp(-nu * wavevector(g, kx, ky, kz).norm_sq * tau);
  });
  return out;
}

inline bool all_finite(const SpectralField& f) {
  for (const auto& c : f.coeffs)
    for (const auto& v : c)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

}  // namespace detail

/// One integrating-factor RK4 step (Lawson form):
///   a  = E2 (v + dt/2 k1),  b = E2 v + dt/2 k2,  c = E v + dt E2 k3,
///   v' = E v + dt/6 (E k1 + 2 E2 (k2 + k3) + k4),
/// with E = e^{-nu |k|^2 dt}, E2 = e^{-nu |k|^2 dt/2}. The result is
/// re-projected. Non-finite output throws blowup_error.
inline TrajectoryState step(const TrajectoryState& s, const SimulationConfig& cfg) {
  const Grid& g = s.field.grid;
  const double dt = cfg.dt;
  const auto e1 = detail::decay_factors(g, cfg.nu, dt);
  const auto e2 = detail::decay_factors(g, cfg.nu, 0.5 * dt);
  double speed = 0.0;
  auto rhs = [&](const SpectralField& v, double* sp) {
    return cfg.advection ? nonlinear_term(v, sp) : SpectralField(g);
  };

  const SpectralField& v = s.field;
  const SpectralField k1 = rhs(v, &speed);

  SpectralField a = v;
  detail::axpy(a, 0.5 * dt, k1);
  detail::apply_decay(a, e2);
  const SpectralField k2 = rhs(a, nullptr);

  SpectralField ev2 = v;
  detail::apply_decay(ev2, e2);
  SpectralField b = ev2;
  detail::axpy(b, 0.5 * dt, k2);
  const SpectralField k3 = rhs(b, nullptr);

  SpectralField ev = v;
  detail::apply_decay(ev, e1);
  SpectralField e2k3 = k3;
  detail::apply_decay(e2k3, e2);
  SpectralField c = ev;
  detail::axpy(c, dt, e2k3);
  const SpectralField k4 = rhs(c, nullptr);

  SpectralField e1k1 = k1;
  detail::apply_decay(e1k1, e1);
  SpectralField mid = k2;
  detail::axpy(mid, 1.0, k3);
  detail::apply_decay(mid, e2);

  SpectralField next = ev;
  detail::axpy(next, dt / 6.0, e1k1);
  detail::axpy(next, dt / 3.0, mid);
  detail::axpy(next, dt / 6.0, k4);

  TrajectoryState out;
  out.step_index = s.step_index + 1;
  out.field = leray_project(std::move(next));
  out.field.time = static_cast<double>(out.step_index) * dt;
  out.field.periods = s.field.periods;
  out.max_cfl = speed * dt / g.spacing();
  if (!detail::all_finite(out.field)) throw blowup_error(out.step_index, {});
  return out;
}

/// Builds the configured initial field (Leray-projected, zero mean).
inline SpectralField make_initial_field(const Grid& g, const InitialCondition& ic) {
  SpectralField f(g);
  if (ic.kind == "zero") {
    // nothing
  } else if (ic.kind == "taylor_green") {
    f = taylor_green(g, ic.amplitude);
  } else if (ic.kind == "abc") {
    f = scaled(abc_flow(g, ic.a, ic.b, ic.c), ic.amplitude);
  } else if (ic.kind == "random") {
    f = scaled(random_solenoidal(g, ic.energy_slope, ic.k_max, ic.seed), ic.amplitude);
  } else if (ic.kind == "planar_random") {
    f = scaled(random_planar(g, ic.energy_slope, ic.k_max, ic.seed), ic.amplitude);
  } else if (ic.kind == "cosine") {
    f = cosine_mode(g, 1, 1, 0, 0, ic.amplitude);
  } else {
    throw config_error("initial_condition.type: unknown recipe '" + ic.kind + "'");
  }
  f = leray_project(std::move(f));
  if (ic.l3_norm) {
    if (!(*ic.l3_norm >= 0.0)) throw config_error("initial_condition.l3_norm must be >= 0");
    const double current = lp_norm(f, 3.0);
    if (current == 0.0) {
      if (*ic.l3_norm != 0.0) throw config_error("initial_condition.l3_norm: cannot rescale a zero field");
    } else {
      f = scaled(std::move(f), *ic.l3_norm / current);
    }
  }
  return f;
}

/// Observer invoked at every diagnostics sample (including t = 0). Returning
/// false ends the run after that sample.
using SampleObserver = std::function<bool(const TrajectoryState&, const DiagnosticsRecord&)>;

struct SimulationResult {
  std::vector<DiagnosticsRecord> records;
  TrajectoryState final_state;
  double max_cfl = 0.0;
  bool stopped_early = false;
};

/// Runs from an explicit initial field instead of the configured recipe.
inline SimulationResult simulate_from(const SimulationConfig& cfg, SpectralField initial,
                                      const SampleObserver& observer = {}) {
  cfg.validate();
  TrajectoryState state;
  state.field = std::move(initial);
  SimulationResult res;
  auto sample = [&](const TrajectoryState& s) {
    res.records.push_back(diagnose(s.field, cfg.oversample));
    return !observer || observer(s, res.records.back());
  };
  bool running = sample(state);
  const long steps = cfg.step_count();
  for (long i = 0; i < steps && running; ++i) {
    try {
      state = step(state, cfg);
    } catch (const blowup_error& e) {
      fill_residuals(res.records, cfg.nu);
      throw blowup_error(e.step(), res.records);
    }
    res.max_cfl = std::max(res.max_cfl, state.max_cfl);
    if (state.step_index % cfg.output_every == 0 || state.step_index == steps) running = sample(state);
  }
  res.stopped_early = !running && state.step_index < steps;
  fill_residuals(res.records, cfg.nu);
  res.final_state = state;
  return res;
}

/// Runs from the configured initial condition to t_end, sampling diagnostics
/// every output_every steps and at the final step. Residual columns are
/// filled once the run completes. Blow-up rethrows with partial records.
inline SimulationResult simulate(const SimulationConfig& cfg, const SampleObserver& observer = {}) {
  cfg.validate();
  return simulate_from(cfg, make_initial_field(cfg.grid, cfg.initial_condition), observer);
}

}  // namespace nsnorm
