#include <gtest/gtest.h>

#include "support.hpp"

using namespace nsnorm;
using namespace nsnorm::testing;

namespace {

SimulationConfig run_config(const std::string& kind, std::size_t n, double nu, double dt, double t_end, long every) {
  SimulationConfig cfg;
  cfg.grid = make_grid(n);
  cfg.nu = nu;
  cfg.dt = dt;
  cfg.t_end = t_end;
  cfg.output_every = every;
  cfg.initial_condition.kind = kind;
  return cfg;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double gradient_scale(const SpectralField& f) { return std::pow(grad_l2_norm_sq(f), 1.5); }

// TG advanced to t = 0.5, where the stretching integral is far from zero.
const SpectralField& evolved_taylor_green() {
  static const SpectralField f = [] {
    SimulationConfig cfg = run_config("taylor_green", 32, 0.05, 5e-3, 0.5, 1000);
    return simulate(cfg).final_state.field;
  }();
  return f;
}

}  // namespace

TEST(VortexStretching, PlanarFieldsVanish) {
  const Grid g = make_grid(32);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SpectralField f = random_planar(g, -1.0, 8, seed);
    EXPECT_LE(std::abs(vortex_stretching(f)), 1e-12 * gradient_scale(f));
    EXPECT_LE(std::abs(vortex_stretching_ibp(f)), 1e-12 * gradient_scale(f));
  }
}

TEST(VortexStretching, AbcAndTaylorGreenAtRestVanish) {
  const Grid g = make_grid(32);
  const SpectralField abc = abc_flow(g, 1, 1, 1);
  EXPECT_LE(std::abs(vortex_stretching(abc)), 1e-12 * gradient_scale(abc));
  // Brute-force quadrature puts the initial TG value at 0 (symmetry).
  const SpectralField tg = taylor_green(g, 1.0);
  EXPECT_LE(std::abs(vortex_stretching(tg)), 1e-12 * gradient_scale(tg));
  EXPECT_LE(std::abs(vortex_stretching_ibp(tg)), 1e-12 * gradient_scale(tg));
}

TEST(VortexStretching, EvolvedTaylorGreenIsNonzeroAndFormsAgree) {
  const SpectralField& f = evolved_taylor_green();
  const double s = vortex_stretching(f);
  EXPECT_GT(std::abs(s), 1e-3 * gradient_scale(f));
  EXPECT_LE(std::abs(s - vortex_stretching_ibp(f)), 1e-10 * std::max(1.0, std::abs(s)));
}

TEST(VortexStretching, DualFormsAgreeOnRandomFields) {
  const Grid g = make_grid(32);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SpectralField f = random_solenoidal(g, -1.0, 8, seed);
    const double s = vortex_stretching(f);
    EXPECT_LE(std::abs(s - vortex_stretching_ibp(f)), 1e-10 * std::max(1.0, std::abs(s))) << seed;
  }
}

TEST(VortexStretching, LiteralTranscriptionOfIbpFormIsZero) {
  // int v_j lap v_k d_k v_j dV vanishes identically for solenoidal fields,
  // which is why the library integrates by parts to -int v_k d_k v_j lap v_j.
  const SpectralField f = random_solenoidal(make_grid(32), -1.0, 8, 3);
  const CellSamples s = sample_cell(f, 2, kVelocity | kGradient | kLaplacian);
  const std::size_t np = s.m * s.m * s.m;
  double literal = 0.0;
  for (std::size_t p = 0; p < np; ++p)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) literal += s.v[j][p] * s.lap[k][p] * s.grad[3 * k + j][p];
  literal *= s.weight;
  const double stretch = vortex_stretching(f);
  EXPECT_LT(std::abs(literal), 1e-10 * std::abs(stretch));
}

TEST(VortexStretching, ZeroField) {
  EXPECT_EQ(vortex_stretching(SpectralField(make_grid(8))), 0.0);
  EXPECT_EQ(vortex_stretching_ibp(SpectralField(make_grid(8))), 0.0);
}

TEST(Diagnose, RecordMatchesNorms) {
  const SpectralField f = random_solenoidal(make_grid(16), -1.0, 5, 1);
  const DiagnosticsRecord r = diagnose(f);
  EXPECT_DOUBLE_EQ(r.energy, 0.5 * r.norms.l2 * r.norms.l2);
  EXPECT_EQ(r.stretching, vortex_stretching(f));
  EXPECT_TRUE(std::isnan(r.energy_residual));
}

TEST(EnergyResidual, AbcDecay) {
  const SimulationResult r = simulate(run_config("abc", 16, 0.1, 1e-3, 0.2, 5));
  const auto res = energy_residual(r.records, 0.1);
  ASSERT_EQ(res.size(), r.records.size() - 2);
  EXPECT_LT(max_abs(res), 1e-6);
}

TEST(EnergyResidual, ZeroTrajectoryUsesZeroOverZero) {
  const SimulationResult r = simulate(run_config("zero", 8, 0.1, 1e-2, 0.05, 1));
  for (double x : energy_residual(r.records, 0.1)) EXPECT_EQ(x, 0.0);
  for (double x : enstrophy_residual(r.records, 0.1)) EXPECT_EQ(x, 0.0);
}

TEST(EnergyResidual, TaylorGreen) {
  const SimulationResult r = simulate(run_config("taylor_green", 32, 0.05, 1e-3, 0.3, 1));
  EXPECT_LT(max_abs(energy_residual(r.records, 0.05)), 1e-4);
  EXPECT_LT(max_abs(enstrophy_residual(r.records, 0.05)), 1e-3);
}

TEST(EnergyResidual, NeedsThreeRecords) {
  std::vector<DiagnosticsRecord> two(2);
  EXPECT_THROW(energy_residual(two, 0.1), insufficient_data_error);
  EXPECT_THROW(enstrophy_residual(two, 0.1), insufficient_data_error);
  EXPECT_THROW(chain_residual(two, 0.1, 1.0), insufficient_data_error);
}

TEST(EnstrophyResidual, AbcAndPlanarShear) {
  const SimulationResult abc = simulate(run_config("abc", 16, 0.1, 1e-3, 0.2, 5));
  EXPECT_LT(max_abs(enstrophy_residual(abc.records, 0.1)), 1e-6);

  SimulationConfig cfg = run_config("zero", 16, 0.1, 1e-3, 0.2, 5);
  SpectralField shear = cos_mode(cfg.grid);
  add_real_mode(shear, 1, 2, 0, 0, 0.25);
  add_real_mode(shear, 1, 3, 0, 0, Complex{0.0, 0.1});
  const SimulationResult r = simulate_from(cfg, shear);
  for (const auto& rec : r.records) EXPECT_EQ(rec.stretching, 0.0);
  EXPECT_LT(max_abs(enstrophy_residual(r.records, 0.1)), 1e-5);
}

TEST(ChainResidual, MatchesDefinition) {
  const SimulationResult r = simulate(run_config("abc", 16, 0.1, 1e-2, 0.05, 1));
  const auto res = chain_residual(r.records, 0.1, 0.5);
  const auto& a = r.records[1];
  const double rate = 0.5 * (r.records[2].norms.grad_l2_sq - r.records[0].norms.grad_l2_sq) / (r.records[2].t - r.records[0].t);
  const double expected = (rate + 0.1 * a.norms.lap_l2_sq - 0.5 * a.norms.l3 * a.norms.lap_l2_sq) / (0.1 * a.norms.lap_l2_sq);
  EXPECT_NEAR(res[0], expected, 1e-12 * std::abs(expected));
}

TEST(ChainReport, HolderHoldsOnCorpus) {
  const Grid g = make_grid(32);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ChainReport c = chain_report(random_solenoidal(g, -1.0, 8, seed));
    EXPECT_LE(c.stretching_abs, c.holder_bound * (1 + 1e-10));
    EXPECT_GT(c.chain_ratio, 0.0);
  }
}

TEST(ChainReport, CosineModeSobolevRatio) {
  const ChainReport c = chain_report(cos_mode(make_grid(16)));
  EXPECT_LT(rel(c.sobolev_ratio, kCosModeSobolevRatio), 1e-12);
  EXPECT_EQ(c.chain_ratio, 0.0);
}

TEST(ChainReport, PlanarFieldHasZeroChainRatio) {
  const ChainReport c = chain_report(random_planar(make_grid(32), -1.0, 8, 2));
  EXPECT_LT(c.chain_ratio, 1e-12 * c.sobolev_ratio);
}

TEST(ChainReport, TaylorGreenSobolevRatio) {
  const ChainReport c = chain_report(taylor_green(make_grid(32), 1.0));
  EXPECT_LT(rel(c.sobolev_ratio, kTaylorGreenGradL6 / std::sqrt(kTaylorGreenLapSq)), 1e-6);
}

TEST(ChainReport, ZeroFieldIsUndefined) {
  EXPECT_THROW(chain_report(SpectralField(make_grid(8))), undefined_ratio_error);
}

TEST(ChainReport, InvariantUnderRescale) {
  const SpectralField f = random_solenoidal(make_grid(64), -1.0, 8, 6);
  const ChainReport base = chain_report(f);
  for (long lambda : {2L, 3L}) {
    const ChainReport scaled_report = chain_report(rescale(f, lambda));
    EXPECT_LT(rel(scaled_report.chain_ratio, base.chain_ratio), 1e-9) << lambda;
    EXPECT_LT(rel(scaled_report.sobolev_ratio, base.sobolev_ratio), 1e-9) << lambda;
  }
}

TEST(EstimateConstants, ReferenceCorpusRegression) {
  const Grid g = make_grid(kReferenceCorpusN);
  std::vector<SpectralField> corpus;
  for (std::uint64_t seed = 0; seed < kReferenceCorpusSeeds; ++seed)
    corpus.push_back(random_solenoidal(g, kReferenceCorpusSlope, kReferenceCorpusKMax, seed));
  const ConstantsEstimate e = estimate_constants(corpus);
  EXPECT_LT(rel(e.c_emp, kPinnedChainConstant), 1e-12);
  EXPECT_LT(rel(e.c_sob, kPinnedSobolevConstant), 1e-12);
  EXPECT_EQ(e.argmax_emp, kPinnedChainSeed);
  EXPECT_EQ(e.argmax_sob, kPinnedSobolevSeed);
}

TEST(EstimateConstants, Errors) {
  std::vector<SpectralField> zero{SpectralField(make_grid(8))};
  EXPECT_THROW(estimate_constants(zero), undefined_ratio_error);
  EXPECT_THROW(estimate_constants(std::vector<SpectralField>{}), std::invalid_argument);
}

TEST(EstimateConstants, RescaledCopiesShareChainRatio) {
  const SpectralField f = random_solenoidal(make_grid(64), -1.0, 6, 12);
  std::vector<SpectralField> copies{f, rescale(f, 2), rescale(f, 4)};
  const ConstantsEstimate e = estimate_constants(copies);
  for (const auto& c : copies) EXPECT_LT(rel(chain_report(c).chain_ratio, e.c_emp), 1e-9);
}
