#include <gtest/gtest.h>

#include "support.hpp"

using namespace nsnorm;
using namespace nsnorm::testing;

TEST(LpNorm, ZeroFieldIsZero) {
  const SpectralField z(make_grid(8));
  for (double p : {1.0, 2.0, 3.0, 4.0, 8.0}) EXPECT_EQ(lp_norm(z, p), 0.0);
}

TEST(LpNorm, CosineModeL2) {
  EXPECT_LT(rel(lp_norm(cos_mode(make_grid(16)), 2.0), kCosModeL2), 1e-13);
  EXPECT_LT(rel(kCosModeL2, std::sqrt(4 * kPi3)), 1e-14);
}

TEST(LpNorm, TaylorGreenL2MatchesParseval) {
  const SpectralField f = taylor_green(make_grid(16), 1.0);
  EXPECT_LT(rel(lp_norm(f, 2.0), std::sqrt(l2_norm_sq(f))), 1e-12);
  EXPECT_LT(rel(lp_norm(f, 2.0), std::sqrt(2 * kPi3)), 1e-12);
}

TEST(LpNorm, TaylorGreenHigherExponentsAgainstQuadrature) {
  const SpectralField f = taylor_green(make_grid(32), 1.0);
  // |v|^p vanishes on whole planes, so quadrature converges algebraically.
  EXPECT_LT(rel(lp_norm(f, 3.0, 4), kTaylorGreenL3), 1e-7);
  EXPECT_LT(rel(lp_norm(f, 4.0, 2), kTaylorGreenL4), 1e-12);  // |v|^4 is a trigonometric polynomial
}

TEST(LpNorm, RejectsBadArguments) {
  const SpectralField f = taylor_green(make_grid(8), 1.0);
  EXPECT_THROW(lp_norm(f, 0.5), std::invalid_argument);
  EXPECT_THROW(lp_norm(f, 9.0), std::invalid_argument);
  EXPECT_THROW(lp_norm(f, 3.0, 3), std::invalid_argument);
}

TEST(LpNorm, AbsolutelyHomogeneous) {
  const SpectralField f = random_solenoidal(make_grid(16), -1.0, 4, 2);
  for (double a : {-2.0, 0.5, 3.0})
    for (double p : {1.0, 3.0, 4.5})
      EXPECT_LT(rel(lp_norm(scaled(f, a), p), std::abs(a) * lp_norm(f, p)), 1e-13) << a << " " << p;
}

TEST(LpNorm, OversamplingConvergedForWellResolvedFields) {
  for (auto [n, k] : {std::pair<std::size_t, long>{32, 4}, {64, 8}}) {
    const Grid g = make_grid(n);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const SpectralField f = random_solenoidal(g, -1.0, k, seed);
      const double fine = lp_norm(f, 3.0, 4);
      EXPECT_LE(std::abs(fine - lp_norm(f, 3.0, 2)), 1e-8 * fine) << n << " " << seed;
    }
  }
}

TEST(LpNorm, OversampleOneIsCoarsest) {
  const SpectralField f = random_solenoidal(make_grid(16), -1.0, 7, 4);
  const double e1 = std::abs(lp_norm(f, 3.0, 1) - lp_norm(f, 3.0, 4));
  const double e2 = std::abs(lp_norm(f, 3.0, 2) - lp_norm(f, 3.0, 4));
  EXPECT_LT(e2, e1);
}

TEST(GradL2, UnitShellTaylorGreenAndZero) {
  const Grid g = make_grid(16);
  const SpectralField c = cos_mode(g);
  EXPECT_LT(rel(grad_l2_norm_sq(c), l2_norm_sq(c)), 1e-14);
  EXPECT_LT(rel(grad_l2_norm_sq(taylor_green(g, 1.0)), 6 * kPi3), 1e-13);
  EXPECT_EQ(grad_l2_norm_sq(SpectralField(g)), 0.0);
}

TEST(LapL2, ShellsAndZero) {
  const Grid g = make_grid(16);
  const SpectralField c = cos_mode(g);
  EXPECT_LT(rel(lap_l2_norm_sq(c), l2_norm_sq(c)), 1e-14);
  const SpectralField tg = taylor_green(g, 1.0);
  EXPECT_LT(rel(lap_l2_norm_sq(tg), 3 * grad_l2_norm_sq(tg)), 1e-14);
  EXPECT_LT(rel(lap_l2_norm_sq(tg), kTaylorGreenLapSq), 1e-13);
  EXPECT_EQ(lap_l2_norm_sq(SpectralField(g)), 0.0);
}

TEST(HHalf, CosineModeClosedForms) {
  const SpectralField c = cos_mode(make_grid(16));
  EXPECT_LT(rel(h_half_norm_sq(c, false), kCosModeHHalf), 1e-13);
  EXPECT_LT(rel(h_half_norm_sq(c, false), std::sqrt(2.0) * 4 * kPi3), 1e-13);
  EXPECT_LT(rel(h_half_norm_sq(c, true), kCosModeHHalfHom), 1e-13);
  EXPECT_EQ(h_half_norm_sq(SpectralField(make_grid(8)), false), 0.0);
  EXPECT_EQ(h_half_norm_sq(SpectralField(make_grid(8)), true), 0.0);
}

TEST(Embedding, ConstantMagnitudeAttainsBound) {
  // a = 1, b = c = 0: v = (sin z, cos z, 0), |v| = 1 everywhere.
  const SpectralField f = abc_flow(make_grid(16), 1.0, 0.0, 0.0);
  for (auto [p, q] : {std::pair{2.0, 3.0}, {1.0, 4.0}, {3.0, 8.0}}) {
    const double expected = std::pow(2 * kPi, 3.0 * (1.0 / p - 1.0 / q));
    EXPECT_LT(rel(embedding_ratio(f, p, q), expected), 1e-13);
    EXPECT_LT(rel(embedding_bound(f, p, q), expected), 1e-14);
  }
}

TEST(Embedding, TaylorGreenStrictlyBelowBound) {
  const SpectralField f = taylor_green(make_grid(16), 1.0);
  const double r = embedding_ratio(f, 2.0, 3.0);
  EXPECT_LT(r, std::sqrt(2 * kPi) * (1 - 1e-3));
  EXPECT_LT(rel(r, std::sqrt(kTaylorGreenL2Sq) / kTaylorGreenL3), 1e-5);
}

TEST(Embedding, EqualExponentsAndErrors) {
  const SpectralField f = taylor_green(make_grid(8), 1.0);
  EXPECT_EQ(embedding_ratio(f, 3.0, 3.0), 1.0);
  EXPECT_THROW(embedding_ratio(SpectralField(make_grid(8)), 2.0, 3.0), undefined_ratio_error);
  EXPECT_THROW(embedding_ratio(f, 3.0, 2.0), std::invalid_argument);
}

TEST(NormReport, FieldsConsistent) {
  const SpectralField f = random_solenoidal(make_grid(16), -1.0, 5, 8);
  const NormReport r = norm_report(f);
  EXPECT_LT(rel(r.l2 * r.l2, l2_norm_sq(f)), 1e-14);
  EXPECT_EQ(r.l3, lp_norm(f, 3.0));
  EXPECT_EQ(r.l4, lp_norm(f, 4.0));
  EXPECT_GT(r.h_half_sq, r.h_half_hom_sq);
  for (double v : {r.l2, r.l3, r.l4, r.grad_l2_sq, r.lap_l2_sq, r.h_half_sq, r.h_half_hom_sq}) {
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_GE(v, 0.0);
  }
  // Hölder on the cell: |v|_2^2 <= |Omega|^{1/3} |v|_3^2.
  EXPECT_LE(r.l2 * r.l2, std::cbrt(f.grid.volume()) * r.l3 * r.l3);
}

TEST(NormReport, ZeroField) {
  const NormReport r = norm_report(SpectralField(make_grid(8)));
  EXPECT_EQ(r.l2, 0.0);
  EXPECT_EQ(r.l3, 0.0);
  EXPECT_EQ(r.grad_l2_sq, 0.0);
}

TEST(NormReport, ThreadCountDoesNotChangeBits) {
  const SpectralField f = random_solenoidal(make_grid(32), -1.0, 8, 1);
  setenv("NSNORM_THREADS", "1", 1);
  const NormReport a = norm_report(f);
  setenv("NSNORM_THREADS", "4", 1);
  const NormReport b = norm_report(f);
  unsetenv("NSNORM_THREADS");
  EXPECT_EQ(a.l3, b.l3);
  EXPECT_EQ(a.l4, b.l4);
  EXPECT_EQ(a.h_half_sq, b.h_half_sq);
}
