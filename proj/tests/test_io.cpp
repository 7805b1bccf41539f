#include <gtest/gtest.h>

#include <filesystem>

#include "support.hpp"

using namespace nsnorm;
using namespace nsnorm::testing;

TEST(Snapshot, RoundTripPreservesField) {
  const Grid g = make_grid(16, 3.0);
  SpectralField f = random_solenoidal(g, -1.0, 7, 2);
  f.time = 0.375;
  const Snapshot s = decode_snapshot(encode_snapshot(f, 0.02));
  EXPECT_EQ(s.field.grid, g);
  EXPECT_EQ(s.field.time, 0.375);
  EXPECT_EQ(s.nu, 0.02);
  EXPECT_LT(mode_distance_sq(s.field, f), 1e-28 * mode_inner(f, f));
}

TEST(Snapshot, LayoutIsLittleEndianHeaderPlusSamples) {
  const Grid g = make_grid(8);
  const std::string buf = encode_snapshot(taylor_green(g, 1.0), 0.1);
  EXPECT_EQ(buf.size(), 36u + 3u * 512u * 8u);
  EXPECT_EQ(buf.substr(0, 4), "NSNL");
  EXPECT_EQ(static_cast<unsigned char>(buf[4]), 1u);
  EXPECT_EQ(static_cast<unsigned char>(buf[8]), 8u);
}

TEST(Snapshot, RejectsCorruptInput) {
  const std::string good = encode_snapshot(taylor_green(make_grid(8), 1.0), 0.1);
  std::string bad = good;
  bad[0] = 'X';
  EXPECT_THROW(decode_snapshot(bad), format_error);
  bad = good;
  bad[4] = 9;
  EXPECT_THROW(decode_snapshot(bad), format_error);
  EXPECT_THROW(decode_snapshot(good.substr(0, good.size() - 8)), format_error);
  bad = good;
  bad[8] = 12;
  EXPECT_THROW(decode_snapshot(bad), format_error);
  EXPECT_THROW(decode_snapshot("NSN"), format_error);
}

TEST(Snapshot, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "nsnorm_io_snapshot.bin";
  write_snapshot(path.string(), abc_flow(make_grid(8), 1, 1, 1), 0.1);
  const Snapshot s = read_snapshot(path.string());
  EXPECT_LT(rel(l2_norm_sq(s.field), 3 * 8 * kPi3), 1e-13);
  std::filesystem::remove(path);
  EXPECT_THROW(read_snapshot(path.string()), format_error);
}

TEST(DiagnosticsCsv, RoundTripIsExact) {
  SimulationConfig cfg;
  cfg.grid = make_grid(16);
  cfg.dt = 1e-2;
  cfg.t_end = 0.05;
  cfg.initial_condition.kind = "random";
  const auto records = simulate(cfg).records;
  const std::string csv = diagnostics_csv(records);
  const auto back = parse_diagnostics_csv(csv);
  ASSERT_EQ(back.size(), records.size());
  EXPECT_EQ(diagnostics_csv(back), csv);
  EXPECT_EQ(back[2].norms.l3, records[2].norms.l3);
  EXPECT_TRUE(std::isnan(back.front().energy_residual));
  EXPECT_TRUE(std::isnan(back.back().enstrophy_residual));
  EXPECT_FALSE(std::isnan(back[1].energy_residual));
}

TEST(DiagnosticsCsv, HeaderAndNanCells) {
  DiagnosticsRecord r;
  const std::string csv = diagnostics_csv(std::vector<DiagnosticsRecord>{r});
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kDiagnosticsHeader);
  EXPECT_NE(csv.find(",nan,nan"), std::string::npos);
}

TEST(DiagnosticsCsv, RejectsMalformedText) {
  EXPECT_THROW(parse_diagnostics_csv(""), format_error);
  EXPECT_THROW(parse_diagnostics_csv("t,E\n1,2\n"), format_error);
  const std::string header = std::string(kDiagnosticsHeader) + "\n";
  EXPECT_THROW(parse_diagnostics_csv(header + "1,2,3\n"), format_error);
  EXPECT_THROW(parse_diagnostics_csv(header + "1,2,3,4,5,6,7,8,9,10,11,abc\n"), format_error);
  EXPECT_TRUE(parse_diagnostics_csv(header).empty());
}
