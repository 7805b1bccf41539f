#pragma once

// File formats: binary snapshots and the diagnostics CSV.
//
// Snapshot layout (little-endian):
//   "NSNL" | u32 version = 1 | u32 n | f64 length | f64 time | f64 nu |
//   3 n^3 f64 physical samples, component-major, x fastest.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "nsnorm/balance_audit.hpp"
#include "nsnorm/field.hpp"

namespace nsnorm {

inline constexpr char kSnapshotMagic[4] = {'N', 'S', 'N', 'L'};
inline constexpr std::uint32_t kSnapshotVersion = 1;

namespace detail {

template <class T>
void put_le(std::string& buf, T value) {
  auto bits = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
  buf.append(reinterpret_cast<const char*>(bits.data()), sizeof(T));
}

template <class T>
T get_le(const std::string& buf, std::size_t& pos) {
  if (pos + sizeof(T) > buf.size()) throw format_error("snapshot: truncated file");
  std::array<unsigned char, sizeof(T)> bits;
  std::memcpy(bits.data(), buf.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
  pos += sizeof(T);
  return std::bit_cast<T>(bits);
}

}  // namespace detail

struct Snapshot {
  SpectralField field;
  double nu = 0.0;
};

inline std::string encode_snapshot(const SpectralField& f, double nu) {
  const auto samples = to_physical(f);
  std::string buf;
  buf.reserve(36 + samples.size() * 8);
  buf.append(kSnapshotMagic, 4);
  detail::put_le<std::uint32_t>(buf, kSnapshotVersion);
  detail::put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(f.grid.n));
  detail::put_le<double>(buf, f.grid.length);
  detail::put_le<double>(buf, f.time);
  detail::put_le<double>(buf, nu);
  for (double s : samples) detail::put_le<double>(buf, s);
  return buf;
}

/// Decodes a snapshot; the field is re-projected after the forward transform.
inline Snapshot decode_snapshot(const std::string& buf) {
  if (buf.size() < 36 || std::memcmp(buf.data(), kSnapshotMagic, 4) != 0) throw format_error("snapshot: bad magic");
  std::size_t pos = 4;
  const auto version = detail::get_le<std::uint32_t>(buf, pos);
  if (version != kSnapshotVersion) throw format_error("snapshot: unsupported version " + std::to_string(version));
  const auto n = detail::get_le<std::uint32_t>(buf, pos);
  const double length = detail::get_le<double>(buf, pos);
  const double time = detail::get_le<double>(buf, pos);
  const double nu = detail::get_le<double>(buf, pos);
  Grid g;
  try {
    g = make_grid(n, length);
  } catch (const config_error& e) {
    throw format_error(std::string("snapshot: ") + e.what());
  }
  const std::size_t count = 3 * g.physical_size();
  if (buf.size() != pos + count * 8) throw format_error("snapshot: payload size does not match n");
  std::vector<double> samples(count);
  for (auto& s : samples) s = detail::get_le<double>(buf, pos);
  Snapshot snap{leray_project(from_physical(samples, g)), nu};
  snap.field.time = time;
  return snap;
}

inline void write_snapshot(const std::string& path, const SpectralField& f, double nu) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw format_error("cannot open " + path + " for writing");
  const auto buf = encode_snapshot(f, nu);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

inline Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw format_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return decode_snapshot(ss.str());
}

inline constexpr const char* kDiagnosticsHeader =
    "t,E,L2,L3,L4,grad2,lap2,Hhalf,HhalfHom,S,energy_residual,enstrophy_residual";

inline std::string format_g17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string diagnostics_row(const DiagnosticsRecord& r) {
  const double cols[] = {r.t,
                         r.energy,
                         r.norms.l2,
                         r.norms.l3,
                         r.norms.l4,
                         r.norms.grad_l2_sq,
                         r.norms.lap_l2_sq,
                         r.norms.h_half_sq,
                         r.norms.h_half_hom_sq,
                         r.stretching,
                         r.energy_residual,
                         r.enstrophy_residual};
  std::string line;
  for (std::size_t i = 0; i < std::size(cols); ++i) {
    if (i) line += ',';
    line += format_g17(cols[i]);
  }
  return line;
}

inline std::string diagnostics_csv(std::span<const DiagnosticsRecord> records) {
  std::string out = std::string(kDiagnosticsHeader) + "\n";
  for (const auto& r : records) out += diagnostics_row(r) + "\n";
  return out;
}

inline std::vector<DiagnosticsRecord> parse_diagnostics_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kDiagnosticsHeader) throw format_error("diagnostics CSV: missing or wrong header");
  std::vector<DiagnosticsRecord> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> cols;
    std::size_t start = 0;
    while (start <= line.size()) {
      const std::size_t end = line.find(',', start);
      const std::string cell = line.substr(start, end == std::string::npos ? std::string::npos : end - start);
      char* stop = nullptr;
      const double v = std::strtod(cell.c_str(), &stop);
      if (cell.empty() || stop != cell.c_str() + cell.size())
        throw format_error("diagnostics CSV: bad number on line " + std::to_string(lineno));
      cols.push_back(v);
      if (end == std::string::npos) break;
      start = end + 1;
    }
    if (cols.size() != 12) throw format_error("diagnostics CSV: expected 12 columns on line " + std::to_string(lineno));
    DiagnosticsRecord r;
    r.t = cols[0];
    r.energy = cols[1];
    r.norms = {cols[2], cols[3], cols[4], cols[5], cols[6], cols[7], cols[8]};
    r.stretching = cols[9];
    r.energy_residual = cols[10];
    r.enstrophy_residual = cols[11];
    out.push_back(r);
  }
  return out;
}

}  // namespace nsnorm
