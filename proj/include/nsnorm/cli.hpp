#pragma once

// Batch front end: config ingestion and the four subcommands. Each command
// returns a process exit code and always writes a run manifest.
//
// Exit codes: 0 ok, 1 contract check failed, 2 bad input, 3 blow-up,
// 4 rescale overflow.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsnorm/balance_audit.hpp"
#include "nsnorm/constants.hpp"
#include "nsnorm/io.hpp"
#include "nsnorm/regularity.hpp"
#include "nsnorm/scaling.hpp"
#include "nsnorm/solver.hpp"

namespace nsnorm::cli {

using json = nlohmann::json;
namespace fs = std::filesystem;

inline constexpr const char* kArtifactVersion = "1.0.0";

enum ExitCode : int { kOk = 0, kContractFailed = 1, kBadInput = 2, kBlowUp = 3, kOverflow = 4 };

namespace detail {

inline void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw config_error(where + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items())
    if (!ok.count(key)) throw config_error(where + ": unknown key '" + key + "'");
}

template <class T>
T get(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) throw config_error(where + "." + key + ": required");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw config_error(where + "." + key + ": wrong type");
  }
}

template <class T>
T get_or(const json& obj, const std::string& where, const char* key, T fallback) {
  return obj.contains(key) ? get<T>(obj, where, key) : fallback;
}

inline std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw format_error("cannot open " + path.string() + " for writing");
  out << text;
}

inline std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw format_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

/// Parses the JSON config document. Sections: grid, physics, time,
/// initial_condition, outputs. Unknown keys anywhere are rejected.
inline SimulationConfig parse_config(const json& doc) {
  using detail::get;
  using detail::get_or;
  detail::reject_unknown(doc, "config", {"grid", "physics", "time", "initial_condition", "outputs"});
  for (const char* section : {"grid", "physics", "time", "initial_condition"})
    if (!doc.contains(section)) throw config_error(std::string("config.") + section + ": required");

  SimulationConfig cfg;
  const json& g = doc["grid"];
  detail::reject_unknown(g, "grid", {"n", "length", "dealias_fraction"});
  const long n = get<long>(g, "grid", "n");
  if (n <= 0) throw config_error("grid.n: must be positive");
  cfg.grid = make_grid(static_cast<std::size_t>(n), get_or<double>(g, "grid", "length", 2.0 * std::numbers::pi),
                       get_or<double>(g, "grid", "dealias_fraction", 2.0 / 3.0));

  const json& p = doc["physics"];
  detail::reject_unknown(p, "physics", {"nu", "rho0"});
  cfg.nu = get<double>(p, "physics", "nu");
  cfg.rho0 = get_or<double>(p, "physics", "rho0", 1.0);

  const json& t = doc["time"];
  detail::reject_unknown(t, "time", {"dt", "t_end"});
  cfg.dt = get<double>(t, "time", "dt");
  cfg.t_end = get<double>(t, "time", "t_end");

  const json& ic = doc["initial_condition"];
  detail::reject_unknown(ic, "initial_condition",
                         {"type", "amplitude", "a", "b", "c", "energy_slope", "k_max", "seed", "l3_norm"});
  auto& r = cfg.initial_condition;
  r.kind = get<std::string>(ic, "initial_condition", "type");
  r.amplitude = get_or<double>(ic, "initial_condition", "amplitude", 1.0);
  r.a = get_or<double>(ic, "initial_condition", "a", 1.0);
  r.b = get_or<double>(ic, "initial_condition", "b", 1.0);
  r.c = get_or<double>(ic, "initial_condition", "c", 1.0);
  r.energy_slope = get_or<double>(ic, "initial_condition", "energy_slope", -1.0);
  r.k_max = get_or<long>(ic, "initial_condition", "k_max", 4);
  r.seed = get_or<std::uint64_t>(ic, "initial_condition", "seed", 0);
  if (ic.contains("l3_norm")) r.l3_norm = get<double>(ic, "initial_condition", "l3_norm");
  static const std::set<std::string> kinds = {"zero", "taylor_green", "abc", "random", "planar_random", "cosine"};
  if (!kinds.count(r.kind)) throw config_error("initial_condition.type: unknown recipe '" + r.kind + "'");

  if (doc.contains("outputs")) {
    const json& o = doc["outputs"];
    detail::reject_unknown(o, "outputs", {"diagnostics_every", "snapshot_every", "oversample"});
    cfg.output_every = get_or<long>(o, "outputs", "diagnostics_every", 1);
    cfg.snapshot_every = get_or<long>(o, "outputs", "snapshot_every", 0);
    cfg.oversample = get_or<std::size_t>(o, "outputs", "oversample", 2);
  }
  cfg.validate();
  if (cfg.snapshot_every > 0 && cfg.snapshot_every % cfg.output_every != 0)
    throw config_error("outputs.snapshot_every must be a multiple of outputs.diagnostics_every");
  return cfg;
}

inline SimulationConfig load_config(const std::string& path) {
  json doc;
  try {
    doc = json::parse(detail::read_text(path));
  } catch (const json::parse_error& e) {
    throw config_error(std::string("config: invalid JSON: ") + e.what());
  } catch (const format_error& e) {
    throw config_error(e.what());
  }
  return parse_config(doc);
}

/// Run manifest; written even when the command fails.
struct RunManifest {
  std::string command;
  json config = json::object();
  std::string started;
  std::string finished;
  std::vector<std::string> outputs;
  int exit_status = 0;
  json extra = json::object();

  json to_json() const {
    return json{{"artifact_version", kArtifactVersion},
                {"command", command},
                {"config", config},
                {"start_time", started},
                {"end_time", finished},
                {"outputs", outputs},
                {"exit_status", exit_status},
                {"details", extra}};
  }

  int finish(const fs::path& path, int status) {
    exit_status = status;
    finished = detail::utc_now();
    try {
      fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
      detail::write_text(path, to_json().dump(2) + "\n");
    } catch (const std::exception& e) {
      std::cerr << "warning: could not write manifest " << path << ": " << e.what() << "\n";
    }
    return status;
  }
};

inline std::string snapshot_name(long step) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "snapshot_%06ld.bin", step);
  return buf;
}

/// simulate --config PATH [--out DIR]
inline int cmd_simulate(const std::string& config_path, const std::string& out_dir, std::ostream& log = std::cerr) {
  RunManifest man;
  man.command = "simulate";
  man.started = detail::utc_now();
  const fs::path dir(out_dir);
  const fs::path manifest = dir / "manifest.json";
  try {
    fs::create_directories(dir);
  } catch (const std::exception& e) {
    log << "error: cannot create " << dir << ": " << e.what() << "\n";
    return kBadInput;
  }

  SimulationConfig cfg;
  try {
    man.config = json::parse(detail::read_text(config_path));
    cfg = parse_config(man.config);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    man.extra["error"] = e.what();
    return man.finish(manifest, kBadInput);
  }

  auto observer = [&](const TrajectoryState& s, const DiagnosticsRecord&) {
    if (cfg.snapshot_every > 0 && s.step_index % cfg.snapshot_every == 0) {
      const fs::path path = dir / snapshot_name(s.step_index);
      write_snapshot(path.string(), s.field, cfg.nu);
      man.outputs.push_back(path.string());
    }
    return true;
  };

  const fs::path csv = dir / "diagnostics.csv";
  try {
    const SimulationResult res = simulate(cfg, observer);
    detail::write_text(csv, diagnostics_csv(res.records));
    man.outputs.push_back(csv.string());
    man.extra["max_cfl"] = res.max_cfl;
    man.extra["samples"] = res.records.size();
    if (res.max_cfl > 0.5) log << "warning: CFL number reached " << res.max_cfl << " (advisory bound 0.5)\n";
    return man.finish(manifest, kOk);
  } catch (const blowup_error& e) {
    log << "error: " << e.what() << "\n";
    detail::write_text(csv, diagnostics_csv(e.partial_records()));
    man.outputs.push_back(csv.string());
    man.extra["error"] = e.what();
    man.extra["blowup_step"] = e.step();
    return man.finish(manifest, kBlowUp);
  } catch (const config_error& e) {
    log << "error: " << e.what() << "\n";
    man.extra["error"] = e.what();
    return man.finish(manifest, kBadInput);
  }
}

namespace detail {

inline std::vector<fs::path> snapshot_files(const fs::path& dir) {
  std::vector<fs::path> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (e.is_regular_file() && name.rfind("snapshot_", 0) == 0 && e.path().extension() == ".bin") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline json verdict_json(const CriterionVerdict& v) {
  return json{{"l3_at_t0", v.l3_at_t0},
              {"l3_sq_at_t0", v.l3_sq_at_t0},
              {"h_half_at_t0", v.h_half_at_t0},
              {"threshold", v.threshold},
              {"satisfied", v.satisfied},
              {"poincare_K", v.poincare_K},
              {"decay_monotone", v.decay_monotone},
              {"max_enstrophy_over_initial", v.max_enstrophy_over_initial},
              {"max_l3_over_initial", v.max_l3_over_initial},
              {"inequality_holds", v.inequality_holds},
              {"max_inequality_residual", v.max_inequality_residual}};
}

}  // namespace detail

/// audit --in DIR|CSV --nu F [--c F] [--k F]
///
/// Writes audit_residuals.csv, chain_report.csv (one row per snapshot) and
/// verdict.json next to the diagnostics.
inline int cmd_audit(const std::string& input, double nu, double c, double k, std::ostream& log = std::cerr) {
  RunManifest man;
  man.command = "audit";
  man.started = detail::utc_now();
  const fs::path in(input);
  const fs::path dir = fs::is_directory(in) ? in : (in.parent_path().empty() ? fs::path(".") : in.parent_path());
  const fs::path csv = fs::is_directory(in) ? in / "diagnostics.csv" : in;
  const fs::path manifest = dir / "audit_manifest.json";
  man.config = json{{"input", input}, {"nu", nu}, {"C", c}, {"K", k}};

  std::vector<DiagnosticsRecord> records;
  try {
    if (!(nu > 0.0) || !(c > 0.0) || !(k > 0.0)) throw config_error("--nu, --c and --k must be positive");
    if (!fs::exists(csv)) throw format_error("missing diagnostics file " + csv.string());
    records = parse_diagnostics_csv(detail::read_text(csv));
    if (records.size() < 3) throw insufficient_data_error("diagnostics file has fewer than 3 samples");
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    man.extra["error"] = e.what();
    return man.finish(manifest, kBadInput);
  }

  try {
    const auto e_res = energy_residual(records, nu);
    const auto z_res = enstrophy_residual(records, nu);
    const auto c_res = chain_residual(records, nu, c);
    std::string res_csv = "t,energy_residual,enstrophy_residual,chain_residual\n";
    for (std::size_t i = 0; i < e_res.size(); ++i)
      res_csv += format_g17(records[i + 1].t) + "," + format_g17(e_res[i]) + "," + format_g17(z_res[i]) + "," +
                 format_g17(c_res[i]) + "\n";
    const fs::path res_path = dir / "audit_residuals.csv";
    detail::write_text(res_path, res_csv);
    man.outputs.push_back(res_path.string());

    std::string chain_csv = "file,t,stretching_abs,holder_bound,sobolev_ratio,chain_ratio\n";
    for (const auto& snap_path : detail::snapshot_files(dir)) {
      const Snapshot snap = read_snapshot(snap_path.string());
      ChainReport rep;
      if (snap.field.is_zero()) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        rep = {0.0, 0.0, nan, nan};
      } else {
        rep = chain_report(snap.field);
      }
      chain_csv += snap_path.filename().string() + "," + format_g17(snap.field.time) + "," +
                   format_g17(rep.stretching_abs) + "," + format_g17(rep.holder_bound) + "," +
                   format_g17(rep.sobolev_ratio) + "," + format_g17(rep.chain_ratio) + "\n";
    }
    const fs::path chain_path = dir / "chain_report.csv";
    detail::write_text(chain_path, chain_csv);
    man.outputs.push_back(chain_path.string());

    const CriterionVerdict verdict = gronwall_audit(records, nu, c, k);
    json doc = detail::verdict_json(verdict);
    doc["constants"] = json{{"nu", nu}, {"C", c}, {"K", k}, {"C_pinned", kPinnedChainConstant}};
    doc["max_abs_energy_residual"] = 0.0;
    doc["max_abs_enstrophy_residual"] = 0.0;
    doc["max_chain_residual"] = c_res.empty() ? 0.0 : *std::max_element(c_res.begin(), c_res.end());
    for (double x : e_res) doc["max_abs_energy_residual"] = std::max(doc["max_abs_energy_residual"].get<double>(), std::abs(x));
    for (double x : z_res)
      doc["max_abs_enstrophy_residual"] = std::max(doc["max_abs_enstrophy_residual"].get<double>(), std::abs(x));
    if (fs::exists(dir / "manifest.json")) {
      try {
        doc["config"] = json::parse(detail::read_text(dir / "manifest.json")).value("config", json::object());
      } catch (const json::exception&) {
      }
    }
    const fs::path verdict_path = dir / "verdict.json";
    detail::write_text(verdict_path, doc.dump(2) + "\n");
    man.outputs.push_back(verdict_path.string());
    return man.finish(manifest, kOk);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    man.extra["error"] = e.what();
    return man.finish(manifest, kBadInput);
  }
}

/// scale-check --snapshot PATH --lambda L[,L...] --p P[,P...] [--out CSV]
inline int cmd_scale_check(const std::string& snapshot, const std::vector<long>& lambdas, const std::vector<double>& ps,
                           const std::string& out_csv, std::ostream& log = std::cerr) {
  RunManifest man;
  man.command = "scale-check";
  man.started = detail::utc_now();
  const fs::path out = out_csv.empty() ? fs::path(snapshot + ".scaling.csv") : fs::path(out_csv);
  const fs::path manifest = fs::path(out.string() + ".manifest.json");
  man.config = json{{"snapshot", snapshot}, {"lambda", lambdas}, {"p", ps}};

  Snapshot snap;
  try {
    if (lambdas.empty() || ps.empty()) throw config_error("--lambda and --p need at least one value");
    for (long l : lambdas)
      if (l < 1) throw config_error("--lambda values must be positive integers");
    for (double p : ps)
      if (!(p >= 1.0 && p <= 8.0)) throw config_error("--p values must lie in [1, 8]");
    snap = read_snapshot(snapshot);
    if (snap.field.is_zero()) throw undefined_ratio_error("snapshot holds the zero field");
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    man.extra["error"] = e.what();
    return man.finish(manifest, kBadInput);
  }

  std::string csv = "lambda,p,measured,predicted,abs_error\n";
  bool ok = true;
  json reports = json::array();
  try {
    for (long lambda : lambdas) {
      const ScalingReport rep = scaling_report(snap.field, lambda, ps, std::max(snap.nu, 0.0));
      for (const auto& row : rep.rows)
        csv += std::to_string(row.lambda) + "," + format_g17(row.p) + "," + format_g17(row.measured) + "," +
               format_g17(row.predicted) + "," + format_g17(row.abs_error()) + "\n";
      const bool pass = within_contract(rep);
      ok = ok && pass;
      reports.push_back(json{{"lambda", lambda},
                             {"h_half_hom_ratio", rep.h_half_hom_ratio},
                             {"h_half_inhom_ratio", rep.h_half_inhom_ratio},
                             {"ns_residual_covariance", rep.ns_residual_covariance},
                             {"pressure_mismatch", rep.pressure_mismatch},
                             {"within_contract", pass}});
    }
  } catch (const rescale_overflow_error& e) {
    log << "error: lambda " << e.lambda() << ": " << e.what() << "\n";
    man.extra["error"] = e.what();
    man.extra["overflow_lambda"] = e.lambda();
    return man.finish(manifest, kOverflow);
  }
  detail::write_text(out, csv);
  man.outputs.push_back(out.string());
  man.extra["reports"] = reports;
  return man.finish(manifest, ok ? kOk : kContractFailed);
}

/// Parses "A..B" (inclusive). B < A yields an empty range.
inline std::pair<long, long> parse_seed_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw config_error("--seeds: expected A..B");
  try {
    std::size_t used = 0;
    const std::string a = text.substr(0, dots), b = text.substr(dots + 2);
    const long lo = std::stol(a, &used);
    if (used != a.size()) throw config_error("--seeds: bad start");
    const long hi = std::stol(b, &used);
    if (used != b.size()) throw config_error("--seeds: bad end");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw config_error("--seeds: expected integers A..B");
  }
}

/// constants --seeds A..B --n N --kmax K --slope S [--out JSON]
inline int cmd_constants(const std::string& seeds, std::size_t n, long k_max, double slope, const std::string& out_json,
                         std::ostream& log = std::cerr) {
  RunManifest man;
  man.command = "constants";
  man.started = detail::utc_now();
  const fs::path out = out_json.empty() ? fs::path("constants.json") : fs::path(out_json);
  const fs::path manifest = fs::path(out.string() + ".manifest.json");
  man.config = json{{"seeds", seeds}, {"n", n}, {"k_max", k_max}, {"slope", slope}};

  std::vector<SpectralField> corpus;
  long lo = 0, hi = -1;
  try {
    std::tie(lo, hi) = parse_seed_range(seeds);
    if (hi < lo || lo < 0) throw config_error("--seeds: empty or negative seed range");
    const Grid g = make_grid(n);
    for (long s = lo; s <= hi; ++s) corpus.push_back(random_solenoidal(g, slope, k_max, static_cast<std::uint64_t>(s)));
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    man.extra["error"] = e.what();
    return man.finish(manifest, kBadInput);
  }

  try {
    const ConstantsEstimate est = estimate_constants(corpus);
    json doc{{"C_emp", est.c_emp},
             {"C_sob", est.c_sob},
             {"argmax_C_emp", {{"recipe", "random_solenoidal"}, {"seed", lo + static_cast<long>(est.argmax_emp)}}},
             {"argmax_C_sob", {{"recipe", "random_solenoidal"}, {"seed", lo + static_cast<long>(est.argmax_sob)}}},
             {"corpus",
              {{"recipe", "random_solenoidal"}, {"seeds", {lo, hi}}, {"n", n}, {"k_max", k_max}, {"energy_slope", slope},
               {"oversample", 2}, {"count", corpus.size()}}},
             {"note", "corpus maxima are lower bounds on the best constants"}};
    detail::write_text(out, doc.dump(2) + "\n");
    man.outputs.push_back(out.string());
    return man.finish(manifest, kOk);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    man.extra["error"] = e.what();
    return man.finish(manifest, kBadInput);
  }
}

}  // namespace nsnorm::cli
