// nsnorm: batch driver for simulation, auditing, scaling checks and the
// empirical-constant survey.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nsnorm/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Spectral Navier-Stokes solver and norm diagnostics"};
  app.set_version_flag("--version", std::string(nsnorm::cli::kArtifactVersion));
  app.require_subcommand(1);

  std::string config, out_dir = "run";
  auto* sim = app.add_subcommand("simulate", "Run a trajectory and write diagnostics");
  sim->add_option("--config", config, "JSON run configuration")->required();
  sim->add_option("--out", out_dir, "Output directory");

  std::string audit_in;
  double nu = 0.0, c = nsnorm::kPinnedChainConstant, k = 1.0;
  auto* audit = app.add_subcommand("audit", "Recompute residuals and the regularity verdict");
  audit->add_option("--in", audit_in, "Run directory or diagnostics CSV")->required();
  audit->add_option("--nu", nu, "Kinematic viscosity")->required();
  audit->add_option("--c", c, "Chain constant");
  audit->add_option("--k", k, "Poincare constant");

  std::string snapshot, scale_out;
  std::vector<long> lambdas;
  std::vector<double> ps;
  auto* scale = app.add_subcommand("scale-check", "Check the scaling laws on a snapshot");
  scale->add_option("--snapshot", snapshot, "Snapshot file")->required();
  scale->add_option("--lambda", lambdas, "Integer dilation factors")->required()->delimiter(',');
  scale->add_option("--p", ps, "Lebesgue exponents")->required()->delimiter(',');
  scale->add_option("--out", scale_out, "Output CSV");

  std::string seeds = "0..99", const_out = "constants.json";
  std::size_t n = nsnorm::kReferenceCorpusN;
  long kmax = nsnorm::kReferenceCorpusKMax;
  double slope = nsnorm::kReferenceCorpusSlope;
  auto* constants = app.add_subcommand("constants", "Estimate C_emp and C_sob over a random corpus");
  constants->add_option("--seeds", seeds, "Inclusive seed range A..B");
  constants->add_option("--n", n, "Grid size");
  constants->add_option("--kmax", kmax, "Largest populated wavenumber");
  constants->add_option("--slope", slope, "Spectral amplitude slope");
  constants->add_option("--out", const_out, "Output JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : nsnorm::cli::kBadInput;
  }

  if (sim->parsed()) return nsnorm::cli::cmd_simulate(config, out_dir);
  if (audit->parsed()) return nsnorm::cli::cmd_audit(audit_in, nu, c, k);
  if (scale->parsed()) return nsnorm::cli::cmd_scale_check(snapshot, lambdas, ps, scale_out);
  return nsnorm::cli::cmd_constants(seeds, n, kmax, slope, const_out);
}
