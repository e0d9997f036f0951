#include <iostream>

#include <CLI11.hpp>

#include "bekk/version.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace bekk::cli;

  CLI::App app{"Stationarity, drift certificates and simulation for BEKK GARCH(p,q) models",
               "bekk-ergo"};
  app.set_version_flag("--version", std::string(bekk::kVersion));
  app.require_subcommand(1);
  app.footer(
      "Exit codes: 0 ok, 1 usage or I/O error, 2 model not stationary, 3 simulation diverged,\n"
      "4 drift certificate violated. JSON goes to stdout, the summary to stderr.\n"
      "BEKK_ERGO_SEED supplies the seed when --seed is absent.");

  Common common;
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_flag("-q,--quiet", common.quiet, "Suppress the summary on stderr");
    sub->add_option("--threads", common.threads, "Worker threads (0 = all cores)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", seed, "Random seed (falls back to BEKK_ERGO_SEED, then 0)");
  };

  CheckArgs check;
  auto* c_check = app.add_subcommand("check", "Decide stationarity and solve the fixed points");
  c_check->add_option("model", check.model, "Model file (bekk-v1)")->required();
  c_check->add_option("--margin", check.margin, "Report rho_AB >= 1 - margin as non-stationary")
      ->check(CLI::Range(0.0, 1.0));
  add_common(c_check);

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Simulate a trajectory");
  c_sim->add_option("model", sim.model, "Model file (bekk-v1)")->required();
  c_sim->add_option("--n", sim.n, "Recorded steps after burn-in")->check(CLI::NonNegativeNumber);
  c_sim->add_option("--burn-in", sim.burn_in, "Steps excluded from statistics")
      ->check(CLI::NonNegativeNumber);
  c_sim->add_flag("--keep-burn-in", sim.keep_burn_in, "Also write the burn-in rows");
  c_sim->add_option("--start", sim.start, "T, scaled:<k>, forward:<n> or a state file");
  c_sim->add_option("--innov", sim.innovation, "gaussian or t:<dof>");
  c_sim->add_option("--sqrt", sim.sqrt_mode, "symmetric or cholesky");
  c_sim->add_option("--out", sim.out, "Output prefix");
  c_sim->add_option("--format", sim.format, "csv, binary or both");
  c_sim->add_option("--probe-horizon", sim.probe_horizon,
                    "Steps compared bitwise for off-variety starts")
      ->check(CLI::NonNegativeNumber);
  add_common(c_sim);

  DriftArgs drift;
  auto* c_drift = app.add_subcommand("drift", "Build and verify the Foster-Lyapunov certificate");
  c_drift->add_option("model", drift.model, "Model file (bekk-v1)")->required();
  c_drift->add_option("--mc-states", drift.mc_states, "States for the Monte Carlo cross-check");
  c_drift->add_option("--mc-draws", drift.mc_draws, "Innovation draws per Monte Carlo state");
  c_drift->add_option("--mc-sigmas", drift.mc_sigmas, "Band in standard errors");
  c_drift->add_option("--path-states", drift.path_states, "Verified states from a path");
  c_drift->add_option("--random-states", drift.random_states, "Verified random states");
  c_drift->add_option("--boundary-states", drift.boundary_states, "Verified near-singular states");
  add_common(c_drift);

  DiagnoseArgs diag;
  auto* c_diag = app.add_subcommand("diagnose", "Convergence, orbit dimension and moment checks");
  c_diag->add_option("model", diag.model, "Model file (bekk-v1)")->required();
  c_diag->add_flag("--convergence", diag.convergence, "Run the convergence probe");
  c_diag->add_flag("--orbit", diag.orbit, "Run the orbit dimension check");
  c_diag->add_flag("--moments", diag.moments, "Run the moment check");
  c_diag->add_option("--start", diag.starts, "Start (repeatable): T, scaled:<k>, forward:<n>, file");
  c_diag->add_option("--chains", diag.chains, "Chains per start (>= 100)");
  c_diag->add_option("--horizon", diag.horizon, "Lags in the distance curve");
  c_diag->add_option("--reference-lag", diag.reference_lag, "Lag of the reference ensemble");
  c_diag->add_option("--distance", diag.distance, "energy or ks");
  c_diag->add_option("--curve-csv", diag.curve_csv, "Write lag,start,distance rows here");
  c_diag->add_option("--orbit-samples", diag.orbit_samples, "Orbit paths");
  c_diag->add_option("--orbit-depth", diag.orbit_depth, "Steps per orbit path");
  c_diag->add_option("--rank-multiplier", diag.rank_multiplier, "Relative rank threshold");
  c_diag->add_option("--n", diag.n, "Steps for the moment check");
  c_diag->add_option("--burn-in", diag.burn_in, "Burn-in for the moment check");
  c_diag->add_option("--z-threshold", diag.z_threshold, "Moment check band");
  add_common(c_diag);

  ConvertArgs conv;
  auto* c_conv = app.add_subcommand("convert", "Print vec, vech, companion or ARCH(inf) forms");
  c_conv->add_option("model", conv.model, "Model file (bekk-v1)")->required();
  c_conv->add_option("--to", conv.to, "vec, vech, companion or arch");
  c_conv->add_option("--terms", conv.terms, "ARCH(inf) terms (0 = default truncation)");
  add_common(c_conv);

  ExampleArgs ex;
  auto* c_ex = app.add_subcommand("example", "Write a built-in model and its description");
  c_ex->add_option("name", ex.name, "scalar, ex-2x2, ex-3.3.10 or ex-3.3.11");
  c_ex->add_option("--out-dir", ex.out_dir, "Directory for the written files");
  c_ex->add_flag("--list", ex.list, "List the built-in models");
  add_common(c_ex);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  std::string name = "unknown";
  try {
    auto* sub = app.get_subcommands().front();
    name = sub->get_name();
    if (sub->count("--seed") > 0) common.seed = seed;
    if (sub == c_check) return cmd_check(common, check);
    if (sub == c_sim) return cmd_simulate(common, sim);
    if (sub == c_drift) return cmd_drift(common, drift);
    if (sub == c_diag) return cmd_diagnose(common, diag);
    if (sub == c_conv) return cmd_convert(common, conv);
    if (sub == c_ex) return cmd_example(common, ex);
  } catch (const std::exception& e) {
    return report_error(name, e);
  }
  return kUsage;
}
