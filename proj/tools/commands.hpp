#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace bekk::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kNonStationary = 2,
  kDiverged = 3,
  kCertificateFailed = 4,
};

struct Common {
  bool quiet = false;
  int threads = 0;
  std::optional<std::uint64_t> seed;  // --seed, else BEKK_ERGO_SEED, else 0
};

struct SeedChoice {
  std::uint64_t value = 0;
  std::string source;  // "flag", "env" or "default"
};

/// Resolves the seed; throws std::invalid_argument on a malformed env value.
SeedChoice resolve_seed(const Common& common);

struct CheckArgs {
  std::string model;
  double margin = 0.0;
};

struct SimulateArgs {
  std::string model;
  long n = 1000;
  long burn_in = 0;
  bool keep_burn_in = false;
  std::string start = "T";
  std::string innovation = "gaussian";
  std::string sqrt_mode = "symmetric";
  std::string out = "trajectory";
  std::string format = "csv";  // csv, binary or both
  long probe_horizon = 10000;
};

struct DriftArgs {
  std::string model;
  long mc_states = 20;
  long mc_draws = 100000;
  double mc_sigmas = 3.0;
  long path_states = 1000;
  long random_states = 1000;
  long boundary_states = 200;
};

struct DiagnoseArgs {
  std::string model;
  bool convergence = false;
  bool orbit = false;
  bool moments = false;
  std::vector<std::string> starts;  // T, scaled:<k>, forward:<n> or a state file
  long chains = 200;
  long horizon = 60;
  long reference_lag = 1000;
  std::string distance = "energy";
  std::string curve_csv;
  long orbit_samples = 200;
  long orbit_depth = 20;
  double rank_multiplier = 1e-8;
  long n = 100000;
  long burn_in = 1000;
  double z_threshold = 3.0;
};

struct ConvertArgs {
  std::string model;
  std::string to = "vech";  // vec, vech, companion or arch
  int terms = 0;            // arch only; 0 picks the default truncation
};

struct ExampleArgs {
  std::string name;
  std::string out_dir = ".";
  bool list = false;
};

int cmd_check(const Common& c, const CheckArgs& a);
int cmd_simulate(const Common& c, const SimulateArgs& a);
int cmd_drift(const Common& c, const DriftArgs& a);
int cmd_diagnose(const Common& c, const DiagnoseArgs& a);
int cmd_convert(const Common& c, const ConvertArgs& a);
int cmd_example(const Common& c, const ExampleArgs& a);

/// Prints an error object on stdout and a message on stderr; returns kUsage.
int report_error(const std::string& command, const std::exception& e);

}  // namespace bekk::cli
