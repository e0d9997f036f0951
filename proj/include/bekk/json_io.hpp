#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "bekk/chain_state.hpp"
#include "bekk/diagnostics.hpp"
#include "bekk/drift.hpp"
#include "bekk/model.hpp"
#include "bekk/simulate.hpp"
#include "bekk/stationarity.hpp"

namespace bekk {

using Json = nlohmann::ordered_json;

inline constexpr const char* kModelFormat = "bekk-v1";
inline constexpr const char* kStateFormat = "bekk-state-v1";
inline constexpr const char* kTrajectoryMagic = "BEKKTRJ1";

// Model files:
//   { "format": "bekk-v1", "d": 2, "p": 1, "q": 1,
//     "C": [[...], [...]],
//     "A": [ [ A_{1,1}, A_{1,2}, ... ], ... ],   one list per ARCH lag
//     "B": [ [ B_{1,1}, ... ], ... ] }           one list per GARCH lag
// Matrices are row major. Optional "name" and "description" are ignored.

/// Parses JSON text; syntax errors become SchemaError with line and column,
/// structural problems SchemaError naming the field.
Json parse_json_text(const std::string& text, const std::string& source = "<input>");
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

BekkParameters parameters_from_json(const Json& j);
Json parameters_to_json(const BekkParameters& p);
/// Reads, checks the schema and validates. ValidationError lists model problems.
BekkModel load_model(const std::filesystem::path& path);

// State files: { "format": "bekk-state-v1", "sigma": [ S_n, S_{n-1}, ... ],
//                "x": [ x_n, x_{n-1}, ... ] }, most recent first.
ChainState state_from_json(const BekkModel& model, const Json& j);
Json state_to_json(const ChainState& y);
ChainState load_state(const BekkModel& model, const std::filesystem::path& path);

Json matrix_to_json(const Eigen::MatrixXd& m);
Json vector_to_json(const Eigen::VectorXd& v);
Eigen::MatrixXd matrix_from_json(const Json& j, const std::string& field);

Json to_json(const StationarityReport& r);
Json to_json(const VecForm& v);
Json to_json(const VechForm& v);
Json to_json(const CompanionBlocks& c);
Json to_json(const ArchInfinityCoeffs& k, bool include_matrices = true);
Json to_json(const DriftCertificate& c);
Json to_json(const TelescopingResiduals& t);
Json to_json(const MonteCarloDrift& m);
Json to_json(const DriftVerification& v);
Json to_json(const OffStateReport& r);
Json to_json(const DecayFit& f);
Json to_json(const ConvergenceReport& r);
Json to_json(const OrbitDimensionReport& r);
Json to_json(const MomentReport& r);

/// Metadata written next to trajectory files.
Json trajectory_sidecar(const Trajectory& t);

/// CSV with header n,x_1..x_d,vech_sigma_1..vech_sigma_m; shortest
/// round-trip decimal formatting.
void write_trajectory_csv(const Trajectory& t, const std::filesystem::path& path);

// Binary layout, little endian:
//   char[8]  "BEKKTRJ1"
//   uint32   d
//   uint32   0 (reserved)
//   uint64   rows
//   int64    time index of the first row
//   rows x (d + d(d+1)/2) float64: x_1..x_d then vech(Sigma) per row
void write_trajectory_binary(const Trajectory& t, const std::filesystem::path& path);

struct TrajectoryData {
  int d = 0;
  long first_index = 1;
  std::vector<double> x_data;
  std::vector<double> sigma_data;
};
TrajectoryData read_trajectory_binary(const std::filesystem::path& path);

}  // namespace bekk
