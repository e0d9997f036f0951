#include "bekk/json_io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "bekk/errors.hpp"

namespace bekk {
namespace {

static_assert(std::endian::native == std::endian::little,
              "trajectory binary writer assumes a little-endian host");

std::string field_at(const std::string& parent, std::size_t i) {
  return parent + "[" + std::to_string(i) + "]";
}

const Json& require(const Json& j, const char* key) {
  if (!j.is_object()) throw SchemaError("<root>", "expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(key, "missing required field");
  return *it;
}

int require_positive_int(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 1000000) {
    throw SchemaError(key, "expected a positive integer");
  }
  return v.get<int>();
}

Eigen::VectorXd vector_from_json(const Json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw SchemaError(field, "expected a non-empty array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw SchemaError(field_at(field, i), "expected a number");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Json number(double v) {
  // JSON has no infinities; they are written as strings so nothing is lost.
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

Json numbers(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

Json matrices_to_json(const std::vector<Eigen::MatrixXd>& ms) {
  Json out = Json::array();
  for (const auto& m : ms) out.push_back(matrix_to_json(m));
  return out;
}

void append_number(std::string& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

}  // namespace

Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream msg;
    msg << source << ":" << line << ":" << col << ": malformed JSON (" << e.what() << ")";
    throw SchemaError("<json>", msg.str());
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), path.string());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(number(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

Json vector_to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
  return out;
}

Eigen::MatrixXd matrix_from_json(const Json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw SchemaError(field, "expected a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) {
    throw SchemaError(field_at(field, 0), "expected a non-empty array of numbers");
  }
  const std::size_t cols = j[0].size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string row_field = field_at(field, i);
    if (!j[i].is_array() || j[i].size() != cols) {
      throw SchemaError(row_field, "expected a row of " + std::to_string(cols) + " numbers");
    }
    for (std::size_t k = 0; k < cols; ++k) {
      if (!j[i][k].is_number()) throw SchemaError(field_at(row_field, k), "expected a number");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = j[i][k].get<double>();
    }
  }
  return m;
}

BekkParameters parameters_from_json(const Json& j) {
  if (!j.is_object()) throw SchemaError("<root>", "expected a JSON object");
  const Json& fmt = require(j, "format");
  if (!fmt.is_string() || fmt.get<std::string>() != kModelFormat) {
    throw SchemaError("format", std::string("expected \"") + kModelFormat + "\"");
  }
  BekkParameters p;
  p.d = require_positive_int(j, "d");
  p.p = require_positive_int(j, "p");
  p.q = require_positive_int(j, "q");
  p.C = matrix_from_json(require(j, "C"), "C");
  auto families = [&](const char* key) {
    const Json& arr = require(j, key);
    if (!arr.is_array()) throw SchemaError(key, "expected an array with one list per lag");
    std::vector<std::vector<Eigen::MatrixXd>> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string lag_field = field_at(key, i);
      if (!arr[i].is_array() || arr[i].empty()) {
        throw SchemaError(lag_field, "expected a non-empty list of matrices");
      }
      std::vector<Eigen::MatrixXd> lag;
      for (std::size_t k = 0; k < arr[i].size(); ++k) {
        lag.push_back(matrix_from_json(arr[i][k], field_at(lag_field, k)));
      }
      out.push_back(std::move(lag));
    }
    return out;
  };
  p.A = families("A");
  p.B = families("B");
  return p;
}

Json parameters_to_json(const BekkParameters& p) {
  Json j;
  j["format"] = kModelFormat;
  j["d"] = p.d;
  j["p"] = p.p;
  j["q"] = p.q;
  j["C"] = matrix_to_json(p.C);
  Json a = Json::array(), b = Json::array();
  for (const auto& lag : p.A) a.push_back(matrices_to_json(lag));
  for (const auto& lag : p.B) b.push_back(matrices_to_json(lag));
  j["A"] = std::move(a);
  j["B"] = std::move(b);
  return j;
}

BekkModel load_model(const std::filesystem::path& path) {
  return BekkModel::validate(parameters_from_json(read_json_file(path)));
}

ChainState state_from_json(const BekkModel& model, const Json& j) {
  if (!j.is_object()) throw SchemaError("<root>", "expected a JSON object");
  const Json& fmt = require(j, "format");
  if (!fmt.is_string() || fmt.get<std::string>() != kStateFormat) {
    throw SchemaError("format", std::string("expected \"") + kStateFormat + "\"");
  }
  const Json& sig = require(j, "sigma");
  const Json& xs = require(j, "x");
  if (!sig.is_array() || static_cast<int>(sig.size()) != model.garch_order()) {
    throw SchemaError("sigma", "expected " + std::to_string(model.garch_order()) + " matrices");
  }
  if (!xs.is_array() || static_cast<int>(xs.size()) != model.arch_order()) {
    throw SchemaError("x", "expected " + std::to_string(model.arch_order()) + " vectors");
  }
  ChainState y;
  for (std::size_t i = 0; i < sig.size(); ++i) {
    const std::string field = field_at("sigma", i);
    const Eigen::MatrixXd m = matrix_from_json(sig[i], field);
    if (m.rows() != model.dim() || m.cols() != model.dim()) {
      throw SchemaError(field, "expected a " + std::to_string(model.dim()) + "x" +
                                   std::to_string(model.dim()) + " matrix");
    }
    try {
      y.sigma_blocks.push_back(vech(SymMatrix::from_dense(m)));
    } catch (const std::exception&) {
      throw SchemaError(field, "matrix is not symmetric");
    }
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const std::string field = field_at("x", i);
    Eigen::VectorXd v = vector_from_json(xs[i], field);
    if (v.size() != model.dim()) {
      throw SchemaError(field, "expected " + std::to_string(model.dim()) + " numbers");
    }
    y.x_blocks.push_back(std::move(v));
  }
  return y;
}

Json state_to_json(const ChainState& y) {
  Json j;
  j["format"] = kStateFormat;
  Json sig = Json::array(), xs = Json::array();
  for (const auto& b : y.sigma_blocks) sig.push_back(matrix_to_json(unvech(b).matrix()));
  for (const auto& x : y.x_blocks) xs.push_back(vector_to_json(x));
  j["sigma"] = std::move(sig);
  j["x"] = std::move(xs);
  return j;
}

ChainState load_state(const BekkModel& model, const std::filesystem::path& path) {
  return state_from_json(model, read_json_file(path));
}

Json to_json(const StationarityReport& r) {
  Json j;
  j["rho_AB"] = number(r.rho_AB);
  j["rho_B"] = number(r.rho_B);
  j["rho_companion"] = number(r.rho_companion);
  j["stationary"] = r.stationary;
  j["margin"] = r.margin;
  j["Sigma"] = r.Sigma ? matrix_to_json(r.Sigma->matrix()) : Json(nullptr);
  j["Sigma_tilde"] = r.Sigma_tilde ? matrix_to_json(r.Sigma_tilde->matrix()) : Json(nullptr);
  j["T"] = r.T ? state_to_json(*r.T) : Json(nullptr);
  return j;
}

Json to_json(const VecForm& v) {
  return Json{{"Atilde", matrices_to_json(v.Atilde)}, {"Btilde", matrices_to_json(v.Btilde)}};
}

Json to_json(const VechForm& v) {
  return Json{{"A", matrices_to_json(v.A)}, {"B", matrices_to_json(v.B)}};
}

Json to_json(const CompanionBlocks& c) {
  return Json{{"B_block", matrix_to_json(c.B_block)},
              {"A_block", matrix_to_json(c.A_block)},
              {"Btilde_block", matrix_to_json(c.Btilde_block)},
              {"scrC", vector_to_json(c.scrC)},
              {"scrC1", vector_to_json(c.scrC1)}};
}

Json to_json(const ArchInfinityCoeffs& k, bool include_matrices) {
  Json j;
  j["terms"] = k.K.size();
  j["intercept"] = vector_to_json(k.intercept);
  j["tail_norm"] = number(k.tail_norm);
  j["tail_identity_bound"] = number(k.tail_identity_bound);
  j["last_norm"] = number(k.last_norm);
  if (include_matrices) j["K"] = matrices_to_json(k.K);
  return j;
}

Json to_json(const DriftCertificate& c) {
  Json j;
  j["model_hash"] = c.model_hash;
  j["p"] = c.p;
  j["q"] = c.q;
  j["Sigma_dual"] = matrix_to_json(c.Sigma_dual.matrix());
  Json vs = Json::array();
  for (const auto& v : c.V) vs.push_back(matrix_to_json(v.matrix()));
  j["V"] = std::move(vs);
  j["alpha_k"] = numbers(c.alpha_k);
  j["alpha0"] = number(c.alpha0);
  j["alpha"] = number(c.alpha);
  j["b"] = number(c.b);
  j["K_level"] = number(c.K_level);
  return j;
}

Json to_json(const TelescopingResiduals& t) {
  return Json{{"garch", numbers(t.garch)},
              {"arch", numbers(t.arch)},
              {"dual_split", number(t.dual_split)},
              {"max", number(t.max())}};
}

Json to_json(const MonteCarloDrift& m) {
  return Json{{"analytic", number(m.analytic)}, {"mean", number(m.mean)},
              {"std_error", number(m.std_error)}, {"draws", m.draws}, {"z", number(m.z())}};
}

Json to_json(const DriftVerification& v) {
  Json spec{{"path_states", v.spec.path_states},
            {"path_burn_in", v.spec.path_burn_in},
            {"random_states", v.spec.random_states},
            {"boundary_states", v.spec.boundary_states},
            {"boundary_eigenvalue", v.spec.boundary_eigenvalue},
            {"seed", v.spec.seed},
            {"rounding", v.spec.rounding}};
  Json j;
  j["sample_spec"] = std::move(spec);
  j["checked"] = v.checked;
  j["violations"] = v.violations;
  j["outside_level"] = v.outside_level;
  j["worst_slack"] = number(v.worst_slack);
  j["worst_relative_slack"] = number(v.worst_relative_slack);
  j["worst"] = Json{{"source", v.worst.source},
                    {"V", number(v.worst.V)},
                    {"drift", number(v.worst.drift)},
                    {"bound", number(v.worst.bound)}};
  j["ok"] = v.ok();
  j[v.ok() ? "worst_state" : "witness"] = v.witness ? state_to_json(*v.witness) : Json(nullptr);
  return j;
}

Json to_json(const OffStateReport& r) {
  Json coords = Json::array();
  for (const auto& c : r.coordinates) {
    coords.push_back(Json{{"lag", c.lag},
                          {"row", c.row},
                          {"col", c.col},
                          {"state_index", c.state_index},
                          {"manifold_value", number(c.manifold_value)},
                          {"start_value", number(c.start_value)},
                          {"offset_vanishes", c.offset_vanishes},
                          {"vanished_at", c.vanished_at},
                          {"final_log10_offset", number(c.final_log10_offset)},
                          {"simulated_equal_steps", c.simulated_equal_steps},
                          {"min_simulated_gap", number(c.min_simulated_gap)}});
  }
  Json j;
  j["sigma_dim"] = r.sigma_dim;
  j["reachable_rank"] = r.reachable_rank;
  j["invariant_dim"] = r.invariant_dim;
  j["coordinate_aligned"] = r.coordinate_aligned;
  j["on_manifold"] = r.on_manifold;
  j["offset_norm"] = number(r.offset_norm);
  j["offset_rate"] = number(r.offset_rate);
  j["injective"] = r.injective;
  j["offset_persists"] = r.offset_persists;
  j["horizon"] = r.horizon;
  j["coordinates"] = std::move(coords);
  return j;
}

Json to_json(const DecayFit& f) {
  return Json{{"valid", f.valid},       {"first_lag", f.first_lag}, {"last_lag", f.last_lag},
              {"points", f.points},     {"slope", number(f.slope)}, {"intercept", number(f.intercept)},
              {"r_squared", number(f.r_squared)}, {"rate", number(f.rate)},
              {"rate_ci95", Json::array({number(f.rate_lo), number(f.rate_hi)})}};
}

Json to_json(const ConvergenceReport& r) {
  Json j;
  j["model_hash"] = r.model_hash;
  j["distance"] = to_string(r.options.distance);
  j["chains_per_start"] = r.options.chains_per_start;
  j["horizon"] = r.horizon;
  j["reference_lag"] = r.options.reference_lag;
  j["seed"] = r.options.seed;
  j["innovation"] = r.options.innovation.label();
  j["floor_multiplier"] = r.options.floor_multiplier;
  j["ambient_dim"] = r.ambient_dim;
  j["compared_coordinates"] = r.compared_coordinates;
  j["noise_floor"] = number(r.noise_floor);
  j["rate_note"] = "fitted rate of a distributional proxy; not the total variation rate";
  Json curves = Json::array();
  for (const auto& c : r.curves) {
    Json cc;
    cc["start"] = state_to_json(c.start);
    cc["on_manifold"] = c.on_manifold;
    cc["offset_norm"] = number(c.offset_norm);
    cc["distance"] = numbers(c.distance);
    cc["fit"] = to_json(c.fit);
    Json consts = Json::array();
    for (const auto& k : c.constant_coordinates) {
      consts.push_back(Json{{"state_index", k.state_index},
                            {"reference_value", number(k.reference_value)},
                            {"min_ks", number(k.min_ks)},
                            {"min_wasserstein", number(k.min_wasserstein)},
                            {"ks", numbers(k.ks)},
                            {"wasserstein", numbers(k.wasserstein)},
                            {"hits", k.hits}});
    }
    cc["constant_coordinates"] = std::move(consts);
    curves.push_back(std::move(cc));
  }
  j["curves"] = std::move(curves);
  j["warnings"] = r.warnings;
  return j;
}

Json to_json(const OrbitDimensionReport& r) {
  return Json{{"ambient_dim", r.ambient_dim},
              {"points", r.points},
              {"linear_rank", r.linear_rank},
              {"quadratic_features", r.quadratic_features},
              {"quadratic_rank", r.quadratic_rank},
              {"degenerate", r.degenerate},
              {"threshold_multiplier", r.threshold_multiplier},
              {"linear_singular_values", numbers(r.linear_singular_values)},
              {"constant_coordinates", r.constant_coordinates}};
}

Json to_json(const MomentReport& r) {
  auto comps = [](const std::vector<MomentComponent>& cs) {
    Json out = Json::array();
    for (const auto& c : cs) {
      out.push_back(Json{{"name", c.name},
                         {"target", number(c.target)},
                         {"mean", number(c.mean)},
                         {"std_error", number(c.std_error)},
                         {"z", number(c.z)}});
    }
    return out;
  };
  return Json{{"samples", r.samples},          {"batch_length", r.batch_length},
              {"batches", r.batches},          {"z_threshold", r.z_threshold},
              {"xx", comps(r.xx)},             {"sigma", comps(r.sigma)},
              {"tower", comps(r.tower)},       {"max_abs_z", number(r.max_abs_z)},
              {"ok", r.ok()}};
}

Json trajectory_sidecar(const Trajectory& t) {
  Json j;
  j["model_hash"] = t.model_hash;
  j["seed"] = t.seed;
  j["stream"] = t.stream;
  j["rng_algorithm"] = t.rng_algorithm;
  j["innovation"] = t.innovation;
  j["innovation_scaling"] = t.innovation_scaling;
  j["sqrt_mode"] = to_string(t.sqrt_mode);
  j["d"] = t.d;
  j["requested_n"] = t.requested_n;
  j["burn_in"] = t.burn_in;
  j["burn_in_retained"] = t.burn_in_retained;
  j["first_index"] = t.first_index;
  j["rows"] = t.size();
  j["diverged"] = t.diverged;
  j["diverged_at"] = t.diverged ? Json(t.diverged_at) : Json(nullptr);
  j["start"] = state_to_json(t.start);
  j["warnings"] = t.warnings;
  return j;
}

void write_trajectory_csv(const Trajectory& t, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  const int m = half_dim(t.d);
  std::string line = "n";
  for (int i = 1; i <= t.d; ++i) line += ",x_" + std::to_string(i);
  for (int i = 1; i <= m; ++i) line += ",vech_sigma_" + std::to_string(i);
  line += '\n';
  out << line;
  for (long r = 0; r < t.size(); ++r) {
    line = std::to_string(t.time_index(r));
    for (int i = 0; i < t.d; ++i) {
      line += ',';
      append_number(line, t.x_data[r * t.d + i]);
    }
    for (int i = 0; i < m; ++i) {
      line += ',';
      append_number(line, t.sigma_data[r * m + i]);
    }
    line += '\n';
    out << line;
  }
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void write_trajectory_binary(const Trajectory& t, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  const int m = half_dim(t.d);
  out.write(kTrajectoryMagic, 8);
  const std::uint32_t d = static_cast<std::uint32_t>(t.d), reserved = 0;
  const std::uint64_t rows = static_cast<std::uint64_t>(t.size());
  const std::int64_t first = t.first_index;
  out.write(reinterpret_cast<const char*>(&d), sizeof d);
  out.write(reinterpret_cast<const char*>(&reserved), sizeof reserved);
  out.write(reinterpret_cast<const char*>(&rows), sizeof rows);
  out.write(reinterpret_cast<const char*>(&first), sizeof first);
  for (long r = 0; r < t.size(); ++r) {
    out.write(reinterpret_cast<const char*>(t.x_data.data() + r * t.d), sizeof(double) * t.d);
    out.write(reinterpret_cast<const char*>(t.sigma_data.data() + r * m), sizeof(double) * m);
  }
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

TrajectoryData read_trajectory_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  char magic[8];
  std::uint32_t d = 0, reserved = 0;
  std::uint64_t rows = 0;
  std::int64_t first = 0;
  in.read(magic, 8);
  in.read(reinterpret_cast<char*>(&d), sizeof d);
  in.read(reinterpret_cast<char*>(&reserved), sizeof reserved);
  in.read(reinterpret_cast<char*>(&rows), sizeof rows);
  in.read(reinterpret_cast<char*>(&first), sizeof first);
  if (!in || std::memcmp(magic, kTrajectoryMagic, 8) != 0 || d == 0) {
    throw std::runtime_error("'" + path.string() + "' is not a trajectory file");
  }
  TrajectoryData out;
  out.d = static_cast<int>(d);
  out.first_index = static_cast<long>(first);
  const int m = half_dim(out.d);
  out.x_data.resize(rows * d);
  out.sigma_data.resize(rows * m);
  for (std::uint64_t r = 0; r < rows; ++r) {
    in.read(reinterpret_cast<char*>(out.x_data.data() + r * d), sizeof(double) * d);
    in.read(reinterpret_cast<char*>(out.sigma_data.data() + r * m), sizeof(double) * m);
  }
  if (!in) throw std::runtime_error("'" + path.string() + "' is truncated");
  return out;
}

}  // namespace bekk
