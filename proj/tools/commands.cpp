#include "commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "bekk/diagnostics.hpp"
#include "bekk/drift.hpp"
#include "bekk/errors.hpp"
#include "bekk/examples.hpp"
#include "bekk/json_io.hpp"
#include "bekk/simulate.hpp"
#include "bekk/stationarity.hpp"
#include "bekk/version.hpp"

namespace bekk::cli {
namespace {

namespace fs = std::filesystem;

// Aligned "key  value" lines on stderr.
class Summary {
 public:
  explicit Summary(bool quiet) : quiet_(quiet) {}
  template <class T>
  Summary& add(const std::string& key, const T& value) {
    std::ostringstream v;
    v << std::setprecision(10) << value;
    rows_.emplace_back(key, v.str());
    return *this;
  }
  void warn(const std::string& msg) { warnings_.push_back(msg); }
  ~Summary() {
    if (quiet_) return;
    std::size_t width = 0;
    for (const auto& [k, v] : rows_) width = std::max(width, k.size());
    for (const auto& [k, v] : rows_) std::cerr << std::left << std::setw(width + 2) << k << v << '\n';
    for (const auto& w : warnings_) std::cerr << "warning: " << w << '\n';
  }

 private:
  bool quiet_;
  std::vector<std::pair<std::string, std::string>> rows_;
  std::vector<std::string> warnings_;
};

Json envelope(const std::string& command, const SeedChoice& seed, const std::string& hash,
              Json config) {
  Json j;
  j["tool"] = "bekk-ergo";
  j["version"] = kVersion;
  j["command"] = command;
  j["seed"] = seed.value;
  j["seed_source"] = seed.source;
  j["model_hash"] = hash;
  j["config"] = std::move(config);
  return j;
}

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

Json common_config(const Common& c) {
  return Json{{"threads", c.threads}, {"quiet", c.quiet}};
}

ChainState forward_from_T(const BekkModel& model, long steps, std::uint64_t seed) {
  ChainState y = attracting_point(model);
  InnovationStream noise(InnovationSpec::gaussian(), seed, 0xF0F0F0F0ULL);
  Eigen::VectorXd eps(model.dim());
  for (long i = 0; i < steps; ++i) {
    noise.draw({eps.data(), static_cast<std::size_t>(model.dim())});
    y = step(model, y, eps);
  }
  return y;
}

// "T", "scaled:<k>" (k times T), "forward:<n>" (n noisy steps from T) or a state file.
ChainState parse_start(const BekkModel& model, const std::string& spec, std::uint64_t seed) {
  if (spec == "T") return attracting_point(model);
  auto number_after = [&](std::size_t prefix) {
    std::istringstream in(spec.substr(prefix));
    double v = 0.0;
    if (!(in >> v) || !in.eof()) throw std::invalid_argument("cannot parse start '" + spec + "'");
    return v;
  };
  if (spec.rfind("scaled:", 0) == 0) {
    const double k = number_after(7);
    if (!(k > 0.0)) throw std::invalid_argument("start scale must be > 0");
    ChainState y = attracting_point(model);
    for (auto& b : y.sigma_blocks) b *= k;
    return y;
  }
  if (spec.rfind("forward:", 0) == 0) {
    const double n = number_after(8);
    if (n < 0 || n != std::floor(n)) throw std::invalid_argument("forward steps must be >= 0");
    return forward_from_T(model, static_cast<long>(n), seed);
  }
  return load_state(model, spec);
}

SqrtMode parse_sqrt(const std::string& s) {
  if (s == "symmetric") return SqrtMode::Symmetric;
  if (s == "cholesky") return SqrtMode::Cholesky;
  throw std::invalid_argument("--sqrt must be 'symmetric' or 'cholesky'");
}

Json vech_means(const Trajectory& t) {
  const int d = t.d;
  const int m = half_dim(d);
  const long begin = t.stats_begin();
  const long n = t.size() - begin;
  Eigen::VectorXd xx = Eigen::VectorXd::Zero(m), sg = Eigen::VectorXd::Zero(m);
  for (long r = begin; r < t.size(); ++r) {
    xx += vech_outer(t.x(r));
    sg += t.sigma_vech(r);
  }
  if (n > 0) {
    xx /= static_cast<double>(n);
    sg /= static_cast<double>(n);
  }
  return Json{{"rows", n}, {"mean_vech_xx", vector_to_json(xx)}, {"mean_vech_sigma", vector_to_json(sg)}};
}

}  // namespace

SeedChoice resolve_seed(const Common& common) {
  if (common.seed) return {*common.seed, "flag"};
  if (const char* env = std::getenv("BEKK_ERGO_SEED"); env && *env) {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used, 10);
    if (used != std::string(env).size()) {
      throw std::invalid_argument("BEKK_ERGO_SEED must be a non-negative integer");
    }
    return {static_cast<std::uint64_t>(v), "env"};
  }
  return {0, "default"};
}

int report_error(const std::string& command, const std::exception& e) {
  Json err{{"message", e.what()}};
  if (const auto* s = dynamic_cast<const SchemaError*>(&e)) {
    err["type"] = "schema";
    err["field"] = s->field();
  } else if (const auto* v = dynamic_cast<const ValidationError*>(&e)) {
    err["type"] = "validation";
    Json issues = Json::array();
    for (const auto& i : v->issues()) issues.push_back(Json{{"field", i.field}, {"message", i.message}});
    err["issues"] = std::move(issues);
  } else if (dynamic_cast<const DomainError*>(&e)) {
    err["type"] = "domain";
  } else if (dynamic_cast<const NumericalError*>(&e)) {
    err["type"] = "numerical";
  } else {
    err["type"] = "usage";
  }
  emit(Json{{"tool", "bekk-ergo"}, {"version", kVersion}, {"command", command}, {"error", err}});
  std::cerr << "error: " << e.what() << '\n';
  return kUsage;
}

int cmd_check(const Common& c, const CheckArgs& a) {
  const SeedChoice seed = resolve_seed(c);
  const BekkModel model = load_model(a.model);
  StationarityOptions opts;
  opts.margin = a.margin;
  const StationarityReport r = check_h3(model, opts);

  Json config = common_config(c);
  config["model"] = a.model;
  config["margin"] = a.margin;
  Json out = envelope("check", seed, model.hash(), std::move(config));
  out["report"] = to_json(r);
  emit(out);

  Summary s(c.quiet);
  s.add("model", a.model).add("rho_AB", r.rho_AB).add("rho_B", r.rho_B);
  s.add("rho_companion", r.rho_companion).add("stationary", r.stationary ? "yes" : "no");
  return r.stationary ? kOk : kNonStationary;
}

int cmd_simulate(const Common& c, const SimulateArgs& a) {
  const SeedChoice seed = resolve_seed(c);
  const BekkModel model = load_model(a.model);
  if (a.format != "csv" && a.format != "binary" && a.format != "both") {
    throw std::invalid_argument("--format must be csv, binary or both");
  }
  RunOptions opts;
  opts.n = a.n;
  opts.burn_in = a.burn_in;
  opts.keep_burn_in = a.keep_burn_in;
  opts.seed = seed.value;
  opts.innovation = InnovationSpec::parse(a.innovation);
  opts.sqrt_mode = parse_sqrt(a.sqrt_mode);

  std::optional<ChainState> start;
  if (a.start != "T") start = parse_start(model, a.start, seed.value);
  const Trajectory t = run(model, start, opts);

  Json probe_json = nullptr;
  const StationarityReport h3 = check_h3(model);
  if (start && h3.rho_B < 1.0) {
    const long horizon = std::min(a.probe_horizon, std::max<long>(a.n + a.burn_in, 1));
    probe_json = to_json(offstate_probe(model, *start, horizon, seed.value));
  }

  const fs::path prefix(a.out);
  Json files = Json::array();
  if (a.format == "csv" || a.format == "both") {
    write_trajectory_csv(t, prefix.string() + ".csv");
    files.push_back(prefix.string() + ".csv");
  }
  if (a.format == "binary" || a.format == "both") {
    write_trajectory_binary(t, prefix.string() + ".bin");
    files.push_back(prefix.string() + ".bin");
  }
  Json sidecar = trajectory_sidecar(t);
  sidecar["tool"] = "bekk-ergo";
  sidecar["version"] = kVersion;
  write_text_file(prefix.string() + ".json", sidecar.dump(2) + "\n");
  files.push_back(prefix.string() + ".json");

  Json config = common_config(c);
  config["model"] = a.model;
  config["n"] = a.n;
  config["burn_in"] = a.burn_in;
  config["keep_burn_in"] = a.keep_burn_in;
  config["start"] = a.start;
  config["innovation"] = a.innovation;
  config["sqrt"] = a.sqrt_mode;
  config["out"] = a.out;
  config["format"] = a.format;
  config["probe_horizon"] = a.probe_horizon;
  config["divergence_factor"] = opts.divergence_factor;
  Json out = envelope("simulate", seed, model.hash(), std::move(config));
  out["trajectory"] = sidecar;
  out["files"] = files;
  out["moments"] = vech_means(t);
  out["stationary_covariance"] =
      h3.Sigma ? matrix_to_json(h3.Sigma->matrix()) : Json(nullptr);
  out["offstate_probe"] = probe_json;
  emit(out);

  Summary s(c.quiet);
  s.add("model", a.model).add("rows", t.size()).add("innovation", t.innovation);
  s.add("scaling", t.innovation_scaling).add("seed", seed.value);
  if (t.diverged) s.add("diverged at", t.diverged_at);
  for (const auto& w : t.warnings) s.warn(w);
  if (!probe_json.is_null() && !probe_json["on_manifold"].get<bool>()) {
    for (const auto& cj : probe_json["coordinates"]) {
      if (cj["offset_vanishes"].get<bool>()) continue;
      std::ostringstream m;
      m << "sigma[" << cj["lag"] << "](" << cj["row"] << "," << cj["col"]
        << ") starts at " << cj["start_value"] << ", value on the variety is "
        << cj["manifold_value"] << "; equal in " << cj["simulated_equal_steps"] << " of "
        << probe_json["horizon"] << " simulated steps";
      s.warn(m.str());
    }
  }
  return t.diverged ? kDiverged : kOk;
}

int cmd_drift(const Common& c, const DriftArgs& a) {
  const SeedChoice seed = resolve_seed(c);
  const BekkModel model = load_model(a.model);
  Json config = common_config(c);
  config["model"] = a.model;
  config["mc_states"] = a.mc_states;
  config["mc_draws"] = a.mc_draws;
  config["mc_sigmas"] = a.mc_sigmas;
  config["path_states"] = a.path_states;
  config["random_states"] = a.random_states;
  config["boundary_states"] = a.boundary_states;
  Json out = envelope("drift", seed, model.hash(), config);

  const StationarityReport h3 = check_h3(model);
  if (!h3.stationary) {
    out["stationary"] = false;
    out["rho_AB"] = h3.rho_AB;
    emit(out);
    Summary(c.quiet).add("model", a.model).add("rho_AB", h3.rho_AB).warn(
        "model is not stationary; no certificate exists");
    return kNonStationary;
  }
  const DriftCertificate cert = build_certificate(model);
  const TelescopingResiduals tele = telescoping_residuals(model, cert);

  DriftSampleSpec spec;
  spec.path_states = a.path_states;
  spec.random_states = a.random_states;
  spec.boundary_states = a.boundary_states;
  spec.seed = seed.value;
  spec.threads = c.threads;
  const DriftVerification ver = verify_drift(model, cert, spec);

  Json mc = Json::array();
  long outside = 0;
  if (a.mc_states > 0 && a.mc_draws > 1) {
    RunOptions ro;
    ro.n = a.mc_states * 10;
    ro.burn_in = 100;
    ro.keep_burn_in = true;
    ro.seed = seed.value;
    ro.stream = 7;
    const Trajectory path = run(model, std::nullopt, ro);
    for (long i = 0; i < a.mc_states; ++i) {
      const long row = ro.burn_in + 10 * i + 9;
      ChainState y;
      for (int k = 0; k < model.garch_order(); ++k) y.sigma_blocks.push_back(path.sigma_vech(row - k));
      for (int k = 0; k < model.arch_order(); ++k) y.x_blocks.push_back(path.x(row - k));
      const MonteCarloDrift m =
          monte_carlo_drift(model, cert, y, a.mc_draws, seed.value, 1000 + static_cast<std::uint64_t>(i));
      if (std::abs(m.z()) > a.mc_sigmas) ++outside;
      mc.push_back(to_json(m));
    }
  }

  out["stationary"] = true;
  out["certificate"] = to_json(cert);
  out["telescoping_residuals"] = to_json(tele);
  out["verification"] = to_json(ver);
  out["monte_carlo"] = Json{{"states", mc}, {"outside_band", outside}};
  emit(out);

  Summary s(c.quiet);
  s.add("model", a.model).add("alpha0", cert.alpha0).add("alpha", cert.alpha).add("b", cert.b);
  s.add("K_level", cert.K_level).add("telescoping max", tele.max());
  s.add("states checked", ver.checked).add("violations", ver.violations);
  s.add("worst slack", ver.worst_slack);
  if (a.mc_states > 0) s.add("MC outside band", std::to_string(outside) + " of " + std::to_string(a.mc_states));
  if (!ver.ok()) s.warn("drift inequality violated; witness state in the report");
  return ver.ok() ? kOk : kCertificateFailed;
}

int cmd_diagnose(const Common& c, const DiagnoseArgs& a) {
  const SeedChoice seed = resolve_seed(c);
  const BekkModel model = load_model(a.model);
  const bool all = !a.convergence && !a.orbit && !a.moments;
  const std::vector<std::string> starts =
      a.starts.empty() ? std::vector<std::string>{"T", "scaled:5"} : a.starts;

  Json config = common_config(c);
  config["model"] = a.model;
  config["convergence"] = all || a.convergence;
  config["orbit"] = all || a.orbit;
  config["moments"] = all || a.moments;
  config["starts"] = starts;
  config["chains"] = a.chains;
  config["horizon"] = a.horizon;
  config["reference_lag"] = a.reference_lag;
  config["distance"] = a.distance;
  config["curve_csv"] = a.curve_csv;
  config["orbit_samples"] = a.orbit_samples;
  config["orbit_depth"] = a.orbit_depth;
  config["rank_multiplier"] = a.rank_multiplier;
  config["n"] = a.n;
  config["burn_in"] = a.burn_in;
  config["z_threshold"] = a.z_threshold;
  Json out = envelope("diagnose", seed, model.hash(), config);

  const StationarityReport h3 = check_h3(model);
  out["stationary"] = h3.stationary;
  Summary s(c.quiet);
  s.add("model", a.model).add("rho_AB", h3.rho_AB);
  if (!h3.stationary) {
    emit(out);
    s.warn("model is not stationary; diagnostics need a stationary model");
    return kNonStationary;
  }

  if (all || a.orbit) {
    OrbitOptions oo;
    oo.n_samples = a.orbit_samples;
    oo.depth = a.orbit_depth;
    oo.seed = seed.value;
    oo.rank_multiplier = a.rank_multiplier;
    const OrbitDimensionReport r = orbit_dimension(model, oo);
    out["orbit"] = to_json(r);
    s.add("orbit rank", std::to_string(r.linear_rank) + " of " + std::to_string(r.ambient_dim));
    s.add("quadratic rank", std::to_string(r.quadratic_rank) + " of " +
                                std::to_string(r.quadratic_features));
    if (r.degenerate) s.warn("orbit of T does not span the state space");
  }
  if (all || a.convergence) {
    ConvergenceOptions co;
    co.chains_per_start = a.chains;
    co.horizon = a.horizon;
    co.reference_lag = a.reference_lag;
    co.seed = seed.value;
    co.threads = c.threads;
    if (a.distance == "energy") {
      co.distance = DistanceKind::Energy;
    } else if (a.distance == "ks") {
      co.distance = DistanceKind::KolmogorovSmirnov;
    } else {
      throw std::invalid_argument("--distance must be 'energy' or 'ks'");
    }
    std::vector<ChainState> states;
    for (const auto& st : starts) states.push_back(parse_start(model, st, seed.value));
    const ConvergenceReport r = convergence_probe(model, states, co);
    out["convergence"] = to_json(r);
    s.add("noise floor", r.noise_floor);
    for (std::size_t i = 0; i < r.curves.size(); ++i) {
      const auto& cv = r.curves[i];
      std::ostringstream line;
      line << (cv.on_manifold ? "on" : "OFF") << " variety, ";
      if (cv.fit.valid) {
        line << "rate " << cv.fit.rate << ", R^2 " << cv.fit.r_squared;
      } else {
        line << "no decay fit";
      }
      for (const auto& k : cv.constant_coordinates) {
        line << "; coord " << k.state_index << " min KS " << k.min_ks;
      }
      s.add("start " + starts[i], line.str());
    }
    for (const auto& w : r.warnings) s.warn(w);
    if (!a.curve_csv.empty()) {
      std::ostringstream csv;
      csv << "lag,start,distance\n" << std::setprecision(17);
      for (std::size_t i = 0; i < r.curves.size(); ++i)
        for (std::size_t t = 0; t < r.curves[i].distance.size(); ++t)
          csv << t + 1 << ',' << i << ',' << r.curves[i].distance[t] << '\n';
      write_text_file(a.curve_csv, csv.str());
    }
  }
  if (all || a.moments) {
    RunOptions ro;
    ro.n = a.n;
    ro.burn_in = a.burn_in;
    ro.seed = seed.value;
    const Trajectory t = run(model, std::nullopt, ro);
    const MomentReport r = moment_check(t, model, a.z_threshold);
    out["moments"] = to_json(r);
    s.add("moments max |z|", r.max_abs_z).add("batch length", r.batch_length);
  }
  emit(out);
  return kOk;
}

int cmd_convert(const Common& c, const ConvertArgs& a) {
  const SeedChoice seed = resolve_seed(c);
  const BekkModel model = load_model(a.model);
  Json config = common_config(c);
  config["model"] = a.model;
  config["to"] = a.to;
  config["terms"] = a.terms;
  Json out = envelope("convert", seed, model.hash(), config);
  if (a.to == "vec") {
    out["vec"] = to_json(model.vec_form());
  } else if (a.to == "vech") {
    out["vech"] = to_json(model.vech_form());
  } else if (a.to == "companion") {
    out["companion"] = to_json(model.companion());
  } else if (a.to == "arch") {
    out["arch"] = to_json(a.terms > 0 ? arch_infinity_coeffs(model, a.terms)
                                      : arch_infinity_coeffs(model));
  } else {
    throw std::invalid_argument("--to must be vec, vech, companion or arch");
  }
  emit(out);
  Summary(c.quiet).add("model", a.model).add("form", a.to);
  return kOk;
}

int cmd_example(const Common& c, const ExampleArgs& a) {
  const SeedChoice seed = resolve_seed(c);
  if (a.list || a.name.empty()) {
    Json list = Json::array();
    for (const auto& n : example_names()) {
      list.push_back(Json{{"name", n}, {"summary", builtin_example(n).summary}});
    }
    Json out = envelope("example", seed, "", Json{{"list", true}});
    out["examples"] = list;
    emit(out);
    return kOk;
  }
  const BuiltinExample ex = builtin_example(a.name);
  const BekkModel model = BekkModel::validate(ex.params);
  const fs::path dir(a.out_dir);
  fs::create_directories(dir);

  Json files = Json::array();
  Json model_json = parameters_to_json(ex.params);
  model_json["name"] = ex.name;
  model_json["description"] = ex.summary;
  const fs::path model_path = dir / (ex.name + ".json");
  write_text_file(model_path, model_json.dump(2) + "\n");
  files.push_back(model_path.string());

  const fs::path readme = dir / (ex.name + ".md");
  std::string md = "# " + ex.name + "\n\n" + ex.snippet + "\n\n```sh\nbekk-ergo check " +
                   model_path.filename().string() + "\n";
  if (ex.off_start) {
    md += "bekk-ergo diagnose " + model_path.filename().string() + " --convergence --start T --start " +
          ex.name + "-off-start.json\n";
  }
  md += "```\n";
  write_text_file(readme, md);
  files.push_back(readme.string());

  if (ex.off_start) {
    const fs::path off = dir / (ex.name + "-off-start.json");
    write_text_file(off, state_to_json(*ex.off_start).dump(2) + "\n");
    files.push_back(off.string());
  }
  Json config = common_config(c);
  config["name"] = a.name;
  config["out_dir"] = a.out_dir;
  Json out = envelope("example", seed, model.hash(), config);
  out["files"] = files;
  out["summary"] = ex.summary;
  emit(out);
  Summary s(c.quiet);
  s.add("example", ex.name);
  for (const auto& f : files) s.add("wrote", f.get<std::string>());
  return kOk;
}

}  // namespace bekk::cli
