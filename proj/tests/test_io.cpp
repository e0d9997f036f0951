#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "bekk/errors.hpp"
#include "bekk/examples.hpp"
#include "bekk/json_io.hpp"
#include "bekk/stationarity.hpp"

using namespace bekk;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "bekk_io_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("model parameters survive a JSON round trip bit for bit") {
  for (const auto& name : example_names()) {
    const BekkParameters p = builtin_example(name).params;
    const Json j = parameters_to_json(p);
    const BekkParameters back = parameters_from_json(parse_json_text(j.dump()));
    CHECK(model_hash(back) == model_hash(p));
  }
}

TEST_CASE("malformed JSON reports line and column") {
  try {
    parse_json_text("{\n  \"d\": 1,\n  oops\n}", "m.json");
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("m.json:3:") != std::string::npos);
  }
}

TEST_CASE("schema errors name the offending field") {
  Json j = parameters_to_json(builtin_example("ex-2x2").params);
  j["A"][0][0][1][0] = "x";
  try {
    parameters_from_json(j);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.field() == "A[0][0][1][0]");
  }
  j = parameters_to_json(builtin_example("ex-2x2").params);
  j["format"] = "other";
  CHECK_THROWS_AS(parameters_from_json(j), SchemaError);
  j.erase("format");
  j.erase("C");
  CHECK_THROWS_AS(parameters_from_json(j), SchemaError);
}

TEST_CASE("load_model reports validation problems") {
  Json j = parameters_to_json(builtin_example("scalar").params);
  j["C"] = Json::array({Json::array({-1.0})});
  const fs::path path = scratch("bad.json");
  write_text_file(path, j.dump());
  CHECK_THROWS_AS(load_model(path), ValidationError);
}

TEST_CASE("state files round trip and reject asymmetric blocks") {
  const BekkModel m = BekkModel::validate(builtin_example("ex-2x2").params);
  const ChainState T = attracting_point(m);
  const ChainState back = state_from_json(m, parse_json_text(state_to_json(T).dump()));
  CHECK(back.flatten() == T.flatten());
  Json j = state_to_json(T);
  j["sigma"][0][0][1] = 123.0;
  CHECK_THROWS_AS(state_from_json(m, j), SchemaError);
}

TEST_CASE("non-finite numbers are written as strings") {
  Eigen::VectorXd v(3);
  v << std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
      std::nan("");
  const Json j = vector_to_json(v);
  CHECK(j[0] == "inf");
  CHECK(j[1] == "-inf");
  CHECK(j[2] == "nan");
}

TEST_CASE("trajectory files") {
  const BekkModel m = BekkModel::validate(builtin_example("ex-2x2").params);
  RunOptions o;
  o.n = 25;
  o.burn_in = 5;
  o.seed = 4;
  const Trajectory t = run(m, std::nullopt, o);

  const fs::path bin = scratch("t.bin");
  write_trajectory_binary(t, bin);
  const TrajectoryData back = read_trajectory_binary(bin);
  CHECK(back.d == 2);
  CHECK(back.first_index == 6);
  CHECK(back.x_data == t.x_data);
  CHECK(back.sigma_data == t.sigma_data);

  const fs::path csv = scratch("t.csv");
  write_trajectory_csv(t, csv);
  std::istringstream lines(slurp(csv));
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  CHECK(header == "n,x_1,x_2,vech_sigma_1,vech_sigma_2,vech_sigma_3");
  CHECK(first.rfind("6,", 0) == 0);
  // Shortest round-trip formatting reproduces the doubles exactly.
  std::istringstream cells(first);
  std::string cell;
  std::getline(cells, cell, ',');
  std::getline(cells, cell, ',');
  CHECK(std::stod(cell) == t.x(0)(0));

  const Json side = trajectory_sidecar(t);
  CHECK(side["model_hash"] == m.hash());
  CHECK(side["seed"] == 4);
}

TEST_CASE("report serialisation keeps the key fields") {
  const BekkModel m = BekkModel::validate(builtin_example("scalar").params);
  const Json r = to_json(check_h3(m));
  CHECK(r["stationary"] == true);
  CHECK(r.contains("rho_AB"));
  CHECK(r.contains("Sigma"));
}
