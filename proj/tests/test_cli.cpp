#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct Result {
  int code = -1;
  std::string out;
  Json json() const { return Json::parse(out); }
};

Result run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " '" BEKK_CLI_PATH "' " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path workdir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "bekk_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string model_path(const std::string& name) {
  const fs::path p = workdir() / (name + ".json");
  if (!fs::exists(p)) {
    const Result r = run_cli("example " + name + " -q --out-dir '" + workdir().string() + "'");
    REQUIRE(r.code == 0);
  }
  return "'" + p.string() + "'";
}

std::string write_model(const std::string& name, const std::string& body) {
  const fs::path p = workdir() / name;
  FILE* f = fopen(p.c_str(), "w");
  REQUIRE(f != nullptr);
  fputs(body.c_str(), f);
  fclose(f);
  return "'" + p.string() + "'";
}

}  // namespace

TEST_CASE("example lists the built-in models") {
  const Result r = run_cli("example --list -q");
  REQUIRE(r.code == 0);
  const Json j = r.json();
  CHECK(j["tool"] == "bekk-ergo");
  CHECK(j["examples"].size() == 4);
}

TEST_CASE("check reports stationarity and the exit code follows it") {
  const Result ok = run_cli("check " + model_path("scalar") + " -q");
  REQUIRE(ok.code == 0);
  const Json j = ok.json();
  CHECK(j["command"] == "check");
  CHECK(j["model_hash"].get<std::string>().size() == 16);

  const std::string explosive = write_model(
      "explosive.json",
      R"({"format":"bekk-v1","d":1,"p":1,"q":1,"C":[[1]],"A":[[[[0.7745966692414834]]]],)"
      R"("B":[[[[0.7745966692414834]]]]})");
  CHECK(run_cli("check " + explosive + " -q").code == 2);
  CHECK(run_cli("drift " + explosive + " -q").code == 2);
}

TEST_CASE("invalid input gives a structured error and exit code 1") {
  const std::string bad = write_model(
      "bad.json", R"({"format":"bekk-v1","d":1,"p":1,"q":1,"C":[[-1]],"A":[[[[0.1]]]],"B":[[[[0.1]]]]})");
  const Result r = run_cli("check " + bad + " -q");
  CHECK(r.code == 1);
  const Json j = r.json();
  CHECK(j["error"]["type"] == "validation");
  CHECK(j["error"]["issues"][0]["field"] == "C");

  const std::string broken = write_model("broken.json", "{\"d\": 1,,}");
  CHECK(run_cli("check " + broken + " -q").code == 1);
  CHECK(run_cli("check").code == 1);
  CHECK(run_cli("simulate " + model_path("scalar") + " --innov t:1 -q").code == 1);
}

TEST_CASE("simulate writes files and honours the seed sources") {
  const std::string prefix = (workdir() / "sim").string();
  const std::string args =
      "simulate " + model_path("ex-2x2") + " --n 50 --format both -q --out '" + prefix + "'";
  const Result a = run_cli(args + " --seed 7");
  REQUIRE(a.code == 0);
  CHECK(fs::exists(prefix + ".csv"));
  CHECK(fs::exists(prefix + ".bin"));
  CHECK(fs::exists(prefix + ".json"));
  CHECK(a.json()["seed_source"] == "flag");
  const Result b = run_cli(args, "BEKK_ERGO_SEED=7");
  CHECK(b.json()["seed_source"] == "env");
  CHECK(b.json()["seed"] == 7);
  const Result c = run_cli(args, "BEKK_ERGO_SEED=");
  CHECK(c.json()["seed_source"] == "default");
}

TEST_CASE("simulate flags divergence with exit code 3") {
  const std::string explosive = write_model(
      "explosive2.json",
      R"({"format":"bekk-v1","d":1,"p":1,"q":1,"C":[[1]],"A":[[[[1.0]]]],"B":[[[[1.0]]]]})");
  const std::string start =
      write_model("explosive-start.json", R"({"format":"bekk-state-v1","sigma":[[[1]]],"x":[[0]]})");
  const std::string prefix = (workdir() / "boom").string();
  const Result r = run_cli("simulate " + explosive + " --n 10000 --start " + start + " -q --out '" +
                           prefix + "'");
  CHECK(r.code == 3);
}

TEST_CASE("off-variety start is reported by simulate") {
  const std::string off = "'" + (workdir() / "ex-3.3.11-off-start.json").string() + "'";
  const std::string model = model_path("ex-3.3.11");
  const Result r = run_cli("simulate " + model + " --n 100 --probe-horizon 200 -q --start " + off +
                           " --out '" + (workdir() / "off").string() + "'");
  REQUIRE(r.code == 0);
  const Json j = r.json();
  CHECK(j["offstate_probe"]["on_manifold"] == false);
}

TEST_CASE("drift certificate for the scalar model") {
  const Result r = run_cli("drift " + model_path("scalar") +
                           " --mc-states 2 --mc-draws 2000 --path-states 50 --random-states 50 "
                           "--boundary-states 10 -q --threads 1");
  REQUIRE(r.code == 0);
  const Json j = r.json();
  CHECK(std::abs(j["certificate"]["alpha0"].get<double>() - 14.0 / 15.0) < 1e-12);
}

TEST_CASE("diagnose orbit and convert") {
  const Result r = run_cli("diagnose " + model_path("ex-3.3.10") +
                           " --orbit --orbit-samples 40 --orbit-depth 8 -q");
  REQUIRE(r.code == 0);
  CHECK(r.json()["orbit"]["degenerate"] == true);
  CHECK(run_cli("diagnose " + model_path("scalar") + " --convergence --chains 10 -q").code == 1);

  const Result v = run_cli("convert " + model_path("ex-2x2") + " --to vech -q");
  REQUIRE(v.code == 0);
  CHECK(v.json()["vech"]["A"][0].size() == 3);
}
