#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "fockbench/cli.hpp"

using namespace fockbench;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("fockbench_cli_" + name);
  std::ofstream(path) << text;
  return path.string();
}

const std::string kCnot = FOCKBENCH_SOURCE_DIR "/circuits/cnot_dualrail.fck";

}  // namespace

TEST_CASE("run a built-in experiment") {
  const auto r = cli({"run", "--experiment", "single_photon_bs_sym", "--backend", "both"});
  CHECK(r.code == exit_code::ok);
  CHECK(r.out.find("pass") != std::string::npos);
  CHECK(r.out.find("0.5000000000") != std::string::npos);
}

TEST_CASE("json schema") {
  const auto r = cli({"run", kCnot, "--backend", "numeric", "--format", "json"});
  REQUIRE(r.code == exit_code::ok);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("norm").get<double>() == doctest::Approx(1.0));
  CHECK(j.at("expectations").size() == 4);
  CHECK(j.at("expectations").contains("N1"));
  CHECK_FALSE(j.contains("comparison"));
  const auto& dist = j.at("distribution");
  REQUIRE(dist.is_array());
  double total = 0.0;
  for (const auto& row : dist) {
    CHECK(row.at("occ").size() == 4);
    total += row.at("prob").get<double>();
  }
  CHECK(total == doctest::Approx(1.0));

  const auto both = nlohmann::json::parse(cli({"run", kCnot, "--format", "json"}).out);
  CHECK(both.at("comparison").at("verdict") == "pass");
  CHECK(both.at("comparison").at("max_deviation").get<double>() < 1e-9);
  // keys in documented order
  std::vector<std::string> keys;
  const auto ordered = nlohmann::ordered_json::parse(cli({"run", kCnot, "--format", "json"}).out);
  for (const auto& [k, v] : ordered.items()) {
    keys.push_back(k);
  }
  CHECK(keys == std::vector<std::string>{"norm", "expectations", "distribution", "comparison"});
}

TEST_CASE("json output is byte-stable") {
  const std::vector<std::string> args{"run", "--experiment", "hardy_vertex(pi/3)", "--format", "json"};
  const auto first = cli(args).out;
  for (int i = 0; i < 3; ++i) {
    CHECK(cli(args).out == first);
  }
}

TEST_CASE("truth table") {
  const auto r = cli({"run", "--experiment", "cnot_dualrail", "--all-inputs"});
  CHECK(r.code == exit_code::ok);
  const auto j = nlohmann::json::parse(cli({"run", "--experiment", "cnot_dualrail", "--all-inputs", "--format", "json"}).out);
  REQUIRE(j.at("truth_table").size() == 4);
  for (const auto& row : j.at("truth_table")) {
    CHECK(row.at("fidelity_numeric").get<double>() >= 1 - 1e-10);
    CHECK(row.at("fidelity_symbolic").get<double>() >= 1 - 1e-10);
  }
  CHECK(cli({"run", "--experiment", "hardy_vertex", "--all-inputs"}).code == exit_code::usage_error);
}

TEST_CASE("exit codes") {
  const auto bad = temp_file("bad.fck", "system bosons=2 cutoff=3\ninput create 1\n\nbs 1 3 sym\n");
  const auto r = cli({"run", bad});
  CHECK(r.code == exit_code::parse_error);
  CHECK(r.err.find(":4:6:") != std::string::npos);

  CHECK(cli({"run", "/nonexistent/x.fck"}).code == exit_code::usage_error);
  CHECK(cli({"run", "--experiment", "nope"}).code == exit_code::usage_error);
  CHECK(cli({"run"}).code == exit_code::usage_error);
  CHECK(cli({"run", kCnot, "--experiment", "cnot_dualrail"}).code == exit_code::usage_error);
  CHECK(cli({"run", kCnot, "--backend", "quantum"}).code == exit_code::usage_error);
  CHECK(cli({"run", kCnot, "--tol", "-1"}).code == exit_code::usage_error);
  CHECK(cli({"frobnicate"}).code == exit_code::usage_error);

  // three photons into one mode at cutoff 2 cannot be represented numerically
  const auto tight = temp_file("tight.fck", "system bosons=2 cutoff=2\ninput create 1 1 2\nbs 1 2 sym\n");
  CHECK(cli({"run", tight, "--tol", "1e-9"}).code == exit_code::comparison_failed);

  const auto big = temp_file("big.fck", "system bosons=12 cutoff=6\ninput create 1\nbs 1 2 sym\n");
  CHECK(cli({"run", big, "--backend", "numeric"}).code == exit_code::evaluation_error);
  CHECK(cli({"run", big, "--backend", "symbolic"}).code == exit_code::ok);
}

TEST_CASE("cutoff from environment and flag") {
  ::setenv("FOCKBENCH_CUTOFF", "3", 1);
  const auto env = cli({"run", "--experiment", "single_photon_bs_sym"});
  const auto flag = cli({"run", "--experiment", "single_photon_bs_sym", "--cutoff", "5"});
  ::unsetenv("FOCKBENCH_CUTOFF");
  CHECK(env.out.find("cutoff 3") != std::string::npos);
  CHECK(flag.out.find("cutoff 5") != std::string::npos);
  CHECK(cli({"run", "--experiment", "single_photon_bs_sym", "--cutoff", "0"}).code == exit_code::usage_error);
}

TEST_CASE("list experiments") {
  const auto r = cli({"list-experiments"});
  CHECK(r.code == exit_code::ok);
  CHECK(r.out.find("cnot_dualrail — ") != std::string::npos);
  CHECK(r.out.find("hardy_vertex — ") != std::string::npos);
  CHECK(r.out.find("single_photon_bs_sym") < r.out.find("hardy_vertex"));
  CHECK(cli({"list-experiments"}).out == r.out);
}
