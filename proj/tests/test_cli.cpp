#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "starlift/json_io.hpp"

namespace {

using starlift::Json;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

std::string cli_path() {
  const char* p = std::getenv("STARLIFT_CLI");
  REQUIRE_MESSAGE(p != nullptr, "STARLIFT_CLI must point at the binary");
  return p;
}

std::string golden_dir() {
  const char* p = std::getenv("STARLIFT_GOLDEN");
  REQUIRE_MESSAGE(p != nullptr, "STARLIFT_GOLDEN must point at the golden directory");
  return p;
}

RunResult run_cli(const std::string& args) {
  const std::string command = cli_path() + " " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  std::array<char, 4096> buffer;
  size_t n;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) r.out.append(buffer.data(), n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), ("missing file: " + path).c_str());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct GoldenCase {
  const char* command;
  const char* file;
  int exit_code;
};

constexpr GoldenCase kCases[] = {
    {"synthesize", "synthesize_shift", 0},
    {"synthesize", "synthesize_refuted", 1},
    {"check", "check_diagonal", 0},
    {"check", "check_support_violation", 1},
    {"check", "check_fdiv_sd", 0},
    {"tightest-delta", "tightest_shift", 0},
    {"divergence", "divergence_dp", 0},
    {"divergence", "divergence_kl", 0},
    {"dp-check", "dp_check_rr", 0},
    {"dp-check", "dp_check_rr_violated", 1},
    {"compose", "compose_basic", 0},
    {"compose", "compose_advanced", 0},
    {"subset-coupling", "subset_full_space", 0},
};

}  // namespace

TEST_CASE("golden files: byte-identical reports and exit codes") {
  for (const GoldenCase& c : kCases) {
    CAPTURE(c.file);
    RunResult r = run_cli(std::string(c.command) + " " + golden_dir() + "/" + c.file + ".json");
    CHECK(r.exit_code == c.exit_code);
    CHECK(r.out == read_file(golden_dir() + "/" + c.file + ".out"));
  }
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli("synthesize " + golden_dir() + "/malformed.json").exit_code == 2);
  CHECK(run_cli("check " + golden_dir() + "/synthesize_shift.json").exit_code == 2);
  CHECK(run_cli("synthesize /no/such/file.json").exit_code == 2);
}

TEST_CASE("flag overrides") {
  RunResult lifted =
      run_cli("dp-check --via lifting " + golden_dir() + "/dp_check_rr.json");
  CHECK(lifted.exit_code == 0);
  CHECK(Json::parse(lifted.out).at("via") == "lifting");

  RunResult sd = run_cli("divergence --kind sd " + golden_dir() + "/divergence_kl.json");
  CHECK(sd.exit_code == 0);
  CHECK(Json::parse(sd.out).at("value").get<double>() == doctest::Approx(0.5));

  RunResult no_oracle =
      run_cli("synthesize --oracle off " + golden_dir() + "/synthesize_shift.json");
  CHECK(no_oracle.exit_code == 0);
  CHECK(Json::parse(no_oracle.out).at("oracle").at("ran") == Json(false));
}

TEST_CASE("oracle cap exceeded advises running without it") {
  // 24 supported atoms exceed the brute-force subset cap of 20.
  Json mass = Json::object();
  Json space = Json::array();
  for (int i = 0; i < 24; ++i) {
    space.push_back(std::to_string(i));
    mass[std::to_string(i)] = "1/24";
  }
  Json pairs = Json::array();
  for (int i = 0; i < 24; ++i) pairs.push_back(Json::array({std::to_string(i), std::to_string(i)}));
  Json dist{{"mass", mass}, {"space", space}};
  Json file{{"payload", Json{{"delta", "0/1"},
                             {"k", "1/1"},
                             {"mu1", dist},
                             {"mu2", dist},
                             {"relation", Json{{"pairs", pairs}}}}},
            {"problem", "synthesize"},
            {"version", "1"}};
  const std::string tmp = "/tmp/starlift_cli_capped.json";
  std::ofstream(tmp) << file.dump(2) << "\n";
  CHECK(run_cli("synthesize " + tmp).exit_code == 2);
  RunResult off = run_cli("synthesize --oracle off " + tmp);
  CHECK(off.exit_code == 0);
  CHECK(Json::parse(off.out).at("verdict") == "liftable");
  std::remove(tmp.c_str());
}

TEST_CASE("every liftable synthesize output revalidates under check") {
  for (const char* name : {"synthesize_shift"}) {
    RunResult synth = run_cli(std::string("synthesize ") + golden_dir() + "/" + name + ".json");
    REQUIRE(synth.exit_code == 0);
    const Json report = Json::parse(synth.out);
    const Json input = Json::parse(read_file(golden_dir() + "/" + name + ".json"));

    Json payload = input.at("payload");
    payload["kind"] = "star";
    payload["witnesses"] = report.at("certificate").at("witnesses");
    Json check_file{{"payload", payload}, {"problem", "lifting-check"}, {"version", "1"}};

    const std::string tmp = "/tmp/starlift_cli_recheck.json";
    std::ofstream(tmp) << check_file.dump(2) << "\n";
    RunResult checked = run_cli("check " + tmp);
    CHECK(checked.exit_code == 0);
    CHECK(Json::parse(checked.out).at("verdict") == "holds");
    std::remove(tmp.c_str());
  }
}

TEST_CASE("canonical serialization of the golden inputs is a byte-exact fixed point") {
  for (const GoldenCase& c : kCases) {
    CAPTURE(c.file);
    const Json input = Json::parse(read_file(golden_dir() + "/" + c.file + ".json"));
    const Json once = starlift::canonical_problem_json(starlift::problem_file_from_json(input));
    const Json twice =
        starlift::canonical_problem_json(starlift::problem_file_from_json(once));
    CHECK(once.dump(2) == twice.dump(2));
  }
}
