#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <string>

#ifndef MPX_BIN
#error "MPX_BIN must point at the command line binary"
#endif

namespace {

using nlohmann::json;

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(MPX_BIN) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    out.append(buf.data(), got);
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string write_config(const json& j, const std::string& name) {
  std::string path = "/tmp/mpx_cli_" + name + ".json";
  std::ofstream f(path);
  f << j.dump();
  return path;
}

json rotation_config() {
  double c = std::cos(-2.0 * M_PI / 5.0), s = std::sin(-2.0 * M_PI / 5.0);
  return json{{"n", 1},
              {"k", 5},
              {"tau", 1.0},
              {"P", {{c, -s}, {s, c}}},
              {"generator",
               {{"type", "random_compatible"}, {"seed", 11}, {"degree", 2},
                {"amplitude", 0.8}}},
              {"seed", 11}};
}

json quartic_config() {
  json j = rotation_config();
  j.erase("generator");
  j["hamiltonian"] = {{"type", "radial_power"}, {"power", 4.0},
                      {"coeff", 0.25}};
  j["solver"] = {{"guess", {2.26, 0.01}}, {"restarts", 4},
                 {"radius", {2.0, 2.5}}};
  return j;
}

}  // namespace

TEST_CASE("classify emits the class data") {
  std::string cfg = write_config(rotation_config(), "classify");
  RunResult r = run("classify --config " + cfg);
  CHECK(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["n"] == 1);
  CHECK(j["admissible"] == true);
  CHECK(j["margin"] == 3);
}

TEST_CASE("index agrees across pipelines and reports it") {
  std::string cfg = write_config(rotation_config(), "index");
  RunResult r = run("index --config " + cfg);
  CHECK(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["agree"] == true);
  CHECK(j["galerkin"]["i"] == j["i"]);
}

TEST_CASE("bott subcommand passes and threads do not change the result") {
  std::string cfg = write_config(rotation_config(), "bott");
  RunResult a = run("bott --config " + cfg + " --m 3");
  RunResult b = run("bott --config " + cfg + " --m 3 --threads 4");
  CHECK(a.exit_code == 0);
  CHECK(b.exit_code == 0);
  CHECK(json::parse(a.out) == json::parse(b.out));
}

TEST_CASE("inequalities subcommand") {
  std::string cfg = write_config(rotation_config(), "ineq");
  RunResult r = run("inequalities --config " + cfg + " --m 3");
  CHECK(r.exit_code == 0);
  CHECK(json::parse(r.out)["pass"] == true);
}

TEST_CASE("solve is deterministic under a fixed seed") {
  std::string cfg = write_config(quartic_config(), "solve");
  RunResult a = run("solve --config " + cfg);
  RunResult b = run("solve --config " + cfg);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  json j = json::parse(a.out);
  CHECK(double(j["residual"]) <= 1e-10);
}

TEST_CASE("certify emits a certificate and the CSV tables") {
  std::string cfg = write_config(quartic_config(), "certify");
  RunResult r = run("certify --config " + cfg + " --out /tmp/mpx_cli_out");
  CHECK(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["verdict"] == "certified_ktau");
  std::ifstream csv("/tmp/mpx_cli_out/indices.csv");
  REQUIRE(csv.good());
  std::string header;
  std::getline(csv, header);
  CHECK(header == "m,i_crossing,nu_crossing,i_galerkin,nu_galerkin,agree");
  int rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  CHECK(rows == 6);  // m = 1..k+1
}

TEST_CASE("strict schema: unknown keys are rejected with exit 2") {
  json bad = rotation_config();
  bad["surprise"] = 1;
  std::string cfg = write_config(bad, "badkey");
  RunResult r = run("classify --config " + cfg);
  CHECK(r.exit_code == 2);
  CHECK(json::parse(r.out).contains("error"));
}

TEST_CASE("missing config and unsolvable problems use distinct exit codes") {
  RunResult r = run("classify --config /tmp/does_not_exist.json");
  CHECK(r.exit_code == 2);
  json far = quartic_config();
  far["solver"] = {{"guess", {0.001, 0.0}}, {"restarts", 0}};
  std::string cfg = write_config(far, "nosol");
  RunResult s = run("solve --config " + cfg);
  CHECK(s.exit_code == 1);
}
