// End-to-end tests of the levcap binary.  LEVCAP_BIN and LEVCAP_CONFIG_DIR
// are injected by the build.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

namespace {

using nlohmann::json;

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const std::string& args) {
  const std::string out_path = "/tmp/levcap_test_stdout";
  const std::string err_path = "/tmp/levcap_test_stderr";
  const std::string cmd =
      std::string(LEVCAP_BIN) + " " + args + " > " + out_path + " 2> " + err_path;
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

std::string config(const std::string& name) {
  return std::string(LEVCAP_CONFIG_DIR) + "/" + name;
}

// case-1 config with a small Monte Carlo budget, for the validate tests
std::string small_mc_config() {
  const std::string path = "/tmp/levcap_test_case1_small.json";
  json j;
  {
    std::ifstream in(config("case1.json"));
    in >> j;
  }
  j["mc"]["n_paths"] = 2500;
  j["mc"]["dt"] = 2e-3;
  j["mc"]["seed"] = 42;
  std::ofstream out(path);
  out << j.dump(2);
  return path;
}

}  // namespace

TEST_CASE("solve emits schema-tagged JSON with the expected fields") {
  const auto r = run("solve --config " + config("case1.json"));
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("schema") == "levcap/1");
  CHECK(j.at("B_star").get<double>() == doctest::Approx(3.630894).epsilon(1e-5));
  CHECK(j.at("bankruptcy_asset_level").get<double>() ==
        doctest::Approx(37.7466).epsilon(1e-4));
  CHECK(j.at("optimality") == "OPTIMAL");
  CHECK(j.at("firm").get<double>() == doctest::Approx(108.392).epsilon(1e-4));
}

TEST_CASE("zero face value short-circuits to the unlevered firm") {
  const auto r = run("solve --config " + config("case1.json") + " --P 0");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("B_star").is_null());
  CHECK(j.at("debt").get<double>() == 0.0);
  CHECK(j.at("firm").get<double>() == doctest::Approx(100.0));
}

TEST_CASE("malformed configs exit with code 2 and a field-level message") {
  {
    std::ofstream bad("/tmp/levcap_test_bad.json");
    bad << "{\"market\": {\"r\": 0.075}}";
  }
  auto r = run("solve --config /tmp/levcap_test_bad.json");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("market.delta") != std::string::npos);

  r = run("solve --config /tmp/levcap_test_missing.json");
  CHECK(r.exit_code == 2);

  {
    std::ofstream bad("/tmp/levcap_test_bad2.json");
    bad << "not json";
  }
  r = run("solve --config /tmp/levcap_test_bad2.json");
  CHECK(r.exit_code == 2);
}

TEST_CASE("a drift override violating the martingale condition is rejected") {
  json j;
  {
    std::ifstream in(config("case1.json"));
    in >> j;
  }
  j["levy"]["mu"] = 0.05;
  {
    std::ofstream out("/tmp/levcap_test_mu.json");
    out << j.dump();
  }
  const auto r = run("solve --config /tmp/levcap_test_mu.json");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("martingale") != std::string::npos);
}

TEST_CASE("an unreachable root exits with code 3") {
  const auto r =
      run("solve --config " + config("case1.json") + " --P 1e25");
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("no sign change") != std::string::npos);
}

TEST_CASE("value emits the fixed CSV schema") {
  const auto r = run("value --config " + config("case1.json") +
                     " --B 3.43 --points 40");
  REQUIRE(r.exit_code == 0);
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "B,V0,equity,debt,firm");
  int rows = 0;
  bool negative_equity = false;
  std::string line;
  while (std::getline(lines, line)) {
    ++rows;
    double B, V0, E, D, V;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &B, &V0, &E, &D,
                        &V) == 5);
    CHECK(std::abs(E + D - V) < 1e-6);
    if (E < 0.0) negative_equity = true;
  }
  CHECK(rows == 40);
  // 3.43 sits below the optimal level: limited liability must fail somewhere
  CHECK(negative_equity);
}

TEST_CASE("two-stage on a reduced grid reports the refined optimum") {
  const auto r = run("two-stage --config " + config("case2.json") +
                     " --pmax 60 --pstep 5 --out /tmp/levcap_test_ts.csv");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("schema") == "levcap/1");
  CHECK(j.at("P_star").get<double>() == doctest::Approx(40.83).epsilon(5e-3));
  CHECK(j.at("firm_value").get<double>() >= 100.0);
  const std::string csv = slurp("/tmp/levcap_test_ts.csv");
  CHECK(csv.rfind("P,B_star,firm", 0) == 0);
  // the P = 0 row has an empty bankruptcy level
  CHECK(csv.find("\n0,,100") != std::string::npos);
}

TEST_CASE("sweep CSV has the documented columns and status field") {
  const auto r = run("sweep --config " + config("case1.json") +
                     " --knob a --range 0:1:3");
  REQUIRE(r.exit_code == 0);
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header ==
        "knob,B_star,bankruptcy_asset_level,equity,debt,firm,debt_equity,"
        "status");
  std::string line;
  int ok_rows = 0;
  while (std::getline(lines, line))
    if (line.find(",ok") != std::string::npos) ++ok_rows;
  CHECK(ok_rows == 3);
}

TEST_CASE("validate is deterministic and reports every functional") {
  const std::string cfg = small_mc_config();
  const auto a = run("validate --config " + cfg);
  REQUIRE(a.exit_code == 0);
  const auto b = run("validate --config " + cfg);
  CHECK(a.out == b.out);  // identical bytes for identical seeds
  const json j = json::parse(a.out);
  CHECK(j.at("schema") == "levcap/1");
  CHECK(j.at("functionals").size() == 8);
  CHECK(j.at("all_within_3se") == true);

  // a different seed changes the sample but not the schema
  const auto c = run("validate --config " + cfg + " --seed 43");
  REQUIRE(c.exit_code == 0);
  CHECK(c.out != a.out);
}

TEST_CASE("a deliberately biased closed form fails validation loudly") {
  const std::string cfg = small_mc_config();
  const auto r = run("validate --config " + cfg + " --bias debt:0.8");
  CHECK(r.exit_code == 4);
  CHECK(r.err.find("debt") != std::string::npos);
  const json j = json::parse(r.out);
  CHECK(j.at("all_within_3se") == false);
}

TEST_CASE("LEVCAP_CONFIG provides the default config path") {
  const std::string cmd = std::string("LEVCAP_CONFIG=") + config("case2.json") +
                          " " + LEVCAP_BIN +
                          " solve > /tmp/levcap_test_stdout 2> /dev/null";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 0);
  const json j = json::parse(slurp("/tmp/levcap_test_stdout"));
  CHECK(j.at("B_star").get<double>() == doctest::Approx(3.672436).epsilon(1e-5));

  // and no config at all is a config error
  const int none = std::system(
      (std::string(LEVCAP_BIN) + " solve > /dev/null 2> /dev/null").c_str());
  CHECK(WEXITSTATUS(none) == 2);
}
