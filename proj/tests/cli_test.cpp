#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "ewensctl");
  std::ostringstream out, err;
  const int code = ewens::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("ewensctl_test_" + name);
}

}  // namespace

TEST_CASE("sharp constant at theta 1 and 2") {
  const Result a = run({"tau", "--n", "10", "--theta", "1"});
  CHECK(a.code == 0);
  CHECK(a.out.find("tau_closed=3/2") != std::string::npos);
  CHECK(a.out.find("rayleigh_extremal=3/2") != std::string::npos);
  CHECK(a.out.find("verdict=pass") != std::string::npos);

  const Result b = run({"tau", "--n", "10", "--theta", "2", "--format", "json"});
  CHECK(b.code == 0);
  const auto j = nlohmann::json::parse(b.out);
  CHECK(j["tau_closed"] == "4/3");
  CHECK(j["one_plus_theta_mu2"] == "4/3");
  CHECK(j["n"] == 10);
}

TEST_CASE("spectrum in both modes") {
  const Result exact = run({"spectrum", "--n", "5", "--theta", "1", "--format", "json"});
  CHECK(exact.code == 0);
  const auto rows = lines(exact.out);
  REQUIRE(rows.size() == 5);
  const char* mu[] = {"-1", "1/2", "-1/3", "1/4", "-1/5"};
  for (int r = 0; r < 5; ++r) {
    const auto j = nlohmann::json::parse(rows[r]);
    CHECK(j["r"] == r + 1);
    CHECK(j["mu_closed"] == mu[r]);
    CHECK(j["r_diagonal"] == mu[r]);
  }

  const Result fl = run({"spectrum", "--n", "5", "--theta", "1", "--mode", "float", "--format", "json"});
  CHECK(fl.code == 0);
  for (const std::string& row : lines(fl.out)) {
    const auto j = nlohmann::json::parse(row);
    CHECK(j["abs_err"].get<double>() < 1e-12);
  }
}

TEST_CASE("usage errors exit with status 2") {
  CHECK(run({"tau", "--n", "3", "--theta", "0"}).code == 2);
  CHECK(run({"tau", "--n", "3"}).code == 2);
  CHECK(run({"tau", "--n", "1", "--theta", "1"}).code == 2);
  CHECK(run({"sample", "--n", "3", "--theta", "1", "--count", "1"}).code == 2);
  CHECK(run({"verify", "--n", "3", "--theta", "1", "--suites", ""}).code == 2);
  CHECK(run({"verify", "--n", "3", "--theta", "1", "--suites", "nonsense"}).code == 2);
  CHECK(run({"tau", "--n", "3", "--theta", "1", "--mode", "fast"}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  const Result r = run({"oracle", "--n", "3", "--theta", "1", "--a", "1,2"});
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("verify suites pass") {
  const Result ids = run({"verify", "--n", "12", "--theta", "1/2", "--suites", "identities"});
  CHECK(ids.code == 0);
  CHECK(ids.out.find("status=FAIL") == std::string::npos);
  CHECK(ids.out.find("failed=0") != std::string::npos);

  const Result orc = run({"verify", "--n", "8", "--theta", "1", "--suites", "oracle"});
  CHECK(orc.code == 0);
  CHECK(orc.out.find("check=permutation_measure") != std::string::npos);

  const Result rem = run({"verify", "--n", "2-6", "--theta", "1,5/2", "--suites", "remark", "--format", "json"});
  CHECK(rem.code == 0);
}

TEST_CASE("output is deterministic") {
  const std::vector<std::string> sample{"sample", "--n", "6", "--theta", "3/2", "--count", "20000",
                                        "--seed", "11", "--streams", "4"};
  auto with_threads = [&](const char* t) {
    auto args = sample;
    args.insert(args.end(), {"--threads", t});
    return run(args).out;
  };
  const std::string first = with_threads("1");
  CHECK(first == with_threads("1"));
  CHECK(first == with_threads("4"));

  const std::vector<std::string> grid{"verify", "--grid", "2-7:1/3,2", "--suites", "spectral,oracle",
                                      "--random", "3", "--format", "json"};
  auto g1 = grid, g4 = grid;
  g1.insert(g1.end(), {"--threads", "1"});
  g4.insert(g4.end(), {"--threads", "4"});
  CHECK(run(g1).out == run(g4).out);
}

TEST_CASE("verify over a grid prints one JSON object per cell") {
  const Result r = run({"verify", "--grid", "2-4:1/2,2", "--suites", "spectral,remark", "--random", "2"});
  CHECK(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 6);
  const auto first = nlohmann::json::parse(rows[0]);
  CHECK(first["n"] == 2);
  CHECK(first["theta"] == "1/2");
  CHECK(first["status"] == "PASS");
  CHECK(first["checks"].size() > 5);
  CHECK(nlohmann::json::parse(rows[3])["theta"] == "2");
}

TEST_CASE("csv output has a header and one row per cell") {
  const Result r = run({"tau", "--n", "2-4", "--theta", "1/2", "--format", "csv"});
  CHECK(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "n,theta,mode,tau_closed,one_plus_theta_mu2,rayleigh_extremal,verdict");
  CHECK(rows[1] == "2,1/2,exact,5/3,5/3,5/3,pass");
  CHECK(rows[3].rfind("4,1/2,", 0) == 0);
}

TEST_CASE("grid sweeps theta outermost") {
  const Result r = run({"tau", "--grid", "2,3:1,2"});
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].rfind("n=2 theta=1 ", 0) == 0);
  CHECK(rows[1].rfind("n=3 theta=1 ", 0) == 0);
  CHECK(rows[2].rfind("n=2 theta=2 ", 0) == 0);
  CHECK(run({"tau", "--grid", "2,3:1", "--n", "4"}).code == 2);
}

TEST_CASE("weights from a file and inline") {
  const auto path = temp_file("weights.txt");
  {
    std::ofstream f(path);
    f << "1\n-2\n\n# comment\n3\n";
  }
  const Result file = run({"oracle", "--n", "3", "--theta", "1", "--weights", path.string(), "--format", "json"});
  const Result inl = run({"oracle", "--n", "3", "--theta", "1", "--a", "1,-2,3", "--format", "json"});
  std::filesystem::remove(path);
  CHECK(file.code == 0);
  CHECK(file.out == inl.out);
  const auto j = nlohmann::json::parse(lines(file.out).front());
  CHECK(j["var_exact"] == "4");
  CHECK(j["var_formula"] == "4");
  CHECK(j["agree"] == true);
}

TEST_CASE("report written to a file") {
  const auto path = temp_file("out.csv");
  const Result r = run({"matrix", "--n", "3", "--theta", "1", "--which", "r", "--out", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(path);
  std::stringstream buf;
  buf << f.rdbuf();
  f.close();
  std::filesystem::remove(path);
  const auto rows = lines(buf.str());
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == "-1,-1,-1/3");
  CHECK(rows[1] == "0,1/2,1/3");
  CHECK(rows[2] == "0,0,-1/3");
}

TEST_CASE("hahn table") {
  const Result r = run({"hahn", "--n", "3", "--theta", "1"});
  CHECK(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() >= 2);
  CHECK(rows[0] == "j,q0,q1,q2");
  CHECK(rows[1] == "1,1,1,1");
}

TEST_CASE("Monte Carlo bound check") {
  const Result r = run({"sample", "--n", "4", "--theta", "1", "--count", "5000", "--seed", "3", "--format", "json"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(lines(r.out).front());
  CHECK(j["bound_ok"] == true);
  CHECK(j["tau"].get<double>() == doctest::Approx(1.5));

  const Result c = run({"sample", "--n", "5", "--theta", "1/2", "--count", "3000", "--conditioned", "--a", "1,2,3,4,5"});
  CHECK(c.code == 0);
}
