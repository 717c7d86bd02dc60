#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "taulab/runio.hpp"

namespace runio = taulab::runio;
namespace fs = std::filesystem;

namespace {

std::string temp_path(const std::string& name) {
  return (fs::temp_directory_path() / ("taulab_test_" + name)).string();
}

}  // namespace

TEST_CASE("key=value parsing: comments, blanks, trimming") {
  std::istringstream is("# comment\n\nfamily = flat \n eps=0.5\n");
  const auto kv = runio::parse_key_values(is);
  REQUIRE(kv.size() == 2);
  CHECK(kv.at("family") == "flat");
  CHECK(kv.at("eps") == "0.5");
  CHECK(runio::to_double(kv, "eps", 0.0) == 0.5);
  CHECK(runio::to_double(kv, "missing", 7.0) == 7.0);
}

TEST_CASE("key=value parsing rejects malformed lines and duplicates") {
  std::istringstream bad("novalue\n");
  CHECK_THROWS_AS(runio::parse_key_values(bad), std::invalid_argument);
  std::istringstream dup("a=1\na=2\n");
  CHECK_THROWS_AS(runio::parse_key_values(dup), std::invalid_argument);
  std::istringstream nokey("=3\n");
  CHECK_THROWS_AS(runio::parse_key_values(nokey), std::invalid_argument);
}

TEST_CASE("unknown keys are rejected against the allowed set") {
  std::istringstream is("family=flat\nbogus=1\n");
  const auto kv = runio::parse_key_values(is);
  CHECK_THROWS_AS(runio::check_known_keys(kv, {"family"}), std::invalid_argument);
  CHECK_NOTHROW(runio::check_known_keys(kv, {"family", "bogus"}));
}

TEST_CASE("csv writer emits header plus rows and writes atomically") {
  const std::string path = temp_path("table.csv");
  fs::remove(path);
  {
    runio::CsvWriter csv(path, {"a", "b"});
    csv.row({1.0, 2.5});
    csv.row({-0.25, 1e-17});
    CHECK_FALSE(fs::exists(path));  // nothing on disk until close
    csv.close();
  }
  REQUIRE(fs::exists(path));
  std::ifstream f(path);
  std::string line;
  std::getline(f, line);
  CHECK(line == "a,b");
  std::getline(f, line);
  CHECK(line == "1,2.5");
  fs::remove(path);
}

TEST_CASE("abandoned csv writer leaves no partial artifact") {
  const std::string path = temp_path("partial.csv");
  fs::remove(path);
  {
    runio::CsvWriter csv(path, {"x"});
    csv.row({1.0});
    // destroyed without close(): simulates a failed run
  }
  CHECK_FALSE(fs::exists(path));
}

TEST_CASE("csv writer rejects mismatched row widths") {
  runio::CsvWriter csv("", {"a", "b"});
  CHECK_THROWS_AS(csv.row({1.0}), std::invalid_argument);
}

TEST_CASE("manifest serialization is deterministic and excludes timing") {
  runio::RunManifest m;
  m.config["subcommand"] = "verify-all";
  m.config["seed"] = 42;
  m.version = "test-version";
  runio::CheckResult c;
  c.id = "sample-check";
  c.name = "sample";
  c.passed = true;
  c.residual = 1.25e-13;
  c.limit = 1e-12;
  c.seconds = 0.123;  // varies between runs; must not serialize
  m.checks.push_back(c);
  m.all_passed = true;
  m.wall_seconds = 9.5;

  const std::string a = runio::manifest_to_json(m);
  m.wall_seconds = 1.0;
  m.checks[0].seconds = 99.0;
  const std::string b = runio::manifest_to_json(m);
  CHECK(a == b);
  CHECK(a.find("seconds") == std::string::npos);
  CHECK(a.find("sample-check") != std::string::npos);
}

TEST_CASE("manifest file is written with its timing sidecar") {
  const std::string path = temp_path("manifest.json");
  fs::remove(path);
  fs::remove(path + ".timing.txt");
  runio::RunManifest m;
  m.config["subcommand"] = "test";
  m.version = "v";
  m.wall_seconds = 0.5;
  runio::write_manifest(path, m);
  CHECK(fs::exists(path));
  CHECK(fs::exists(path + ".timing.txt"));
  fs::remove(path);
  fs::remove(path + ".timing.txt");
}

TEST_CASE("output directory override applies to relative paths only") {
  setenv("TAULAB_OUT_DIR", "/tmp/taulab_out_test", 1);
  CHECK(runio::resolve_output_path("x.csv") == "/tmp/taulab_out_test/x.csv");
  CHECK(runio::resolve_output_path("/abs/x.csv") == "/abs/x.csv");
  unsetenv("TAULAB_OUT_DIR");
  CHECK(runio::resolve_output_path("x.csv") == "x.csv");
}

TEST_CASE("double formatting round-trips through parsing") {
  for (double v : {1.0, -0.1, 3.141592653589793, 1e-300, 123456789.123456789}) {
    const std::string s = runio::format_double(v);
    CHECK(std::stod(s) == v);
  }
}
