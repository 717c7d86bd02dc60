#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct CommandResult {
  int exit_code;
  std::string stdout_text;
};

CommandResult run_cli(const std::string& args, const std::string& workdir) {
  const std::string out_file = workdir + "/stdout.txt";
  const std::string cmd = "cd '" + workdir + "' && '" + TAULAB_CLI_PATH + "' " + args + " > '" +
                          out_file + "' 2>&1";
  const int status = std::system(cmd.c_str());
  CommandResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream f(out_file);
  std::stringstream ss;
  ss << f.rdbuf();
  r.stdout_text = ss.str();
  return r;
}

std::string fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("taulab_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

int count_lines(const std::string& path) {
  std::ifstream f(path);
  int n = 0;
  std::string line;
  while (std::getline(f, line))
    if (!line.empty()) ++n;
  return n;
}

}  // namespace

TEST_CASE("clifford table emits 16 rows and the signature line") {
  const auto dir = fresh_dir("table");
  const auto r = run_cli("clifford table --out blades.csv", dir);
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("signature (8,8)") != std::string::npos);
  CHECK(count_lines(dir + "/blades.csv") == 17);  // header + 16 blades
  CHECK(fs::exists(dir + "/blades.csv.manifest.json"));
}

TEST_CASE("unknown flags exit with the config-error code and write nothing") {
  const auto dir = fresh_dir("badflag");
  const auto r = run_cli("clifford table --bogus 1 --out blades.csv", dir);
  CHECK(r.exit_code == 2);
  CHECK_FALSE(fs::exists(dir + "/blades.csv"));
}

TEST_CASE("unknown metric family exits with the config-error code") {
  const auto dir = fresh_dir("badfamily");
  {
    std::ofstream cfg(dir + "/m.cfg");
    cfg << "family=warp\n";
  }
  const auto r = run_cli("adm check --metric m.cfg --out adm.csv", dir);
  CHECK(r.exit_code == 2);
  CHECK_FALSE(fs::exists(dir + "/adm.csv"));
}

TEST_CASE("unknown config keys are rejected") {
  const auto dir = fresh_dir("badkey");
  {
    std::ofstream cfg(dir + "/m.cfg");
    cfg << "family=flat\nwhatever=3\n";
  }
  const auto r = run_cli("adm check --metric m.cfg --out adm.csv", dir);
  CHECK(r.exit_code == 2);
}

TEST_CASE("adm check passes on the built-in families") {
  const auto dir = fresh_dir("admcheck");
  for (const std::string family : {"flat", "conformal", "tau-diagonal", "kasner5"}) {
    {
      std::ofstream cfg(dir + "/m.cfg");
      cfg << "family=" << family << "\n";
    }
    const auto r = run_cli("adm check --metric m.cfg --samples 4 --out adm.csv", dir);
    CHECK(r.exit_code == 0);
    CHECK(count_lines(dir + "/adm.csv") == 5);
    fs::remove(dir + "/m.cfg");
    fs::remove(dir + "/adm.csv");
  }
}

TEST_CASE("particle shell prints the light-cone mass split") {
  const auto dir = fresh_dir("shell");
  const auto r = run_cli("particle shell --p5 1 --p6 2", dir);
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("m2 = 4") != std::string::npos);
  CHECK(r.stdout_text.find("tachyonic = 0") != std::string::npos);
  const auto t = run_cli("particle shell --p5 1 --p6 -2", dir);
  CHECK(t.stdout_text.find("tachyonic = 1") != std::string::npos);
}

TEST_CASE("particle geodesic writes the worldline table") {
  const auto dir = fresh_dir("geodesic");
  {
    std::ofstream cfg(dir + "/m.cfg");
    cfg << "family=flat5\n";
  }
  const auto r = run_cli(
      "particle geodesic --metric m.cfg --x0 0,0,0,0,0 --v0 1,0.2,0,0,0.1 --steps 100 --h 0.01 "
      "--out wl.csv",
      dir);
  CHECK(r.exit_code == 0);
  CHECK(count_lines(dir + "/wl.csv") == 102);  // header + initial + 100 steps
  std::ifstream f(dir + "/wl.csv");
  std::string header;
  std::getline(f, header);
  CHECK(header == "sigma,x0,x1,x2,x3,x4,p0,p1,p2,p3,p4,shell_residual");
}

TEST_CASE("field evolve reports unitary norms and writes snapshots") {
  const auto dir = fresh_dir("field");
  const auto r = run_cli(
      "field evolve --dim 2 --n 32 --length 16 --lambda 1.0 --tau 2 --steps 10 "
      "--init gaussian:1.5 --out field.csv --snapshot-prefix snap --snapshot-every 5",
      dir);
  CHECK(r.exit_code == 0);
  CHECK(count_lines(dir + "/field.csv") == 12);  // header + tau=0 + 10 steps
  CHECK(fs::exists(dir + "/snap_step5.bin"));
  CHECK(fs::exists(dir + "/snap_step10.bin"));
  std::ifstream f(dir + "/field.csv");
  std::string header;
  std::getline(f, header);
  CHECK(header == "tau,norm,mean_t,mean_x,spread");
}

TEST_CASE("wdw evolve reports the vanishing potential and conserves the norm") {
  const auto dir = fresh_dir("wdw");
  const auto r = run_cli(
      "wdw evolve --modes iso --n 256 --beta-range -3:3 --dt 1e-3 --steps 200 "
      "--init gaussian:0.3,0.4 --out wdw.csv",
      dir);
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("potential term") != std::string::npos);
  CHECK(count_lines(dir + "/wdw.csv") == 202);
  std::ifstream f(dir + "/wdw.csv");
  std::string header;
  std::getline(f, header);
  CHECK(header == "tau,norm,beta_mean,beta2_mean,leakage");
}

TEST_CASE("wdw evolve rejects non-isotropic mode requests") {
  const auto dir = fresh_dir("wdwbad");
  const auto r = run_cli("wdw evolve --modes full --out wdw.csv", dir);
  CHECK(r.exit_code == 2);
  CHECK_FALSE(fs::exists(dir + "/wdw.csv"));
}

TEST_CASE("identical config and seed give byte-identical CSV output") {
  const auto dir = fresh_dir("determinism");
  {
    std::ofstream cfg(dir + "/m.cfg");
    cfg << "family=conformal\neps=0.04\n";
  }
  const auto r1 = run_cli("adm check --metric m.cfg --samples 6 --seed 7 --out a.csv", dir);
  const auto r2 = run_cli("adm check --metric m.cfg --samples 6 --seed 7 --out b.csv", dir);
  REQUIRE(r1.exit_code == 0);
  REQUIRE(r2.exit_code == 0);
  std::ifstream fa(dir + "/a.csv", std::ios::binary), fb(dir + "/b.csv", std::ios::binary);
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  CHECK(sa.str() == sb.str());
  CHECK_FALSE(sa.str().empty());
  // manifests agree too, apart from the echoed output path
  std::ifstream ma(dir + "/a.csv.manifest.json"), mb(dir + "/b.csv.manifest.json");
  std::stringstream msa, msb;
  msa << ma.rdbuf();
  msb << mb.rdbuf();
  std::string textb = msb.str();
  const auto at = textb.find("b.csv");
  REQUIRE(at != std::string::npos);
  textb.replace(at, 5, "a.csv");
  CHECK(msa.str() == textb);
}

TEST_CASE("output directory override redirects relative paths") {
  const auto dir = fresh_dir("envdir");
  const auto out = dir + "/redirected";
  fs::create_directories(out);
  const std::string cmd = std::string("cd '") + dir + "' && TAULAB_OUT_DIR='" + out + "' '" +
                          TAULAB_CLI_PATH + "' clifford table --out t.csv > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(status) == 0);
  CHECK(fs::exists(out + "/t.csv"));
  CHECK_FALSE(fs::exists(dir + "/t.csv"));
}
