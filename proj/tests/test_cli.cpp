// End-to-end tests that drive the built `helix` binary through its shell
// interface: exit-code contract, deterministic reruns, manifest digests,
// and config-file handling.
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "expcli/manifest.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kBin = HELIX_BIN_PATH;

int run_cmd(const std::string& args) {
  const std::string cmd = kBin + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("helix_cli_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// fast fig1 invocation on a small chain
const std::string kSmallFig1 =
    "run fig1_helix --n-sites 6 --q-num 2 --p-num 2 --t-max 5 --dt 0.5";

} // namespace

TEST_CASE("version and help exit cleanly") {
  CHECK(run_cmd("--version") == 0);
  CHECK(run_cmd("--help") == 0);
  CHECK(run_cmd("run --help") == 0);
}

TEST_CASE("config errors exit with status 2") {
  CHECK(run_cmd("run no_such_experiment") == 2);
  CHECK(run_cmd("run") == 2);                    // missing experiment name
  CHECK(run_cmd("run fig1_helix --bogus") == 2); // unknown flag
  CHECK(run_cmd("bogus_subcommand") == 2);
  // dt that does not divide t_max is a configuration error
  fs::path dir = fresh_dir("baddt");
  CHECK(run_cmd("run fig1_helix --n-sites 6 --q-num 2 --t-max 5 --dt 0.3 "
                "--out " +
                dir.string()) == 2);
}

TEST_CASE("assertion failures exit with status 1") {
  // p != q breaks the stationarity of the forward helix, which fig1 asserts
  fs::path dir = fresh_dir("fail");
  CHECK(run_cmd("run fig1_helix --n-sites 6 --q-num 2 --p-num 1 --t-max 5 "
                "--dt 0.5 --out " +
                dir.string()) == 1);
  // the manifest is still written and records the failure
  auto j = nlohmann::json::parse(slurp(dir / "manifest.json"));
  bool any_fail = false;
  for (const auto& a : j["assertions"])
    if (!a["pass"].get<bool>()) any_fail = true;
  CHECK(any_fail);
}

TEST_CASE("successful run writes outputs and a digest-consistent manifest") {
  fs::path dir = fresh_dir("ok");
  REQUIRE(run_cmd(kSmallFig1 + " --out " + dir.string()) == 0);
  CHECK(fs::exists(dir / "helix.csv"));
  CHECK(fs::exists(dir / "helix_phibar.csv"));

  auto j = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(j["assertions"].size() > 0);
  REQUIRE(j["outputs"].size() >= 2);
  for (const auto& o : j["outputs"]) {
    const std::string rel = o["path"].get<std::string>();
    const std::string digest =
        helix::expcli::fnv1a64_file((dir / rel).string());
    CHECK(o["fnv1a64"].get<std::string>() == digest);
  }
}

TEST_CASE("reruns are byte-identical") {
  fs::path a = fresh_dir("rerun_a");
  fs::path b = fresh_dir("rerun_b");
  REQUIRE(run_cmd(kSmallFig1 + " --out " + a.string()) == 0);
  REQUIRE(run_cmd(kSmallFig1 + " --out " + b.string()) == 0);
  for (const char* f : {"helix.csv", "helix_phibar.csv"})
    CHECK(slurp(a / f) == slurp(b / f));
}

TEST_CASE("config file keys are applied") {
  fs::path dir = fresh_dir("cfg");
  fs::path cfg = dir / "run.cfg";
  {
    std::ofstream out(cfg);
    out << "# small chain\n"
        << "n_sites = 6\n"
        << "q_num = 2\n"
        << "p_num = 2\n"
        << "t_max = 5\n"
        << "dt = 0.5\n";
  }
  REQUIRE(run_cmd("run fig1_helix --config " + cfg.string() + " --out " +
                  dir.string()) == 0);
  auto j = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(j["config"]["n_sites"].get<int>() == 6);
  CHECK(j["config"]["t_max"].get<double>() == doctest::Approx(5.0));

  // flags override the file: same file plus --t-max 4
  fs::path dir2 = fresh_dir("cfg_override");
  REQUIRE(run_cmd("run fig1_helix --config " + cfg.string() +
                  " --t-max 4 --out " + dir2.string()) == 0);
  auto j2 = nlohmann::json::parse(slurp(dir2 / "manifest.json"));
  CHECK(j2["config"]["t_max"].get<double>() == doctest::Approx(4.0));

  // malformed file is a config error
  fs::path bad = dir / "bad.cfg";
  {
    std::ofstream out(bad);
    out << "not a key value line\n";
  }
  CHECK(run_cmd("run fig1_helix --config " + bad.string() + " --out " +
                dir.string()) == 2);
  CHECK(run_cmd("run fig1_helix --config /no/such/file --out " +
                dir.string()) == 2);
}

TEST_CASE("validate subcommand runs the invariant suite") {
  fs::path dir = fresh_dir("validate");
  CHECK(run_cmd("validate --n-sites 4 --out " + dir.string()) == 0);
  auto j = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(j["assertions"].size() >= 20);
  for (const auto& a : j["assertions"]) CHECK(a["pass"].get<bool>());
}

TEST_CASE("plot script emission") {
  fs::path dir = fresh_dir("plot");
  REQUIRE(run_cmd(kSmallFig1 + " --emit-plot-script --out " + dir.string()) ==
          0);
  CHECK(fs::exists(dir / "plot.py"));
}
