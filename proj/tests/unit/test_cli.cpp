#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gfflab/cli.hpp"
#include "gfflab/errors.hpp"
#include "gfflab/io.hpp"

using namespace gfflab;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("gfflab_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("argument parsing: command, config file, overrides, errors") {
  const fs::path dir = temp_dir("parse");
  const fs::path cfgfile = dir / "run.cfg";
  io::write_text("# comment\nsize = 5\nmaster_seed = 9\n", cfgfile);
  const auto cfg = cli::parse_args(
      {"report-constants", "--config", cfgfile.string(), "--size", "7", "--lambda", "0.5"});
  CHECK(cfg.command == "report-constants");
  CHECK(cfg.size == 7);  // override wins over file
  CHECK(cfg.master_seed == 9);
  CHECK(cfg.lambda.has_value());

  CHECK_THROWS_AS(cli::parse_args({"no-such-command"}), ConfigError);
  CHECK_THROWS_AS(cli::parse_args({"run-walk", "--bogus", "1"}), ConfigError);
  CHECK_THROWS_AS(cli::parse_args({"run-walk", "--N"}), ConfigError);
  CHECK_THROWS_AS(cli::parse_args({"run-walk", "--N", "abc"}), ConfigError);
  CHECK_THROWS_AS(cli::parse_args({}), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("report-constants writes the manifest and echoes K_N") {
  const fs::path dir = temp_dir("constants");
  auto cfg = cli::parse_args({"report-constants", "--N", "100", "--lambda", "0.5",
                              "--theta", "0.3", "--domain", "disc", "--output_dir",
                              dir.string()});
  CHECK(cli::run_experiment(cfg) == 0);
  CHECK(fs::exists(dir / "run.json"));
  const std::string csv = slurp(dir / "report-constants_100_1_0.csv");
  CHECK(csv.find("K_N") != std::string::npos);
  CHECK(csv.find("465.99") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("run-walk emits profile, heatmap and avoided set; pgm is valid P5") {
  const fs::path dir = temp_dir("walk");
  auto cfg = cli::parse_args({"run-walk", "--size", "8", "--t", "50", "--replicas", "1",
                              "--output_dir", dir.string()});
  CHECK(cli::run_experiment(cfg) == 0);
  const std::string pgm = slurp(dir / "run-walk_8_1_0.pgm");
  CHECK(pgm.rfind("P5\n", 0) == 0);
  CHECK(pgm.find("8 8\n255\n") != std::string::npos);
  // At t=50 on an 8x8 box coverage is essentially sure: header-only CSV.
  const std::string avoided = slurp(dir / "run-walk_8_1_0_avoided.csv");
  CHECK(avoided == "ix,iy\n");
  fs::remove_all(dir);
}

TEST_CASE("avoided-points verdict compares MC mean against the exact value") {
  const fs::path dir = temp_dir("avoided");
  auto cfg = cli::parse_args({"avoided-points", "--size", "8", "--theta", "0.3",
                              "--replicas", "400", "--output_dir", dir.string()});
  CHECK(cli::run_experiment(cfg) == 0);
  const std::string verdict = slurp(dir / "verdict.csv");
  CHECK(verdict.find("avoided-mean-vs-exact") != std::string::npos);
  CHECK(verdict.find(",1\n") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("byte-identical reruns, independent of thread count") {
  const fs::path dir1 = temp_dir("repro1");
  const fs::path dir2 = temp_dir("repro2");
  auto base = cli::parse_args({"avoided-points", "--size", "8", "--theta", "0.3",
                               "--replicas", "60", "--master_seed", "31"});
  base.output_dir = dir1.string();
  base.threads = 1;
  CHECK(cli::run_experiment(base) == 0);
  base.output_dir = dir2.string();
  base.threads = 4;
  CHECK(cli::run_experiment(base) == 0);
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(dir1)) {
    const auto name = entry.path().filename().string();
    if (name == "run.json") continue;  // carries wall time
    CHECK(slurp(entry.path()) == slurp(dir2 / name));
    ++compared;
  }
  CHECK(compared >= 61);
  fs::remove_all(dir1);
  fs::remove_all(dir2);
}

TEST_CASE("light-points and green-check run clean on small boxes") {
  const fs::path dir = temp_dir("light");
  auto cfg = cli::parse_args({"light-points", "--size", "8", "--theta", "0.3", "--b",
                              "1.0", "--replicas", "50", "--output_dir", dir.string()});
  CHECK(cli::run_experiment(cfg) == 0);
  const std::string hist = slurp(dir / "light-points_8_1_0.csv");
  CHECK(hist.rfind("bin_lo,bin_hi,empirical,mu_target\n", 0) == 0);
  fs::remove_all(dir);

  const fs::path dir2 = temp_dir("greencheck");
  auto cfg2 = cli::parse_args(
      {"green-check", "--size", "7", "--output_dir", dir2.string()});
  CHECK(cli::run_experiment(cfg2) == 0);
  fs::remove_all(dir2);
}

TEST_CASE("sample-dgff heatmap dimensions follow the domain bounding box") {
  const fs::path dir = temp_dir("dgff");
  auto cfg = cli::parse_args({"sample-dgff", "--domain", "disc", "--N", "12",
                              "--replicas", "1", "--output_dir", dir.string()});
  CHECK(cli::run_experiment(cfg) == 0);
  CHECK(fs::exists(dir / "sample-dgff_12_1_0.csv"));
  CHECK(fs::exists(dir / "sample-dgff_12_1_0.pgm"));
  CHECK(fs::exists(dir / "sample-dgff_12_1_0_scale.csv"));
  fs::remove_all(dir);
}
