#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gfflab/lattice.hpp"

namespace gfflab::cli {

// Flat key=value configuration; file first, command-line overrides second.
struct RunConfig {
  std::string command;

  std::string domain = "square";  // square | disc | rectangle | polygon
  int size = 16;                  // square side in sites
  double cx = 0.0, cy = 0.0, radius = 1.0;
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
  std::string vertices;  // "x,y;x,y;..."

  int N = 64;
  std::optional<double> lambda;
  std::optional<double> theta;
  std::optional<double> t_override;
  std::optional<double> a_override;
  double t = 1.0;  // run-walk time
  double b = 1.0;  // light-point cap / thick threshold
  long long replicas = 100;
  std::uint64_t master_seed = 1;
  std::string mode = "exponential-holding";
  std::string output_dir = "out";
  int threads = 0;

  // Raw key/value echo for the manifest.
  std::map<std::string, std::string> echo;
};

// argv after the program name: <command> [--config file] [--key value]...
RunConfig parse_args(const std::vector<std::string>& args);

lattice::ContinuumDomain domain_from_config(const RunConfig& config);
lattice::WiredDomain wired_from_config(const RunConfig& config);

// Scale parameter N: the square's site count doubles as the scale, other
// shapes use the discretization N.
int scale_N(const RunConfig& config);

struct VerdictRow {
  std::string check;
  std::string statistic;
  double value = 0.0;
  double target = 0.0;
  double sigma = 0.0;
  bool pass = false;
};

// Exit codes: 0 pass, 1 verdict failure, 2 config error, 3 runtime error.
int run_experiment(const RunConfig& config);

}  // namespace gfflab::cli
