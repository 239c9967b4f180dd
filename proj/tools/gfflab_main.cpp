#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "gfflab/cli.hpp"
#include "gfflab/errors.hpp"

namespace {

void usage() {
  std::cerr << "usage: gfflab <command> [--config FILE] [--key value]...\n"
               "commands: green-check | sample-dgff | thick-points | run-walk |\n"
               "          avoided-points | light-points | verify-isomorphism |\n"
               "          cover-time | report-constants\n"
               "common keys: domain size N lambda theta t b replicas master_seed\n"
               "             mode output_dir threads (env GFFLAB_THREADS overrides)\n";
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty() || args[0] == "--help" || args[0] == "-h") {
    usage();
    return args.empty() ? 2 : 0;
  }
  try {
    const gfflab::cli::RunConfig cfg = gfflab::cli::parse_args(args);
    return gfflab::cli::run_experiment(cfg);
  } catch (const gfflab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    usage();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
