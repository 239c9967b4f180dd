#include "gfflab/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "gfflab/dgff.hpp"
#include "gfflab/errors.hpp"
#include "gfflab/green.hpp"
#include "gfflab/io.hpp"
#include "gfflab/isomorphism.hpp"
#include "gfflab/measures.hpp"
#include "gfflab/parallel.hpp"
#include "gfflab/potential.hpp"
#include "gfflab/stats.hpp"
#include "gfflab/walk.hpp"

namespace gfflab::cli {

namespace {

const std::vector<std::string> kCommands = {
    "green-check",    "sample-dgff",        "thick-points",
    "run-walk",       "avoided-points",     "light-points",
    "verify-isomorphism", "cover-time",     "report-constants"};

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  cfg.echo[key] = value;
  auto as_double = [&]() {
    try {
      return std::stod(value);
    } catch (...) {
      throw ConfigError("config: key '" + key + "' needs a number, got '" + value + "'");
    }
  };
  auto as_int = [&]() {
    try {
      return std::stoll(value);
    } catch (...) {
      throw ConfigError("config: key '" + key + "' needs an integer, got '" + value + "'");
    }
  };
  if (key == "command") cfg.command = value;
  else if (key == "domain") cfg.domain = value;
  else if (key == "size") cfg.size = static_cast<int>(as_int());
  else if (key == "cx") cfg.cx = as_double();
  else if (key == "cy") cfg.cy = as_double();
  else if (key == "radius") cfg.radius = as_double();
  else if (key == "x0") cfg.x0 = as_double();
  else if (key == "y0") cfg.y0 = as_double();
  else if (key == "x1") cfg.x1 = as_double();
  else if (key == "y1") cfg.y1 = as_double();
  else if (key == "vertices") cfg.vertices = value;
  else if (key == "N") cfg.N = static_cast<int>(as_int());
  else if (key == "lambda") cfg.lambda = as_double();
  else if (key == "theta") cfg.theta = as_double();
  else if (key == "t") cfg.t = as_double();
  else if (key == "t_override") cfg.t_override = as_double();
  else if (key == "a_override") cfg.a_override = as_double();
  else if (key == "b") cfg.b = as_double();
  else if (key == "replicas") cfg.replicas = as_int();
  else if (key == "master_seed") cfg.master_seed = static_cast<std::uint64_t>(as_int());
  else if (key == "mode") cfg.mode = value;
  else if (key == "output_dir") cfg.output_dir = value;
  else if (key == "threads") cfg.threads = static_cast<int>(as_int());
  else throw ConfigError("config: unknown key '" + key + "'");
}

void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open file '" + path + "'");
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      if (a == std::string::npos) return std::string();
      const auto b = s.find_last_not_of(" \t\r");
      return s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) apply_key(cfg, key, value);
  }
}

std::string artifact_name(const RunConfig& cfg, long long index, const char* ext) {
  return cfg.command + "_" + std::to_string(scale_N(cfg)) + "_" +
         std::to_string(cfg.master_seed) + "_" + std::to_string(index) + "." + ext;
}

using Clock = std::chrono::steady_clock;

void write_manifest(const RunConfig& cfg, const std::filesystem::path& dir,
                    Clock::time_point start, const std::vector<std::string>& files) {
  nlohmann::json j;
  j["command"] = cfg.command;
  j["master_seed"] = cfg.master_seed;
  j["threads"] = thread_count(cfg.threads);
  nlohmann::json echo;
  for (const auto& [k, v] : cfg.echo) echo[k] = v;
  j["config"] = echo;
  j["versions"] = {{"gfflab", "0.1.0"},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                 std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)}};
  j["files"] = files;
  j["wall_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start)
                     .count();
  io::write_text(j.dump(2) + "\n", dir / "run.json");
}

void write_verdicts(const std::vector<VerdictRow>& rows, const std::filesystem::path& dir) {
  io::CsvWriter csv({"check", "statistic", "value", "target", "sigma", "pass"});
  for (const auto& r : rows)
    csv.add_row({r.check, r.statistic, io::format_double(r.value),
                 io::format_double(r.target), io::format_double(r.sigma),
                 r.pass ? "1" : "0"});
  csv.write(dir / "verdict.csv");
}

bool all_pass(const std::vector<VerdictRow>& rows) {
  return std::all_of(rows.begin(), rows.end(), [](const VerdictRow& r) { return r.pass; });
}

measures::ScaleParams params_from_config(const RunConfig& cfg) {
  measures::ScaleOverrides ov;
  ov.a_N = cfg.a_override;
  ov.t_N = cfg.t_override;
  return measures::scale_params(scale_N(cfg), cfg.lambda, cfg.theta, ov);
}

walk::HoldingMode mode_from_config(const RunConfig& cfg) {
  if (cfg.mode == "exponential-holding") return walk::HoldingMode::kExponentialHolding;
  if (cfg.mode == "visit-count") return walk::HoldingMode::kVisitCount;
  throw ConfigError("config: mode must be exponential-holding or visit-count");
}

std::string profile_csv(const lattice::WiredDomain& dom, const walk::LocalTimeProfile& p) {
  io::CsvWriter csv({"ix", "iy", "visits", "L"});
  for (int i = 0; i < dom.n(); ++i)
    csv.add_row({std::to_string(dom.sites[i][0]), std::to_string(dom.sites[i][1]),
                 std::to_string(p.visits[i]), io::format_double(p.L[i])});
  return csv.str();
}

std::string avoided_csv(const lattice::WiredDomain& dom, const walk::LocalTimeProfile& p) {
  io::CsvWriter csv({"ix", "iy"});
  for (int i : walk::avoided_set(p))
    csv.add_row({std::to_string(dom.sites[i][0]), std::to_string(dom.sites[i][1])});
  return csv.str();
}

std::string point_measure_csv(const measures::PointMeasure& m) {
  io::CsvWriter csv({"x", "y", "value", "weight"});
  for (const auto& a : m.atoms)
    csv.add_row({io::format_double(a.x), io::format_double(a.y),
                 io::format_double(a.value), io::format_double(m.weight)});
  return csv.str();
}

// ---- commands ----------------------------------------------------------

int cmd_report_constants(const RunConfig& cfg, const std::filesystem::path& dir,
                         std::vector<std::string>& files) {
  if (!cfg.lambda && !cfg.theta)
    throw ConfigError("report-constants: provide lambda and/or theta");
  const auto p = params_from_config(cfg);
  io::CsvWriter csv({"name", "value"});
  auto row = [&](const char* name, double v) {
    csv.add_row({name, io::format_double(v)});
    std::cout << name << " = " << io::format_double(v) << "\n";
  };
  row("g", p.g);
  row("c0", p.c0);
  row("alpha", p.alpha);
  row("m_N", p.m_N);
  if (cfg.lambda) {
    row("a_N", p.a_N);
    row("K_N", p.K_N);
    row("c_hat", p.c_hat);
  }
  if (cfg.theta) {
    row("t_N", p.t_N);
    row("hatK_N", p.hatK_N);
  }
  const std::string name = artifact_name(cfg, 0, "csv");
  csv.write(dir / name);
  files.push_back(name);
  return 0;
}

int cmd_green_check(const RunConfig& cfg, const std::filesystem::path& dir,
                    std::vector<std::string>& files) {
  const lattice::WiredDomain dom = wired_from_config(cfg);
  const green::GreenOperator green(dom);
  const potential::PotentialKernel kernel;
  std::vector<VerdictRow> rows;

  // Symmetry via a deterministic pair sample.
  rng::Stream pick(cfg.master_seed, rng::Purpose::kGeneric, 0);
  double sym = 0.0, cross = 0.0;
  const int pairs = std::min(dom.n(), 64);
  for (int k = 0; k < pairs; ++k) {
    const int x = static_cast<int>(pick.next_below(static_cast<std::uint32_t>(dom.n())));
    const int y = static_cast<int>(pick.next_below(static_cast<std::uint32_t>(dom.n())));
    const double gxy = green.entry(x, y);
    const double gyx = green.entry(y, x);
    sym = std::max(sym, std::fabs(gxy - gyx) / std::max(1.0, std::fabs(gxy)));
    cross = std::max(cross, std::fabs(gxy - green_via_kernel(green, kernel, x, y)));
  }
  rows.push_back({"green-symmetry", "max_rel_asym", sym, 1e-10, 0.0, sym <= 1e-10});
  rows.push_back({"green-cross-method", "max_abs_diff", cross, 1e-9, 0.0, cross <= 1e-9});

  const double herr = kernel.check_harmonicity(5);
  rows.push_back({"kernel-harmonicity", "max_residual", herr, 1e-8, 0.0, herr <= 1e-8});

  const auto hm = harmonic_measure(green, {0});
  const double rs = std::fabs(hm.row_sum(0) - 1.0);
  rows.push_back({"harmonic-measure-rows", "row_sum_err", rs, 1e-12, 0.0, rs <= 1e-12});

  write_verdicts(rows, dir);
  files.push_back("verdict.csv");
  return all_pass(rows) ? 0 : 1;
}

int cmd_sample_dgff(const RunConfig& cfg, const std::filesystem::path& dir,
                    std::vector<std::string>& files) {
  const lattice::WiredDomain dom = wired_from_config(cfg);
  const green::GreenOperator green(dom);
  for (long long r = 0; r < cfg.replicas; ++r) {
    rng::Stream stream(cfg.master_seed, rng::Purpose::kField,
                       static_cast<std::uint64_t>(r));
    const auto field = dgff::sample_field(
        green, stream, rng::stream_tag(cfg.master_seed, rng::Purpose::kField,
                                       static_cast<std::uint64_t>(r)));
    io::CsvWriter csv({"ix", "iy", "h"});
    for (int i = 0; i < dom.n(); ++i)
      csv.add_row({std::to_string(dom.sites[i][0]), std::to_string(dom.sites[i][1]),
                   io::format_double(field.values[i])});
    const std::string cname = artifact_name(cfg, r, "csv");
    csv.write(dir / cname);
    files.push_back(cname);
    const auto img = io::rasterize(dom, field.values);
    const std::string pname = artifact_name(cfg, r, "pgm");
    io::write_pgm(img, dir / pname);
    files.push_back(pname);
    // Sidecar with the affine map of the heatmap.
    io::CsvWriter side({"file", "lo", "hi"});
    side.add_row({pname, io::format_double(img.lo), io::format_double(img.hi)});
    const std::string sname = cfg.command + "_" + std::to_string(scale_N(cfg)) + "_" +
                              std::to_string(cfg.master_seed) + "_" + std::to_string(r) +
                              "_scale.csv";
    side.write(dir / sname);
    files.push_back(sname);
  }
  return 0;
}

int cmd_thick_points(const RunConfig& cfg, const std::filesystem::path& dir,
                     std::vector<std::string>& files) {
  if (!cfg.lambda) throw ConfigError("thick-points: lambda required");
  const lattice::ContinuumDomain cd = domain_from_config(cfg);
  const lattice::WiredDomain dom = wired_from_config(cfg);
  const green::GreenOperator green(dom);
  const potential::PotentialKernel kernel;
  const auto params = params_from_config(cfg);

  double mean_mass0 = 0.0, mean_massb = 0.0;
  for (long long r = 0; r < cfg.replicas; ++r) {
    rng::Stream stream(cfg.master_seed, rng::Purpose::kField,
                       static_cast<std::uint64_t>(r));
    const auto field = dgff::sample_field(green, stream);
    const auto pm =
        build_point_measure(field, dom, params, measures::MeasureKind::kThick);
    long long n0 = 0, nb = 0;
    for (const auto& a : pm.atoms) {
      if (a.value >= 0.0) ++n0;
      if (a.value >= cfg.b) ++nb;
    }
    mean_mass0 += n0 * pm.weight;
    mean_massb += nb * pm.weight;
    const std::string name = artifact_name(cfg, r, "csv");
    io::write_text(point_measure_csv(pm), dir / name);
    files.push_back(name);
  }
  mean_mass0 /= static_cast<double>(cfg.replicas);
  mean_massb /= static_cast<double>(cfg.replicas);

  const auto fm0 = thick_first_moment(green, kernel, params, cd, 0.0);
  const auto fmb = thick_first_moment(green, kernel, params, cd, cfg.b);
  io::CsvWriter csv({"quantity", "value"});
  csv.add_row({"empirical_mean_mass_b0", io::format_double(mean_mass0)});
  csv.add_row({"empirical_mean_mass_b", io::format_double(mean_massb)});
  csv.add_row({"exact_first_moment_b0", io::format_double(fm0.exact)});
  csv.add_row({"exact_first_moment_b", io::format_double(fmb.exact)});
  csv.add_row({"limit_first_moment_b0", io::format_double(fm0.limit)});
  csv.add_row({"limit_first_moment_b", io::format_double(fmb.limit)});
  const std::string name = cfg.command + "_" + std::to_string(scale_N(cfg)) + "_" +
                           std::to_string(cfg.master_seed) + "_summary.csv";
  csv.write(dir / name);
  files.push_back(name);
  return 0;
}

int cmd_run_walk(const RunConfig& cfg, const std::filesystem::path& dir,
                 std::vector<std::string>& files) {
  const lattice::WiredDomain dom = wired_from_config(cfg);
  walk::Walker walker(dom);
  for (long long r = 0; r < cfg.replicas; ++r) {
    rng::Stream stream(cfg.master_seed, rng::Purpose::kWalk,
                       static_cast<std::uint64_t>(r));
    const auto prof = walker.sample_local_time(cfg.t, mode_from_config(cfg), stream);
    const std::string pname = artifact_name(cfg, r, "csv");
    io::write_text(profile_csv(dom, prof), dir / pname);
    files.push_back(pname);
    const auto img = io::rasterize(dom, prof.L);
    const std::string iname = artifact_name(cfg, r, "pgm");
    io::write_pgm(img, dir / iname);
    files.push_back(iname);
    const std::string aname = cfg.command + "_" + std::to_string(scale_N(cfg)) + "_" +
                              std::to_string(cfg.master_seed) + "_" + std::to_string(r) +
                              "_avoided.csv";
    io::write_text(avoided_csv(dom, prof), dir / aname);
    files.push_back(aname);
  }
  return 0;
}

int cmd_avoided_points(const RunConfig& cfg, const std::filesystem::path& dir,
                       std::vector<std::string>& files) {
  if (!cfg.theta) throw ConfigError("avoided-points: theta required");
  const lattice::WiredDomain dom = wired_from_config(cfg);
  const green::GreenOperator green(dom);
  const potential::PotentialKernel kernel;
  const auto params = params_from_config(cfg);

  std::vector<double> counts(static_cast<std::size_t>(cfg.replicas));
  const int workers = thread_count(cfg.threads);
  constexpr long long kChunk = 64;
  const int nchunks = static_cast<int>((cfg.replicas + kChunk - 1) / kChunk);
  std::vector<std::string> replica_csv(static_cast<std::size_t>(cfg.replicas));
  parallel_for_index(nchunks, workers, [&](int chunk) {
    walk::Walker walker(dom);
    const long long lo = static_cast<long long>(chunk) * kChunk;
    const long long hi = std::min(cfg.replicas, lo + kChunk);
    for (long long r = lo; r < hi; ++r) {
      rng::Stream stream(cfg.master_seed, rng::Purpose::kWalk,
                         static_cast<std::uint64_t>(r));
      const auto prof = walker.sample_local_time(
          params.t_N, walk::HoldingMode::kExponentialHolding, stream);
      counts[static_cast<std::size_t>(r)] =
          static_cast<double>(walk::avoided_set(prof).size());
      replica_csv[static_cast<std::size_t>(r)] = avoided_csv(dom, prof);
    }
  });
  for (long long r = 0; r < cfg.replicas; ++r) {
    const std::string name = artifact_name(cfg, r, "csv");
    io::write_text(replica_csv[static_cast<std::size_t>(r)], dir / name);
    files.push_back(name);
  }

  const double exact = avoided_first_moment(green, kernel, params) * params.hatK_N;
  stats::SampleSet set{counts, rng::stream_tag(cfg.master_seed, rng::Purpose::kWalk, 0)};
  const auto ci = stats::mean_ci(set, 0.997);
  const double sigma = std::sqrt(stats::variance(counts) / counts.size());
  std::vector<VerdictRow> rows;
  rows.push_back({"avoided-mean-vs-exact", "mc_mean", ci.mean, exact, sigma,
                  std::fabs(ci.mean - exact) <= 3.0 * sigma});
  write_verdicts(rows, dir);
  files.push_back("verdict.csv");
  return all_pass(rows) ? 0 : 1;
}

int cmd_light_points(const RunConfig& cfg, const std::filesystem::path& dir,
                     std::vector<std::string>& files) {
  if (!cfg.theta) throw ConfigError("light-points: theta required");
  const lattice::WiredDomain dom = wired_from_config(cfg);
  const auto params = params_from_config(cfg);
  std::vector<walk::LocalTimeProfile> profiles(static_cast<std::size_t>(cfg.replicas));
  const int workers = thread_count(cfg.threads);
  constexpr long long kChunk = 64;
  const int nchunks = static_cast<int>((cfg.replicas + kChunk - 1) / kChunk);
  parallel_for_index(nchunks, workers, [&](int chunk) {
    walk::Walker walker(dom);
    const long long lo = static_cast<long long>(chunk) * kChunk;
    const long long hi = std::min(cfg.replicas, lo + kChunk);
    for (long long r = lo; r < hi; ++r) {
      rng::Stream stream(cfg.master_seed, rng::Purpose::kWalk,
                         static_cast<std::uint64_t>(r));
      profiles[static_cast<std::size_t>(r)] = walker.sample_local_time(
          params.t_N, walk::HoldingMode::kExponentialHolding, stream);
    }
  });
  const auto hist = light_point_histogram(profiles, dom, params, cfg.b);
  io::CsvWriter csv({"bin_lo", "bin_hi", "empirical", "mu_target"});
  csv.add_row({"0", "0", io::format_double(hist.atom_empirical), "1"});
  for (std::size_t k = 0; k < hist.bin_lo.size(); ++k)
    csv.add_row({io::format_double(hist.bin_lo[k]), io::format_double(hist.bin_hi[k]),
                 io::format_double(hist.empirical[k]),
                 io::format_double(hist.mu_target[k])});
  const std::string name = artifact_name(cfg, 0, "csv");
  csv.write(dir / name);
  files.push_back(name);

  io::CsvWriter rep({"quantity", "value"});
  rep.add_row({"atom_ratio", io::format_double(hist.atom_ratio)});
  rep.add_row({"fitted_c", io::format_double(hist.fitted_c)});
  rep.add_row({"eta_conversion", io::format_double(hist.eta_conversion)});
  const std::string rname = cfg.command + "_" + std::to_string(scale_N(cfg)) + "_" +
                            std::to_string(cfg.master_seed) + "_report.csv";
  rep.write(dir / rname);
  files.push_back(rname);
  return 0;
}

int cmd_verify_isomorphism(const RunConfig& cfg, const std::filesystem::path& dir,
                           std::vector<std::string>& files) {
  const lattice::WiredDomain dom = wired_from_config(cfg);
  const green::GreenOperator green(dom);
  std::vector<VerdictRow> rows;

  // Deterministic small test function.
  rng::Stream fstream(cfg.master_seed, rng::Purpose::kProbe, 0);
  Eigen::VectorXd f(dom.n());
  for (int i = 0; i < dom.n(); ++i) f[i] = 0.1 * (2.0 * fstream.next_unit() - 1.0);

  // Kac moments n = 1..3 against MC excursions.
  const long long excursions = std::max<long long>(cfg.replicas, 100000);
  const auto samples =
      isomorphism::excursion_functional_samples(dom, f, excursions, cfg.master_seed,
                                                cfg.threads);
  for (int n = 1; n <= 3; ++n) {
    const double exact = isomorphism::kac_moment(green, f, n);
    std::vector<double> powers(samples.values.size());
    for (std::size_t i = 0; i < samples.values.size(); ++i)
      powers[i] = std::pow(samples.values[i], n);
    const double mc = stats::mean(powers);
    const double sigma = std::sqrt(stats::variance(powers) / powers.size());
    rows.push_back({"kac-n" + std::to_string(n), "mc_mean", mc, exact, sigma,
                    std::fabs(mc - exact) <= 3.0 * sigma});
  }

  // Exponential moment: operator formula vs MC over L_t replicas.
  {
    const double t = cfg.t;
    const double exact = std::exp(isomorphism::exp_moment(green, f, t));
    const long long reps = std::max<long long>(cfg.replicas, 20000);
    std::vector<double> vals(static_cast<std::size_t>(reps));
    walk::Walker walker(dom);
    for (long long r = 0; r < reps; ++r) {
      rng::Stream stream(cfg.master_seed, rng::Purpose::kHolding,
                         static_cast<std::uint64_t>(r));
      const auto prof =
          walker.sample_local_time(t, walk::HoldingMode::kExponentialHolding, stream);
      double dot = 0.0;
      for (int i = 0; i < dom.n(); ++i) dot += f[i] * prof.L[i];
      vals[static_cast<std::size_t>(r)] = std::exp(dot);
    }
    const double mc = stats::mean(vals);
    const double sigma = std::sqrt(stats::variance(vals) / vals.size());
    rows.push_back({"exp-moment", "mc_mean", mc, exact, sigma,
                    std::fabs(mc - exact) <= 4.0 * sigma});
  }

  // Ray-Knight: moments and KS per probe, Bonferroni across probes.
  {
    rng::Stream pstream(cfg.master_seed, rng::Purpose::kProbe, 1);
    std::vector<Eigen::VectorXd> probes(3, Eigen::VectorXd::Zero(dom.n()));
    for (auto& p : probes)
      for (int i = 0; i < dom.n(); ++i) p[i] = pstream.next_unit();
    const long long reps = std::max<long long>(cfg.replicas, 20000);
    const auto ds = isomorphism::ray_knight_datasets(dom, green, cfg.t, reps, probes,
                                                     cfg.master_seed, cfg.threads);
    const double p_threshold = 0.01 / static_cast<double>(probes.size());
    for (std::size_t p = 0; p < probes.size(); ++p) {
      const auto& A = ds.walk_side[p].values;
      const auto& B = ds.field_side[p].values;
      const double dmean = stats::mean(A) - stats::mean(B);
      const double sig =
          std::sqrt(stats::variance(A) / A.size() + stats::variance(B) / B.size());
      rows.push_back({"ray-knight-mean-p" + std::to_string(p), "mean_gap", dmean, 0.0,
                      sig, std::fabs(dmean) <= 4.0 * sig});
      const auto ks = stats::ks_two_sample(ds.walk_side[p], ds.field_side[p]);
      rows.push_back({"ray-knight-ks-p" + std::to_string(p), "p_value", ks.p_value,
                      p_threshold, 0.0, ks.p_value > p_threshold});
    }
  }

  // CLT of the standardized profile.
  {
    Eigen::VectorXd probe = Eigen::VectorXd::Zero(dom.n());
    probe[dom.n() / 2] = 1.0;
    const double var = probe.dot(green.solve(probe));
    const auto sets = isomorphism::clt_datasets(dom, {64.0}, probe,
                                                std::max<long long>(cfg.replicas, 5000),
                                                cfg.master_seed, cfg.threads);
    const auto ks = stats::ks_against_normal(sets[0], 0.0, std::sqrt(var));
    rows.push_back({"clt-ks", "p_value", ks.p_value, 0.01, 0.0, ks.p_value > 0.01});
  }

  // Hitting identity pi(y) G(y,y) P^y(H_rho < H^_y) = 1.
  {
    const auto reports = isomorphism::hitting_identity(
        dom, green, {dom.n() / 2}, std::max<long long>(cfg.replicas, 100000),
        cfg.master_seed);
    for (const auto& r : reports)
      rows.push_back({"hitting-identity", "pi_g_p", r.pi_g_p, 1.0, r.sigma,
                      std::fabs(r.pi_g_p - 1.0) <= 4.0 * r.sigma});
  }

  write_verdicts(rows, dir);
  files.push_back("verdict.csv");
  return all_pass(rows) ? 0 : 1;
}

int cmd_cover_time(const RunConfig& cfg, const std::filesystem::path& dir,
                   std::vector<std::string>& files) {
  const lattice::WiredDomain dom = wired_from_config(cfg);
  std::vector<walk::CoverResult> results(static_cast<std::size_t>(cfg.replicas));
  const int workers = thread_count(cfg.threads);
  constexpr long long kChunk = 8;
  const int nchunks = static_cast<int>((cfg.replicas + kChunk - 1) / kChunk);
  parallel_for_index(nchunks, workers, [&](int chunk) {
    walk::Walker walker(dom);
    const long long lo = static_cast<long long>(chunk) * kChunk;
    const long long hi = std::min(cfg.replicas, lo + kChunk);
    for (long long r = lo; r < hi; ++r) {
      rng::Stream stream(cfg.master_seed, rng::Purpose::kCover,
                         static_cast<std::uint64_t>(r));
      results[static_cast<std::size_t>(r)] = walker.cover_time(stream);
    }
  });
  io::CsvWriter csv({"replica", "t_cover", "natural_steps", "excursions"});
  std::vector<double> ratios;
  const double denom =
      std::sqrt(2.0 * potential::kG) * std::log(static_cast<double>(scale_N(cfg)));
  for (long long r = 0; r < cfg.replicas; ++r) {
    const auto& res = results[static_cast<std::size_t>(r)];
    csv.add_row({std::to_string(r), io::format_double(res.t_cover),
                 std::to_string(res.natural_steps), std::to_string(res.excursions)});
    ratios.push_back(std::sqrt(res.t_cover) / denom);
  }
  const std::string name = artifact_name(cfg, 0, "csv");
  csv.write(dir / name);
  files.push_back(name);
  std::sort(ratios.begin(), ratios.end());
  const double median = ratios[ratios.size() / 2];
  io::CsvWriter rep({"quantity", "value"});
  rep.add_row({"median_sqrt_tcover_over_sqrt2g_logN", io::format_double(median)});
  const std::string rname = cfg.command + "_" + std::to_string(scale_N(cfg)) + "_" +
                            std::to_string(cfg.master_seed) + "_report.csv";
  rep.write(dir / rname);
  files.push_back(rname);
  return 0;
}

}  // namespace

RunConfig parse_args(const std::vector<std::string>& args) {
  RunConfig cfg;
  std::size_t i = 0;
  if (!args.empty() && args[0].rfind("--", 0) != 0) {
    cfg.command = args[0];
    cfg.echo["command"] = args[0];
    i = 1;
  }
  // Collect file config first, then overrides in order.
  std::vector<std::pair<std::string, std::string>> overrides;
  for (; i < args.size(); ++i) {
    if (args[i].rfind("--", 0) != 0)
      throw ConfigError("config: expected --key, got '" + args[i] + "'");
    const std::string key = args[i].substr(2);
    if (i + 1 >= args.size()) throw ConfigError("config: key '" + key + "' needs a value");
    const std::string value = args[++i];
    if (key == "config")
      load_config_file(cfg, value);
    else
      overrides.emplace_back(key, value);
  }
  for (const auto& [k, v] : overrides) apply_key(cfg, k, v);
  if (cfg.command.empty()) throw ConfigError("config: no command given");
  if (std::find(kCommands.begin(), kCommands.end(), cfg.command) == kCommands.end())
    throw ConfigError("config: unknown command '" + cfg.command + "'");
  return cfg;
}

lattice::ContinuumDomain domain_from_config(const RunConfig& cfg) {
  if (cfg.domain == "square") return lattice::ContinuumDomain::rectangle(0, 0, 1, 1);
  if (cfg.domain == "disc")
    return lattice::ContinuumDomain::disc(cfg.cx, cfg.cy, cfg.radius);
  if (cfg.domain == "rectangle")
    return lattice::ContinuumDomain::rectangle(cfg.x0, cfg.y0, cfg.x1, cfg.y1);
  if (cfg.domain == "polygon") {
    std::vector<std::array<double, 2>> verts;
    std::stringstream ss(cfg.vertices);
    std::string pair;
    while (std::getline(ss, pair, ';')) {
      const auto comma = pair.find(',');
      if (comma == std::string::npos)
        throw ConfigError("config: vertices must be 'x,y;x,y;...'");
      verts.push_back({std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1))});
    }
    return lattice::ContinuumDomain::polygon(std::move(verts));
  }
  throw ConfigError("config: unknown domain '" + cfg.domain + "'");
}

lattice::WiredDomain wired_from_config(const RunConfig& cfg) {
  if (cfg.domain == "square") return lattice::square_domain(cfg.size);
  return lattice::discretize(domain_from_config(cfg), cfg.N);
}

int scale_N(const RunConfig& cfg) { return cfg.domain == "square" ? cfg.size : cfg.N; }

int run_experiment(const RunConfig& cfg) {
  const auto start = Clock::now();
  const std::filesystem::path dir(cfg.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output_dir '" + cfg.output_dir + "'");
  std::vector<std::string> files;
  int code = 0;
  if (cfg.command == "report-constants") code = cmd_report_constants(cfg, dir, files);
  else if (cfg.command == "green-check") code = cmd_green_check(cfg, dir, files);
  else if (cfg.command == "sample-dgff") code = cmd_sample_dgff(cfg, dir, files);
  else if (cfg.command == "thick-points") code = cmd_thick_points(cfg, dir, files);
  else if (cfg.command == "run-walk") code = cmd_run_walk(cfg, dir, files);
  else if (cfg.command == "avoided-points") code = cmd_avoided_points(cfg, dir, files);
  else if (cfg.command == "light-points") code = cmd_light_points(cfg, dir, files);
  else if (cfg.command == "verify-isomorphism")
    code = cmd_verify_isomorphism(cfg, dir, files);
  else if (cfg.command == "cover-time") code = cmd_cover_time(cfg, dir, files);
  else throw ConfigError("unknown command '" + cfg.command + "'");
  write_manifest(cfg, dir, start, files);
  return code;
}

}  // namespace gfflab::cli
