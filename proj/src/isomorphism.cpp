#include "gfflab/isomorphism.hpp"

#include <cmath>

#include "gfflab/dgff.hpp"
#include "gfflab/errors.hpp"
#include "gfflab/parallel.hpp"

namespace gfflab::isomorphism {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Local-time functional <l_1, f> of one excursion with exponential holding.
double excursion_functional(const walk::ExcursionRecord& rec, const TestFunction& f,
                            rng::Stream& stream) {
  double acc = 0.0;
  for (const auto& [site, count] : rec.visits) {
    if (f[site] == 0.0) {
      // Holding times at sites outside the support do not enter the
      // functional; skipping them keeps the draw count small. Law is
      // unaffected (independent holdings).
      continue;
    }
    acc += f[site] * stream.next_gamma_int(count) / lattice::WiredDomain::pi_site;
  }
  return acc;
}

}  // namespace

double kac_moment(const green::GreenOperator& green, const TestFunction& f, int n) {
  if (n < 1) throw BadParameterRange("kac_moment: n must be >= 1");
  if (f.size() != green.n()) throw KindMismatch("kac_moment: f length mismatch");
  Eigen::VectorXd v = Eigen::VectorXd::Ones(green.n());
  for (int k = 1; k < n; ++k) v = green.solve((f.array() * v.array()).matrix());
  return factorial(n) / green.domain().pi_rho * f.dot(v);
}

double spectral_radius_gmf(const green::GreenOperator& green, const TestFunction& f) {
  const int n = green.n();
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));
  double lambda = 0.0;
  for (int it = 0; it < 10000; ++it) {
    Eigen::VectorXd y = green.solve((f.array() * x.array()).matrix());
    const double norm = y.norm();
    if (norm == 0.0) return 0.0;
    y /= norm;
    const Eigen::VectorXd z = green.solve((f.array() * y.array()).matrix());
    const double next = std::fabs(y.dot(z));
    if (std::fabs(next - lambda) < 1e-8 * std::max(1.0, next)) return next;
    lambda = next;
    x = y;
  }
  return lambda;
}

double exp_moment(const green::GreenOperator& green, const TestFunction& f, double t) {
  if (f.size() != green.n()) throw KindMismatch("exp_moment: f length mismatch");
  const double rho = spectral_radius_gmf(green, f);
  if (rho >= 1.0)
    throw ContractionViolated("exp_moment: spectral radius of G M_f is " +
                              std::to_string(rho) + " >= 1; shrink f");
  // (1 - G M_f)^{-1} 1 solves (A - M_f) y = A 1, and A 1 is the
  // boundary-edge-count vector.
  const auto& dom = green.domain();
  const int n = green.n();
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) b[i] = dom.boundary_edge_count[i];
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    M(i, i) = 4.0 - f[i];
    for (int k = 0; k < 4; ++k)
      if (dom.neighbors[i][k] >= 0) M(i, dom.neighbors[i][k]) = -1.0;
  }
  const Eigen::VectorXd y = M.partialPivLu().solve(b);
  return t * f.dot(y);
}

stats::SampleSet excursion_functional_samples(const lattice::WiredDomain& domain,
                                              const TestFunction& f, long long excursions,
                                              std::uint64_t master_seed, int threads) {
  stats::SampleSet out;
  out.values.resize(static_cast<std::size_t>(excursions));
  out.stream_tag = rng::stream_tag(master_seed, rng::Purpose::kWalk, 0);
  const int workers = thread_count(threads);
  constexpr long long kChunk = 4096;
  const int nchunks = static_cast<int>((excursions + kChunk - 1) / kChunk);
  parallel_for_index(nchunks, workers, [&](int chunk) {
    walk::Walker walker(domain);
    const long long lo = static_cast<long long>(chunk) * kChunk;
    const long long hi = std::min(excursions, lo + kChunk);
    for (long long r = lo; r < hi; ++r) {
      rng::Stream stream(master_seed, rng::Purpose::kWalk, static_cast<std::uint64_t>(r));
      const walk::ExcursionRecord rec = walker.run_excursion(stream);
      out.values[static_cast<std::size_t>(r)] = excursion_functional(rec, f, stream);
    }
  });
  return out;
}

RayKnightDatasets ray_knight_datasets(const lattice::WiredDomain& domain,
                                      const green::GreenOperator& green, double t,
                                      long long replicas,
                                      const std::vector<TestFunction>& probes,
                                      std::uint64_t master_seed, int threads) {
  RayKnightDatasets out;
  out.walk_side.resize(probes.size());
  out.field_side.resize(probes.size());
  for (std::size_t p = 0; p < probes.size(); ++p) {
    out.walk_side[p].values.resize(static_cast<std::size_t>(replicas));
    out.walk_side[p].stream_tag = rng::stream_tag(master_seed, rng::Purpose::kWalk, p);
    out.field_side[p].values.resize(static_cast<std::size_t>(replicas));
    out.field_side[p].stream_tag =
        rng::stream_tag(master_seed, rng::Purpose::kFieldTilde, p);
  }
  const double shift = std::sqrt(2.0 * t);
  const int workers = thread_count(threads);
  constexpr long long kChunk = 256;
  const int nchunks = static_cast<int>((replicas + kChunk - 1) / kChunk);
  parallel_for_index(nchunks, workers, [&](int chunk) {
    walk::Walker walker(domain);
    const long long lo = static_cast<long long>(chunk) * kChunk;
    const long long hi = std::min(replicas, lo + kChunk);
    for (long long r = lo; r < hi; ++r) {
      rng::Stream walk_stream(master_seed, rng::Purpose::kWalk,
                              static_cast<std::uint64_t>(r));
      rng::Stream field_stream(master_seed, rng::Purpose::kField,
                               static_cast<std::uint64_t>(r));
      rng::Stream tilde_stream(master_seed, rng::Purpose::kFieldTilde,
                               static_cast<std::uint64_t>(r));
      const walk::LocalTimeProfile prof = walker.sample_local_time(
          t, walk::HoldingMode::kExponentialHolding, walk_stream);
      const dgff::FieldSample h = dgff::sample_field(green, field_stream);
      const dgff::FieldSample ht = dgff::sample_field(green, tilde_stream);
      for (std::size_t p = 0; p < probes.size(); ++p) {
        double a = 0.0, b = 0.0;
        for (int i = 0; i < domain.n(); ++i) {
          if (probes[p][i] == 0.0) continue;
          a += probes[p][i] * (prof.L[i] + 0.5 * h.values[i] * h.values[i]);
          const double v = ht.values[i] + shift;
          b += probes[p][i] * 0.5 * v * v;
        }
        out.walk_side[p].values[static_cast<std::size_t>(r)] = a;
        out.field_side[p].values[static_cast<std::size_t>(r)] = b;
      }
    }
  });
  return out;
}

std::vector<stats::SampleSet> clt_datasets(const lattice::WiredDomain& domain,
                                           const std::vector<double>& t_list,
                                           const TestFunction& probe, long long replicas,
                                           std::uint64_t master_seed, int threads) {
  std::vector<stats::SampleSet> out(t_list.size());
  const int workers = thread_count(threads);
  for (std::size_t ti = 0; ti < t_list.size(); ++ti) {
    const double t = t_list[ti];
    out[ti].values.resize(static_cast<std::size_t>(replicas));
    out[ti].stream_tag = rng::stream_tag(master_seed + ti, rng::Purpose::kWalk, 0);
    constexpr long long kChunk = 256;
    const int nchunks = static_cast<int>((replicas + kChunk - 1) / kChunk);
    parallel_for_index(nchunks, workers, [&](int chunk) {
      walk::Walker walker(domain);
      const long long lo = static_cast<long long>(chunk) * kChunk;
      const long long hi = std::min(replicas, lo + kChunk);
      for (long long r = lo; r < hi; ++r) {
        rng::Stream stream(master_seed + ti, rng::Purpose::kWalk,
                           static_cast<std::uint64_t>(r));
        const walk::LocalTimeProfile prof = walker.sample_local_time(
            t, walk::HoldingMode::kExponentialHolding, stream);
        double acc = 0.0;
        for (int i = 0; i < domain.n(); ++i)
          if (probe[i] != 0.0) acc += probe[i] * (prof.L[i] - t);
        out[ti].values[static_cast<std::size_t>(r)] = acc / std::sqrt(2.0 * t);
      }
    });
  }
  return out;
}

std::vector<HittingReport> hitting_identity(const lattice::WiredDomain& domain,
                                            const green::GreenOperator& green,
                                            const std::vector<int>& sites,
                                            long long trials, std::uint64_t master_seed) {
  std::vector<HittingReport> reports;
  reports.reserve(sites.size());
  for (std::size_t si = 0; si < sites.size(); ++si) {
    const int y = sites[si];
    rng::Stream stream(master_seed, rng::Purpose::kHitting, si);
    long long hits_rho_first = 0;
    for (long long tr = 0; tr < trials; ++tr) {
      int site = y;
      while (true) {
        const int next = domain.neighbors[site][stream.next_below(4)];
        if (next < 0) {  // reached rho before returning to y
          ++hits_rho_first;
          break;
        }
        if (next == y) break;
        site = next;
      }
    }
    HittingReport rep;
    rep.site = y;
    rep.p_hat = static_cast<double>(hits_rho_first) / static_cast<double>(trials);
    const double pig = lattice::WiredDomain::pi_site * green.entry(y, y);
    rep.pi_g_p = pig * rep.p_hat;
    rep.sigma = pig * std::sqrt(rep.p_hat * (1.0 - rep.p_hat) / static_cast<double>(trials));
    reports.push_back(rep);
  }
  return reports;
}

double rho_hit_probability(const lattice::WiredDomain& domain, int y, long long trials,
                           std::uint64_t master_seed) {
  walk::Walker walker(domain);
  rng::Stream stream(master_seed, rng::Purpose::kHitting, 0x5eedULL);
  long long hits = 0;
  for (long long tr = 0; tr < trials; ++tr) {
    const walk::ExcursionRecord rec = walker.run_excursion(stream);
    for (const auto& [site, count] : rec.visits)
      if (site == y) {
        ++hits;
        break;
      }
  }
  return domain.pi_rho * static_cast<double>(hits) / static_cast<double>(trials);
}

}  // namespace gfflab::isomorphism
