#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "gfflab/green.hpp"
#include "gfflab/lattice.hpp"
#include "gfflab/stats.hpp"
#include "gfflab/walk.hpp"

namespace gfflab::isomorphism {

// Test function over sites; f(rho) = 0 implicitly.
using TestFunction = Eigen::VectorXd;

// Kac moment formula: E^rho <l_1, f>^n = n! / pi(rho) * <f, (G M_f)^{n-1} 1>,
// evaluated by repeated matrix-vector application.
double kac_moment(const green::GreenOperator& green, const TestFunction& f, int n);

// Spectral radius of G M_f by power iteration (tol 1e-8, 1e4 iterations).
double spectral_radius_gmf(const green::GreenOperator& green, const TestFunction& f);

// log E^rho exp<L_t, f> = t <f, (1 - G M_f)^{-1} 1>, via the equivalent
// symmetric solve (A - M_f) y = A 1. Throws ContractionViolated when the
// spectral radius of G M_f reaches 1.
double exp_moment(const green::GreenOperator& green, const TestFunction& f, double t);

// MC estimate of E^rho <l_1, f>^n over independent excursions.
stats::SampleSet excursion_functional_samples(const lattice::WiredDomain& domain,
                                              const TestFunction& f, long long excursions,
                                              std::uint64_t master_seed, int threads = 0);

struct RayKnightDatasets {
  // One entry per probe: samples of <probe, L_t + h^2/2> and
  // <probe, (h~ + sqrt(2t))^2 / 2>.
  std::vector<stats::SampleSet> walk_side;
  std::vector<stats::SampleSet> field_side;
};

// Both sides of the second Ray-Knight identity sampled independently (the
// coupling is not constructed; only the equality in law is testable).
RayKnightDatasets ray_knight_datasets(const lattice::WiredDomain& domain,
                                      const green::GreenOperator& green, double t,
                                      long long replicas,
                                      const std::vector<TestFunction>& probes,
                                      std::uint64_t master_seed, int threads = 0);

// Samples of <probe, (L_t - t)/sqrt(2t)> for each t; the target law is
// Normal(0, <probe, G probe>).
std::vector<stats::SampleSet> clt_datasets(const lattice::WiredDomain& domain,
                                           const std::vector<double>& t_list,
                                           const TestFunction& probe, long long replicas,
                                           std::uint64_t master_seed, int threads = 0);

struct HittingReport {
  int site = -1;
  double p_hat = 0.0;       // MC estimate of P^y(H_rho < H^_y)
  double pi_g_p = 0.0;      // pi(y) G(y,y) p_hat, should be 1
  double sigma = 0.0;       // standard error of pi_g_p
};

// Verifies pi(y) G(y,y) = 1 / P^y(H_rho < H^_y) by MC restarts from y.
std::vector<HittingReport> hitting_identity(const lattice::WiredDomain& domain,
                                            const green::GreenOperator& green,
                                            const std::vector<int>& sites,
                                            long long trials, std::uint64_t master_seed);

// MC estimate of pi(rho) P^rho(H_y < H^_rho) for the reversibility check.
double rho_hit_probability(const lattice::WiredDomain& domain, int y, long long trials,
                           std::uint64_t master_seed);

}  // namespace gfflab::isomorphism
