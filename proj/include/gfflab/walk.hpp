#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gfflab/lattice.hpp"
#include "gfflab/rng.hpp"

namespace gfflab::walk {

// Visit counts of one excursion from rho back to rho; only touched sites are
// listed.
struct ExcursionRecord {
  std::vector<std::pair<int, long long>> visits;  // (site index, count)
  long long steps = 0;
};

enum class HoldingMode {
  kExponentialHolding,  // L(x) = Gamma(visits(x), 1) / pi(x)
  kVisitCount,          // L(x) = visits(x) / pi(x); exploratory runs only
};

// Local time profile in the rho-parametrization: L(rho) = t by construction.
struct LocalTimeProfile {
  double t = 0.0;
  std::vector<double> L;
  std::vector<long long> visits;
  long long n_excursions = 0;
};

struct CoverResult {
  double t_cover = 0.0;
  long long natural_steps = 0;
  long long excursions = 0;
};

// Discrete SRW on the wired graph with reusable per-instance scratch; one
// Walker per thread when running replicas in parallel.
class Walker {
 public:
  explicit Walker(const lattice::WiredDomain& domain,
                  long long step_guard = 10'000'000'000LL);

  const lattice::WiredDomain& domain() const { return *domain_; }

  // From rho: enter through a uniformly chosen boundary edge, walk until rho
  // is hit again. Throws StepLimitExceeded past the guard (defect signal,
  // not a valid outcome).
  ExcursionRecord run_excursion(rng::Stream& stream);

  // N_t ~ Poisson(pi(rho) t) excursions accumulated into one profile.
  LocalTimeProfile sample_local_time(double t, HoldingMode mode, rng::Stream& stream);

  // Excursions until every site is visited; t_cover is the rho-local time
  // through the holding increment that precedes the covering excursion.
  CoverResult cover_time(rng::Stream& stream);

 private:
  // Runs one excursion accumulating into counts_; returns steps taken.
  long long excursion_into_counts(rng::Stream& stream);

  const lattice::WiredDomain* domain_;
  long long step_guard_;
  std::vector<int> entry_site_;          // slot -> site
  std::vector<long long> counts_;
  std::vector<int> touched_;
};

// {x : visits(x) = 0}, in canonical site order.
std::vector<int> avoided_set(const LocalTimeProfile& profile);

// Lemma-4.1 exact avoidance probabilities exp(-t/G(x,x)) per site.
std::vector<double> avoidance_prob_exact(const Eigen::VectorXd& green_diag, double t);

// Lemma-4.3 upper bound for P(L_t(x) <= b).
double light_tail_bound(double green_diag, double t, double b);

}  // namespace gfflab::walk
