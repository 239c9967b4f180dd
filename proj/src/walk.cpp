#include "gfflab/walk.hpp"

#include <cmath>

#include "gfflab/errors.hpp"

namespace gfflab::walk {

Walker::Walker(const lattice::WiredDomain& domain, long long step_guard)
    : domain_(&domain), step_guard_(step_guard) {
  entry_site_.reserve(domain.pi_rho);
  for (int i = 0; i < domain.n(); ++i)
    for (int c = 0; c < domain.boundary_edge_count[i]; ++c) entry_site_.push_back(i);
  counts_.assign(domain.n(), 0);
}

long long Walker::excursion_into_counts(rng::Stream& stream) {
  const auto& dom = *domain_;
  int site = entry_site_[stream.next_below(static_cast<std::uint32_t>(entry_site_.size()))];
  long long steps = 1;  // the entry jump
  while (true) {
    if (counts_[site] == 0) touched_.push_back(site);
    ++counts_[site];
    const int dir = static_cast<int>(stream.next_below(4));
    const int next = dom.neighbors[site][dir];
    ++steps;
    if (next < 0) return steps;  // jumped to rho
    site = next;
    if (steps > step_guard_)
      throw StepLimitExceeded("excursion exceeded step guard of " +
                              std::to_string(step_guard_));
  }
}

ExcursionRecord Walker::run_excursion(rng::Stream& stream) {
  touched_.clear();
  ExcursionRecord rec;
  rec.steps = excursion_into_counts(stream);
  rec.visits.reserve(touched_.size());
  for (int s : touched_) {
    rec.visits.emplace_back(s, counts_[s]);
    counts_[s] = 0;
  }
  touched_.clear();
  return rec;
}

LocalTimeProfile Walker::sample_local_time(double t, HoldingMode mode,
                                           rng::Stream& stream) {
  if (t < 0.0) throw BadParameterRange("sample_local_time: t must be >= 0");
  const auto& dom = *domain_;
  LocalTimeProfile prof;
  prof.t = t;
  prof.visits.assign(dom.n(), 0);
  prof.L.assign(dom.n(), 0.0);

  // Number of completed excursions by rho-local-time t: accumulate the
  // Exp(1)/pi(rho) holding increments at rho (Poisson(pi(rho) t) in law).
  const double budget = dom.pi_rho * t;
  long long n_exc = 0;
  double held = stream.next_exp();
  while (held <= budget) {
    ++n_exc;
    held += stream.next_exp();
  }
  prof.n_excursions = n_exc;

  touched_.clear();
  for (long long e = 0; e < n_exc; ++e) excursion_into_counts(stream);
  for (int s : touched_) {
    prof.visits[s] = counts_[s];
    counts_[s] = 0;
  }
  touched_.clear();

  // Holding times drawn in canonical site order for reproducibility.
  for (int s = 0; s < dom.n(); ++s) {
    if (prof.visits[s] == 0) continue;
    if (mode == HoldingMode::kExponentialHolding)
      prof.L[s] = stream.next_gamma_int(prof.visits[s]) / lattice::WiredDomain::pi_site;
    else
      prof.L[s] = static_cast<double>(prof.visits[s]) / lattice::WiredDomain::pi_site;
  }
  return prof;
}

CoverResult Walker::cover_time(rng::Stream& stream) {
  const auto& dom = *domain_;
  CoverResult res;
  int uncovered = dom.n();
  touched_.clear();
  while (uncovered > 0) {
    res.t_cover += stream.next_exp() / dom.pi_rho;
    const std::size_t touched_before = touched_.size();
    res.natural_steps += excursion_into_counts(stream);
    ++res.excursions;
    uncovered -= static_cast<int>(touched_.size() - touched_before);
  }
  for (int s : touched_) counts_[s] = 0;
  touched_.clear();
  return res;
}

std::vector<int> avoided_set(const LocalTimeProfile& profile) {
  std::vector<int> out;
  for (std::size_t i = 0; i < profile.visits.size(); ++i)
    if (profile.visits[i] == 0) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<double> avoidance_prob_exact(const Eigen::VectorXd& green_diag, double t) {
  if (t < 0.0) throw BadParameterRange("avoidance_prob_exact: t must be >= 0");
  std::vector<double> p(green_diag.size());
  for (Eigen::Index i = 0; i < green_diag.size(); ++i)
    p[i] = std::exp(-t / green_diag[i]);
  return p;
}

double light_tail_bound(double green_diag, double t, double b) {
  return std::exp(-(t / green_diag) * std::exp(-b / green_diag));
}

}  // namespace gfflab::walk
