#pragma once

#include <string>
#include <vector>

namespace gfflab::stats {

struct SampleSet {
  std::vector<double> values;
  std::string stream_tag;
};

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

struct MeanCi {
  double mean = 0.0;
  double halfwidth = 0.0;
};

// Standard normal helpers.
double normal_cdf(double x);
double normal_upper_tail(double x);  // Q(x) = P(Z >= x)
double normal_quantile(double p);

// Asymptotic Kolmogorov tail Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2),
// series truncated at 100 terms or term < 1e-10.
double kolmogorov_q(double lambda);

// Two-sample Kolmogorov-Smirnov with asymptotic p-value. Requires >= 25
// samples on each side.
KsResult ks_two_sample(const SampleSet& a, const SampleSet& b);

// One-sample KS against Normal(mean, stddev^2), asymptotic p-value.
KsResult ks_against_normal(const SampleSet& a, double mean, double stddev);

// Sample mean with normal-approximation CI halfwidth at the given level.
MeanCi mean_ci(const SampleSet& a, double level);

double mean(const std::vector<double>& v);
double variance(const std::vector<double>& v);  // unbiased
double skewness(const std::vector<double>& v);

}  // namespace gfflab::stats
