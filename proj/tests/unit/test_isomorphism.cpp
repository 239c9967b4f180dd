#include <doctest.h>

#include <cmath>

#include "gfflab/errors.hpp"
#include "gfflab/green.hpp"
#include "gfflab/isomorphism.hpp"
#include "gfflab/lattice.hpp"
#include "gfflab/stats.hpp"
#include "gfflab/walk.hpp"

using namespace gfflab;

TEST_CASE("Kac n=1 reduces to <f,1>/pi(rho)") {
  const auto d = lattice::square_domain(4);
  const green::GreenOperator g(d);
  Eigen::VectorXd f(d.n());
  rng::Stream s(1, rng::Purpose::kProbe, 0);
  double sum = 0.0;
  for (int i = 0; i < d.n(); ++i) {
    f[i] = s.next_normal();
    sum += f[i];
  }
  CHECK(isomorphism::kac_moment(g, f, 1) == doctest::Approx(sum / d.pi_rho).epsilon(1e-12));
}

TEST_CASE("Kac n=2 on the single site: 2 s^2 G / pi(rho) = s^2/8") {
  const auto d = lattice::from_sites({{0, 0}}, 4);
  const green::GreenOperator g(d);
  for (const double sval : {0.5, 1.0, 2.0}) {
    Eigen::VectorXd f(1);
    f[0] = sval;
    CHECK(isomorphism::kac_moment(g, f, 2) ==
          doctest::Approx(sval * sval / 8.0).epsilon(1e-12));
  }
}

TEST_CASE("Kac moments match excursion MC on a 3x3 box for n = 1..3") {
  const auto d = lattice::square_domain(3);
  const green::GreenOperator g(d);
  rng::Stream fs(2, rng::Purpose::kProbe, 0);
  Eigen::VectorXd f(d.n());
  for (int i = 0; i < d.n(); ++i) f[i] = 0.5 * (2.0 * fs.next_unit() - 1.0);
  const auto samples = isomorphism::excursion_functional_samples(d, f, 200000, 77);
  for (int n = 1; n <= 3; ++n) {
    const double exact = isomorphism::kac_moment(g, f, n);
    std::vector<double> powers(samples.values.size());
    for (std::size_t i = 0; i < powers.size(); ++i)
      powers[i] = std::pow(samples.values[i], n);
    const double mc = stats::mean(powers);
    const double se = std::sqrt(stats::variance(powers) / powers.size());
    CHECK(std::fabs(mc - exact) <= 3.5 * se);
  }
}

TEST_CASE("exponential moment closed form on the single site") {
  const auto d = lattice::from_sites({{0, 0}}, 4);
  const green::GreenOperator g(d);
  Eigen::VectorXd f(1);
  f[0] = 1.0;
  const double t = 1.0;
  CHECK(isomorphism::exp_moment(g, f, t) ==
        doctest::Approx(t * 1.0 / (1.0 - 0.25)).epsilon(1e-12));
  // Linearity in t.
  CHECK(isomorphism::exp_moment(g, f, 2 * t) ==
        doctest::Approx(2 * isomorphism::exp_moment(g, f, t)).epsilon(1e-12));
  // f = 0 gives 0.
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
  CHECK(isomorphism::exp_moment(g, zero, 3.0) == doctest::Approx(0.0));
  // Contraction bound: spectral radius f G = f/4 >= 1 for f >= 4.
  Eigen::VectorXd big(1);
  big[0] = 4.2;
  CHECK_THROWS_AS(isomorphism::exp_moment(g, big, 1.0), ContractionViolated);
  CHECK(isomorphism::spectral_radius_gmf(g, f) == doctest::Approx(0.25).epsilon(1e-7));
}

TEST_CASE("exponential moment matches compound-Poisson MC on the single site") {
  const auto d = lattice::from_sites({{0, 0}}, 4);
  const green::GreenOperator g(d);
  Eigen::VectorXd f(1);
  f[0] = 1.0;
  const double t = 1.0;
  const double target = std::exp(isomorphism::exp_moment(g, f, t));  // e^{4/3}
  CHECK(target == doctest::Approx(std::exp(4.0 / 3.0)).epsilon(1e-12));
  walk::Walker walker(d);
  rng::Stream s(3, rng::Purpose::kWalk, 0);
  const int reps = 200000;
  std::vector<double> vals(reps);
  for (int r = 0; r < reps; ++r) {
    const auto prof =
        walker.sample_local_time(t, walk::HoldingMode::kExponentialHolding, s);
    vals[r] = std::exp(prof.L[0]);
  }
  const double mc = stats::mean(vals);
  const double se = std::sqrt(stats::variance(vals) / reps);
  CHECK(std::fabs(mc - target) <= 4.0 * se);
}

TEST_CASE("exp_moment on a 4x4 box against local-time MC") {
  const auto d = lattice::square_domain(4);
  const green::GreenOperator g(d);
  rng::Stream fs(4, rng::Purpose::kProbe, 0);
  Eigen::VectorXd f(d.n());
  for (int i = 0; i < d.n(); ++i) f[i] = 0.08 * (2.0 * fs.next_unit() - 1.0);
  const double t = 2.0;
  const double target = std::exp(isomorphism::exp_moment(g, f, t));
  walk::Walker walker(d);
  rng::Stream s(5, rng::Purpose::kWalk, 0);
  const int reps = 100000;
  std::vector<double> vals(reps);
  for (int r = 0; r < reps; ++r) {
    const auto prof =
        walker.sample_local_time(t, walk::HoldingMode::kExponentialHolding, s);
    double dot = 0.0;
    for (int i = 0; i < d.n(); ++i) dot += f[i] * prof.L[i];
    vals[r] = std::exp(dot);
  }
  const double mc = stats::mean(vals);
  const double se = std::sqrt(stats::variance(vals) / reps);
  CHECK(std::fabs(mc - target) <= 4.0 * se);
}

TEST_CASE("Ray-Knight datasets: single-site means, variances, KS") {
  const auto d = lattice::from_sites({{0, 0}}, 4);
  const green::GreenOperator g(d);
  Eigen::VectorXd probe(1);
  probe[0] = 1.0;
  const double t = 1.0;
  const auto ds = isomorphism::ray_knight_datasets(d, g, t, 30000, {probe}, 6);
  const auto& A = ds.walk_side[0].values;
  const auto& B = ds.field_side[0].values;
  // E[A] = E[B] = t + G/2.
  const double target = t + 0.125;
  const double seA = std::sqrt(stats::variance(A) / A.size());
  const double seB = std::sqrt(stats::variance(B) / B.size());
  CHECK(std::fabs(stats::mean(A) - target) <= 4.0 * seA);
  CHECK(std::fabs(stats::mean(B) - target) <= 4.0 * seB);
  const double varGap = stats::variance(A) - stats::variance(B);
  CHECK(std::fabs(varGap) <=
        4.0 * std::sqrt(2.0) * (stats::variance(A) + stats::variance(B)) /
            std::sqrt(double(A.size())));
  CHECK(stats::ks_two_sample(ds.walk_side[0], ds.field_side[0]).p_value > 0.005);
}

TEST_CASE("CLT datasets: variance target and normal KS at large t") {
  const auto d = lattice::from_sites({{0, 0}}, 4);
  Eigen::VectorXd probe(1);
  probe[0] = 1.0;
  const auto sets = isomorphism::clt_datasets(d, {4.0, 16.0, 64.0}, probe, 10000, 7);
  // Variance -> <f, G f> = 1/4 and skewness decreasing in t.
  const double v = stats::variance(sets[2].values);
  CHECK(std::fabs(v - 0.25) <= 4.0 * 0.25 * std::sqrt(2.0 / 9999.0));
  CHECK(stats::ks_against_normal(sets[2], 0.0, 0.5).p_value > 0.01);
  const double sk4 = std::fabs(stats::skewness(sets[0].values));
  const double sk64 = std::fabs(stats::skewness(sets[2].values));
  CHECK(sk64 < sk4);
}

TEST_CASE("hitting identity: exact on the single site, MC elsewhere") {
  const auto single = lattice::from_sites({{0, 0}}, 4);
  const green::GreenOperator gs(single);
  const auto rep = isomorphism::hitting_identity(single, gs, {0}, 2000, 8);
  CHECK(rep[0].p_hat == doctest::Approx(1.0));
  CHECK(rep[0].pi_g_p == doctest::Approx(1.0));

  const auto d = lattice::square_domain(9);
  const green::GreenOperator g(d);
  const std::vector<int> sites = {d.index_of(5, 5), d.index_of(2, 3), d.index_of(8, 1)};
  const auto reports = isomorphism::hitting_identity(d, g, sites, 100000, 9);
  for (const auto& r : reports) CHECK(std::fabs(r.pi_g_p - 1.0) <= 4.0 * r.sigma);
}

TEST_CASE("reversibility: pi(rho) P^rho(H_y < H^_rho) = pi(y) P^y(H_rho < H^_y)") {
  const auto d = lattice::square_domain(5);
  const green::GreenOperator g(d);
  const int y = d.index_of(3, 3);
  const long long trials = 200000;
  const double lhs = isomorphism::rho_hit_probability(d, y, trials, 10);
  const auto rep = isomorphism::hitting_identity(d, g, {y}, trials, 10);
  const double rhs = 4.0 * rep[0].p_hat;
  // Joint 4-sigma band from both binomial errors.
  const double p1 = lhs / d.pi_rho, p2 = rep[0].p_hat;
  const double se = std::sqrt(d.pi_rho * d.pi_rho * p1 * (1 - p1) / trials +
                              16.0 * p2 * (1 - p2) / trials);
  CHECK(std::fabs(lhs - rhs) <= 4.0 * se);
}
