#include <doctest.h>

#include <cmath>

#include "gfflab/dgff.hpp"
#include "gfflab/errors.hpp"
#include "gfflab/measures.hpp"
#include "gfflab/potential.hpp"
#include "gfflab/stats.hpp"
#include "gfflab/walk.hpp"

using namespace gfflab;
using measures::MeasureKind;

TEST_CASE("scale params reproduce the pinned arithmetic examples") {
  const auto p = measures::scale_params(100, 0.5, 0.3);
  const double logN = std::log(100.0);
  CHECK(p.K_N == doctest::Approx(std::pow(100.0, 1.5) / std::sqrt(logN)).epsilon(1e-12));
  CHECK(p.K_N == doctest::Approx(465.99).epsilon(1e-4));
  CHECK(p.hatK_N == doctest::Approx(std::pow(100.0, 1.4)).epsilon(1e-12));
  CHECK(p.hatK_N == doctest::Approx(630.96).epsilon(1e-4));
  CHECK(p.alpha == doctest::Approx(2.0 / std::sqrt(potential::kG)).epsilon(1e-14));

  const auto p512 = measures::scale_params(512, std::nullopt, 1.0);
  CHECK(p512.m_N == doctest::Approx(4.4297).epsilon(1e-4));
}

TEST_CASE("scale params closed-form invariants hold to 1e-12 relative") {
  for (const int N : {16, 100, 256}) {
    for (const double lambda : {0.1, 0.5, 0.9}) {
      const auto p = measures::scale_params(N, lambda, 0.4);
      const double logN = std::log(double(N));
      const double lhs = p.K_N * std::sqrt(logN) / (double(N) * N);
      CHECK(lhs == doctest::Approx(std::exp(-2.0 * lambda * lambda * logN)).epsilon(1e-12));
      CHECK(p.hatK_N ==
            doctest::Approx(std::pow(double(N), 2.0 * (1.0 - 0.4))).epsilon(1e-12));
      // Reproduce K_N from the stored fields.
      CHECK(p.K_N == doctest::Approx(double(N) * N *
                                     std::exp(-p.a_N * p.a_N / (2 * p.g * logN)) /
                                     std::sqrt(logN))
                         .epsilon(1e-12));
    }
  }
}

TEST_CASE("scale params reject bad ranges and honor overrides") {
  CHECK_THROWS_AS(measures::scale_params(3, 0.5, std::nullopt), BadParameterRange);
  CHECK_THROWS_AS(measures::scale_params(16, 1.2, std::nullopt), BadParameterRange);
  CHECK_THROWS_AS(measures::scale_params(16, std::nullopt, -0.5), BadParameterRange);
  CHECK_THROWS_AS(measures::scale_params(16, std::nullopt, std::nullopt),
                  BadParameterRange);
  measures::ScaleOverrides ov;
  ov.t_N = 3.0;
  const auto p = measures::scale_params(16, std::nullopt, 0.3, ov);
  CHECK(p.t_N == 3.0);
  CHECK(p.hatK_N ==
        doctest::Approx(256.0 * std::exp(-3.0 / (p.g * std::log(16.0)))).epsilon(1e-12));
}

TEST_CASE("point measures: kinds, weights, degenerate cases") {
  const auto d = lattice::square_domain(4);
  const green::GreenOperator g(d);
  const auto params = measures::scale_params(4, 0.3, 0.3);

  rng::Stream s(1, rng::Purpose::kField, 0);
  const auto field = dgff::sample_field(g, s);
  const auto thick = build_point_measure(field, d, params, MeasureKind::kThick);
  CHECK(thick.atoms.size() == 16);
  CHECK(thick.weight == doctest::Approx(1.0 / params.K_N));
  for (const auto& a : thick.atoms) {
    CHECK(a.x >= 0.0);
    CHECK(a.x <= 1.0);
  }
  // A huge a_N override empties the level set {value >= 0}.
  measures::ScaleOverrides ov;
  ov.a_N = 1e9;
  const auto far = measures::scale_params(4, 0.3, std::nullopt, ov);
  const auto thick_far = build_point_measure(field, d, far, MeasureKind::kThick);
  for (const auto& a : thick_far.atoms) CHECK(a.value < 0.0);

  walk::Walker walker(d);
  rng::Stream ws(2, rng::Purpose::kWalk, 0);
  const auto prof0 =
      walker.sample_local_time(0.0, walk::HoldingMode::kExponentialHolding, ws);
  const auto avoided = build_point_measure(prof0, d, params, MeasureKind::kAvoided);
  CHECK(avoided.atoms.size() == 16);
  CHECK(double(avoided.atoms.size()) * avoided.weight ==
        doctest::Approx(16.0 / params.hatK_N));

  const auto light = build_point_measure(prof0, d, params, MeasureKind::kLight, 1.0);
  CHECK(light.atoms.size() == 16);  // all zeros are light points

  CHECK_THROWS_AS(build_point_measure(field, d, params, MeasureKind::kAvoided),
                  KindMismatch);
  CHECK_THROWS_AS(build_point_measure(prof0, d, params, MeasureKind::kThick, 1.0),
                  KindMismatch);
}

TEST_CASE("thick first moment: lambda -> 0 edge via a_N = 0 override") {
  const auto cd = lattice::ContinuumDomain::disc(0, 0, 1);
  const auto d = lattice::discretize(cd, 16);
  const green::GreenOperator g(d);
  const potential::PotentialKernel kernel;
  measures::ScaleOverrides ov;
  ov.a_N = 0.0;
  const auto params = measures::scale_params(16, 0.3, std::nullopt, ov);
  const auto fm = thick_first_moment(g, kernel, params, cd);
  CHECK(fm.exact == doctest::Approx(d.n() / (2.0 * params.K_N)).epsilon(1e-12));
}

TEST_CASE("thick first moment b-shift tracks exp(-alpha lambda b) on the disc") {
  const auto cd = lattice::ContinuumDomain::disc(0, 0, 1);
  const auto d = lattice::discretize(cd, 64);
  const green::GreenOperator g(d);
  const potential::PotentialKernel kernel;
  const auto params = measures::scale_params(64, 0.3, std::nullopt);
  const auto fm0 = thick_first_moment(g, kernel, params, cd, 0.0);
  const auto fm1 = thick_first_moment(g, kernel, params, cd, 1.0);
  const double target = std::exp(-params.alpha * 0.3);
  CHECK(fm0.exact > 0.0);
  CHECK(fm1.exact / fm0.exact == doctest::Approx(target).epsilon(0.2));
  // The limit side carries the exact shift factor by construction.
  CHECK(fm1.limit / fm0.limit == doctest::Approx(target).epsilon(1e-9));
}

TEST_CASE("avoided first moment: single site and theta > 1 trend") {
  const auto d = lattice::from_sites({{0, 0}}, 4);
  const green::GreenOperator g(d);
  const potential::PotentialKernel kernel;
  measures::ScaleOverrides ov;
  ov.t_N = 1.0;
  auto params = measures::scale_params(4, std::nullopt, 0.3, ov);
  params.hatK_N = 1.0;  // spec's single-site normalization for this check
  CHECK(avoided_first_moment(g, kernel, params) ==
        doctest::Approx(std::exp(-4.0)).epsilon(1e-12));
}

TEST_CASE("mu measure: density, Laplace transforms, normalization limits") {
  for (const double theta : {0.1, 0.3}) {
    const measures::MuMeasure mu(theta);
    CHECK(mu.density(0.0) == doctest::Approx(4.0 * M_PI * theta).epsilon(1e-12));
    for (const double s : {0.5, 1.0, 2.0}) {
      CHECK(mu.laplace_series(s) == doctest::Approx(mu.laplace_closed(s)).epsilon(1e-12));
      CHECK(std::fabs(mu.laplace_quadrature(s) - mu.laplace_closed(s)) <= 1e-6);
    }
    // Atom-only limit as s -> infinity; blow-up as s -> 0+.
    CHECK(mu.laplace_closed(1e8) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(mu.laplace_closed(1e-4) > 1e10);
    // cdf is the atom plus a nonnegative integral, increasing in l.
    CHECK(mu.cdf(0.0) == 1.0);
    CHECK(mu.cdf(1.0) > 1.0);
    CHECK(mu.cdf(2.0) > mu.cdf(1.0));
  }
  CHECK(measures::MuMeasure(0.1).laplace_closed(1.0) ==
        doctest::Approx(3.5136).epsilon(1e-4));
  CHECK(measures::MuMeasure(0.1).density(0.0) == doctest::Approx(1.2566).epsilon(1e-4));
}

TEST_CASE("light point histogram: degenerate t=0 and small-value linearity") {
  const auto d = lattice::square_domain(16);
  walk::Walker walker(d);

  // t = 0: everything sits in the atom.
  std::vector<walk::LocalTimeProfile> zero_profiles;
  rng::Stream zs(3, rng::Purpose::kWalk, 0);
  zero_profiles.push_back(
      walker.sample_local_time(0.0, walk::HoldingMode::kExponentialHolding, zs));
  const auto params = measures::scale_params(16, std::nullopt, 0.3);
  const auto hz = light_point_histogram(zero_profiles, d, params, 1.0, 8);
  CHECK(hz.atom_empirical > 0.0);
  for (double e : hz.empirical) CHECK(e == 0.0);

  // theta = 0.3 run: mass of (0, eps] roughly linear in eps.
  std::vector<walk::LocalTimeProfile> profiles;
  rng::Stream s(4, rng::Purpose::kWalk, 0);
  for (int r = 0; r < 200; ++r)
    profiles.push_back(
        walker.sample_local_time(params.t_N, walk::HoldingMode::kExponentialHolding, s));
  const auto h = light_point_histogram(profiles, d, params, 1.0, 4);
  const double m1 = h.empirical[0];                    // (0, 1/4]
  const double m2 = h.empirical[0] + h.empirical[1];   // (0, 1/2]
  const double m4 = m2 + h.empirical[2] + h.empirical[3];  // (0, 1]
  CHECK(m1 > 0.0);
  CHECK(m2 / m1 == doctest::Approx(2.0).epsilon(0.75));
  CHECK(m4 / m2 == doctest::Approx(2.0).epsilon(0.75));
  CHECK(h.fitted_c > 0.0);
  CHECK(h.eta_conversion ==
        doctest::Approx(std::sqrt(std::log(16.0)) / params.hatK_N).epsilon(1e-12));
  // mu targets integrate the density over each bin.
  const measures::MuMeasure mu(0.3);
  CHECK(h.mu_target[0] == doctest::Approx(mu.cdf(0.25) - 1.0).epsilon(1e-6));
}
