#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "gfflab/dgff.hpp"
#include "gfflab/errors.hpp"
#include "gfflab/green.hpp"
#include "gfflab/lattice.hpp"
#include "gfflab/stats.hpp"

using namespace gfflab;

TEST_CASE("h_rho is identically zero") {
  const auto d = lattice::square_domain(4);
  const green::GreenOperator g(d);
  rng::Stream s(1, rng::Purpose::kField, 0);
  const auto f = dgff::sample_field(g, s);
  CHECK(f.rho_value == 0.0);
  CHECK(f.values.size() == 16);
}

TEST_CASE("single-site sampler: empirical variance near G = 1/4") {
  const auto d = lattice::from_sites({{0, 0}}, 4);
  const green::GreenOperator g(d);
  const int n = 100000;
  std::vector<double> draws(n);
  rng::Stream s(2, rng::Purpose::kField, 0);
  for (int i = 0; i < n; ++i) draws[i] = dgff::sample_field(g, s).values[0];
  const double v = stats::variance(draws);
  const double se = 0.25 * std::sqrt(2.0 / (n - 1.0));
  CHECK(std::fabs(v - 0.25) <= 4.0 * se);
  CHECK(std::fabs(stats::mean(draws)) <= 4.0 * 0.5 / std::sqrt(double(n)));
}

TEST_CASE("4x4 sampler: empirical covariance within 5 SE of G entrywise") {
  const auto d = lattice::square_domain(4);
  const green::GreenOperator g(d);
  const int n = d.n();
  const int reps = 50000;
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  rng::Stream s(3, rng::Purpose::kField, 0);
  for (int r = 0; r < reps; ++r) {
    const auto f = dgff::sample_field(g, s);
    Eigen::Map<const Eigen::VectorXd> h(f.values.data(), n);
    sum += h * h.transpose();
  }
  sum /= double(reps);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double gij = g.entry(i, j);
      const double se =
          std::sqrt((g.entry(i, i) * g.entry(j, j) + gij * gij) / double(reps));
      CHECK(std::fabs(sum(i, j) - gij) <= 5.0 * se);
    }
}

TEST_CASE("linear functionals of the field have variance <f, G f>") {
  const auto d = lattice::square_domain(8);
  const green::GreenOperator g(d);
  rng::Stream fs(4, rng::Purpose::kProbe, 0);
  Eigen::VectorXd f(d.n());
  for (int i = 0; i < d.n(); ++i) f[i] = 2.0 * fs.next_unit() - 1.0;
  const double target = f.dot(g.solve(f));
  const int reps = 100000;
  std::vector<double> vals(reps);
  rng::Stream s(4, rng::Purpose::kField, 0);
  for (int r = 0; r < reps; ++r) {
    const auto h = dgff::sample_field(g, s);
    double acc = 0.0;
    for (int i = 0; i < d.n(); ++i) acc += f[i] * h.values[i];
    vals[r] = acc;
  }
  const double v = stats::variance(vals);
  CHECK(std::fabs(v - target) <= 4.0 * target * std::sqrt(2.0 / (reps - 1.0)));
  const auto ks = stats::ks_against_normal({vals, ""}, 0.0, std::sqrt(target));
  CHECK(ks.p_value > 0.001);
}

// Exact matrix identities of the Gibbs-Markov split (no sampling): the
// binding operator is P = G_U E with E the off-U neighbor-sum map.
static void check_gm_exact(const lattice::WiredDomain& V, const lattice::WiredDomain& U,
                           double tol) {
  const green::GreenOperator gV(V);
  const green::GreenOperator gU(U);
  const int nU = U.n();
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(nU, V.n());
  for (int i = 0; i < nU; ++i)
    for (int k = 0; k < 4; ++k) {
      if (U.neighbors[i][k] >= 0) continue;
      const int vj = V.index_of(U.sites[i][0] + lattice::kDirections[k][0],
                                U.sites[i][1] + lattice::kDirections[k][1]);
      if (vj >= 0) E(i, vj) += 1.0;
    }
  Eigen::MatrixXd GV(V.n(), V.n());
  for (int i = 0; i < V.n(); ++i) GV.col(i) = gV.column(i);
  Eigen::MatrixXd GU(nU, nU);
  for (int i = 0; i < nU; ++i) GU.col(i) = gU.column(i);
  const Eigen::MatrixXd P = gU.solve_multi(E);  // harmonic-extension operator
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(nU, V.n());
  for (int i = 0; i < nU; ++i) R(i, V.index_of(U.sites[i][0], U.sites[i][1])) = 1.0;

  const Eigen::MatrixXd cov_phi = P * GV * P.transpose();
  const Eigen::MatrixXd cov_res = (R - P) * GV * (R - P).transpose();
  CHECK((cov_res - GU).cwiseAbs().maxCoeff() <= tol);
  Eigen::MatrixXd GV_U(nU, nU);
  for (int i = 0; i < nU; ++i)
    for (int j = 0; j < nU; ++j)
      GV_U(i, j) = GV(V.index_of(U.sites[i][0], U.sites[i][1]),
                      V.index_of(U.sites[j][0], U.sites[j][1]));
  CHECK((cov_phi - (GV_U - GU)).cwiseAbs().maxCoeff() <= tol);
}

TEST_CASE("Gibbs-Markov exact covariance identities on a 7x7 / 3x3 nesting") {
  const auto V = lattice::square_domain(7);
  std::vector<std::array<int, 2>> usites;
  for (int ix = 3; ix <= 5; ++ix)
    for (int iy = 3; iy <= 5; ++iy) usites.push_back({ix, iy});
  const auto U = lattice::from_sites(usites, 8);
  check_gm_exact(V, U, 1e-9);
}

TEST_CASE("degenerate split U = V leaves the field untouched") {
  const auto V = lattice::square_domain(3);
  const green::GreenOperator g(V);
  rng::Stream s(5, rng::Purpose::kField, 0);
  const auto h = dgff::sample_field(g, s);
  const auto split = dgff::gibbs_markov_split(V, V, h);
  for (int i = 0; i < V.n(); ++i) {
    CHECK(split.binding[i] == doctest::Approx(0.0));
    CHECK(split.residual.values[i] == doctest::Approx(h.values[i]));
  }
}

TEST_CASE("split rejects non-subdomains") {
  const auto V = lattice::square_domain(3);
  const auto W = lattice::from_sites({{9, 9}}, 4);
  const green::GreenOperator g(V);
  rng::Stream s(6, rng::Purpose::kField, 0);
  const auto h = dgff::sample_field(g, s);
  CHECK_THROWS_AS(dgff::gibbs_markov_split(V, W, h), NotASubdomain);
}

TEST_CASE("four-square cross geometry: residual covariance matches G_U") {
  // V = 15x15, U = four 7x7 squares separated by a cross of sites.
  const auto V = lattice::square_domain(15);
  std::vector<std::array<int, 2>> usites;
  for (const auto [ox, oy] : {std::pair{0, 0}, {8, 0}, {0, 8}, {8, 8}})
    for (int ix = 1; ix <= 7; ++ix)
      for (int iy = 1; iy <= 7; ++iy) usites.push_back({ix + ox, iy + oy});
  const auto U = lattice::from_sites(usites, 16);
  CHECK_THROWS_AS(lattice::validate(U), InvariantViolation);  // four components

  check_gm_exact(V, U, 1e-9);  // identities hold componentwise as well

  // Empirical residual covariance on a sampled subset of entries.
  const green::GreenOperator gV(V);
  const green::GreenOperator gU(U);
  const int reps = 20000;
  rng::Stream s(7, rng::Purpose::kField, 0);
  std::vector<std::pair<int, int>> picks;
  rng::Stream pick(8, rng::Purpose::kGeneric, 0);
  for (int k = 0; k < 60; ++k)
    picks.emplace_back(pick.next_below(U.n()), pick.next_below(U.n()));
  std::vector<double> acc(picks.size(), 0.0);
  for (int r = 0; r < reps; ++r) {
    const auto h = dgff::sample_field(gV, s);
    const auto split = dgff::gibbs_markov_split(V, U, h);
    for (std::size_t k = 0; k < picks.size(); ++k)
      acc[k] += split.residual.values[picks[k].first] *
                split.residual.values[picks[k].second];
  }
  for (std::size_t k = 0; k < picks.size(); ++k) {
    const auto [i, j] = picks[k];
    const double target = gU.entry(i, j);
    const double se = std::sqrt(
        (gU.entry(i, i) * gU.entry(j, j) + target * target) / double(reps));
    CHECK(std::fabs(acc[k] / reps - target) <= 5.0 * se);
  }
}

TEST_CASE("binding field and residual are uncorrelated") {
  const auto V = lattice::square_domain(7);
  std::vector<std::array<int, 2>> usites;
  for (int ix = 2; ix <= 6; ++ix)
    for (int iy = 2; iy <= 6; ++iy) usites.push_back({ix, iy});
  const auto U = lattice::from_sites(usites, 8);
  const green::GreenOperator gV(V);
  rng::Stream fs(9, rng::Purpose::kProbe, 0);
  const int reps = 20000;
  for (int pair = 0; pair < 5; ++pair) {
    Eigen::VectorXd fa(V.n()), fb(U.n());
    for (int i = 0; i < V.n(); ++i) fa[i] = 2.0 * fs.next_unit() - 1.0;
    for (int i = 0; i < U.n(); ++i) fb[i] = 2.0 * fs.next_unit() - 1.0;
    std::vector<double> xs(reps), ys(reps);
    rng::Stream s(10 + pair, rng::Purpose::kField, 0);
    for (int r = 0; r < reps; ++r) {
      const auto h = dgff::sample_field(gV, s);
      const auto split = dgff::gibbs_markov_split(V, U, h);
      double x = 0.0, y = 0.0;
      for (int i = 0; i < V.n(); ++i) x += fa[i] * split.binding[i];
      for (int i = 0; i < U.n(); ++i) y += fb[i] * split.residual.values[i];
      xs[r] = x;
      ys[r] = y;
    }
    const double mx = stats::mean(xs), my = stats::mean(ys);
    double cov = 0.0;
    for (int r = 0; r < reps; ++r) cov += (xs[r] - mx) * (ys[r] - my);
    cov /= reps - 1;
    const double corr = cov / std::sqrt(stats::variance(xs) * stats::variance(ys));
    CHECK(std::fabs(corr) <= 4.0 / std::sqrt(double(reps)));
  }
}

TEST_CASE("coarse field g_x: diagonal one, range [0,1], harmonic off x") {
  const auto single = lattice::from_sites({{0, 0}}, 4);
  const green::GreenOperator gs(single);
  CHECK(dgff::coarse_field_gx(gs, 0) == std::vector<double>{1.0});

  const auto d = lattice::square_domain(9);
  const green::GreenOperator g(d);
  const int x = d.index_of(5, 5);
  const auto gx = dgff::coarse_field_gx(g, x);
  CHECK(gx[x] == doctest::Approx(1.0));
  for (int i = 0; i < d.n(); ++i) {
    CHECK(gx[i] >= -1e-12);
    CHECK(gx[i] <= 1.0 + 1e-12);
    if (i == x) continue;
    double lap = -4.0 * gx[i];
    for (int k = 0; k < 4; ++k)
      if (d.neighbors[i][k] >= 0) lap += gx[d.neighbors[i][k]];
    CHECK(std::fabs(lap) < 1e-9);
  }
}
