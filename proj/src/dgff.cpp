#include "gfflab/dgff.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "gfflab/errors.hpp"

namespace gfflab::dgff {

FieldSample sample_field(const green::GreenOperator& green, rng::Stream& stream,
                         std::string seed_tag) {
  const int n = green.n();
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z[i] = stream.next_normal();
  const Eigen::VectorXd h = green.sample_transform(z);
  FieldSample f;
  f.values.assign(h.data(), h.data() + n);
  f.seed_tag = std::move(seed_tag);
  return f;
}

GibbsMarkovSplit gibbs_markov_split(const lattice::WiredDomain& V,
                                    const lattice::WiredDomain& U,
                                    const FieldSample& h) {
  if (static_cast<int>(h.values.size()) != V.n())
    throw KindMismatch("gibbs_markov_split: field length does not match V");
  GibbsMarkovSplit out;
  out.u_to_v.resize(U.n());
  for (int i = 0; i < U.n(); ++i) {
    const int j = V.index_of(U.sites[i][0], U.sites[i][1]);
    if (j < 0)
      throw NotASubdomain("gibbs_markov_split: U site (" +
                          std::to_string(U.sites[i][0]) + "," +
                          std::to_string(U.sites[i][1]) + ") not in V");
    out.u_to_v[i] = j;
  }

  // Dirichlet problem on U: 4 phi(x) - sum_{y~x in U} phi(y) equals the sum
  // of h^V over non-U lattice neighbors (zero off V, where h = h_rho = 0).
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(U.n());
  for (int i = 0; i < U.n(); ++i) {
    for (int k = 0; k < 4; ++k) {
      if (U.neighbors[i][k] >= 0) continue;
      const int vj = V.index_of(U.sites[i][0] + lattice::kDirections[k][0],
                                U.sites[i][1] + lattice::kDirections[k][1]);
      if (vj >= 0) rhs[i] += h.values[vj];
    }
  }
  const green::GreenOperator greenU(U);
  const Eigen::VectorXd phiU = greenU.solve(rhs);

  out.binding = h.values;
  for (int i = 0; i < U.n(); ++i) out.binding[out.u_to_v[i]] = phiU[i];
  out.residual.values.resize(U.n());
  for (int i = 0; i < U.n(); ++i)
    out.residual.values[i] = h.values[out.u_to_v[i]] - phiU[i];
  out.residual.seed_tag = h.seed_tag;
  return out;
}

std::vector<double> coarse_field_gx(const green::GreenOperator& green, int x) {
  const Eigen::VectorXd col = green.column(x);
  const double gxx = col[x];
  std::vector<double> g(green.n());
  for (int i = 0; i < green.n(); ++i) g[i] = col[i] / gxx;
  return g;
}

}  // namespace gfflab::dgff
