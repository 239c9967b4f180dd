#pragma once

#include <string>
#include <vector>

#include "gfflab/green.hpp"
#include "gfflab/lattice.hpp"
#include "gfflab/rng.hpp"

namespace gfflab::dgff {

// One DGFF realization over the domain's sites; h_rho is identically zero.
struct FieldSample {
  std::vector<double> values;
  double rho_value = 0.0;
  std::string seed_tag;
};

// Exact-law sampler: h = T z for i.i.d. standard normals z, where T T' = G
// comes from the shared Laplacian factorization.
FieldSample sample_field(const green::GreenOperator& green, rng::Stream& stream,
                         std::string seed_tag = {});

struct GibbsMarkovSplit {
  // Harmonic binding field over all V sites (equals h on V \ U).
  std::vector<double> binding;
  // h - binding restricted to U, in U's site order; DGFF on U in law.
  FieldSample residual;
  // U site index -> V site index.
  std::vector<int> u_to_v;
};

// Decomposes h^V into the harmonic extension of its values off U plus a
// DGFF-on-U residual. Throws NotASubdomain when U's sites are not all V
// sites.
GibbsMarkovSplit gibbs_markov_split(const lattice::WiredDomain& V,
                                    const lattice::WiredDomain& U,
                                    const FieldSample& h);

// g_x(y) = G(x,y)/G(x,x): discrete harmonic off x, 1 at x, values in [0,1].
std::vector<double> coarse_field_gx(const green::GreenOperator& green, int x);

}  // namespace gfflab::dgff
