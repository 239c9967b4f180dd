#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "gfflab/lattice.hpp"
#include "gfflab/potential.hpp"

namespace gfflab::green {

// One boundary exit: a site together with a direction whose edge is wired to
// rho; exit_point is the outside lattice point used in the potential-kernel
// representation.
struct BoundarySlot {
  int site = -1;
  int dir = -1;
  std::array<int, 2> exit_point{};
};

// Ordered by site index, then direction.
std::vector<BoundarySlot> boundary_slots(const lattice::WiredDomain& domain);

// Factorized wired Dirichlet Laplacian A (A(x,x)=4, A(x,y)=-1 on edges) with
// G = A^{-1} served by back-solves. Dense Cholesky below dense_limit sites,
// sparse AMD-ordered Cholesky above. Immutable after construction; solves
// are read-only.
class GreenOperator {
 public:
  explicit GreenOperator(const lattice::WiredDomain& domain, int dense_limit = 2000);

  const lattice::WiredDomain& domain() const { return *domain_; }
  int n() const { return domain_->n(); }
  bool dense_mode() const { return dense_.has_value(); }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  Eigen::MatrixXd solve_multi(const Eigen::MatrixXd& rhs) const;
  Eigen::VectorXd column(int site) const;  // G(., site)
  double entry(int x, int y) const;

  // Applies a linear map T with T T' = G, for exact-law DGFF sampling.
  Eigen::VectorXd sample_transform(const Eigen::VectorXd& z) const;

  // Per-site G(x,x). Dense-mode operators read it off the factorization; the
  // sparse path assembles it from boundary columns through the
  // potential-kernel representation. Cached after the first call.
  const Eigen::VectorXd& diagonal(const potential::PotentialKernel& kernel,
                                  int threads = 0) const;

  const std::vector<BoundarySlot>& slots() const { return slots_; }

 private:
  const lattice::WiredDomain* domain_;
  std::vector<BoundarySlot> slots_;
  std::optional<Eigen::LLT<Eigen::MatrixXd>> dense_;
  std::optional<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>> sparse_;
  mutable std::optional<Eigen::VectorXd> diag_;
  mutable std::mutex diag_mutex_;
};

class HarmonicMeasureTable {
 public:
  std::vector<int> sources;
  std::vector<BoundarySlot> slots;
  Eigen::MatrixXd H;  // sources x slots

  double row_sum(int i) const { return H.row(i).sum(); }
};

// Exit distribution H^V(x, slot) for each source, via one Dirichlet solve
// per source (H(x,(u,d)) = G(x,u)). Rows are checked to sum to 1 within
// 1e-12.
HarmonicMeasureTable harmonic_measure(const GreenOperator& green,
                                      const std::vector<int>& sources);

// Potential-kernel route: G(x,y) = -a(x-y) + sum_slots H(x,slot) a(exit-y).
double green_via_kernel(const GreenOperator& green,
                        const potential::PotentialKernel& kernel, int x, int y);

// Same, all y at once for a fixed x (one solve).
Eigen::VectorXd green_via_kernel_row(const GreenOperator& green,
                                     const potential::PotentialKernel& kernel, int x);

// Discrete conformal radius exp{ sum_slots H(site,slot) log(|exit-site|/N) }
// at site = floor(x N). Throws PointTooCloseToBoundary when d_inf(x, dD) is
// not > 2/N or the rounded point is not a site.
double conformal_radius(const GreenOperator& green, const lattice::ContinuumDomain& domain,
                        double px, double py);
double conformal_radius(const lattice::ContinuumDomain& domain, int N, double px,
                        double py);

// Continuum Green function of the unit disc via the Poisson-kernel boundary
// integral; oracle for the scaling checks.
double continuum_green_disc(std::array<double, 2> x, std::array<double, 2> y);

}  // namespace gfflab::green
