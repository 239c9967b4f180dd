#include "gfflab/green.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gfflab/errors.hpp"
#include "gfflab/parallel.hpp"

namespace gfflab::green {

using lattice::kDirections;
using lattice::WiredDomain;

std::vector<BoundarySlot> boundary_slots(const WiredDomain& domain) {
  std::vector<BoundarySlot> slots;
  slots.reserve(domain.pi_rho);
  for (int i = 0; i < domain.n(); ++i) {
    if (domain.boundary_edge_count[i] == 0) continue;
    for (int k = 0; k < 4; ++k) {
      if (domain.neighbors[i][k] >= 0) continue;
      BoundarySlot s;
      s.site = i;
      s.dir = k;
      s.exit_point = {domain.sites[i][0] + kDirections[k][0],
                      domain.sites[i][1] + kDirections[k][1]};
      slots.push_back(s);
    }
  }
  return slots;
}

GreenOperator::GreenOperator(const WiredDomain& domain, int dense_limit)
    : domain_(&domain), slots_(boundary_slots(domain)) {
  const int n = domain.n();
  if (n == 0) throw FactorizationFailure("GreenOperator: empty domain");
  if (n <= dense_limit) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      A(i, i) = 4.0;
      for (int k = 0; k < 4; ++k) {
        const int j = domain.neighbors[i][k];
        if (j >= 0) A(i, j) = -1.0;
      }
    }
    dense_.emplace(A);
    if (dense_->info() != Eigen::Success)
      throw FactorizationFailure("GreenOperator: dense Cholesky failed");
  } else {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(n) * 5);
    for (int i = 0; i < n; ++i) {
      trips.emplace_back(i, i, 4.0);
      for (int k = 0; k < 4; ++k) {
        const int j = domain.neighbors[i][k];
        if (j >= 0) trips.emplace_back(i, j, -1.0);
      }
    }
    Eigen::SparseMatrix<double> A(n, n);
    A.setFromTriplets(trips.begin(), trips.end());
    sparse_.emplace();
    sparse_->compute(A);
    if (sparse_->info() != Eigen::Success)
      throw FactorizationFailure("GreenOperator: sparse Cholesky failed");
  }
}

Eigen::VectorXd GreenOperator::solve(const Eigen::VectorXd& rhs) const {
  return dense_ ? dense_->solve(rhs) : Eigen::VectorXd(sparse_->solve(rhs));
}

Eigen::MatrixXd GreenOperator::solve_multi(const Eigen::MatrixXd& rhs) const {
  return dense_ ? dense_->solve(rhs) : Eigen::MatrixXd(sparse_->solve(rhs));
}

Eigen::VectorXd GreenOperator::column(int site) const {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n());
  e[site] = 1.0;
  return solve(e);
}

double GreenOperator::entry(int x, int y) const { return column(y)[x]; }

Eigen::VectorXd GreenOperator::sample_transform(const Eigen::VectorXd& z) const {
  if (dense_) {
    // A = L L', h = L^-T z.
    return dense_->matrixU().solve(z);
  }
  // Sparse: P A P^-1 = L L', A^-1 = Pinv L^-T L^-1 P, so T = Pinv L^-T.
  Eigen::VectorXd u = z;
  sparse_->matrixU().solveInPlace(u);
  return sparse_->permutationPinv() * u;
}

const Eigen::VectorXd& GreenOperator::diagonal(const potential::PotentialKernel& kernel,
                                               int threads) const {
  std::lock_guard<std::mutex> lock(diag_mutex_);
  if (diag_) return *diag_;
  const int n = this->n();
  if (dense_) {
    Eigen::MatrixXd inv = dense_->solve(Eigen::MatrixXd::Identity(n, n));
    diag_ = inv.diagonal();
    return *diag_;
  }

  // Sparse path: G(x,x) = sum_u G(x,u) sum_{d in boundary dirs of u}
  // a(exit(u,d) - x), one solve per boundary site (Eq. route through the
  // potential kernel). Flat kernel table keeps the hot loop lock-free.
  const int radius = static_cast<int>(kernel.cutoff_radius());
  kernel.ensure_range(radius);
  std::vector<double> table(static_cast<std::size_t>(radius + 1) * (radius + 1));
  for (int x = 0; x <= radius; ++x)
    for (int y = 0; y <= x; ++y)
      table[static_cast<std::size_t>(x) * (radius + 1) + y] = kernel(x, y);
  const double r2cut = kernel.cutoff_radius() * kernel.cutoff_radius();
  const double c0 = potential::c0();
  auto a_eval = [&](int dx, int dy) {
    int ax = std::abs(dx), ay = std::abs(dy);
    if (ax < ay) std::swap(ax, ay);
    const double r2 = static_cast<double>(ax) * ax + static_cast<double>(ay) * ay;
    if (r2 > r2cut) return potential::kG * 0.5 * std::log(r2) + c0;
    return table[static_cast<std::size_t>(ax) * (radius + 1) + ay];
  };

  // Group slots by boundary site.
  std::vector<int> bsites;
  std::vector<std::vector<int>> bdirs;
  for (const auto& s : slots_) {
    if (bsites.empty() || bsites.back() != s.site) {
      bsites.push_back(s.site);
      bdirs.emplace_back();
    }
    bdirs.back().push_back(s.dir);
  }

  // Fixed block size so the accumulation order is thread-count independent.
  constexpr int kBlock = 32;
  const int nblocks = (static_cast<int>(bsites.size()) + kBlock - 1) / kBlock;
  std::vector<Eigen::VectorXd> partial(nblocks);
  const auto& dom = *domain_;
  parallel_for_index(nblocks, thread_count(threads), [&](int blk) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
    const int lo = blk * kBlock;
    const int hi = std::min<int>(lo + kBlock, static_cast<int>(bsites.size()));
    for (int bi = lo; bi < hi; ++bi) {
      const int u = bsites[bi];
      const Eigen::VectorXd col = column(u);
      for (int x = 0; x < n; ++x) {
        double s = 0.0;
        for (int d : bdirs[bi])
          s += a_eval(dom.sites[u][0] + kDirections[d][0] - dom.sites[x][0],
                      dom.sites[u][1] + kDirections[d][1] - dom.sites[x][1]);
        acc[x] += col[x] * s;
      }
    }
    partial[blk] = std::move(acc);
  });
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  for (const auto& p : partial) diag += p;
  diag_ = std::move(diag);
  return *diag_;
}

HarmonicMeasureTable harmonic_measure(const GreenOperator& green,
                                      const std::vector<int>& sources) {
  const auto& slots = green.slots();
  HarmonicMeasureTable table;
  table.sources = sources;
  table.slots = slots;
  table.H.resize(static_cast<Eigen::Index>(sources.size()),
                 static_cast<Eigen::Index>(slots.size()));
  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (sources[i] < 0 || sources[i] >= green.n())
      throw BadParameterRange("harmonic_measure: source outside domain");
    const Eigen::VectorXd col = green.column(sources[i]);
    for (std::size_t s = 0; s < slots.size(); ++s)
      table.H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(s)) =
          col[slots[s].site];
    const double rs = table.row_sum(static_cast<int>(i));
    if (std::fabs(rs - 1.0) > 1e-12)
      throw InvariantViolation("harmonic_measure: row sum " + std::to_string(rs) +
                               " differs from 1 beyond 1e-12");
  }
  return table;
}

Eigen::VectorXd green_via_kernel_row(const GreenOperator& green,
                                     const potential::PotentialKernel& kernel, int x) {
  const auto& dom = green.domain();
  const Eigen::VectorXd col = green.column(x);
  const auto& slots = green.slots();
  Eigen::VectorXd row(green.n());
  for (int y = 0; y < green.n(); ++y) {
    double v = -kernel(dom.sites[x][0] - dom.sites[y][0], dom.sites[x][1] - dom.sites[y][1]);
    for (const auto& s : slots)
      v += col[s.site] * kernel(s.exit_point[0] - dom.sites[y][0],
                                s.exit_point[1] - dom.sites[y][1]);
    row[y] = v;
  }
  return row;
}

double green_via_kernel(const GreenOperator& green,
                        const potential::PotentialKernel& kernel, int x, int y) {
  const auto& dom = green.domain();
  const Eigen::VectorXd col = green.column(x);
  double v = -kernel(dom.sites[x][0] - dom.sites[y][0], dom.sites[x][1] - dom.sites[y][1]);
  for (const auto& s : green.slots())
    v += col[s.site] * kernel(s.exit_point[0] - dom.sites[y][0],
                              s.exit_point[1] - dom.sites[y][1]);
  return v;
}

double conformal_radius(const GreenOperator& green, const lattice::ContinuumDomain& domain,
                        double px, double py) {
  const int N = green.domain().N;
  if (domain.boundary_distance_inf(px, py) <= 2.0 / N)
    throw PointTooCloseToBoundary("conformal_radius: point within 2/N of the boundary");
  const int ix = static_cast<int>(std::floor(px * N));
  const int iy = static_cast<int>(std::floor(py * N));
  const int site = green.domain().index_of(ix, iy);
  if (site < 0)
    throw PointTooCloseToBoundary("conformal_radius: floor(xN) is not a site");
  const Eigen::VectorXd col = green.column(site);
  double log_r = 0.0;
  for (const auto& s : green.slots()) {
    const double dx = s.exit_point[0] - ix;
    const double dy = s.exit_point[1] - iy;
    log_r += col[s.site] * std::log(std::sqrt(dx * dx + dy * dy) / N);
  }
  return std::exp(log_r);
}

double conformal_radius(const lattice::ContinuumDomain& domain, int N, double px,
                        double py) {
  const lattice::WiredDomain d = lattice::discretize(domain, N);
  const GreenOperator green(d);
  return conformal_radius(green, domain, px, py);
}

double continuum_green_disc(std::array<double, 2> x, std::array<double, 2> y) {
  const double rx2 = x[0] * x[0] + x[1] * x[1];
  const double ry2 = y[0] * y[0] + y[1] * y[1];
  if (rx2 >= 1.0 || ry2 >= 1.0)
    throw BadParameterRange("continuum_green_disc: points must lie in the open unit disc");
  const double dx = x[0] - y[0], dy = x[1] - y[1];
  const double dist = std::sqrt(dx * dx + dy * dy);
  if (dist < 1e-12) throw CoincidentPoints("continuum_green_disc: x == y");
  // Poisson-kernel boundary integral; trapezoid is spectrally accurate for
  // this periodic analytic integrand.
  constexpr int kM = 4096;
  double integral = 0.0;
  for (int k = 0; k < kM; ++k) {
    const double phi = 2.0 * M_PI * k / kM;
    const double zx = std::cos(phi), zy = std::sin(phi);
    const double qx = zx - x[0], qy = zy - x[1];
    const double poisson = (1.0 - rx2) / (qx * qx + qy * qy);
    const double wx = zx - y[0], wy = zy - y[1];
    integral += poisson * 0.5 * std::log(wx * wx + wy * wy);
  }
  integral /= kM;
  return potential::kG * (-std::log(dist) + integral);
}

}  // namespace gfflab::green
