#include "gfflab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "gfflab/errors.hpp"

namespace gfflab::lattice {

namespace {

// Inclusion tolerance for the >= 1/N distance rule; relative so exact
// rational hits (rectangle sides) are kept.
constexpr double kDistEps = 1e-12;

using I128 = __int128;

// Winding test on integer-scaled coordinates: exact for inputs with at most
// 9 decimal places, which covers the config surface.
constexpr double kScale = 1e9;

long long scaled(double v) { return std::llround(v * kScale); }

int orientation(long long ax, long long ay, long long bx, long long by,
                long long px, long long py) {
  const I128 cross = static_cast<I128>(bx - ax) * (py - ay) -
                     static_cast<I128>(by - ay) * (px - ax);
  return cross > 0 ? 1 : (cross < 0 ? -1 : 0);
}

bool polygon_contains(const Polygon& poly, double px, double py) {
  const long long X = scaled(px), Y = scaled(py);
  int winding = 0;
  const std::size_t n = poly.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = poly.vertices[i];
    const auto& b = poly.vertices[(i + 1) % n];
    const long long ax = scaled(a[0]), ay = scaled(a[1]);
    const long long bx = scaled(b[0]), by = scaled(b[1]);
    if (ay <= Y) {
      if (by > Y && orientation(ax, ay, bx, by, X, Y) > 0) ++winding;
    } else {
      if (by <= Y && orientation(ax, ay, bx, by, X, Y) < 0) --winding;
    }
  }
  return winding != 0;
}

// d_inf from p to the segment [a,b]: minimum over t in [0,1] of
// max(|dx + t ux|, |dy + t uy|), a piecewise-linear function whose minimum
// sits at an endpoint or a breakpoint.
double segment_distance_inf(double px, double py, const std::array<double, 2>& a,
                            const std::array<double, 2>& b) {
  const double dx = a[0] - px, dy = a[1] - py;
  const double ux = b[0] - a[0], uy = b[1] - a[1];
  auto value = [&](double t) {
    return std::max(std::fabs(dx + t * ux), std::fabs(dy + t * uy));
  };
  double best = std::min(value(0.0), value(1.0));
  auto consider = [&](double t) {
    if (t > 0.0 && t < 1.0) best = std::min(best, value(t));
  };
  if (ux != 0.0) consider(-dx / ux);
  if (uy != 0.0) consider(-dy / uy);
  // |dx + t ux| = |dy + t uy| crossings.
  const double d1 = ux - uy, d2 = ux + uy;
  if (d1 != 0.0) consider((dy - dx) / d1);
  if (d2 != 0.0) consider(-(dx + dy) / d2);
  return best;
}

double disc_distance_inf(const Disc& d, double px, double py) {
  const double ax = std::fabs(px - d.cx);
  const double ay = std::fabs(py - d.cy);
  const double rr = d.radius * d.radius - ax * ax - ay * ay;
  if (rr <= 0.0) return 0.0;
  // Largest r with (ax+r)^2 + (ay+r)^2 <= radius^2.
  const double s = ax + ay;
  return (-s + std::sqrt(s * s + 2.0 * rr)) / 2.0;
}

double rectangle_distance_inf(const Rectangle& r, double px, double py) {
  const double d = std::min(std::min(px - r.x0, r.x1 - px),
                            std::min(py - r.y0, r.y1 - py));
  return std::max(d, 0.0);
}

}  // namespace

ContinuumDomain ContinuumDomain::disc(double cx, double cy, double radius) {
  if (!(radius > 0.0)) throw InvariantViolation("disc radius must be positive");
  ContinuumDomain d;
  d.shape_ = Disc{cx, cy, radius};
  return d;
}

ContinuumDomain ContinuumDomain::rectangle(double x0, double y0, double x1, double y1) {
  if (!(x1 > x0 && y1 > y0))
    throw InvariantViolation("rectangle sides must be positive");
  ContinuumDomain d;
  d.shape_ = Rectangle{x0, y0, x1, y1};
  return d;
}

ContinuumDomain ContinuumDomain::polygon(std::vector<std::array<double, 2>> vertices) {
  if (vertices.size() < 3) throw InvariantViolation("polygon needs >= 3 vertices");
  // Simplicity check: no two non-adjacent edges intersect.
  const std::size_t n = vertices.size();
  auto seg_intersect = [&](std::size_t i, std::size_t j) {
    const long long ax = scaled(vertices[i][0]), ay = scaled(vertices[i][1]);
    const long long bx = scaled(vertices[(i + 1) % n][0]), by = scaled(vertices[(i + 1) % n][1]);
    const long long cx = scaled(vertices[j][0]), cy = scaled(vertices[j][1]);
    const long long dx = scaled(vertices[(j + 1) % n][0]), dy = scaled(vertices[(j + 1) % n][1]);
    const int o1 = orientation(ax, ay, bx, by, cx, cy);
    const int o2 = orientation(ax, ay, bx, by, dx, dy);
    const int o3 = orientation(cx, cy, dx, dy, ax, ay);
    const int o4 = orientation(cx, cy, dx, dy, bx, by);
    return o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (seg_intersect(i, j)) throw InvariantViolation("polygon is not simple");
    }
  ContinuumDomain d;
  d.shape_ = Polygon{std::move(vertices)};
  return d;
}

bool ContinuumDomain::contains(double px, double py) const {
  if (const auto* d = std::get_if<Disc>(&shape_)) {
    const double dx = px - d->cx, dy = py - d->cy;
    return dx * dx + dy * dy < d->radius * d->radius;
  }
  if (const auto* r = std::get_if<Rectangle>(&shape_)) {
    return px > r->x0 && px < r->x1 && py > r->y0 && py < r->y1;
  }
  return polygon_contains(std::get<Polygon>(shape_), px, py);
}

double ContinuumDomain::boundary_distance_inf(double px, double py) const {
  if (!contains(px, py)) return 0.0;
  if (const auto* d = std::get_if<Disc>(&shape_)) return disc_distance_inf(*d, px, py);
  if (const auto* r = std::get_if<Rectangle>(&shape_))
    return rectangle_distance_inf(*r, px, py);
  const auto& poly = std::get<Polygon>(shape_);
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = poly.vertices.size();
  for (std::size_t i = 0; i < n; ++i)
    best = std::min(best, segment_distance_inf(px, py, poly.vertices[i],
                                               poly.vertices[(i + 1) % n]));
  return best;
}

std::array<double, 4> ContinuumDomain::bounding_box() const {
  if (const auto* d = std::get_if<Disc>(&shape_))
    return {d->cx - d->radius, d->cy - d->radius, d->cx + d->radius, d->cy + d->radius};
  if (const auto* r = std::get_if<Rectangle>(&shape_)) return {r->x0, r->y0, r->x1, r->y1};
  const auto& poly = std::get<Polygon>(shape_);
  double x0 = poly.vertices[0][0], x1 = x0, y0 = poly.vertices[0][1], y1 = y0;
  for (const auto& v : poly.vertices) {
    x0 = std::min(x0, v[0]);
    x1 = std::max(x1, v[0]);
    y0 = std::min(y0, v[1]);
    y1 = std::max(y1, v[1]);
  }
  return {x0, y0, x1, y1};
}

std::string ContinuumDomain::describe() const {
  std::ostringstream os;
  if (const auto* d = std::get_if<Disc>(&shape_))
    os << "disc(center=(" << d->cx << "," << d->cy << "),radius=" << d->radius << ")";
  else if (const auto* r = std::get_if<Rectangle>(&shape_))
    os << "rectangle(" << r->x0 << "," << r->y0 << ")x(" << r->x1 << "," << r->y1 << ")";
  else
    os << "polygon(" << std::get<Polygon>(shape_).vertices.size() << " vertices)";
  return os.str();
}

int WiredDomain::index_of(int ix, int iy) const {
  const auto it = site_index.find(pack(ix, iy));
  return it == site_index.end() ? -1 : it->second;
}

WiredDomain from_sites(std::vector<std::array<int, 2>> sites, int N) {
  WiredDomain d;
  d.N = N;
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  d.sites = std::move(sites);
  d.site_index.reserve(d.sites.size() * 2);
  for (int i = 0; i < d.n(); ++i)
    d.site_index.emplace(WiredDomain::pack(d.sites[i][0], d.sites[i][1]), i);
  d.neighbors.resize(d.sites.size());
  d.boundary_edge_count.resize(d.sites.size());
  d.pi_rho = 0;
  for (int i = 0; i < d.n(); ++i) {
    int inside = 0;
    for (int k = 0; k < 4; ++k) {
      const int j = d.index_of(d.sites[i][0] + kDirections[k][0],
                               d.sites[i][1] + kDirections[k][1]);
      d.neighbors[i][k] = j;
      if (j >= 0) ++inside;
    }
    d.boundary_edge_count[i] = 4 - inside;
    d.pi_rho += d.boundary_edge_count[i];
  }
  return d;
}

WiredDomain discretize(const ContinuumDomain& domain, int N) {
  if (N < 4) throw BadParameterRange("discretize: N must be >= 4");
  const auto bb = domain.bounding_box();
  const int ix0 = static_cast<int>(std::floor(bb[0] * N)) - 1;
  const int ix1 = static_cast<int>(std::ceil(bb[2] * N)) + 1;
  const int iy0 = static_cast<int>(std::floor(bb[1] * N)) - 1;
  const int iy1 = static_cast<int>(std::ceil(bb[3] * N)) + 1;
  const double threshold = (1.0 - kDistEps) / static_cast<double>(N);
  std::vector<std::array<int, 2>> sites;
  for (int ix = ix0; ix <= ix1; ++ix)
    for (int iy = iy0; iy <= iy1; ++iy) {
      const double px = static_cast<double>(ix) / N;
      const double py = static_cast<double>(iy) / N;
      if (domain.boundary_distance_inf(px, py) >= threshold) sites.push_back({ix, iy});
    }
  if (sites.empty())
    throw EmptyDomain("discretize: no lattice point satisfies the d_inf rule for " +
                      domain.describe() + " at N=" + std::to_string(N) +
                      " (N too small for the shape)");

  // Largest connected component of the site graph.
  WiredDomain all = from_sites(std::move(sites), N);
  std::vector<int> comp(all.n(), -1);
  int best_comp = -1, best_size = 0, ncomp = 0;
  for (int s = 0; s < all.n(); ++s) {
    if (comp[s] >= 0) continue;
    int size = 0;
    std::deque<int> q{s};
    comp[s] = ncomp;
    while (!q.empty()) {
      const int v = q.front();
      q.pop_front();
      ++size;
      for (int k = 0; k < 4; ++k) {
        const int w = all.neighbors[v][k];
        if (w >= 0 && comp[w] < 0) {
          comp[w] = ncomp;
          q.push_back(w);
        }
      }
    }
    if (size > best_size) {
      best_size = size;
      best_comp = ncomp;
    }
    ++ncomp;
  }
  if (ncomp == 1) return all;
  std::vector<std::array<int, 2>> kept;
  kept.reserve(best_size);
  for (int s = 0; s < all.n(); ++s)
    if (comp[s] == best_comp) kept.push_back(all.sites[s]);
  return from_sites(std::move(kept), N);
}

WiredDomain square_domain(int m) {
  if (m < 1) throw BadParameterRange("square_domain: m must be >= 1");
  std::vector<std::array<int, 2>> sites;
  sites.reserve(static_cast<std::size_t>(m) * m);
  for (int ix = 1; ix <= m; ++ix)
    for (int iy = 1; iy <= m; ++iy) sites.push_back({ix, iy});
  return from_sites(std::move(sites), m + 1);
}

DomainReport validate(const WiredDomain& domain) {
  if (domain.n() == 0) throw InvariantViolation("validate: empty site list");
  if (!std::is_sorted(domain.sites.begin(), domain.sites.end()))
    throw InvariantViolation("validate: site list not lexicographically sorted");
  int pi_rho = 0;
  for (int i = 0; i < domain.n(); ++i) {
    int inside = 0;
    for (int k = 0; k < 4; ++k) {
      const int j = domain.index_of(domain.sites[i][0] + kDirections[k][0],
                                    domain.sites[i][1] + kDirections[k][1]);
      if (j != domain.neighbors[i][k])
        throw InvariantViolation("validate: adjacency table inconsistent");
      if (j >= 0) ++inside;
    }
    if (inside + domain.boundary_edge_count[i] != 4)
      throw InvariantViolation("validate: degree bookkeeping (pi(x)=4) broken at site " +
                               std::to_string(i));
    pi_rho += domain.boundary_edge_count[i];
  }
  if (pi_rho != domain.pi_rho)
    throw InvariantViolation("validate: pi(rho) does not equal total boundary-edge count");
  if (domain.pi_rho < 4) throw InvariantViolation("validate: pi(rho) < 4");
  // Connectivity of the site graph.
  std::vector<char> seen(domain.n(), 0);
  std::deque<int> q{0};
  seen[0] = 1;
  int reached = 0;
  while (!q.empty()) {
    const int v = q.front();
    q.pop_front();
    ++reached;
    for (int k = 0; k < 4; ++k) {
      const int w = domain.neighbors[v][k];
      if (w >= 0 && !seen[w]) {
        seen[w] = 1;
        q.push_back(w);
      }
    }
  }
  if (reached != domain.n())
    throw InvariantViolation("validate: connectivity (site graph has " +
                             std::to_string(domain.n() - reached) +
                             " unreachable sites)");
  DomainReport rep;
  rep.n = domain.n();
  rep.pi_rho = domain.pi_rho;
  rep.bounding_box = {domain.sites[0][0], domain.sites[0][1], domain.sites[0][0],
                      domain.sites[0][1]};
  for (const auto& s : domain.sites) {
    rep.bounding_box[0] = std::min(rep.bounding_box[0], s[0]);
    rep.bounding_box[1] = std::min(rep.bounding_box[1], s[1]);
    rep.bounding_box[2] = std::max(rep.bounding_box[2], s[0]);
    rep.bounding_box[3] = std::max(rep.bounding_box[3], s[1]);
  }
  return rep;
}

std::string to_csv(const WiredDomain& domain) {
  std::ostringstream os;
  os << "ix,iy,boundary_edges\n";
  for (int i = 0; i < domain.n(); ++i)
    os << domain.sites[i][0] << "," << domain.sites[i][1] << ","
       << domain.boundary_edge_count[i] << "\n";
  return os.str();
}

}  // namespace gfflab::lattice
