#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace gfflab::lattice {

struct Disc {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 1.0;
};

struct Rectangle {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 1.0;
  double y1 = 1.0;
};

struct Polygon {
  std::vector<std::array<double, 2>> vertices;  // simple, any orientation
};

// Bounded open continuum domain; validated on construction.
class ContinuumDomain {
 public:
  static ContinuumDomain disc(double cx, double cy, double radius);
  static ContinuumDomain rectangle(double x0, double y0, double x1, double y1);
  static ContinuumDomain polygon(std::vector<std::array<double, 2>> vertices);

  bool contains(double px, double py) const;
  // d_inf(p, R^2 \ D) for p inside D; 0 for p outside or on the boundary.
  double boundary_distance_inf(double px, double py) const;
  std::array<double, 4> bounding_box() const;  // x0,y0,x1,y1

  bool is_disc() const { return std::holds_alternative<Disc>(shape_); }
  const Disc& as_disc() const { return std::get<Disc>(shape_); }
  bool is_rectangle() const { return std::holds_alternative<Rectangle>(shape_); }
  const Rectangle& as_rectangle() const { return std::get<Rectangle>(shape_); }
  std::string describe() const;

 private:
  std::variant<Disc, Rectangle, Polygon> shape_;
};

// Lattice domain D_N with the wired boundary vertex rho. Sites are the
// maximal admissible approximation restricted to the largest connected
// component and sorted lexicographically by (ix, iy).
struct WiredDomain {
  int N = 0;
  std::vector<std::array<int, 2>> sites;
  std::vector<std::array<int, 4>> neighbors;      // site index per direction, -1 if edge goes to rho
  std::vector<int> boundary_edge_count;           // 4 - (# in-domain neighbors)
  int pi_rho = 0;

  int n() const { return static_cast<int>(sites.size()); }
  static constexpr int pi_site = 4;

  int index_of(int ix, int iy) const;
  bool has_site(int ix, int iy) const { return index_of(ix, iy) >= 0; }

  std::unordered_map<std::uint64_t, int> site_index;  // packed (ix,iy) -> index
  static std::uint64_t pack(int ix, int iy) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(ix)) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(iy));
  }
};

// Directions in fixed order: +x, -x, +y, -y.
inline constexpr std::array<std::array<int, 2>, 4> kDirections{
    {{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};

// Maximal admissible approximation {x : d_inf(x/N, R^2\D) >= 1/N}, largest
// connected component. Throws EmptyDomain when no site qualifies.
WiredDomain discretize(const ContinuumDomain& domain, int N);

// Builds a wired domain from an explicit site list (no admissibility rule);
// used for hand-made geometries in tests and for m x m squares.
WiredDomain from_sites(std::vector<std::array<int, 2>> sites, int N);

// The m x m square {1..m}^2, which equals discretize(unit square, m+1).
WiredDomain square_domain(int m);

struct DomainReport {
  int n = 0;
  int pi_rho = 0;
  std::array<int, 4> bounding_box{};  // ix_min, iy_min, ix_max, iy_max
};

// Checks all WiredDomain invariants; throws InvariantViolation naming the
// failed one.
DomainReport validate(const WiredDomain& domain);

// CSV export rows: ix,iy,boundary_edges.
std::string to_csv(const WiredDomain& domain);

}  // namespace gfflab::lattice
