#pragma once

#include <cstdint>
#include <mutex>
#include <unordered_map>

namespace gfflab::potential {

// g = 1/(2 pi), the Green-function growth constant.
inline constexpr double kG = 0.15915494309189533577;

// Euler-Mascheroni constant, 20 digits.
inline constexpr double kEulerGamma = 0.57721566490153286061;

// Additive constant in the potential-kernel asymptotic
// a(x) = g log|x| + c0 + O(|x|^-2); equals (2*gamma + log 8)/(4 pi) for this
// normalization (a(e1) = 1/4).
double c0();

// Lattice potential kernel: a(0) = 0, sum_{y~x}[a(y)-a(x)] = delta_0(x).
// Values inside the cutoff radius come from panelized Gauss-Legendre
// quadrature of the Fourier integral (absolute accuracy ~1e-12); beyond it
// the asymptotic g log|x| + c0 is used. Total function, cached on the
// dihedral orbit representative.
class PotentialKernel {
 public:
  explicit PotentialKernel(double cutoff_radius = 64.0);

  double operator()(int x, int y) const;

  double cutoff_radius() const { return cutoff_; }

  // max over |x|_inf <= window_radius of |sum_{y~x}[a(y)-a(x)] - delta_0(x)|.
  double check_harmonicity(int window_radius) const;

  // Precomputes every orbit representative with |x|,|y| <= radius so later
  // reads race-free; call before parallel sections.
  void ensure_range(int radius) const;

  // Raw quadrature at a given panel count (64-point Gauss-Legendre per
  // panel); exposed so tests can check refinement convergence.
  static double quadrature(int x, int y, int panels_per_axis);

 private:
  double value_canonical(int x, int y) const;  // requires x >= y >= 0

  double cutoff_;
  mutable std::unordered_map<std::uint64_t, double> cache_;
  mutable std::mutex mutex_;
};

}  // namespace gfflab::potential
