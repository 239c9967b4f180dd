#include "gfflab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace gfflab::potential {

namespace {

constexpr int kGaussPoints = 64;

struct GaussRule {
  std::vector<double> nodes;    // on [0, pi], panelized
  std::vector<double> weights;
};

// 64-point Gauss-Legendre nodes/weights on [-1,1] generated by Newton
// iteration on Legendre polynomials (deterministic, done once per panel
// count).
void leggauss(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::fabs(dt) < 1e-15) break;
    }
    x[i] = t;
    double p0 = 1.0, p1 = t;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = n * (t * p1 - p0) / (t * t - 1.0);
    w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

GaussRule panel_rule(int panels_per_axis) {
  std::vector<double> gx, gw;
  leggauss(kGaussPoints, gx, gw);
  GaussRule r;
  const double width = M_PI / panels_per_axis;
  for (int p = 0; p < panels_per_axis; ++p) {
    const double a = p * width;
    for (int i = 0; i < kGaussPoints; ++i) {
      r.nodes.push_back(a + 0.5 * width * (gx[i] + 1.0));
      r.weights.push_back(0.5 * width * gw[i]);
    }
  }
  return r;
}

const GaussRule& cached_rule(int panels_per_axis) {
  static std::mutex m;
  static std::unordered_map<int, GaussRule> rules;
  std::lock_guard<std::mutex> lock(m);
  auto it = rules.find(panels_per_axis);
  if (it == rules.end()) it = rules.emplace(panels_per_axis, panel_rule(panels_per_axis)).first;
  return it->second;
}

std::uint64_t orbit_key(int x, int y) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) |
         static_cast<std::uint64_t>(static_cast<std::uint32_t>(y));
}

}  // namespace

double c0() { return (2.0 * kEulerGamma + std::log(8.0)) / (4.0 * M_PI); }

double PotentialKernel::quadrature(int x, int y, int panels_per_axis) {
  // The odd sin(k1 x) sin(k2 y) part of 1 - cos(k.x) integrates to zero, so
  // the integrand reduces to (1 - cos(k1 x) cos(k2 y)) on [0,pi]^2 (times 4).
  const GaussRule& rule = cached_rule(panels_per_axis);
  const std::size_t m = rule.nodes.size();
  std::vector<double> cx(m), cy(m), s2(m);
  for (std::size_t i = 0; i < m; ++i) {
    cx[i] = std::cos(rule.nodes[i] * x);
    cy[i] = std::cos(rule.nodes[i] * y);
    const double s = std::sin(rule.nodes[i] / 2.0);
    s2[i] = s * s;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      row += rule.weights[j] * (1.0 - cx[i] * cy[j]) / (s2[i] + s2[j]);
    total += rule.weights[i] * row;
  }
  // Prefactor: (1/4) * 4/(2 pi)^2 over the quarter square.
  return total / (4.0 * M_PI * M_PI);
}

PotentialKernel::PotentialKernel(double cutoff_radius) : cutoff_(cutoff_radius) {}

double PotentialKernel::value_canonical(int x, int y) const {
  if (x == 0 && y == 0) return 0.0;
  const double r2 = static_cast<double>(x) * x + static_cast<double>(y) * y;
  if (r2 > cutoff_ * cutoff_)
    return kG * 0.5 * std::log(r2) + c0();
  const std::uint64_t key = orbit_key(x, y);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  // Refine panel counts until two successive evaluations agree to 1e-11.
  double prev = quadrature(x, y, 8);
  double value = prev;
  for (int panels : {12, 16, 24}) {
    value = quadrature(x, y, panels);
    if (std::fabs(value - prev) < 1e-11) break;
    prev = value;
  }
  std::lock_guard<std::mutex> lock(mutex_);
  cache_.emplace(key, value);
  return value;
}

double PotentialKernel::operator()(int x, int y) const {
  int ax = std::abs(x), ay = std::abs(y);
  if (ax < ay) std::swap(ax, ay);
  return value_canonical(ax, ay);
}

double PotentialKernel::check_harmonicity(int window_radius) const {
  double worst = 0.0;
  for (int x = -window_radius; x <= window_radius; ++x)
    for (int y = -window_radius; y <= window_radius; ++y) {
      double lap = -4.0 * (*this)(x, y);
      lap += (*this)(x + 1, y) + (*this)(x - 1, y) + (*this)(x, y + 1) +
             (*this)(x, y - 1);
      const double target = (x == 0 && y == 0) ? 1.0 : 0.0;
      worst = std::max(worst, std::fabs(lap - target));
    }
  return worst;
}

void PotentialKernel::ensure_range(int radius) const {
  for (int x = 0; x <= radius; ++x)
    for (int y = 0; y <= x; ++y) value_canonical(x, y);
}

}  // namespace gfflab::potential
