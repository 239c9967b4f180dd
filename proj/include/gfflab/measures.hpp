#pragma once

#include <optional>
#include <vector>

#include "gfflab/dgff.hpp"
#include "gfflab/green.hpp"
#include "gfflab/lattice.hpp"
#include "gfflab/potential.hpp"
#include "gfflab/walk.hpp"

namespace gfflab::measures {

struct ScaleOverrides {
  std::optional<double> a_N;
  std::optional<double> t_N;
};

// Every deterministic scale in one place. Defaults pin the exact asymptotic
// forms a_N = 2 sqrt(g) lambda log N and t_N = 2 g theta (log N)^2;
// overrides let sequence-dependence be studied without touching K_N's
// formula.
struct ScaleParams {
  int N = 0;
  std::optional<double> lambda;
  std::optional<double> theta;
  double g = 0.0;
  double c0 = 0.0;
  double alpha = 0.0;  // 2/sqrt(g)
  double a_N = 0.0;
  double t_N = 0.0;
  double K_N = 0.0;     // N^2 exp(-a_N^2/(2 g log N)) / sqrt(log N)
  double hatK_N = 0.0;  // N^2 exp(-t_N/(g log N))
  double m_N = 0.0;     // 2 sqrt(g) log N - (3/4) sqrt(g) log log N
  double c_hat = 0.0;   // exp(-2 c0 lambda^2 / g)/sqrt(2 pi g), needs lambda
};

ScaleParams scale_params(int N, std::optional<double> lambda, std::optional<double> theta,
                         ScaleOverrides overrides = {});

enum class MeasureKind { kThick, kAvoided, kLight };

struct Atom {
  double x = 0.0;
  double y = 0.0;
  double value = 0.0;
};

struct PointMeasure {
  std::vector<Atom> atoms;
  double weight = 0.0;
  MeasureKind kind = MeasureKind::kThick;
};

// Thick: atoms (x/N, h_x - a_N) at every site, weight 1/K_N.
PointMeasure build_point_measure(const dgff::FieldSample& field,
                                 const lattice::WiredDomain& domain,
                                 const ScaleParams& params, MeasureKind kind);

// Avoided: atoms (x/N, 0) at never-visited sites, weight 1/hatK_N.
// Light: atoms (x/N, L(x)) at sites with L(x) <= value_cap, weight 1/hatK_N.
PointMeasure build_point_measure(const walk::LocalTimeProfile& profile,
                                 const lattice::WiredDomain& domain,
                                 const ScaleParams& params, MeasureKind kind,
                                 double value_cap = 0.0);

struct FirstMomentReport {
  double exact = 0.0;
  double limit = 0.0;
};

// Exact Gaussian-tail first moment of the thick-point measure above level b
// and its continuum limit c_hat (alpha lambda)^{-1} e^{-alpha lambda b}
// int r^D(x)^{2 lambda^2} dx (midpoint quadrature on a 200x200 grid, points
// within 2/N of the boundary dropped).
FirstMomentReport thick_first_moment(const green::GreenOperator& green,
                                     const potential::PotentialKernel& kernel,
                                     const ScaleParams& params,
                                     const lattice::ContinuumDomain& domain,
                                     double b = 0.0);

// (1/hatK_N) sum_x exp(-t_N/G(x,x)): exact mean of the kappa_N total mass.
double avoided_first_moment(const green::GreenOperator& green,
                            const potential::PotentialKernel& kernel,
                            const ScaleParams& params);

// Limit value-distribution of O(1) local times: unit atom at 0 plus the
// density sum_n (alpha^2 theta/2)^{n+1} l^n / (n!(n+1)!).
class MuMeasure {
 public:
  explicit MuMeasure(double theta);

  double theta() const { return theta_; }
  double coefficient() const { return coef_; }  // alpha^2 theta / 2 = 4 pi theta

  double density(double l) const;
  double laplace_closed(double s) const;      // exp(alpha^2 theta/(2s))
  double laplace_series(double s) const;      // termwise exact integrals
  double laplace_quadrature(double s) const;  // atom + Simpson of density
  double cdf(double l) const;                 // atom + adaptive quadrature

 private:
  double theta_;
  double coef_;
};

struct LightHistogram {
  std::vector<double> bin_lo, bin_hi;
  std::vector<double> empirical;  // counts/(hatK_N * replicas)
  std::vector<double> mu_target;  // mu mass of the same bin
  double atom_empirical = 0.0;    // exact-zero mass, kappa_N normalization
  double atom_ratio = 0.0;        // vs mu's unit atom
  double fitted_c = 0.0;          // Corollary-4.4 bound constant
  double eta_conversion = 0.0;    // sqrt(log N)/hatK_N = 1/K_N at lambda=sqrt(theta)
};

LightHistogram light_point_histogram(const std::vector<walk::LocalTimeProfile>& profiles,
                                     const lattice::WiredDomain& domain,
                                     const ScaleParams& params, double value_cap,
                                     int bins = 16);

}  // namespace gfflab::measures
