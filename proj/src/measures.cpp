#include "gfflab/measures.hpp"

#include <cmath>

#include "gfflab/errors.hpp"
#include "gfflab/stats.hpp"

namespace gfflab::measures {

ScaleParams scale_params(int N, std::optional<double> lambda, std::optional<double> theta,
                         ScaleOverrides overrides) {
  if (N < 4) throw BadParameterRange("scale_params: N must be >= 4");
  if (lambda && !(*lambda > 0.0 && *lambda < 1.0))
    throw BadParameterRange("scale_params: lambda must be in (0,1)");
  if (theta && !(*theta > 0.0))
    throw BadParameterRange("scale_params: theta must be > 0");
  if (!lambda && !theta)
    throw BadParameterRange("scale_params: need lambda or theta");
  ScaleParams p;
  p.N = N;
  p.lambda = lambda;
  p.theta = theta;
  p.g = potential::kG;
  p.c0 = potential::c0();
  p.alpha = 2.0 / std::sqrt(p.g);
  const double logN = std::log(static_cast<double>(N));
  if (lambda) {
    p.a_N = overrides.a_N ? *overrides.a_N : 2.0 * std::sqrt(p.g) * *lambda * logN;
    p.K_N = N * static_cast<double>(N) *
            std::exp(-p.a_N * p.a_N / (2.0 * p.g * logN)) / std::sqrt(logN);
    p.c_hat = std::exp(-2.0 * p.c0 * *lambda * *lambda / p.g) /
              std::sqrt(2.0 * M_PI * p.g);
  }
  if (theta) {
    p.t_N = overrides.t_N ? *overrides.t_N : 2.0 * p.g * *theta * logN * logN;
    p.hatK_N = N * static_cast<double>(N) * std::exp(-p.t_N / (p.g * logN));
  }
  p.m_N = 2.0 * std::sqrt(p.g) * logN - 0.75 * std::sqrt(p.g) * std::log(logN);
  return p;
}

PointMeasure build_point_measure(const dgff::FieldSample& field,
                                 const lattice::WiredDomain& domain,
                                 const ScaleParams& params, MeasureKind kind) {
  if (kind != MeasureKind::kThick)
    throw KindMismatch("build_point_measure: a field sample only builds the thick kind");
  if (!params.lambda)
    throw BadParameterRange("build_point_measure: thick kind needs lambda params");
  if (static_cast<int>(field.values.size()) != domain.n())
    throw KindMismatch("build_point_measure: field length mismatch");
  PointMeasure m;
  m.kind = kind;
  m.weight = 1.0 / params.K_N;
  m.atoms.reserve(field.values.size());
  const double N = params.N;
  for (int i = 0; i < domain.n(); ++i)
    m.atoms.push_back({domain.sites[i][0] / N, domain.sites[i][1] / N,
                       field.values[i] - params.a_N});
  return m;
}

PointMeasure build_point_measure(const walk::LocalTimeProfile& profile,
                                 const lattice::WiredDomain& domain,
                                 const ScaleParams& params, MeasureKind kind,
                                 double value_cap) {
  if (kind == MeasureKind::kThick)
    throw KindMismatch("build_point_measure: the thick kind needs a field sample");
  if (!params.theta)
    throw BadParameterRange("build_point_measure: avoided/light kinds need theta params");
  if (static_cast<int>(profile.L.size()) != domain.n())
    throw KindMismatch("build_point_measure: profile length mismatch");
  PointMeasure m;
  m.kind = kind;
  m.weight = 1.0 / params.hatK_N;
  const double N = params.N;
  for (int i = 0; i < domain.n(); ++i) {
    if (kind == MeasureKind::kAvoided) {
      if (profile.visits[i] == 0)
        m.atoms.push_back({domain.sites[i][0] / N, domain.sites[i][1] / N, 0.0});
    } else {
      if (profile.L[i] <= value_cap)
        m.atoms.push_back(
            {domain.sites[i][0] / N, domain.sites[i][1] / N, profile.L[i]});
    }
  }
  return m;
}

namespace {

// r^D on the quadrature grid: closed form for the disc, Green-diagonal
// inversion of the Thm-2.1(2) asymptotic elsewhere.
double conformal_radius_for_quadrature(const lattice::ContinuumDomain& domain,
                                       const green::GreenOperator& green,
                                       const Eigen::VectorXd& diag,
                                       const ScaleParams& params, double px, double py) {
  if (domain.is_disc()) {
    const auto& d = domain.as_disc();
    const double q2 = (px - d.cx) * (px - d.cx) + (py - d.cy) * (py - d.cy);
    return (d.radius * d.radius - q2) / d.radius;
  }
  const int site = green.domain().index_of(static_cast<int>(std::floor(px * params.N)),
                                           static_cast<int>(std::floor(py * params.N)));
  if (site < 0) return 0.0;
  return std::exp((diag[site] - params.g * std::log(static_cast<double>(params.N)) -
                   params.c0) /
                  params.g);
}

}  // namespace

FirstMomentReport thick_first_moment(const green::GreenOperator& green,
                                     const potential::PotentialKernel& kernel,
                                     const ScaleParams& params,
                                     const lattice::ContinuumDomain& domain, double b) {
  if (!params.lambda) throw BadParameterRange("thick_first_moment: needs lambda params");
  const Eigen::VectorXd& diag = green.diagonal(kernel);
  FirstMomentReport rep;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < diag.size(); ++i)
    sum += stats::normal_upper_tail((params.a_N + b) / std::sqrt(diag[i]));
  rep.exact = sum / params.K_N;

  // Midpoint rule, 200x200 over the bounding box, boundary layer of 2/N
  // dropped.
  const auto bb = domain.bounding_box();
  constexpr int kGrid = 200;
  const double hx = (bb[2] - bb[0]) / kGrid;
  const double hy = (bb[3] - bb[1]) / kGrid;
  const double margin = 2.0 / params.N;
  const double expo = 2.0 * *params.lambda * *params.lambda;
  double integral = 0.0;
  for (int i = 0; i < kGrid; ++i)
    for (int j = 0; j < kGrid; ++j) {
      const double px = bb[0] + (i + 0.5) * hx;
      const double py = bb[1] + (j + 0.5) * hy;
      if (domain.boundary_distance_inf(px, py) <= margin) continue;
      const double r =
          conformal_radius_for_quadrature(domain, green, diag, params, px, py);
      if (r > 0.0) integral += std::pow(r, expo);
    }
  integral *= hx * hy;
  const double al = params.alpha * *params.lambda;
  rep.limit = params.c_hat / al * std::exp(-al * b) * integral;
  return rep;
}

double avoided_first_moment(const green::GreenOperator& green,
                            const potential::PotentialKernel& kernel,
                            const ScaleParams& params) {
  if (!params.theta) throw BadParameterRange("avoided_first_moment: needs theta params");
  const Eigen::VectorXd& diag = green.diagonal(kernel);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < diag.size(); ++i) sum += std::exp(-params.t_N / diag[i]);
  return sum / params.hatK_N;
}

MuMeasure::MuMeasure(double theta) : theta_(theta) {
  if (!(theta > 0.0)) throw BadParameterRange("MuMeasure: theta must be > 0");
  const double alpha2 = 4.0 / potential::kG;  // alpha^2 = 8 pi
  coef_ = alpha2 * theta / 2.0;
}

double MuMeasure::density(double l) const {
  if (l < 0.0) return 0.0;
  // sum_n coef^{n+1} l^n / (n!(n+1)!), truncated when the next term drops
  // below 1e-14 of the partial sum.
  double term = coef_;  // n = 0
  double sum = term;
  for (int n = 1; n < 400; ++n) {
    term *= coef_ * l / (static_cast<double>(n) * (n + 1));
    sum += term;
    if (std::fabs(term) < 1e-14 * std::fabs(sum)) break;
  }
  return sum;
}

double MuMeasure::laplace_closed(double s) const {
  if (!(s > 0.0)) throw BadParameterRange("laplace: s must be > 0");
  return std::exp(coef_ / s);
}

double MuMeasure::laplace_series(double s) const {
  if (!(s > 0.0)) throw BadParameterRange("laplace: s must be > 0");
  // atom + sum_n coef^{n+1}/( (n+1)! s^{n+1} ), each term the exact integral
  // of the density term against e^{-s l}.
  double sum = 1.0;
  double term = 1.0;
  for (int m = 1; m < 400; ++m) {
    term *= coef_ / (s * m);
    sum += term;
    if (term < 1e-15 * sum) break;
  }
  return sum;
}

double MuMeasure::laplace_quadrature(double s) const {
  if (!(s > 0.0)) throw BadParameterRange("laplace: s must be > 0");
  // density(l) e^{-sl} decays once s l dominates 2 sqrt(coef l); cut where
  // the exponent margin passes 46 (~1e-20).
  const double u = (std::sqrt(coef_) + std::sqrt(coef_ + 46.0 * s)) / s;
  const double lmax = u * u;
  const int segments = 4000;  // composite Simpson; integrand is smooth
  const double h = lmax / segments;
  auto f = [&](double l) { return density(l) * std::exp(-s * l); };
  double acc = f(0.0) + f(lmax);
  for (int k = 1; k < segments; ++k) acc += f(k * h) * (k % 2 == 1 ? 4.0 : 2.0);
  return 1.0 + acc * h / 3.0;
}

double MuMeasure::cdf(double l) const {
  if (l < 0.0) return 0.0;
  if (l == 0.0) return 1.0;
  const int segments = 2000;
  const double h = l / segments;
  double acc = density(0.0) + density(l);
  for (int k = 1; k < segments; ++k) acc += density(k * h) * (k % 2 == 1 ? 4.0 : 2.0);
  return 1.0 + acc * h / 3.0;
}

LightHistogram light_point_histogram(const std::vector<walk::LocalTimeProfile>& profiles,
                                     const lattice::WiredDomain& domain,
                                     const ScaleParams& params, double value_cap,
                                     int bins) {
  if (profiles.empty()) throw BadParameterRange("light_point_histogram: no profiles");
  if (!(value_cap > 0.0)) throw BadParameterRange("light_point_histogram: b must be > 0");
  if (!params.theta)
    throw BadParameterRange("light_point_histogram: needs theta params");
  LightHistogram h;
  const double width = value_cap / bins;
  h.bin_lo.resize(bins);
  h.bin_hi.resize(bins);
  h.empirical.assign(bins, 0.0);
  h.mu_target.resize(bins);
  for (int k = 0; k < bins; ++k) {
    h.bin_lo[k] = k * width;
    h.bin_hi[k] = (k + 1) * width;
  }
  long long zeros = 0, light = 0;
  for (const auto& prof : profiles) {
    if (static_cast<int>(prof.L.size()) != domain.n())
      throw KindMismatch("light_point_histogram: profile length mismatch");
    for (int i = 0; i < domain.n(); ++i) {
      if (prof.visits[i] == 0) {
        ++zeros;
        ++light;
        continue;
      }
      const double v = prof.L[i];
      if (v > value_cap) continue;
      ++light;
      int k = static_cast<int>(v / width);
      if (k >= bins) k = bins - 1;
      h.empirical[k] += 1.0;
    }
  }
  const double norm = params.hatK_N * static_cast<double>(profiles.size());
  for (int k = 0; k < bins; ++k) h.empirical[k] /= norm;
  const MuMeasure mu(*params.theta);
  for (int k = 0; k < bins; ++k) {
    // 9-point Simpson per bin is plenty for the entire-function density.
    const int seg = 8;
    const double hh = width / seg;
    double acc = mu.density(h.bin_lo[k]) + mu.density(h.bin_hi[k]);
    for (int j = 1; j < seg; ++j)
      acc += mu.density(h.bin_lo[k] + j * hh) * (j % 2 == 1 ? 4.0 : 2.0);
    h.mu_target[k] = acc * hh / 3.0;
  }
  h.atom_empirical = static_cast<double>(zeros) / norm;
  h.atom_ratio = h.atom_empirical;  // mu atom has unit weight
  const double n_over_n2 =
      static_cast<double>(domain.n()) / (static_cast<double>(params.N) * params.N);
  h.fitted_c = (static_cast<double>(light) / norm) / n_over_n2;
  const double logN = std::log(static_cast<double>(params.N));
  h.eta_conversion = std::sqrt(logN) / params.hatK_N;
  return h;
}

}  // namespace gfflab::measures
