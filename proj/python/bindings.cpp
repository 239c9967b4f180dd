#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "gfflab/cli.hpp"
#include "gfflab/dgff.hpp"
#include "gfflab/green.hpp"
#include "gfflab/isomorphism.hpp"
#include "gfflab/lattice.hpp"
#include "gfflab/measures.hpp"
#include "gfflab/potential.hpp"
#include "gfflab/stats.hpp"
#include "gfflab/walk.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace gfflab;

namespace {

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

PYBIND11_MODULE(_gfflab, m) {
  m.doc() = "Random-walk local time and DGFF laboratory on wired lattice domains";

  m.attr("g") = potential::kG;
  m.attr("c0") = potential::c0();

  py::class_<lattice::ContinuumDomain>(m, "ContinuumDomain")
      .def_static("disc", &lattice::ContinuumDomain::disc, "cx"_a, "cy"_a, "radius"_a)
      .def_static("rectangle", &lattice::ContinuumDomain::rectangle, "x0"_a, "y0"_a,
                  "x1"_a, "y1"_a)
      .def_static("polygon", &lattice::ContinuumDomain::polygon, "vertices"_a)
      .def("contains", &lattice::ContinuumDomain::contains, "x"_a, "y"_a)
      .def("boundary_distance_inf", &lattice::ContinuumDomain::boundary_distance_inf,
           "x"_a, "y"_a)
      .def("__repr__", &lattice::ContinuumDomain::describe);

  py::class_<lattice::WiredDomain>(m, "WiredDomain")
      .def_property_readonly("n", &lattice::WiredDomain::n)
      .def_readonly("N", &lattice::WiredDomain::N)
      .def_readonly("pi_rho", &lattice::WiredDomain::pi_rho)
      .def_readonly("sites", &lattice::WiredDomain::sites)
      .def_readonly("boundary_edge_count", &lattice::WiredDomain::boundary_edge_count)
      .def("index_of", &lattice::WiredDomain::index_of, "ix"_a, "iy"_a)
      .def("to_csv", [](const lattice::WiredDomain& d) { return lattice::to_csv(d); });

  m.def("discretize", &lattice::discretize, "domain"_a, "N"_a);
  m.def("square_domain", &lattice::square_domain, "m"_a);
  m.def("validate", [](const lattice::WiredDomain& d) {
    const auto rep = lattice::validate(d);
    py::dict out;
    out["n"] = rep.n;
    out["pi_rho"] = rep.pi_rho;
    out["bounding_box"] = rep.bounding_box;
    return out;
  });

  py::class_<potential::PotentialKernel>(m, "PotentialKernel")
      .def(py::init<double>(), "cutoff_radius"_a = 64.0)
      .def("__call__", &potential::PotentialKernel::operator(), "x"_a, "y"_a)
      .def("check_harmonicity", &potential::PotentialKernel::check_harmonicity,
           "window_radius"_a);

  py::class_<green::GreenOperator>(m, "GreenOperator")
      .def(py::init<const lattice::WiredDomain&, int>(), "domain"_a,
           "dense_limit"_a = 2000, py::keep_alive<1, 2>())
      .def_property_readonly("n", &green::GreenOperator::n)
      .def("entry", &green::GreenOperator::entry, "x"_a, "y"_a)
      .def("column",
           [](const green::GreenOperator& g, int site) {
             const Eigen::VectorXd c = g.column(site);
             return std::vector<double>(c.data(), c.data() + c.size());
           })
      .def("diagonal", [](const green::GreenOperator& g,
                          const potential::PotentialKernel& kernel) {
        const Eigen::VectorXd& d = g.diagonal(kernel);
        return std::vector<double>(d.data(), d.data() + d.size());
      });

  m.def("green_via_kernel", &green::green_via_kernel, "green"_a, "kernel"_a, "x"_a,
        "y"_a);
  m.def(
      "conformal_radius",
      [](const lattice::ContinuumDomain& d, int N, double px, double py) {
        return green::conformal_radius(d, N, px, py);
      },
      "domain"_a, "N"_a, "x"_a, "y"_a);
  m.def("continuum_green_disc", &green::continuum_green_disc, "x"_a, "y"_a);

  m.def(
      "sample_field",
      [](const green::GreenOperator& g, std::uint64_t seed, std::uint64_t replica) {
        rng::Stream s(seed, rng::Purpose::kField, replica);
        return dgff::sample_field(g, s, rng::stream_tag(seed, rng::Purpose::kField, replica))
            .values;
      },
      "green"_a, "master_seed"_a, "replica"_a = 0);

  py::class_<walk::LocalTimeProfile>(m, "LocalTimeProfile")
      .def_readonly("t", &walk::LocalTimeProfile::t)
      .def_readonly("L", &walk::LocalTimeProfile::L)
      .def_readonly("visits", &walk::LocalTimeProfile::visits)
      .def_readonly("n_excursions", &walk::LocalTimeProfile::n_excursions);

  m.def(
      "sample_local_time",
      [](const lattice::WiredDomain& d, double t, const std::string& mode,
         std::uint64_t seed, std::uint64_t replica) {
        walk::Walker walker(d);
        rng::Stream s(seed, rng::Purpose::kWalk, replica);
        const auto m_ = mode == "visit-count" ? walk::HoldingMode::kVisitCount
                                              : walk::HoldingMode::kExponentialHolding;
        return walker.sample_local_time(t, m_, s);
      },
      "domain"_a, "t"_a, "mode"_a = "exponential-holding", "master_seed"_a = 1,
      "replica"_a = 0);
  m.def("avoided_set", &walk::avoided_set, "profile"_a);
  m.def(
      "cover_time",
      [](const lattice::WiredDomain& d, std::uint64_t seed, std::uint64_t replica) {
        walk::Walker walker(d);
        rng::Stream s(seed, rng::Purpose::kCover, replica);
        const auto res = walker.cover_time(s);
        return py::make_tuple(res.t_cover, res.natural_steps, res.excursions);
      },
      "domain"_a, "master_seed"_a = 1, "replica"_a = 0);

  m.def(
      "kac_moment",
      [](const green::GreenOperator& g, const std::vector<double>& f, int n) {
        return isomorphism::kac_moment(g, to_vector(f), n);
      },
      "green"_a, "f"_a, "n"_a);
  m.def(
      "exp_moment",
      [](const green::GreenOperator& g, const std::vector<double>& f, double t) {
        return isomorphism::exp_moment(g, to_vector(f), t);
      },
      "green"_a, "f"_a, "t"_a);

  py::class_<measures::ScaleParams>(m, "ScaleParams")
      .def_readonly("N", &measures::ScaleParams::N)
      .def_readonly("g", &measures::ScaleParams::g)
      .def_readonly("c0", &measures::ScaleParams::c0)
      .def_readonly("alpha", &measures::ScaleParams::alpha)
      .def_readonly("a_N", &measures::ScaleParams::a_N)
      .def_readonly("t_N", &measures::ScaleParams::t_N)
      .def_readonly("K_N", &measures::ScaleParams::K_N)
      .def_readonly("hatK_N", &measures::ScaleParams::hatK_N)
      .def_readonly("m_N", &measures::ScaleParams::m_N)
      .def_readonly("c_hat", &measures::ScaleParams::c_hat);

  m.def(
      "scale_params",
      [](int N, std::optional<double> lambda, std::optional<double> theta,
         std::optional<double> a_override, std::optional<double> t_override) {
        measures::ScaleOverrides ov;
        ov.a_N = a_override;
        ov.t_N = t_override;
        return measures::scale_params(N, lambda, theta, ov);
      },
      "N"_a, "lambda"_a = std::nullopt, "theta"_a = std::nullopt,
      "a_override"_a = std::nullopt, "t_override"_a = std::nullopt);

  m.def(
      "avoided_first_moment",
      [](const green::GreenOperator& g, const potential::PotentialKernel& k,
         const measures::ScaleParams& p) { return measures::avoided_first_moment(g, k, p); },
      "green"_a, "kernel"_a, "params"_a);

  py::class_<measures::MuMeasure>(m, "MuMeasure")
      .def(py::init<double>(), "theta"_a)
      .def("density", &measures::MuMeasure::density, "l"_a)
      .def("laplace_closed", &measures::MuMeasure::laplace_closed, "s"_a)
      .def("laplace_series", &measures::MuMeasure::laplace_series, "s"_a)
      .def("laplace_quadrature", &measures::MuMeasure::laplace_quadrature, "s"_a)
      .def("cdf", &measures::MuMeasure::cdf, "l"_a);

  m.def(
      "ks_two_sample",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        const auto r = stats::ks_two_sample({a, ""}, {b, ""});
        return py::make_tuple(r.statistic, r.p_value);
      },
      "a"_a, "b"_a);

  m.def(
      "run_experiment",
      [](const std::vector<std::string>& args) {
        return cli::run_experiment(cli::parse_args(args));
      },
      "args"_a, "Runs a CLI command in-process; returns the exit code.");
}
