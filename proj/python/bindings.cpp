#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "plasmon/chain.hpp"
#include "plasmon/coupling.hpp"
#include "plasmon/oracle.hpp"
#include "plasmon/sphere_qnm.hpp"
#include "plasmon/special.hpp"

namespace py = pybind11;
using namespace plasmon;

namespace {

coupling::Orientation orientation(const std::string& s) {
  if (s == "horizontal") return coupling::Orientation::horizontal;
  if (s == "vertical") return coupling::Orientation::vertical;
  throw ContractViolation("orientation must be 'horizontal' or 'vertical'");
}

qnm::SphereMode dipole(double radius, const material::DrudeMaterial& mat, double eps_out) {
  qnm::SphereGeometry g;
  g.radius = radius;
  return qnm::normalize(qnm::plasmon_mode(1, g, mat, material::Background{eps_out}));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sphere QNMs, coupled-mode dimers and chains";

  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);
  py::register_exception<Error>(m, "PlasmonError", PyExc_RuntimeError);

  py::class_<material::DrudeMaterial>(m, "DrudeMaterial")
      .def(py::init<double, double, double>(), py::arg("eps_inf"), py::arg("omega_p"), py::arg("gamma_s"))
      .def_readwrite("eps_inf", &material::DrudeMaterial::eps_inf)
      .def_readwrite("omega_p", &material::DrudeMaterial::omega_p)
      .def_readwrite("gamma_s", &material::DrudeMaterial::gamma_s)
      .def_static("silver", [] { return *material::find_preset(material::builtin_presets(), "silver"); })
      .def_static("darkmode", [] { return *material::find_preset(material::builtin_presets(), "darkmode"); })
      .def("__repr__", [](const material::DrudeMaterial& d) {
        return "DrudeMaterial(" + std::to_string(d.eps_inf) + ", " + std::to_string(d.omega_p) + ", " +
               std::to_string(d.gamma_s) + ")";
      });

  py::class_<qnm::SphereMode>(m, "SphereMode")
      .def_property_readonly("ell", [](const qnm::SphereMode& s) { return s.idx.l; })
      .def_property_readonly("radius", [](const qnm::SphereMode& s) { return s.geometry.radius; })
      .def_readonly("omega", &qnm::SphereMode::omega)
      .def_readonly("zeta", &qnm::SphereMode::zeta)
      .def_readonly("residual", &qnm::SphereMode::residual)
      .def("normalization_residual", &qnm::normalization_residual);

  m.def("eps_in", &material::eps_in, py::arg("material"), py::arg("omega"));
  m.def("sigma", py::overload_cast<const material::DrudeMaterial&, cplx>(&material::sigma), py::arg("material"),
        py::arg("omega"));
  m.def("sph_bessel_j", &special::sph_bessel_j, py::arg("l"), py::arg("x"));
  m.def("sph_hankel2", &special::sph_hankel2, py::arg("l"), py::arg("x"));

  m.def(
      "single_sphere_modes",
      [](double radius, int ell, const material::DrudeMaterial& mat, double eps_out) {
        qnm::SphereGeometry g;
        g.radius = radius;
        auto found = qnm::solve_modes(ell, g, mat, material::Background{eps_out}, qnm::default_window(mat));
        std::vector<qnm::SphereMode> out;
        for (auto& mode : found.modes) out.push_back(qnm::normalize(mode));
        return out;
      },
      py::arg("radius"), py::arg("ell") = 1, py::arg("material") = material::DrudeMaterial{5.0, 8.9, 0.1},
      py::arg("eps_out") = 1.0, "Normalized TM modes in the default window, sorted by Re(omega).");

  m.def(
      "kappa",
      [](double radius, double d_over_a, const std::string& orient, const material::DrudeMaterial& mat,
         int order) {
        coupling::KappaOptions o;
        o.orders = {order, order, order};
        return coupling::kappa(dipole(radius, mat, 1.0), {d_over_a * radius, orientation(orient)}, o).kappa;
      },
      py::arg("radius"), py::arg("d_over_a"), py::arg("orientation") = "horizontal",
      py::arg("material") = material::DrudeMaterial{5.0, 8.9, 0.1}, py::arg("order") = 24);

  m.def(
      "dimer",
      [](double radius, double d_over_a, const std::string& orient, const material::DrudeMaterial& mat) {
        const auto dm = coupling::build_dimer(dipole(radius, mat, 1.0), {d_over_a * radius, orientation(orient)});
        return py::make_tuple(dm.eigenvalues(0), dm.eigenvalues(1), dm.kappa,
                              coupling::superradiance_metric(coupling::split(dm.matrix).W).metric);
      },
      py::arg("radius"), py::arg("d_over_a"), py::arg("orientation") = "horizontal",
      py::arg("material") = material::DrudeMaterial{5.0, 8.9, 0.1},
      "Returns (omega_plus, omega_minus, kappa, superradiance_metric).");

  m.def(
      "chain_eigenvalues",
      [](int n, cplx omega0, cplx kappa, double gamma_e) {
        const auto e = numerics::eig_dense(chain::build_heff({n, omega0, kappa, gamma_e}));
        return std::vector<cplx>(e.values.data(), e.values.data() + e.values.size());
      },
      py::arg("n"), py::arg("omega0"), py::arg("kappa"), py::arg("gamma_e"));

  m.def(
      "transmission",
      [](int n, cplx omega0, cplx kappa, double gamma_e, const std::vector<double>& omega_e) {
        return chain::transmission_spectrum({n, omega0, kappa, gamma_e}, omega_e).T;
      },
      py::arg("n"), py::arg("omega0"), py::arg("kappa"), py::arg("gamma_e"), py::arg("omega_e"));

  m.def(
      "transmission_both",
      [](int n, cplx omega0, cplx kappa, double gamma_e, double omega_e) {
        const auto v = chain::transmission_both({n, omega0, kappa, gamma_e}, omega_e);
        return py::make_tuple(v.product, v.resolvent);
      },
      py::arg("n"), py::arg("omega0"), py::arg("kappa"), py::arg("gamma_e"), py::arg("omega_e"));

  m.def(
      "oracle_resonances",
      [](double radius, double d_over_a, const std::string& orient, std::tuple<double, double, double, double> w,
         int ell_max, const material::DrudeMaterial& mat) {
        const auto p = oracle::dimer_problem(radius, d_over_a * radius, orientation(orient), mat,
                                             material::Background{1.0}, ell_max);
        py::list out;
        for (const auto& r : oracle::find_resonances(
                 p, {std::get<0>(w), std::get<1>(w), std::get<2>(w), std::get<3>(w)}))
          out.append(py::make_tuple(r.omega, r.sigma_min, r.converged));
        return out;
      },
      py::arg("radius"), py::arg("d_over_a"), py::arg("orientation"), py::arg("window"), py::arg("ell_max") = 4,
      py::arg("material") = material::DrudeMaterial{5.0, 8.9, 0.1},
      "Collocation resonances in window (re_lo, re_hi, im_lo, im_hi): list of (omega, sigma_min, converged).");
}
