#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "susy/cli.hpp"
#include "susy/dirac.hpp"
#include "susy/errors.hpp"
#include "susy/nr.hpp"
#include "susy/oracle.hpp"

namespace py = pybind11;
using namespace susy;

namespace {

using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

py::array_t<std::complex<double>> evaluate(const expalg::ExpoPoly& f, const RealArray& rho)
{
    const auto r = rho.unchecked<1>();
    py::array_t<std::complex<double>> out(r.shape(0));
    auto o = out.mutable_unchecked<1>();
    for (py::ssize_t i = 0; i < r.shape(0); ++i) {
        o(i) = expalg::eval(f, r(i));
    }
    return out;
}

py::array_t<std::complex<double>> evaluate(const dirac::SpinorFn& f, const RealArray& rho)
{
    const auto r = rho.unchecked<1>();
    const auto width = static_cast<py::ssize_t>(f.components.size());
    py::array_t<std::complex<double>> out({r.shape(0), width});
    auto o = out.mutable_unchecked<2>();
    for (py::ssize_t i = 0; i < r.shape(0); ++i) {
        const auto v = dirac::eval(f, r(i));
        for (py::ssize_t c = 0; c < width; ++c) {
            o(i, c) = v(c);
        }
    }
    return out;
}

dirac::Family family(const std::string& name)
{
    if (name.size() != 1) {
        throw InvalidParameters("family must be one of a, b, c, d");
    }
    return dirac::family_from_char(name[0]);
}

py::tuple run_cli(const std::vector<std::string>& args)
{
    std::vector<std::string> full{"susy-ladder"};
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : full) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int status = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return py::make_tuple(status, out.str(), err.str());
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Ladder hierarchies, closed-form spectra and numerical cross-checks";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidParameters>(m, "InvalidParameters", base.ptr());
    py::register_exception<NoBoundStates>(m, "NoBoundStates", base.ptr());
    py::register_exception<DegenerateDenominator>(m, "DegenerateDenominator", base.ptr());
    py::register_exception<SingularXi>(m, "SingularXi", base.ptr());
    py::register_exception<NegativeRadicand>(m, "NegativeRadicand", base.ptr());
    py::register_exception<GridTooCoarse>(m, "GridTooCoarse", base.ptr());
    py::register_exception<TailNotDecayed>(m, "TailNotDecayed", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<DivergentIntegral>(m, "DivergentIntegral", base.ptr());
    py::register_exception<ContextMismatch>(m, "ContextMismatch", base.ptr());
    py::register_exception<ClosureError>(m, "ClosureError", base.ptr());

    py::class_<PhysicalParams>(m, "PhysicalParams")
        .def(py::init([](double hbar, double mass, double c, double e, double k, double pz, double ell) {
                 PhysicalParams p{hbar, mass, c, e, k, pz, ell};
                 p.validate();
                 return p;
             }),
             py::kw_only(), py::arg("hbar") = 1.0, py::arg("m") = 1.0, py::arg("c") = 1.0, py::arg("e") = 1.0,
             py::arg("k") = 1.0, py::arg("pz") = 1.0, py::arg("ell") = 0.0)
        .def_readwrite("hbar", &PhysicalParams::hbar)
        .def_readwrite("m", &PhysicalParams::m)
        .def_readwrite("c", &PhysicalParams::c)
        .def_readwrite("e", &PhysicalParams::e)
        .def_readwrite("k", &PhysicalParams::k)
        .def_readwrite("pz", &PhysicalParams::pz)
        .def_readwrite("ell", &PhysicalParams::ell)
        .def_property_readonly("lam", &PhysicalParams::lambda)
        .def("has_bound_states", &PhysicalParams::has_bound_states);

    py::class_<NRParams>(m, "NRParams")
        .def(py::init([](double a, double b) {
                 NRParams p{a, b};
                 p.validate();
                 return p;
             }),
             py::arg("a"), py::arg("b"))
        .def_readonly("a", &NRParams::a)
        .def_readonly("b", &NRParams::b)
        .def_static("from_physical", &NRParams::from_physical)
        .def("__repr__", [](const NRParams& p) {
            return "NRParams(a=" + std::to_string(p.a) + ", b=" + std::to_string(p.b) + ")";
        });

    py::class_<DiracParams>(m, "DiracParams")
        .def(py::init([](double a, double b, double d0, double mbar) {
                 DiracParams p{a, b, d0, mbar};
                 p.validate();
                 return p;
             }),
             py::arg("a"), py::arg("b"), py::arg("d0"), py::arg("mbar"))
        .def_readonly("a", &DiracParams::a)
        .def_readonly("b", &DiracParams::b)
        .def_readonly("d0", &DiracParams::d0)
        .def_readonly("mbar", &DiracParams::mbar)
        .def_static("from_physical", &DiracParams::from_physical);

    // scalar hierarchy
    m.def("nr_energy", &nr::spectrum_radial, py::arg("params"), py::arg("n"));
    m.def("nr_physical_energy", &nr::spectrum_physical, py::arg("phys"), py::arg("n"));
    m.def("nr_factorization_energy", &nr::factorization_energy, py::arg("params"), py::arg("n"));
    m.def(
        "nr_eigenfunction",
        [](const NRParams& p, int n, const RealArray& rho, bool normalized) {
            const auto g = nr::eigenfunction(p, n);
            return evaluate(normalized ? nr::normalize(g) : g, rho);
        },
        py::arg("params"), py::arg("n"), py::arg("rho"), py::arg("normalized") = false);
    m.def(
        "nr_potential",
        [](const NRParams& p, int n, const RealArray& rho) { return evaluate(nr::potential(p, n), rho); },
        py::arg("params"), py::arg("n"), py::arg("rho"));
    m.def(
        "nr_superpotential",
        [](const NRParams& p, int n, const RealArray& rho) { return evaluate(nr::superpotential(p, n), rho); },
        py::arg("params"), py::arg("n"), py::arg("rho"));
    m.def("nr_nodes", [](const NRParams& p, int n) { return nr::find_nodes(nr::eigenfunction(p, n), nr::default_rho_max(p, n)); },
          py::arg("params"), py::arg("n"));
    m.def("nr_default_rho_max", &nr::default_rho_max, py::arg("params"), py::arg("n"));

    // Dirac hierarchy
    m.def("dirac_dn", &dirac::dn, py::arg("params"), py::arg("n"));
    m.def(
        "dirac_eigenvalue", [](const DiracParams& p, int n, const std::string& fam) {
            return dirac::eigenvalue(p, n, family(fam));
        },
        py::arg("params"), py::arg("n"), py::arg("family"));
    m.def("dirac_physical_energy", &dirac::spectrum_dirac, py::arg("phys"), py::arg("n"), py::arg("sign") = 1);
    m.def(
        "dirac_eigenfunction",
        [](const DiracParams& p, int n, const std::string& fam, const RealArray& rho, bool normalized) {
            const auto f = family(fam);
            return evaluate(normalized ? dirac::normalized_chain(p, n, f) : dirac::eigenfunction_chain(p, n, f), rho);
        },
        py::arg("params"), py::arg("n"), py::arg("family"), py::arg("rho"), py::arg("normalized") = false);
    m.def(
        "dirac_xi_residual",
        [](const DiracParams& p, int n, const std::vector<double>& radii) {
            const auto r = dirac::superpotential_matrix_residual(p, n, radii);
            return py::make_tuple(r.max_residual, r.skipped);
        },
        py::arg("params"), py::arg("n"), py::arg("radii"));
    m.def("dirac_default_rho_max", &dirac::default_rho_max, py::arg("params"), py::arg("n"));

    // numerical oracle
    m.def(
        "fd_eigenvalues",
        [](const NRParams& p, int count, double rho_max, int points) {
            return oracle::fd_schrodinger_eigs(
                p, count, oracle::RadialGrid::with_fraction(rho_max, points, oracle::eigen_rho_min_fraction));
        },
        py::arg("params"), py::arg("count"), py::arg("rho_max"), py::arg("points") = 4096);
    m.def(
        "dirac_scan",
        [](const DiracParams& p, double lo, double hi, double rho_max, int points) {
            return oracle::dirac_spectrum_scan(
                p, {lo, hi}, oracle::RadialGrid::with_fraction(rho_max, points, oracle::scan_rho_min_fraction));
        },
        py::arg("params"), py::arg("lo"), py::arg("hi"), py::arg("rho_max"), py::arg("points") = oracle::scan_points);

    m.def("run_cli", &run_cli, py::arg("args"),
          "Runs the command line tool in process and returns (exit_status, stdout, stderr).");
}
