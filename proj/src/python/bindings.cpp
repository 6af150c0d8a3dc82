#include "fluxtune/atom_solver.hpp"
#include "fluxtune/config.hpp"
#include "fluxtune/noise.hpp"
#include "fluxtune/params.hpp"
#include "fluxtune/perturb.hpp"
#include "fluxtune/runner.hpp"
#include "fluxtune/schedule.hpp"
#include "fluxtune/table.hpp"
#include "fluxtune/version.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace fluxtune;

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Two-SQUID artificial atom / resonator simulator core";
    m.attr("__version__") = version;

    py::class_<DeviceParams>(m, "DeviceParams")
        .def(py::init([](double ej_ghz, double ec_ghz, double l0_nh,
                         double lr_nh, double cavity_ghz, double m1, double m2,
                         double m3, double zr_ohm, double aphi_phi0,
                         double aic_rel, double ac_e,
                         std::optional<double> ls_nh) {
                 DeviceParams p;
                 p.ej_ghz = ej_ghz;
                 p.ec_ghz = ec_ghz;
                 p.l0_nH = l0_nh;
                 p.lr_nH = lr_nh;
                 p.cavity_ghz = cavity_ghz;
                 p.m1_phi0_per_A = m1;
                 p.m2_phi0_per_A = m2;
                 p.m3_phi0_per_A = m3;
                 p.zr_ohm = zr_ohm;
                 p.aphi_phi0 = aphi_phi0;
                 p.aic_rel = aic_rel;
                 p.ac_e = ac_e;
                 p.ls_nH = ls_nh;
                 return p;
             }),
             py::arg("ej_ghz"), py::arg("ec_ghz"), py::arg("l0_nh"),
             py::arg("lr_nh"), py::arg("cavity_ghz"), py::arg("m1") = 40.0,
             py::arg("m2") = 40.0, py::arg("m3") = 35.0,
             py::arg("zr_ohm") = 50.0, py::arg("aphi_phi0") = 1e-6,
             py::arg("aic_rel") = 1e-6, py::arg("ac_e") = 1e-4,
             py::arg("ls_nh") = std::nullopt)
        .def_readwrite("ej_ghz", &DeviceParams::ej_ghz)
        .def_readwrite("ec_ghz", &DeviceParams::ec_ghz)
        .def_readwrite("l0_nh", &DeviceParams::l0_nH)
        .def_readwrite("lr_nh", &DeviceParams::lr_nH)
        .def_readwrite("cavity_ghz", &DeviceParams::cavity_ghz);

    py::class_<DerivedScales>(m, "DerivedScales")
        .def_readonly("ec", &DerivedScales::ec)
        .def_readonly("ej", &DerivedScales::ej)
        .def_readonly("eb", &DerivedScales::eb)
        .def_readonly("lambda_", &DerivedScales::lambda)
        .def_readonly("lr_prime_nh", &DerivedScales::lr_prime_nH)
        .def_readonly("omega0_ghz", &DerivedScales::omega0_ghz)
        .def_readonly("omegar_ghz", &DerivedScales::omegar_ghz)
        .def_readonly("omegar_prime_ghz", &DerivedScales::omegar_prime_ghz)
        .def_readonly("omegaj_ghz", &DerivedScales::omegaJ_ghz)
        .def_readonly("cavity_ghz", &DerivedScales::cavity_ghz)
        .def_readonly("c0_pf", &DerivedScales::c0_pF)
        .def_readonly("cj_ff", &DerivedScales::cj_fF);

    py::class_<ValidationReport>(m, "ValidationReport")
        .def_readonly("bound_uh", &ValidationReport::bound_uH)
        .def_readonly("margin", &ValidationReport::margin)
        .def_readonly("l0_ok", &ValidationReport::l0_ok)
        .def_readonly("lr_ok", &ValidationReport::lr_ok)
        .def_readonly("lambda_ok", &ValidationReport::lambda_ok)
        .def_readonly("all_ok", &ValidationReport::all_ok);

    m.def("derive_scales", &derive_scales, py::arg("params"));
    m.def("validate_params", &validate_params, py::arg("params"),
          py::arg("scales"), py::arg("margin") = 0.05,
          py::arg("lambda_max") = 0.3);

    py::class_<FluxPoint>(m, "FluxPoint")
        .def_static("from_f", &FluxPoint::from_f, py::arg("f"),
                    py::arg("f_prime"))
        .def_readonly("f", &FluxPoint::f)
        .def_readonly("f_prime", &FluxPoint::f_prime)
        .def_readonly("delta", &FluxPoint::delta);

    py::enum_<AtomForm>(m, "AtomForm")
        .value("exact", AtomForm::exact)
        .value("linearized", AtomForm::linearized);

    py::enum_<Engine>(m, "Engine")
        .value("exact", Engine::exact)
        .value("perturbative", Engine::perturbative);

    py::class_<CouplingSet>(m, "CouplingSet")
        .def_readonly("g", &CouplingSet::g)
        .def_readonly("g0", &CouplingSet::g0)
        .def_readonly("gz", &CouplingSet::gz)
        .def_readonly("gx", &CouplingSet::gx)
        .def_readonly("g_over_wc", &CouplingSet::g_over_wc);

    py::class_<BasisSpec>(m, "BasisSpec")
        .def(py::init<int, int>(), py::arg("n_fock"), py::arg("n_charge"))
        .def_readonly("n_fock", &BasisSpec::n_fock)
        .def_readonly("n_charge", &BasisSpec::n_charge);

    py::class_<AtomSolver>(m, "AtomSolver")
        .def(py::init<const DerivedScales&, const BasisSpec&>(),
             py::arg("scales"), py::arg("basis"))
        .def("delta_e", &AtomSolver::delta_e, py::arg("flux"),
             py::arg("form") = AtomForm::exact)
        .def("lowest_levels", &AtomSolver::lowest_levels, py::arg("flux"),
             py::arg("form") = AtomForm::exact, py::arg("k") = 5)
        .def("couplings", &AtomSolver::couplings, py::arg("flux"),
             py::arg("form") = AtomForm::exact);

    py::enum_<perturb::Variant>(m, "Variant")
        .value("full", perturb::Variant::full)
        .value("simplified", perturb::Variant::simplified);

    m.def("perturbative_splitting", &perturb::splitting, py::arg("scales"),
          py::arg("flux"), py::arg("variant") = perturb::Variant::full);
    m.def("perturbative_couplings", &perturb::couplings, py::arg("scales"),
          py::arg("flux"), py::arg("variant") = perturb::Variant::full);

    m.def(
        "solve_fprime",
        [](const DerivedScales& s, double f, double target, Engine engine,
           const AtomSolver* solver) {
            return solve_fprime(s, f, target, engine, solver);
        },
        py::arg("scales"), py::arg("f"), py::arg("delta_e_target"),
        py::arg("engine") = Engine::perturbative,
        py::arg("solver") = nullptr);

    m.def("min_fprime", &min_fprime, py::arg("scales"));

    m.def(
        "budget",
        [](const DerivedScales& s, const FluxPoint& flux, const NoiseEnv& env,
           const AtomSolver& solver) {
            const NoiseBudget b = budget(s, flux, env, solver);
            py::dict out;
            out["t1_flux_s"] = b.t1_flux_s;
            out["tphi_flux_s"] = b.tphi_flux_s;
            out["tphi_ic_s"] = b.tphi_ic_s;
            out["tphi_charge_s"] = b.tphi_charge_s;
            out["tphi_charge_guard"] = b.charge_detail.guard;
            return out;
        },
        py::arg("scales"), py::arg("flux"), py::arg("env"),
        py::arg("solver"));

    py::class_<NoiseEnv>(m, "NoiseEnv")
        .def(py::init<>())
        .def_static("from_params", &NoiseEnv::from_params, py::arg("params"));

    m.def(
        "run_json",
        [](const std::string& subcommand, const std::string& config_text) {
            const RunConfig config = parse_config_text(config_text);
            return to_json_text(run_subcommand(subcommand, config));
        },
        py::arg("subcommand"), py::arg("config_text"),
        "Run a CLI subcommand on a JSON config string; returns the JSON "
        "result document.");
}
