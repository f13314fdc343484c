#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cbohf/boys.hpp"
#include "cbohf/errors.hpp"
#include "cbohf/scan_drivers.hpp"
#include "cbohf/units.hpp"

namespace py = pybind11;
using namespace cbohf;

namespace {

py::dict report_dict(const EnergyReport& r) {
  py::dict d;
  d["E_CBO"] = r.E_CBO;
  d["E_el"] = r.E_el;
  d["E_lin"] = r.E_lin;
  d["E_dis"] = r.E_dis;
  d["E_dse"] = r.E_dse_total;
  d["E_dse_1e"] = r.E_dse_1e;
  d["E_dse_2J"] = r.E_dse_2J;
  d["E_dse_2K"] = r.E_dse_2K;
  d["E_dse_en"] = r.E_dse_en;
  d["E_dse_nuc"] = r.E_dse_nuc;
  d["q"] = r.q;
  d["dipole"] = Vec3(r.dipole);
  return d;
}

Unit unit_arg(const std::string& s) { return parse_unit(s); }

py::object cell_value(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return py::float_(*d);
  if (const auto* i = std::get_if<long long>(&c)) return py::int_(*i);
  return py::str(std::get<std::string>(c));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cavity Born-Oppenheimer Hartree-Fock core";

  auto base = py::register_exception<Error>(m, "CbohfError", PyExc_RuntimeError);
  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());

  py::class_<Molecule>(m, "Molecule")
      .def(py::init([](const std::vector<std::tuple<std::string, double, double, double>>& atoms, int charge,
                       std::optional<Vec3> origin) {
             std::vector<Atom> list;
             for (const auto& [sym, x, y, z] : atoms) list.emplace_back(sym, Vec3(x, y, z));
             return origin ? Molecule(std::move(list), charge, *origin) : Molecule(std::move(list), charge);
           }),
           py::arg("atoms"), py::arg("charge") = 0, py::arg("gauge_origin") = py::none(),
           "atoms as (symbol, x, y, z) in bohr; the gauge origin defaults to the charge center")
      .def_property_readonly("charge", &Molecule::charge)
      .def_property_readonly("gauge_origin", [](const Molecule& mol) { return Vec3(mol.gauge_origin()); })
      .def_property_readonly("electron_count", &Molecule::electron_count)
      .def_property_readonly("nuclear_repulsion", &Molecule::nuclear_repulsion)
      .def_property_readonly("atoms",
                             [](const Molecule& mol) {
                               py::list out;
                               for (const auto& a : mol.atoms()) {
                                 out.append(py::make_tuple(a.symbol, a.position.x(), a.position.y(), a.position.z()));
                               }
                               return out;
                             })
      .def("__len__", &Molecule::size);

  m.def("parse_xyz", [](const std::string& text, int charge) { return parse_xyz(text, charge); }, py::arg("text"),
        py::arg("charge") = 0);

  m.def("convert_units", [](double v, const std::string& from, const std::string& to) {
    return convert_units(v, unit_arg(from), unit_arg(to));
  });
  m.def("lambda_from_field", &lambda_from_field, py::arg("field_au"), py::arg("omega_hartree"));
  m.def("mode_volume", &mode_volume, py::arg("lam"));
  m.def("boys_function", py::overload_cast<int, double>(&boys_function), py::arg("m"), py::arg("t"));

  m.def(
      "rhf",
      [](const Molecule& mol, const std::string& basis) {
        const auto sys = ElectronicSystem::build(mol, basis);
        const auto r = scf_solve(sys, ScfSettings{});
        py::dict d;
        d["energy"] = r.energy;
        d["converged"] = r.converged;
        d["iterations"] = r.iterations;
        d["orbital_energies"] = Eigen::VectorXd(r.orbital_energies);
        d["density"] = Matrix(r.P);
        d["dipole"] = dipole_expectation(r.P, sys.ints, sys.molecule);
        d["nbf"] = sys.nbf();
        return d;
      },
      py::arg("molecule"), py::arg("basis") = "sto-3g", "closed-shell RHF without a cavity");

  m.def(
      "solve_at_q",
      [](const Molecule& mol, const std::string& basis, const Vec3& lambda, double omega, double q) {
        const auto sys = ElectronicSystem::build(mol, basis);
        const auto s = solve_at_q(sys, lambda, omega, q, QcSettings{}.scf);
        auto d = report_dict(s.report);
        d["converged"] = s.scf.converged;
        return d;
      },
      py::arg("molecule"), py::arg("basis"), py::arg("lam"), py::arg("omega"), py::arg("q"),
      "CBO-HF energy components at a fixed photon displacement");

  m.def(
      "optimize_qc",
      [](const Molecule& mol, const std::string& basis, const Vec3& lambda, double omega) {
        const auto sys = ElectronicSystem::build(mol, basis);
        const auto r = optimize_qc(sys, lambda, omega);
        auto d = report_dict(r.report);
        d["converged"] = r.converged;
        d["field_residual"] = r.field_residual;
        d["iterations"] = r.trace.size();
        return d;
      },
      py::arg("molecule"), py::arg("basis"), py::arg("lam"), py::arg("omega"),
      "CBO-HF with the photon displacement optimized");

  m.def(
      "dilute_ensemble",
      [](const Molecule& templ, int n_mol, const std::string& pattern, double lambda0, double omega,
         const Vec3& polarization, double separation, bool rescale, const std::string& basis, bool gauss_seidel,
         bool exact) {
        const auto ens = build_ensemble(templ, n_mol, parse_pattern(pattern), separation, polarization);
        EnsembleSettings s;
        s.basis = basis;
        s.order = gauss_seidel ? UpdateOrder::GaussSeidel : UpdateOrder::Jacobi;
        s.exact = exact;
        const auto r = dilute_solve(ens, CavityConfig(omega, lambda0, polarization, rescale), s);
        auto d = report_dict(r.report);
        d["dE"] = r.dE;
        d["E_hf_reference"] = r.E_hf_reference;
        d["n_groups"] = r.state.n_groups;
        d["macro_iterations"] = r.state.trace.size();
        py::list mols;
        for (const auto& p : r.molecules) {
          py::dict x;
          x["E_CBO1"] = p.E_CBO1;
          x["E_CBO1_no_dis"] = p.E_CBO1_no_dis;
          x["dE"] = p.dE;
          x["E_el"] = p.E_el;
          x["E_lin"] = p.E_lin;
          x["dse_local"] = p.dse_local;
          x["dse_inter"] = p.dse_inter;
          x["dipole"] = Vec3(p.dipole);
          mols.append(x);
        }
        d["molecules"] = mols;
        return d;
      },
      py::arg("template"), py::arg("n_mol"), py::arg("pattern") = "all-parallel", py::arg("lambda0"),
      py::arg("omega"), py::arg("polarization") = Vec3(Vec3::UnitZ()), py::arg("separation") = 800.0 / kBohrToAngstrom,
      py::arg("rescale") = true, py::arg("basis") = "sto-3g", py::arg("gauss_seidel") = false,
      py::arg("exact") = false, "product-ansatz CBO-HF for a replicated ensemble (atomic units)");

  m.def(
      "run_scan",
      [](const std::string& config_json, bool write) {
        const auto j = nlohmann::json::parse(config_json);
        RunConfig base;
        if (j.contains("scan") && j["scan"].contains("type")) {
          base = RunConfig::defaults(parse_scan_type(j["scan"]["type"].get<std::string>()));
        }
        const auto cfg = RunConfig::from_json(j, base);
        ScanOutput out;
        {
          py::gil_scoped_release release;
          out = run_scan(cfg);
          if (write) write_output(out, cfg);
        }
        py::dict tables;
        for (const auto& t : out.tables) {
          py::list rows;
          for (const auto& row : t.rows) {
            py::list r;
            for (const auto& c : row) r.append(cell_value(c));
            rows.append(r);
          }
          py::dict td;
          td["columns"] = t.columns;
          td["rows"] = rows;
          tables[py::str(t.name)] = td;
        }
        py::dict d;
        d["tables"] = tables;
        d["points"] = out.points;
        d["flagged"] = out.flagged;
        d["config"] = cfg.to_json().dump();
        return d;
      },
      py::arg("config_json"), py::arg("write") = false,
      "run a scan described by a JSON config; returns the tables as column/row lists");
}
