#include "cbohf/scan_drivers.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "cbohf/errors.hpp"
#include "cbohf/parallel.hpp"
#include "cbohf/units.hpp"

namespace cbohf {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::string> kEnergyColumns = {"E_CBO",    "E_el",     "E_lin",    "E_dis",     "E_dse",
                                                 "E_dse_1e", "E_dse_2J", "E_dse_2K", "E_dse_en",  "E_dse_nuc",
                                                 "mu_x",     "mu_y",     "mu_z"};

std::vector<TableIdentity> energy_identities() {
  return {{"E_CBO", {"E_el", "E_lin", "E_dse", "E_dis"}},
          {"E_dse", {"E_dse_1e", "E_dse_2J", "E_dse_2K", "E_dse_en", "E_dse_nuc"}}};
}

std::vector<std::string> cols(std::vector<std::string> head, const std::vector<std::string>& mid,
                              const std::vector<std::string>& tail) {
  head.insert(head.end(), mid.begin(), mid.end());
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

void push_energy(std::vector<Cell>& row, const EnergyReport* r) {
  if (!r) {
    for (std::size_t i = 0; i < kEnergyColumns.size(); ++i) row.emplace_back(kNaN);
    return;
  }
  for (double v : {r->E_CBO, r->E_el, r->E_lin, r->E_dis, r->E_dse_total, r->E_dse_1e, r->E_dse_2J, r->E_dse_2K,
                   r->E_dse_en, r->E_dse_nuc, r->dipole.x(), r->dipole.y(), r->dipole.z()}) {
    row.emplace_back(v);
  }
}

struct FieldEntry {
  double field;    // V/nm, NaN for bare couplings
  double lambda0;  // a.u.
};

std::vector<FieldEntry> field_entries(const RunConfig& c) {
  std::vector<FieldEntry> out;
  const auto l0 = c.lambda0_values();
  for (std::size_t i = 0; i < l0.size(); ++i) {
    out.push_back({c.lambdas_au.empty() ? c.fields_v_per_nm[i] : kNaN, l0[i]});
  }
  return out;
}

EriOptions eri_options(const RunConfig& c, bool inner_parallel) {
  EriOptions e;
  e.threads = inner_parallel ? c.threads : 1;
  return e;
}

QcSettings qc_settings(const RunConfig& c) {
  QcSettings s;
  s.scf = c.scf;
  return s;
}

ScfResult field_free(const ElectronicSystem& sys, const ScfSettings& s) {
  auto ref = scf_solve(sys, s);
  if (!ref.converged) throw ConvergenceError("field-free SCF did not converge");
  return ref;
}

long long flag(bool ok) { return ok ? 1 : 0; }

void count(ScanOutput& out, const Table& t) {
  const std::size_t c = t.column("converged");
  for (const auto& row : t.rows) {
    ++out.points;
    if (std::get<long long>(row[c]) == 0) ++out.flagged;
  }
}

Table per_molecule_table(const std::string& name, const std::vector<std::string>& coords) {
  Table t(name, cols(coords,
                     {"molecule", "orientation", "scanned", "dE", "dE_no_dis", "E_CBO1", "E_CBO1_no_dis", "E_HF",
                      "E_el", "E_lin", "E_dis", "dse_local", "dse_inter", "dse_1e", "dse_2J_intra", "dse_2K", "dse_en",
                      "dse_nuc", "mu_x", "mu_y", "mu_z"},
                     {"converged"}));
  t.identities = {{"E_CBO1", {"E_el", "E_lin", "dse_local", "dse_inter", "E_dis"}},
                  {"E_CBO1_no_dis", {"E_el", "E_lin", "dse_local", "dse_inter"}}};
  return t;
}

void add_molecule_rows(Table& t, const std::vector<Cell>& coords, const EnsembleGeometry& ens, const EnsembleResult& r,
                       std::size_t scanned, bool scanned_flag) {
  for (const auto& m : r.molecules) {
    std::vector<Cell> row = coords;
    row.emplace_back(static_cast<long long>(m.index));
    row.emplace_back(static_cast<long long>(ens.orientation.empty() ? 1 : ens.orientation[m.index]));
    row.emplace_back(flag(scanned_flag && m.index == scanned));
    for (double v : {m.dE, m.dE_no_dis, m.E_CBO1, m.E_CBO1_no_dis, m.E_hf_reference, m.E_el, m.E_lin,
                     r.report.E_dis, m.dse_local, m.dse_inter, m.dse_1e, m.dse_2J_intra, m.dse_2K, m.dse_en,
                     m.dse_nuc, m.dipole.x(), m.dipole.y(), m.dipole.z()}) {
      row.emplace_back(v);
    }
    row.emplace_back(1LL);
    t.add_row(std::move(row));
  }
}

}  // namespace

const Table& ScanOutput::table(const std::string& name) const {
  for (const auto& t : tables) {
    if (t.name == name) return t;
  }
  throw InvalidInput("no table named '" + name + "'");
}

EnsembleSettings ensemble_settings(const RunConfig& c) {
  EnsembleSettings s;
  s.basis = c.basis;
  s.scf = c.scf;
  s.inter_in_fock = c.inter_in_fock;
  s.exact = c.exact;
  s.threads = 1;
  return s;
}

ScanOutput run_qc_scan(const RunConfig& c) {
  c.validate();
  const Molecule mol = resolve_geometry(c);
  const auto sys = ElectronicSystem::build(mol, c.basis, eri_options(c, true));
  const auto ref = scf_solve(sys, c.scf);
  const Matrix* guess = ref.converged ? &ref.P : nullptr;
  const auto fields = field_entries(c);
  const auto grid = c.grid();
  const double omega = c.omega_hartree();

  struct Point {
    std::optional<PointSolution> sol;
    std::string error;
  };
  std::vector<Point> pts(fields.size() * grid.size());
  parallel_for(pts.size(), c.threads, [&](std::size_t k) {
    const auto& f = fields[k / grid.size()];
    const double q = grid[k % grid.size()];
    try {
      pts[k].sol = solve_at_q(sys, f.lambda0 * c.polarization, omega, q, c.scf, guess);
    } catch (const Error& e) {
      pts[k].error = e.what();
    }
  });

  Table scan("qc_scan", cols({"field_v_per_nm", "lambda", "q"}, kEnergyColumns,
                             {"converged", "scf_iterations", "error"}));
  scan.identities = energy_identities();
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const auto& f = fields[k / grid.size()];
    std::vector<Cell> row = {f.field, f.lambda0, grid[k % grid.size()]};
    const auto& p = pts[k];
    const bool ok = p.sol && p.sol->scf.converged;
    push_energy(row, p.sol ? &p.sol->report : nullptr);
    row.emplace_back(flag(ok));
    row.emplace_back(static_cast<long long>(p.sol ? p.sol->scf.iterations : 0));
    row.emplace_back(p.error.empty() && !ok ? std::string("SCF not converged") : p.error);
    scan.add_row(std::move(row));
  }

  Table summary("qc_min", {"field_v_per_nm", "lambda", "q_min", "E_CBO_min", "q_grid_min", "E_CBO_grid_min",
                           "within_grid_step", "field_residual", "converged", "macro_iterations", "error"});
  std::vector<std::optional<QcResult>> opt(fields.size());
  std::vector<std::string> opt_err(fields.size());
  parallel_for(fields.size(), c.threads, [&](std::size_t i) {
    try {
      opt[i] = optimize_qc(sys, fields[i].lambda0 * c.polarization, omega, qc_settings(c), guess);
    } catch (const Error& e) {
      opt_err[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < fields.size(); ++i) {
    double best_q = kNaN, best_e = kNaN;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const auto& p = pts[i * grid.size() + g];
      if (!p.sol || !p.sol->scf.converged) continue;
      if (std::isnan(best_e) || p.sol->report.E_CBO < best_e) {
        best_e = p.sol->report.E_CBO;
        best_q = grid[g];
      }
    }
    const double step = grid.size() > 1 ? (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1) : 0.0;
    const auto& o = opt[i];
    const bool ok = o && o->converged;
    const double qmin = o ? o->q : kNaN;
    summary.add_row({fields[i].field, fields[i].lambda0, qmin, o ? o->report.E_CBO : kNaN, best_q, best_e,
                     flag(ok && std::abs(qmin - best_q) <= step * (1.0 + 1e-9)), o ? o->field_residual : kNaN,
                     flag(ok), static_cast<long long>(o ? o->trace.size() : 0), opt_err[i]});
  }

  ScanOutput out;
  out.tables = {std::move(scan), std::move(summary)};
  for (const auto& t : out.tables) count(out, t);
  return out;
}

ScanOutput run_angle_scan(const RunConfig& c) {
  c.validate();
  const Molecule base = resolve_geometry(c).recentered();
  const Vec3 e = c.polarization;
  const Vec3 pivot = charge_center(base);
  const Eigen::Matrix3d align = rotation_between(molecular_axis(base), e);
  const Vec3 axis = perpendicular_unit(e);
  const auto fields = field_entries(c);
  const auto grid = c.grid();
  const double omega = c.omega_hartree();

  struct Point {
    double E_hf = kNaN;
    std::vector<std::optional<QcResult>> res;
    std::vector<std::string> err;
  };
  std::vector<Point> pts(grid.size());
  parallel_for(grid.size(), c.threads, [&](std::size_t k) {
    auto& p = pts[k];
    p.res.resize(fields.size());
    p.err.resize(fields.size());
    const double phi = grid[k] * kPi / 180.0;
    const Eigen::Matrix3d R = Eigen::AngleAxisd(phi, axis).toRotationMatrix() * align;
    try {
      const auto sys = ElectronicSystem::build(base.rotated(R, pivot), c.basis, eri_options(c, false));
      const auto ref = field_free(sys, c.scf);
      p.E_hf = ref.energy;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        try {
          p.res[i] = optimize_qc(sys, fields[i].lambda0 * e, omega, qc_settings(c), &ref.P);
        } catch (const Error& ex) {
          p.err[i] = ex.what();
        }
      }
    } catch (const Error& ex) {
      for (auto& s : p.err) s = ex.what();
    }
  });

  Table t("angle_scan", cols({"field_v_per_nm", "lambda", "phi_deg", "dE", "E_HF"}, kEnergyColumns,
                             {"q", "field_residual", "converged", "macro_iterations", "error"}));
  t.identities = energy_identities();
  for (std::size_t i = 0; i < fields.size(); ++i) {
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto& p = pts[k];
      const auto& r = p.res[i];
      const bool ok = r && r->converged;
      std::vector<Cell> row = {fields[i].field, fields[i].lambda0, grid[k], r ? r->report.E_CBO - p.E_hf : kNaN,
                               p.E_hf};
      push_energy(row, r ? &r->report : nullptr);
      row.emplace_back(r ? r->q : kNaN);
      row.emplace_back(r ? r->field_residual : kNaN);
      row.emplace_back(flag(ok));
      row.emplace_back(static_cast<long long>(r ? r->trace.size() : 0));
      row.emplace_back(p.err[i]);
      t.add_row(std::move(row));
    }
  }
  ScanOutput out;
  out.tables = {std::move(t)};
  count(out, out.tables.front());
  return out;
}

namespace {

const std::vector<std::string> kEnsembleTail = {"q",         "dse_local", "dse_inter", "field_residual",
                                                "converged", "macro_iterations", "n_groups", "error"};

std::vector<TableIdentity> ensemble_identities() {
  auto ids = energy_identities();
  ids.push_back({"E_dse", {"dse_local", "dse_inter"}});
  return ids;
}

void push_ensemble_tail(std::vector<Cell>& row, const EnsembleResult* r, const std::string& error) {
  if (r) {
    double local = 0.0, inter = 0.0;
    for (const auto& m : r->molecules) {
      local += m.dse_local;
      inter += m.dse_inter;
    }
    const auto& st = r->state;
    const double resid = std::abs(st.omega * st.q - st.lambda.dot(r->report.dipole)) * st.omega;
    row.insert(row.end(), {st.q, local, inter, resid, 1LL, static_cast<long long>(st.trace.size()),
                           static_cast<long long>(st.n_groups), std::string()});
  } else {
    row.insert(row.end(), {kNaN, kNaN, kNaN, kNaN, 0LL, 0LL, 0LL, error});
  }
}

}  // namespace

ScanOutput run_bond_scan(const RunConfig& c) {
  c.validate();
  const Molecule templ = resolve_geometry(c);
  if (templ.size() < 2) throw InvalidInput("bond scan needs a molecule with at least two atoms");
  auto grid = c.grid();
  if (c.bond_unit == "angstrom") {
    for (auto& r : grid) r = convert_units(r, Unit::Angstrom, Unit::Bohr);
  }
  const auto fields = field_entries(c);
  const auto pattern = parse_pattern(c.pattern);
  const double omega = c.omega_hartree();
  const auto settings = ensemble_settings(c);
  const std::size_t n_f = fields.size(), n_r = grid.size();

  struct Point {
    EnsembleGeometry ens;
    std::optional<EnsembleResult> res;
    std::string err;
  };
  std::vector<Point> pts(c.sizes.size() * n_f * n_r);
  parallel_for(pts.size(), c.threads, [&](std::size_t k) {
    const int n = c.sizes[k / (n_f * n_r)];
    const auto& f = fields[(k / n_r) % n_f];
    const double r = grid[k % n_r];
    auto& p = pts[k];
    try {
      p.ens = build_ensemble(templ, n, pattern, c.separation_bohr(), c.polarization);
      const auto idx = static_cast<std::size_t>(c.scanned_index);
      p.ens.scanned_index = idx;
      p.ens.molecules[idx] = with_bond_length(p.ens.molecules[idx], 0, 1, r);
      const CavityConfig cav(omega, f.lambda0, c.polarization, c.rescale);
      p.res = dilute_solve(p.ens, cav, settings);
    } catch (const Error& e) {
      p.err = e.what();
    }
  });

  const std::vector<std::string> coords = {"n_mol", "field_v_per_nm", "lambda", "r_bohr"};
  Table t("bond_scan", cols(cols(coords, {"dE", "E_HF_ensemble", "E_HF_scanned"}, kEnergyColumns), {}, kEnsembleTail));
  t.identities = ensemble_identities();
  Table mol = per_molecule_table("bond_scan_molecules", coords);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const int n = c.sizes[k / (n_f * n_r)];
    const auto& f = fields[(k / n_r) % n_f];
    const double lam = c.rescale ? rescale_lambda(f.lambda0, n) : f.lambda0;
    const std::vector<Cell> co = {static_cast<long long>(n), f.field, lam, grid[k % n_r]};
    const auto& p = pts[k];
    const auto* r = p.res ? &*p.res : nullptr;
    std::vector<Cell> row = co;
    row.emplace_back(r ? r->dE : kNaN);
    row.emplace_back(r ? r->E_hf_reference : kNaN);
    row.emplace_back(r ? r->state.terms[static_cast<std::size_t>(c.scanned_index)].E_hf_reference : kNaN);
    push_energy(row, r ? &r->report : nullptr);
    push_ensemble_tail(row, r, p.err);
    t.add_row(std::move(row));
    if (r) add_molecule_rows(mol, co, p.ens, *r, static_cast<std::size_t>(c.scanned_index), true);
  }
  ScanOutput out;
  out.tables = {std::move(t), std::move(mol)};
  count(out, out.tables.front());
  return out;
}

ScanOutput run_size_sweep(const RunConfig& c) {
  c.validate();
  const Molecule templ = resolve_geometry(c);
  const auto fields = field_entries(c);
  const auto pattern = parse_pattern(c.pattern);
  const double omega = c.omega_hartree();
  auto settings = ensemble_settings(c);
  settings.threads = c.threads;

  std::vector<CavityConfig> cavities;
  std::vector<double> fv;
  for (const auto& f : fields) {
    cavities.emplace_back(omega, f.lambda0, c.polarization, c.rescale);
    fv.push_back(f.field);
  }
  const auto rows = size_sweep(templ, c.sizes, pattern, c.separation_bohr(), cavities, c.rescale, settings, fv);

  const std::vector<std::string> coords = {"field_v_per_nm", "lambda0", "n_mol", "lambda"};
  Table t("size_sweep",
          cols(cols(coords, {"dE", "dE_per_molecule", "E_HF_ensemble"}, kEnergyColumns), {}, kEnsembleTail));
  t.identities = ensemble_identities();
  Table mol = per_molecule_table("size_sweep_molecules", coords);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& row_in = rows[k];
    const auto& f = fields[k / c.sizes.size()];
    const std::vector<Cell> co = {f.field, f.lambda0, static_cast<long long>(row_in.n_mol), row_in.lambda};
    const auto* r = row_in.ok ? &row_in.result : nullptr;
    std::vector<Cell> row = co;
    row.emplace_back(r ? r->dE : kNaN);
    row.emplace_back(r ? r->dE / row_in.n_mol : kNaN);
    row.emplace_back(r ? r->E_hf_reference : kNaN);
    push_energy(row, r ? &r->report : nullptr);
    push_ensemble_tail(row, r, row_in.error);
    t.add_row(std::move(row));
    if (r) {
      const auto ens = build_ensemble(templ, row_in.n_mol, pattern, c.separation_bohr(), c.polarization);
      add_molecule_rows(mol, co, ens, *r, 0, false);
    }
  }
  ScanOutput out;
  out.tables = {std::move(t), std::move(mol)};
  count(out, out.tables.front());
  return out;
}

ScanOutput run_single(const RunConfig& c) {
  c.validate();
  const int n = c.sizes.front();
  const auto fields = field_entries(c);
  const double omega = c.omega_hartree();
  const std::vector<std::string> coords = {"field_v_per_nm", "lambda0", "n_mol", "lambda"};
  Table t("single", cols(cols(coords, {"dE", "E_HF"}, kEnergyColumns), {}, kEnsembleTail));
  t.identities = ensemble_identities();
  Table mol = per_molecule_table("single_molecules", coords);

  if (n == 1) {
    const Molecule m = resolve_geometry(c);
    const auto sys = ElectronicSystem::build(m, c.basis, eri_options(c, true));
    const auto ref = scf_solve(sys, c.scf);
    for (const auto& f : fields) {
      std::vector<Cell> row = {f.field, f.lambda0, 1LL, f.lambda0};
      try {
        if (!ref.converged) throw ConvergenceError("field-free SCF did not converge");
        const auto r = optimize_qc(sys, f.lambda0 * c.polarization, omega, qc_settings(c), &ref.P);
        row.emplace_back(r.report.E_CBO - ref.energy);
        row.emplace_back(ref.energy);
        push_energy(row, &r.report);
        // one molecule: no partner dipoles, the whole DSE is local
        row.insert(row.end(), {r.q, r.report.E_dse_total, 0.0, r.field_residual, flag(r.converged),
                               static_cast<long long>(r.trace.size()), 1LL, std::string()});
      } catch (const Error& e) {
        row.insert(row.end(), {kNaN, kNaN});
        push_energy(row, nullptr);
        push_ensemble_tail(row, nullptr, e.what());
      }
      t.add_row(std::move(row));
    }
  } else {
    const Molecule templ = resolve_geometry(c);
    const auto pattern = parse_pattern(c.pattern);
    const auto ens = build_ensemble(templ, n, pattern, c.separation_bohr(), c.polarization);
    auto settings = ensemble_settings(c);
    settings.threads = c.threads;
    for (const auto& f : fields) {
      const CavityConfig cav(omega, f.lambda0, c.polarization, c.rescale);
      const std::vector<Cell> co = {f.field, f.lambda0, static_cast<long long>(n), cav.lambda_vector(n).norm()};
      std::vector<Cell> row = co;
      try {
        const auto r = dilute_solve(ens, cav, settings);
        row.emplace_back(r.dE);
        row.emplace_back(r.E_hf_reference);
        push_energy(row, &r.report);
        push_ensemble_tail(row, &r, "");
        add_molecule_rows(mol, co, ens, r, 0, false);
      } catch (const Error& e) {
        row.insert(row.end(), {kNaN, kNaN});
        push_energy(row, nullptr);
        push_ensemble_tail(row, nullptr, e.what());
      }
      t.add_row(std::move(row));
    }
  }
  ScanOutput out;
  out.tables = {std::move(t), std::move(mol)};
  count(out, out.tables.front());
  return out;
}

ScanOutput run_scan(const RunConfig& c) {
  switch (c.scan) {
    case ScanType::Single: return run_single(c);
    case ScanType::Qc: return run_qc_scan(c);
    case ScanType::Angle: return run_angle_scan(c);
    case ScanType::Bond: return run_bond_scan(c);
    case ScanType::Size: return run_size_sweep(c);
  }
  throw InvalidInput("unknown scan type");
}

std::vector<std::string> write_output(const ScanOutput& output, const RunConfig& c) {
  const auto cfg = c.to_json();
  std::vector<std::string> paths;
  for (const auto& t : output.tables) {
    const auto p = emit(t, cfg, c.formats, c.out_dir);
    paths.insert(paths.end(), p.begin(), p.end());
  }
  return paths;
}

int exit_code(const ScanOutput& output) { return output.flagged > 0 ? 2 : 0; }

}  // namespace cbohf
