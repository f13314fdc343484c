#include "cbohf/ensemble.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "cbohf/errors.hpp"
#include "cbohf/parallel.hpp"

namespace cbohf {
namespace {

bool same_relative_geometry(const Molecule& a, const Molecule& b) {
  if (a.size() != b.size() || a.charge() != b.charge()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& x = a.atoms()[i];
    const auto& y = b.atoms()[i];
    if (x.charge != y.charge) return false;
    const Vec3 rx = x.position - a.gauge_origin();
    const Vec3 ry = y.position - b.gauge_origin();
    if ((rx - ry).cwiseAbs().maxCoeff() > 1e-10) return false;
  }
  return true;
}

// One SCF problem shared by all replicas of a group.
struct Group {
  std::vector<std::size_t> members;
  ElectronicSystem sys;
  CavityOperators ops;
  Matrix P;
  ScfResult scf;
  double E_hf = 0.0;
  Vec3 dipole = Vec3::Zero();  // damped dipole used for the mean field
};

std::string format_trace(const std::vector<EnsembleIteration>& trace) {
  std::ostringstream os;
  os.precision(12);
  const std::size_t first = trace.size() > 10 ? trace.size() - 10 : 0;
  for (std::size_t i = first; i < trace.size(); ++i) {
    const auto& t = trace[i];
    os << "\n  macro " << t.iteration << ": q=" << t.q << " max|dmu|=" << t.max_dipole_change
       << " |dq|=" << t.q_change;
  }
  return os.str();
}

}  // namespace

std::vector<int> replica_groups(const EnsembleGeometry& ensemble, bool exact, int* n_groups) {
  std::vector<int> group(ensemble.size(), -1);
  std::vector<std::size_t> reps;
  for (std::size_t m = 0; m < ensemble.size(); ++m) {
    if (!exact) {
      for (std::size_t g = 0; g < reps.size(); ++g) {
        if (same_relative_geometry(ensemble.molecules[reps[g]], ensemble.molecules[m])) {
          group[m] = static_cast<int>(g);
          break;
        }
      }
    }
    if (group[m] < 0) {
      group[m] = static_cast<int>(reps.size());
      reps.push_back(m);
    }
  }
  if (n_groups) *n_groups = static_cast<int>(reps.size());
  return group;
}

EnsembleResult dilute_solve(const EnsembleGeometry& ensemble, const CavityConfig& cavity,
                            const EnsembleSettings& settings) {
  if (ensemble.size() == 0) throw InvalidInput("empty ensemble");
  if (!(settings.damping >= 0.0 && settings.damping < 1.0)) throw InvalidInput("dipole damping must lie in [0, 1)");
  const int n_mol = static_cast<int>(ensemble.size());
  const Vec3 lambda = cavity.lambda_vector(n_mol);
  const double omega = cavity.omega;

  EnsembleResult out;
  auto& st = out.state;
  st.lambda = lambda;
  st.omega = omega;
  st.group = replica_groups(ensemble, settings.exact, &st.n_groups);

  std::vector<Group> groups(static_cast<std::size_t>(st.n_groups));
  for (std::size_t m = 0; m < ensemble.size(); ++m) groups[static_cast<std::size_t>(st.group[m])].members.push_back(m);

  // Integrals and the field-free reference for each group.
  EriOptions eri = settings.eri;
  if (st.n_groups > 1) eri.threads = 1;
  parallel_for(groups.size(), settings.threads, [&](std::size_t g) {
    auto& G = groups[g];
    G.sys = ElectronicSystem::build(ensemble.molecules[G.members.front()], settings.basis, eri);
    auto ref = scf_solve(G.sys, settings.scf);
    if (!ref.converged) throw ConvergenceError("field-free SCF did not converge for molecule " +
                                               std::to_string(G.members.front()));
    G.E_hf = ref.energy;
    G.P = ref.P;
    G.dipole = dipole_expectation(G.P, G.sys.ints, G.sys.molecule);
  });

  auto c_of = [&](const Group& G) { return lambda.dot(G.dipole); };
  auto total_c = [&] {
    double C = 0.0;
    for (const auto& G : groups) C += c_of(G) * static_cast<double>(G.members.size());
    return C;
  };
  double q = total_c() / omega;

  // Solves group g at the current q and partner dipoles; returns the new dipole.
  auto solve_group = [&](Group& G, double q_now, double C_now) {
    G.ops = CavityOperators::build(G.sys, lambda, omega, q_now);
    const CavityExtensionSet ext(G.ops);
    const double h = settings.inter_in_fock ? -(C_now - c_of(G)) : 0.0;
    const DipoleFieldExtension field(G.ops.d, h);
    ExtensionList list = ext.list();
    list.push_back(&field);
    G.scf = scf_solve(G.sys, settings.scf, list, &G.P);
    if (!G.scf.converged) {
      throw ConvergenceError("SCF did not converge for molecule " + std::to_string(G.members.front()) +
                             " at q = " + std::to_string(q_now));
    }
    G.P = G.scf.P;
    return dipole_expectation(G.P, G.sys.ints, G.sys.molecule);
  };

  const double beta = 1.0 - settings.damping;
  for (int it = 1; it <= settings.max_macro_iterations; ++it) {
    double max_dmu = 0.0;
    const double q_old = q;
    if (settings.order == UpdateOrder::Jacobi) {
      const double C = total_c();
      std::vector<Vec3> fresh(groups.size());
      parallel_for(groups.size(), settings.threads,
                   [&](std::size_t g) { fresh[g] = solve_group(groups[g], q_old, C); });
      for (std::size_t g = 0; g < groups.size(); ++g) {
        max_dmu = std::max(max_dmu, (fresh[g] - groups[g].dipole).cwiseAbs().maxCoeff());
        groups[g].dipole += beta * (fresh[g] - groups[g].dipole);
      }
      q = total_c() / omega;
    } else {
      for (auto& G : groups) {
        const Vec3 fresh = solve_group(G, q, total_c());
        max_dmu = std::max(max_dmu, (fresh - G.dipole).cwiseAbs().maxCoeff());
        G.dipole += beta * (fresh - G.dipole);
        q = total_c() / omega;
      }
    }
    const double dq = std::abs(q - q_old);
    st.trace.push_back({it, q, max_dmu, dq});
    if (max_dmu < settings.tol_dipole && dq < settings.tol_q) {
      st.converged = true;
      break;
    }
  }
  if (!st.converged) {
    throw ConvergenceError("ensemble macro-iteration did not converge in " +
                           std::to_string(settings.max_macro_iterations) + " iterations" + format_trace(st.trace));
  }

  // Final energies from the converged densities at the final q.
  st.q = q;
  st.scf.resize(ensemble.size());
  st.terms.resize(ensemble.size());
  for (auto& G : groups) {
    G.ops = CavityOperators::build(G.sys, lambda, omega, q);
    const auto rep = energy_components(G.P, G.sys, G.ops);
    MoleculeTerms t;
    t.E_el = rep.E_el;
    t.t = G.P.cwiseProduct(G.ops.d).sum();
    t.b = G.ops.lambda_mu_nuc;
    t.dse_1e = rep.E_dse_1e;
    t.dse_2K = rep.E_dse_2K;
    t.E_hf_reference = G.E_hf;
    t.dipole = rep.dipole;
    for (auto m : G.members) {
      st.terms[m] = t;
      st.scf[m] = G.scf;
    }
  }

  auto& R = out.report;
  double sum_t = 0.0, sum_b = 0.0;
  for (const auto& t : st.terms) {
    R.E_el += t.E_el;
    R.E_dse_1e += t.dse_1e;
    R.E_dse_2K += t.dse_2K;
    R.dipole += t.dipole;
    sum_t += t.t;
    sum_b += t.b;
    out.E_hf_reference += t.E_hf_reference;
  }
  const double C = sum_b - sum_t;
  R.q = q;
  R.E_lin = -omega * q * C;
  R.E_dis = displacement_energy(omega, q);
  R.E_dse_2J = 0.5 * sum_t * sum_t;
  R.E_dse_en = -sum_b * sum_t;
  R.E_dse_nuc = 0.5 * sum_b * sum_b;
  R.E_dse_total = R.E_dse_1e + R.E_dse_2J + R.E_dse_2K + R.E_dse_en + R.E_dse_nuc;
  R.E_CBO = R.E_el + R.E_lin + R.E_dse_total + R.E_dis;
  out.dE = R.E_CBO - out.E_hf_reference;

  const auto parts = partition_dse(st);
  for (std::size_t m = 0; m < ensemble.size(); ++m) {
    const auto& t = st.terms[m];
    PerMoleculeReport p;
    p.index = m;
    p.E_el = t.E_el;
    p.E_lin = -omega * q * t.c();
    p.dse_local = parts[m].local;
    p.dse_inter = parts[m].inter;
    p.dse_1e = t.dse_1e;
    p.dse_2K = t.dse_2K;
    p.dse_2J_intra = 0.5 * t.t * t.t;
    p.dse_en = -t.b * t.t;
    p.dse_nuc = 0.5 * t.b * t.b;
    p.E_CBO1_no_dis = p.E_el + p.E_lin + p.dse_local + p.dse_inter;
    p.E_CBO1 = p.E_CBO1_no_dis + R.E_dis;
    p.E_hf_reference = t.E_hf_reference;
    p.dE = p.E_CBO1 - p.E_hf_reference;
    p.dE_no_dis = p.E_CBO1_no_dis - p.E_hf_reference;
    p.dipole = t.dipole;
    out.molecules.push_back(p);
  }
  return out;
}

std::vector<DsePartition> partition_dse(const EnsembleState& state) {
  if (!state.converged) throw ConvergenceError("DSE partition requested for a non-converged ensemble");
  double C = 0.0;
  for (const auto& t : state.terms) C += t.c();
  std::vector<DsePartition> out;
  out.reserve(state.terms.size());
  for (const auto& t : state.terms) {
    const double c = t.c();
    out.push_back({t.dse_1e + t.dse_2K + 0.5 * c * c, 0.5 * c * (C - c)});
  }
  return out;
}

std::vector<SizeSweepRow> size_sweep(const Molecule& templ, const std::vector<int>& n_values,
                                     OrientationPattern pattern, double separation,
                                     const std::vector<CavityConfig>& cavities, bool rescale,
                                     const EnsembleSettings& settings, const std::vector<double>& fields) {
  if (n_values.empty()) throw InvalidInput("size sweep needs at least one ensemble size");
  if (cavities.empty()) throw InvalidInput("size sweep needs at least one cavity setting");
  std::vector<SizeSweepRow> rows;
  for (std::size_t k = 0; k < cavities.size(); ++k) {
    CavityConfig cav = cavities[k];
    cav.rescale_by_sqrt_n = rescale;
    for (int n : n_values) {
      SizeSweepRow row;
      row.n_mol = n;
      row.field = k < fields.size() ? fields[k] : std::numeric_limits<double>::quiet_NaN();
      try {
        row.lambda = cav.lambda_vector(n).norm();
        const auto ens = build_ensemble(templ, n, pattern, separation, cav.polarization);
        row.result = dilute_solve(ens, cav, settings);
        row.ok = true;
      } catch (const Error& e) {
        row.ok = false;
        row.error = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace cbohf
