#pragma once

#include <string>
#include <vector>

#include "cbohf/cavity.hpp"
#include "cbohf/ensemble_geometry.hpp"

namespace cbohf {

enum class UpdateOrder { Jacobi, GaussSeidel };

struct EnsembleSettings {
  std::string basis = "sto-3g";
  ScfSettings scf = QcSettings{}.scf;
  EriOptions eri;
  double tol_dipole = 1e-10;  // max |delta <mu>| per molecule
  double tol_q = 1e-10;
  int max_macro_iterations = 500;
  double damping = 0.5;  // weight of the previous dipole in each update
  UpdateOrder order = UpdateOrder::Jacobi;
  /// Include the partner-dipole mean field in each molecule's Fock matrix.
  /// When false, partners enter the energy only.
  bool inter_in_fock = true;
  /// Solve every molecule separately instead of once per replica group.
  bool exact = false;
  int threads = 1;
};

/// Per-molecule density-derived quantities at the converged state.
struct MoleculeTerms {
  double E_el = 0.0;
  double t = 0.0;  // Tr(P d)
  double b = 0.0;  // lambda . mu_Nuc
  double dse_1e = 0.0;
  double dse_2K = 0.0;
  double E_hf_reference = 0.0;  // isolated molecule without cavity
  Vec3 dipole = Vec3::Zero();

  double c() const { return b - t; }  // lambda . <mu>
};

struct EnsembleIteration {
  int iteration = 0;
  double q = 0.0;
  double max_dipole_change = 0.0;
  double q_change = 0.0;
};

struct EnsembleState {
  std::vector<ScfResult> scf;  // per molecule (shared storage for replicas is copied)
  std::vector<MoleculeTerms> terms;
  std::vector<int> group;  // replica group of each molecule
  int n_groups = 0;
  double q = 0.0;
  double omega = 0.0;
  Vec3 lambda = Vec3::Zero();
  bool converged = false;
  std::vector<EnsembleIteration> trace;
};

struct DsePartition {
  double local = 0.0;
  double inter = 0.0;
};

struct PerMoleculeReport {
  std::size_t index = 0;
  double E_CBO1 = 0.0;         // includes the ensemble E_dis
  double E_CBO1_no_dis = 0.0;
  double E_hf_reference = 0.0;
  double dE = 0.0;
  double dE_no_dis = 0.0;
  double E_el = 0.0;
  double E_lin = 0.0;
  double dse_local = 0.0;
  double dse_inter = 0.0;
  double dse_1e = 0.0;
  double dse_2K = 0.0;
  double dse_2J_intra = 0.0;
  double dse_en = 0.0;
  double dse_nuc = 0.0;
  Vec3 dipole = Vec3::Zero();
};

struct EnsembleResult {
  EnsembleState state;
  EnergyReport report;
  std::vector<PerMoleculeReport> molecules;
  double E_hf_reference = 0.0;  // sum of isolated field-free energies
  double dE = 0.0;              // E_CBO - E_hf_reference
};

/// Replica groups: molecules with identical geometry relative to their gauge
/// origin share one SCF.  Returns the group index of each molecule.
std::vector<int> replica_groups(const EnsembleGeometry& ensemble, bool exact, int* n_groups = nullptr);

/// Product-ansatz CBO-HF for a dilute ensemble.  Throws ConvergenceError with
/// the macro-iteration trace when the dipoles or q fail to converge.
EnsembleResult dilute_solve(const EnsembleGeometry& ensemble, const CavityConfig& cavity,
                            const EnsembleSettings& settings = {});

/// local(m) = 1e + 2K + (t - b)^2/2 of molecule m; inter(m) = c_m sum_{n!=m} c_n / 2.
std::vector<DsePartition> partition_dse(const EnsembleState& state);

struct SizeSweepRow {
  int n_mol = 0;
  double field = 0.0;   // V/nm, NaN when the row was built from a bare coupling
  double lambda = 0.0;  // per-molecule coupling magnitude used
  bool ok = false;
  std::string error;
  EnsembleResult result;
};

/// One row per (N, cavity) pair.  Solver errors are captured in the row.
std::vector<SizeSweepRow> size_sweep(const Molecule& templ, const std::vector<int>& n_values,
                                     OrientationPattern pattern, double separation,
                                     const std::vector<CavityConfig>& cavities, bool rescale,
                                     const EnsembleSettings& settings = {}, const std::vector<double>& fields = {});

}  // namespace cbohf
