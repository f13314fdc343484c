#pragma once

#include <Eigen/Core>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "cbohf/basis.hpp"
#include "cbohf/integrals.hpp"
#include "cbohf/molecule.hpp"

namespace cbohf {

using Vector = Eigen::VectorXd;

struct ScfSettings {
  double tol_energy = 1e-9;
  double tol_density = 1e-7;  // RMS of the density change
  int max_iterations = 200;
  int diis_size = 8;
  double level_shift = 0.0;  // hartree, applied to virtual orbitals
  double damping = 0.3;      // weight of the previous density
  int damping_iterations = 3;

  void validate() const;
};

struct ScfIteration {
  int iteration = 0;
  double energy = 0.0;
  double delta_energy = 0.0;
  double rms_density = 0.0;
  double residual = 0.0;  // max |FPS - SPF|
};

struct ScfResult {
  bool converged = false;
  int iterations = 0;
  double energy = 0.0;            // recomputed from the final density
  double energy_iterative = 0.0;  // functional value at the last iterate
  double extension_energy = 0.0;  // sum of extension energies at the final density
  Matrix C;
  Vector orbital_energies;
  Matrix P;
  Matrix F;
  int n_occ = 0;
  double residual = 0.0;
  std::vector<ScfIteration> trace;
};

struct FockContribution {
  Matrix fock;
  double energy = 0.0;
};

/// Additive Fock term with its energy functional; fock must equal dE/dP.
class FockExtension {
 public:
  virtual ~FockExtension() = default;
  virtual FockContribution evaluate(const Matrix& P) const = 0;
  virtual std::string name() const = 0;
};

using ExtensionList = std::vector<const FockExtension*>;

/// Molecule, basis and integrals bundled for repeated SCF runs.
struct ElectronicSystem {
  Molecule molecule;
  std::vector<BasisShell> shells;
  IntegralSet ints;
  Matrix hcore;
  double e_nuc = 0.0;
  int n_electrons = 0;

  int nbf() const { return ints.nbf(); }

  static ElectronicSystem build(const Molecule& molecule, std::string_view basis, const EriOptions& options = {});
  static ElectronicSystem build(const Molecule& molecule, std::vector<BasisShell> shells,
                                const EriOptions& options = {});
};

/// S^{-1/2}.  Throws ConditioningError if any overlap eigenvalue is below `cutoff`.
Matrix symmetric_orthogonalizer(const Matrix& S, double cutoff = 1e-10);

/// Closed-shell density 2 C_occ C_occ^T.
Matrix density_from_orbitals(const Matrix& C, int n_occ);

/// Diagonalizes Hcore in the orthogonalized basis and fills n_el/2 orbitals.
Matrix core_guess(const Matrix& S, const Matrix& hcore, int n_electrons);

/// F = Hcore + J(P) - K(P)/2 + sum of extension contributions.
Matrix build_fock(const Matrix& P, const Matrix& hcore, const EriTensor& eri, const ExtensionList& extensions = {},
                  double* extension_energy = nullptr);

/// E = Tr(P Hcore) + Tr(P (J - K/2))/2 + e_nuc + extension energies.
double scf_energy(const Matrix& P, const Matrix& hcore, const EriTensor& eri, double e_nuc,
                  const ExtensionList& extensions = {});

/// Restricted closed-shell SCF with DIIS.  A run that exhausts max_iterations
/// returns converged = false.
ScfResult scf_solve(const IntegralSet& ints, const Matrix& hcore, int n_electrons, double e_nuc,
                    const ScfSettings& settings = {}, const ExtensionList& extensions = {},
                    const Matrix* initial_density = nullptr);

inline ScfResult scf_solve(const ElectronicSystem& sys, const ScfSettings& settings = {},
                           const ExtensionList& extensions = {}, const Matrix* initial_density = nullptr) {
  return scf_solve(sys.ints, sys.hcore, sys.n_electrons, sys.e_nuc, settings, extensions, initial_density);
}

/// Electronic dipole expectation -Tr(P D_a) plus the nuclear dipole about the gauge origin.
Vec3 dipole_expectation(const Matrix& P, const IntegralSet& ints, const Molecule& molecule);

}  // namespace cbohf
