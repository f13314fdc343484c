#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cbohf/molecule.hpp"

namespace cbohf {

struct CavityConfig {
  double omega = 0.0;    // hartree
  double lambda0 = 0.0;  // bare coupling, a.u.
  Vec3 polarization = Vec3::UnitZ();
  bool rescale_by_sqrt_n = true;

  CavityConfig() = default;
  CavityConfig(double omega, double lambda0, const Vec3& polarization, bool rescale_by_sqrt_n = true);

  /// Builds the coupling from a vacuum field (V/nm) and a frequency (cm^-1).
  static CavityConfig from_field(double field_v_per_nm, double omega_wavenumber, const Vec3& polarization,
                                 bool rescale_by_sqrt_n = true);

  /// Coupling vector for an ensemble of n_mol molecules (lambda0/sqrt(n) e when rescaling).
  Vec3 lambda_vector(int n_mol = 1) const;
};

/// lambda0 / sqrt(n_mol).
double rescale_lambda(double lambda0, int n_mol);

enum class OrientationPattern { AllParallel, Antiparallel, Defective };

std::string_view pattern_name(OrientationPattern pattern);
OrientationPattern parse_pattern(std::string_view name);

struct EnsembleGeometry {
  std::vector<Molecule> molecules;
  OrientationPattern pattern = OrientationPattern::AllParallel;
  double separation = 0.0;  // bohr
  std::size_t scanned_index = 0;
  /// Direction (+1 or -1) of each molecule's axis relative to the polarization.
  std::vector<int> orientation;

  std::size_t size() const noexcept { return molecules.size(); }
};

/// Replicates `templ` n_mol times on a line perpendicular to the polarization,
/// `separation` bohr apart.  The template axis (default: first atom -> second
/// atom) is aligned with +e or -e according to the pattern, and every replica
/// carries its own gauge origin at its own charge center.
EnsembleGeometry build_ensemble(const Molecule& templ, int n_mol, OrientationPattern pattern, double separation,
                                const Vec3& polarization, std::optional<Vec3> template_axis = std::nullopt);

/// Axis used by build_ensemble for a template molecule.
Vec3 molecular_axis(const Molecule& molecule);

/// Replaces the scanned molecule's bond (atoms `a`, `b`) length, moving atom b
/// along the bond, and re-centers its gauge origin.
Molecule with_bond_length(const Molecule& molecule, std::size_t a, std::size_t b, double length);

/// All atoms of the ensemble in one molecule, gauge origin at the total charge center.
Molecule merge_ensemble(const EnsembleGeometry& ensemble);

/// Smallest nuclear distance between atoms belonging to different molecules.
double min_intermolecular_distance(const EnsembleGeometry& ensemble);

}  // namespace cbohf
