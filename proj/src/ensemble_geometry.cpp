#include "cbohf/ensemble_geometry.hpp"

#include <cmath>
#include <limits>

#include "cbohf/errors.hpp"
#include "cbohf/units.hpp"

namespace cbohf {

CavityConfig::CavityConfig(double omega_, double lambda0_, const Vec3& polarization_, bool rescale)
    : omega(omega_), lambda0(lambda0_), polarization(polarization_), rescale_by_sqrt_n(rescale) {
  if (!(omega > 0.0)) throw InvalidInput("cavity frequency must be positive");
  if (!(lambda0 >= 0.0)) throw InvalidInput("coupling strength must be non-negative");
  if (!polarization.allFinite() || std::abs(polarization.norm() - 1.0) > 1e-12) {
    throw InvalidInput("polarization must be a unit vector");
  }
}

CavityConfig CavityConfig::from_field(double field_v_per_nm, double omega_wavenumber, const Vec3& polarization,
                                      bool rescale) {
  const double omega = convert_units(omega_wavenumber, Unit::Wavenumber, Unit::Hartree);
  const double field = convert_units(field_v_per_nm, Unit::VoltPerNm, Unit::AuField);
  return CavityConfig(omega, lambda_from_field(field, omega), polarization.normalized(), rescale);
}

Vec3 CavityConfig::lambda_vector(int n_mol) const {
  const double lam = rescale_by_sqrt_n ? rescale_lambda(lambda0, n_mol) : lambda0;
  return lam * polarization;
}

double rescale_lambda(double lambda0, int n_mol) {
  if (n_mol < 1) throw InvalidInput("ensemble size must be >= 1");
  return lambda0 / std::sqrt(static_cast<double>(n_mol));
}

std::string_view pattern_name(OrientationPattern pattern) {
  switch (pattern) {
    case OrientationPattern::AllParallel: return "all-parallel";
    case OrientationPattern::Antiparallel: return "antiparallel";
    case OrientationPattern::Defective: return "defective";
  }
  return "?";
}

OrientationPattern parse_pattern(std::string_view name) {
  if (name == "all-parallel" || name == "parallel" || name == "p") return OrientationPattern::AllParallel;
  if (name == "antiparallel" || name == "a") return OrientationPattern::Antiparallel;
  if (name == "defective" || name == "d") return OrientationPattern::Defective;
  throw InvalidInput("unknown orientation pattern '" + std::string(name) + "'");
}

Vec3 molecular_axis(const Molecule& molecule) {
  if (molecule.size() < 2) return Vec3::UnitZ();
  const Vec3 axis = molecule.atoms()[1].position - molecule.atoms()[0].position;
  if (axis.norm() < 1e-12) throw InvalidInput("first two atoms coincide; molecular axis undefined");
  return axis.normalized();
}

EnsembleGeometry build_ensemble(const Molecule& templ, int n_mol, OrientationPattern pattern, double separation,
                                const Vec3& polarization, std::optional<Vec3> template_axis) {
  if (n_mol < 1) throw InvalidInput("ensemble size must be >= 1");
  if (pattern == OrientationPattern::Defective && n_mol < 2) {
    throw InvalidInput("defective pattern requires at least two molecules");
  }
  if (!(separation >= 0.0)) throw InvalidInput("separation must be non-negative");
  const Vec3 e = polarization.normalized();
  const Vec3 axis = template_axis ? template_axis->normalized() : molecular_axis(templ);
  const Vec3 line = perpendicular_unit(e);

  // Template with its charge center at the origin.
  const Molecule base = templ.translated(-charge_center(templ)).recentered();

  EnsembleGeometry ens;
  ens.pattern = pattern;
  ens.separation = separation;
  ens.scanned_index = 0;
  for (int k = 0; k < n_mol; ++k) {
    int sign = 1;
    switch (pattern) {
      case OrientationPattern::AllParallel: sign = 1; break;
      case OrientationPattern::Antiparallel: sign = (k % 2 == 0) ? 1 : -1; break;
      case OrientationPattern::Defective: sign = (k == 0) ? 1 : -1; break;
    }
    const Eigen::Matrix3d rot = rotation_between(axis, sign * e);
    Molecule m = base.rotated(rot, Vec3::Zero()).translated(k * separation * line);
    ens.molecules.push_back(m.recentered());
    ens.orientation.push_back(sign);
  }
  return ens;
}

Molecule with_bond_length(const Molecule& molecule, std::size_t a, std::size_t b, double length) {
  if (a >= molecule.size() || b >= molecule.size() || a == b) throw InvalidInput("invalid bond atom indices");
  if (!(length > 0.0)) throw InvalidInput("bond length must be positive");
  auto atoms = molecule.atoms();
  const Vec3 dir = (atoms[b].position - atoms[a].position).normalized();
  atoms[b].position = atoms[a].position + length * dir;
  return Molecule(std::move(atoms), molecule.charge());
}

Molecule merge_ensemble(const EnsembleGeometry& ensemble) {
  std::vector<Atom> atoms;
  int charge = 0;
  for (const auto& m : ensemble.molecules) {
    atoms.insert(atoms.end(), m.atoms().begin(), m.atoms().end());
    charge += m.charge();
  }
  return Molecule(std::move(atoms), charge);
}

double min_intermolecular_distance(const EnsembleGeometry& ensemble) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      for (const auto& a : ensemble.molecules[i].atoms()) {
        for (const auto& b : ensemble.molecules[j].atoms()) {
          best = std::min(best, (a.position - b.position).norm());
        }
      }
    }
  }
  return best;
}

}  // namespace cbohf
