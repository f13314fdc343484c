#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <string>
#include <string_view>
#include <vector>

namespace cbohf {

using Vec3 = Eigen::Vector3d;

/// Nuclear charge for an element symbol (H..Kr); throws InvalidInput for unknown symbols.
int atomic_number(std::string_view symbol);
std::string element_symbol(int z);

struct Atom {
  std::string symbol;
  int charge = 0;  // nuclear charge Z
  Vec3 position = Vec3::Zero();  // bohr

  Atom() = default;
  Atom(std::string symbol, const Vec3& position);
  Atom(std::string symbol, int z, const Vec3& position);
};

/// Closed-shell molecule: atoms in bohr, a net charge and the gauge origin used
/// for every dipole-dependent quantity.
class Molecule {
 public:
  Molecule() = default;
  /// The gauge origin defaults to the nuclear charge center.
  explicit Molecule(std::vector<Atom> atoms, int charge = 0);
  Molecule(std::vector<Atom> atoms, int charge, const Vec3& gauge_origin);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  int charge() const noexcept { return charge_; }
  const Vec3& gauge_origin() const noexcept { return gauge_origin_; }

  int nuclear_charge_sum() const;
  int electron_count() const { return nuclear_charge_sum() - charge_; }
  double nuclear_repulsion() const;

  Molecule with_gauge_origin(const Vec3& origin) const;
  /// Same atoms with the gauge origin moved to the nuclear charge center.
  Molecule recentered() const;
  Molecule translated(const Vec3& shift) const;
  /// Rotates the atoms and the gauge origin about `pivot`.
  Molecule rotated(const Eigen::Matrix3d& rotation, const Vec3& pivot) const;

 private:
  void validate() const;

  std::vector<Atom> atoms_;
  int charge_ = 0;
  Vec3 gauge_origin_ = Vec3::Zero();
};

/// Sum Z_A R_A / sum Z_A.
Vec3 charge_center(const Molecule& molecule);

/// Sum Z_A (R_A - origin).
Vec3 nuclear_dipole(const Molecule& molecule, const Vec3& origin);
inline Vec3 nuclear_dipole(const Molecule& molecule) {
  return nuclear_dipole(molecule, molecule.gauge_origin());
}

/// XYZ text: atom count, comment line, then "symbol x y z" rows in angstrom.
Molecule parse_xyz(std::string_view text, int charge = 0);
Molecule read_xyz_file(const std::string& path, int charge = 0);

/// Rotation matrix taking unit vector `from` onto unit vector `to`.
Eigen::Matrix3d rotation_between(const Vec3& from, const Vec3& to);
/// A deterministic unit vector perpendicular to `axis`.
Vec3 perpendicular_unit(const Vec3& axis);

}  // namespace cbohf
