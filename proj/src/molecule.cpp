#include "cbohf/molecule.hpp"

#include <array>
#include <cmath>
#include <string>

#include "cbohf/errors.hpp"

namespace cbohf {
namespace {

constexpr std::array<std::string_view, 36> kSymbols = {
    "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg",
    "Al", "Si", "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr",
    "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr"};

bool finite(const Vec3& v) { return v.allFinite(); }

}  // namespace

int atomic_number(std::string_view symbol) {
  std::string s(symbol);
  if (!s.empty()) {
    s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    for (std::size_t i = 1; i < s.size(); ++i) {
      s[i] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[i])));
    }
  }
  for (std::size_t i = 0; i < kSymbols.size(); ++i) {
    if (kSymbols[i] == s) return static_cast<int>(i) + 1;
  }
  throw InvalidInput("unknown element symbol '" + std::string(symbol) + "'");
}

std::string element_symbol(int z) {
  if (z < 1 || z > static_cast<int>(kSymbols.size())) {
    throw InvalidInput("unsupported nuclear charge " + std::to_string(z));
  }
  return std::string(kSymbols[static_cast<std::size_t>(z - 1)]);
}

Atom::Atom(std::string sym, const Vec3& pos)
    : symbol(element_symbol(atomic_number(sym))), charge(atomic_number(sym)), position(pos) {}

Atom::Atom(std::string sym, int z, const Vec3& pos) : symbol(std::move(sym)), charge(z), position(pos) {}

Molecule::Molecule(std::vector<Atom> atoms, int charge) : atoms_(std::move(atoms)), charge_(charge) {
  if (atoms_.empty()) throw InvalidInput("molecule has no atoms");
  gauge_origin_ = charge_center(*this);
  validate();
}

Molecule::Molecule(std::vector<Atom> atoms, int charge, const Vec3& gauge_origin)
    : atoms_(std::move(atoms)), charge_(charge), gauge_origin_(gauge_origin) {
  validate();
}

void Molecule::validate() const {
  if (atoms_.empty()) throw InvalidInput("molecule has no atoms");
  for (const auto& a : atoms_) {
    if (a.charge < 1) throw InvalidInput("nuclear charge must be >= 1 for atom " + a.symbol);
    if (!finite(a.position)) throw InvalidInput("non-finite coordinate for atom " + a.symbol);
  }
  if (!finite(gauge_origin_)) throw InvalidInput("non-finite gauge origin");
  const int n_el = electron_count();
  if (n_el <= 0 || n_el % 2 != 0) {
    throw InvalidInput("closed-shell molecule requires an even, positive electron count (got " +
                       std::to_string(n_el) + ")");
  }
}

int Molecule::nuclear_charge_sum() const {
  int z = 0;
  for (const auto& a : atoms_) z += a.charge;
  return z;
}

double Molecule::nuclear_repulsion() const {
  double e = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      e += atoms_[i].charge * atoms_[j].charge / (atoms_[i].position - atoms_[j].position).norm();
    }
  }
  return e;
}

Molecule Molecule::with_gauge_origin(const Vec3& origin) const { return Molecule(atoms_, charge_, origin); }

Molecule Molecule::recentered() const { return with_gauge_origin(charge_center(*this)); }

Molecule Molecule::translated(const Vec3& shift) const {
  auto atoms = atoms_;
  for (auto& a : atoms) a.position += shift;
  return Molecule(std::move(atoms), charge_, gauge_origin_ + shift);
}

Molecule Molecule::rotated(const Eigen::Matrix3d& rotation, const Vec3& pivot) const {
  auto atoms = atoms_;
  for (auto& a : atoms) a.position = pivot + rotation * (a.position - pivot);
  return Molecule(std::move(atoms), charge_, pivot + rotation * (gauge_origin_ - pivot));
}

Vec3 charge_center(const Molecule& molecule) {
  if (molecule.atoms().empty()) throw InvalidInput("charge center of an empty molecule");
  Vec3 sum = Vec3::Zero();
  double z = 0.0;
  for (const auto& a : molecule.atoms()) {
    sum += a.charge * a.position;
    z += a.charge;
  }
  if (z <= 0.0) throw InvalidInput("charge center requires a positive total nuclear charge");
  return sum / z;
}

Vec3 nuclear_dipole(const Molecule& molecule, const Vec3& origin) {
  Vec3 mu = Vec3::Zero();
  for (const auto& a : molecule.atoms()) mu += a.charge * (a.position - origin);
  return mu;
}

Eigen::Matrix3d rotation_between(const Vec3& from, const Vec3& to) {
  return Eigen::Quaterniond::FromTwoVectors(from.normalized(), to.normalized()).toRotationMatrix();
}

Vec3 perpendicular_unit(const Vec3& axis) {
  const Vec3 e = axis.normalized();
  // Cross with the Cartesian axis least aligned with e.
  Eigen::Index k = 0;
  e.cwiseAbs().minCoeff(&k);
  return e.cross(Vec3::Unit(k)).normalized();
}

}  // namespace cbohf
