#include "cbohf/units.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "cbohf/errors.hpp"

namespace cbohf {
namespace {

enum class Dimension { Energy, Field, Dipole, Length, Volume };

struct UnitInfo {
  Unit unit;
  Dimension dimension;
  double to_au;  // multiply a value in this unit by to_au to get atomic units
  std::string_view name;
};

constexpr double kNmToBohr = 10.0 / kBohrToAngstrom;

const UnitInfo kUnits[] = {
    {Unit::Wavenumber, Dimension::Energy, 1.0 / kHartreeToWavenumber, "cm-1"},
    {Unit::Hartree, Dimension::Energy, 1.0, "hartree"},
    {Unit::VoltPerNm, Dimension::Field, 1.0 / kAuFieldToVoltPerNm, "V/nm"},
    {Unit::AuField, Dimension::Field, 1.0, "au_field"},
    {Unit::Debye, Dimension::Dipole, kDebyeToAu, "debye"},
    {Unit::AuDipole, Dimension::Dipole, 1.0, "au_dipole"},
    {Unit::Angstrom, Dimension::Length, 1.0 / kBohrToAngstrom, "angstrom"},
    {Unit::Bohr, Dimension::Length, 1.0, "bohr"},
    {Unit::CubicNm, Dimension::Volume, kNmToBohr * kNmToBohr * kNmToBohr, "nm3"},
    {Unit::CubicBohr, Dimension::Volume, 1.0, "bohr3"},
};

const UnitInfo& info(Unit unit) {
  for (const auto& u : kUnits) {
    if (u.unit == unit) return u;
  }
  throw DomainError("unknown unit");
}

}  // namespace

Unit parse_unit(std::string_view name) {
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
  if (key == "cm-1" || key == "cm^-1" || key == "wavenumber") return Unit::Wavenumber;
  if (key == "hartree" || key == "ha" || key == "eh") return Unit::Hartree;
  if (key == "v/nm") return Unit::VoltPerNm;
  if (key == "au_field") return Unit::AuField;
  if (key == "debye" || key == "d") return Unit::Debye;
  if (key == "au_dipole") return Unit::AuDipole;
  if (key == "angstrom" || key == "a" || key == "ang") return Unit::Angstrom;
  if (key == "bohr") return Unit::Bohr;
  if (key == "nm3" || key == "nm^3") return Unit::CubicNm;
  if (key == "bohr3" || key == "bohr^3") return Unit::CubicBohr;
  throw DomainError("unknown unit '" + std::string(name) + "'");
}

std::string_view unit_name(Unit unit) { return info(unit).name; }

double convert_units(double value, Unit from, Unit to) {
  const auto& a = info(from);
  const auto& b = info(to);
  if (a.dimension != b.dimension) {
    throw DomainError("cannot convert " + std::string(a.name) + " to " + std::string(b.name));
  }
  if (from == to) return value;
  return value * a.to_au / b.to_au;
}

double lambda_from_field(double field_au, double omega_hartree) {
  if (!(omega_hartree > 0.0)) throw DomainError("cavity frequency must be positive");
  if (field_au < 0.0) throw DomainError("field strength must be non-negative");
  return std::sqrt(2.0 / omega_hartree) * field_au;
}

double mode_volume(double lambda) {
  if (!(lambda > 0.0)) throw DomainError("mode volume requires a positive coupling");
  return 4.0 * kPi / (lambda * lambda);
}

}  // namespace cbohf
