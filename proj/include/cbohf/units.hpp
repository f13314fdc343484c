#pragma once

#include <string_view>

namespace cbohf {

// Conversion constants.  Atomic units are used everywhere inside the library.
inline constexpr double kHartreeToWavenumber = 219474.6313632;  // cm^-1 per hartree
inline constexpr double kAuFieldToVoltPerNm = 514.2206748;      // V/nm per a.u. field
inline constexpr double kDebyeToAu = 0.3934303;                  // a.u. dipole per debye
inline constexpr double kBohrToAngstrom = 0.529177210903;
inline constexpr double kPi = 3.14159265358979323846;

enum class Unit {
  Wavenumber,  // cm^-1
  Hartree,
  VoltPerNm,
  AuField,
  Debye,
  AuDipole,
  Angstrom,
  Bohr,
  CubicNm,
  CubicBohr,
};

/// Parses a unit name such as "cm-1", "hartree", "V/nm", "debye", "angstrom", "nm3".
Unit parse_unit(std::string_view name);
std::string_view unit_name(Unit unit);

/// Converts between the supported unit pairs (energy, field, dipole, length, volume).
/// Converting a unit to itself is the identity; any other pair throws DomainError.
double convert_units(double value, Unit from, Unit to);

/// Coupling magnitude lambda = sqrt(2/omega) * epsilon, all in atomic units.
double lambda_from_field(double field_au, double omega_hartree);

/// Effective mode volume 4*pi/lambda^2 in bohr^3.
double mode_volume(double lambda);

}  // namespace cbohf
