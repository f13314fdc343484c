#pragma once

#include <string>
#include <vector>

#include "cbohf/molecule.hpp"
#include "cbohf/cavity.hpp"
#include "json.hpp"

namespace cbohf {

enum class ScanType { Single, Qc, Angle, Bond, Size };

std::string scan_type_name(ScanType type);  // "single", "qc", "angle", "bond", "size"
ScanType parse_scan_type(const std::string& name);

/// Resolved run configuration.  Sources are layered: defaults for the scan
/// type, then the config file, then command-line overrides.
struct RunConfig {
  ScanType scan = ScanType::Single;

  // geometry: inline XYZ text, an XYZ file, or the built-in HF molecule
  std::string geometry_xyz;
  std::string geometry_file;
  int charge = 0;
  std::string basis = "aug-cc-pvdz";

  // cavity
  double omega_cm1 = 4467.0;
  std::vector<double> fields_v_per_nm = {0.5, 1.0, 1.5, 2.0};
  std::vector<double> lambdas_au;  // when non-empty, used instead of fields
  Vec3 polarization = Vec3::UnitZ();

  // ensemble
  std::vector<int> sizes = {1};
  std::string pattern = "all-parallel";
  double separation_angstrom = 800.0;
  bool rescale = true;
  int scanned_index = 0;  // 0-based
  bool exact = false;
  bool inter_in_fock = true;

  // scan grid: explicit values, or start/stop/step
  double start = 0.0, stop = 0.0, step = 1.0;
  std::vector<double> values;
  std::string bond_unit = "bohr";

  ScfSettings scf = QcSettings{}.scf;

  std::string out_dir = ".";
  std::vector<std::string> formats = {"csv", "json"};
  int threads = 1;

  /// Defaults, including the scan grid, for one scan type.
  static RunConfig defaults(ScanType type);

  /// Overlays the keys present in `j` onto `base`.  Unknown keys are errors.
  static RunConfig from_json(const nlohmann::json& j, RunConfig base);
  static RunConfig from_file(const std::string& path, RunConfig base);

  nlohmann::json to_json() const;
  void validate() const;

  /// Scan coordinate values in order.
  std::vector<double> grid() const;
  /// Coupling magnitudes lambda0 (a.u.) for each field entry.
  std::vector<double> lambda0_values() const;
  double omega_hartree() const;
  double separation_bohr() const;
};

/// Built-in HF molecule (0.9168 angstrom) used when no geometry is given.
Molecule builtin_hf();

/// Geometry selected by the configuration.
Molecule resolve_geometry(const RunConfig& config);

/// Reads the scan type stored in a config file, if any.
bool config_file_scan_type(const std::string& path, ScanType& type);

}  // namespace cbohf
