#include "cbohf/run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "cbohf/ensemble_geometry.hpp"
#include "cbohf/errors.hpp"
#include "cbohf/units.hpp"

namespace cbohf {

using nlohmann::json;

std::string scan_type_name(ScanType type) {
  switch (type) {
    case ScanType::Single: return "single";
    case ScanType::Qc: return "qc";
    case ScanType::Angle: return "angle";
    case ScanType::Bond: return "bond";
    case ScanType::Size: return "size";
  }
  return "?";
}

ScanType parse_scan_type(const std::string& name) {
  if (name == "single") return ScanType::Single;
  if (name == "qc" || name == "scan-qc") return ScanType::Qc;
  if (name == "angle" || name == "scan-angle") return ScanType::Angle;
  if (name == "bond" || name == "scan-bond") return ScanType::Bond;
  if (name == "size" || name == "sweep-size") return ScanType::Size;
  throw InvalidInput("unknown scan type '" + name + "'");
}

RunConfig RunConfig::defaults(ScanType type) {
  RunConfig c;
  c.scan = type;
  switch (type) {
    case ScanType::Single:
      break;
    case ScanType::Qc:
      c.start = -1.0;
      c.stop = 3.0;
      c.step = 0.1;
      break;
    case ScanType::Angle:
      c.start = 0.0;
      c.stop = 180.0;
      c.step = 5.0;
      break;
    case ScanType::Bond:
      c.start = 1.5;
      c.stop = 3.5;
      c.step = 0.1;
      c.sizes = {1, 2, 4, 8};
      break;
    case ScanType::Size:
      c.sizes = {1, 2, 3, 4, 5, 6, 7, 8};
      break;
  }
  return c;
}

namespace {

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw InvalidInput("config: '" + where + "' must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : j.items()) {
    if (!ok.count(key)) throw InvalidInput("config: unknown key '" + where + (where.empty() ? "" : ".") + key + "'");
  }
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

RunConfig RunConfig::from_json(const json& j, RunConfig c) {
  check_keys(j, "", {"scan", "geometry", "basis", "cavity", "ensemble", "scf", "output", "threads"});
  if (j.contains("scan")) {
    const auto& s = j["scan"];
    check_keys(s, "scan", {"type", "start", "stop", "step", "values", "bond_unit"});
    if (s.contains("type")) c.scan = parse_scan_type(s["type"].get<std::string>());
    read(s, "start", c.start);
    read(s, "stop", c.stop);
    read(s, "step", c.step);
    read(s, "values", c.values);
    read(s, "bond_unit", c.bond_unit);
  }
  if (j.contains("geometry")) {
    const auto& g = j["geometry"];
    check_keys(g, "geometry", {"xyz", "file", "charge"});
    read(g, "xyz", c.geometry_xyz);
    read(g, "file", c.geometry_file);
    read(g, "charge", c.charge);
  }
  read(j, "basis", c.basis);
  if (j.contains("cavity")) {
    const auto& k = j["cavity"];
    check_keys(k, "cavity", {"omega_cm1", "fields_v_per_nm", "lambdas_au", "polarization"});
    read(k, "omega_cm1", c.omega_cm1);
    read(k, "fields_v_per_nm", c.fields_v_per_nm);
    read(k, "lambdas_au", c.lambdas_au);
    if (k.contains("polarization")) {
      std::vector<double> p;
      read(k, "polarization", p);
      if (p.size() != 3) throw InvalidInput("config: cavity.polarization needs 3 components");
      const Vec3 v(p[0], p[1], p[2]);
      if (!v.allFinite() || v.norm() == 0.0) throw InvalidInput("config: cavity.polarization must be non-zero");
      c.polarization = std::abs(v.norm() - 1.0) < 1e-14 ? v : v.normalized();
    }
  }
  if (j.contains("ensemble")) {
    const auto& e = j["ensemble"];
    check_keys(e, "ensemble",
               {"sizes", "pattern", "separation_angstrom", "rescale", "scanned_index", "exact", "inter_in_fock"});
    read(e, "sizes", c.sizes);
    read(e, "pattern", c.pattern);
    read(e, "separation_angstrom", c.separation_angstrom);
    read(e, "rescale", c.rescale);
    read(e, "scanned_index", c.scanned_index);
    read(e, "exact", c.exact);
    read(e, "inter_in_fock", c.inter_in_fock);
  }
  if (j.contains("scf")) {
    const auto& s = j["scf"];
    check_keys(s, "scf",
               {"tol_energy", "tol_density", "max_iterations", "diis_size", "level_shift", "damping",
                "damping_iterations"});
    read(s, "tol_energy", c.scf.tol_energy);
    read(s, "tol_density", c.scf.tol_density);
    read(s, "max_iterations", c.scf.max_iterations);
    read(s, "diis_size", c.scf.diis_size);
    read(s, "level_shift", c.scf.level_shift);
    read(s, "damping", c.scf.damping);
    read(s, "damping_iterations", c.scf.damping_iterations);
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    check_keys(o, "output", {"directory", "formats"});
    read(o, "directory", c.out_dir);
    read(o, "formats", c.formats);
  }
  read(j, "threads", c.threads);
  return c;
}

RunConfig RunConfig::from_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return from_json(j, std::move(base));
}

bool config_file_scan_type(const std::string& path, ScanType& type) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (j.contains("scan") && j["scan"].is_object() && j["scan"].contains("type")) {
    type = parse_scan_type(j["scan"]["type"].get<std::string>());
    return true;
  }
  return false;
}

json RunConfig::to_json() const {
  json j;
  j["scan"] = {{"type", scan_type_name(scan)}, {"start", start}, {"stop", stop},
               {"step", step},                 {"values", values}, {"bond_unit", bond_unit}};
  j["geometry"] = {{"xyz", geometry_xyz}, {"file", geometry_file}, {"charge", charge}};
  j["basis"] = basis;
  j["cavity"] = {{"omega_cm1", omega_cm1},
                 {"fields_v_per_nm", fields_v_per_nm},
                 {"lambdas_au", lambdas_au},
                 {"polarization", {polarization.x(), polarization.y(), polarization.z()}}};
  j["ensemble"] = {{"sizes", sizes},
                   {"pattern", pattern},
                   {"separation_angstrom", separation_angstrom},
                   {"rescale", rescale},
                   {"scanned_index", scanned_index},
                   {"exact", exact},
                   {"inter_in_fock", inter_in_fock}};
  j["scf"] = {{"tol_energy", scf.tol_energy},   {"tol_density", scf.tol_density},
              {"max_iterations", scf.max_iterations}, {"diis_size", scf.diis_size},
              {"level_shift", scf.level_shift}, {"damping", scf.damping},
              {"damping_iterations", scf.damping_iterations}};
  j["output"] = {{"directory", out_dir}, {"formats", formats}};
  j["threads"] = threads;
  return j;
}

void RunConfig::validate() const {
  if (!geometry_xyz.empty() && !geometry_file.empty()) {
    throw InvalidInput("config: give either geometry.xyz or geometry.file, not both");
  }
  if (!(omega_cm1 > 0.0)) throw InvalidInput("config: cavity.omega_cm1 must be positive");
  if (lambdas_au.empty() && fields_v_per_nm.empty()) throw InvalidInput("config: no field strengths given");
  for (double f : fields_v_per_nm) {
    if (!(f >= 0.0)) throw InvalidInput("config: field strengths must be non-negative");
  }
  for (double l : lambdas_au) {
    if (!(l >= 0.0)) throw InvalidInput("config: coupling strengths must be non-negative");
  }
  if (sizes.empty()) throw InvalidInput("config: ensemble.sizes is empty");
  for (int n : sizes) {
    if (n < 1) throw InvalidInput("config: ensemble sizes must be >= 1");
  }
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) throw InvalidInput("config: ensemble.sizes must be strictly increasing");
  }
  const auto pat = parse_pattern(pattern);
  if (pat == OrientationPattern::Defective && sizes.front() < 2) {
    throw InvalidInput("config: the defective pattern needs ensembles of at least two molecules");
  }
  if (!(separation_angstrom > 0.0)) throw InvalidInput("config: ensemble.separation_angstrom must be positive");
  if (scanned_index < 0) throw InvalidInput("config: ensemble.scanned_index must be >= 0");
  if (scan == ScanType::Bond && scanned_index >= sizes.front()) {
    throw InvalidInput("config: ensemble.scanned_index is outside the smallest ensemble");
  }
  if (bond_unit != "bohr" && bond_unit != "angstrom") throw InvalidInput("config: scan.bond_unit must be bohr or angstrom");
  scf.validate();
  if (threads < 1) throw InvalidInput("config: threads must be >= 1");
  if (formats.empty()) throw InvalidInput("config: output.formats is empty");
  for (const auto& f : formats) {
    if (f != "csv" && f != "json") throw InvalidInput("config: unknown output format '" + f + "'");
  }
  if (scan != ScanType::Single && scan != ScanType::Size) {
    const auto g = grid();
    if (g.empty()) throw InvalidInput("config: scan grid is empty");
    for (std::size_t i = 1; i < g.size(); ++i) {
      if (!(g[i] > g[i - 1])) throw InvalidInput("config: scan values must be strictly increasing");
    }
    if (scan == ScanType::Bond && !(g.front() > 0.0)) throw InvalidInput("config: bond lengths must be positive");
  }
}

std::vector<double> RunConfig::grid() const {
  if (!values.empty()) return values;
  if (!(step > 0.0)) throw InvalidInput("config: scan.step must be positive");
  if (stop < start) throw InvalidInput("config: scan.stop must not be below scan.start");
  const long n = std::lround(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) g.push_back(start + static_cast<double>(i) * step);
  return g;
}

double RunConfig::omega_hartree() const { return convert_units(omega_cm1, Unit::Wavenumber, Unit::Hartree); }

double RunConfig::separation_bohr() const {
  return convert_units(separation_angstrom, Unit::Angstrom, Unit::Bohr);
}

std::vector<double> RunConfig::lambda0_values() const {
  if (!lambdas_au.empty()) return lambdas_au;
  std::vector<double> out;
  for (double f : fields_v_per_nm) {
    out.push_back(lambda_from_field(convert_units(f, Unit::VoltPerNm, Unit::AuField), omega_hartree()));
  }
  return out;
}

Molecule builtin_hf() {
  const double r = convert_units(0.9168, Unit::Angstrom, Unit::Bohr);
  return Molecule({Atom("F", Vec3::Zero()), Atom("H", Vec3(0.0, 0.0, r))});
}

Molecule resolve_geometry(const RunConfig& config) {
  if (!config.geometry_xyz.empty()) return parse_xyz(config.geometry_xyz, config.charge);
  if (!config.geometry_file.empty()) return read_xyz_file(config.geometry_file, config.charge);
  return builtin_hf();
}

}  // namespace cbohf
