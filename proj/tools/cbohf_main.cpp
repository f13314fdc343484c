#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "cbohf/errors.hpp"
#include "cbohf/scan_drivers.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::string> basis, out, format, geometry, pattern, bond_unit;
  std::optional<int> threads, charge, scanned_index;
  std::optional<double> omega, separation, start, stop, step;
  std::vector<double> fields, lambdas, values, polarization;
  std::vector<int> sizes;
  bool no_rescale = false, exact = false, energy_only_partners = false;
};

std::vector<std::string> split_formats(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void add_options(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "JSON run configuration");
  app->add_option("--basis", o.basis, "basis name or NWChem-format file");
  app->add_option("--out", o.out, "output directory");
  app->add_option("--format", o.format, "comma-separated output formats (csv,json)");
  app->add_option("--threads", o.threads, "worker threads");
  app->add_option("--geometry", o.geometry, "XYZ file (angstrom); default is the built-in HF molecule");
  app->add_option("--charge", o.charge, "net molecular charge");
  app->add_option("--omega", o.omega, "cavity frequency in cm^-1");
  app->add_option("--fields", o.fields, "vacuum field strengths in V/nm")->delimiter(',');
  app->add_option("--lambdas", o.lambdas, "bare couplings in a.u. (replace --fields)")->delimiter(',');
  app->add_option("--polarization", o.polarization, "polarization vector x,y,z")->delimiter(',')->expected(3);
  app->add_option("--sizes", o.sizes, "ensemble sizes")->delimiter(',');
  app->add_option("--pattern", o.pattern, "all-parallel, antiparallel or defective");
  app->add_option("--separation", o.separation, "replica spacing in angstrom");
  app->add_flag("--no-rescale", o.no_rescale, "keep lambda0 fixed instead of lambda0/sqrt(N)");
  app->add_flag("--exact", o.exact, "solve every molecule separately");
  app->add_flag("--energy-only-partners", o.energy_only_partners,
                "leave partner dipoles out of each molecule's Fock matrix");
  app->add_option("--scanned-index", o.scanned_index, "0-based index of the scanned molecule");
  app->add_option("--start", o.start, "scan start");
  app->add_option("--stop", o.stop, "scan stop");
  app->add_option("--step", o.step, "scan step");
  app->add_option("--values", o.values, "explicit scan values")->delimiter(',');
  app->add_option("--bond-unit", o.bond_unit, "bohr or angstrom");
}

cbohf::RunConfig resolve(cbohf::ScanType type, const Overrides& o) {
  using cbohf::RunConfig;
  RunConfig c = RunConfig::defaults(type);
  if (!o.config.empty()) {
    cbohf::ScanType file_type;
    if (cbohf::config_file_scan_type(o.config, file_type) && file_type != type) {
      throw cbohf::InvalidInput("config file is for scan type '" + cbohf::scan_type_name(file_type) +
                                "', not '" + cbohf::scan_type_name(type) + "'");
    }
    c = RunConfig::from_file(o.config, c);
  }
  if (o.basis) c.basis = *o.basis;
  if (o.out) c.out_dir = *o.out;
  if (o.format) c.formats = split_formats(*o.format);
  if (o.threads) c.threads = *o.threads;
  if (o.geometry) {
    c.geometry_file = *o.geometry;
    c.geometry_xyz.clear();
  }
  if (o.charge) c.charge = *o.charge;
  if (o.omega) c.omega_cm1 = *o.omega;
  if (!o.fields.empty()) {
    c.fields_v_per_nm = o.fields;
    c.lambdas_au.clear();
  }
  if (!o.lambdas.empty()) c.lambdas_au = o.lambdas;
  if (!o.polarization.empty()) {
    const cbohf::Vec3 p(o.polarization[0], o.polarization[1], o.polarization[2]);
    if (p.norm() == 0.0) throw cbohf::InvalidInput("--polarization must be non-zero");
    c.polarization = p.normalized();
  }
  if (!o.sizes.empty()) c.sizes = o.sizes;
  if (o.pattern) c.pattern = *o.pattern;
  if (o.separation) c.separation_angstrom = *o.separation;
  if (o.no_rescale) c.rescale = false;
  if (o.exact) c.exact = true;
  if (o.energy_only_partners) c.inter_in_fock = false;
  if (o.scanned_index) c.scanned_index = *o.scanned_index;
  if (o.start) c.start = *o.start;
  if (o.stop) c.stop = *o.stop;
  if (o.step) c.step = *o.step;
  if (!o.values.empty()) c.values = o.values;
  if (o.bond_unit) c.bond_unit = *o.bond_unit;
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cavity Born-Oppenheimer Hartree-Fock scans"};
  app.require_subcommand(1);
  Overrides o;
  const std::vector<std::pair<const char*, cbohf::ScanType>> commands = {
      {"scan-qc", cbohf::ScanType::Qc},       {"scan-angle", cbohf::ScanType::Angle},
      {"scan-bond", cbohf::ScanType::Bond},   {"sweep-size", cbohf::ScanType::Size},
      {"single", cbohf::ScanType::Single}};
  const std::vector<const char*> help = {"energy along the photon displacement q",
                                         "orientation scan with q optimized per angle",
                                         "bond-length scan of one molecule inside an ensemble",
                                         "ensemble-size sweep", "one-shot energy report"};
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    subs.push_back(app.add_subcommand(commands[i].first, help[i]));
    add_options(subs.back(), o);
  }
  CLI11_PARSE(app, argc, argv);

  try {
    cbohf::ScanType type = cbohf::ScanType::Single;
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i]->parsed()) type = commands[i].second;
    }
    const auto config = resolve(type, o);
    const auto output = cbohf::run_scan(config);
    for (const auto& path : cbohf::write_output(output, config)) std::cout << path << "\n";
    if (output.flagged > 0) {
      std::cerr << output.flagged << " of " << output.points << " points did not converge (flagged)\n";
    }
    return cbohf::exit_code(output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
