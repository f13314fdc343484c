#pragma once

#include <fstream>
#include <random>
#include <string>

#include "cbohf/units.hpp"
#include "cbohf/molecule.hpp"
#include "json.hpp"

namespace testing {

inline const nlohmann::json& reference() {
  static const nlohmann::json j = [] {
    std::ifstream in(CBOHF_TEST_DATA "/reference_values.json");
    return nlohmann::json::parse(in);
  }();
  return j;
}

inline std::string data_path(const std::string& name) { return std::string(CBOHF_TEST_DATA) + "/" + name; }

inline cbohf::Molecule h2(double r = 1.4) {
  return cbohf::Molecule({cbohf::Atom("H", cbohf::Vec3::Zero()), cbohf::Atom("H", cbohf::Vec3(0, 0, r))});
}

// F at the origin, H on +z (1.7325 bohr); gauge origin at the charge center
inline cbohf::Molecule hf(double r = 1.7325) {
  return cbohf::Molecule({cbohf::Atom("F", cbohf::Vec3::Zero()), cbohf::Atom("H", cbohf::Vec3(0, 0, r))});
}

inline double omega_4467() { return cbohf::convert_units(4467.0, cbohf::Unit::Wavenumber, cbohf::Unit::Hartree); }

inline double lambda_for(double v_per_nm) {
  return cbohf::lambda_from_field(cbohf::convert_units(v_per_nm, cbohf::Unit::VoltPerNm, cbohf::Unit::AuField),
                                  omega_4467());
}

inline Eigen::MatrixXd random_symmetric(int n, std::mt19937& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = u(rng);
  }
  return m;
}

}  // namespace testing
