#include "cbohf/cavity.hpp"

#include <cmath>

#include "cbohf/errors.hpp"
#include "cbohf/units.hpp"

namespace cbohf {

CavityOperators CavityOperators::build(const IntegralSet& ints, const Molecule& molecule, const Vec3& lambda,
                                       double omega, double q) {
  if (!lambda.allFinite()) throw InvalidInput("non-finite coupling vector");
  if (!std::isfinite(q)) throw InvalidInput("non-finite photon displacement");
  CavityOperators ops;
  ops.d = lambda_dipole_matrix(ints.dipole, lambda);
  ops.q2 = lambda_quadrupole_matrix(ints.second_moment, lambda);
  ops.lambda_mu_nuc = lambda.dot(nuclear_dipole(molecule, ints.origin));
  ops.omega = omega;
  ops.q = q;
  ops.lambda = lambda;
  return ops;
}

namespace {
double trace_product(const Matrix& a, const Matrix& b) { return a.cwiseProduct(b).sum(); }
}  // namespace

FockContribution LinearCouplingExtension::evaluate(const Matrix& P) const {
  const double wq = ops_.omega * ops_.q;
  return {wq * ops_.d, wq * trace_product(P, ops_.d) - wq * ops_.lambda_mu_nuc};
}

FockContribution DseOneElectronExtension::evaluate(const Matrix& P) const {
  return {0.5 * ops_.q2, 0.5 * trace_product(P, ops_.q2)};
}

FockContribution DseTwoElectronExtension::evaluate(const Matrix& P) const {
  FockContribution out{Matrix::Zero(ops_.d.rows(), ops_.d.cols()), 0.0};
  if (part_ != Part::Exchange) {
    const double t = trace_product(P, ops_.d);
    out.fock += t * ops_.d;
    out.energy += 0.5 * t * t;
  }
  if (part_ != Part::Coulomb) {
    const Matrix dp = ops_.d * P;
    const Matrix dpd = dp * ops_.d;
    out.fock -= 0.5 * dpd;
    out.energy -= 0.25 * trace_product(P, dpd);
  }
  return out;
}

std::string DseTwoElectronExtension::name() const {
  switch (part_) {
    case Part::Coulomb: return "dse_2J";
    case Part::Exchange: return "dse_2K";
    case Part::Both: break;
  }
  return "dse_2e";
}

FockContribution DseElectronNuclearExtension::evaluate(const Matrix& P) const {
  const double b = ops_.lambda_mu_nuc;
  return {-b * ops_.d, -b * trace_product(P, ops_.d)};
}

FockContribution DipoleFieldExtension::evaluate(const Matrix& P) const {
  return {h_ * d_, h_ * trace_product(P, d_)};
}

double dse_nuclear_scalar(const Molecule& molecule, const Vec3& lambda) {
  const double b = lambda.dot(nuclear_dipole(molecule));
  return 0.5 * b * b;
}

double displacement_energy(double omega, double q) { return 0.5 * omega * omega * q * q; }

double EnergyReport::identity_error() const {
  const double dse = E_dse_1e + E_dse_2J + E_dse_2K + E_dse_en + E_dse_nuc;
  return std::max(std::abs(E_CBO - (E_el + E_lin + E_dse_total + E_dis)), std::abs(E_dse_total - dse));
}

EnergyReport energy_components(const Matrix& P, const ElectronicSystem& sys, const CavityOperators& ops) {
  EnergyReport r;
  Matrix J, K;
  sys.ints.eri.coulomb_exchange(P, J, K);
  r.E_el = trace_product(P, sys.hcore) + 0.5 * trace_product(P, J - 0.5 * K) + sys.e_nuc;
  const double t = trace_product(P, ops.d);
  const double b = ops.lambda_mu_nuc;
  const double wq = ops.omega * ops.q;
  r.E_lin = wq * t - wq * b;
  r.E_dse_1e = 0.5 * trace_product(P, ops.q2);
  r.E_dse_2J = 0.5 * t * t;
  r.E_dse_2K = -0.25 * trace_product(P, ops.d * P * ops.d);
  r.E_dse_en = -b * t;
  r.E_dse_nuc = 0.5 * b * b;
  r.E_dse_total = r.E_dse_1e + r.E_dse_2J + r.E_dse_2K + r.E_dse_en + r.E_dse_nuc;
  r.E_dis = displacement_energy(ops.omega, ops.q);
  r.E_CBO = r.E_el + r.E_lin + r.E_dse_total + r.E_dis;
  r.q = ops.q;
  r.dipole = dipole_expectation(P, sys.ints, sys.molecule);
  return r;
}

EnergyReport energy_report(const ScfResult& scf, const ElectronicSystem& sys, const CavityOperators& ops) {
  if (!scf.converged) throw ConvergenceError("energy report requested for a non-converged SCF");
  return energy_components(scf.P, sys, ops);
}

Vec3 transverse_field_residual(double q, const Vec3& dipole, const Vec3& lambda, double omega) {
  return lambda * (omega * q - lambda.dot(dipole)) / (4.0 * kPi);
}

}  // namespace cbohf
