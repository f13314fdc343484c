#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cbohf/ensemble_geometry.hpp"
#include "cbohf/scf.hpp"

namespace cbohf {

/// Matrices and scalars of one cavity mode acting on one molecule.
struct CavityOperators {
  Matrix d;                    // <m| lambda.r |n>
  Matrix q2;                   // <m| (lambda.r)^2 |n>
  double lambda_mu_nuc = 0.0;  // lambda . mu_Nuc about the gauge origin
  double omega = 0.0;
  double q = 0.0;
  Vec3 lambda = Vec3::Zero();

  static CavityOperators build(const IntegralSet& ints, const Molecule& molecule, const Vec3& lambda, double omega,
                               double q);
  static CavityOperators build(const ElectronicSystem& sys, const Vec3& lambda, double omega, double q) {
    return build(sys.ints, sys.molecule, lambda, omega, q);
  }
};

/// omega q d;  E = omega q Tr(P d) - omega q (lambda . mu_Nuc).
class LinearCouplingExtension final : public FockExtension {
 public:
  explicit LinearCouplingExtension(const CavityOperators& ops) : ops_(ops) {}
  FockContribution evaluate(const Matrix& P) const override;
  std::string name() const override { return "linear"; }

 private:
  const CavityOperators& ops_;
};

/// q2 / 2;  E = Tr(P q2) / 2.
class DseOneElectronExtension final : public FockExtension {
 public:
  explicit DseOneElectronExtension(const CavityOperators& ops) : ops_(ops) {}
  FockContribution evaluate(const Matrix& P) const override;
  std::string name() const override { return "dse_1e"; }

 private:
  const CavityOperators& ops_;
};

/// Coulomb-like part t d with E = t^2/2 (t = Tr(P d)); exchange-like part
/// -d P d / 2 with E = -Tr(P d P d)/4.
class DseTwoElectronExtension final : public FockExtension {
 public:
  enum class Part { Both, Coulomb, Exchange };
  explicit DseTwoElectronExtension(const CavityOperators& ops, Part part = Part::Both) : ops_(ops), part_(part) {}
  FockContribution evaluate(const Matrix& P) const override;
  std::string name() const override;

 private:
  const CavityOperators& ops_;
  Part part_;
};

/// -(lambda . mu_Nuc) d;  E = -(lambda . mu_Nuc) Tr(P d).
class DseElectronNuclearExtension final : public FockExtension {
 public:
  explicit DseElectronNuclearExtension(const CavityOperators& ops) : ops_(ops) {}
  FockContribution evaluate(const Matrix& P) const override;
  std::string name() const override { return "dse_en"; }

 private:
  const CavityOperators& ops_;
};

/// Static field along d: h d, E = h Tr(P d).
class DipoleFieldExtension final : public FockExtension {
 public:
  DipoleFieldExtension(const Matrix& d, double h) : d_(d), h_(h) {}
  FockContribution evaluate(const Matrix& P) const override;
  std::string name() const override { return "dipole_field"; }
  void set_strength(double h) { h_ = h; }

 private:
  const Matrix& d_;
  double h_;
};

/// The four density-dependent cavity terms for one molecule.
struct CavityExtensionSet {
  explicit CavityExtensionSet(const CavityOperators& ops)
      : linear(ops), dse_1e(ops), dse_2e(ops), dse_en(ops) {}
  LinearCouplingExtension linear;
  DseOneElectronExtension dse_1e;
  DseTwoElectronExtension dse_2e;
  DseElectronNuclearExtension dse_en;

  ExtensionList list() const { return {&linear, &dse_1e, &dse_2e, &dse_en}; }
};

/// (lambda . mu_Nuc)^2 / 2 about the molecule's gauge origin.
double dse_nuclear_scalar(const Molecule& molecule, const Vec3& lambda);
/// omega^2 q^2 / 2.
double displacement_energy(double omega, double q);

struct EnergyReport {
  double E_el = 0.0;  // Hartree-Fock functional incl. nuclear repulsion
  double E_lin = 0.0;
  double E_dis = 0.0;
  double E_dse_1e = 0.0;
  double E_dse_2J = 0.0;
  double E_dse_2K = 0.0;
  double E_dse_en = 0.0;
  double E_dse_nuc = 0.0;
  double E_dse_total = 0.0;
  double E_CBO = 0.0;
  double q = 0.0;
  Vec3 dipole = Vec3::Zero();

  /// Largest violation of E_CBO = sum of parts and E_dse_total = sum of DSE parts.
  double identity_error() const;
};

/// Components evaluated directly from a density.
EnergyReport energy_components(const Matrix& P, const ElectronicSystem& sys, const CavityOperators& ops);

/// Same, from a converged SCF result; throws ConvergenceError otherwise.
EnergyReport energy_report(const ScfResult& scf, const ElectronicSystem& sys, const CavityOperators& ops);

/// lambda (omega q - lambda . mu) / (4 pi).
Vec3 transverse_field_residual(double q, const Vec3& dipole, const Vec3& lambda, double omega);

// --- photon displacement optimization ---

struct QcSettings {
  ScfSettings scf = [] {
    ScfSettings s;
    s.tol_energy = 1e-12;
    s.tol_density = 1e-10;
    return s;
  }();
  double tol_q = 1e-12;
  double tol_residual = 1e-8;  // |omega q - lambda.mu| * omega
  int max_macro_iterations = 100;
  double damping = 0.5;  // step fraction toward lambda.mu/omega
  bool secant = true;
  bool golden_fallback = true;
  double q_seed = 0.0;
};

struct QcIteration {
  int iteration = 0;
  double q = 0.0;
  double target = 0.0;  // lambda . mu(q) / omega
  double energy = 0.0;
  int scf_iterations = 0;
};

struct PointSolution {
  ScfResult scf;
  EnergyReport report;
};

struct QcResult {
  double q = 0.0;
  ScfResult scf;
  EnergyReport report;
  bool converged = false;
  bool used_fallback = false;
  double field_residual = 0.0;  // |omega q - lambda.mu| * omega
  std::vector<QcIteration> trace;
};

/// CBO-HF at a fixed photon displacement.
PointSolution solve_at_q(const ElectronicSystem& sys, const Vec3& lambda, double omega, double q,
                         const ScfSettings& settings = {}, const Matrix* guess = nullptr);

/// Self-consistent q = lambda.<mu>/omega.  Throws ConvergenceError (message
/// carries the trace) when neither the fixed point nor the fallback converges.
QcResult optimize_qc(const ElectronicSystem& sys, const Vec3& lambda, double omega, const QcSettings& settings = {},
                     const Matrix* guess = nullptr);

/// Golden-section minimum of f on [a, b].
double golden_section_minimize(const std::function<double(double)>& f, double a, double b, double tol,
                               int max_iterations = 200);

}  // namespace cbohf
