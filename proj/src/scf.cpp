#include "cbohf/scf.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "cbohf/errors.hpp"

namespace cbohf {

void ScfSettings::validate() const {
  if (!(tol_energy > 0.0) || !(tol_density > 0.0)) throw InvalidInput("SCF tolerances must be positive");
  if (max_iterations < 1) throw InvalidInput("SCF max_iterations must be >= 1");
  if (diis_size < 0) throw InvalidInput("DIIS subspace size must be >= 0");
  if (!(damping >= 0.0 && damping < 1.0)) throw InvalidInput("damping must lie in [0, 1)");
  if (!(level_shift >= 0.0)) throw InvalidInput("level shift must be non-negative");
}

ElectronicSystem ElectronicSystem::build(const Molecule& molecule, std::string_view basis,
                                         const EriOptions& options) {
  return build(molecule, make_basis(basis, molecule), options);
}

ElectronicSystem ElectronicSystem::build(const Molecule& molecule, std::vector<BasisShell> shells,
                                         const EriOptions& options) {
  ElectronicSystem sys;
  sys.molecule = molecule;
  sys.shells = std::move(shells);
  sys.ints = compute_integrals(sys.shells, molecule, options);
  sys.hcore = sys.ints.hcore();
  sys.e_nuc = molecule.nuclear_repulsion();
  sys.n_electrons = molecule.electron_count();
  return sys;
}

Matrix symmetric_orthogonalizer(const Matrix& S, double cutoff) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(S);
  if (es.info() != Eigen::Success) throw ConditioningError("overlap diagonalization failed");
  const Vector& w = es.eigenvalues();
  int dropped = 0;
  for (int i = 0; i < w.size(); ++i) dropped += (w[i] < cutoff) ? 1 : 0;
  if (dropped > 0) {
    throw ConditioningError(std::to_string(dropped) + " overlap eigenvalue(s) below " + std::to_string(cutoff) +
                            " (smallest " + std::to_string(w.minCoeff()) + "); basis is linearly dependent");
  }
  return es.eigenvectors() * w.cwiseInverse().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

Matrix density_from_orbitals(const Matrix& C, int n_occ) {
  const auto occ = C.leftCols(n_occ);
  return 2.0 * occ * occ.transpose();
}

namespace {

struct Diagonalized {
  Matrix C;
  Vector eps;
};

Diagonalized diagonalize(const Matrix& F, const Matrix& X) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(X.transpose() * F * X);
  return {X * es.eigenvectors(), es.eigenvalues()};
}

int occupied_count(int n_electrons, int nbf) {
  if (n_electrons <= 0 || n_electrons % 2 != 0) {
    throw InvalidInput("closed-shell SCF needs an even, positive electron count");
  }
  const int n_occ = n_electrons / 2;
  if (n_occ > nbf) throw InvalidInput("more occupied orbitals than basis functions");
  return n_occ;
}

double rms(const Matrix& m) { return std::sqrt(m.squaredNorm() / static_cast<double>(m.size())); }

}  // namespace

Matrix core_guess(const Matrix& S, const Matrix& hcore, int n_electrons) {
  const Matrix X = symmetric_orthogonalizer(S);
  const int n_occ = occupied_count(n_electrons, static_cast<int>(S.rows()));
  return density_from_orbitals(diagonalize(hcore, X).C, n_occ);
}

Matrix build_fock(const Matrix& P, const Matrix& hcore, const EriTensor& eri, const ExtensionList& extensions,
                  double* extension_energy) {
  if (P.rows() != hcore.rows() || P.cols() != hcore.cols() || eri.nbf() != hcore.rows()) {
    throw InvalidInput("dimension mismatch in Fock build");
  }
  Matrix J, K;
  eri.coulomb_exchange(P, J, K);
  Matrix F = hcore + J - 0.5 * K;
  double e_ext = 0.0;
  for (const auto* ext : extensions) {
    auto c = ext->evaluate(P);
    if (c.fock.rows() != F.rows() || c.fock.cols() != F.cols()) {
      throw InvalidInput("extension '" + ext->name() + "' returned a matrix of the wrong size");
    }
    F += c.fock;
    e_ext += c.energy;
  }
  if (extension_energy) *extension_energy = e_ext;
  return F;
}

double scf_energy(const Matrix& P, const Matrix& hcore, const EriTensor& eri, double e_nuc,
                  const ExtensionList& extensions) {
  Matrix J, K;
  eri.coulomb_exchange(P, J, K);
  double e = (P.cwiseProduct(hcore)).sum() + 0.5 * (P.cwiseProduct(J - 0.5 * K)).sum() + e_nuc;
  for (const auto* ext : extensions) e += ext->evaluate(P).energy;
  return e;
}

ScfResult scf_solve(const IntegralSet& ints, const Matrix& hcore, int n_electrons, double e_nuc,
                    const ScfSettings& settings, const ExtensionList& extensions, const Matrix* initial_density) {
  settings.validate();
  const Matrix& S = ints.S;
  const int n = static_cast<int>(S.rows());
  const int n_occ = occupied_count(n_electrons, n);
  const Matrix X = symmetric_orthogonalizer(S);

  Matrix P;
  if (initial_density) {
    if (initial_density->rows() != n || initial_density->cols() != n) {
      throw InvalidInput("initial density has the wrong dimension");
    }
    P = *initial_density;
  } else {
    P = density_from_orbitals(diagonalize(hcore, X).C, n_occ);
  }

  ScfResult res;
  res.n_occ = n_occ;
  std::deque<Matrix> diis_f, diis_e;
  double e_prev = std::numeric_limits<double>::infinity();

  for (int it = 1; it <= settings.max_iterations; ++it) {
    double e_ext = 0.0;
    const Matrix F = build_fock(P, hcore, ints.eri, extensions, &e_ext);
    Matrix J, K;
    ints.eri.coulomb_exchange(P, J, K);
    const double energy = (P.cwiseProduct(hcore)).sum() + 0.5 * (P.cwiseProduct(J - 0.5 * K)).sum() + e_nuc + e_ext;
    const Matrix err = F * P * S - S * P * F;
    const double resid = err.cwiseAbs().maxCoeff();

    Matrix Fx = F;
    const bool damped = it <= settings.damping_iterations && settings.damping > 0.0;
    if (settings.diis_size > 1 && !damped) {
      diis_f.push_back(F);
      diis_e.push_back(err);
      if (static_cast<int>(diis_f.size()) > settings.diis_size) {
        diis_f.pop_front();
        diis_e.pop_front();
      }
      const int m = static_cast<int>(diis_f.size());
      if (m >= 2) {
        Matrix B = Matrix::Zero(m + 1, m + 1);
        for (int i = 0; i < m; ++i) {
          for (int j = 0; j <= i; ++j) B(i, j) = B(j, i) = diis_e[i].cwiseProduct(diis_e[j]).sum();
          B(i, m) = B(m, i) = -1.0;
        }
        Vector rhs = Vector::Zero(m + 1);
        rhs[m] = -1.0;
        // Scale for conditioning; the constraint row is unaffected.
        const double scale = B.topLeftCorner(m, m).diagonal().maxCoeff();
        if (scale > 0.0) B.topLeftCorner(m, m) /= scale;
        Eigen::ColPivHouseholderQR<Matrix> qr(B);
        if (qr.rank() == m + 1) {
          const Vector c = qr.solve(rhs);
          Fx.setZero();
          for (int i = 0; i < m; ++i) Fx += c[i] * diis_f[static_cast<std::size_t>(i)];
        } else {
          diis_f.pop_front();
          diis_e.pop_front();
        }
      }
    }
    if (settings.level_shift > 0.0) Fx += settings.level_shift * (S - 0.5 * S * P * S);

    const auto dg = diagonalize(Fx, X);
    Matrix P_new = density_from_orbitals(dg.C, n_occ);
    if (damped) P_new = (1.0 - settings.damping) * P_new + settings.damping * P;

    ScfIteration rec;
    rec.iteration = it;
    rec.energy = energy;
    rec.delta_energy = energy - e_prev;
    rec.rms_density = rms(P_new - P);
    rec.residual = resid;
    res.trace.push_back(rec);
    res.iterations = it;

    const bool done = std::abs(rec.delta_energy) < settings.tol_energy && rec.rms_density < settings.tol_density;
    if (done) {
      // Orbitals of the plain Fock matrix at the converged density.
      const auto fin = diagonalize(F, X);
      res.converged = true;
      res.energy_iterative = energy;
      res.C = fin.C;
      res.orbital_energies = fin.eps;
      res.P = density_from_orbitals(fin.C, n_occ);
      break;
    }
    e_prev = energy;
    P = P_new;
    if (it == settings.max_iterations) {
      const auto fin = diagonalize(build_fock(P, hcore, ints.eri, extensions), X);
      res.converged = false;
      res.energy_iterative = energy;
      res.C = fin.C;
      res.orbital_energies = fin.eps;
      res.P = density_from_orbitals(fin.C, n_occ);
    }
  }

  double e_ext = 0.0;
  res.F = build_fock(res.P, hcore, ints.eri, extensions, &e_ext);
  res.extension_energy = e_ext;
  res.energy = scf_energy(res.P, hcore, ints.eri, e_nuc, extensions);
  res.residual = (res.F * res.P * S - S * res.P * res.F).cwiseAbs().maxCoeff();
  return res;
}

Vec3 dipole_expectation(const Matrix& P, const IntegralSet& ints, const Molecule& molecule) {
  Vec3 mu = nuclear_dipole(molecule, ints.origin);
  for (int a = 0; a < 3; ++a) mu[a] -= P.cwiseProduct(ints.dipole[static_cast<std::size_t>(a)]).sum();
  return mu;
}

}  // namespace cbohf
