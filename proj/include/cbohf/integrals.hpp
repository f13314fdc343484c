#pragma once

#include <Eigen/Core>
#include <array>
#include <cstddef>
#include <vector>

#include "cbohf/basis.hpp"
#include "cbohf/molecule.hpp"

namespace cbohf {

using Matrix = Eigen::MatrixXd;

/// Unique two-electron integrals (pq|rs) in chemists' notation, stored once per
/// 8-fold permutation class.
class EriTensor {
 public:
  EriTensor() = default;
  explicit EriTensor(int nbf);

  int nbf() const noexcept { return n_; }
  std::size_t size() const noexcept { return data_.size(); }

  static std::size_t pair_index(int i, int j) {
    return i >= j ? static_cast<std::size_t>(i) * (i + 1) / 2 + j : static_cast<std::size_t>(j) * (j + 1) / 2 + i;
  }
  static std::size_t index(int i, int j, int k, int l) {
    const std::size_t ij = pair_index(i, j), kl = pair_index(k, l);
    return ij >= kl ? ij * (ij + 1) / 2 + kl : kl * (kl + 1) / 2 + ij;
  }
  /// Bytes needed for a basis of nbf functions.
  static std::size_t storage_bytes(int nbf);

  double operator()(int i, int j, int k, int l) const { return data_[index(i, j, k, l)]; }
  double& at(int i, int j, int k, int l) { return data_[index(i, j, k, l)]; }
  const std::vector<double>& data() const noexcept { return data_; }

  /// Coulomb J_{mn} = sum (mn|ls) P_ls and exchange K_{mn} = sum (ml|ns) P_ls.
  void coulomb_exchange(const Matrix& p, Matrix& j, Matrix& k) const;

 private:
  int n_ = 0;
  std::vector<double> data_;
};

struct OneElectronMatrices {
  Matrix S, T, V;
};

/// Cartesian dipole <m|r_a|n> and second moments <m|r_a r_b|n> (order xx, xy,
/// xz, yy, yz, zz), r measured from `origin`.
struct MultipoleMatrices {
  std::array<Matrix, 3> dipole;
  std::array<Matrix, 6> second_moment;
  Vec3 origin = Vec3::Zero();
};

struct EriOptions {
  double schwarz_threshold = 1e-12;
  std::size_t memory_limit_bytes = std::size_t(4) << 30;
  int threads = 1;
};

struct IntegralSet {
  Matrix S, T, V;
  EriTensor eri;
  std::array<Matrix, 3> dipole;
  std::array<Matrix, 6> second_moment;
  Vec3 origin = Vec3::Zero();

  int nbf() const { return static_cast<int>(S.rows()); }
  Matrix hcore() const { return T + V; }
};

/// Overlap, kinetic and nuclear attraction.  Throws ConditioningError when the
/// smallest overlap eigenvalue is below 1e-10.
OneElectronMatrices one_electron_matrices(const std::vector<BasisShell>& shells, const Molecule& molecule);

/// Overlap only (no conditioning check).
Matrix overlap_matrix(const std::vector<BasisShell>& shells);

EriTensor eri_tensor(const std::vector<BasisShell>& shells, const EriOptions& options = {});

MultipoleMatrices multipole_matrices(const std::vector<BasisShell>& shells, const Vec3& origin);

/// d = sum_a lambda_a D_a.
Matrix lambda_dipole_matrix(const std::array<Matrix, 3>& dipole, const Vec3& lambda);

/// q2 = sum_ab lambda_a lambda_b Q_ab (cross terms doubled).
Matrix lambda_quadrupole_matrix(const std::array<Matrix, 6>& second_moment, const Vec3& lambda);

/// Everything above, multipoles about the molecule's gauge origin.
IntegralSet compute_integrals(const std::vector<BasisShell>& shells, const Molecule& molecule,
                              const EriOptions& options = {});

/// Index into the second-moment array for axes a, b (symmetric).
int second_moment_index(int a, int b);

}  // namespace cbohf
