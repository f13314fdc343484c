#pragma once

#include <vector>

#include "cbohf/molecule.hpp"

namespace cbohf::detail {

/// Hermite expansion coefficients E^{ij}_t of a 1-D Gaussian product,
/// i <= imax, j <= jmax, t <= i + j.
class HermiteE {
 public:
  HermiteE() = default;
  HermiteE(int imax, int jmax, double a, double b, double xab);

  double operator()(int i, int j, int t) const {
    if (t < 0 || t > i + j) return 0.0;
    return data_[static_cast<std::size_t>((i * (jmax_ + 1) + j) * tdim_ + t)];
  }

 private:
  int imax_ = 0, jmax_ = 0, tdim_ = 1;
  std::vector<double> data_;
};

/// Hermite Coulomb integrals R^0_{tuv}(alpha, PC) for t+u+v <= L, stored at
/// ((t*(L+1)) + u)*(L+1) + v.
void hermite_coulomb(int L, double alpha, const Vec3& pc, std::vector<double>& out,
                     std::vector<double>& scratch);

inline int hermite_index(int L, int t, int u, int v) { return (t * (L + 1) + u) * (L + 1) + v; }

}  // namespace cbohf::detail
