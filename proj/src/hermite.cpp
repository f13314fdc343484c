#include "hermite.hpp"

#include <cmath>

#include "cbohf/boys.hpp"

namespace cbohf::detail {

HermiteE::HermiteE(int imax, int jmax, double a, double b, double xab)
    : imax_(imax), jmax_(jmax), tdim_(imax + jmax + 1) {
  data_.assign(static_cast<std::size_t>((imax + 1) * (jmax + 1) * tdim_), 0.0);
  const double p = a + b;
  const double q = a * b / p;
  const double xpa = -b * xab / p;
  const double xpb = a * xab / p;
  const double h = 0.5 / p;
  auto at = [&](int i, int j, int t) -> double& {
    return data_[static_cast<std::size_t>((i * (jmax_ + 1) + j) * tdim_ + t)];
  };
  auto get = [&](int i, int j, int t) -> double {
    if (i < 0 || j < 0 || t < 0 || t > i + j) return 0.0;
    return at(i, j, t);
  };
  at(0, 0, 0) = std::exp(-q * xab * xab);
  for (int i = 0; i <= imax; ++i) {
    for (int j = 0; j <= jmax; ++j) {
      if (i == 0 && j == 0) continue;
      for (int t = 0; t <= i + j; ++t) {
        if (j == 0) {
          at(i, j, t) = h * get(i - 1, j, t - 1) + xpa * get(i - 1, j, t) + (t + 1) * get(i - 1, j, t + 1);
        } else {
          at(i, j, t) = h * get(i, j - 1, t - 1) + xpb * get(i, j - 1, t) + (t + 1) * get(i, j - 1, t + 1);
        }
      }
    }
  }
}

void hermite_coulomb(int L, double alpha, const Vec3& pc, std::vector<double>& out,
                     std::vector<double>& scratch) {
  const int d = L + 1;
  const std::size_t n4 = static_cast<std::size_t>(d) * d * d * d;
  scratch.assign(n4, 0.0);
  auto r = [&](int n, int t, int u, int v) -> double& {
    return scratch[static_cast<std::size_t>(((n * d + t) * d + u) * d + v)];
  };
  double f[64];
  boys_function(L, alpha * pc.squaredNorm(), f);
  double fac = 1.0;
  for (int n = 0; n <= L; ++n) {
    r(n, 0, 0, 0) = fac * f[n];
    fac *= -2.0 * alpha;
  }
  for (int s = 1; s <= L; ++s) {
    for (int n = 0; n + s <= L; ++n) {
      for (int t = 0; t <= s; ++t) {
        for (int u = 0; u + t <= s; ++u) {
          const int v = s - t - u;
          double val;
          if (t > 0) {
            val = pc.x() * r(n + 1, t - 1, u, v) + (t > 1 ? (t - 1) * r(n + 1, t - 2, u, v) : 0.0);
          } else if (u > 0) {
            val = pc.y() * r(n + 1, t, u - 1, v) + (u > 1 ? (u - 1) * r(n + 1, t, u - 2, v) : 0.0);
          } else {
            val = pc.z() * r(n + 1, t, u, v - 1) + (v > 1 ? (v - 1) * r(n + 1, t, u, v - 2) : 0.0);
          }
          r(n, t, u, v) = val;
        }
      }
    }
  }
  out.assign(static_cast<std::size_t>(d) * d * d, 0.0);
  for (int t = 0; t <= L; ++t)
    for (int u = 0; u + t <= L; ++u)
      for (int v = 0; v + u + t <= L; ++v) out[static_cast<std::size_t>(hermite_index(L, t, u, v))] = r(0, t, u, v);
}

}  // namespace cbohf::detail
