#include "cbohf/boys.hpp"

#include <cmath>
#include <vector>

#include "cbohf/errors.hpp"
#include "cbohf/units.hpp"

namespace cbohf {
namespace {

constexpr double kSwitch = 25.0;

// F_m(T) = exp(-T) sum_k (2T)^k / ((2m+1)(2m+3)...(2m+2k+1))
double boys_series(int m, double t) {
  double term = 1.0 / (2 * m + 1);
  double sum = term;
  for (int k = 1; k < 400; ++k) {
    term *= 2.0 * t / (2 * m + 2 * k + 1);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return std::exp(-t) * sum;
}

}  // namespace

void boys_function(int mmax, double t, double* out) {
  if (mmax < 0) throw InvalidInput("Boys function order must be non-negative");
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("Boys function argument must be finite and >= 0");
  const double et = std::exp(-t);
  if (t < kSwitch) {
    out[mmax] = boys_series(mmax, t);
    for (int m = mmax; m > 0; --m) out[m - 1] = (2.0 * t * out[m] + et) / (2 * m - 1);
    return;
  }
  out[0] = 0.5 * std::sqrt(kPi / t) * std::erf(std::sqrt(t));
  for (int m = 0; m < mmax; ++m) out[m + 1] = ((2 * m + 1) * out[m] - et) / (2.0 * t);
}

double boys_function(int m, double t) {
  std::vector<double> f(static_cast<std::size_t>(m) + 1);
  boys_function(m, t, f.data());
  return f[static_cast<std::size_t>(m)];
}

}  // namespace cbohf
