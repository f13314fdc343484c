#pragma once

namespace cbohf {

/// Boys function F_m(T) for m = 0..mmax written to out[0..mmax].
void boys_function(int mmax, double t, double* out);

/// Single value F_m(T).
double boys_function(int m, double t);

}  // namespace cbohf
