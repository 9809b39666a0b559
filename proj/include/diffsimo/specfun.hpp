#pragma once

#include <limits>

namespace diffsimo {

// Log of zero. Compares below every finite log-density, so argmax reductions
// need no special casing.
inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// ln I_nu(x) for integer order 0 <= nu <= 1024 and finite x >= 0, evaluated
// entirely in the log domain. Returns kLogZero for I_nu(0) with nu >= 1.
double log_bessel_i(int nu, double x);

// ln I_nu(x) - x, the exponentially scaled form. Same domain as log_bessel_i.
double log_bessel_i_scaled(int nu, double x);

// Gaussian tail probability P(N(0,1) > x).
double q_function(double x);

// Log-density of t = |a + w_1|^2 + sum_{m=2..M} |w_m|^2 with w_m ~ CN(0, 2)
// and noncentrality lambda = |a|^2, i.e. a noncentral chi-squared variable with
// 2M degrees of freedom and unit variance per real component:
//
//   f(t) = 1/2 exp(-(t + lambda)/2) (t/lambda)^((M-1)/2) I_{M-1}(sqrt(lambda t))
//
// The convention (the 1/2 in the exponent, no factor in the Bessel argument)
// was fixed by fitting sampled t against candidate forms; `diffsimo selftest`
// repeats that calibration. lambda = 0 is the central chi-squared limit.
double log_ncx2_pdf(double t, int half_dof, double noncentrality);

}  // namespace diffsimo
