#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace diffsimo {

// Extended-precision reference values (50 significant digits), computed by
// routes that share no code with specfun.
double oracle_log_bessel_i(int nu, double x);
double oracle_q_function(double x);

// Integral of exp(log_pdf) over [a, b] (b may be +infinity).
double integrate_density(double (*log_pdf)(double, int, double), double a, double b, int half_dof,
                         double noncentrality);

// Density of the alternative convention, 1/2 e^{-(t+lam)} (t/lam)^{(M-1)/2}
// I_{M-1}(sqrt(lam t)); kept only so the calibration can show it does not fit.
double log_ncx2_pdf_literal(double t, int half_dof, double noncentrality);

struct GoodnessOfFit {
    double chi2 = 0.0;
    int dof = 0;
    double p_value = 0.0;
};

// Pearson chi-squared test of samples of ||a h + w||^2 (w ~ CN(0, 2) per
// antenna) against the density `log_pdf` with the given noncentrality.
GoodnessOfFit ncx2_goodness_of_fit(double (*log_pdf)(double, int, double), int half_dof, double noncentrality,
                                   std::size_t samples, std::uint64_t seed);

struct SelfTestCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SelfTestReport {
    std::vector<SelfTestCheck> checks;
    double seconds = 0.0;

    bool passed() const;
};

struct SelfTestOptions {
    std::size_t gof_samples = 1'000'000;
    std::size_t wiener_steps = 1'000'000;
    std::uint64_t seed = 20150101;
};

// Distribution and special-function calibrations:
//   (a) chi-squared fit of ||y||^2 to the calibrated density, M in {1, 4, 16}
//   (b) Wiener increment covariance against process_covariance (5 std. errors)
//   (c) q_function against the extended-precision erfc, 1e-12 relative
//   (d) log_bessel_i against the extended-precision series, 1e-8, nu <= 64
SelfTestReport run_selftest(const SelfTestOptions& options = {});

}  // namespace diffsimo
