#include "diffsimo/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <fmt/format.h>

#include "diffsimo/phase_noise.hpp"
#include "diffsimo/random.hpp"
#include "diffsimo/specfun.hpp"

namespace diffsimo {

using Big = boost::multiprecision::cpp_bin_float_50;

double oracle_log_bessel_i(int nu, double x) {
    if (x == 0.0) return nu == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    const Big half_x = Big(x) / 2;
    const Big q = half_x * half_x;
    Big term = boost::multiprecision::pow(half_x, nu);
    for (int i = 2; i <= nu; ++i) term /= i;
    Big sum = term;
    const Big eps("1e-45");
    for (long k = 1;; ++k) {
        term *= q / (Big(k) * Big(k + nu));
        sum += term;
        if (term < eps * sum && static_cast<double>(k) > x) break;
    }
    return static_cast<double>(boost::multiprecision::log(sum));
}

double oracle_q_function(double x) {
    const Big arg = Big(x) / boost::multiprecision::sqrt(Big(2));
    return static_cast<double>(boost::math::erfc(arg) / 2);
}

double log_ncx2_pdf_literal(double t, int half_dof, double noncentrality) {
    const int order = half_dof - 1;
    if (t == 0.0) return order == 0 ? -std::log(2.0) - noncentrality : kLogZero;
    return -std::log(2.0) - (t + noncentrality) + 0.5 * order * std::log(t / noncentrality) +
           log_bessel_i(order, std::sqrt(noncentrality * t));
}

double integrate_density(double (*log_pdf)(double, int, double), double a, double b, int half_dof,
                         double noncentrality) {
    auto f = [&](double t) { return std::exp(log_pdf(t, half_dof, noncentrality)); };
    if (std::isinf(b)) {
        boost::math::quadrature::exp_sinh<double> integrator;
        return integrator.integrate([&](double s) { return f(a + s); });
    }
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

GoodnessOfFit ncx2_goodness_of_fit(double (*log_pdf)(double, int, double), int half_dof, double noncentrality,
                                   std::size_t samples, std::uint64_t seed) {
    // Equal-width bins over mean +- 6 sd plus two tail bins; the expected
    // masses come from quadrature of the density under test.
    const double mean = 2.0 * half_dof + noncentrality;
    const double sd = std::sqrt(4.0 * half_dof + 4.0 * noncentrality);
    const double lo = std::max(0.0, mean - 6.0 * sd);
    const double hi = mean + 6.0 * sd;
    constexpr int kBins = 60;
    const double width = (hi - lo) / kBins;

    std::vector<double> edges{0.0};
    if (lo > 0.0) edges.push_back(lo);
    for (int i = 1; i <= kBins; ++i) edges.push_back(lo + i * width);
    edges.push_back(std::numeric_limits<double>::infinity());
    const std::size_t n_bins = edges.size() - 1;

    std::vector<double> observed(n_bins, 0.0);
    Rng rng(seed);
    NormalDist normal;
    const double a = std::sqrt(noncentrality);
    for (std::size_t s = 0; s < samples; ++s) {
        const double re = a + normal(rng);
        double t = re * re;
        const double im = normal(rng);
        t += im * im;
        for (int m = 1; m < half_dof; ++m) {
            const double u = normal(rng);
            const double v = normal(rng);
            t += u * u + v * v;
        }
        const auto bin = static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), t) - edges.begin()) - 1;
        observed[std::min(bin, n_bins - 1)] += 1.0;
    }

    std::vector<double> expected(n_bins);
    for (std::size_t b = 0; b < n_bins; ++b) {
        expected[b] = static_cast<double>(samples) * integrate_density(log_pdf, edges[b], edges[b + 1], half_dof,
                                                                       noncentrality);
    }

    // Merge neighbouring bins until each expects at least 5 counts.
    std::vector<double> obs_m, exp_m;
    double acc_o = 0.0, acc_e = 0.0;
    for (std::size_t b = 0; b < n_bins; ++b) {
        acc_o += observed[b];
        acc_e += expected[b];
        if (acc_e >= 5.0) {
            obs_m.push_back(acc_o);
            exp_m.push_back(acc_e);
            acc_o = acc_e = 0.0;
        }
    }
    if (!exp_m.empty()) {
        obs_m.back() += acc_o;
        exp_m.back() += acc_e;
    } else {
        obs_m.push_back(acc_o);
        exp_m.push_back(acc_e);
    }

    GoodnessOfFit out;
    for (std::size_t b = 0; b < exp_m.size(); ++b) {
        const double e = std::max(exp_m[b], 1e-300);
        out.chi2 += (obs_m[b] - e) * (obs_m[b] - e) / e;
    }
    out.dof = static_cast<int>(exp_m.size()) - 1;
    if (out.dof < 1 || !std::isfinite(out.chi2)) {
        out.p_value = 0.0;
    } else {
        out.p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared(out.dof), out.chi2));
    }
    return out;
}

bool SelfTestReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const SelfTestCheck& c) { return c.passed; });
}

namespace {

void check_gof(SelfTestReport& report, const SelfTestOptions& options) {
    const int dofs[] = {1, 4, 16};
    for (int i = 0; i < 3; ++i) {
        const int m = dofs[i];
        const double lam = 25.0 * m;
        const std::uint64_t seed = derive_seed(options.seed, {1, static_cast<std::uint64_t>(m)});
        const GoodnessOfFit fit = ncx2_goodness_of_fit(&log_ncx2_pdf, m, lam, options.gof_samples, seed);
        const GoodnessOfFit lit = ncx2_goodness_of_fit(&log_ncx2_pdf_literal, m, lam, options.gof_samples, seed);
        report.checks.push_back(
            {fmt::format("ncx2 fit M={}", m), fit.p_value > 0.01,
             fmt::format("lambda={} chi2={:.2f} dof={} p={:.4f} (literal-exponent form: p={:.3g})", lam, fit.chi2,
                         fit.dof, fit.p_value, lit.p_value)});
    }
}

void check_wiener(SelfTestReport& report, const SelfTestOptions& options) {
    const PhaseNoiseConfig cfg{0.01, 0.005, OscMode::kSlo};
    constexpr int kAntennas = 3;
    Rng rng(derive_seed(options.seed, {2}));
    const auto steps = static_cast<int>(options.wiener_steps);
    const PhaseTrajectory traj = sample_trajectory(cfg, kAntennas, steps + 1, rng);
    const Eigen::MatrixXd inc = traj.theta.rightCols(steps) - traj.theta.leftCols(steps);
    const Eigen::MatrixXd emp = inc * inc.transpose() / static_cast<double>(steps);
    const Eigen::MatrixXd sigma = process_covariance(cfg, kAntennas);

    double worst = 0.0;
    for (int i = 0; i < kAntennas; ++i) {
        for (int j = 0; j < kAntennas; ++j) {
            // Std. error of a zero-mean covariance estimate.
            const double se = std::sqrt((sigma(i, i) * sigma(j, j) + sigma(i, j) * sigma(i, j)) / steps);
            worst = std::max(worst, std::abs(emp(i, j) - sigma(i, j)) / se);
        }
    }
    report.checks.push_back({"wiener increment covariance", worst <= 5.0,
                             fmt::format("max deviation {:.2f} standard errors over {} steps", worst, steps)});
}

void check_q(SelfTestReport& report) {
    double worst = 0.0;
    for (int i = -160; i <= 160; ++i) {
        const double x = 0.05 * i;
        const double ref = oracle_q_function(x);
        worst = std::max(worst, std::abs(q_function(x) - ref) / ref);
    }
    report.checks.push_back(
        {"q_function vs erfc oracle", worst <= 1e-12, fmt::format("max relative error {:.3g} on [-8, 8]", worst)});
}

void check_bessel(SelfTestReport& report) {
    const double xs[] = {1e-3, 0.1, 0.5, 1.0, 2.5, 5.0, 9.0, 17.0, 25.0, 40.0, 50.0, 75.0, 99.0, 101.0, 250.0, 1000.0};
    double worst = 0.0;
    std::string where;
    for (int nu = 0; nu <= 64; ++nu) {
        for (double x : xs) {
            const double ref = oracle_log_bessel_i(nu, x);
            const double err = std::abs(log_bessel_i(nu, x) - ref) / std::max(1.0, std::abs(ref));
            if (err > worst) {
                worst = err;
                where = fmt::format("nu={} x={}", nu, x);
            }
        }
    }
    report.checks.push_back({"log_bessel_i vs extended-precision series", worst <= 1e-8,
                             fmt::format("max relative error {:.3g} ({}), nu <= 64", worst, where)});
}

}  // namespace

SelfTestReport run_selftest(const SelfTestOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    SelfTestReport report;
    check_gof(report, options);
    check_wiener(report, options);
    check_q(report);
    check_bessel(report);
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace diffsimo
