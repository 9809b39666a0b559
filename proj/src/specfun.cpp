#include "diffsimo/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "diffsimo/errors.hpp"

namespace diffsimo {

namespace {

constexpr int kMaxOrder = 1024;

// Below this value of sqrt(nu^2 + x^2) the power series is used; above it the
// first omitted Debye term is < 3e-11 relative.
constexpr double kUniformThreshold = 100.0;

void check_bessel_domain(int nu, double x) {
    if (nu < 0 || nu > kMaxOrder) throw DomainError("log_bessel_i: order out of range: " + std::to_string(nu));
    if (!std::isfinite(x)) throw DomainError("log_bessel_i: non-finite argument");
    if (x < 0.0) throw DomainError("log_bessel_i: negative argument");
}

// ln I_nu(x) - x from the ascending series
//   I_nu(x) = (x/2)^nu / nu! * sum_k (x^2/4)^k / (k! (nu+1)_k).
// All terms are positive, so there is no cancellation.
double series_scaled(int nu, double x) {
    const double q = 0.25 * x * x;
    const double log_lead = nu * std::log(0.5 * x) - std::lgamma(nu + 1.0);
    double term = 1.0;
    double tail = 0.0;
    for (int k = 1; k < 100000; ++k) {
        term *= q / (static_cast<double>(k) * (nu + k));
        tail += term;
        if (term <= 1e-17 * (1.0 + tail) && k * (nu + k) > q) break;
    }
    return log_lead + std::log1p(tail) - x;
}

// Uniform (Debye) expansion of I_nu(nu z), written in terms of
// mu = sqrt(nu^2 + x^2) so nu = 0 is also covered:
//   I_nu(x) ~ exp(mu + nu ln(x / (nu + mu))) / sqrt(2 pi mu) * sum_k u_k(p) / nu^k,
// with p = nu / mu and u_k(p) / nu^k = (u_k(p) / p^k) / mu^k.
double uniform_scaled(int nu, double x) {
    const double v = nu;
    const double mu = std::hypot(v, x);
    const double p = v / mu;
    const double p2 = p * p;
    const double inv = 1.0 / mu;

    // u_k(p) / p^k, polynomials in p^2.
    const double c1 = (3.0 - 5.0 * p2) / 24.0;
    const double c2 = (81.0 + p2 * (-462.0 + p2 * 385.0)) / 1152.0;
    const double c3 = (30375.0 + p2 * (-369603.0 + p2 * (765765.0 - p2 * 425425.0))) / 414720.0;
    const double c4 =
        (4465125.0 + p2 * (-94121676.0 + p2 * (349922430.0 + p2 * (-446185740.0 + p2 * 185910725.0)))) / 39813120.0;
    const double series = 1.0 + inv * (c1 + inv * (c2 + inv * (c3 + inv * c4)));

    // mu - x = nu^2 / (mu + x) avoids cancellation when x >> nu.
    const double exponent = (nu == 0) ? 0.0 : v * v / (mu + x) + v * std::log(x / (v + mu));
    return exponent - 0.5 * std::log(2.0 * std::numbers::pi * mu) + std::log(series);
}

}  // namespace

double log_bessel_i_scaled(int nu, double x) {
    check_bessel_domain(nu, x);
    if (x == 0.0) return nu == 0 ? 0.0 : kLogZero;
    if (std::hypot(static_cast<double>(nu), x) < kUniformThreshold) return series_scaled(nu, x);
    return uniform_scaled(nu, x);
}

double log_bessel_i(int nu, double x) {
    const double scaled = log_bessel_i_scaled(nu, x);
    return scaled == kLogZero ? kLogZero : scaled + x;
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double log_ncx2_pdf(double t, int half_dof, double noncentrality) {
    if (half_dof < 1) throw DomainError("log_ncx2_pdf: half_dof must be >= 1");
    if (!std::isfinite(t) || !std::isfinite(noncentrality) || t < 0.0 || noncentrality < 0.0) {
        throw DomainError("log_ncx2_pdf: arguments must be finite and nonnegative");
    }
    const int order = half_dof - 1;
    const double lam = noncentrality;

    if (lam == 0.0) {
        // Central limit: t^(M-1) e^(-t/2) / (2^M (M-1)!).
        if (t == 0.0) return order == 0 ? -std::numbers::ln2 : kLogZero;
        return order * std::log(t) - 0.5 * t - half_dof * std::numbers::ln2 - std::lgamma(static_cast<double>(half_dof));
    }
    if (t == 0.0) {
        // (t/lam)^((M-1)/2) I_{M-1}(sqrt(lam t)) -> 1 for M = 1, -> 0 otherwise.
        return order == 0 ? -std::numbers::ln2 - 0.5 * lam : kLogZero;
    }

    const double x = std::sqrt(lam * t);
    const double st = std::sqrt(t);
    const double sl = std::sqrt(lam);
    // -(t + lam)/2 + x = -(sqrt(t) - sqrt(lam))^2 / 2, folded with the scaled Bessel.
    return -std::numbers::ln2 - 0.5 * (st - sl) * (st - sl) + 0.5 * order * (std::log(t) - std::log(lam)) +
           log_bessel_i_scaled(order, x);
}

}  // namespace diffsimo
