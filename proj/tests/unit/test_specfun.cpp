#include <cmath>
#include <limits>

#include "doctest.h"

#include "diffsimo/errors.hpp"
#include "diffsimo/selftest.hpp"
#include "diffsimo/specfun.hpp"

using namespace diffsimo;

TEST_CASE("log_bessel_i trivial values") {
    CHECK(log_bessel_i(0, 0.0) == 0.0);
    CHECK(log_bessel_i(1, 0.0) == kLogZero);
    CHECK(log_bessel_i(7, 0.0) == kLogZero);
    CHECK(log_bessel_i_scaled(0, 0.0) == 0.0);
}

TEST_CASE("log_bessel_i against frozen extended-precision values") {
    // mpmath, 50 digits (tests/oracles/make_oracles.py).
    CHECK(log_bessel_i(9, 25.0) == doctest::Approx(20.841847869751431907).epsilon(1e-13));
    CHECK(log_bessel_i(0, 1e-3) == doctest::Approx(2.4999998437500174652e-7).epsilon(1e-12));
    CHECK(log_bessel_i(64, 500.0) == doctest::Approx(491.8795012642473475).epsilon(1e-13));
    CHECK(log_bessel_i(3, 2000.0) == doctest::Approx(1995.278422190275005).epsilon(1e-13));
    CHECK(log_bessel_i_scaled(3, 2000.0) == doctest::Approx(1995.278422190275005 - 2000.0).epsilon(1e-10));
}

TEST_CASE("log_bessel_i matches the series oracle across both evaluation regimes") {
    for (int nu : {0, 1, 2, 5, 15, 31, 64}) {
        for (double x : {1e-8, 0.3, 4.0, 25.0, 60.0, 99.0, 101.0, 150.0, 700.0}) {
            const double ref = oracle_log_bessel_i(nu, x);
            const double got = log_bessel_i(nu, x);
            CHECK(std::abs(got - ref) / std::max(1.0, std::abs(ref)) < 1e-10);
        }
    }
}

TEST_CASE("log_bessel_i is finite far beyond double range of I") {
    const double v = log_bessel_i(2, 1e6);
    CHECK(std::isfinite(v));
    CHECK(v == doctest::Approx(1e6 - 0.5 * std::log(2 * 3.141592653589793 * 1e6)).epsilon(1e-9));
}

TEST_CASE("log_bessel_i rejects its domain violations") {
    CHECK_THROWS_AS(log_bessel_i(-1, 1.0), DomainError);
    CHECK_THROWS_AS(log_bessel_i(2000, 1.0), DomainError);
    CHECK_THROWS_AS(log_bessel_i(1, -0.5), DomainError);
    CHECK_THROWS_AS(log_bessel_i(1, std::numeric_limits<double>::quiet_NaN()), DomainError);
    CHECK_THROWS_AS(log_bessel_i(1, std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("q_function") {
    CHECK(q_function(0.0) == 0.5);
    CHECK(q_function(1.0) == doctest::Approx(0.15865525393145705141).epsilon(1e-14));
    CHECK(q_function(2.0) == doctest::Approx(0.0227501319481792072).epsilon(1e-14));
    CHECK(q_function(-1.0) == doctest::Approx(1.0 - 0.15865525393145705141).epsilon(1e-14));
    const double q40 = q_function(40.0);
    CHECK(q40 >= 0.0);
    CHECK(q40 < 1e-300);
    double prev = 1.0;
    for (double x = -8.0; x <= 40.0; x += 0.25) {
        const double q = q_function(x);
        CHECK(q <= prev);
        prev = q;
    }
}

TEST_CASE("log_ncx2_pdf frozen values") {
    // scipy.stats.ncx2 / chi2 with df = 2M.
    CHECK(log_ncx2_pdf(3.7, 4, 10.0) == doctest::Approx(-5.54138093151317).epsilon(1e-12));
    CHECK(log_ncx2_pdf(40.0, 1, 25.0) == doctest::Approx(-4.212230417191997).epsilon(1e-12));
    CHECK(log_ncx2_pdf(2.5, 3, 0.0) == doctest::Approx(-2.190007258491471).epsilon(1e-12));
    CHECK(log_ncx2_pdf(0.0, 1, 0.0) == doctest::Approx(std::log(0.5)).epsilon(1e-15));
    CHECK(log_ncx2_pdf(0.0, 3, 4.0) == kLogZero);
}

TEST_CASE("log_ncx2_pdf is a density") {
    CHECK(integrate_density(&log_ncx2_pdf, 0.0, std::numeric_limits<double>::infinity(), 4, 10.0) ==
          doctest::Approx(1.0).epsilon(1e-6));
    CHECK(integrate_density(&log_ncx2_pdf, 0.0, std::numeric_limits<double>::infinity(), 1, 0.0) ==
          doctest::Approx(1.0).epsilon(1e-6));
    // Mean 4e6 + 200, standard deviation about 4000.
    CHECK(integrate_density(&log_ncx2_pdf, 4e6 - 1e5, 4e6 + 1e5, 100, 4e6) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("log_ncx2_pdf stays finite at large noncentrality") {
    const double lam = 2e6;
    const double v = log_ncx2_pdf(lam + 200.0, 100, lam);
    CHECK(std::isfinite(v));
    CHECK(v < 0.0);
}

TEST_CASE("sampled energies fit the density") {
    const GoodnessOfFit fit = ncx2_goodness_of_fit(&log_ncx2_pdf, 4, 100.0, 200000, 99);
    CHECK(fit.p_value > 0.001);
    const GoodnessOfFit wrong = ncx2_goodness_of_fit(&log_ncx2_pdf_literal, 4, 100.0, 200000, 99);
    CHECK(wrong.p_value < 1e-6);
}
