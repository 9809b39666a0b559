#include <cmath>

#include "doctest.h"

#include "diffsimo/constellation.hpp"
#include "diffsimo/errors.hpp"
#include "diffsimo/phase.hpp"

using namespace diffsimo;

TEST_CASE("16-QAM splits into three rings") {
    const Constellation c = build_qam(16, 1.0);
    REQUIRE(c.classes().size() == 3);
    CHECK(c.classes()[0].amplitude == doctest::Approx(std::sqrt(0.2)).epsilon(1e-14));
    CHECK(c.classes()[1].amplitude == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c.classes()[2].amplitude == doctest::Approx(3.0 * std::sqrt(0.2)).epsilon(1e-14));
    CHECK(c.classes()[0].prior == 0.25);
    CHECK(c.classes()[1].prior == 0.5);
    CHECK(c.classes()[2].prior == 0.25);
    CHECK(c.classes()[1].phases.size() == 8);
}

TEST_CASE("QPSK is a single ring") {
    const Constellation c = build_qam(4, 1.0);
    REQUIRE(c.classes().size() == 1);
    const auto& cls = c.classes()[0];
    CHECK(cls.amplitude == doctest::Approx(1.0));
    CHECK(cls.prior == 1.0);
    REQUIRE(cls.phases.size() == 4);
    CHECK(cls.phases[0] == doctest::Approx(-3 * kPi / 4));
    CHECK(cls.phases[1] == doctest::Approx(-kPi / 4));
    CHECK(cls.phases[2] == doctest::Approx(kPi / 4));
    CHECK(cls.phases[3] == doctest::Approx(3 * kPi / 4));
}

TEST_CASE("average energy and phase ordering hold for every order") {
    for (int order : {4, 16, 64}) {
        for (double e : {1.0, 7.5, 2e4}) {
            const Constellation c = build_qam(order, e);
            double sum = 0.0;
            for (auto p : c.points()) sum += std::norm(p);
            CHECK(sum / order == doctest::Approx(e).epsilon(1e-12));
            double prior_sum = 0.0;
            std::size_t count = 0;
            for (const auto& cls : c.classes()) {
                prior_sum += cls.prior;
                count += cls.phases.size();
                for (std::size_t i = 0; i < cls.phases.size(); ++i) {
                    CHECK(cls.phases[i] > -kPi);
                    CHECK(cls.phases[i] <= kPi);
                    if (i > 0) CHECK(cls.phases[i] > cls.phases[i - 1]);
                    CHECK(std::abs(c.points()[cls.point_indices[i]]) == doctest::Approx(cls.amplitude));
                }
            }
            CHECK(prior_sum == doctest::Approx(1.0));
            CHECK(count == static_cast<std::size_t>(order));
        }
    }
    CHECK(build_qam(64, 1.0).classes().size() == 9);
}

TEST_CASE("class lookup by amplitude") {
    const Constellation c16 = build_qam(16, 1.0);
    CHECK(c16.class_of(1.0).phases.size() == 8);
    CHECK(&build_qam(4, 1.0).class_of(1.0) != nullptr);
    const Constellation c5 = build_qam(16, 5.0);
    CHECK(c5.class_index(3.0) == 2);
    CHECK_THROWS_AS(c16.class_of(0.9), LookupError);
}

TEST_CASE("symbol from polar coordinates") {
    const Constellation q = build_qam(4, 1.0);
    const std::size_t idx = q.symbol_from_polar(1.0, kPi / 4);
    CHECK(q.points()[idx].real() == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(q.points()[idx].imag() == doctest::Approx(1 / std::sqrt(2.0)));

    // Grid (i, q) = (1, 1) of 16-QAM is the -1 - j corner of the inner ring.
    const Constellation c = build_qam(16, 1.0);
    CHECK(c.symbol_from_polar(std::sqrt(0.2), -3 * kPi / 4) == 5);
    CHECK_THROWS_AS(c.symbol_from_polar(0.9, 0.0), LookupError);
    CHECK_THROWS_AS(c.symbol_from_polar(1.0, 0.0), LookupError);

    for (std::size_t i = 0; i < c.size(); ++i) {
        const auto p = c.points()[i];
        CHECK(c.symbol_from_polar(std::abs(p), std::arg(p)) == i);
        CHECK(c.class_index_of_point(i) == c.class_index(std::abs(p)));
    }
}

TEST_CASE("invalid construction") {
    CHECK_THROWS_AS(build_qam(8, 1.0), ConfigError);
    CHECK_THROWS_AS(build_qam(16, 0.0), ConfigError);
    CHECK_THROWS_AS(build_qam(16, -1.0), ConfigError);
    CHECK_THROWS_AS(Constellation({}, 1.0), ConfigError);
    CHECK_THROWS_AS(Constellation({cdouble(1, 0), cdouble(1, 0)}, 1.0), ConfigError);
}
