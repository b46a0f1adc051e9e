#include <doctest.h>

#include <cmath>

#include "dva/curves.hpp"
#include "dva/errors.hpp"

using namespace dva;

TEST_CASE("credit triangle") {
    CHECK(hazard_from_cds(0.0422085) == doctest::Approx(0.0703475).epsilon(1e-12));
    CHECK(hazard_from_cds(0.0) == 0.0);
    CHECK(hazard_from_cds(0.03, 0.0) == doctest::Approx(0.03));
    CHECK_THROWS_AS(hazard_from_cds(-0.01), ValidationError);
    CHECK_THROWS_AS(hazard_from_cds(0.01, 1.0), ValidationError);
}

TEST_CASE("funding spread of a bond with recovery") {
    CHECK(funding_spread_for_recovery(0.05, 0.4) == doctest::Approx(0.03));
    CHECK(funding_spread_for_recovery(0.05, 1.0) == 0.0);
}

TEST_CASE("survival, density and discount") {
    CHECK(survival(0.05, 0.0) == 1.0);
    CHECK(survival(0.05, 10.0) == doctest::Approx(std::exp(-0.5)));
    CHECK(default_density(0.05, 10.0) == doctest::Approx(0.05 * std::exp(-0.5)));
    CHECK(discount(0.0, 7.0) == 1.0);
    CHECK_THROWS_AS(discount(0.05, -1.0), ValidationError);
    CHECK_THROWS_AS(survival(-0.1, 1.0), ValidationError);
}

TEST_CASE("market params validation") {
    MarketParams p;
    CHECK_NOTHROW(p.validate());
    p.sigma = 0.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p.sigma = 0.2;
    p.recovery_b = 1.5;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p.recovery_b = 0.4;
    p.lambda_b = -0.01;
    CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("examples") {
    CHECK(hazard_from_cds(0.03, 0.40) == doctest::Approx(0.05));
    CHECK(survival(0.0, 12.0) == 1.0);
    CHECK(default_density(0.05, 0.0) == 0.05);
    CHECK(default_density(0.0, 3.0) == 0.0);
    CHECK(discount(0.05, 0.0) == 1.0);
    CHECK(discount(0.05, 1.0) == doctest::Approx(0.951229424500714));
}

TEST_CASE("survival is multiplicative and the density is its negative derivative") {
    for (double lambda : {0.0, 0.01, 0.2}) {
        for (double t : {0.0, 0.7, 5.0}) {
            for (double s : {0.0, 1.3, 20.0}) {
                CHECK(survival(lambda, t) * survival(lambda, s) == doctest::Approx(survival(lambda, t + s)).epsilon(1e-12));
            }
            const double h = 1e-5;
            const double fd = -(survival(lambda, t + h) - survival(lambda, std::max(0.0, t - h))) / (t > 0 ? 2 * h : h);
            CHECK(std::abs(fd - default_density(lambda, t)) < 1e-6);
        }
    }
}
