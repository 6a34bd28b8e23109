#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dynloc/bessel.hpp"
#include "dynloc/errors.hpp"
#include "dynloc/quadrature.hpp"
#include "support/oracles.hpp"

using dynloc::integrate;

TEST_CASE("polynomials are integrated exactly", "[quadrature]") {
    for (int k = 0; k <= 22; ++k) {
        double got = integrate([k](double x) { return std::pow(x, k); }, 0.0, 1.0, 1e-13);
        CHECK(got == Catch::Approx(1.0 / (k + 1)).epsilon(1e-13));
    }
}

TEST_CASE("smooth transcendental integrals", "[quadrature]") {
    CHECK(integrate([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-12) ==
          Catch::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
    // an oscillatory case tied to the Bessel integral representation
    double got = integrate([](double t) { return std::cos(10.0 * std::sin(t)); }, 0.0,
                           oracle::kPi, 1e-12) /
                 oracle::kPi;
    CHECK(got == Catch::Approx(oracle::j0(10.0, 40000)).margin(1e-12));
}

TEST_CASE("zero-length and antisymmetric integrals terminate", "[quadrature]") {
    CHECK(integrate([](double) { return 1.0; }, 2.0, 2.0, 1e-12) == 0.0);
    CHECK(std::abs(integrate([](double x) { return x; }, -1.0, 1.0, 1e-12)) < 1e-13);
}

TEST_CASE("non-integrable-by-bisection singularity raises accuracy error", "[quadrature]") {
    CHECK_THROWS_AS(integrate([](double x) { return std::pow(x, -0.9); }, 0.0, 1.0, 1e-12),
                    dynloc::accuracy_error);
}

TEST_CASE("piecewise-smooth integrand converges", "[quadrature]") {
    double got = integrate([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, 1e-11);
    // exact: 0.3^2/2 + 0.7^2/2
    CHECK(got == Catch::Approx(0.5 * (0.09 + 0.49)).epsilon(1e-10));
}
