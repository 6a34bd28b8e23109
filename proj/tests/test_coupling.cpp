#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dynloc/bessel.hpp"
#include "dynloc/coupling.hpp"
#include "dynloc/errors.hpp"

using namespace dynloc;

namespace {
PhysicalParams params_a() { return {1.503, 0.78, 15.0}; } // 15 um pitch, 780 nm
PhysicalParams params_b() { return {1.503, 0.81, 13.0}; } // 13 um pitch, 810 nm
} // namespace

TEST_CASE("normalized frequency", "[coupling]") {
    CHECK(normalized_frequency(params_a(), 15.0) ==
          Catch::Approx(181.6082214748253).epsilon(1e-12));
    CHECK(normalized_frequency(params_b(), 13.0) ==
          Catch::Approx(151.56439224318754).epsilon(1e-12));
    // scales linearly with the spacing
    CHECK(normalized_frequency(params_a(), 30.0) ==
          Catch::Approx(2.0 * 181.6082214748253).epsilon(1e-12));
}

TEST_CASE("modulation argument and factor", "[coupling]") {
    double omega = normalized_frequency(params_a(), 15.0);
    CHECK(bessel_argument(omega, 14.4, 2.0) == Catch::Approx(0.82157623836022).epsilon(1e-12));
    EffectiveCoupling ec = effective_coupling_sinusoidal(1.0, omega, 14.4, 2.0);
    CHECK(ec.modulation_factor == Catch::Approx(0.8382399202175081).epsilon(1e-12));
    CHECK(ec.value == Catch::Approx(0.8382399202175081).epsilon(1e-12));
    CHECK(effective_coupling_sinusoidal(0.15, omega, 14.4, 2.0).value ==
          Catch::Approx(0.15 * 0.8382399202175081).epsilon(1e-12));
}

TEST_CASE("per-direction effective amplitude", "[coupling]") {
    CHECK(effective_amplitude(14.4, Direction::h) == 14.4);
    CHECK(effective_amplitude(14.4, Direction::h30) ==
          Catch::Approx(12.470765814495916).epsilon(1e-12));
    CHECK(effective_amplitude(14.4, Direction::h60) == Catch::Approx(7.2).epsilon(1e-15));
    CHECK(effective_amplitude(14.4, Direction::v) == 0.0);
}

TEST_CASE("coupling model lookup", "[coupling]") {
    CouplingModel table = coupling_model_from_json({{"couplings", {{"d", 0.15}, {"sqrt3d", 0.02}}}});
    CHECK(table.base(Spacing::d, 15.0) == 0.15);
    CHECK(table.base(Spacing::sqrt3d, 15.0) == 0.02);
    CHECK_THROWS_AS(table.base(Spacing::twod, 15.0), config_error);

    CouplingModel law = coupling_model_from_json(
        {{"exp_law", {{"c_ref", 0.15}, {"s_ref", 13.0}, {"decay", 0.2}}}});
    CHECK(law.base(Spacing::d, 13.0) == Catch::Approx(0.15).epsilon(1e-15));
    CHECK(law.base(Spacing::d, 15.0) == Catch::Approx(0.15 * std::exp(-0.4)).epsilon(1e-14));
    double s3 = std::sqrt(3.0) * 15.0;
    CHECK(law.base(Spacing::sqrt3d, 15.0) ==
          Catch::Approx(0.15 * std::exp(-0.2 * (s3 - 13.0))).epsilon(1e-14));

    nlohmann::json round = coupling_model_to_json(law);
    CouplingModel law2 = coupling_model_from_json(round);
    CHECK(law2.base(Spacing::twod, 15.0) == Catch::Approx(law.base(Spacing::twod, 15.0)));
    CHECK_THROWS_AS(coupling_model_from_json(nlohmann::json::object()), config_error);
}

TEST_CASE("general-profile effective coupling matches the closed form", "[coupling]") {
    double omega = normalized_frequency(params_a(), 15.0);
    CurvatureProfile prof = CurvatureProfile::sinusoidal(14.4, 2.0);
    EffectiveCoupling num = effective_coupling_general(0.15, prof, omega);
    EffectiveCoupling ref = effective_coupling_sinusoidal(0.15, omega, 14.4, 2.0);
    CHECK(num.modulation_factor == Catch::Approx(ref.modulation_factor).margin(1e-9));
    CHECK(num.value == Catch::Approx(ref.value).margin(1e-9));

    EffectiveCoupling flat = effective_coupling_general(0.15, CurvatureProfile::straight(), omega);
    CHECK(flat.value == 0.15);
    CHECK(flat.modulation_factor == 1.0);
}

TEST_CASE("triangle-wave profile has a cosine effective coupling", "[coupling]") {
    // piecewise-linear x_d with slope +-4A/L gives C_eff = C0 cos(4 omega A / L)
    double omega = normalized_frequency(params_a(), 15.0);
    double A = 14.4, L = 2.0;
    int quarter = 16;
    std::vector<double> samples;
    for (int i = 0; i <= 4 * quarter; ++i) {
        double t = double(i) / double(4 * quarter); // z/L
        double x = t < 0.25   ? 4.0 * A * t
                   : t < 0.75 ? A - 4.0 * A * (t - 0.25)
                              : -A + 4.0 * A * (t - 0.75);
        samples.push_back(x);
    }
    CurvatureProfile tri = CurvatureProfile::sampled(samples, L);
    EffectiveCoupling ec = effective_coupling_general(1.0, tri, omega);
    double arg = 4.0 * omega * (A * 1e-4) / L;
    CHECK(arg == Catch::Approx(0.5230316778474969).epsilon(1e-12));
    CHECK(ec.modulation_factor == Catch::Approx(0.8663088133878213).epsilon(1e-12));
}

TEST_CASE("localizing amplitude sits on the first Bessel zero", "[coupling]") {
    double omega = normalized_frequency(params_b(), 13.0);
    double A_star = localizing_amplitude(omega, 1.2);
    CHECK(A_star == Catch::Approx(30.303149898181402).epsilon(1e-9));
    CHECK(std::abs(bessel_j0(bessel_argument(omega, A_star, 1.2))) < 1e-12);

    double omega2 = normalized_frequency(params_a(), 15.0);
    CHECK(localizing_amplitude(omega2, 2.0) ==
          Catch::Approx(42.150060352202935).epsilon(1e-9));
}

TEST_CASE("input validation", "[coupling]") {
    PhysicalParams bad = params_a();
    bad.n0 = -1.0;
    CHECK_THROWS_AS(bad.validate(), config_error);
    CHECK_THROWS_AS(normalized_frequency(params_a(), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(bessel_argument(181.6, 14.4, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(localizing_amplitude(0.0, 2.0), std::invalid_argument);
}
