#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "dynloc/coupling.hpp"
#include "dynloc/errors.hpp"
#include "dynloc/evolution.hpp"
#include "dynloc/lattice.hpp"
#include "dynloc/transport.hpp"

using namespace dynloc;

namespace {
CouplingModel table_model(double c) {
    CouplingModel m;
    m.table[Spacing::d] = c;
    return m;
}
PhysicalParams params_a() { return {1.503, 0.78, 15.0}; }
} // namespace

TEST_CASE("two-site hopping has the textbook Rabi form", "[evolution]") {
    Lattice lat = build_lattice_1d(2, 15.0);
    Hamiltonian H = build_hamiltonian(lat, table_model(0.2), CurvatureProfile::straight(),
                                      params_a());
    StateVector psi0 = StateVector::basis(2, 0);
    for (double z : {0.3, 1.0, 2.7}) {
        StateVector psi = evolve_static(H, psi0, z);
        double c = std::cos(0.2 * z), s = std::sin(0.2 * z);
        CHECK(std::norm(psi.amps[0]) == Catch::Approx(c * c).margin(1e-12));
        CHECK(std::norm(psi.amps[1]) == Catch::Approx(s * s).margin(1e-12));
    }
}

TEST_CASE("spectral and scaling-and-squaring exponentials agree", "[evolution]") {
    Lattice lat = build_lattice_1d(12, 15.0);
    std::vector<double> beta(12);
    for (int i = 0; i < 12; ++i) beta[std::size_t(i)] = 0.05 * std::sin(1.7 * i);
    Hamiltonian H = build_hamiltonian(lat, table_model(0.3), CurvatureProfile::straight(),
                                      params_a(), 0.0, &beta);
    StateVector psi0 = StateVector::basis(12, 5);
    StateVector a = evolve_static(H, psi0, 2.0);
    StateVector b = evolve_static_expm(H, psi0, 2.0);
    CHECK((a.amps - b.amps).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("piecewise evolution composes", "[evolution]") {
    Lattice lat = build_lattice_1d(9, 15.0);
    Hamiltonian H = build_hamiltonian(lat, table_model(0.4), CurvatureProfile::straight(),
                                      params_a());
    StateVector psi0 = StateVector::basis(9, 4);
    StateVector whole = evolve_static(H, psi0, 3.0);
    StateVector split = evolve_piecewise({{H, 1.2}, {H, 1.8}}, psi0);
    CHECK((whole.amps - split.amps).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS_AS(evolve_piecewise({}, psi0), std::invalid_argument);
    CHECK_THROWS_AS(evolve_piecewise({{H, -1.0}}, psi0), std::invalid_argument);
}

TEST_CASE("Hamiltonian entries carry the per-class effective coupling", "[evolution]") {
    Lattice lat = build_lattice_1d(5, 15.0);
    PhysicalParams p = params_a();
    CurvatureProfile prof = CurvatureProfile::sinusoidal(14.4, 2.0);
    Hamiltonian H = build_hamiltonian(lat, table_model(0.15), prof, p, 0.25);
    double omega = normalized_frequency(p, 15.0);
    double expect = 0.15 * bessel_j0(bessel_argument(omega, 14.4, 2.0));
    for (int i = 0; i + 1 < 5; ++i) {
        CHECK(H.mat(i, i + 1) == Catch::Approx(expect).epsilon(1e-14));
        CHECK(H.mat(i + 1, i) == Catch::Approx(expect).epsilon(1e-14));
    }
    for (int i = 0; i < 5; ++i) CHECK(H.mat(i, i) == 0.25);
    CHECK(H.mat(0, 2) == 0.0);
}

TEST_CASE("norm is conserved to 1e-9 on a large chain", "[evolution]") {
    Lattice lat = build_lattice_1d(241, 15.0);
    Hamiltonian H = build_hamiltonian(lat, table_model(1.0), CurvatureProfile::straight(),
                                      params_a());
    SpectralPropagator prop(H);
    StateVector psi = prop.evolve(StateVector::basis(241, 120), 3.0);
    CHECK(std::abs(psi.amps.norm() - 1.0) < 1e-9);
}

TEST_CASE("coupled-mode RK4 reduces to the static propagator when straight", "[evolution]") {
    int n = 41;
    StateVector psi0 = StateVector::basis(n, n / 2);
    StateVector rk = integrate_coupled_mode(0.5, CurvatureProfile::straight(), params_a(), psi0,
                                            2.0, 2.0 / 800.0);
    Lattice lat = build_lattice_1d(n, 15.0);
    Hamiltonian H = build_hamiltonian(lat, table_model(0.5), CurvatureProfile::straight(),
                                      params_a());
    StateVector st = evolve_static(H, psi0, 2.0);
    CHECK(total_variation(probability_distribution(rk), probability_distribution(st)) < 1e-10);
}

TEST_CASE("driven evolution is stroboscopically captured by the effective model",
          "[evolution]") {
    int n = 41;
    double L = 2.0;
    CurvatureProfile prof = CurvatureProfile::sinusoidal(14.4, L);
    StateVector psi0 = StateVector::basis(n, n / 2);
    StateVector rk = integrate_coupled_mode(0.5, prof, params_a(), psi0, L, L / 400.0);

    Lattice lat = build_lattice_1d(n, 15.0);
    Hamiltonian Heff = build_hamiltonian(lat, table_model(0.5), prof, params_a());
    StateVector eff = evolve_static(Heff, psi0, L);
    CHECK(total_variation(probability_distribution(rk), probability_distribution(eff)) < 1e-4);
}

TEST_CASE("coupled-mode preconditions", "[evolution]") {
    StateVector psi0 = StateVector::basis(11, 5);
    CurvatureProfile prof = CurvatureProfile::sinusoidal(14.4, 2.0);
    CHECK_THROWS_AS(integrate_coupled_mode(0.5, prof, params_a(), psi0, 2.0, 2.0 / 100.0),
                    std::invalid_argument); // dz above L/200
    CHECK_THROWS_AS(integrate_coupled_mode(-0.5, prof, params_a(), psi0, 2.0, 2.0 / 400.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate_coupled_mode(0.5, prof, params_a(), psi0, -1.0, 2.0 / 400.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(StateVector::basis(5, 9), std::invalid_argument);
}

TEST_CASE("light-cone padding rule", "[evolution]") {
    CHECK(min_sites_beyond(1.0, 2.0) == 13);
    CHECK(min_sites_beyond(0.15, 4.5) == 8);
}
