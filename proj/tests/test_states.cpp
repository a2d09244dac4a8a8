#include <obslab/spectral_model.hpp>
#include <obslab/states.hpp>

#include "oracle_quadrature.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace obslab;

namespace {

const double kPi = 3.141592653589793238462643383279502884;

SpectralModel identity_model(int n) {
    return build_dirichlet_interval(kPi, n, ObservationSpec{});
}

} // namespace

TEST_CASE("half-wave coordinates roundtrip through initial data") {
    const SpectralModel m = identity_model(12);
    const WaveState u = random_wave_state(12, 99);
    const auto [u0, u1] = initial_from_wave(m, u);
    const WaveState v = wave_from_initial(m, u0, u1);
    REQUIRE((v.uplus - u.uplus).norm() < 1e-13);
    REQUIRE((v.uminus - u.uminus).norm() < 1e-13);
}

TEST_CASE("evaluation at t = 0 returns the initial data") {
    const SpectralModel m = identity_model(8);
    const WaveState u = random_wave_state(8, 5);
    const auto [u0, u1] = initial_from_wave(m, u);
    const auto [v, dv] = evaluate_wave(m, u, 0.0);
    REQUIRE((v - u0).norm() < 1e-13);
    REQUIRE((dv - u1).norm() < 1e-13);
}

TEST_CASE("wave energy is conserved along the flow") {
    const SpectralModel m = identity_model(16);
    const WaveState u = random_wave_state(16, 21);
    const double e0 = energy(m, u, 1.0);
    for (double t : {0.3, 1.7, 5.2, -2.9}) {
        // propagated coefficients: e^{i t w} u+, e^{-i t w} u-
        WaveState ut = u;
        for (int i = 0; i < 16; ++i) {
            const std::complex<double> ph = std::polar(1.0, m.sqrt_lambda(i) * t);
            ut.uplus(i) *= ph;
            ut.uminus(i) *= std::conj(ph);
        }
        REQUIRE(energy(m, ut, 1.0) == Catch::Approx(e0).epsilon(1e-12));
    }
}

TEST_CASE("energy matches its coefficient formula") {
    const SpectralModel m = identity_model(6);
    WaveState u;
    u.uplus = Eigen::VectorXcd::Zero(6);
    u.uminus = Eigen::VectorXcd::Zero(6);
    u.uplus(2) = std::complex<double>(0.6, -0.8); // |.|^2 = 1
    u.uminus(4) = std::complex<double>(0.0, 2.0); // |.|^2 = 4
    for (double s : {0.0, 0.5, 1.0, -0.5}) {
        const double want = std::pow(m.lambda(2), s) * 1.0 + std::pow(m.lambda(4), s) * 4.0;
        REQUIRE(energy(m, u, s) == Catch::Approx(want).epsilon(1e-13));
    }
}

TEST_CASE("time-averaged energy equals the conserved value on any window") {
    // the averaged integrand (|A^{s/2}u|^2 + |A^{(s-1)/2} dt u|^2)/2 is
    // pointwise constant along the flow, so any window and quadrature count
    // reproduce the coefficient energy exactly
    const SpectralModel m = identity_model(10);
    const WaveState u = random_wave_state(10, 77);
    for (double level : {0.0, 1.0}) {
        const double avg = energy_time_averaged(m, u, level, 0.3, 5.9, 7);
        REQUIRE(avg == Catch::Approx(energy(m, u, level)).epsilon(1e-12));
    }
}

TEST_CASE("conjugate swaps and conjugates the half-wave blocks") {
    const WaveState u = random_wave_state(5, 3);
    const WaveState c = conjugate(u);
    for (int i = 0; i < 5; ++i) {
        REQUIRE(c.uplus(i) == std::conj(u.uminus(i)));
        REQUIRE(c.uminus(i) == std::conj(u.uplus(i)));
    }
}

TEST_CASE("schrodinger flow preserves every weighted norm") {
    const SpectralModel m = identity_model(9);
    const SchrodingerState u = random_schrodinger_state(9, 31);
    const double n0 = schrodinger_norm(m, u, 0.75);
    SchrodingerState ut = u;
    for (int i = 0; i < 9; ++i) ut.u0(i) *= std::polar(1.0, m.lambda(i) * 1.37);
    REQUIRE(schrodinger_norm(m, ut, 0.75) == Catch::Approx(n0).epsilon(1e-13));
}

TEST_CASE("schrodinger norm is the square root of the weighted sum") {
    const SpectralModel m = identity_model(4);
    SchrodingerState u;
    u.u0 = Eigen::VectorXcd::Zero(4);
    u.u0(1) = 3.0;
    u.u0(3) = std::complex<double>(0.0, 4.0);
    const double p = 0.5;
    const double want = std::sqrt(std::pow(m.lambda(1), 2.0 * p) * 9.0 +
                                  std::pow(m.lambda(3), 2.0 * p) * 16.0);
    REQUIRE(schrodinger_norm(m, u, p) == Catch::Approx(want).epsilon(1e-13));
}

TEST_CASE("seeded states are reproducible and seed-dependent") {
    const WaveState a = random_wave_state(20, 515);
    const WaveState b = random_wave_state(20, 515);
    const WaveState c = random_wave_state(20, 516);
    REQUIRE((a.uplus - b.uplus).norm() == 0.0);
    REQUIRE((a.uminus - b.uminus).norm() == 0.0);
    REQUIRE((a.uplus - c.uplus).norm() > 0.0);
    const SchrodingerState s1 = random_schrodinger_state(20, 515);
    const SchrodingerState s2 = random_schrodinger_state(20, 515);
    REQUIRE((s1.u0 - s2.u0).norm() == 0.0);
}

TEST_CASE("size mismatches are rejected") {
    const SpectralModel m = identity_model(4);
    const WaveState u = random_wave_state(5, 1);
    REQUIRE_THROWS_AS(energy(m, u, 0.0), std::invalid_argument);
    const SchrodingerState s = random_schrodinger_state(3, 1);
    REQUIRE_THROWS_AS(schrodinger_norm(m, s, 0.0), std::invalid_argument);
}
