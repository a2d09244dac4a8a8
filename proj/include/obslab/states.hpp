#pragma once

// States and energies at finite truncation.
//
// A wave state is stored in half-wave coordinates (u+, u-):
//   u(t) = sum_nu ( e^{ i t sqrt(lambda_nu) } u+_nu
//                 + e^{ -i t sqrt(lambda_nu) } u-_nu ) e_nu,
//   u+_nu = ( u0_nu - i u1_nu / sqrt(lambda_nu) ) / 2,
//   u-_nu = ( u0_nu + i u1_nu / sqrt(lambda_nu) ) / 2,
// so that u(0) = u0, dt u(0) = u1. The level-s energy
//   E_s(u) = sum_nu lambda_nu^s ( |u+_nu|^2 + |u-_nu|^2 )
// equals, at every time, (1/2)( |A^{s/2} u|^2 + |A^{(s-1)/2} dt u|^2 ):
// the cross terms of the two exponentials cancel exactly, which is the
// conservation identity the tests pin down.
//
// A Schrodinger state is the coefficient vector of u(0); the evolution is
// u_nu(t) = e^{ i t lambda_nu } u0_nu and |u(t)|_{D(A^p)} is conserved.

#include "prng.hpp"
#include "spectral_model.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>

namespace obslab {

struct WaveState {
    Eigen::VectorXcd uplus;
    Eigen::VectorXcd uminus;
};

struct SchrodingerState {
    Eigen::VectorXcd u0;
};

inline void check_size(const SpectralModel& m, const WaveState& s) {
    if (s.uplus.size() != m.n_modes || s.uminus.size() != m.n_modes)
        throw std::invalid_argument("wave state size does not match model");
}

inline void check_size(const SpectralModel& m, const SchrodingerState& s) {
    if (s.u0.size() != m.n_modes)
        throw std::invalid_argument("schrodinger state size does not match model");
}

inline WaveState wave_from_initial(const SpectralModel& m,
                                   const Eigen::VectorXcd& u0,
                                   const Eigen::VectorXcd& u1) {
    if (u0.size() != m.n_modes || u1.size() != m.n_modes)
        throw std::invalid_argument("initial data size does not match model");
    WaveState s;
    s.uplus.resize(m.n_modes);
    s.uminus.resize(m.n_modes);
    const std::complex<double> I(0.0, 1.0);
    for (int k = 0; k < m.n_modes; ++k) {
        const std::complex<double> shift = I * u1(k) / m.sqrt_lambda(k);
        s.uplus(k) = 0.5 * (u0(k) - shift);
        s.uminus(k) = 0.5 * (u0(k) + shift);
    }
    return s;
}

inline std::pair<Eigen::VectorXcd, Eigen::VectorXcd>
initial_from_wave(const SpectralModel& m, const WaveState& s) {
    check_size(m, s);
    Eigen::VectorXcd u0(m.n_modes), u1(m.n_modes);
    const std::complex<double> I(0.0, 1.0);
    for (int k = 0; k < m.n_modes; ++k) {
        u0(k) = s.uplus(k) + s.uminus(k);
        u1(k) = I * m.sqrt_lambda(k) * (s.uplus(k) - s.uminus(k));
    }
    return {u0, u1};
}

// Coefficients of (u(t), dt u(t)).
inline std::pair<Eigen::VectorXcd, Eigen::VectorXcd>
evaluate_wave(const SpectralModel& m, const WaveState& s, double t) {
    check_size(m, s);
    Eigen::VectorXcd v(m.n_modes), dv(m.n_modes);
    const std::complex<double> I(0.0, 1.0);
    for (int k = 0; k < m.n_modes; ++k) {
        const double w = m.sqrt_lambda(k);
        const std::complex<double> ep = std::polar(1.0, w * t);
        const std::complex<double> em = std::conj(ep);
        v(k) = ep * s.uplus(k) + em * s.uminus(k);
        dv(k) = I * w * (ep * s.uplus(k) - em * s.uminus(k));
    }
    return {v, dv};
}

inline Eigen::VectorXcd evaluate_schrodinger(const SpectralModel& m, const SchrodingerState& s, double t) {
    check_size(m, s);
    Eigen::VectorXcd v(m.n_modes);
    for (int k = 0; k < m.n_modes; ++k)
        v(k) = std::polar(1.0, m.lambda(k) * t) * s.u0(k);
    return v;
}

// Time-reversal conjugate: conj(u)(t) = sum e^{-it sqrt(lambda)} conj(u+) + ...
inline WaveState conjugate(const WaveState& s) {
    WaveState out;
    out.uplus = s.uminus.conjugate();
    out.uminus = s.uplus.conjugate();
    return out;
}

inline double energy(const SpectralModel& m, const WaveState& s, double level) {
    check_size(m, s);
    double e = 0.0;
    for (int k = 0; k < m.n_modes; ++k)
        e += std::pow(m.lambda(k), level) * (std::norm(s.uplus(k)) + std::norm(s.uminus(k)));
    return e;
}

// Time-averaged form, (t2-t1)^-1 int (1/2)( |A^{s/2}u|^2 + |A^{(s-1)/2} dt u|^2 );
// the integrand is constant in t, so a rectangle rule exposes conservation.
inline double energy_time_averaged(const SpectralModel& m, const WaveState& s, double level,
                                   double t1, double t2, int n_quad = 16) {
    if (!(t2 > t1) || n_quad < 1) throw std::invalid_argument("energy_time_averaged: bad window");
    const double dt = (t2 - t1) / n_quad;
    double acc = 0.0;
    for (int q = 0; q < n_quad; ++q) {
        const double t = t1 + (q + 0.5) * dt;
        auto [v, dv] = evaluate_wave(m, s, t);
        double e = 0.0;
        for (int k = 0; k < m.n_modes; ++k)
            e += std::pow(m.lambda(k), level) * std::norm(v(k)) +
                 std::pow(m.lambda(k), level - 1.0) * std::norm(dv(k));
        acc += 0.5 * e * dt;
    }
    return acc / (t2 - t1);
}

// |u|_{D(A^p)} of a Schrodinger state (a norm, not its square).
inline double schrodinger_norm(const SpectralModel& m, const SchrodingerState& s, double p) {
    check_size(m, s);
    double e = 0.0;
    for (int k = 0; k < m.n_modes; ++k)
        e += std::pow(m.lambda(k), 2.0 * p) * std::norm(s.u0(k));
    return std::sqrt(e);
}

// Seeded states: coefficients uniform on the complex square [-1,1)^2, drawn
// mode by mode (u+ then u- for the wave). The draw order is part of the
// reproducibility contract.
inline WaveState random_wave_state(int n, std::uint64_t seed) {
    Prng rng(seed);
    WaveState s;
    s.uplus.resize(n);
    s.uminus.resize(n);
    for (int k = 0; k < n; ++k) {
        s.uplus(k) = rng.next_complex();
        s.uminus(k) = rng.next_complex();
    }
    return s;
}

inline SchrodingerState random_schrodinger_state(int n, std::uint64_t seed) {
    Prng rng(seed);
    SchrodingerState s;
    s.u0.resize(n);
    for (int k = 0; k < n; ++k) s.u0(k) = rng.next_complex();
    return s;
}

} // namespace obslab
