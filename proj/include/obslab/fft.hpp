#pragma once

// Complex FFT used by the Fourier-multiplier machinery.
//
// Power-of-two lengths run through an iterative radix-2 transform; other
// lengths fall back to Bluestein's chirp-z algorithm on a padded radix-2
// convolution, so any sample count is admissible. Forward transform uses the
// e^{-i 2pi jl/N} kernel; inverse divides by N.

#include <complex>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <vector>

namespace obslab {

namespace detail {

constexpr double kPi = 3.141592653589793238462643383279502884;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Forward twiddles exp(-2 pi i t / n), t < n/2, cached per length: transforms
// of a fixed length are called thousands of times per experiment.
inline const std::vector<std::complex<double>>& twiddle_table(std::size_t n) {
    static std::map<std::size_t, std::vector<std::complex<double>>> cache;
    auto& tab = cache[n];
    if (tab.empty()) {
        tab.resize(n / 2);
        for (std::size_t t = 0; t < n / 2; ++t) {
            const double ang = -2.0 * kPi * static_cast<double>(t) / static_cast<double>(n);
            tab[t] = {std::cos(ang), std::sin(ang)};
        }
    }
    return tab;
}

inline void fft_radix2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n < 2) return;
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const auto& tw = twiddle_table(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t step = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < half; ++j) {
                const std::complex<double> w = inverse ? std::conj(tw[j * step]) : tw[j * step];
                const std::complex<double> u = a[i + j];
                const std::complex<double> v = a[i + j + half] * w;
                a[i + j] = u + v;
                a[i + j + half] = u - v;
            }
        }
    }
}

inline void fft_bluestein(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    std::size_t m = 1;
    while (m < 2 * n + 1) m <<= 1;
    // chirp: w_j = exp(±i pi j^2 / n); j^2 mod 2n keeps the argument bounded.
    std::vector<std::complex<double>> w(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t q = (j * j) % (2 * n);
        const double ang = (inverse ? 1.0 : -1.0) * kPi * static_cast<double>(q) / static_cast<double>(n);
        w[j] = {std::cos(ang), std::sin(ang)};
    }
    std::vector<std::complex<double>> x(m, {0.0, 0.0}), y(m, {0.0, 0.0});
    for (std::size_t j = 0; j < n; ++j) x[j] = a[j] * w[j];
    y[0] = std::conj(w[0]);
    for (std::size_t j = 1; j < n; ++j) y[j] = y[m - j] = std::conj(w[j]);
    fft_radix2(x, false);
    fft_radix2(y, false);
    for (std::size_t j = 0; j < m; ++j) x[j] *= y[j];
    fft_radix2(x, true);
    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t j = 0; j < n; ++j) a[j] = x[j] * w[j] * scale;
}

} // namespace detail

inline void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
    if (a.empty()) throw std::invalid_argument("fft: empty input");
    if (detail::is_pow2(a.size())) {
        detail::fft_radix2(a, inverse);
    } else {
        detail::fft_bluestein(a, inverse);
    }
    if (inverse) {
        const double scale = 1.0 / static_cast<double>(a.size());
        for (auto& v : a) v *= scale;
    }
}

// Signed angular frequency of DFT bin j for sample spacing dt:
// tau_j = 2pi j~ / (N dt) with j~ = j for j <= N/2, j - N otherwise.
inline double fft_angular_frequency(std::size_t j, std::size_t n, double dt) {
    const auto half = n / 2;
    const double jj = (j <= half) ? static_cast<double>(j)
                                  : static_cast<double>(j) - static_cast<double>(n);
    return 2.0 * detail::kPi * jj / (static_cast<double>(n) * dt);
}

} // namespace obslab
