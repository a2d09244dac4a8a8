#pragma once

// Sampled time signals and the Fourier-multiplier side of the band machinery.
//
// A TimeSignal holds d complex channels sampled uniformly on t_l = t0 + l dt.
// apply_multiplier implements F_k(h_k D_t) through the periodic FFT: bin j
// carries the signed angular frequency tau_j and is scaled by F_k(h_k tau_j).
// Periodization is exact when the sampled span is commensurate with the
// model's frequencies (the 1D interval model has integer sqrt(lambda)); the
// aliasing guard dt < pi alpha h_k keeps every band frequency below Nyquist
// and is enforced, not assumed.
//
// The windowing pair (phi, psi) reproduces the time-microlocalization
// experiment: psi = 1 on a neighborhood of [0, T_window] with support in
// (-delta, T_window + delta); phi sits deep inside (0, T_window). The decay
// quantity r_k = | phi . F_k(h_k D_t) ((1 - psi) w) |_L2 then probes the
// kernel tail at distance >= the support gap, and its log-log slope against
// h_k is the measured form of the superpolynomial bound.

#include "dyadic.hpp"
#include "fft.hpp"
#include "spectral_model.hpp"
#include "states.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace obslab {

struct TimeGrid {
    double t0 = 0.0;
    double dt = 0.0;
    int n = 0;
};

struct TimeSignal {
    double t0 = 0.0;
    double dt = 0.0;
    Eigen::MatrixXcd samples; // n_samples x dim

    int n_samples() const { return static_cast<int>(samples.rows()); }
    int dim() const { return static_cast<int>(samples.cols()); }
    double time_at(int l) const { return t0 + l * dt; }
    double span() const { return dt * n_samples(); }
};

inline void validate(const TimeGrid& g) {
    if (g.n < 2 || !(g.dt > 0.0)) throw std::invalid_argument("time grid: need n >= 2 and dt > 0");
}

struct TimeWindowing {
    double T_window = 2.0 * detail::kPi;
    double delta = detail::kPi / 4.0;
    // phi support [center - half_width, center + half_width], transition width
    // phi_transition on each side; recorded in decay reports.
    double phi_half_width = detail::kPi / 4.0;   // T_window / 8 at the default
    double phi_transition = detail::kPi / 8.0;   // T_window / 16 at the default

    static TimeWindowing defaults(double T_window, double delta) {
        TimeWindowing w;
        w.T_window = T_window;
        w.delta = delta;
        w.phi_half_width = T_window / 8.0;
        w.phi_transition = T_window / 16.0;
        return w;
    }

    // psi: plateau [-3 delta/4, T_window + 3 delta/4], support (-delta, T_window + delta).
    double psi(double t) const {
        return detail::rise(t, -delta, -0.75 * delta) *
               detail::rise(-t, -(T_window + delta), -(T_window + 0.75 * delta));
    }

    // phi: centered at T_window/2, support width 2*phi_half_width.
    double phi(double t) const {
        const double c = 0.5 * T_window;
        return detail::rise(t, c - phi_half_width, c - phi_half_width + phi_transition) *
               detail::rise(-t, -(c + phi_half_width), -(c + phi_half_width - phi_transition));
    }

    // support gap between phi and (1 - psi); the gamma of the kernel bound.
    double support_gap() const {
        return 0.5 * T_window - phi_half_width + 0.75 * delta;
    }
};

inline void validate(const TimeWindowing& w) {
    if (!(w.T_window > 0.0) || !(w.delta > 0.0))
        throw std::invalid_argument("windowing: T_window and delta must be positive");
    if (!(w.phi_half_width > w.phi_transition && w.phi_transition > 0.0))
        throw std::invalid_argument("windowing: phi needs 0 < transition < half width");
    if (!(w.phi_half_width < 0.5 * w.T_window))
        throw std::invalid_argument("windowing: phi support must stay inside (0, T_window)");
}

// Observation trace R c(t) of a wave state: d = rank channels whose l2 norm
// is the K-norm of Obs u(t). Built as one factor-times-phases product over
// the modes with nonzero coefficients, so band-projected states cost a band
// cardinality, not n.
inline TimeSignal observation_trace(const SpectralModel& m, const WaveState& s, const TimeGrid& g) {
    check_size(m, s);
    validate(g);
    std::vector<int> active;
    for (int i = 0; i < m.n_modes; ++i)
        if (s.uplus(i) != 0.0 || s.uminus(i) != 0.0) active.push_back(i);
    const auto na = static_cast<int>(active.size());
    Eigen::MatrixXcd coeff(na, g.n);
    for (int r = 0; r < na; ++r) {
        const int i = active[r];
        const double w = m.sqrt_lambda(i);
        for (int l = 0; l < g.n; ++l) {
            const std::complex<double> ph = std::polar(1.0, (g.t0 + l * g.dt) * w);
            coeff(r, l) = ph * s.uplus(i) + std::conj(ph) * s.uminus(i);
        }
    }
    Eigen::MatrixXcd fac(m.factor.rows(), na);
    for (int r = 0; r < na; ++r) fac.col(r) = m.factor.col(active[r]);
    TimeSignal out;
    out.t0 = g.t0;
    out.dt = g.dt;
    out.samples = (fac * coeff).transpose();
    if (na == 0) out.samples = Eigen::MatrixXcd::Zero(g.n, m.factor.rows());
    return out;
}

inline TimeSignal observation_trace(const SpectralModel& m, const SchrodingerState& s, const TimeGrid& g) {
    check_size(m, s);
    validate(g);
    std::vector<int> active;
    for (int i = 0; i < m.n_modes; ++i)
        if (s.u0(i) != 0.0) active.push_back(i);
    const auto na = static_cast<int>(active.size());
    Eigen::MatrixXcd coeff(na, g.n);
    for (int r = 0; r < na; ++r) {
        const int i = active[r];
        for (int l = 0; l < g.n; ++l)
            coeff(r, l) = std::polar(1.0, (g.t0 + l * g.dt) * m.lambda(i)) * s.u0(i);
    }
    Eigen::MatrixXcd fac(m.factor.rows(), na);
    for (int r = 0; r < na; ++r) fac.col(r) = m.factor.col(active[r]);
    TimeSignal out;
    out.t0 = g.t0;
    out.dt = g.dt;
    out.samples = (fac * coeff).transpose();
    if (na == 0) out.samples = Eigen::MatrixXcd::Zero(g.n, m.factor.rows());
    return out;
}

inline void check_aliasing(const DyadicScheme& s, double dt, int k) {
    // largest band frequency is 1/(alpha h_k); require it strictly below Nyquist.
    if (!(dt < detail::kPi * s.alpha * h_scale(s, k)))
        throw std::invalid_argument("apply_multiplier: dt does not resolve band k (aliasing)");
}

inline TimeSignal apply_multiplier(const TimeSignal& sig, const DyadicScheme& s, int k,
                                   Bump which = Bump::inner) {
    if (sig.n_samples() < 2) throw std::invalid_argument("apply_multiplier: need at least two samples");
    check_aliasing(s, sig.dt, k);
    const int n = sig.n_samples();
    TimeSignal out = sig;
    std::vector<std::complex<double>> buf(n);
    std::vector<double> mask(n);
    const double h = h_scale(s, k);
    for (int j = 0; j < n; ++j)
        mask[j] = bump_eval_signed(s, k, h * fft_angular_frequency(j, n, sig.dt), which);
    for (int c = 0; c < sig.dim(); ++c) {
        for (int l = 0; l < n; ++l) buf[l] = sig.samples(l, c);
        fft_inplace(buf, false);
        for (int j = 0; j < n; ++j) buf[j] *= mask[j];
        fft_inplace(buf, true);
        for (int l = 0; l < n; ++l) out.samples(l, c) = buf[l];
    }
    return out;
}

// sup over full windows I_j = [j T, (j+1) T) contained in the span of the
// rectangle-rule L2 norm.
inline double h_norm(const TimeSignal& sig, double T_window) {
    if (!(T_window > 0.0)) throw std::invalid_argument("h_norm: window must be positive");
    const double t_end = sig.t0 + sig.span();
    const int j_lo = static_cast<int>(std::ceil(sig.t0 / T_window - 1e-12));
    const int j_hi = static_cast<int>(std::floor(t_end / T_window + 1e-12)) - 1;
    if (j_hi < j_lo) throw std::invalid_argument("h_norm: span shorter than one full window");
    double best = 0.0;
    for (int j = j_lo; j <= j_hi; ++j) {
        double acc = 0.0;
        for (int l = 0; l < sig.n_samples(); ++l) {
            const double t = sig.time_at(l);
            if (t >= j * T_window && t < (j + 1) * T_window) acc += sig.samples.row(l).squaredNorm();
        }
        best = std::max(best, acc * sig.dt);
    }
    return std::sqrt(best);
}

// Weighted L2 norm sqrt( sum_l w(t_l)^2 |sig_l|^2 dt ).
template <typename Weight>
inline double weighted_l2(const TimeSignal& sig, Weight&& w) {
    double acc = 0.0;
    for (int l = 0; l < sig.n_samples(); ++l) {
        const double v = w(sig.time_at(l));
        acc += v * v * sig.samples.row(l).squaredNorm();
    }
    return std::sqrt(acc * sig.dt);
}

// Max-over-grid K-norm discrepancy between Obs(band projection) and
// multiplier(Obs .): the two routes to the band trace must agree.
inline double commutation_check(const SpectralModel& m, const WaveState& s, const DyadicScheme& sch,
                                int k, const TimeGrid& g) {
    const TimeSignal full = observation_trace(m, s, g);
    const TimeSignal filtered = apply_multiplier(full, sch, k);
    const TimeSignal exact = observation_trace(m, project_band(sch, m, s, k), g);
    double worst = 0.0;
    for (int l = 0; l < g.n; ++l)
        worst = std::max(worst, (filtered.samples.row(l) - exact.samples.row(l)).norm());
    return worst;
}

inline double commutation_check(const SpectralModel& m, const SchrodingerState& s,
                                const DyadicScheme& sch, int k, const TimeGrid& g) {
    const TimeSignal full = observation_trace(m, s, g);
    const TimeSignal filtered = apply_multiplier(full, sch, k);
    const TimeSignal exact = observation_trace(m, project_band(sch, m, s, k), g);
    double worst = 0.0;
    for (int l = 0; l < g.n; ++l)
        worst = std::max(worst, (filtered.samples.row(l) - exact.samples.row(l)).norm());
    return worst;
}

struct DecayRow {
    int k;
    double h;
    double r;
    double slope_so_far; // least-squares slope of log r vs log h over rows up to here
};

struct DecayTable {
    std::vector<DecayRow> rows;
    double slope = 0.0;
    double h_norm_w = 0.0;
};

namespace detail {

inline double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double den = n * sxx - sx * sx;
    return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

} // namespace detail

// r_k = | phi . F_k(h_k D_t) ((1 - psi) w) |_L2 for the observation trace w,
// over k in [k_lo, k_hi]; the returned slope is fitted on all rows.
inline DecayTable decay_experiment(const SpectralModel& m, const WaveState& s, const DyadicScheme& sch,
                                   const TimeWindowing& w, int k_lo, int k_hi, const TimeGrid& g) {
    if (k_lo > k_hi || k_lo < 1) throw std::invalid_argument("decay_experiment: bad k range");
    validate(w);
    TimeSignal trace = observation_trace(m, s, g);
    DecayTable table;
    table.h_norm_w = h_norm(trace, w.T_window);
    TimeSignal damped = trace;
    for (int l = 0; l < damped.n_samples(); ++l)
        damped.samples.row(l) *= (1.0 - w.psi(damped.time_at(l)));
    std::vector<double> lx, ly;
    for (int k = k_lo; k <= k_hi; ++k) {
        const TimeSignal filtered = apply_multiplier(damped, sch, k);
        const double r = weighted_l2(filtered, [&](double t) { return w.phi(t); });
        const double h = h_scale(sch, k);
        lx.push_back(std::log(h));
        ly.push_back(std::log(std::max(r, 1e-300)));
        table.rows.push_back({k, h, r, lx.size() > 1 ? detail::lsq_slope(lx, ly) : 0.0});
    }
    table.slope = table.rows.back().slope_so_far;
    return table;
}

struct TauSeparation {
    double max_ratio = 0.0;
    std::vector<std::pair<int, double>> per_k; // (k, max normalized ratio)
};

// |tau - tau'|^{-1} <= C min(h_k, |tau|^{-1}) whenever h_k tau' lies in
// supp F_k and h_k tau outside the outer plateau. Deterministic grids in the
// rescaled variable sigma = h_k tau; the computed ratio is evaluated in tau
// variables per k, and its max must be k-uniform.
inline TauSeparation tau_separation_check(const DyadicScheme& s, int k_lo, int k_hi, int samples) {
    if (k_lo < 1 || k_lo > k_hi) throw std::invalid_argument("tau_separation_check: bad k range");
    if (samples < 4) throw std::invalid_argument("tau_separation_check: too few samples");
    validate(s);
    const int n_in = std::max(2, static_cast<int>(std::sqrt(static_cast<double>(samples))));
    const int n_out = (samples + n_in - 1) / n_in;
    const double lo_in = s.support_edge(), hi_in = 1.0 / s.support_edge();
    // admissible sigma for tau: outside the outer plateau, two sampled lobes
    // plus the negative axis lobe folded into the lower range.
    const double lo_out = -2.0 / s.alpha, hi_out = 2.0 / s.alpha;
    TauSeparation out;
    for (int k = k_lo; k <= k_hi; ++k) {
        const double h = h_scale(s, k);
        double worst = 0.0;
        for (int i = 0; i < n_in; ++i) {
            const double sig_in = lo_in + (hi_in - lo_in) * i / (n_in - 1);
            const double tau_p = sig_in / h;
            for (int j = 0; j < n_out; ++j) {
                // split the outer samples between the two lobes
                double sig;
                if (j % 2 == 0) {
                    const double f = static_cast<double>(j / 2) / std::max(1, (n_out + 1) / 2 - 1);
                    sig = lo_out + (s.a_tilde - lo_out) * f;
                } else {
                    const double f = static_cast<double>(j / 2) / std::max(1, n_out / 2 - 1);
                    sig = 1.0 / s.a_tilde + (hi_out - 1.0 / s.a_tilde) * f;
                }
                const double tau = sig / h;
                const double ratio = (1.0 / std::abs(tau - tau_p)) /
                                     std::min(h, 1.0 / std::abs(tau));
                worst = std::max(worst, ratio);
            }
        }
        out.per_k.emplace_back(k, worst);
        out.max_ratio = std::max(out.max_ratio, worst);
    }
    return out;
}

// sum_k |F_k(h_k D_t) v|^2 <= m |v|^2 on the grid: Parseval plus the pointwise
// overlap bound. Returns the pair (lhs, rhs) for the caller to compare.
inline std::pair<double, double> summation_stability(const TimeSignal& sig, const DyadicScheme& s) {
    double lhs = 0.0;
    for (int k = 1; k <= s.k_max; ++k) {
        for (int sign : {+1, -1}) {
            if (!(sig.dt < detail::kPi * s.alpha * h_scale(s, k))) continue; // unresolved bands carry no energy below Nyquist
            const TimeSignal f = apply_multiplier(sig, s, sign * k);
            lhs += f.samples.squaredNorm() * sig.dt;
        }
    }
    const double rhs = overlap_bound(s) * sig.samples.squaredNorm() * sig.dt;
    return {lhs, rhs};
}

} // namespace obslab
