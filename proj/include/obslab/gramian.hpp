#pragma once

// Observability Gramians and the constants derived from them.
//
// The Gramian is the Hermitian form x -> int_0^T |Obs u(t)|_K^2 dt written on
// spectral coefficients. Wave states use the stacked layout x = (u+, u-) with
// row s*n + nu for block s in {0: +, 1: -}; rows carry the conjugated index,
// so entry (r, c) multiplies conj(x_r) x_c. All entries are exact closed
// forms: pairing entry times a phase integral.
//
// Constants are Rayleigh extremes of W^{-1/2} G W^{-1/2} where W is the
// diagonal energy weight: lambda^exponent per block for the wave energy at
// that level, lambda^(2 exponent) for the Schrodinger D(A^p) norm. The
// smallest eigenvalue is the best observability constant c (C_obs = 1/c), the
// largest is the admissibility constant C_S. Restricting the index set gives
// band and low-frequency constants; a restriction can only increase c.

#include "dyadic.hpp"
#include "spectral_model.hpp"
#include "states.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace obslab {

struct Gramian {
    Eigen::MatrixXcd matrix;
    double horizon = 0.0;
    Equation kind = Equation::wave;
};

// int_0^T e^{i omega t} dt. Series branch keeps full accuracy through the
// cancellation at omega T -> 0.
inline std::complex<double> time_phase_integral(double omega, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("time_phase_integral: T must be positive");
    const double x = omega * T;
    if (std::abs(x) <= 1e-8) {
        const double re = T * (1.0 - x * x / 6.0);
        const double im = T * (x / 2.0) * (1.0 - x * x / 12.0);
        return {re, im};
    }
    const std::complex<double> num = std::polar(1.0, x) - 1.0;
    return num / std::complex<double>(0.0, omega);
}

inline Gramian wave_gramian(const SpectralModel& m, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("wave_gramian: T must be positive");
    const int n = m.n_modes;
    Gramian g;
    g.horizon = T;
    g.kind = Equation::wave;
    g.matrix.resize(2 * n, 2 * n);
    for (int br = 0; br < 2; ++br) {
        const double sr = br == 0 ? 1.0 : -1.0;
        for (int nr = 0; nr < n; ++nr) {
            for (int bc = 0; bc < 2; ++bc) {
                const double sc = bc == 0 ? 1.0 : -1.0;
                for (int nc = 0; nc < n; ++nc) {
                    const double omega = sc * m.sqrt_lambda[nc] - sr * m.sqrt_lambda[nr];
                    g.matrix(br * n + nr, bc * n + nc) =
                        m.pairing(nr, nc) * time_phase_integral(omega, T);
                }
            }
        }
    }
    return g;
}

inline Gramian schrodinger_gramian(const SpectralModel& m, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("schrodinger_gramian: T must be positive");
    const int n = m.n_modes;
    Gramian g;
    g.horizon = T;
    g.kind = Equation::schrodinger;
    g.matrix.resize(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            g.matrix(r, c) = m.pairing(r, c) * time_phase_integral(m.lambda[c] - m.lambda[r], T);
    return g;
}

// Diagonal energy weight matching the Gramian layout.
inline Eigen::VectorXd energy_weight(const SpectralModel& m, double exponent, Equation kind) {
    const int n = m.n_modes;
    if (kind == Equation::wave) {
        Eigen::VectorXd w(2 * n);
        for (int i = 0; i < n; ++i) {
            const double v = std::pow(m.lambda[i], exponent);
            w[i] = v;
            w[n + i] = v;
        }
        return w;
    }
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) w[i] = std::pow(m.lambda[i], 2.0 * exponent);
    return w;
}

struct ConstantReport {
    double c = 0.0;
    double C_obs = std::numeric_limits<double>::infinity();
    double C_S = 0.0;
    double T = 0.0;
    double exponent = 0.0;
    int dim = 0;
    int band = 0;        // 0 means not a band restriction
    bool empty = false;  // empty restriction sentinel
    Eigen::VectorXcd minimizer; // full-length coefficient vector, zero off the restriction
};

inline ConstantReport obs_constant(const Gramian& g, const SpectralModel& m, double exponent,
                                   const std::vector<int>& rows) {
    ConstantReport rep;
    rep.T = g.horizon;
    rep.exponent = exponent;
    rep.dim = static_cast<int>(rows.size());
    const auto full = static_cast<int>(g.matrix.rows());
    if (rows.empty()) {
        rep.empty = true;
        rep.minimizer = Eigen::VectorXcd::Zero(full);
        return rep;
    }
    const Eigen::VectorXd w = energy_weight(m, exponent, g.kind);
    if (w.size() != full) throw std::invalid_argument("obs_constant: model/gramian size mismatch");
    const int d = rep.dim;
    Eigen::MatrixXcd normalized(d, d);
    for (int i = 0; i < d; ++i) {
        if (rows[i] < 0 || rows[i] >= full) throw std::out_of_range("obs_constant: row index");
        for (int j = 0; j < d; ++j)
            normalized(i, j) = g.matrix(rows[i], rows[j]) / std::sqrt(w[rows[i]] * w[rows[j]]);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(normalized);
    if (es.info() != Eigen::Success) throw std::runtime_error("obs_constant: eigensolver failed");
    rep.c = std::max(es.eigenvalues()[0], 0.0);
    rep.C_S = es.eigenvalues()[d - 1];
    rep.C_obs = rep.c > 0.0 ? 1.0 / rep.c : std::numeric_limits<double>::infinity();
    rep.minimizer = Eigen::VectorXcd::Zero(full);
    for (int i = 0; i < d; ++i)
        rep.minimizer[rows[i]] = es.eigenvectors()(i, 0) / std::sqrt(w[rows[i]]);
    return rep;
}

inline std::vector<int> all_rows(const Gramian& g) {
    std::vector<int> rows(g.matrix.rows());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<int>(i);
    return rows;
}

inline ConstantReport obs_constant(const Gramian& g, const SpectralModel& m, double exponent) {
    return obs_constant(g, m, exponent, all_rows(g));
}

inline double admissibility_constant(const Gramian& g, const SpectralModel& m, double exponent) {
    return obs_constant(g, m, exponent).C_S;
}

// Gramian row indices of band k: + block on J_k for k > 0, - block for k < 0
// (wave), J_k on the lambda scale for Schrodinger.
inline std::vector<int> band_rows(const SpectralModel& m, const DyadicScheme& s, int k,
                                  Equation kind) {
    const std::vector<int> modes = band_indices(s, m, k, kind);
    if (kind == Equation::schrodinger) return modes;
    std::vector<int> rows;
    rows.reserve(modes.size());
    const int off = k > 0 ? 0 : m.n_modes;
    for (int nu : modes) rows.push_back(off + nu);
    return rows;
}

// Rows of the low space {lambda <= 1} union bands |k| < k_lo, both blocks for
// the wave layout.
inline std::vector<int> low_rows(const SpectralModel& m, const DyadicScheme& s, int k_lo,
                                 Equation kind) {
    const int n = m.n_modes;
    std::vector<char> in_low(n, 0);
    for (int nu = 0; nu < n; ++nu)
        if (m.lambda[nu] <= 1.0) in_low[nu] = 1;
    for (int k = 1; k < k_lo; ++k)
        for (int nu : band_indices(s, m, k, kind)) in_low[nu] = 1;
    std::vector<int> rows;
    for (int nu = 0; nu < n; ++nu)
        if (in_low[nu]) rows.push_back(nu);
    if (kind == Equation::wave) {
        const auto sz = rows.size();
        for (std::size_t i = 0; i < sz; ++i) rows.push_back(n + rows[i]);
    }
    return rows;
}

inline ConstantReport band_constant(const SpectralModel& m, const DyadicScheme& s, int k, double T,
                                    double exponent, Equation kind) {
    const Gramian g = kind == Equation::wave ? wave_gramian(m, T) : schrodinger_gramian(m, T);
    ConstantReport rep = obs_constant(g, m, exponent, band_rows(m, s, k, kind));
    rep.band = k;
    return rep;
}

inline ConstantReport band_constant(const Gramian& g, const SpectralModel& m,
                                    const DyadicScheme& s, int k, double exponent) {
    ConstantReport rep = obs_constant(g, m, exponent, band_rows(m, s, k, g.kind));
    rep.band = k;
    return rep;
}

// Minimum eigenvalue of the exponent-0 normalized Gramian; zero exactly when
// a nonzero solution is invisible on [0, T] at this truncation. The full
// report carries the minimizing coefficient vector.
inline ConstantReport invisible_defect(const SpectralModel& m, double T, Equation kind) {
    const Gramian g = kind == Equation::wave ? wave_gramian(m, T) : schrodinger_gramian(m, T);
    return obs_constant(g, m, 0.0);
}

// Quadratic form x* G x for a stacked coefficient vector.
inline double gramian_form(const Gramian& g, const Eigen::VectorXcd& x) {
    if (x.size() != g.matrix.rows()) throw std::invalid_argument("gramian_form: size mismatch");
    return std::real(x.dot(g.matrix * x)); // Eigen's dot conjugates the left argument
}

inline Eigen::VectorXcd stacked(const WaveState& s) {
    const auto n = s.uplus.size();
    Eigen::VectorXcd x(2 * n);
    x.head(n) = s.uplus;
    x.tail(n) = s.uminus;
    return x;
}

// --- L1-in-time constant estimator (Schrodinger) -------------------------
//
// The canonical constants above are L2-based eigenproblems. The L1 analogue
// min int_0^T |Obs u(t)|_K dt over the unit D(A^p) sphere has no eigenvalue
// form; it is estimated by multi-start projected gradient descent, and the
// Cauchy-Schwarz envelope sqrt(T c_L2) is reported alongside. The L2
// minimizer is always included as a start, so estimate <= envelope up to
// quadrature error.

struct L1Report {
    double estimate = 0.0;
    double envelope = 0.0; // sqrt(T * c_L2)
    double c_l2 = 0.0;
    std::vector<double> per_start;
};

namespace detail {

inline double l1_objective(const SpectralModel& m, double T, const Eigen::VectorXcd& x,
                           int quad_points, Eigen::VectorXcd* grad = nullptr) {
    // composite Simpson on f(t) = |R diag(e^{i t lambda}) x|; grad is the
    // Wirtinger derivative d/d conj(x) = int M(t} x / (2 f) dt with
    // M(t) = D(t)* M D(t).
    const int n = m.n_modes;
    const int segs = quad_points % 2 == 0 ? quad_points : quad_points + 1;
    const double h = T / segs;
    double acc = 0.0;
    if (grad) *grad = Eigen::VectorXcd::Zero(n);
    for (int j = 0; j <= segs; ++j) {
        const double t = j * h;
        const double wq = (j == 0 || j == segs) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
        Eigen::VectorXcd c(n);
        for (int i = 0; i < n; ++i) c[i] = std::polar(1.0, t * m.lambda[i]) * x[i];
        const Eigen::VectorXcd mc = m.pairing * c;
        const double f = std::sqrt(std::max(std::real(c.dot(mc)), 0.0));
        acc += wq * f;
        if (grad && f > 1e-14) {
            Eigen::VectorXcd back(n);
            for (int i = 0; i < n; ++i) back[i] = std::polar(1.0, -t * m.lambda[i]) * mc[i];
            *grad += (wq / (2.0 * f)) * back;
        }
    }
    acc *= h / 3.0;
    if (grad) *grad *= h / 3.0;
    return acc;
}

} // namespace detail

inline L1Report l1_constant_schrodinger(const SpectralModel& m, double T, double p,
                                        int n_starts = 6, std::uint64_t seed = 2026,
                                        int iterations = 160, int quad_points = 512) {
    if (n_starts < 1) throw std::invalid_argument("l1_constant_schrodinger: need a start");
    const int n = m.n_modes;
    const Eigen::VectorXd w = energy_weight(m, p, Equation::schrodinger);
    const Gramian g = schrodinger_gramian(m, T);
    const ConstantReport l2 = obs_constant(g, m, p);
    L1Report rep;
    rep.c_l2 = l2.c;
    rep.envelope = std::sqrt(T * l2.c);
    const auto normalize = [&](Eigen::VectorXcd& x) {
        double nn = 0.0;
        for (int i = 0; i < n; ++i) nn += w[i] * std::norm(x[i]);
        x /= std::sqrt(nn);
    };
    double best = std::numeric_limits<double>::infinity();
    Prng rng(seed);
    for (int s = 0; s < n_starts; ++s) {
        Eigen::VectorXcd x(n);
        if (s == 0) {
            x = l2.minimizer;
        } else {
            for (int i = 0; i < n; ++i) x[i] = rng.next_complex();
        }
        normalize(x);
        double step = 0.5;
        Eigen::VectorXcd grad(n);
        double val = detail::l1_objective(m, T, x, quad_points, &grad);
        for (int it = 0; it < iterations; ++it) {
            // project the gradient on the tangent space of the weighted sphere
            std::complex<double> inner = 0.0;
            for (int i = 0; i < n; ++i) inner += w[i] * std::conj(x[i]) * (grad[i] / w[i]);
            Eigen::VectorXcd dir(n);
            for (int i = 0; i < n; ++i) dir[i] = grad[i] / w[i] - inner * x[i];
            const double dn = dir.norm();
            if (dn < 1e-14) break;
            Eigen::VectorXcd trial = x - (step / dn) * dir;
            normalize(trial);
            Eigen::VectorXcd tgrad(n);
            const double tval = detail::l1_objective(m, T, trial, quad_points, &tgrad);
            if (tval < val) {
                x = trial;
                val = tval;
                grad = tgrad;
                step *= 1.1;
            } else {
                step *= 0.5;
                if (step < 1e-10) break;
            }
        }
        rep.per_start.push_back(val);
        best = std::min(best, val);
    }
    rep.estimate = best;
    return rep;
}

// --- Theorem-level experiment ---------------------------------------------
//
// Assembles, at finite truncation, the passage from per-band observability at
// horizon T to global observability at T' > T:
//   (i)  band constants c_k, k_lo <= |k| <= scheme.k_max, at horizon T;
//   (ii) the low-space constant ({lambda <= 1} union bands |k| < k_lo) at T';
//   (iii) the global constant at T';
// plus the unique-continuation surrogate (min diagonal pairing entry) and a
// per-seed check that the energy-separation chain closes:
//   E(u) <= E(u0) + sum_{|k|<k_lo} E(u^k) + m * max_k C_obs,k * x* G_T' x.

struct TheoremBandRow {
    int k = 0;
    ConstantReport rep;
};

struct TheoremChainRow {
    std::uint64_t seed = 0;
    double energy = 0.0;
    double low_term = 0.0;
    double gramian_term = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

struct TheoremReport {
    Equation kind = Equation::wave;
    double T = 0.0;
    double T_prime = 0.0;
    double exponent = 0.0;
    int k_lo = 1;
    int k_hi = 1;
    double overlap_m = 0.0;
    bool uc_ok = false;
    double min_diag_pairing = 0.0;
    bool spectrum_covered = false;
    std::vector<TheoremBandRow> bands;
    ConstantReport low;
    ConstantReport global;
    double max_band_C_obs = 0.0;
    std::vector<TheoremChainRow> chain;
    double slack = 0.0; // max over seeds of energy / rhs; chain closes iff <= 1 + tol
    bool closes = false;

    bool all_bands_positive() const {
        for (const auto& b : bands)
            if (!b.rep.empty && !(b.rep.c > 0.0)) return false;
        return true;
    }
    bool ok() const {
        return uc_ok && spectrum_covered && all_bands_positive() && global.c > 0.0 && closes;
    }
};

inline TheoremReport theorem_experiment(const SpectralModel& m, const DyadicScheme& s, double T,
                                        double T_prime, double exponent, Equation kind,
                                        int k_lo = 1, int n_seeds = 20,
                                        std::uint64_t seed_base = 515) {
    if (!(T_prime > T)) throw std::invalid_argument("theorem_experiment: need T' > T");
    if (k_lo < 1 || k_lo > s.k_max) throw std::invalid_argument("theorem_experiment: bad k_lo");
    validate(s);
    TheoremReport rep;
    rep.kind = kind;
    rep.T = T;
    rep.T_prime = T_prime;
    rep.exponent = exponent;
    rep.k_lo = k_lo;
    rep.k_hi = s.k_max;
    rep.overlap_m = static_cast<double>(overlap_bound(s));

    rep.min_diag_pairing = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m.n_modes; ++i)
        rep.min_diag_pairing = std::min(rep.min_diag_pairing, std::real(m.pairing(i, i)));
    rep.uc_ok = rep.min_diag_pairing > 0.0;

    // scheme must cover the spectrum above the low block
    rep.spectrum_covered = true;
    for (int i = 0; i < m.n_modes; ++i) {
        if (m.lambda[i] <= 1.0) continue;
        const double tau = kind == Equation::wave ? m.sqrt_lambda[i] : m.lambda[i];
        if (covering_sum(s, tau) < 1.0 - 1e-12) rep.spectrum_covered = false;
    }
    if (!rep.spectrum_covered)
        throw std::invalid_argument("theorem_experiment: scheme does not cover the spectrum");

    const Gramian g_T = kind == Equation::wave ? wave_gramian(m, T) : schrodinger_gramian(m, T);
    const Gramian g_Tp =
        kind == Equation::wave ? wave_gramian(m, T_prime) : schrodinger_gramian(m, T_prime);

    for (int k = k_lo; k <= s.k_max; ++k) {
        rep.bands.push_back({k, band_constant(g_T, m, s, k, exponent)});
        if (kind == Equation::wave) rep.bands.push_back({-k, band_constant(g_T, m, s, -k, exponent)});
    }
    for (const auto& b : rep.bands)
        if (!b.rep.empty) rep.max_band_C_obs = std::max(rep.max_band_C_obs, b.rep.C_obs);

    rep.low = obs_constant(g_Tp, m, exponent, low_rows(m, s, k_lo, kind));
    rep.global = obs_constant(g_Tp, m, exponent);

    for (int sd = 0; sd < n_seeds; ++sd) {
        const std::uint64_t seed = seed_base + static_cast<std::uint64_t>(sd);
        TheoremChainRow row;
        row.seed = seed;
        if (kind == Equation::wave) {
            const WaveState u = random_wave_state(m.n_modes, seed);
            row.energy = energy(m, u, exponent);
            row.low_term = energy(m, low_block(m, u), exponent);
            for (int k = 1; k < k_lo; ++k) {
                row.low_term += energy(m, project_band(s, m, u, k), exponent);
                row.low_term += energy(m, project_band(s, m, u, -k), exponent);
            }
            row.gramian_term = gramian_form(g_Tp, stacked(u));
        } else {
            const SchrodingerState u = random_schrodinger_state(m.n_modes, seed);
            const double nrm = schrodinger_norm(m, u, exponent);
            row.energy = nrm * nrm;
            const double lnrm = schrodinger_norm(m, low_block(m, u), exponent);
            row.low_term = lnrm * lnrm;
            for (int k = 1; k < k_lo; ++k) {
                const double bn = schrodinger_norm(m, project_band(s, m, u, k), exponent);
                row.low_term += bn * bn;
            }
            row.gramian_term = gramian_form(g_Tp, u.u0);
        }
        row.rhs = row.low_term + rep.overlap_m * rep.max_band_C_obs * row.gramian_term;
        row.ratio = row.rhs > 0.0 ? row.energy / row.rhs : std::numeric_limits<double>::infinity();
        rep.slack = std::max(rep.slack, row.ratio);
        rep.chain.push_back(row);
    }
    rep.closes = rep.slack <= 1.0 + 1e-9;
    return rep;
}

} // namespace obslab
