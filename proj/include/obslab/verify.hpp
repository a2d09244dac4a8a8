#pragma once

// The verification suite: every check the library promises, with pinned
// tolerances, runnable as one registry. The acceptance binary and the CLI
// `verify` subcommand both execute run_all_checks and differ only in how they
// present the results. Checks never throw: an exception is a failed check
// with the message as detail.
//
// Tolerances are part of the contract and are not to be loosened: exact
// algebraic identities get 1e-10..1e-12 relative, FFT-vs-projection routes
// get 1e-8, and analytic inequalities are asserted with bare 1e-12-level
// roundoff slack.

#include "config.hpp"
#include "dyadic.hpp"
#include "gramian.hpp"
#include "report.hpp"
#include "spectral_model.hpp"
#include "states.hpp"
#include "time_signal.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

namespace obslab {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

namespace detail {

inline std::string fmt6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

template <typename Fn>
CheckResult timed_check(const std::string& name, Fn&& fn) {
    CheckResult r;
    r.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        fn(r);
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

} // namespace detail

// Band filters cover every frequency magnitude in [1, 1e4], both signs:
// min of the squared covering sum >= 1 - 1e-12 over 1e5 log-spaced samples,
// in under 5 seconds.
inline CheckResult check_filter_covering(const ExperimentConfig& cfg) {
    return detail::timed_check("filter_covering", [&](CheckResult& r) {
        const double mn = covering_defect(cfg.scheme, 1.0, 1e4, 100000);
        r.pass = mn >= 1.0 - 1e-12;
        r.detail = "min covering sum " + detail::fmt6(mn);
    });
}

// At most floor(2 ln(1/alpha)/ln rho) + 1 filters are active at any frequency.
inline CheckResult check_filter_overlap(const ExperimentConfig& cfg) {
    return detail::timed_check("filter_overlap", [&](CheckResult& r) {
        const int bound = overlap_bound(cfg.scheme);
        int worst = 0;
        const int n_samples = 100000;
        const double lr = std::log(1e4);
        for (int i = 0; i < n_samples; ++i) {
            const double tau = std::exp(lr * i / (n_samples - 1));
            worst = std::max(worst, overlap_count(cfg.scheme, tau));
            worst = std::max(worst, overlap_count(cfg.scheme, -tau));
        }
        r.pass = worst <= bound;
        r.detail = "max overlap " + std::to_string(worst) + ", bound " + std::to_string(bound);
    });
}

// E_l(u - u0) <= sum_k E_l(u^k) <= m E_l(u), l in {0,1,2}, 100 seeded
// 256-mode states, 1e-10 relative slack.
inline CheckResult check_energy_sandwich(const ExperimentConfig& cfg) {
    return detail::timed_check("energy_sandwich", [&](CheckResult& r) {
        ObservationSpec obs; // identity; the observation plays no role here
        const SpectralModel m = build_dirichlet_interval(detail::kPi, 256, obs);
        const DyadicScheme& s = cfg.scheme;
        const double mcount = overlap_bound(s);
        double worst_lo = 0.0, worst_hi = 0.0;
        r.pass = true;
        for (int seed = 0; seed < 100; ++seed) {
            const WaveState u = random_wave_state(256, 3000 + seed);
            const WaveState u0 = low_block(m, u);
            const WaveState hi{u.uplus - u0.uplus, u.uminus - u0.uminus};
            for (double level : {0.0, 1.0, 2.0}) {
                const double e = energy(m, u, level);
                const double e_hi = energy(m, hi, level);
                double mid = 0.0;
                for (int k = 1; k <= s.k_max; ++k) {
                    mid += energy(m, project_band(s, m, u, k), level);
                    mid += energy(m, project_band(s, m, u, -k), level);
                }
                if (!(e_hi <= mid * (1.0 + 1e-10))) r.pass = false;
                if (!(mid <= mcount * e * (1.0 + 1e-10))) r.pass = false;
                worst_lo = std::max(worst_lo, e_hi / mid);
                worst_hi = std::max(worst_hi, mid / (mcount * e));
            }
        }
        r.detail = "max E(u-u0)/sum " + detail::fmt6(worst_lo) + ", max sum/(m E) " +
                   detail::fmt6(worst_hi);
    });
}

// On every nonempty band k <= 12, h^(2q) lambda^q stays in [alpha^(2q),
// alpha^(-2q)] with q = 2s + r (wave) or q = s + r (Schrodinger, lambda
// scale), interval reversed for negative q. Closed-form, per mode.
inline CheckResult check_band_norm_equivalence(const ExperimentConfig& cfg) {
    return detail::timed_check("band_norm_equivalence", [&](CheckResult& r) {
        ObservationSpec obs;
        const SpectralModel m = build_dirichlet_interval(detail::kPi, 256, obs);
        const DyadicScheme& s = cfg.scheme;
        const double pairs[4][2] = {{0.0, 1.0}, {0.5, 0.0}, {1.0, 2.0}, {-0.5, 0.0}};
        const double slack = 1e-12;
        r.pass = true;
        int n_checked = 0;
        for (int k = 1; k <= 12; ++k) {
            const double h = h_scale(s, k);
            for (int eqi = 0; eqi < 2; ++eqi) {
                const Equation eq = eqi == 0 ? Equation::wave : Equation::schrodinger;
                for (int nu : band_indices(s, m, k, eq)) {
                    for (const auto& sr : pairs) {
                        const double q = eq == Equation::wave ? 2.0 * sr[0] + sr[1] : sr[0] + sr[1];
                        const double base = eq == Equation::wave ? m.sqrt_lambda(nu) : m.lambda(nu);
                        const double v = std::pow(h * base, 2.0 * q);
                        const double b1 = std::pow(s.alpha, 2.0 * q);
                        const double b2 = std::pow(s.alpha, -2.0 * q);
                        const double lo = std::min(b1, b2), hi = std::max(b1, b2);
                        if (!(v >= lo * (1.0 - slack) && v <= hi * (1.0 + slack))) r.pass = false;
                        ++n_checked;
                    }
                }
            }
        }
        r.detail = std::to_string(n_checked) + " mode/(s,r) combinations";
    });
}

// FFT multiplier after observation equals observation after spectral band
// projection, max K-norm discrepancy <= 1e-8 over the grid; 20 seeded states,
// bands [commutation_k_lo, commutation_k_hi].
inline CheckResult check_multiplier_commutation(const ExperimentConfig& cfg) {
    return detail::timed_check("multiplier_commutation", [&](CheckResult& r) {
        const SpectralModel m = build_model(cfg);
        const TimeGrid g{cfg.commutation_grid.t0(), cfg.commutation_grid.dt(),
                         cfg.commutation_grid.samples()};
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const WaveState u = random_wave_state(m.n_modes, 4200 + i);
            const TimeSignal full = observation_trace(m, u, g);
            for (int k = cfg.commutation_k_lo; k <= cfg.commutation_k_hi; ++k) {
                const TimeSignal filtered = apply_multiplier(full, cfg.scheme, k);
                const TimeSignal exact =
                    observation_trace(m, project_band(cfg.scheme, m, u, k), g);
                for (int l = 0; l < g.n; ++l)
                    worst = std::max(
                        worst, (filtered.samples.row(l) - exact.samples.row(l)).norm());
            }
        }
        r.pass = worst <= 1e-8;
        r.detail = "max discrepancy " + detail::fmt6(worst);
    });
}

// Far-from-window band content of a windowed trace decays superpolynomially:
// fitted log-log slope of r_k vs h_k >= 4 on k in [decay_k_lo, decay_k_hi],
// and doubling delta does not decrease the slope.
inline CheckResult check_kernel_decay(const ExperimentConfig& cfg) {
    return detail::timed_check("kernel_decay", [&](CheckResult& r) {
        ObservationSpec obs;
        obs.kind = ObsKind::interior_indicator;
        obs.x_lo = cfg.x_lo;
        obs.x_hi = cfg.x_hi;
        const SpectralModel m = build_dirichlet_interval(cfg.length(), 128, obs);
        const WaveState u = random_wave_state(128, 7);
        const TimeGrid g{cfg.decay_grid.t0(), cfg.decay_grid.dt(), cfg.decay_grid.samples()};
        const TimeWindowing w1 = TimeWindowing::defaults(cfg.T_window(), cfg.delta());
        const TimeWindowing w2 = TimeWindowing::defaults(cfg.T_window(), 2.0 * cfg.delta());
        const DecayTable t1 =
            decay_experiment(m, u, cfg.scheme, w1, cfg.decay_k_lo, cfg.decay_k_hi, g);
        const DecayTable t2 =
            decay_experiment(m, u, cfg.scheme, w2, cfg.decay_k_lo, cfg.decay_k_hi, g);
        r.pass = t1.slope >= 4.0 && t2.slope >= t1.slope - 1e-9;
        r.detail = "slope " + detail::fmt6(t1.slope) + ", doubled-delta slope " +
                   detail::fmt6(t2.slope);
    });
}

// Identity observation makes every constant exact: Schrodinger global c = T'
// and band c_k = T (1e-10 relative); the wave Gramian at T = 2 pi is
// 2 pi I entrywise within 1e-10.
inline CheckResult check_exact_constants(const ExperimentConfig& cfg) {
    return detail::timed_check("exact_constants", [&](CheckResult& r) {
        ObservationSpec obs;
        obs.m0 = cfg.m0;
        const SpectralModel m = build_dirichlet_interval(detail::kPi, 64, obs);
        const double T = cfg.T(), Tp = cfg.T_prime();
        r.pass = true;

        const Gramian gs_p = schrodinger_gramian(m, Tp);
        const ConstantReport global = obs_constant(gs_p, m, cfg.p1);
        if (!(std::abs(global.c - Tp) <= 1e-10 * Tp)) r.pass = false;

        const Gramian gs = schrodinger_gramian(m, T);
        double band_dev = 0.0;
        for (int k = 1; k <= cfg.scheme.k_max; ++k) {
            const ConstantReport bc = band_constant(gs, m, cfg.scheme, k, cfg.p1);
            if (bc.empty) continue;
            band_dev = std::max(band_dev, std::abs(bc.c - T) / T);
        }
        if (!(band_dev <= 1e-10)) r.pass = false;

        const Gramian gw = wave_gramian(m, 2.0 * detail::kPi);
        double entry_dev = 0.0;
        for (int i = 0; i < gw.matrix.rows(); ++i)
            for (int j = 0; j < gw.matrix.cols(); ++j) {
                const std::complex<double> want =
                    i == j ? std::complex<double>(2.0 * detail::kPi, 0.0)
                           : std::complex<double>(0.0, 0.0);
                entry_dev = std::max(entry_dev, std::abs(gw.matrix(i, j) - want));
            }
        if (!(entry_dev <= 1e-10)) r.pass = false;

        r.detail = "global c dev " + detail::fmt6(std::abs(global.c - Tp) / Tp) +
                   ", band c dev " + detail::fmt6(band_dev) + ", wave 2piI dev " +
                   detail::fmt6(entry_dev);
    });
}

// x* G x agrees with composite-Simpson time quadrature of |Obs u(t)|_K^2
// (2^14 subintervals) within 1e-8 relative, 50 seeded states, both equations,
// in under 30 seconds.
inline CheckResult check_gramian_quadrature(const ExperimentConfig& cfg) {
    return detail::timed_check("gramian_quadrature", [&](CheckResult& r) {
        const SpectralModel m = build_model(cfg);
        const double T = cfg.T();
        const int segs = 1 << 14;
        const TimeGrid g{0.0, T / segs, segs + 1};
        const Gramian gw = wave_gramian(m, T);
        const Gramian gs = schrodinger_gramian(m, T);
        const auto simpson = [&](const TimeSignal& tr) {
            double acc = 0.0;
            for (int j = 0; j <= segs; ++j) {
                const double wq = (j == 0 || j == segs) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
                acc += wq * tr.samples.row(j).squaredNorm();
            }
            return acc * g.dt / 3.0;
        };
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            const WaveState uw = random_wave_state(m.n_modes, 5000 + i);
            const double qw = simpson(observation_trace(m, uw, g));
            const double fw = gramian_form(gw, stacked(uw));
            worst = std::max(worst, std::abs(fw - qw) / std::abs(qw));
            const SchrodingerState us = random_schrodinger_state(m.n_modes, 5500 + i);
            const double qs = simpson(observation_trace(m, us, g));
            const double fs = gramian_form(gs, us.u0);
            worst = std::max(worst, std::abs(fs - qs) / std::abs(qs));
        }
        r.pass = worst <= 1e-8;
        r.detail = "max relative deviation " + detail::fmt6(worst);
    });
}

// A mode removed from the observation is reproduced as an invisible solution:
// defect 0 with the minimizer concentrated on that mode; the unmodified
// interior model on (0.2, 0.5) at n=32 has strictly positive defect.
inline CheckResult check_invisible_modes(const ExperimentConfig& cfg) {
    return detail::timed_check("invisible_modes", [&](CheckResult& r) {
        ObservationSpec obs;
        obs.kind = ObsKind::interior_indicator;
        obs.x_lo = cfg.x_lo;
        obs.x_hi = cfg.x_hi;
        const SpectralModel base = build_dirichlet_interval(cfg.length(), 32, obs);
        const int blinded = 4; // mode nu = 5
        const SpectralModel blind = blind_mode(base, blinded);
        const ConstantReport db = invisible_defect(blind, cfg.T(), Equation::wave);
        const double mass = std::norm(db.minimizer[blinded]) +
                            std::norm(db.minimizer[32 + blinded]);
        const double total = db.minimizer.squaredNorm();
        const bool blind_ok = db.c <= 1e-12 && mass / total >= 1.0 - 1e-8;

        ObservationSpec obs2;
        obs2.kind = ObsKind::interior_indicator;
        obs2.x_lo = 0.2;
        obs2.x_hi = 0.5;
        const SpectralModel clean = build_dirichlet_interval(cfg.length(), 32, obs2);
        const ConstantReport dc = invisible_defect(clean, cfg.T(), Equation::wave);
        const bool clean_ok = dc.c > 1e-10;

        r.pass = blind_ok && clean_ok;
        r.detail = "blinded defect " + detail::fmt6(db.c) + ", minimizer mass " +
                   detail::fmt6(mass / total) + ", clean defect " + detail::fmt6(dc.c);
    });
}

// Full theorem-level pipeline on the interior-observation model: all band
// constants positive, global constant positive, and the assembled
// energy-separation chain closes, for both tested energy levels.
inline CheckResult check_theorem_chain(const ExperimentConfig& cfg) {
    return detail::timed_check("theorem_chain", [&](CheckResult& r) {
        const SpectralModel m = build_model(cfg);
        DyadicScheme s = cfg.scheme;
        s.k_max = 9; // plateau reach rho^9 / a just covers sqrt(lambda) <= 64
        r.pass = true;
        std::string det;
        for (double ell1 : {0.0, 1.0}) {
            const TheoremReport rep = theorem_experiment(m, s, cfg.T(), cfg.T_prime(), ell1,
                                                         Equation::wave, cfg.k_lo,
                                                         static_cast<int>(cfg.seeds.size()),
                                                         cfg.seeds.empty() ? 515 : cfg.seeds[0]);
            if (!rep.ok()) r.pass = false;
            double min_band = std::numeric_limits<double>::infinity();
            for (const auto& b : rep.bands)
                if (!b.rep.empty) min_band = std::min(min_band, b.rep.c);
            if (!det.empty()) det += "; ";
            det += "level " + detail::fmt6(ell1) + ": min band c " + detail::fmt6(min_band) +
                   ", global c " + detail::fmt6(rep.global.c) + ", chain slack " +
                   detail::fmt6(rep.slack);
        }
        r.detail = det;
    });
}

// The normalized two-point separation ratio is k-uniform: its per-band max
// varies by less than 5% over k in [1, 20], 1e4 deterministic samples per k.
inline CheckResult check_tau_separation(const ExperimentConfig& cfg) {
    return detail::timed_check("tau_separation", [&](CheckResult& r) {
        const TauSeparation ts = tau_separation_check(cfg.scheme, 1, 20, 10000);
        double mn = std::numeric_limits<double>::infinity(), mx = 0.0;
        for (const auto& [k, v] : ts.per_k) {
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
        r.pass = mx > 0.0 && (mx - mn) / mx < 0.05;
        r.detail = "ratio max " + detail::fmt6(mx) + ", spread " +
                   detail::fmt6((mx - mn) / mx);
    });
}

inline std::vector<CheckResult> run_all_checks(const ExperimentConfig& cfg) {
    std::vector<CheckResult> out;
    out.push_back(check_filter_covering(cfg));
    out.push_back(check_filter_overlap(cfg));
    out.push_back(check_energy_sandwich(cfg));
    out.push_back(check_band_norm_equivalence(cfg));
    out.push_back(check_multiplier_commutation(cfg));
    out.push_back(check_kernel_decay(cfg));
    out.push_back(check_exact_constants(cfg));
    out.push_back(check_gramian_quadrature(cfg));
    out.push_back(check_invisible_modes(cfg));
    out.push_back(check_theorem_chain(cfg));
    out.push_back(check_tau_separation(cfg));
    // runtime budgets are part of the contract for the timed checks
    for (auto& c : out) {
        if (c.name == "filter_covering" && c.seconds >= 5.0) {
            c.pass = false;
            c.detail += "; over 5 s budget";
        }
        if (c.name == "gramian_quadrature" && c.seconds >= 30.0) {
            c.pass = false;
            c.detail += "; over 30 s budget";
        }
        if (c.name == "theorem_chain" && c.seconds >= 120.0) {
            c.pass = false;
            c.detail += "; over 120 s budget";
        }
    }
    return out;
}

inline std::string checks_csv(const std::vector<CheckResult>& checks, const std::string& hash) {
    // timings are excluded: identical config bytes must give identical CSV bytes
    std::string out = "check,pass,detail,config\n";
    for (const auto& c : checks) {
        std::string detail = c.detail;
        for (auto& ch : detail)
            if (ch == ',') ch = ';';
        out += c.name + "," + (c.pass ? "1" : "0") + "," + detail + "," + hash + "\n";
    }
    return out;
}

} // namespace obslab
