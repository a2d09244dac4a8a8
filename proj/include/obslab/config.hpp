#pragma once

// JSON experiment configuration. Every field has a default making the empty
// object {} a valid config; validation collects every violated constraint
// instead of stopping at the first. Times and grid steps are stored in units
// of pi so resonant horizons and power-of-two grids stay exact in the file.

#include "dyadic.hpp"
#include "fft.hpp"
#include "spectral_model.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace obslab {

struct GridConfig {
    double t0_over_pi = 0.0;
    double dt_over_pi = 0.0;
    double span_over_pi = 0.0;

    double t0() const { return t0_over_pi * detail::kPi; }
    double dt() const { return dt_over_pi * detail::kPi; }
    int samples() const {
        return dt_over_pi > 0.0 ? static_cast<int>(std::llround(span_over_pi / dt_over_pi)) : 0;
    }
};

struct ExperimentConfig {
    // model
    std::string model_kind = "dirichlet_interval";
    double length_over_pi = 1.0;
    int n_modes = 64;
    std::string observation = "interior"; // identity | interior | neumann_left | neumann_right
    double x_lo = 0.3;
    double x_hi = 0.8;

    DyadicScheme scheme; // defaults in the type

    double T_over_pi = 2.0;
    double T_prime_over_pi = 2.5;

    double ell0 = 0.0;
    double ell1 = 0.0;
    double p0 = 0.0;
    double p1 = 0.0;
    double m0 = 1.0;

    GridConfig decay_grid{-6.0, 0.0009765625, 16.0};       // dt = 2 pi / 2048
    GridConfig commutation_grid{-8.0, 0.00048828125, 16.0}; // dt = 2 pi / 4096

    double T_window_over_pi = 2.0;
    double delta_over_pi = 0.25;

    int k_lo = 3;
    int decay_k_lo = 5;
    int decay_k_hi = 12;
    int commutation_k_lo = 3;
    int commutation_k_hi = 8;

    std::vector<std::uint64_t> seeds = {515, 516, 517, 518, 519, 520, 521, 522, 523, 524,
                                        525, 526, 527, 528, 529, 530, 531, 532, 533, 534};

    double T() const { return T_over_pi * detail::kPi; }
    double T_prime() const { return T_prime_over_pi * detail::kPi; }
    double length() const { return length_over_pi * detail::kPi; }
    double T_window() const { return T_window_over_pi * detail::kPi; }
    double delta() const { return delta_over_pi * detail::kPi; }
};

namespace detail {

inline void expect_keys(const nlohmann::json& j, const char* where,
                        std::initializer_list<const char*> allowed) {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (item.key() == k) known = true;
        if (!known)
            throw std::invalid_argument(std::string("config: unknown key '") + item.key() +
                                        "' in " + where);
    }
}

} // namespace detail

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    detail::expect_keys(j, "top level",
                        {"model", "scheme", "horizons", "exponents", "grids", "windowing",
                         "bands", "seeds"});
    if (j.contains("model")) {
        const auto& m = j.at("model");
        detail::expect_keys(m, "model",
                            {"kind", "length_over_pi", "n_modes", "observation"});
        c.model_kind = m.value("kind", c.model_kind);
        c.length_over_pi = m.value("length_over_pi", c.length_over_pi);
        c.n_modes = m.value("n_modes", c.n_modes);
        if (m.contains("observation")) {
            const auto& o = m.at("observation");
            detail::expect_keys(o, "model.observation", {"kind", "x_lo", "x_hi"});
            c.observation = o.value("kind", c.observation);
            c.x_lo = o.value("x_lo", c.x_lo);
            c.x_hi = o.value("x_hi", c.x_hi);
        }
    }
    if (j.contains("scheme")) {
        const auto& s = j.at("scheme");
        detail::expect_keys(s, "scheme", {"alpha", "a_tilde", "a", "rho", "k_max"});
        c.scheme.alpha = s.value("alpha", c.scheme.alpha);
        c.scheme.a_tilde = s.value("a_tilde", c.scheme.a_tilde);
        c.scheme.a = s.value("a", c.scheme.a);
        c.scheme.rho = s.value("rho", c.scheme.rho);
        c.scheme.k_max = s.value("k_max", c.scheme.k_max);
    }
    if (j.contains("horizons")) {
        const auto& h = j.at("horizons");
        detail::expect_keys(h, "horizons", {"T_over_pi", "T_prime_over_pi"});
        c.T_over_pi = h.value("T_over_pi", c.T_over_pi);
        c.T_prime_over_pi = h.value("T_prime_over_pi", c.T_prime_over_pi);
    }
    if (j.contains("exponents")) {
        const auto& e = j.at("exponents");
        detail::expect_keys(e, "exponents", {"ell0", "ell1", "p0", "p1", "m0"});
        c.ell0 = e.value("ell0", c.ell0);
        c.ell1 = e.value("ell1", c.ell1);
        c.p0 = e.value("p0", c.p0);
        c.p1 = e.value("p1", c.p1);
        c.m0 = e.value("m0", c.m0);
    }
    if (j.contains("grids")) {
        const auto& g = j.at("grids");
        detail::expect_keys(g, "grids", {"decay", "commutation"});
        for (const char* name : {"decay", "commutation"}) {
            if (!g.contains(name)) continue;
            const auto& gg = g.at(name);
            detail::expect_keys(gg, "grids entry", {"t0_over_pi", "dt_over_pi", "span_over_pi"});
            GridConfig& dst = std::string(name) == "decay" ? c.decay_grid : c.commutation_grid;
            dst.t0_over_pi = gg.value("t0_over_pi", dst.t0_over_pi);
            dst.dt_over_pi = gg.value("dt_over_pi", dst.dt_over_pi);
            dst.span_over_pi = gg.value("span_over_pi", dst.span_over_pi);
        }
    }
    if (j.contains("windowing")) {
        const auto& w = j.at("windowing");
        detail::expect_keys(w, "windowing", {"T_window_over_pi", "delta_over_pi"});
        c.T_window_over_pi = w.value("T_window_over_pi", c.T_window_over_pi);
        c.delta_over_pi = w.value("delta_over_pi", c.delta_over_pi);
    }
    if (j.contains("bands")) {
        const auto& b = j.at("bands");
        detail::expect_keys(b, "bands",
                            {"k_lo", "decay_k_lo", "decay_k_hi", "commutation_k_lo",
                             "commutation_k_hi"});
        c.k_lo = b.value("k_lo", c.k_lo);
        c.decay_k_lo = b.value("decay_k_lo", c.decay_k_lo);
        c.decay_k_hi = b.value("decay_k_hi", c.decay_k_hi);
        c.commutation_k_lo = b.value("commutation_k_lo", c.commutation_k_lo);
        c.commutation_k_hi = b.value("commutation_k_hi", c.commutation_k_hi);
    }
    if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    return c;
}

inline nlohmann::json config_to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["model"] = {{"kind", c.model_kind},
                  {"length_over_pi", c.length_over_pi},
                  {"n_modes", c.n_modes},
                  {"observation", {{"kind", c.observation}, {"x_lo", c.x_lo}, {"x_hi", c.x_hi}}}};
    j["scheme"] = {{"alpha", c.scheme.alpha},
                   {"a_tilde", c.scheme.a_tilde},
                   {"a", c.scheme.a},
                   {"rho", c.scheme.rho},
                   {"k_max", c.scheme.k_max}};
    j["horizons"] = {{"T_over_pi", c.T_over_pi}, {"T_prime_over_pi", c.T_prime_over_pi}};
    j["exponents"] = {{"ell0", c.ell0}, {"ell1", c.ell1}, {"p0", c.p0}, {"p1", c.p1}, {"m0", c.m0}};
    j["grids"] = {{"decay",
                   {{"t0_over_pi", c.decay_grid.t0_over_pi},
                    {"dt_over_pi", c.decay_grid.dt_over_pi},
                    {"span_over_pi", c.decay_grid.span_over_pi}}},
                  {"commutation",
                   {{"t0_over_pi", c.commutation_grid.t0_over_pi},
                    {"dt_over_pi", c.commutation_grid.dt_over_pi},
                    {"span_over_pi", c.commutation_grid.span_over_pi}}}};
    j["windowing"] = {{"T_window_over_pi", c.T_window_over_pi},
                      {"delta_over_pi", c.delta_over_pi}};
    j["bands"] = {{"k_lo", c.k_lo},
                  {"decay_k_lo", c.decay_k_lo},
                  {"decay_k_hi", c.decay_k_hi},
                  {"commutation_k_lo", c.commutation_k_lo},
                  {"commutation_k_hi", c.commutation_k_hi}};
    j["seeds"] = c.seeds;
    return j;
}

// Every violated constraint, in a fixed order; empty means valid.
inline std::vector<std::string> validate(const ExperimentConfig& c) {
    std::vector<std::string> bad;
    if (c.model_kind != "dirichlet_interval")
        bad.push_back("model.kind: only 'dirichlet_interval' is file-configurable");
    if (!(c.length_over_pi > 0.0)) bad.push_back("model.length_over_pi must be positive");
    if (c.n_modes < 1) bad.push_back("model.n_modes must be at least 1");
    if (c.observation != "identity" && c.observation != "interior" &&
        c.observation != "neumann_left" && c.observation != "neumann_right")
        bad.push_back("observation.kind must be identity|interior|neumann_left|neumann_right");
    if (c.observation == "interior" &&
        !(0.0 <= c.x_lo && c.x_lo < c.x_hi && c.x_hi <= c.length()))
        bad.push_back("observation window needs 0 <= x_lo < x_hi <= length");
    try {
        validate(c.scheme);
    } catch (const std::exception& e) {
        bad.push_back(e.what()); // the scheme validator already names its section
    }
    if (!(c.T_over_pi > 0.0)) bad.push_back("horizons: T must be positive");
    if (!(c.T_prime_over_pi > c.T_over_pi)) bad.push_back("horizons: T_prime must exceed T");
    if (!(c.ell1 <= c.ell0)) bad.push_back("exponents: need ell1 <= ell0");
    if (!(c.ell0 <= 2.0 * c.m0)) bad.push_back("exponents: need ell0 <= 2*m0");
    if (!(c.p1 <= c.p0)) bad.push_back("exponents: need p1 <= p0");
    if (!(c.p0 <= c.m0)) bad.push_back("exponents: need p0 <= m0");
    for (const GridConfig* g : {&c.decay_grid, &c.commutation_grid}) {
        if (!(g->dt_over_pi > 0.0) || !(g->span_over_pi > 0.0) || g->samples() < 2)
            bad.push_back("grids: dt and span must be positive with at least two samples");
    }
    if (!(c.T_window_over_pi > 0.0) || !(c.delta_over_pi > 0.0))
        bad.push_back("windowing: T_window and delta must be positive");
    if (c.k_lo < 1 || c.k_lo > c.scheme.k_max)
        bad.push_back("bands: need 1 <= k_lo <= scheme.k_max");
    if (c.decay_k_lo < 1 || c.decay_k_lo > c.decay_k_hi)
        bad.push_back("bands: need 1 <= decay_k_lo <= decay_k_hi");
    if (c.commutation_k_lo < 1 || c.commutation_k_lo > c.commutation_k_hi)
        bad.push_back("bands: need 1 <= commutation_k_lo <= commutation_k_hi");
    if (c.seeds.empty()) bad.push_back("seeds: need at least one seed");
    return bad;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("config: parse error: ") + e.what());
    }
    ExperimentConfig c = config_from_json(j);
    const auto bad = validate(c);
    if (!bad.empty()) {
        std::string msg = "config: invalid:";
        for (const auto& b : bad) msg += "\n  - " + b;
        throw std::invalid_argument(msg);
    }
    return c;
}

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

// Hash of the canonical serialized form; stamped on every report row.
inline std::string config_hash(const ExperimentConfig& c) {
    const std::uint64_t h = fnv1a64(config_to_json(c).dump());
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline SpectralModel build_model(const ExperimentConfig& c) {
    ObservationSpec obs;
    if (c.observation == "identity") {
        obs.kind = ObsKind::identity;
    } else if (c.observation == "interior") {
        obs.kind = ObsKind::interior_indicator;
        obs.x_lo = c.x_lo;
        obs.x_hi = c.x_hi;
    } else {
        obs.kind = ObsKind::neumann_trace;
        obs.right_endpoint = c.observation == "neumann_right";
    }
    obs.m0 = c.m0;
    return build_dirichlet_interval(c.length(), c.n_modes, obs);
}

} // namespace obslab
