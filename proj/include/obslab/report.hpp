#pragma once

// Report emission. CSV for tables (plot-ready, %.17g, one config-hash column
// on every row so a table can always be traced to the exact configuration
// that produced it), JSON for objects meant for cross-implementation diffing
// (models, Gramians, states, schemes; matrices row-major as re/im pairs).

#include "dyadic.hpp"
#include "gramian.hpp"
#include "spectral_model.hpp"
#include "time_signal.hpp"

#include <json.hpp>

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace obslab {

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

namespace detail {

inline std::string csv_row(const std::vector<std::string>& cells) {
    std::string row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) row += ',';
        row += cells[i];
    }
    row += '\n';
    return row;
}

} // namespace detail

inline std::string bands_csv(const SpectralModel& m, const DyadicScheme& s, Equation kind,
                             const std::string& hash) {
    // nu columns are 1-based; empty bands keep zeros with card 0
    std::string out = "k,h_k,nu_first,nu_last,card,config\n";
    const int k_from = kind == Equation::wave ? -s.k_max : 1;
    for (int k = k_from; k <= s.k_max; ++k) {
        if (k == 0) continue;
        const auto idx = band_indices(s, m, k, kind);
        const int first = idx.empty() ? 0 : idx.front() + 1;
        const int last = idx.empty() ? 0 : idx.back() + 1;
        out += detail::csv_row({std::to_string(k), detail::fmt_double(h_scale(s, k)),
                                std::to_string(first), std::to_string(last),
                                std::to_string(static_cast<int>(idx.size())), hash});
    }
    return out;
}

inline std::string decay_csv(const DecayTable& t, const TimeWindowing& w, const std::string& hash) {
    std::string out =
        "k,h_k,r_k,slope_so_far,T_window,delta,phi_half_width,phi_transition,config\n";
    for (const auto& r : t.rows)
        out += detail::csv_row({std::to_string(r.k), detail::fmt_double(r.h),
                                detail::fmt_double(r.r), detail::fmt_double(r.slope_so_far),
                                detail::fmt_double(w.T_window), detail::fmt_double(w.delta),
                                detail::fmt_double(w.phi_half_width),
                                detail::fmt_double(w.phi_transition), hash});
    return out;
}

inline std::string filter_csv(const DyadicScheme& s, double covering_min, int overlap_max,
                              const std::string& hash) {
    std::string out = "quantity,value,bound,config\n";
    out += detail::csv_row({"covering_min", detail::fmt_double(covering_min),
                            detail::fmt_double(1.0), hash});
    out += detail::csv_row({"overlap_max", std::to_string(overlap_max),
                            std::to_string(overlap_bound(s)), hash});
    return out;
}

inline const char* equation_name(Equation e) {
    return e == Equation::wave ? "wave" : "schrodinger";
}

inline std::string constant_row(Equation kind, const std::string& label,
                                const ConstantReport& rep, const std::string& hash) {
    return detail::csv_row({equation_name(kind), label, detail::fmt_double(rep.T),
                            detail::fmt_double(rep.exponent), detail::fmt_double(rep.c),
                            detail::fmt_double(rep.C_obs), std::to_string(rep.dim), hash});
}

inline std::string constants_csv(const TheoremReport& rep, const std::string& hash) {
    std::string out = "kind,band,T,exponent,c,C_obs,dim,config\n";
    for (const auto& b : rep.bands)
        out += constant_row(rep.kind, std::to_string(b.k), b.rep, hash);
    out += constant_row(rep.kind, "low", rep.low, hash);
    out += constant_row(rep.kind, "global", rep.global, hash);
    return out;
}

inline std::string chain_csv(const TheoremReport& rep, const std::string& hash) {
    std::string out = "seed,energy,low_term,gramian_term,rhs,ratio,config\n";
    for (const auto& r : rep.chain)
        out += detail::csv_row({std::to_string(r.seed), detail::fmt_double(r.energy),
                                detail::fmt_double(r.low_term),
                                detail::fmt_double(r.gramian_term), detail::fmt_double(r.rhs),
                                detail::fmt_double(r.ratio), hash});
    return out;
}

inline nlohmann::json matrix_json(const Eigen::MatrixXcd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(row);
    }
    return rows;
}

inline nlohmann::json vector_json(const Eigen::VectorXcd& v) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v[i].real(), v[i].imag()});
    return out;
}

inline nlohmann::json model_json(const SpectralModel& m) {
    nlohmann::json j;
    j["n_modes"] = m.n_modes;
    j["lambda"] = std::vector<double>(m.lambda.data(), m.lambda.data() + m.lambda.size());
    j["obs_pairing"] = matrix_json(m.pairing);
    j["m0"] = m.m0;
    j["construction"] = m.construction;
    return j;
}

inline nlohmann::json gramian_json(const Gramian& g) {
    nlohmann::json j;
    j["kind"] = equation_name(g.kind);
    j["horizon"] = g.horizon;
    j["matrix"] = matrix_json(g.matrix);
    return j;
}

inline nlohmann::json state_json(const WaveState& s) {
    return {{"uplus", vector_json(s.uplus)}, {"uminus", vector_json(s.uminus)}};
}

inline nlohmann::json state_json(const SchrodingerState& s) {
    return {{"u0", vector_json(s.u0)}};
}

inline nlohmann::json scheme_json(const DyadicScheme& s) {
    return {{"alpha", s.alpha}, {"a_tilde", s.a_tilde}, {"a", s.a},
            {"rho", s.rho},     {"k_max", s.k_max}};
}

} // namespace obslab
