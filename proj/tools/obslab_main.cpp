// obslab: configuration-driven front door to the library.
//
//   obslab <subcommand> --config <path> [--out <dir>]
//
// Subcommands: model, bands, filter-check, gramian, constants, decay, verify.
// Exit codes: 0 success, 1 verification failure (per-check CSV still written),
// 2 configuration error.

#include <obslab/config.hpp>
#include <obslab/report.hpp>
#include <obslab/verify.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <string>

namespace {

std::string join(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

int run_model(const obslab::ExperimentConfig& cfg, const std::string& out) {
    const obslab::SpectralModel m = obslab::build_model(cfg);
    obslab::write_file(join(out, "model.json"), obslab::model_json(m).dump(2) + "\n");
    obslab::write_file(join(out, "scheme.json"), obslab::scheme_json(cfg.scheme).dump(2) + "\n");
    std::printf("model: %d modes, %s\n", m.n_modes, m.construction.c_str());
    return 0;
}

int run_bands(const obslab::ExperimentConfig& cfg, const std::string& out) {
    const obslab::SpectralModel m = obslab::build_model(cfg);
    const std::string hash = obslab::config_hash(cfg);
    obslab::write_file(join(out, "bands_wave.csv"),
                       obslab::bands_csv(m, cfg.scheme, obslab::Equation::wave, hash));
    obslab::write_file(join(out, "bands_schrodinger.csv"),
                       obslab::bands_csv(m, cfg.scheme, obslab::Equation::schrodinger, hash));
    std::printf("bands: wrote bands_wave.csv and bands_schrodinger.csv\n");
    return 0;
}

int run_filter_check(const obslab::ExperimentConfig& cfg, const std::string& out) {
    const double covering = obslab::covering_defect(cfg.scheme, 1.0, 1e4, 100000);
    int overlap = 0;
    const int n_samples = 100000;
    const double lr = std::log(1e4);
    for (int i = 0; i < n_samples; ++i) {
        const double tau = std::exp(lr * i / (n_samples - 1));
        overlap = std::max(overlap, obslab::overlap_count(cfg.scheme, tau));
        overlap = std::max(overlap, obslab::overlap_count(cfg.scheme, -tau));
    }
    obslab::write_file(join(out, "filter.csv"),
                       obslab::filter_csv(cfg.scheme, covering, overlap, obslab::config_hash(cfg)));
    const int bound = obslab::overlap_bound(cfg.scheme);
    std::printf("filter-check: covering min %.12g (need >= 1), overlap max %d (bound %d)\n",
                covering, overlap, bound);
    return (covering >= 1.0 - 1e-12 && overlap <= bound) ? 0 : 1;
}

int run_gramian(const obslab::ExperimentConfig& cfg, const std::string& out) {
    const obslab::SpectralModel m = obslab::build_model(cfg);
    const obslab::Gramian gw = obslab::wave_gramian(m, cfg.T());
    const obslab::Gramian gs = obslab::schrodinger_gramian(m, cfg.T());
    obslab::write_file(join(out, "gramian_wave.json"), obslab::gramian_json(gw).dump() + "\n");
    obslab::write_file(join(out, "gramian_schrodinger.json"),
                       obslab::gramian_json(gs).dump() + "\n");
    std::printf("gramian: %ldx%ld wave, %ldx%ld schrodinger at T=%.12g\n",
                static_cast<long>(gw.matrix.rows()), static_cast<long>(gw.matrix.cols()),
                static_cast<long>(gs.matrix.rows()), static_cast<long>(gs.matrix.cols()),
                cfg.T());
    return 0;
}

int run_constants(const obslab::ExperimentConfig& cfg, const std::string& out) {
    const obslab::SpectralModel m = obslab::build_model(cfg);
    const std::string hash = obslab::config_hash(cfg);
    const int n_seeds = static_cast<int>(cfg.seeds.size());
    const std::uint64_t seed_base = cfg.seeds.empty() ? 515 : cfg.seeds[0];
    const obslab::TheoremReport rw =
        obslab::theorem_experiment(m, cfg.scheme, cfg.T(), cfg.T_prime(), cfg.ell1,
                                   obslab::Equation::wave, cfg.k_lo, n_seeds, seed_base);
    const obslab::TheoremReport rs =
        obslab::theorem_experiment(m, cfg.scheme, cfg.T(), cfg.T_prime(), cfg.p1,
                                   obslab::Equation::schrodinger, cfg.k_lo, n_seeds, seed_base);
    obslab::write_file(join(out, "constants_wave.csv"), obslab::constants_csv(rw, hash));
    obslab::write_file(join(out, "chain_wave.csv"), obslab::chain_csv(rw, hash));
    obslab::write_file(join(out, "constants_schrodinger.csv"), obslab::constants_csv(rs, hash));
    obslab::write_file(join(out, "chain_schrodinger.csv"), obslab::chain_csv(rs, hash));
    for (const obslab::TheoremReport* rep : {&rw, &rs}) {
        double min_band = std::numeric_limits<double>::infinity();
        for (const auto& b : rep->bands)
            if (!b.rep.empty) min_band = std::min(min_band, b.rep.c);
        std::printf("constants (%s): global c %.12g at T'=%.12g, min band c %.12g at T=%.12g, "
                    "chain %s (slack %.6g)\n",
                    obslab::equation_name(rep->kind), rep->global.c, rep->T_prime, min_band,
                    rep->T, rep->closes ? "closes" : "OPEN", rep->slack);
    }
    return 0;
}

int run_decay(const obslab::ExperimentConfig& cfg, const std::string& out) {
    const obslab::SpectralModel m = obslab::build_model(cfg);
    const obslab::WaveState u =
        obslab::random_wave_state(m.n_modes, cfg.seeds.empty() ? 7 : cfg.seeds[0]);
    const obslab::TimeGrid g{cfg.decay_grid.t0(), cfg.decay_grid.dt(),
                             cfg.decay_grid.samples()};
    const obslab::TimeWindowing w =
        obslab::TimeWindowing::defaults(cfg.T_window(), cfg.delta());
    const obslab::DecayTable t =
        obslab::decay_experiment(m, u, cfg.scheme, w, cfg.decay_k_lo, cfg.decay_k_hi, g);
    obslab::write_file(join(out, "decay.csv"), obslab::decay_csv(t, w, obslab::config_hash(cfg)));
    std::printf("decay: fitted slope %.6g over k in [%d, %d]\n", t.slope, cfg.decay_k_lo,
                cfg.decay_k_hi);
    return 0;
}

int run_verify(const obslab::ExperimentConfig& cfg, const std::string& out) {
    const std::vector<obslab::CheckResult> checks = obslab::run_all_checks(cfg);
    obslab::write_file(join(out, "checks.csv"),
                       obslab::checks_csv(checks, obslab::config_hash(cfg)));
    bool all = true;
    for (const auto& c : checks) {
        std::printf("%s %-24s %s (%.2f s)\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                    c.detail.c_str(), c.seconds);
        all = all && c.pass;
    }
    std::printf("verify: %s\n", all ? "all checks passed" : "FAILURES PRESENT");
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"obslab: dyadic frequency-localization laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    const std::vector<std::string> names = {"model",    "bands",     "filter-check", "gramian",
                                            "constants", "decay",    "verify"};
    const std::vector<std::string> descs = {
        "dump the spectral model and scheme as JSON",
        "dump per-band index ranges as CSV",
        "sweep covering and overlap bounds of the band filters",
        "dump wave and Schrodinger Gramians at horizon T as JSON",
        "run the full constant pipeline; dump constants and chain CSVs",
        "run the windowed band-decay experiment; dump CSV",
        "run the complete verification suite"};
    for (std::size_t i = 0; i < names.size(); ++i) {
        CLI::App* sub = app.add_subcommand(names[i], descs[i]);
        sub->add_option("--config", config_path, "JSON experiment config")->required();
        sub->add_option("--out", out_dir, "output directory (default: out)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // usage errors are config errors; --help stays 0
    }

    try {
        const obslab::ExperimentConfig cfg = obslab::load_config(config_path);
        std::filesystem::create_directories(out_dir);
        const std::string sub = app.get_subcommands().front()->get_name();
        if (sub == "model") return run_model(cfg, out_dir);
        if (sub == "bands") return run_bands(cfg, out_dir);
        if (sub == "filter-check") return run_filter_check(cfg, out_dir);
        if (sub == "gramian") return run_gramian(cfg, out_dir);
        if (sub == "constants") return run_constants(cfg, out_dir);
        if (sub == "decay") return run_decay(cfg, out_dir);
        if (sub == "verify") return run_verify(cfg, out_dir);
        std::fprintf(stderr, "unknown subcommand %s\n", sub.c_str());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "configuration leads to invalid computation: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
