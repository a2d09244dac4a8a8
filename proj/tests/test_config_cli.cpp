#include <obslab/config.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <string>

using namespace obslab;

TEST_CASE("empty json yields the default experiment") {
    const ExperimentConfig c = config_from_json(nlohmann::json::object());
    REQUIRE(c.model_kind == "dirichlet_interval");
    REQUIRE(c.n_modes == 64);
    REQUIRE(c.observation == "interior");
    REQUIRE(c.x_lo == 0.3);
    REQUIRE(c.x_hi == 0.8);
    REQUIRE(c.T_over_pi == 2.0);
    REQUIRE(c.T_prime_over_pi == 2.5);
    REQUIRE(c.scheme.alpha == 0.4);
    REQUIRE(c.scheme.k_max == 32);
    REQUIRE(c.seeds.size() == 20);
    REQUIRE(c.seeds.front() == 515);
    REQUIRE(validate(c).empty());
}

TEST_CASE("partial sections override only their own fields") {
    nlohmann::json j;
    j["horizons"]["T_over_pi"] = 1.0;
    j["scheme"]["rho"] = 1.4;
    const ExperimentConfig c = config_from_json(j);
    REQUIRE(c.T_over_pi == 1.0);
    REQUIRE(c.T_prime_over_pi == 2.5);
    REQUIRE(c.scheme.rho == 1.4);
    REQUIRE(c.scheme.alpha == 0.4);
}

TEST_CASE("unknown keys are rejected with their location") {
    nlohmann::json j;
    j["horzons"]["T_over_pi"] = 1.0;
    REQUIRE_THROWS_WITH(config_from_json(j), Catch::Matchers::ContainsSubstring("horzons"));
    nlohmann::json j2;
    j2["scheme"]["aplha"] = 0.4;
    REQUIRE_THROWS_WITH(config_from_json(j2), Catch::Matchers::ContainsSubstring("aplha"));
}

TEST_CASE("validation names every violated constraint at once") {
    ExperimentConfig c;
    c.T_prime_over_pi = c.T_over_pi;  // horizon ordering broken
    c.ell1 = 3.0;                     // exponent ordering broken twice
    c.m0 = 1.0;
    c.ell0 = 2.5;
    c.p1 = 0.5;
    c.p0 = 0.0;
    const auto bad = validate(c);
    std::string all;
    for (const auto& b : bad) all += b + "\n";
    REQUIRE(all.find("T_prime") != std::string::npos);
    REQUIRE(all.find("ell1 <= ell0") != std::string::npos);
    REQUIRE(all.find("ell0 <= 2*m0") != std::string::npos);
    REQUIRE(all.find("p1 <= p0") != std::string::npos);
    REQUIRE(bad.size() >= 4);
}

TEST_CASE("exponent orderings at the boundary are accepted") {
    ExperimentConfig c;
    c.ell0 = 2.0;
    c.ell1 = 2.0;
    c.m0 = 1.0;
    c.p0 = 1.0;
    c.p1 = 1.0;
    REQUIRE(validate(c).empty());
}

TEST_CASE("scheme violations surface through the config validator") {
    ExperimentConfig c;
    c.scheme.alpha = 0.5;
    c.scheme.a_tilde = 0.55;
    c.scheme.a = 0.7;
    c.scheme.rho = 2.0;
    const auto bad = validate(c);
    REQUIRE(bad.size() == 1);
    REQUIRE(bad.front().find("scheme") != std::string::npos);
}

TEST_CASE("grid sample counts follow from span and step") {
    GridConfig g{-6.0, 0.0009765625, 16.0};
    REQUIRE(g.samples() == 16384);
    REQUIRE(g.t0() == Catch::Approx(-6.0 * detail::kPi));
    REQUIRE(g.dt() == Catch::Approx(0.0009765625 * detail::kPi));
    GridConfig zero{0.0, 0.0, 1.0};
    REQUIRE(zero.samples() == 0);
}

TEST_CASE("config hash is stable and content-sensitive") {
    ExperimentConfig a, b;
    REQUIRE(config_hash(a) == config_hash(b));
    b.n_modes = 65;
    REQUIRE(config_hash(a) != config_hash(b));
    // round trip through json preserves the hash
    const ExperimentConfig c = config_from_json(config_to_json(a));
    REQUIRE(config_hash(c) == config_hash(a));
    REQUIRE(config_hash(a).size() == 16);
}

TEST_CASE("build_model maps every observation name") {
    ExperimentConfig c;
    c.n_modes = 6;
    c.observation = "identity";
    REQUIRE(build_model(c).pairing.isApprox(Eigen::MatrixXcd::Identity(6, 6)));
    c.observation = "interior";
    const SpectralModel mi = build_model(c);
    REQUIRE(mi.construction.find("interior") != std::string::npos);
    c.observation = "neumann_left";
    REQUIRE(build_model(c).factor.rows() == 1);
    c.observation = "neumann_right";
    const SpectralModel mr = build_model(c);
    REQUIRE(mr.factor.rows() == 1);
    // right-endpoint slopes alternate in sign relative to the left endpoint
    const SpectralModel ml = build_model([&] {
        ExperimentConfig cl = c;
        cl.observation = "neumann_left";
        return cl;
    }());
    REQUIRE(mr.factor(0, 0) == -ml.factor(0, 0)); // odd mode: cos(pi) = -1
    REQUIRE(mr.factor(0, 1) == ml.factor(0, 1));  // even mode: cos(2 pi) = 1
}

TEST_CASE("load_config reports open and parse failures as config errors") {
    REQUIRE_THROWS_AS(load_config("/nonexistent/path.json"), std::invalid_argument);
}

TEST_CASE("m0 flows from the config into the model") {
    ExperimentConfig c;
    c.n_modes = 4;
    c.m0 = 1.5;
    c.p0 = 1.0;
    c.p1 = 0.0;
    REQUIRE(validate(c).empty());
    REQUIRE(build_model(c).m0 == 1.5);
}
