#include <doctest.h>

#include <random>
#include <sstream>

#include "nmrelax/config.hpp"
#include "nmrelax/model.hpp"

using namespace nmrelax;

TEST_CASE("validate_params accepts the TMS parameter set") {
    const ModelParams p{0.41, 0.20, two_pi * 6.6, 0.0, 12};
    CHECK_NOTHROW(validate_params(p));
}

TEST_CASE("validate_params accepts free evolution") {
    CHECK_NOTHROW(validate_params(ModelParams{0, 0, 0, 0, 1}));
}

TEST_CASE("validate_params names the offending field") {
    ModelParams p{-0.1, 0.2, 1.0, 0.0, 1};
    CHECK_THROWS_WITH_AS(validate_params(p), "gamma_I must be >= 0",
                         std::invalid_argument);
    p = {0.1, -0.2, 1.0, 0.0, 1};
    CHECK_THROWS_WITH_AS(validate_params(p), "gamma_II must be >= 0",
                         std::invalid_argument);
    p = {0.1, 0.2, 1.0, -1.0, 1};
    CHECK_THROWS_WITH_AS(validate_params(p), "omega1 must be >= 0",
                         std::invalid_argument);
    p = {0.1, 0.2, 1.0, 0.0, 0};
    CHECK_THROWS_WITH_AS(validate_params(p), "n must be >= 1",
                         std::invalid_argument);
    p = {0.1, 0.2, std::nan(""), 0.0, 1};
    CHECK_THROWS_WITH_AS(validate_params(p), "J must be finite",
                         std::invalid_argument);
}

TEST_CASE("negative J is legal") {
    CHECK_NOTHROW(validate_params(ModelParams{0.1, 0.2, -5.0, 0.0, 2}));
}

TEST_CASE("TimeGrid rejects bad bounds") {
    CHECK_THROWS_AS(TimeGrid(1.0, 1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid(-1.0, 1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid(0.0, 1.0, 1), std::invalid_argument);
    const TimeGrid g(0.0, 1.0, 11);
    CHECK(g.dt() == doctest::Approx(0.1));
    CHECK(g.times().back() == 1.0);
}

TEST_CASE("Trajectory rejects mismatched lengths and non-monotone times") {
    CHECK_THROWS_AS(Trajectory({0.0, 1.0}, {Complex{1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(Trajectory({0.0, 1.0, 1.0}, {Complex{1}, Complex{2}, Complex{3}}),
                    std::invalid_argument);
    CHECK_NOTHROW(Trajectory({0.0, 0.5, 1.0}, {Complex{1}, Complex{2}, Complex{3}}));
}

TEST_CASE("config accepts hz keys with the 2 pi factor") {
    std::istringstream in(
        "gamma_I_radps = 0.41\n"
        "gamma_II_radps = 0.20\n"
        "J_hz = 6.6\n"
        "omega1_hz = 21 # drive\n"
        "n = 12\n"
        "t_end_s = 2\n"
        "samples = 501\n");
    const RunConfig cfg = parse_config(in);
    CHECK(cfg.params.J == doctest::Approx(two_pi * 6.6).epsilon(1e-15));
    CHECK(cfg.params.omega1 == doctest::Approx(two_pi * 21.0).epsilon(1e-15));
    CHECK(cfg.params.n == 12);
    CHECK(cfg.grid.samples == 501);
}

TEST_CASE("config rejects unknown keys") {
    std::istringstream in("gamma_I_radps = 0.1\nfrobnicate = 3\n");
    CHECK_THROWS_WITH_AS(parse_config(in), "config: unknown key 'frobnicate'",
                         std::invalid_argument);
}

TEST_CASE("config rejects conflicting unit spellings") {
    std::istringstream in("J_hz = 6.6\nJ_radps = 41.0\n");
    CHECK_THROWS_AS(parse_config(in), std::invalid_argument);
}

TEST_CASE("config rejects duplicates and malformed lines") {
    std::istringstream dup("n = 2\nn = 3\n");
    CHECK_THROWS_AS(parse_config(dup), std::invalid_argument);
    std::istringstream noeq("n 2\n");
    CHECK_THROWS_AS(parse_config(noeq), std::invalid_argument);
    std::istringstream badnum("gamma_I_radps = abc\n");
    CHECK_THROWS_AS(parse_config(badnum), std::invalid_argument);
}

TEST_CASE("config round-trips validated parameters exactly") {
    std::mt19937 rng(991);
    std::uniform_real_distribution<double> mag(-8.0, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
        RunConfig cfg;
        cfg.params.gamma_I = std::pow(10.0, mag(rng));
        cfg.params.gamma_II = std::pow(10.0, mag(rng));
        cfg.params.J = std::pow(10.0, mag(rng)) * (trial % 2 ? 1.0 : -1.0);
        cfg.params.omega1 = std::pow(10.0, mag(rng));
        cfg.params.n = 1 + trial % 12;
        cfg.grid = TimeGrid(0.0, std::pow(10.0, mag(rng)) + 1.0, 2 + trial);

        std::stringstream buf;
        write_config(buf, cfg);
        const RunConfig back = parse_config(buf);
        CHECK(back.params.gamma_I == cfg.params.gamma_I);
        CHECK(back.params.gamma_II == cfg.params.gamma_II);
        CHECK(back.params.J == cfg.params.J);
        CHECK(back.params.omega1 == cfg.params.omega1);
        CHECK(back.params.n == cfg.params.n);
        CHECK(back.grid.t_end == cfg.grid.t_end);
        CHECK(back.grid.samples == cfg.grid.samples);
    }
}
