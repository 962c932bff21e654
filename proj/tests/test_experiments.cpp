#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "absfc/experiments.hpp"

using namespace absfc;
using namespace absfc::experiments;

TEST_CASE("shock steps are the multiples of 300 up to 1200") {
    for (int t : {300, 600, 900, 1200}) CHECK(is_shock_step(t));
    for (int t : {1, 299, 301, 450, 1201, 1500}) CHECK_FALSE(is_shock_step(t));
}

TEST_CASE("corridor shock lifts both rates by 50 bp and keeps symmetry") {
    PolicyRates r;
    r.icb_d = 0.005;
    r.icb_l = 0.015;
    MarketParams m;
    const double target0 = r.icb_t();
    apply_shocks(ShockKind::corridor, 300, r, m);
    CHECK(r.icb_d == doctest::Approx(0.010));
    CHECK(r.icb_l == doctest::Approx(0.020));
    CHECK(r.icb_t() == doctest::Approx(target0 + 0.005));
    CHECK(r.half_width() == doctest::Approx(0.005));
}

TEST_CASE("width shock keeps the floor and drifts the target") {
    PolicyRates r;
    r.icb_d = 0.005;
    r.icb_l = 0.015;
    MarketParams m;
    for (int t : {300, 600, 900, 1200}) apply_shocks(ShockKind::width, t, r, m);
    CHECK(r.icb_d == doctest::Approx(0.005));
    CHECK(r.icb_l == doctest::Approx(0.015 + 4 * 0.005));
    CHECK(r.icb_t() == doctest::Approx(0.5 * (0.005 + 0.035)));
}

TEST_CASE("uncertainty schedule reaches its peak of 0.8") {
    PolicyRates r;
    MarketParams m;
    m.pdu = 0.0;
    for (int t = 1; t <= 1000; ++t) apply_shocks(ShockKind::uncertainty, t, r, m);
    CHECK(m.pdu == doctest::Approx(0.6));  // three events elapsed by t=1000
    for (int t = 1001; t <= 1200; ++t) apply_shocks(ShockKind::uncertainty, t, r, m);
    CHECK(m.pdu == doctest::Approx(0.8));
}

TEST_CASE("missing shock leaves every parameter untouched") {
    PolicyRates r;
    MarketParams m;
    const PolicyRates r0 = r;
    const double pdu0 = m.pdu;
    for (int t = 1; t <= 1200; ++t) apply_shocks(ShockKind::missing, t, r, m);
    CHECK(r.icb_d == r0.icb_d);
    CHECK(r.icb_l == r0.icb_l);
    CHECK(m.pdu == pdu0);
}

TEST_CASE("off-schedule steps are no-ops (idempotence per step)") {
    PolicyRates r;
    MarketParams m;
    apply_shocks(ShockKind::corridor, 301, r, m);
    CHECK(r.icb_d == doctest::Approx(0.005));
    apply_shocks(ShockKind::corridor, 2400, r, m);  // beyond the horizon
    CHECK(r.icb_d == doctest::Approx(0.005));
}

TEST_CASE("grid parsing") {
    const auto g = parse_grid("0:1:0.1");
    REQUIRE(g.size() == 11);
    CHECK(g.front() == doctest::Approx(0.0));
    CHECK(g.back() == doctest::Approx(1.0));
    CHECK(g[5] == doctest::Approx(0.5));

    const auto list = parse_grid("0.4,0.6,0.8");
    REQUIRE(list.size() == 3);
    CHECK(list[1] == doctest::Approx(0.6));

    CHECK_THROWS_AS(parse_grid(""), std::runtime_error);
}

TEST_CASE("sweep points override exactly one parameter") {
    RunConfig base;
    const auto cfg = configure_point(base, "m1", 0.7);
    CHECK(cfg.interbank.weights.m1 == doctest::Approx(0.7));
    CHECK(cfg.interbank.weights.m2 == base.interbank.weights.m2);
    CHECK(cfg.real_sector.npl_share == base.real_sector.npl_share);

    const auto cfg2 = configure_point(base, "gamma", 0.25);
    CHECK(cfg2.real_sector.leverage_cap == doctest::Approx(0.25));

    CHECK_THROWS_AS(configure_point(base, "m1", 1.4), std::runtime_error);
    CHECK_THROWS_AS(configure_point(base, "nope", 0.5), std::runtime_error);
}

TEST_CASE("empty grid yields no runs") {
    SweepSpec spec;
    spec.parameter = "m1";
    spec.grid = {};
    RunConfig base;
    base.steps = 5;
    base.burn_in = 1;
    const auto points = run_sweep(spec, base);
    CHECK(points.empty());
}
