#include "doctest.h"
#include "test_util.hpp"
#include "twrde/threshold.hpp"

#include <cmath>
#include <utility>
#include <vector>

using namespace twrde;

namespace {

DeConfig probe_cfg(std::size_t n, int iters) {
    DeConfig cfg;
    cfg.population_size = n;
    cfg.max_iters = iters;
    return cfg;
}

}  // namespace

TEST_SUITE("threshold") {

TEST_CASE("extrapolation recovers an exact affine law in 1/L") {
    std::vector<std::pair<int, double>> pts;
    for (int L : {10, 25, 50}) pts.emplace_back(L, 0.78 + 0.5 / L);
    const auto fit = extrapolate_threshold(pts);
    CHECK(fit.sigma_inf == doctest::Approx(0.78).epsilon(1e-12));
    CHECK(fit.slope == doctest::Approx(0.5).epsilon(1e-12));
    for (double r : fit.residuals) CHECK(std::abs(r) < 1e-12);
}

TEST_CASE("extrapolation of a flat series has zero slope") {
    std::vector<std::pair<int, double>> pts = {{10, 0.8}, {20, 0.8}, {40, 0.8}, {80, 0.8}};
    const auto fit = extrapolate_threshold(pts);
    CHECK(fit.sigma_inf == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(std::abs(fit.slope) < 1e-12);
}

TEST_CASE("extrapolation needs three points over at least two chain lengths") {
    using testutil::thrown_kind;
    std::vector<std::pair<int, double>> two = {{10, 0.8}, {25, 0.79}};
    CHECK(thrown_kind([&] { extrapolate_threshold(two); }) == "degenerate-fit");
    std::vector<std::pair<int, double>> same = {{10, 0.8}, {10, 0.81}, {10, 0.79}};
    CHECK(thrown_kind([&] { extrapolate_threshold(same); }) == "degenerate-fit");
    std::vector<std::pair<int, double>> ok = {{10, 0.8}, {10, 0.8}, {25, 0.79}};
    CHECK(thrown_kind([&] { extrapolate_threshold(ok); }) == "<none>");
}

TEST_CASE("bisection validates bracket arguments") {
    using testutil::thrown_kind;
    const auto e = make_regular(3, 6);
    const auto cfg = probe_cfg(500, 20);
    CHECK(thrown_kind([&] { bp_threshold(e, cfg, 0.9, 0.5, 1e-2); }) == "invalid-argument");
    CHECK(thrown_kind([&] { bp_threshold(e, cfg, -0.1, 0.5, 1e-2); }) == "invalid-argument");
    CHECK(thrown_kind([&] { bp_threshold(e, cfg, 0.4, 0.9, 0.0); }) == "invalid-argument");
}

TEST_CASE("bisection fails cleanly when no boundary lies in reach") {
    // Both ends deep in the undecodable region; one widening retry, then give up.
    using testutil::thrown_kind;
    const auto e = make_regular(3, 6);
    const auto cfg = probe_cfg(500, 60);
    CHECK(thrown_kind([&] { bp_threshold(e, cfg, 0.95, 1.05, 5e-3); }) == "bracket-failure");
}

TEST_CASE("small-population bisection lands near the known boundary") {
    const auto e = make_regular(3, 6);
    auto cfg = probe_cfg(2000, 300);
    const auto res = bp_threshold(e, cfg, 0.4, 1.0, 5e-3);
    CHECK(res.upper - res.lower <= 5e-3 + 1e-12);
    CHECK(res.estimate == doctest::Approx(0.5 * (res.lower + res.upper)));
    CHECK(res.estimate > 0.70);
    CHECK(res.estimate < 0.78);
    CHECK(is_decodable(res.lower_trace));
    CHECK_FALSE(is_decodable(res.upper_trace));
    // Probe log covers both outcomes; decodable probes never pass the final
    // lower bound, undecodable ones never undercut the final upper.
    int dec = 0, und = 0;
    for (const auto& p : res.probes) {
        dec += p.decodable;
        und += !p.decodable;
        if (p.decodable)
            CHECK(p.sigma <= res.lower + 1e-12);
        else
            CHECK(p.sigma >= res.upper - 1e-12);
    }
    CHECK(dec >= 1);
    CHECK(und >= 1);
}

TEST_CASE("a decodable-at-hi bracket widens upward before failing") {
    // hi = 0.70 is decodable for (3,6); one widening by the bracket width
    // reaches 0.95, which is not, and bisection proceeds from there.
    const auto e = make_regular(3, 6);
    auto cfg = probe_cfg(1000, 200);
    const auto res = bp_threshold(e, cfg, 0.45, 0.70, 1e-2);
    CHECK(res.estimate > 0.65);
    CHECK(res.estimate < 0.82);
}

}  // TEST_SUITE
