#include "doctest.h"
#include "json.hpp"
#include "test_util.hpp"
#include "twrde/ensemble.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

using namespace twrde;

TEST_SUITE("ensemble") {

TEST_CASE("regular construction validates degrees") {
    using testutil::thrown_kind;
    CHECK(thrown_kind([] { make_regular(3, 6); }) == "<none>");
    CHECK(thrown_kind([] { make_regular(3, 7); }) == "invalid-degree");
    CHECK(thrown_kind([] { make_regular(6, 3); }) == "invalid-degree");
    CHECK(thrown_kind([] { make_regular(3, 3); }) == "invalid-degree");
    CHECK(thrown_kind([] { make_regular(1, 2); }) == "invalid-degree");
    CHECK(make_regular(3, 6).design_rate() == 0.5);
    CHECK(make_regular(3, 9).design_rate() == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("coupled chain with dl=3 dr=6 L=5 has the expected shape") {
    const auto p = make_sc(3, 6, 5);
    CHECK(p.k == 2);
    CHECK(p.dhat == 1);
    CHECK(p.num_checks() == 7);
    CHECK(p.num_variables() == 10);
    CHECK(p.label_lo == 0);
    const std::vector<int> want_deg = {2, 4, 6, 6, 6, 4, 2};
    for (int c = 0; c < p.num_checks(); ++c) CHECK(p.check_degree(c) == want_deg[c]);
}

TEST_CASE("coupled chain degree profile is palindromic") {
    for (auto [dl, dr, L] : std::vector<std::array<int, 3>>{{3, 6, 25}, {5, 10, 9}, {3, 9, 12}}) {
        const auto p = make_sc(dl, dr, L);
        const int m = p.num_checks();
        for (int c = 0; c < m; ++c) CHECK(p.check_degree(c) == p.check_degree(m - 1 - c));
        // Interior checks reach full degree dr; the ramp spans dl-1 positions.
        for (int c = 2 * p.dhat; c < m - 2 * p.dhat; ++c) CHECK(p.check_degree(c) == dr);
        CHECK(p.check_degree(0) == p.k);
    }
}

TEST_CASE("every variable bundle keeps dl sockets") {
    for (auto [dl, dr, L] : std::vector<std::array<int, 3>>{{3, 6, 25}, {5, 10, 9}, {3, 6, 1}}) {
        const auto p = make_sc(dl, dr, L);
        for (const auto& nbs : p.bundle_checks) {
            int sockets = 0;
            for (const auto& nb : nbs) sockets += nb.mult;
            CHECK(sockets == dl);
        }
    }
}

TEST_CASE("socket handshake: check sockets equal variable sockets") {
    for (auto [dl, dr, L] : std::vector<std::array<int, 3>>{{3, 6, 10}, {5, 10, 7}}) {
        const auto p = make_sc(dl, dr, L);
        CHECK(p.num_edges() == p.num_variables() * dl);
    }
}

TEST_CASE("adjacency matches the distance rule") {
    const auto p = make_sc(5, 10, 8);
    for (int c = 0; c < p.num_checks(); ++c) {
        const int label = p.check_label(c);
        std::vector<int> got;
        for (const auto& nb : p.check_bundles[c]) {
            CHECK(nb.mult == 1);
            got.push_back(nb.index + 1);
        }
        std::vector<int> want;
        for (int i = 1; i <= p.L; ++i)
            if (std::abs(i - label) <= p.dhat) want.push_back(i);
        CHECK(got == want);
    }
    // Mirror adjacency agrees.
    for (int i = 0; i < p.L; ++i)
        for (const auto& nb : p.bundle_checks[i])
            CHECK(std::abs((i + 1) - p.check_label(nb.index)) <= p.dhat);
}

TEST_CASE("design rate follows the check surplus") {
    CHECK(make_sc(3, 6, 25).design_rate() == doctest::Approx(1.0 - 27.0 / 50.0));
    CHECK(make_sc(3, 6, 50).design_rate() == doctest::Approx(1.0 - 52.0 / 100.0));
    CHECK_FALSE(make_sc(3, 6, 25).degenerate_rate());
    // Tiny chains can have more checks than variables.
    CHECK(make_sc(3, 6, 1).design_rate() < 0.0);
    CHECK(make_sc(3, 6, 1).degenerate_rate());
    CHECK(make_sc(3, 6, 2).design_rate() == 0.0);
    CHECK(make_sc(3, 6, 2).degenerate_rate());
}

TEST_CASE("coupled construction validates its inputs") {
    using testutil::thrown_kind;
    CHECK(thrown_kind([] { make_sc(4, 8, 10); }) == "invalid-degree");  // even dl
    CHECK(thrown_kind([] { make_sc(3, 8, 10); }) == "invalid-degree");
    CHECK(thrown_kind([] { make_sc(3, 6, 0); }) == "invalid-chain");
    CHECK(thrown_kind([] { make_sc(3, 6, -4); }) == "invalid-chain");
}

TEST_CASE("uncoupled protograph mirrors the regular ensemble") {
    const auto p = make_uncoupled(3, 6);
    CHECK(p.L == 1);
    CHECK(p.num_checks() == 1);
    CHECK(p.check_degree(0) == 6);
    CHECK(p.num_variables() == 2);
    CHECK(p.num_edges() == 6);
    CHECK(p.design_rate() == make_regular(3, 6).design_rate());
    REQUIRE(p.bundle_checks.size() == 1);
    REQUIRE(p.bundle_checks[0].size() == 1);
    CHECK(p.bundle_checks[0][0].mult == 3);
    // Even dl is fine here; only the coupled chain needs it odd.
    CHECK(make_uncoupled(4, 8).design_rate() == 0.5);
}

TEST_CASE("describe_json round trips through a parser") {
    const auto p = make_sc(3, 6, 5);
    const auto j = nlohmann::json::parse(p.describe_json());
    CHECK(j["dl"] == 3);
    CHECK(j["dr"] == 6);
    CHECK(j["L"] == 5);
    CHECK(j["num_checks"] == 7);
    CHECK(j["num_variables"] == 10);
    CHECK(j["checks"].size() == 7);
    CHECK(j["checks"][0]["degree"] == 2);
    CHECK(j["checks"][3]["degree"] == 6);
    double rate = j["design_rate"];
    CHECK(rate == doctest::Approx(1.0 - 7.0 / 10.0));
}

}  // TEST_SUITE
