#include "doctest.h"
#include "test_util.hpp"
#include "twrde/gf2.hpp"
#include "twrde/rng.hpp"
#include "twrde/tanner.hpp"

#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

using namespace twrde;

namespace {

Gf2Matrix random_matrix(std::size_t rows, std::size_t cols, double density, Rng& rng) {
    Gf2Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (rng.next_double() < density) m.set(r, c, true);
    return m;
}

// Echelon invariants: pivot entries set, pivot columns cleared in every later
// row, and rows past the rank all zero.  Pivot columns need not be monotone;
// the rescue pass may slot a skipped column after its block.
void check_echelon(const EchelonForm& ef) {
    REQUIRE(ef.pivot_cols.size() == ef.rank);
    for (std::size_t r = 0; r < ef.rank; ++r) {
        CHECK(ef.mat.get(r, ef.pivot_cols[r]));
        for (std::size_t r2 = r + 1; r2 < ef.rank; ++r2)
            CHECK_FALSE(ef.mat.get(r2, ef.pivot_cols[r]));
    }
    for (std::size_t r = ef.rank; r < ef.mat.rows(); ++r)
        for (std::size_t w = 0; w < ef.mat.words(); ++w) CHECK(ef.mat.row(r)[w] == 0);
    CHECK(ef.pivot_cols.size() + ef.free_cols.size() == ef.mat.cols());
}

}  // namespace

TEST_SUITE("gf2") {

TEST_CASE("bit vector primitives") {
    Gf2Vec v(130);
    CHECK(v.size() == 130);
    CHECK(v.popcount() == 0);
    v.set(0, true);
    v.set(64, true);
    v.set(129, true);
    CHECK(v.popcount() == 3);
    CHECK(v.get(64));
    v.flip(64);
    CHECK_FALSE(v.get(64));
    Gf2Vec w(130);
    w.set(0, true);
    w.set(100, true);
    v.xor_with(w);
    CHECK_FALSE(v.get(0));
    CHECK(v.get(100));
    CHECK(v.get(129));
    CHECK(v.popcount() == 2);
}

TEST_CASE("matrix primitives") {
    Gf2Matrix m(3, 70);
    m.set(0, 0, true);
    m.set(0, 69, true);
    m.set(1, 69, true);
    m.xor_rows(1, 0);
    CHECK(m.get(1, 0));
    CHECK_FALSE(m.get(1, 69));
    m.swap_rows(0, 2);
    CHECK_FALSE(m.get(0, 0));
    CHECK(m.get(2, 0));
    CHECK(m.get(2, 69));
}

TEST_CASE("rank of hand-built matrices") {
    Gf2Matrix id(8, 8);
    for (int i = 0; i < 8; ++i) id.set(i, i, true);
    CHECK(gf2_rank(id) == 8);

    Gf2Matrix ones(5, 9);
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 9; ++c) ones.set(r, c, true);
    CHECK(gf2_rank(ones) == 1);

    Gf2Matrix zero(4, 6);
    CHECK(gf2_rank(zero) == 0);

    // Row 2 = row 0 + row 1.
    Gf2Matrix dep(3, 5);
    dep.set(0, 0, true);
    dep.set(0, 2, true);
    dep.set(1, 1, true);
    dep.set(1, 2, true);
    dep.set(2, 0, true);
    dep.set(2, 1, true);
    CHECK(gf2_rank(dep) == 2);
}

TEST_CASE("blocked elimination agrees with plain gaussian elimination") {
    Rng rng(11, 0);
    for (auto [rows, cols, density] :
         std::vector<std::tuple<int, int, double>>{{60, 100, 0.5},
                                                   {100, 60, 0.5},
                                                   {64, 64, 0.5},
                                                   {90, 130, 0.03},
                                                   {1, 200, 0.5},
                                                   {200, 1, 0.5}}) {
        Gf2Matrix m = random_matrix(rows, cols, density, rng);
        const auto fast = echelon_form(m, 8);
        const auto slow = echelon_form(m, 1);
        CHECK(fast.rank == slow.rank);
        check_echelon(fast);
        check_echelon(slow);
    }
}

TEST_CASE("elimination survives duplicated and shifted rows") {
    Rng rng(12, 0);
    Gf2Matrix m(40, 90);
    for (int r = 0; r < 20; ++r)
        for (int c = 0; c < 90; ++c)
            if (rng.next_double() < 0.4) m.set(r, c, true);
    for (int r = 20; r < 40; ++r)
        for (int w = 0; w < int(m.words()); ++w) m.row(r)[w] = m.row(r - 20)[w];
    const auto ef = echelon_form(m, 8);
    CHECK(ef.rank == echelon_form(m, 1).rank);
    CHECK(ef.rank <= 20);
    check_echelon(ef);
}

TEST_CASE("sampled null vectors satisfy the original system") {
    Rng rng(13, 0);
    Gf2Matrix m = random_matrix(50, 80, 0.4, rng);
    const auto ef = echelon_form(m, 8);
    Rng draw(14, 0);
    for (int t = 0; t < 200; ++t) {
        const Gf2Vec v = sample_nullspace(ef, draw);
        CHECK(v.size() == 80);
        CHECK(in_nullspace(m, v));
    }
}

TEST_CASE("nullspace basis has the right dimension and is independent") {
    Rng rng(15, 0);
    Gf2Matrix m = random_matrix(30, 48, 0.5, rng);
    const auto ef = echelon_form(m, 8);
    const auto basis = nullspace_basis(ef);
    CHECK(basis.size() == 48 - ef.rank);
    Gf2Matrix b(basis.size(), 48);
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t c = 0; c < 48; ++c) b.set(i, c, basis[i].get(c));
    CHECK(gf2_rank(b) == basis.size());
    for (const auto& v : basis) CHECK(in_nullspace(m, v));
}

TEST_CASE("nullspace basis refuses absurd enumeration sizes") {
    using testutil::thrown_kind;
    Gf2Matrix zero(5, 30);
    const auto ef = echelon_form(zero, 8);
    CHECK(thrown_kind([&] { nullspace_basis(ef); }) == "dimension-too-large");
    CHECK(thrown_kind([&] { nullspace_basis(ef, 30); }) == "<none>");
}

TEST_CASE("nullspace sampling is uniform over the code") {
    // Parity matrix of a small sampled graph; fixed seed pins the dimension.
    Rng grng(16, 0);
    const auto g = sample_tanner(10, 3, 6, grng);
    const auto ef = echelon_form(g.parity_matrix(), 8);
    const std::size_t dim = 10 - ef.rank;
    REQUIRE(dim >= 4);
    REQUIRE(dim <= 6);
    const std::size_t cells = std::size_t(1) << dim;
    std::map<std::uint64_t, int> counts;
    Rng draw(17, 0);
    const int n = 100000;
    for (int t = 0; t < n; ++t) {
        const Gf2Vec v = sample_nullspace(ef, draw);
        counts[v.words()[0]] += 1;
    }
    CHECK(counts.size() == cells);
    const double expect = double(n) / double(cells);
    double chi2 = 0;
    for (const auto& [key, c] : counts) chi2 += (c - expect) * (c - expect) / expect;
    CHECK(chi2 < testutil::chi2_critical(double(cells - 1)));
}

TEST_CASE("elimination handles the wide sparse shape used by decoding") {
    Rng rng(19, 0);
    const auto g = sample_tanner(600, 3, 6, rng);
    const auto H = g.parity_matrix();
    const auto ef = echelon_form(H, 8);
    check_echelon(ef);
    // A (3,6) parity matrix loses at most a few ranks to dependencies.
    CHECK(ef.rank >= 290);
    CHECK(ef.rank <= 300);
    Rng draw(20, 0);
    for (int t = 0; t < 20; ++t) CHECK(in_nullspace(H, sample_nullspace(ef, draw)));
}

}  // TEST_SUITE
