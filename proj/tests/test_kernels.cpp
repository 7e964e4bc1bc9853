#include "doctest.h"
#include "test_util.hpp"
#include "twrde/kernels.hpp"
#include "twrde/mathx.hpp"
#include "twrde/rng.hpp"
#include "twrde/version.hpp"

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

using namespace twrde;

namespace {

std::vector<double> wild_inputs() {
    // Edge cases plus a dense random sweep across the ranges the pipeline sees.
    std::vector<double> xs = {0.0,   -0.0,  1e-300, -1e-300, 1e-12, -1e-12, 0.5,  -0.5,
                              1.0,   -1.0,  2.0,    -2.0,    10.0,  -10.0,  49.9, -49.9,
                              50.0,  -50.0, 100.0,  -100.0,  700.0, -700.0, 1e6,  -1e6};
    Rng r(1, 0);
    for (int i = 0; i < 4096; ++i) xs.push_back((r.next_double() - 0.5) * 120.0);
    for (int i = 0; i < 512; ++i) xs.push_back((r.next_double() - 0.5) * 2e-6);
    return xs;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("check combine of two unit messages matches an independent formula") {
    const double p = sq(std::tanh(0.5));
    // 2 atanh(p) via the log identity rather than std::atanh.
    const double want = std::log((1.0 + p) / (1.0 - p));
    const double got = check_update_sample(std::vector<double>{1.0, 1.0});
    CHECK(got == doctest::Approx(want).epsilon(1e-13));
    CHECK(std::abs(got - 0.433781) < 1e-6);  // frozen reference value
}

TEST_CASE("a zero incoming message forces an exactly zero check message") {
    CHECK(check_update_sample(std::vector<double>{0.0, 5.0}) == 0.0);
    CHECK(check_update_sample(std::vector<double>{3.0, 0.0, -7.0}) == 0.0);
}

TEST_CASE("check combine obeys the sign product rule") {
    Rng r(42, 0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> msgs(5);
        int neg = 0;
        for (auto& m : msgs) {
            m = (r.next_double() - 0.5) * 20.0;
            neg += m < 0;
        }
        const double out = check_update_sample(msgs);
        if (out != 0.0) CHECK(std::signbit(out) == (neg % 2 == 1));
    }
}

TEST_CASE("check combine magnitude never exceeds the weakest input") {
    Rng r(43, 0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> msgs(4);
        double weakest = 1e300;
        for (auto& m : msgs) {
            m = (r.next_double() - 0.5) * 20.0;
            weakest = std::min(weakest, std::abs(m));
        }
        CHECK(std::abs(check_update_sample(msgs)) <= weakest + 1e-12);
    }
}

TEST_CASE("atanh2 guard caps saturated products below the clip bound") {
    const double cap = 2.0 * std::atanh(1.0 - kAtanhGuard);
    CHECK(atanh2_clipped(1.0) == doctest::Approx(cap));
    CHECK(atanh2_clipped(-1.0) == doctest::Approx(-cap));
    CHECK(cap < kClipBound);
    CHECK(atanh2_clipped(0.9, 0.1) == 0.1);  // clip still applies
}

TEST_CASE("scalar kernels agree with direct formulas") {
    const auto& k = kern::scalar_table();
    CHECK(std::string(k.name) == "scalar");
    auto xs = wild_inputs();
    std::vector<double> out(xs.size());

    k.tanh_half(xs.data(), out.data(), xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) CHECK(out[i] == std::tanh(0.5 * xs[i]));

    std::vector<double> ps;
    for (double x : xs) ps.push_back(std::tanh(0.5 * x));
    out.assign(ps.size(), 0.0);
    k.atanh2_clip(ps.data(), out.data(), ps.size(), kClipBound);
    for (std::size_t i = 0; i < ps.size(); ++i) CHECK(out[i] == atanh2_clipped(ps[i]));

    const double c = 2.0 / sq(0.8);
    out.assign(xs.size(), 0.0);
    k.llr_map(xs.data(), out.data(), xs.size(), c);
    for (std::size_t i = 0; i < xs.size(); ++i) CHECK(out[i] == lncosh(c * xs[i]) - c);
}

TEST_CASE("avx2 kernels match scalar within pinned tolerances") {
    if (!kern::avx2_supported()) {
        MESSAGE("avx2 not available on this host; skipping");
        return;
    }
    const auto& sc = kern::scalar_table();
    const auto& vx = kern::avx2_table();
    CHECK(std::string(vx.name) == "avx2");
    auto xs = wild_inputs();
    const std::size_t n = xs.size();
    std::vector<double> a(n), b(n);

    auto close = [&](double u, double v) {
        const double tol = 1e-13 + 1e-12 * std::abs(u);
        CHECK(std::abs(u - v) <= tol);
    };

    SUBCASE("tanh_half") {
        sc.tanh_half(xs.data(), a.data(), n);
        vx.tanh_half(xs.data(), b.data(), n);
        for (std::size_t i = 0; i < n; ++i) close(a[i], b[i]);
    }
    SUBCASE("atanh2_clip") {
        std::vector<double> ps(n);
        sc.tanh_half(xs.data(), ps.data(), n);
        ps.push_back(1.0);
        ps.push_back(-1.0);
        ps.push_back(0.999999999);
        a.resize(ps.size());
        b.resize(ps.size());
        sc.atanh2_clip(ps.data(), a.data(), ps.size(), kClipBound);
        vx.atanh2_clip(ps.data(), b.data(), ps.size(), kClipBound);
        for (std::size_t i = 0; i < ps.size(); ++i) close(a[i], b[i]);
    }
    SUBCASE("llr_map") {
        for (double sigma : {0.3, 0.7, 1.0, 2.5}) {
            const double c = 2.0 / sq(sigma);
            sc.llr_map(xs.data(), a.data(), n, c);
            vx.llr_map(xs.data(), b.data(), n, c);
            for (std::size_t i = 0; i < n; ++i) close(a[i], b[i]);
        }
    }
    SUBCASE("gathers and clip are bit exact") {
        Rng r(4, 0);
        const std::size_t tn = 1000;
        std::vector<double> tab(tn);
        for (auto& t : tab) t = (r.next_double() - 0.5) * 4.0;
        std::vector<std::uint32_t> idx(n);
        for (auto& i : idx) i = static_cast<std::uint32_t>(r.next_index(tn));
        std::vector<double> accA(n), accB(n);
        for (std::size_t i = 0; i < n; ++i) accA[i] = accB[i] = xs[i];
        sc.gather_mul(tab.data(), idx.data(), accA.data(), n);
        vx.gather_mul(tab.data(), idx.data(), accB.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(accA[i] == accB[i]);
        sc.gather_add(tab.data(), idx.data(), accA.data(), n);
        vx.gather_add(tab.data(), idx.data(), accB.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(accA[i] == accB[i]);
        sc.clip(accA.data(), n, 3.5);
        vx.clip(accB.data(), n, 3.5);
        for (std::size_t i = 0; i < n; ++i) CHECK(accA[i] == accB[i]);
    }
}

TEST_CASE("avx2 llr_map stays finite and even far in the tails") {
    if (!kern::avx2_supported()) return;
    const auto& vx = kern::avx2_table();
    const double c = 2.0;
    std::vector<double> ys = {1e5, -1e5, 1e6, -1e6, 350.0, -350.0};
    std::vector<double> out(ys.size());
    vx.llr_map(ys.data(), out.data(), ys.size(), c);
    for (std::size_t i = 0; i + 1 < ys.size(); i += 2) {
        CHECK(std::isfinite(out[i]));
        CHECK(out[i] == out[i + 1]);
        CHECK(out[i] == doctest::Approx(c * std::abs(ys[i]) - kLn2 - c));
    }
}

TEST_CASE("kernel selection switches the active table") {
    REQUIRE(kern::select("scalar"));
    CHECK(std::string(kern::active().name) == "scalar");
    const bool have = kern::avx2_supported();
    CHECK(kern::select("avx2") == have);
    if (have) CHECK(std::string(kern::active().name) == "avx2");
    CHECK_FALSE(kern::select("sse9"));
    REQUIRE(kern::select("auto"));
    if (have) CHECK(std::string(kern::active().name) == "avx2");
}

}  // TEST_SUITE
