#pragma once

#include <cmath>
#include <cstdint>

namespace twrde {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t x = (state += 0x9e3779b97f4a7c15ULL);
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// xoshiro256++ with splitmix64 seeding.  `stream` selects a decorrelated
// substream of the same seed; engines assign one stream per population so
// results do not depend on thread count or update order.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t sm = seed + stream * 0x9e3779b97f4a7c15ULL;
        for (auto& word : s_) word = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    bool next_bit() { return next_u64() >> 63; }

    // Uniform in [0, n); Lemire multiply-shift (bias < 2^-64, ignored).
    std::uint32_t next_index(std::uint32_t n) {
        return std::uint32_t((unsigned __int128)(next_u64()) * n >> 64);
    }

    // Standard normal via the polar method; the spare deviate is cached so
    // draw parity stays deterministic per stream.
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * next_double() - 1.0;
            v = 2.0 * next_double() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace twrde
