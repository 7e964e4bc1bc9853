#pragma once

#include <span>
#include <vector>

#include "twrde/channel.hpp"
#include "twrde/gf2.hpp"
#include "twrde/rng.hpp"
#include "twrde/tanner.hpp"
#include "twrde/version.hpp"

namespace twrde {

struct BpResult {
    std::vector<std::uint8_t> decision;  // final hard decision on the sum word
    bool syndrome_ok = false;
    int stopped_at = 0;  // iterations actually evaluated (early stop freezes the rest)
    std::vector<std::size_t> errors_per_iter;  // vs truth when supplied, else empty
};

// Flooding sum-product for the modular sum.  Iteration 1 is the hard decision
// on the channel LLRs alone; iteration l >= 2 follows l-1 message sweeps, so
// decoder iterations line up one-to-one with density-evolution iterations.
BpResult bp_decode(const TannerGraph& g, std::span<const double> llr, int max_iters,
                   const std::vector<std::uint8_t>* truth = nullptr,
                   double clip_bound = kClipBound);

// Exhaustive maximum likelihood over the null space (meant for tiny codes);
// ties break toward the lexicographically smallest word, index 0 first.
std::vector<std::uint8_t> ml_decode_exhaustive(const TannerGraph& g, std::span<const double> llr,
                                               std::size_t max_dim = 20);

// y_t = mu(xa_t) + mu(xb_t) + noise, the physical superposition the relay sees.
std::vector<double> transmit(const Gf2Vec& xa, const Gf2Vec& xb, const ChannelParams& ch,
                             Rng& rng);

struct McResult {
    int trials = 0;
    int n = 0;
    std::vector<double> ber;  // per iteration, 1-based off by one
    std::vector<double> ber_se;
    double fer = 0.0, fer_se = 0.0;
    int graphs_flagged = 0;  // samples whose parallel-edge repair gave up
};

// Fresh graph and codeword pair per trial; the relay decodes the sum word.
McResult monte_carlo_ber(int n, int dl, int dr, double sigma, int trials, int iters,
                         std::uint64_t seed);

}  // namespace twrde
