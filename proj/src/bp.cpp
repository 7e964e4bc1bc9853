#include "twrde/bp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "twrde/error.hpp"
#include "twrde/kernels.hpp"
#include "twrde/mathx.hpp"

namespace twrde {

namespace {

bool syndrome_zero(const TannerGraph& g, const std::vector<std::uint8_t>& z) {
    for (std::size_t c = 0; c < std::size_t(g.m); ++c) {
        std::uint8_t acc = 0;
        for (std::size_t e = c * std::size_t(g.dr); e < (c + 1) * std::size_t(g.dr); ++e)
            acc ^= z[g.edge_var[e]];
        if (acc) return false;
    }
    return true;
}

std::size_t count_errors(const std::vector<std::uint8_t>& z,
                         const std::vector<std::uint8_t>& truth) {
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < z.size(); ++i) cnt += z[i] != truth[i];
    return cnt;
}

}  // namespace

BpResult bp_decode(const TannerGraph& g, std::span<const double> llr, int max_iters,
                   const std::vector<std::uint8_t>* truth, double clip_bound) {
    const std::size_t n = std::size_t(g.n), edges = g.num_edges();
    if (llr.size() != n) throw Error("size-mismatch", "llr length must equal n");
    if (max_iters < 1) throw Error("invalid-argument", "max_iters must be >= 1");

    BpResult res;
    std::vector<std::uint8_t> z(n);
    for (std::size_t v = 0; v < n; ++v) z[v] = llr[v] < 0.0;
    res.stopped_at = 1;
    if (truth) res.errors_per_iter.push_back(count_errors(z, *truth));
    res.syndrome_ok = syndrome_zero(g, z);

    if (!res.syndrome_ok && max_iters > 1) {
        const auto& kt = kern::active();
        std::vector<double> v2c(edges), c2v(edges), tnh(edges), prod(edges);
        for (std::size_t v = 0; v < n; ++v)
            for (std::uint32_t e : g.var_edges[v]) v2c[e] = clip(llr[v], clip_bound);

        for (int iter = 2; iter <= max_iters; ++iter) {
            kt.tanh_half(v2c.data(), tnh.data(), edges);
            for (std::size_t c = 0; c < std::size_t(g.m); ++c) {
                std::size_t base = c * std::size_t(g.dr);
                // leave-one-out products via prefix and suffix sweeps
                double pre = 1.0;
                for (std::size_t s = 0; s < std::size_t(g.dr); ++s) {
                    prod[base + s] = pre;
                    pre *= tnh[base + s];
                }
                double suf = 1.0;
                for (std::size_t s = std::size_t(g.dr); s-- > 0;) {
                    prod[base + s] *= suf;
                    suf *= tnh[base + s];
                }
            }
            kt.atanh2_clip(prod.data(), c2v.data(), edges, clip_bound);

            for (std::size_t v = 0; v < n; ++v) {
                double sum = llr[v];
                for (std::uint32_t e : g.var_edges[v]) sum += c2v[e];
                z[v] = sum < 0.0;
                for (std::uint32_t e : g.var_edges[v]) v2c[e] = clip(sum - c2v[e], clip_bound);
            }
            res.stopped_at = iter;
            if (truth) res.errors_per_iter.push_back(count_errors(z, *truth));
            if (syndrome_zero(g, z)) {
                res.syndrome_ok = true;
                break;
            }
        }
    }
    if (truth && !res.errors_per_iter.empty())
        res.errors_per_iter.resize(std::size_t(max_iters), res.errors_per_iter.back());
    res.decision = std::move(z);
    return res;
}

namespace {

double word_score(const Gf2Vec& zv, std::span<const double> llr) {
    double s = 0.0;
    for (std::size_t w = 0; w < zv.word_count(); ++w) {
        std::uint64_t bits = zv.words()[w];
        while (bits) {
            std::size_t t = 64 * w + std::size_t(std::countr_zero(bits));
            s += llr[t];
            bits &= bits - 1;
        }
    }
    return s;
}

bool lex_less(const Gf2Vec& a, const Gf2Vec& b) {
    for (std::size_t w = 0; w < a.word_count(); ++w) {
        std::uint64_t diff = a.words()[w] ^ b.words()[w];
        if (diff) return !((a.words()[w] >> std::countr_zero(diff)) & 1u);
    }
    return false;
}

}  // namespace

std::vector<std::uint8_t> ml_decode_exhaustive(const TannerGraph& g, std::span<const double> llr,
                                               std::size_t max_dim) {
    if (llr.size() != std::size_t(g.n)) throw Error("size-mismatch", "llr length must equal n");
    auto ef = echelon_form(g.parity_matrix());
    auto basis = nullspace_basis(ef, max_dim);
    std::size_t dim = basis.size();

    // Likelihood of a word is a constant minus the LLR mass on its support,
    // so ML minimizes word_score.
    Gf2Vec cur(std::size_t(g.n));
    Gf2Vec best = cur;
    double best_score = 0.0;
    for (std::size_t i = 1; i < (std::size_t(1) << dim); ++i) {
        cur.xor_with(basis[std::size_t(std::countr_zero(i))]);
        double s = word_score(cur, llr);
        if (s < best_score || (s == best_score && lex_less(cur, best))) {
            best_score = s;
            best = cur;
        }
    }
    std::vector<std::uint8_t> out(std::size_t(g.n));
    for (std::size_t t = 0; t < out.size(); ++t) out[t] = best.get(t);
    return out;
}

std::vector<double> transmit(const Gf2Vec& xa, const Gf2Vec& xb, const ChannelParams& ch,
                             Rng& rng) {
    if (xa.size() != xb.size()) throw Error("size-mismatch", "codeword lengths differ");
    std::vector<double> y(xa.size());
    for (std::size_t t = 0; t < y.size(); ++t) {
        double sa = xa.get(t) ? -1.0 : 1.0;
        double sb = xb.get(t) ? -1.0 : 1.0;
        y[t] = sa + sb + ch.sigma * rng.next_gaussian();
    }
    return y;
}

McResult monte_carlo_ber(int n, int dl, int dr, double sigma, int trials, int iters,
                         std::uint64_t seed) {
    if (trials < 1 || iters < 1) throw Error("invalid-argument", "trials and iters must be >= 1");
    ChannelParams ch(sigma);
    McResult res;
    res.trials = trials;
    res.n = n;
    std::vector<std::vector<double>> per_trial(std::size_t(trials),
                                               std::vector<double>(std::size_t(iters), 0.0));
    int block_errors = 0;

    for (int trial = 0; trial < trials; ++trial) {
        Rng rng(seed, (std::uint64_t(4) << 56) | (std::uint64_t(trial) << 8));
        TannerGraph g = sample_tanner(n, dl, dr, rng);
        res.graphs_flagged += g.repair_incomplete;

        Gf2Vec z, xa;
        {
            auto ef = echelon_form(g.parity_matrix());
            z = sample_nullspace(ef, rng);
            xa = sample_nullspace(ef, rng);
        }
        Gf2Vec xb = xa;
        xb.xor_with(z);

        std::vector<double> y = transmit(xa, xb, ch, rng);
        std::vector<double> lam(y.size());
        ch.llr_batch(y, lam);
        std::vector<std::uint8_t> truth(std::size_t(n), 0);
        for (std::size_t t = 0; t < truth.size(); ++t) truth[t] = z.get(t);

        BpResult bp = bp_decode(g, lam, iters, &truth);
        for (std::size_t l = 0; l < std::size_t(iters); ++l)
            per_trial[std::size_t(trial)][l] = double(bp.errors_per_iter[l]) / double(n);
        block_errors += bp.decision != truth;
    }

    // Bit errors cluster within a trial (shared graph, codeword pair, noise),
    // so the between-trial spread sets the error bar; the pooled binomial term
    // is a floor, not an estimate.
    double denom = double(n) * double(trials);
    for (std::size_t l = 0; l < std::size_t(iters); ++l) {
        double mean = 0.0;
        for (int t = 0; t < trials; ++t) mean += per_trial[std::size_t(t)][l];
        mean /= double(trials);
        double se = std::sqrt(mean * (1.0 - mean) / denom);
        if (trials >= 2) {
            double ss = 0.0;
            for (int t = 0; t < trials; ++t) {
                double d = per_trial[std::size_t(t)][l] - mean;
                ss += d * d;
            }
            se = std::max(se, std::sqrt(ss / double(trials - 1) / double(trials)));
        }
        res.ber.push_back(mean);
        res.ber_se.push_back(se);
    }
    res.fer = double(block_errors) / double(trials);
    res.fer_se = std::sqrt(res.fer * (1.0 - res.fer) / double(trials));
    return res;
}

}  // namespace twrde
