#include "twrde/tanner.hpp"

#include <algorithm>

#include "twrde/error.hpp"

namespace twrde {

namespace {

// True if the variable on edge `e` appears on another socket of its check.
bool has_twin(const TannerGraph& g, std::size_t e) {
    std::size_t c0 = (e / std::size_t(g.dr)) * std::size_t(g.dr);
    for (std::size_t e2 = c0; e2 < c0 + std::size_t(g.dr); ++e2)
        if (e2 != e && g.edge_var[e2] == g.edge_var[e]) return true;
    return false;
}

}  // namespace

TannerGraph sample_tanner(int n, int dl, int dr, Rng& rng, int repair_passes) {
    if (n < 1) throw Error("invalid-argument", "need n >= 1");
    if (dl < 2 || dr <= dl) throw Error("invalid-degree", "need 2 <= dl < dr");
    if ((std::size_t(n) * std::size_t(dl)) % std::size_t(dr) != 0)
        throw Error("size-mismatch", "n*dl must be divisible by dr");

    TannerGraph g;
    g.n = n;
    g.dl = dl;
    g.dr = dr;
    g.m = int(std::size_t(n) * std::size_t(dl) / std::size_t(dr));

    std::size_t edges = std::size_t(n) * std::size_t(dl);
    g.edge_var.resize(edges);
    for (std::size_t e = 0; e < edges; ++e) g.edge_var[e] = std::uint32_t(e / std::size_t(dl));
    // Fisher-Yates on the socket list = uniform matching.
    for (std::size_t e = edges; e > 1; --e) {
        std::size_t j = rng.next_index(std::uint32_t(e));
        std::swap(g.edge_var[e - 1], g.edge_var[j]);
    }

    // Swap a twinned socket with a random partner, keeping the swap only when
    // neither touched check ends up with a parallel edge.
    for (int pass = 0; pass < repair_passes; ++pass) {
        bool any = false;
        for (std::size_t e = 0; e < edges; ++e) {
            if (!has_twin(g, e)) continue;
            any = true;
            for (int attempt = 0; attempt < 32; ++attempt) {
                std::size_t e2 = rng.next_index(std::uint32_t(edges));
                if (e2 / std::size_t(dr) == e / std::size_t(dr)) continue;
                std::swap(g.edge_var[e], g.edge_var[e2]);
                if (!has_twin(g, e) && !has_twin(g, e2)) break;
                std::swap(g.edge_var[e], g.edge_var[e2]);
            }
        }
        if (!any) break;
    }
    for (std::size_t e = 0; e < edges && !g.repair_incomplete; ++e)
        if (has_twin(g, e)) g.repair_incomplete = true;

    g.var_edges.assign(std::size_t(n), {});
    for (auto& ve : g.var_edges) ve.reserve(std::size_t(dl));
    for (std::size_t e = 0; e < edges; ++e)
        g.var_edges[g.edge_var[e]].push_back(std::uint32_t(e));
    return g;
}

Gf2Matrix TannerGraph::parity_matrix() const {
    Gf2Matrix h{std::size_t(m), std::size_t(n)};
    for (std::size_t e = 0; e < edge_var.size(); ++e)
        h.flip(e / std::size_t(dr), edge_var[e]);
    return h;
}

}  // namespace twrde
