#pragma once

#include <cstdint>
#include <vector>

#include "twrde/gf2.hpp"
#include "twrde/rng.hpp"

namespace twrde {

// Finite (dl, dr)-regular bipartite graph.  Edges are stored check-grouped:
// check c owns edge ids [c*dr, (c+1)*dr).
struct TannerGraph {
    int n = 0, m = 0;
    int dl = 0, dr = 0;
    std::vector<std::uint32_t> edge_var;                // per edge: variable id
    std::vector<std::vector<std::uint32_t>> var_edges;  // per variable: its dl edge ids
    bool repair_incomplete = false;  // parallel edges survived the swap budget

    std::size_t num_edges() const { return edge_var.size(); }
    Gf2Matrix parity_matrix() const;  // m x n; parallel edge pairs cancel
};

// Configuration-model draw: a uniform random matching of variable sockets to
// check sockets, followed by local swaps that try to clear parallel edges.
TannerGraph sample_tanner(int n, int dl, int dr, Rng& rng, int repair_passes = 100);

}  // namespace twrde
