#pragma once

#include <string>
#include <vector>

namespace twrde {

// (d_l, d_r)-regular ensemble; k = d_r/d_l must be integral for the coupled
// construction, and we keep the same requirement here for uniformity.
struct RegularEnsemble {
    int dl, dr;

    double design_rate() const { return 1.0 - double(dl) / double(dr); }
};

RegularEnsemble make_regular(int dl, int dr);

// Spatially coupled protograph: L bundles of k = d_r/d_l variables each,
// check positions a = -dhat+1 .. L+dhat with dhat = (d_l-1)/2, bundle i
// connected to every check within distance dhat.  `mult` is the number of
// sockets one variable of the bundle sends to that check position (1 for the
// coupled chain; d_l for the single-position uncoupled graph).
struct ScProtograph {
    struct Neighbor {
        int index;  // check index for bundles, bundle index for checks
        int mult;
    };

    int dl, dr, L;
    int k, dhat;
    int label_lo;  // check label of index 0

    std::vector<std::vector<Neighbor>> bundle_checks;  // [L]
    std::vector<std::vector<Neighbor>> check_bundles;  // [num_checks]

    int num_checks() const { return int(check_bundles.size()); }
    int check_label(int c) const { return label_lo + c; }
    int check_degree(int c) const;
    int num_variables() const { return k * L; }
    int num_edges() const;  // variable sockets = check sockets

    // 1 - num_checks/(k L); can be <= 0 for tiny L.
    double design_rate() const;
    bool degenerate_rate() const { return !(design_rate() > 0.0); }

    std::string describe_json() const;
};

ScProtograph make_sc(int dl, int dr, int L);

// One bundle, one check taking all d_l sockets of each variable; protograph
// density evolution on this graph must match the regular recursion.
ScProtograph make_uncoupled(int dl, int dr);

double design_rate(const ScProtograph& p);

}  // namespace twrde
