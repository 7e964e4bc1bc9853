#include "twrde/ensemble.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"
#include "twrde/error.hpp"

namespace twrde {

namespace {

void check_degrees(int dl, int dr) {
    if (dl < 2 || dr <= dl)
        throw Error("invalid-degree", "need 2 <= dl < dr");
    if (dr % dl != 0)
        throw Error("invalid-degree", "dr must be a multiple of dl");
}

}  // namespace

RegularEnsemble make_regular(int dl, int dr) {
    check_degrees(dl, dr);
    return RegularEnsemble{dl, dr};
}

int ScProtograph::check_degree(int c) const {
    int sockets = 0;
    for (const auto& nb : check_bundles.at(c)) sockets += nb.mult;
    return k * sockets;
}

int ScProtograph::num_edges() const {
    int total = 0;
    for (int c = 0; c < num_checks(); ++c) total += check_degree(c);
    return total;
}

double ScProtograph::design_rate() const {
    return 1.0 - double(num_checks()) / double(k * L);
}

double design_rate(const ScProtograph& p) { return p.design_rate(); }

ScProtograph make_sc(int dl, int dr, int L) {
    check_degrees(dl, dr);
    if (dl % 2 == 0)
        throw Error("invalid-degree", "coupled construction needs odd dl");
    if (L < 1)
        throw Error("invalid-chain", "need L >= 1");

    ScProtograph p;
    p.dl = dl;
    p.dr = dr;
    p.L = L;
    p.k = dr / dl;
    p.dhat = (dl - 1) / 2;
    p.label_lo = -p.dhat + 1;

    int num_checks = L + 2 * p.dhat;
    p.bundle_checks.resize(L);
    p.check_bundles.resize(num_checks);
    for (int c = 0; c < num_checks; ++c) {
        int label = p.label_lo + c;
        int first = std::max(1, label - p.dhat);
        int last = std::min(L, label + p.dhat);
        for (int i = first; i <= last; ++i) {
            p.check_bundles[c].push_back({i - 1, 1});
            p.bundle_checks[i - 1].push_back({c, 1});
        }
    }
    return p;
}

ScProtograph make_uncoupled(int dl, int dr) {
    check_degrees(dl, dr);
    ScProtograph p;
    p.dl = dl;
    p.dr = dr;
    p.L = 1;
    p.k = dr / dl;
    p.dhat = 0;
    p.label_lo = 1;
    p.bundle_checks = {{{0, dl}}};
    p.check_bundles = {{{0, dl}}};
    return p;
}

std::string ScProtograph::describe_json() const {
    nlohmann::json j;
    j["dl"] = dl;
    j["dr"] = dr;
    j["L"] = L;
    j["k"] = k;
    j["coupling_width"] = dhat;
    j["num_variables"] = num_variables();
    j["num_checks"] = num_checks();
    j["num_edges"] = num_edges();
    j["design_rate"] = design_rate();
    j["degenerate_rate"] = degenerate_rate();
    auto checks = nlohmann::json::array();
    for (int c = 0; c < num_checks(); ++c) {
        nlohmann::json jc;
        jc["label"] = check_label(c);
        jc["degree"] = check_degree(c);
        auto bundles = nlohmann::json::array();
        for (const auto& nb : check_bundles[c])
            bundles.push_back({{"bundle", nb.index + 1}, {"mult", nb.mult}});
        jc["bundles"] = bundles;
        checks.push_back(jc);
    }
    j["checks"] = checks;
    return j.dump(2);
}

}  // namespace twrde
