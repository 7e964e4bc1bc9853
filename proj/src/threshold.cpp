#include "twrde/threshold.hpp"

#include <cmath>
#include <functional>

#include "twrde/error.hpp"
#include "twrde/format.hpp"

namespace twrde {

namespace {

using ProbeFn = std::function<DeTrace(double)>;

ThresholdResult bisect(const ProbeFn& probe, double lo, double hi, double tol) {
    if (!(lo > 0.0) || !(hi > lo)) throw Error("invalid-argument", "need 0 < lo < hi");
    if (!(tol > 0.0)) throw Error("invalid-argument", "tol must be positive");

    ThresholdResult res;
    auto run = [&](double sigma) {
        DeTrace tr = probe(sigma);
        res.probes.push_back({sigma, tr.decodable, tr.iters_run, tr.decoded_at});
        return tr;
    };

    // Bracket validation, with one widening attempt per side.
    double width = hi - lo;
    DeTrace lo_tr = run(lo);
    if (!lo_tr.decodable) {
        double lo2 = std::max(lo - width, 1e-6);
        lo_tr = run(lo2);
        if (!lo_tr.decodable)
            throw Error("bracket-failure",
                        "lower edge " + g17(lo) + " undecodable even after widening");
        lo = lo2;
    }
    DeTrace hi_tr = run(hi);
    if (hi_tr.decodable) {
        double hi2 = hi + width;
        hi_tr = run(hi2);
        if (hi_tr.decodable)
            throw Error("bracket-failure",
                        "upper edge " + g17(hi) + " decodable even after widening");
        hi = hi2;
    }

    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        DeTrace tr = run(mid);
        if (tr.decodable) {
            lo = mid;
            lo_tr = std::move(tr);
        } else {
            hi = mid;
            hi_tr = std::move(tr);
        }
    }
    res.lower = lo;
    res.upper = hi;
    res.estimate = 0.5 * (lo + hi);
    res.lower_trace = std::move(lo_tr);
    res.upper_trace = std::move(hi_tr);
    return res;
}

}  // namespace

bool is_decodable(const DeTrace& trace) { return trace.decodable; }

ThresholdResult bp_threshold(const RegularEnsemble& e, const DeConfig& cfg, double lo,
                             double hi, double tol) {
    return bisect([&](double sigma) { return de_run(e, ChannelParams(sigma), cfg); }, lo, hi,
                  tol);
}

ThresholdResult bp_threshold(const ScProtograph& p, const DeConfig& cfg, double lo, double hi,
                             double tol) {
    return bisect([&](double sigma) { return de_run(p, ChannelParams(sigma), cfg); }, lo, hi,
                  tol);
}

ExtrapolationResult extrapolate_threshold(const std::vector<std::pair<int, double>>& points) {
    if (points.size() < 3)
        throw Error("degenerate-fit", "need at least 3 (L, sigma*) points");
    double x0 = 1.0 / double(points.front().first);
    bool distinct = false;
    for (const auto& [L, s] : points) {
        (void)s;
        if (L < 1) throw Error("degenerate-fit", "L must be >= 1");
        if (1.0 / double(L) != x0) distinct = true;
    }
    if (!distinct) throw Error("degenerate-fit", "all points share the same L");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double n = double(points.size());
    for (const auto& [L, s] : points) {
        double x = 1.0 / double(L);
        sx += x;
        sy += s;
        sxx += x * x;
        sxy += x * s;
    }
    double denom = n * sxx - sx * sx;
    ExtrapolationResult res;
    res.slope = (n * sxy - sx * sy) / denom;
    res.sigma_inf = (sy - res.slope * sx) / n;
    for (const auto& [L, s] : points)
        res.residuals.push_back(s - (res.sigma_inf + res.slope / double(L)));
    return res;
}

}  // namespace twrde
