#pragma once

#include <utility>
#include <vector>

#include "twrde/de.hpp"

namespace twrde {

struct ProbeRecord {
    double sigma;
    bool decodable;
    int iters_run;
    int decoded_at;
};

struct ThresholdResult {
    double lower = 0.0;    // largest sigma observed decodable
    double upper = 0.0;    // smallest sigma observed undecodable
    double estimate = 0.0; // bracket midpoint
    std::vector<ProbeRecord> probes;
    DeTrace lower_trace, upper_trace;  // witness runs at the final bracket
};

bool is_decodable(const DeTrace& trace);

// Bisects the decodability boundary in sigma.  The initial bracket must
// separate (lo decodable, hi not); each side is widened once before giving up
// with Error("bracket-failure").
ThresholdResult bp_threshold(const RegularEnsemble& e, const DeConfig& cfg, double lo,
                             double hi, double tol);
ThresholdResult bp_threshold(const ScProtograph& p, const DeConfig& cfg, double lo, double hi,
                             double tol);

struct ExtrapolationResult {
    double sigma_inf = 0.0;  // intercept of sigma*(L) ~ sigma_inf + slope/L
    double slope = 0.0;
    std::vector<double> residuals;
};

// Least-squares fit of sigma* against 1/L; needs >= 3 points spanning more
// than one L, else Error("degenerate-fit").
ExtrapolationResult extrapolate_threshold(const std::vector<std::pair<int, double>>& points);

}  // namespace twrde
