#pragma once

#include <functional>
#include <vector>

namespace twrde {

// Adaptive Simpson integration.  Throws Error("quadrature-failure") when the
// recursion depth limit is hit before the tolerance is met.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-10, int max_depth = 48);

// Same, with the interval pre-split at interior breakpoints (density peaks).
double integrate_panels(const std::function<double(double)>& f,
                        const std::vector<double>& points, double abs_tol = 1e-10,
                        int max_depth = 48);

}  // namespace twrde
