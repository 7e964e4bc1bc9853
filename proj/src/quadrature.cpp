#include "twrde/quadrature.hpp"

#include <cmath>

#include "twrde/error.hpp"

namespace twrde {

namespace {

struct Simpson {
    const std::function<double(double)>& f;
    int max_depth;

    double recurse(double a, double b, double fa, double fm, double fb, double tol,
                   int depth) const {
        double m = 0.5 * (a + b);
        double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        double flm = f(lm), frm = f(rm);
        // Recompute the coarse estimate with this interval's own width; a
        // rounded midpoint makes the parent's halves unequal, and reusing the
        // parent's value would leave delta a constant f*ulp floor that the
        // halving tolerance eventually dives under.
        double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        double h6 = (b - a) / 12.0;
        double left = h6 * (fa + 4.0 * flm + fm);
        double right = h6 * (fm + 4.0 * frm + fb);
        double delta = left + right - whole;
        if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
        if (m <= a || m >= b) return left + right + delta / 15.0;
        if (depth >= max_depth)
            throw Error("quadrature-failure", "adaptive Simpson depth limit reached");
        return recurse(a, m, fa, flm, fm, 0.5 * tol, depth + 1) +
               recurse(m, b, fm, frm, fb, 0.5 * tol, depth + 1);
    }

    double run(double a, double b, double tol) const {
        double m = 0.5 * (a + b);
        return recurse(a, b, f(a), f(m), f(b), tol, 0);
    }
};

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 int max_depth) {
    if (a == b) return 0.0;
    return Simpson{f, max_depth}.run(a, b, abs_tol);
}

double integrate_panels(const std::function<double(double)>& f,
                        const std::vector<double>& points, double abs_tol, int max_depth) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (points[i + 1] <= points[i])
            throw Error("quadrature-failure", "breakpoints must be strictly increasing");
        total += integrate(f, points[i], points[i + 1],
                           abs_tol / double(points.size() - 1), max_depth);
    }
    return total;
}

}  // namespace twrde
