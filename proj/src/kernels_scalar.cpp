#include <cmath>

#include "twrde/kernels.hpp"
#include "twrde/mathx.hpp"

namespace twrde::kern {

namespace {

void tanh_half_s(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::tanh(0.5 * x[i]);
}

void atanh2_clip_s(const double* p, double* out, std::size_t n, double bound) {
    for (std::size_t i = 0; i < n; ++i) out[i] = atanh2_clipped(p[i], bound);
}

void llr_map_s(const double* y, double* out, std::size_t n, double c) {
    for (std::size_t i = 0; i < n; ++i) out[i] = lncosh(c * y[i]) - c;
}

void gather_mul_s(const double* tab, const std::uint32_t* idx, double* acc, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) acc[i] *= tab[idx[i]];
}

void gather_add_s(const double* tab, const std::uint32_t* idx, double* acc, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) acc[i] += tab[idx[i]];
}

void clip_s(double* x, std::size_t n, double bound) {
    for (std::size_t i = 0; i < n; ++i) x[i] = clip(x[i], bound);
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable t = {
        "scalar", tanh_half_s, atanh2_clip_s, llr_map_s, gather_mul_s, gather_add_s, clip_s,
    };
    return t;
}

}  // namespace twrde::kern
