#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace twrde::kern {

// Array kernels behind the density-evolution and decoder inner loops.  The
// scalar table is the reference; SIMD variants must match it within the
// tolerances pinned in the equivalence tests (gathers and clip bit-exact).
struct KernelTable {
    const char* name;
    // out[i] = tanh(x[i] / 2)
    void (*tanh_half)(const double* x, double* out, std::size_t n);
    // out[i] = clip(2 atanh(guard(p[i])), bound)
    void (*atanh2_clip)(const double* p, double* out, std::size_t n, double bound);
    // out[i] = lncosh(c * y[i]) - c, the virtual-channel LLR map with c = 2/sigma^2
    void (*llr_map)(const double* y, double* out, std::size_t n, double c);
    // acc[i] *= tab[idx[i]]
    void (*gather_mul)(const double* tab, const std::uint32_t* idx, double* acc, std::size_t n);
    // acc[i] += tab[idx[i]]
    void (*gather_add)(const double* tab, const std::uint32_t* idx, double* acc, std::size_t n);
    // x[i] = clip(x[i], bound)
    void (*clip)(double* x, std::size_t n, double bound);
};

const KernelTable& scalar_table();
bool avx2_supported();
const KernelTable& avx2_table();  // valid only if avx2_supported()

// Active table: best supported ISA unless overridden.
const KernelTable& active();
bool select(std::string_view name);  // "auto" | "scalar" | "avx2"; false if unsupported

}  // namespace twrde::kern
