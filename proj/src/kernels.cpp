#include "twrde/kernels.hpp"

namespace twrde::kern {

namespace {

const KernelTable* g_active = nullptr;

const KernelTable& best() { return avx2_supported() ? avx2_table() : scalar_table(); }

}  // namespace

const KernelTable& active() {
    if (!g_active) g_active = &best();
    return *g_active;
}

bool select(std::string_view name) {
    if (name == "auto") {
        g_active = &best();
        return true;
    }
    if (name == "scalar") {
        g_active = &scalar_table();
        return true;
    }
    if (name == "avx2") {
        if (!avx2_supported()) return false;
        g_active = &avx2_table();
        return true;
    }
    return false;
}

}  // namespace twrde::kern
