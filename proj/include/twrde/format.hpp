#pragma once

#include <cstdio>
#include <string>

namespace twrde {

// Round-trip-exact decimal form; all serialized reals go through this so
// repeated runs are byte-identical.
inline std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace twrde
