#pragma once

// Deterministic emission helpers: all floats are printed with 12
// significant digits so identical runs produce byte-identical files.

#include <cstdio>
#include <string>

namespace totvar {

inline std::string fmt_float(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace totvar
