#include "ptbench/format.hpp"

#include <cstdio>

namespace ptbench {

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace ptbench
