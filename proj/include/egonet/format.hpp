#pragma once

#include <charconv>
#include <cstdio>
#include <string>

namespace egonet {

// Shortest round-trip decimal form (locale-independent).
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string format_fixed(double v, int precision) {
    char buf[64];
    const int n = std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
    return std::string(buf, buf + n);
}

} // namespace egonet
