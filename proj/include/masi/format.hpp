#pragma once

#include <charconv>
#include <string>

namespace masi {

/// Shortest round-trip decimal form, locale-independent.
inline std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace masi
