#pragma once

#include <charconv>
#include <stdexcept>
#include <string>

namespace ultratree {

/// Shortest decimal text that parses back to exactly the same double.
inline std::string format_value(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc{}) throw std::runtime_error("cannot format value");
    return std::string(buf, res.ptr);
}

}  // namespace ultratree
