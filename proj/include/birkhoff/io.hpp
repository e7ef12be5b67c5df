#pragma once

// Locale-independent numeric formatting.  CSV output uses 12 significant
// digits; config round-trips use the shortest representation that parses
// back to the same double.

#include <charconv>
#include <string>
#include <system_error>

namespace birkhoff {

inline std::string format_csv_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

inline std::string format_roundtrip_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace birkhoff
