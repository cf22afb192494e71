#pragma once

#include <charconv>
#include <cstdio>
#include <ostream>
#include <string>
#include <system_error>

namespace rcmoves {

// Shortest decimal string that parses back to exactly the same double;
// used for JSON artifacts so cached values round-trip bit for bit.
inline std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Plain decimal (never scientific) for the CSV schema; shortest fixed-point
// form that round-trips exactly for the bounded magnitudes we emit.
inline std::string format_plain(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed);
    if (res.ec != std::errc()) {
        // Magnitude too large for the buffer; fall back to maximum precision.
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return buf;
    }
    return std::string(buf, res.ptr);
}

// Streams a flat JSON number array without building a DOM; the bulk
// artifacts (reservoir states, conceptor eigenvectors) are written this way.
inline void write_number_array(std::ostream& out, const double* data, std::size_t count) {
    out << '[';
    for (std::size_t i = 0; i < count; ++i) {
        if (i > 0) {
            out << ',';
        }
        out << format_double(data[i]);
    }
    out << ']';
}

}  // namespace rcmoves
