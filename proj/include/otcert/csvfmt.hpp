#pragma once

#include <charconv>
#include <cmath>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include "otcert/bounds.hpp"

namespace otcert {

/// Shortest decimal that round-trips to the same double. -0 prints as 0,
/// infinities as inf / -inf. Byte-stable across runs.
inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) return "0";
    char buf[64];
    std::to_chars_result res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

/// Fixed-point with the given number of decimals (used by the table
/// reproduction printout).
inline std::string format_fixed(double x, int decimals) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) x = 0.0;  // normalize -0
    char buf[64];
    std::to_chars_result res =
        std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::fixed, decimals);
    return std::string(buf, res.ptr);
}

inline std::string format_horizon(const Horizon& h) {
    return h.infinite ? "inf" : std::to_string(h.steps);
}

/// RFC-4180-style escaping: quote only when the field contains a comma,
/// quote, or newline.
inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os << ',';
        os << csv_escape(fields[i]);
    }
    os << '\n';
}

}  // namespace otcert
