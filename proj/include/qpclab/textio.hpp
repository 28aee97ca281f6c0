#ifndef QPCLAB_TEXTIO_HPP
#define QPCLAB_TEXTIO_HPP

#include <cstdio>
#include <map>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpclab/bitpair.hpp"

namespace qpclab {

/// Fixed-precision decimal rendering; used everywhere a float reaches an
/// output file so that identical runs produce identical bytes.
inline std::string format_fixed(double v, int precision = 6) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
    return buf;
}

inline std::string join_pairs(std::span<const BitPair> pairs) {
    std::string out;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (i > 0) out += ' ';
        out += pairs[i].str();
    }
    return out;
}

inline std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string current;
    for (char c : text) {
        if (c == sep) {
            parts.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    parts.push_back(current);
    return parts;
}

inline std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

/// Parses a flat key=value config document. Blank lines and lines starting
/// with '#' are skipped; later duplicates win.
inline std::map<std::string, std::string> parse_kv_file(const std::string& content) {
    std::map<std::string, std::string> out;
    std::istringstream in(content);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key=value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
        out[key] = value;
    }
    return out;
}

} // namespace qpclab

#endif // QPCLAB_TEXTIO_HPP
