#pragma once

#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "kgalign/errors.hpp"

namespace kgalign::tsv {

inline std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            fields.emplace_back(line.substr(start));
            break;
        }
        fields.emplace_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

// Calls fn(line_number, fields) for every non-empty line. Lines are LF
// separated; a trailing CR is stripped so CRLF input also parses.
inline void for_each_row(std::istream& in,
                         const std::function<void(std::size_t, const std::vector<std::string>&)>& fn) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        fn(line_no, split_fields(line));
    }
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open input file: " + path);
    return in;
}

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path);
    return out;
}

inline double parse_finite_double(const std::string& text, std::size_t line_no) {
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &consumed);
    } catch (const std::exception&) {
        throw ParseError(line_no, "not a number: '" + text + "'");
    }
    if (consumed != text.size())
        throw ParseError(line_no, "trailing junk in number: '" + text + "'");
    if (!std::isfinite(value))
        throw ParseError(line_no, "non-finite score: '" + text + "'");
    return value;
}

}  // namespace kgalign::tsv
