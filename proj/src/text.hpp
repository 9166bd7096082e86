#pragma once

// Line-oriented parsing helpers shared by the loaders. Not installed.

#include <charconv>
#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "astopo/error.hpp"

namespace astopo::text {

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

template <class Int>
std::optional<Int> parse_int(std::string_view s) {
    if (s.empty()) return std::nullopt;
    Int v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

inline bool is_blank(std::string_view s) {
    return s.find_first_not_of(" \t") == std::string_view::npos;
}

// Calls fn(line_number, line) for every line, with a trailing '\r' removed.
template <class Fn>
void for_each_line(std::istream& in, Fn&& fn) {
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        std::string_view view(line);
        if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
        fn(number, view);
    }
    if (in.bad()) throw IoError("read error after line " + std::to_string(number));
}

// Same, skipping blank lines and '#' comments.
template <class Fn>
void for_each_data_line(std::istream& in, Fn&& fn) {
    for_each_line(in, [&](std::size_t number, std::string_view line) {
        if (is_blank(line) || line.front() == '#') return;
        fn(number, line);
    });
}

}  // namespace astopo::text
