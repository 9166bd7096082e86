#include "astopo/ipv4.hpp"

#include <charconv>

namespace astopo {

namespace {

std::optional<unsigned> parse_decimal(std::string_view s, unsigned max) {
    if (s.empty() || s.size() > 3) return std::nullopt;
    unsigned v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || v > max) return std::nullopt;
    return v;
}

}  // namespace

std::optional<Ipv4> parse_ipv4(std::string_view text) {
    std::uint32_t value = 0;
    for (int i = 0; i < 4; ++i) {
        auto dot = text.find('.');
        if ((i < 3) != (dot != std::string_view::npos)) return std::nullopt;
        auto part = text.substr(0, dot);
        auto octet = parse_decimal(part, 255);
        if (!octet) return std::nullopt;
        value = (value << 8) | *octet;
        text = i < 3 ? text.substr(dot + 1) : std::string_view{};
    }
    return Ipv4(value);
}

std::string to_string(Ipv4 ip) {
    std::string out;
    out.reserve(15);
    for (int shift = 24; shift >= 0; shift -= 8) {
        out += std::to_string((ip.value >> shift) & 0xffu);
        if (shift) out += '.';
    }
    return out;
}

bool is_private_or_reserved(Ipv4 ip) {
    static constexpr Prefix blocks[] = {
        {Ipv4(0x0A000000u), 8},   // 10/8
        {Ipv4(0xAC100000u), 12},  // 172.16/12
        {Ipv4(0xC0A80000u), 16},  // 192.168/16
        {Ipv4(0x7F000000u), 8},   // 127/8
        {Ipv4(0x00000000u), 8},   // 0/8
        {Ipv4(0xE0000000u), 4},   // 224/4
    };
    for (const auto& b : blocks)
        if (b.contains(ip)) return true;
    return false;
}

std::optional<Prefix> parse_prefix(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return std::nullopt;
    auto ip = parse_ipv4(text.substr(0, slash));
    auto len = parse_decimal(text.substr(slash + 1), 32);
    if (!ip || !len) return std::nullopt;
    return Prefix(*ip, *len);
}

std::string to_string(const Prefix& p) {
    return to_string(p.base()) + '/' + std::to_string(p.length());
}

}  // namespace astopo
