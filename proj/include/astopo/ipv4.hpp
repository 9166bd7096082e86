#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace astopo {

// IPv4 address in host byte order.
struct Ipv4 {
    std::uint32_t value = 0;

    constexpr Ipv4() = default;
    constexpr explicit Ipv4(std::uint32_t v) : value(v) {}

    friend constexpr auto operator<=>(Ipv4, Ipv4) = default;
};

// Strict dotted-quad parser: four decimal octets, no leading '+', no
// whitespace, octets <= 255.
std::optional<Ipv4> parse_ipv4(std::string_view text);
std::string to_string(Ipv4 ip);

// 10/8, 172.16/12, 192.168/16, 127/8, 0/8 and 224/4 (multicast + reserved).
bool is_private_or_reserved(Ipv4 ip);

// CIDR block. Always canonical: bits below the mask are zero.
class Prefix {
public:
    constexpr Prefix() = default;
    constexpr Prefix(Ipv4 base, unsigned length)
        : base_(Ipv4(base.value & mask(length))), length_(static_cast<std::uint8_t>(length)) {}

    static constexpr std::uint32_t mask(unsigned length) {
        return length == 0 ? 0u : ~std::uint32_t{0} << (32u - length);
    }

    constexpr Ipv4 base() const { return base_; }
    constexpr unsigned length() const { return length_; }
    // Last covered address.
    constexpr Ipv4 last() const { return Ipv4(base_.value | ~mask(length_)); }
    // Number of covered addresses, 2^(32 - length).
    constexpr std::uint64_t size() const { return std::uint64_t{1} << (32u - length_); }

    constexpr bool contains(Ipv4 ip) const {
        return (ip.value & mask(length_)) == base_.value;
    }

    friend constexpr auto operator<=>(const Prefix&, const Prefix&) = default;

private:
    Ipv4 base_{};
    std::uint8_t length_ = 0;
};

// Parses "a.b.c.d/len". Host bits are cleared, so "1.2.3.4/8" yields 1.0.0.0/8.
std::optional<Prefix> parse_prefix(std::string_view text);
std::string to_string(const Prefix& p);

}  // namespace astopo
