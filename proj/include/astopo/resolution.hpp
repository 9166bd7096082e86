#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "astopo/ipv4.hpp"
#include "astopo/prefix_table.hpp"

namespace astopo {

// AS number. The default-constructed value is the Unresolved sentinel, used
// for MOAS prefixes and AS sets; it never equals a valid AS.
class Asn {
public:
    constexpr Asn() = default;
    constexpr explicit Asn(std::uint32_t value) : value_(value) {}

    static constexpr Asn unresolved() { return Asn(); }

    constexpr bool valid() const { return value_ != 0; }
    constexpr std::uint32_t value() const { return value_; }

    friend constexpr auto operator<=>(Asn, Asn) = default;

private:
    std::uint32_t value_ = 0;
};

std::string to_string(Asn asn);

// One exchange point. Identity is the id token; the name is display text.
struct IxpIdentity {
    std::string id;
    std::string name;

    friend bool operator==(const IxpIdentity& a, const IxpIdentity& b) { return a.id == b.id; }
};

// Two-letter upper-case ISO-3166-1 code.
class CountryCode {
public:
    // Returns nullopt unless text matches [A-Z]{2}.
    static std::optional<CountryCode> parse(std::string_view text);

    std::string_view str() const { return {code_.data(), 2}; }

    friend auto operator<=>(const CountryCode&, const CountryCode&) = default;

private:
    std::array<char, 2> code_{};
};

using AsPrefixTable = PrefixTable<Asn>;
using IxpPrefixTable = PrefixTable<IxpIdentity>;
using GeoPrefixTable = PrefixTable<CountryCode>;

// Line formats (tab separated, '#' comments and blank lines skipped):
//   AS:  <cidr> <asn | asn,asn,... | SET>   (MOAS and SET load as Unresolved)
//   IXP: <cidr> <ixp-id> <name>
//   Geo: <cidr> <ISO2>
// All throw ParseError carrying the 1-based line number.
AsPrefixTable load_as_prefix_table(std::istream& in);
IxpPrefixTable load_ixp_prefix_table(std::istream& in);
GeoPrefixTable load_geo_prefix_table(std::istream& in);

// File variants; an unreadable path throws IoError.
AsPrefixTable load_as_prefix_file(const std::filesystem::path& path);
IxpPrefixTable load_ixp_prefix_file(const std::filesystem::path& path);
GeoPrefixTable load_geo_prefix_file(const std::filesystem::path& path);

// Write canonical entries back in the load format (Unresolved as SET).
void dump(const AsPrefixTable& table, std::ostream& out);
void dump(const IxpPrefixTable& table, std::ostream& out);
void dump(const GeoPrefixTable& table, std::ostream& out);

// Majority country of an AS by address space: each prefix mapped to asn adds
// 2^(32 - len) addresses to the country of its base address. Ties go to the
// lexicographically smallest code. Throws DomainError for Unresolved.
std::optional<CountryCode> as_country(const AsPrefixTable& as_table, const GeoPrefixTable& geo_table,
                                      Asn asn);

// Precomputed as_country for every AS in a table, in one pass.
class CountryIndex {
public:
    CountryIndex() = default;
    CountryIndex(const AsPrefixTable& as_table, const GeoPrefixTable& geo_table);

    std::optional<CountryCode> country(Asn asn) const;

private:
    std::map<Asn, CountryCode> countries_;
};

}  // namespace astopo
