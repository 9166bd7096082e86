#include "astopo/resolution.hpp"

#include <fstream>
#include <ostream>
#include <vector>

#include "astopo/error.hpp"
#include "text.hpp"

namespace astopo {

std::string to_string(Asn asn) {
    return asn.valid() ? std::to_string(asn.value()) : std::string("unresolved");
}

std::optional<CountryCode> CountryCode::parse(std::string_view text) {
    if (text.size() != 2) return std::nullopt;
    for (char c : text)
        if (c < 'A' || c > 'Z') return std::nullopt;
    CountryCode cc;
    cc.code_ = {text[0], text[1]};
    return cc;
}

namespace {

Prefix require_prefix(std::size_t line_no, std::string_view field) {
    auto p = parse_prefix(field);
    if (!p) throw ParseError(line_no, "malformed CIDR '" + std::string(field) + "'");
    return *p;
}

// asn-field: a single integer, a comma-separated MOAS list, or SET.
// AS 0 is reserved and is treated like a MOAS entry.
Asn parse_asn_field(std::size_t line_no, std::string_view field) {
    if (field == "SET") return Asn::unresolved();
    auto parts = text::split(field, ',');
    for (auto part : parts)
        if (!text::parse_int<std::uint32_t>(part))
            throw ParseError(line_no, "invalid AS field '" + std::string(field) + "'");
    if (parts.size() > 1) return Asn::unresolved();
    return Asn(*text::parse_int<std::uint32_t>(parts.front()));
}

bool valid_ixp_token(std::string_view id) {
    if (id.empty() || id == "-") return false;
    for (char c : id)
        if (c == ',' || c == ' ' || c == '\t' || c < 0x21 || c > 0x7e) return false;
    return true;
}

template <class Loader>
auto load_file(const std::filesystem::path& path, Loader loader) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return loader(in);
}

}  // namespace

AsPrefixTable load_as_prefix_table(std::istream& in) {
    std::vector<AsPrefixTable::Entry> entries;
    text::for_each_data_line(in, [&](std::size_t n, std::string_view line) {
        auto fields = text::split(line, '\t');
        if (fields.size() != 2) throw ParseError(n, "expected <cidr>\\t<asn>");
        entries.push_back({require_prefix(n, fields[0]), parse_asn_field(n, fields[1])});
    });
    return AsPrefixTable(std::move(entries));
}

IxpPrefixTable load_ixp_prefix_table(std::istream& in) {
    std::vector<IxpPrefixTable::Entry> entries;
    text::for_each_data_line(in, [&](std::size_t n, std::string_view line) {
        auto first = line.find('\t');
        auto second = first == std::string_view::npos ? first : line.find('\t', first + 1);
        if (second == std::string_view::npos) throw ParseError(n, "expected <cidr>\\t<ixp-id>\\t<name>");
        auto prefix = require_prefix(n, line.substr(0, first));
        auto id = line.substr(first + 1, second - first - 1);
        if (!valid_ixp_token(id)) throw ParseError(n, "invalid IXP id '" + std::string(id) + "'");
        entries.push_back({prefix, IxpIdentity{std::string(id), std::string(line.substr(second + 1))}});
    });
    return IxpPrefixTable(std::move(entries));
}

GeoPrefixTable load_geo_prefix_table(std::istream& in) {
    std::vector<GeoPrefixTable::Entry> entries;
    text::for_each_data_line(in, [&](std::size_t n, std::string_view line) {
        auto fields = text::split(line, '\t');
        if (fields.size() != 2) throw ParseError(n, "expected <cidr>\\t<ISO2>");
        auto prefix = require_prefix(n, fields[0]);
        auto code = CountryCode::parse(fields[1]);
        if (!code) throw ParseError(n, "country code must match [A-Z]{2}, got '" + std::string(fields[1]) + "'");
        entries.push_back({prefix, *code});
    });
    return GeoPrefixTable(std::move(entries));
}

AsPrefixTable load_as_prefix_file(const std::filesystem::path& path) {
    return load_file(path, [](std::istream& in) { return load_as_prefix_table(in); });
}

IxpPrefixTable load_ixp_prefix_file(const std::filesystem::path& path) {
    return load_file(path, [](std::istream& in) { return load_ixp_prefix_table(in); });
}

GeoPrefixTable load_geo_prefix_file(const std::filesystem::path& path) {
    return load_file(path, [](std::istream& in) { return load_geo_prefix_table(in); });
}

void dump(const AsPrefixTable& table, std::ostream& out) {
    for (const auto& e : table.entries())
        out << to_string(e.prefix) << '\t' << (e.payload.valid() ? std::to_string(e.payload.value()) : "SET")
            << '\n';
}

void dump(const IxpPrefixTable& table, std::ostream& out) {
    for (const auto& e : table.entries())
        out << to_string(e.prefix) << '\t' << e.payload.id << '\t' << e.payload.name << '\n';
}

void dump(const GeoPrefixTable& table, std::ostream& out) {
    for (const auto& e : table.entries()) out << to_string(e.prefix) << '\t' << e.payload.str() << '\n';
}

namespace {

using AddressSpace = std::map<CountryCode, std::uint64_t>;

void add_space(AddressSpace& space, const GeoPrefixTable& geo, const Prefix& prefix) {
    if (const auto* cc = geo.lookup(prefix.base())) space[*cc] += prefix.size();
}

std::optional<CountryCode> majority(const AddressSpace& space) {
    std::optional<CountryCode> best;
    std::uint64_t best_size = 0;
    // Map iteration is ascending, so strict '>' keeps the smallest code on ties.
    for (const auto& [cc, size] : space) {
        if (!best || size > best_size) {
            best = cc;
            best_size = size;
        }
    }
    return best;
}

}  // namespace

std::optional<CountryCode> as_country(const AsPrefixTable& as_table, const GeoPrefixTable& geo_table,
                                      Asn asn) {
    if (!asn.valid()) throw DomainError("as_country: AS is unresolved");
    AddressSpace space;
    for (const auto& e : as_table.entries())
        if (e.payload == asn) add_space(space, geo_table, e.prefix);
    return majority(space);
}

CountryIndex::CountryIndex(const AsPrefixTable& as_table, const GeoPrefixTable& geo_table) {
    std::map<Asn, AddressSpace> per_as;
    for (const auto& e : as_table.entries())
        if (e.payload.valid()) add_space(per_as[e.payload], geo_table, e.prefix);
    for (const auto& [asn, space] : per_as)
        if (auto cc = majority(space)) countries_.emplace(asn, *cc);
}

std::optional<CountryCode> CountryIndex::country(Asn asn) const {
    auto it = countries_.find(asn);
    if (it == countries_.end()) return std::nullopt;
    return it->second;
}

}  // namespace astopo
