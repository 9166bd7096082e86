#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "astopo/ipv4.hpp"
#include "astopo/resolution.hpp"

namespace astopo {

struct Hop {
    std::uint32_t ttl = 0;
    std::optional<Ipv4> ip;  // nullopt: the hop did not respond

    friend bool operator==(const Hop&, const Hop&) = default;
};

// One measured path. Hops are sorted by strictly increasing ttl.
struct TracerouteRecord {
    std::int64_t timestamp = 0;
    Ipv4 src;
    Ipv4 dst;
    std::vector<Hop> hops;

    friend bool operator==(const TracerouteRecord&, const TracerouteRecord&) = default;
};

// Wire format, one record per line:
//   <timestamp>\t<src>\t<dst>\t<ttl>:<ip>[,<ttl>:<ip>...]
// where <ip> is a dotted quad or '*'.
std::optional<TracerouteRecord> parse_trace_line(std::string_view line);
std::string format_trace_line(const TracerouteRecord& rec);

struct TraceParseSummary {
    std::size_t parsed = 0;
    std::size_t skipped = 0;
};

// Streams records in input order. Lines that fail to parse are counted in
// the summary and skipped; blank lines and '#' comments are ignored.
TraceParseSummary parse_trace_stream(std::istream& in, const std::function<void(TracerouteRecord&&)>& sink);

struct TraceCorpus {
    std::vector<TracerouteRecord> records;
    TraceParseSummary summary;
};

TraceCorpus parse_trace_stream(std::istream& in);
// Throws IoError if the file cannot be opened.
TraceCorpus parse_trace_file(const std::filesystem::path& path);

struct AsHop {
    Asn asn;
    friend bool operator==(const AsHop&, const AsHop&) = default;
};

struct IxpHop {
    IxpIdentity ixp;
    friend bool operator==(const IxpHop&, const IxpHop&) = default;
};

struct Break {
    friend bool operator==(const Break&, const Break&) = default;
};

using PathElement = std::variant<AsHop, IxpHop, Break>;

// AS-level view of one traceroute. Invariants (see validate()):
//   - AsHop never carries Unresolved;
//   - no two consecutive elements are equal;
//   - every IxpHop sits between two AsHops of different ASes;
//   - the path neither starts nor ends with a Break.
struct AsPath {
    std::vector<PathElement> elements;
    std::int64_t timestamp = 0;  // of the originating record
    std::size_t record_index = 0;

    friend bool operator==(const AsPath&, const AsPath&) = default;
};

// Throws ConsistencyError naming the first violated invariant.
void validate(const AsPath& path);

std::string to_string(const AsPath& path);

// Resolves each hop (IXP prefix first, then AS prefix; private and
// unresolvable hops become Break) and applies the collapse rules. An IXP hop
// survives only as a single exchange between two different resolved ASes;
// an IXP hop between two hops of the same AS is dropped and the AS hops
// merge. Leading and trailing Breaks are trimmed.
AsPath trace_to_as_path(const TracerouteRecord& rec, const AsPrefixTable& as_table,
                        const IxpPrefixTable& ixp_table);

}  // namespace astopo
