#include "astopo/ingest.hpp"

#include <fstream>
#include <sstream>

#include "astopo/error.hpp"
#include "text.hpp"

namespace astopo {

std::optional<TracerouteRecord> parse_trace_line(std::string_view line) {
    auto fields = text::split(line, '\t');
    if (fields.size() != 4) return std::nullopt;
    auto ts = text::parse_int<std::int64_t>(fields[0]);
    auto src = parse_ipv4(fields[1]);
    auto dst = parse_ipv4(fields[2]);
    if (!ts || !src || !dst || fields[3].empty()) return std::nullopt;

    TracerouteRecord rec{*ts, *src, *dst, {}};
    for (auto hop_text : text::split(fields[3], ',')) {
        auto colon = hop_text.find(':');
        if (colon == std::string_view::npos) return std::nullopt;
        auto ttl = text::parse_int<std::uint32_t>(hop_text.substr(0, colon));
        if (!ttl || *ttl == 0) return std::nullopt;
        if (!rec.hops.empty() && rec.hops.back().ttl >= *ttl) return std::nullopt;
        auto ip_text = hop_text.substr(colon + 1);
        Hop hop{*ttl, std::nullopt};
        if (ip_text != "*") {
            hop.ip = parse_ipv4(ip_text);
            if (!hop.ip) return std::nullopt;
        }
        rec.hops.push_back(hop);
    }
    return rec;
}

std::string format_trace_line(const TracerouteRecord& rec) {
    std::string out = std::to_string(rec.timestamp);
    out += '\t';
    out += to_string(rec.src);
    out += '\t';
    out += to_string(rec.dst);
    out += '\t';
    for (std::size_t i = 0; i < rec.hops.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(rec.hops[i].ttl);
        out += ':';
        out += rec.hops[i].ip ? to_string(*rec.hops[i].ip) : std::string("*");
    }
    return out;
}

TraceParseSummary parse_trace_stream(std::istream& in, const std::function<void(TracerouteRecord&&)>& sink) {
    TraceParseSummary summary;
    text::for_each_data_line(in, [&](std::size_t, std::string_view line) {
        if (auto rec = parse_trace_line(line)) {
            ++summary.parsed;
            sink(std::move(*rec));
        } else {
            ++summary.skipped;
        }
    });
    return summary;
}

TraceCorpus parse_trace_stream(std::istream& in) {
    TraceCorpus corpus;
    corpus.summary = parse_trace_stream(in, [&](TracerouteRecord&& r) { corpus.records.push_back(std::move(r)); });
    return corpus;
}

TraceCorpus parse_trace_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return parse_trace_stream(in);
}

void validate(const AsPath& path) {
    const auto& e = path.elements;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (const auto* as = std::get_if<AsHop>(&e[i]); as && !as->asn.valid())
            throw ConsistencyError("AS path element " + std::to_string(i) + " is an unresolved AS hop");
        if (i > 0 && e[i] == e[i - 1])
            throw ConsistencyError("AS path elements " + std::to_string(i - 1) + " and " + std::to_string(i) +
                                   " are equal");
        if (std::holds_alternative<IxpHop>(e[i])) {
            const AsHop* before = i > 0 ? std::get_if<AsHop>(&e[i - 1]) : nullptr;
            const AsHop* after = i + 1 < e.size() ? std::get_if<AsHop>(&e[i + 1]) : nullptr;
            if (!before || !after || before->asn == after->asn)
                throw ConsistencyError("IXP hop at " + std::to_string(i) + " is not between two distinct AS hops");
        }
    }
    if (!e.empty() && (std::holds_alternative<Break>(e.front()) || std::holds_alternative<Break>(e.back())))
        throw ConsistencyError("AS path starts or ends with a break");
}

std::string to_string(const AsPath& path) {
    std::ostringstream out;
    out << '[';
    for (std::size_t i = 0; i < path.elements.size(); ++i) {
        if (i) out << ' ';
        std::visit(
            [&](const auto& el) {
                using T = std::decay_t<decltype(el)>;
                if constexpr (std::is_same_v<T, AsHop>) out << "AS" << to_string(el.asn);
                else if constexpr (std::is_same_v<T, IxpHop>) out << "IXP:" << el.ixp.id;
                else out << '|';
            },
            path.elements[i]);
    }
    out << ']';
    return out.str();
}

namespace {

PathElement classify(const Hop& hop, const AsPrefixTable& as_table, const IxpPrefixTable& ixp_table) {
    if (!hop.ip || is_private_or_reserved(*hop.ip)) return Break{};
    if (const auto* ixp = ixp_table.lookup(*hop.ip)) return IxpHop{*ixp};
    if (const auto* asn = as_table.lookup(*hop.ip); asn && asn->valid()) return AsHop{*asn};
    return Break{};
}

void push_collapsed(std::vector<PathElement>& out, PathElement el) {
    if (!out.empty() && out.back() == el) return;
    out.push_back(std::move(el));
}

}  // namespace

AsPath trace_to_as_path(const TracerouteRecord& rec, const AsPrefixTable& as_table,
                        const IxpPrefixTable& ixp_table) {
    std::vector<PathElement> raw;
    raw.reserve(rec.hops.size());
    for (const auto& hop : rec.hops) push_collapsed(raw, classify(hop, as_table, ixp_table));

    std::vector<PathElement> out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size();) {
        if (!std::holds_alternative<IxpHop>(raw[i])) {
            push_collapsed(out, std::move(raw[i]));
            ++i;
            continue;
        }
        std::size_t end = i;
        while (end < raw.size() && std::holds_alternative<IxpHop>(raw[end])) ++end;
        const AsHop* before = out.empty() ? nullptr : std::get_if<AsHop>(&out.back());
        const AsHop* after = end < raw.size() ? std::get_if<AsHop>(&raw[end]) : nullptr;
        if (end - i == 1 && before && after) {
            // Same AS on both sides: the exchange is internal, the hops merge.
            if (before->asn != after->asn) out.push_back(std::move(raw[i]));
        } else {
            push_collapsed(out, Break{});
        }
        i = end;
    }

    auto first = out.begin();
    auto last = out.end();
    while (first != last && std::holds_alternative<Break>(*first)) ++first;
    while (last != first && std::holds_alternative<Break>(*(last - 1))) --last;
    return AsPath{std::vector<PathElement>(std::make_move_iterator(first), std::make_move_iterator(last)),
                  rec.timestamp, 0};
}

}  // namespace astopo
