#include "astopo/graph.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

#include "astopo/error.hpp"
#include "astopo/parallel.hpp"
#include "text.hpp"

namespace astopo {

Graph::Graph(std::size_t vertex_count, std::span<const std::pair<Vertex, Vertex>> edges) {
    std::vector<std::pair<Vertex, Vertex>> arcs;
    arcs.reserve(edges.size() * 2);
    for (auto [u, v] : edges) {
        if (u == v) continue;
        arcs.emplace_back(u, v);
        arcs.emplace_back(v, u);
    }
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

    offsets_.assign(vertex_count + 1, 0);
    for (auto [u, v] : arcs) ++offsets_[u + 1];
    for (std::size_t i = 0; i < vertex_count; ++i) offsets_[i + 1] += offsets_[i];
    adjacency_.reserve(arcs.size());
    for (auto [u, v] : arcs) adjacency_.push_back(v);
}

bool Graph::adjacent(Vertex u, Vertex v) const {
    auto n = neighbors(u);
    return std::binary_search(n.begin(), n.end(), v);
}

bool valid_snapshot_label(std::string_view label) {
    if (label.size() != 7 || label[4] != '-') return false;
    for (std::size_t i : {0, 1, 2, 3, 5, 6})
        if (label[i] < '0' || label[i] > '9') return false;
    int month = (label[5] - '0') * 10 + (label[6] - '0');
    return month >= 1 && month <= 12;
}

std::optional<Graph::Vertex> Snapshot::index_of(Asn asn) const {
    auto it = std::lower_bound(asns_.begin(), asns_.end(), asn);
    if (it == asns_.end() || *it != asn) return std::nullopt;
    return static_cast<Graph::Vertex>(it - asns_.begin());
}

Graph::Vertex Snapshot::require(Asn asn) const {
    auto v = index_of(asn);
    if (!v) throw NotFoundError("AS " + to_string(asn) + " is not in snapshot " + label_);
    return *v;
}

const EdgeInfo* Snapshot::edge(Asn a, Asn b) const {
    if (b < a) std::swap(a, b);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair{a, b}, [](const SnapshotEdge& e, auto key) {
        return std::pair{e.a, e.b} < key;
    });
    if (it == edges_.end() || it->a != a || it->b != b) return nullptr;
    return &it->info;
}

void SnapshotBuilder::add_path(const AsPath& path) {
    validate(path);
    ++trace_total_;
    const auto& el = path.elements;

    std::set<Asn> seen;
    std::set<Asn> mid;
    for (std::size_t i = 0; i < el.size(); ++i) {
        if (const auto* hop = std::get_if<AsHop>(&el[i])) {
            seen.insert(hop->asn);
            if (i != 0 && i + 1 != el.size()) mid.insert(hop->asn);
        }
    }
    for (Asn a : seen) {
        auto& c = nodes_[a];
        ++c.appearances;
        if (mid.count(a)) ++c.mid_trace;
    }

    std::map<std::pair<Asn, Asn>, EdgeInfo> touched;
    auto key = [](Asn a, Asn b) { return a < b ? std::pair{a, b} : std::pair{b, a}; };
    for (std::size_t i = 0; i + 1 < el.size(); ++i) {
        const auto* a = std::get_if<AsHop>(&el[i]);
        if (!a) continue;
        if (const auto* b = std::get_if<AsHop>(&el[i + 1])) {
            touched[key(a->asn, b->asn)].direct = true;
        } else if (const auto* x = std::get_if<IxpHop>(&el[i + 1])) {
            // validate() guarantees an AsHop follows.
            const auto& b = std::get<AsHop>(el[i + 2]);
            touched[key(a->asn, b.asn)].via_ixps.insert(x->ixp.id);
        }
    }
    for (auto& [k, info] : touched) {
        info.trace_count = 1;
        add_edge(k.first, k.second, info);
    }
}

void SnapshotBuilder::add_node(Asn asn) {
    nodes_.try_emplace(asn);
}

void SnapshotBuilder::add_edge(Asn a, Asn b, const EdgeInfo& info) {
    if (b < a) std::swap(a, b);
    add_node(a);
    add_node(b);
    auto& e = edges_[{a, b}];
    e.direct = e.direct || info.direct;
    e.via_ixps.insert(info.via_ixps.begin(), info.via_ixps.end());
    e.trace_count += info.trace_count;
}

void SnapshotBuilder::add_counters(Asn asn, const AsCounters& c) {
    auto& mine = nodes_[asn];
    mine.appearances += c.appearances;
    mine.mid_trace += c.mid_trace;
}

void SnapshotBuilder::merge(const SnapshotBuilder& other) {
    for (const auto& [asn, c] : other.nodes_) add_counters(asn, c);
    for (const auto& [k, info] : other.edges_) add_edge(k.first, k.second, info);
    trace_total_ += other.trace_total_;
}

Snapshot SnapshotBuilder::finish(std::string label) const {
    if (!valid_snapshot_label(label)) throw ParameterError("snapshot label must be YYYY-MM, got '" + label + "'");
    Snapshot s;
    s.label_ = std::move(label);
    s.trace_total_ = trace_total_;
    s.asns_.reserve(nodes_.size());
    s.counters_.reserve(nodes_.size());
    for (const auto& [asn, c] : nodes_) {
        s.asns_.push_back(asn);
        s.counters_.push_back(c);
    }
    std::vector<std::pair<Graph::Vertex, Graph::Vertex>> pairs;
    pairs.reserve(edges_.size());
    s.edges_.reserve(edges_.size());
    for (const auto& [k, info] : edges_) {
        s.edges_.push_back({k.first, k.second, info});
        pairs.emplace_back(*s.index_of(k.first), *s.index_of(k.second));
    }
    s.graph_ = Graph(s.asns_.size(), pairs);
    return s;
}

Snapshot build_snapshot(std::string label, std::span<const AsPath> paths, unsigned threads) {
    const unsigned workers = resolve_threads(threads);
    std::vector<SnapshotBuilder> partial(workers);
    parallel_slices(paths.size(), workers, [&](std::size_t begin, std::size_t end, unsigned w) {
        for (std::size_t i = begin; i < end; ++i) partial[w].add_path(paths[i]);
    });
    for (std::size_t w = 1; w < partial.size(); ++w) partial[0].merge(partial[w]);
    return partial[0].finish(std::move(label));
}

GraphStats graph_stats(const Graph& g) {
    GraphStats st{g.vertex_count(), g.edge_count(), std::nullopt};
    if (st.n >= 2)
        st.density = 2.0 * static_cast<double>(st.m) / (static_cast<double>(st.n) * static_cast<double>(st.n - 1));
    return st;
}

std::size_t degree(const Snapshot& s, Asn asn) {
    return s.graph().degree(s.require(asn));
}

std::vector<Asn> neighbors(const Snapshot& s, Asn asn) {
    std::vector<Asn> out;
    for (auto v : s.graph().neighbors(s.require(asn))) out.push_back(s.asns()[v]);
    return out;
}

void write_snapshot(const Snapshot& s, std::ostream& out) {
    const auto& g = s.graph();
    out << "#astopo-snapshot v1 " << s.label() << ' ' << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (const auto& e : s.edges()) {
        out << e.a.value() << '\t' << e.b.value() << '\t' << (e.info.direct ? 1 : 0) << '\t';
        if (e.info.via_ixps.empty()) {
            out << '-';
        } else {
            bool first = true;
            for (const auto& id : e.info.via_ixps) {
                out << (first ? "" : ",") << id;
                first = false;
            }
        }
        out << '\t' << e.info.trace_count << '\n';
    }
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
        if (g.degree(static_cast<Graph::Vertex>(v)) == 0) out << "N\t" << s.asns()[v].value() << '\n';
    out << "#counters\n";
    out << "T\t" << s.trace_total() << '\n';
    for (std::size_t v = 0; v < s.asns().size(); ++v)
        out << "C\t" << s.asns()[v].value() << '\t' << s.counters()[v].appearances << '\t'
            << s.counters()[v].mid_trace << '\n';
    if (!out) throw IoError("failed writing snapshot " + s.label());
}

namespace {

Asn parse_asn(std::size_t line, std::string_view field) {
    auto v = text::parse_int<std::uint32_t>(field);
    if (!v || *v == 0) throw ParseError(line, "invalid AS number '" + std::string(field) + "'");
    return Asn(*v);
}

std::uint64_t parse_count(std::size_t line, std::string_view field) {
    auto v = text::parse_int<std::uint64_t>(field);
    if (!v) throw ParseError(line, "invalid counter '" + std::string(field) + "'");
    return *v;
}

}  // namespace

Snapshot read_snapshot(std::istream& in) {
    SnapshotBuilder builder;
    std::string label;
    std::size_t want_n = 0, want_m = 0, edges = 0;
    bool header = false, in_counters = false, have_total = false;
    std::set<Asn> declared, counted;
    std::set<std::pair<Asn, Asn>> seen_edges;

    text::for_each_line(in, [&](std::size_t n, std::string_view line) {
        if (!header) {
            auto f = text::split(line, ' ');
            if (f.size() != 5 || f[0] != "#astopo-snapshot" || f[1] != "v1")
                throw ParseError(n, "missing '#astopo-snapshot v1' header");
            label = f[2];
            if (!valid_snapshot_label(label)) throw ParseError(n, "snapshot label must be YYYY-MM");
            auto nn = text::parse_int<std::size_t>(f[3]);
            auto mm = text::parse_int<std::size_t>(f[4]);
            if (!nn || !mm) throw ParseError(n, "bad node/edge counts in header");
            want_n = *nn;
            want_m = *mm;
            header = true;
            return;
        }
        if (line.empty()) return;
        if (line == "#counters") {
            if (in_counters) throw ParseError(n, "duplicate #counters section");
            in_counters = true;
            return;
        }
        auto f = text::split(line, '\t');
        if (!in_counters) {
            if (f.size() == 2 && f[0] == "N") {
                auto a = parse_asn(n, f[1]);
                builder.add_node(a);
                declared.insert(a);
                return;
            }
            if (f.size() != 5) throw ParseError(n, "malformed edge line");
            auto a = parse_asn(n, f[0]);
            auto b = parse_asn(n, f[1]);
            if (!(a < b)) throw ParseError(n, "edge endpoints must satisfy asnA < asnB");
            EdgeInfo info;
            if (f[2] != "0" && f[2] != "1") throw ParseError(n, "direct flag must be 0 or 1");
            info.direct = f[2] == "1";
            if (f[3] != "-")
                for (auto id : text::split(f[3], ',')) {
                    if (id.empty()) throw ParseError(n, "empty IXP id");
                    info.via_ixps.emplace(id);
                }
            if (!info.direct && info.via_ixps.empty()) throw ParseError(n, "edge is neither direct nor via an IXP");
            info.trace_count = parse_count(n, f[4]);
            if (info.trace_count == 0) throw ParseError(n, "edge trace_count must be >= 1");
            if (!seen_edges.emplace(a, b).second) throw ParseError(n, "duplicate edge");
            builder.add_edge(a, b, info);
            declared.insert(a);
            declared.insert(b);
            ++edges;
            return;
        }
        if (f.size() == 2 && f[0] == "T") {
            if (have_total) throw ParseError(n, "duplicate T line");
            builder.add_traces(parse_count(n, f[1]));
            have_total = true;
            return;
        }
        if (f.size() == 4 && f[0] == "C") {
            auto a = parse_asn(n, f[1]);
            if (!declared.count(a)) throw ParseError(n, "counters for undeclared AS " + std::string(f[1]));
            if (!counted.insert(a).second) throw ParseError(n, "duplicate counters for AS " + std::string(f[1]));
            AsCounters c{parse_count(n, f[2]), parse_count(n, f[3])};
            if (c.mid_trace > c.appearances) throw ParseError(n, "mid_trace exceeds appearances");
            builder.add_counters(a, c);
            return;
        }
        throw ParseError(n, "unrecognized line");
    });

    if (!header) throw ParseError(0, "empty snapshot dump");
    if (!have_total) throw ParseError(0, "missing T line in counters section");
    if (counted.size() != declared.size()) throw ParseError(0, "counters missing for some ASes");
    if (declared.size() != want_n || edges != want_m)
        throw ParseError(0, "header declares " + std::to_string(want_n) + " nodes / " + std::to_string(want_m) +
                                " edges, body has " + std::to_string(declared.size()) + " / " +
                                std::to_string(edges));
    Snapshot s = builder.finish(label);
    for (const auto& c : s.counters())
        if (c.appearances > s.trace_total()) throw ParseError(0, "AS appearances exceed trace total");
    return s;
}

void write_snapshot_file(const Snapshot& s, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    write_snapshot(s, out);
}

Snapshot read_snapshot_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return read_snapshot(in);
}

}  // namespace astopo
