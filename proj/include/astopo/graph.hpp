#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "astopo/ingest.hpp"
#include "astopo/resolution.hpp"

namespace astopo {

// Compact undirected simple graph over vertices 0..n-1 (CSR layout).
// Neighbor lists are sorted ascending.
class Graph {
public:
    using Vertex = std::uint32_t;

    Graph() = default;
    // Self loops are dropped and parallel edges merged.
    Graph(std::size_t vertex_count, std::span<const std::pair<Vertex, Vertex>> edges);

    std::size_t vertex_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t edge_count() const { return adjacency_.size() / 2; }
    std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
    std::span<const Vertex> neighbors(Vertex v) const {
        return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
    }
    bool adjacent(Vertex u, Vertex v) const;

private:
    std::vector<std::size_t> offsets_;
    std::vector<Vertex> adjacency_;
};

struct EdgeInfo {
    bool direct = false;               // the two ASes were adjacent in some path
    std::set<std::string> via_ixps;    // exchange ids seen between them
    std::uint64_t trace_count = 0;     // paths that produced this edge

    friend bool operator==(const EdgeInfo&, const EdgeInfo&) = default;
};

struct AsCounters {
    std::uint64_t appearances = 0;  // paths containing the AS
    std::uint64_t mid_trace = 0;    // paths containing it neither first nor last

    friend bool operator==(const AsCounters&, const AsCounters&) = default;
};

struct SnapshotEdge {
    Asn a;  // a < b
    Asn b;
    EdgeInfo info;

    friend bool operator==(const SnapshotEdge&, const SnapshotEdge&) = default;
};

// True for YYYY-MM with a month in 01..12.
bool valid_snapshot_label(std::string_view label);

// Immutable undirected AS graph of one time window. Vertex i of graph()
// is asns()[i]; ASes are sorted ascending.
class Snapshot {
public:
    Snapshot() = default;

    const std::string& label() const { return label_; }
    std::span<const Asn> asns() const { return asns_; }
    std::span<const AsCounters> counters() const { return counters_; }
    std::span<const SnapshotEdge> edges() const { return edges_; }  // sorted by (a, b)
    std::uint64_t trace_total() const { return trace_total_; }
    const Graph& graph() const { return graph_; }

    bool contains(Asn asn) const { return index_of(asn).has_value(); }
    std::optional<Graph::Vertex> index_of(Asn asn) const;
    // Throws NotFoundError for an unknown AS.
    Graph::Vertex require(Asn asn) const;
    const AsCounters& counters(Asn asn) const { return counters_[require(asn)]; }
    // Annotations of edge {a, b}, or nullptr.
    const EdgeInfo* edge(Asn a, Asn b) const;

    friend bool operator==(const Snapshot& x, const Snapshot& y) {
        return x.label_ == y.label_ && x.asns_ == y.asns_ && x.counters_ == y.counters_ && x.edges_ == y.edges_ &&
               x.trace_total_ == y.trace_total_;
    }

private:
    friend class SnapshotBuilder;

    std::string label_;
    std::vector<Asn> asns_;
    std::vector<AsCounters> counters_;
    std::vector<SnapshotEdge> edges_;
    std::uint64_t trace_total_ = 0;
    Graph graph_;
};

// Accumulates AS paths. Merging is associative and commutative, so partial
// builders fed from disjoint slices of a corpus can be combined in any order.
class SnapshotBuilder {
public:
    // Throws ConsistencyError when the path breaks an AsPath invariant.
    void add_path(const AsPath& path);
    void merge(const SnapshotBuilder& other);

    // Adds an AS with no traces, e.g. an isolated node read from a dump.
    void add_node(Asn asn);
    // Raw accumulation used by the dump reader.
    void add_edge(Asn a, Asn b, const EdgeInfo& info);
    void add_counters(Asn asn, const AsCounters& c);
    void add_traces(std::uint64_t n) { trace_total_ += n; }

    // Throws ParameterError when the label is not YYYY-MM.
    Snapshot finish(std::string label) const;

private:
    std::map<Asn, AsCounters> nodes_;
    std::map<std::pair<Asn, Asn>, EdgeInfo> edges_;
    std::uint64_t trace_total_ = 0;
};

// Builds a snapshot from paths, optionally on several threads (0 = auto).
// The result does not depend on path order or thread count.
Snapshot build_snapshot(std::string label, std::span<const AsPath> paths, unsigned threads = 1);

struct GraphStats {
    std::size_t n = 0;
    std::size_t m = 0;
    std::optional<double> density;  // 2m / (n(n-1)); none for n < 2
};

GraphStats graph_stats(const Graph& g);
inline GraphStats graph_stats(const Snapshot& s) { return graph_stats(s.graph()); }

// Throw NotFoundError for an unknown AS.
std::size_t degree(const Snapshot& s, Asn asn);
std::vector<Asn> neighbors(const Snapshot& s, Asn asn);

// Text dump:
//   #astopo-snapshot v1 <label> <n> <m>
//   <asnA>\t<asnB>\t<direct 0|1>\t<ixp,ids|->\t<trace_count>   (asnA < asnB)
//   N\t<asn>                                                    (isolated)
//   #counters
//   T\t<trace_total>
//   C\t<asn>\t<appearances>\t<mid_trace>                        (every node)
void write_snapshot(const Snapshot& s, std::ostream& out);
Snapshot read_snapshot(std::istream& in);
void write_snapshot_file(const Snapshot& s, const std::filesystem::path& path);
Snapshot read_snapshot_file(const std::filesystem::path& path);

}  // namespace astopo
