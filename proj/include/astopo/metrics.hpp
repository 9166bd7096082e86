#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "astopo/graph.hpp"
#include "astopo/resolution.hpp"

namespace astopo {

// ---------------------------------------------------------------------------
// Degree-based statistics

// Mean degree of the neighbors of v; none when v is isolated.
std::optional<double> avg_neighbor_degree(const Graph& g, Graph::Vertex v);
std::optional<double> avg_neighbor_degree(const Snapshot& s, Asn asn);

// Edges among the neighbors of v over d(d-1)/2; 0 when d < 2.
double clustering_coefficient(const Graph& g, Graph::Vertex v);
double clustering_coefficient(const Snapshot& s, Asn asn);

// Newman degree assortativity: Pearson correlation of endpoint degrees with
// every edge taken in both orientations. None without edges or when all
// endpoint degrees are equal.
std::optional<double> assortativity(const Graph& g);

// ---------------------------------------------------------------------------
// k-pruning

struct ShellIndex {
    std::vector<std::uint32_t> shell;  // per vertex; 0 only for isolated vertices
    std::uint32_t nucleus_index = 0;   // highest shell present
};

ShellIndex kshell_decompose(const Graph& g);

enum class AsClass { EC, STP, LTP, CAHP, NA };

std::string_view to_string(AsClass c);
std::optional<AsClass> parse_as_class(std::string_view text);

// Externally supplied AS type labels; ASes without a label are N/A.
class AsClassification {
public:
    AsClassification() = default;
    explicit AsClassification(std::map<Asn, AsClass> labels) : labels_(std::move(labels)) {}

    AsClass label(Asn asn) const;
    bool empty() const { return labels_.empty(); }

private:
    std::map<Asn, AsClass> labels_;
};

// <asn>\t<EC|STP|LTP|CAHP>, '#' comments allowed; a repeated AS keeps the
// last label.
AsClassification load_classification(std::istream& in);
AsClassification load_classification_file(const std::filesystem::path& path);

struct LabelShare {
    std::size_t count = 0;
    double fraction = 0.0;
};

// Label counts among the vertices whose shell equals the nucleus index.
std::map<AsClass, LabelShare> nucleus_composition(const Snapshot& s, const ShellIndex& shells,
                                                  const AsClassification& cls);

// ---------------------------------------------------------------------------
// Centrality

struct Betweenness {
    std::vector<double> raw;         // sum over ordered pairs (s, t), s != v != t
    std::vector<double> normalized;  // raw / (n(n-1))
};

// Exact shortest-path betweenness (one BFS per source with dependency
// accumulation). Sources are processed in fixed-size blocks whose partial
// sums are reduced in block order, so the result is bit-identical for any
// thread count (0 = auto).
Betweenness betweenness(const Graph& g, unsigned threads = 1);

// Fraction of ingested traces in which each AS appears mid-path. None when
// the snapshot holds no traces.
std::optional<std::vector<double>> trace_betweenness(const Snapshot& s);
std::optional<double> trace_betweenness(const Snapshot& s, Asn asn);

struct PageRankOptions {
    double damping = 0.85;
    double tol = 1e-10;
    int max_iter = 100;
    unsigned threads = 1;
};

struct PageRankVector {
    std::vector<double> score;
    int iterations_used = 0;
    double residual = 0.0;  // L1 change of the last iteration
};

// Power iteration of PR(u) = (1-d)/n + d * sum_{v~u} PR(v)/deg(v) from the
// uniform vector; the mass of isolated vertices is spread uniformly. The
// observer, if given, sees the score vector after every iteration.
// Throws ParameterError for damping outside (0,1), tol <= 0, max_iter < 1 or
// an empty graph.
PageRankVector pagerank(const Graph& g, const PageRankOptions& opts = {},
                        const std::function<void(int, std::span<const double>)>& observer = {});

// ---------------------------------------------------------------------------
// Neighborhood breakdowns. All throw NotFoundError for an unknown AS.

std::map<AsClass, std::size_t> neighbor_type_distribution(const Snapshot& s, Asn asn, const AsClassification& cls);

// Neighbors without a country are counted under "--".
std::map<std::string, std::size_t> neighbor_country_distribution(const Snapshot& s, Asn asn,
                                                                 const CountryIndex& countries);
std::map<std::string, std::size_t> neighbor_country_distribution(const Snapshot& s, Asn asn,
                                                                 const AsPrefixTable& as_table,
                                                                 const GeoPrefixTable& geo_table);

struct IxpStats {
    std::size_t ixp_count = 0;              // distinct exchanges on incident edges
    std::size_t ixp_link_count = 0;         // incident edges seen through an exchange
    std::optional<double> ixp_link_fraction;  // over degree; none when isolated
};

IxpStats ixp_stats(const Snapshot& s, Asn asn);

}  // namespace astopo
