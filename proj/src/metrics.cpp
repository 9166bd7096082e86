#include "astopo/metrics.hpp"

#include <algorithm>
#include <fstream>

#include "astopo/error.hpp"
#include "text.hpp"

namespace astopo {

std::optional<double> avg_neighbor_degree(const Graph& g, Graph::Vertex v) {
    const auto nbrs = g.neighbors(v);
    if (nbrs.empty()) return std::nullopt;
    std::uint64_t sum = 0;
    for (auto u : nbrs) sum += g.degree(u);
    return static_cast<double>(sum) / static_cast<double>(nbrs.size());
}

std::optional<double> avg_neighbor_degree(const Snapshot& s, Asn asn) {
    return avg_neighbor_degree(s.graph(), s.require(asn));
}

namespace {

std::size_t sorted_intersection_size(std::span<const Graph::Vertex> a, std::span<const Graph::Vertex> b) {
    std::size_t count = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

}  // namespace

double clustering_coefficient(const Graph& g, Graph::Vertex v) {
    const auto nbrs = g.neighbors(v);
    const std::size_t d = nbrs.size();
    if (d < 2) return 0.0;
    std::size_t twice_links = 0;
    for (auto u : nbrs) twice_links += sorted_intersection_size(nbrs, g.neighbors(u));
    const double possible = static_cast<double>(d) * static_cast<double>(d - 1);
    return static_cast<double>(twice_links) / possible;
}

double clustering_coefficient(const Snapshot& s, Asn asn) {
    return clustering_coefficient(s.graph(), s.require(asn));
}

std::optional<double> assortativity(const Graph& g) {
    const std::size_t n = g.vertex_count();
    if (g.edge_count() == 0) return std::nullopt;

    // Endpoint degrees have zero variance iff every non-isolated vertex has
    // the same degree.
    std::size_t common = 0;
    bool varied = false;
    double sum = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
        const std::size_t k = g.degree(static_cast<Graph::Vertex>(v));
        if (k == 0) continue;
        if (common == 0) common = k;
        varied = varied || k != common;
        sum += static_cast<double>(k) * static_cast<double>(k);
    }
    if (!varied) return std::nullopt;

    const double mean = sum / (2.0 * static_cast<double>(g.edge_count()));
    double cov = 0.0, var = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
        const double du = static_cast<double>(g.degree(static_cast<Graph::Vertex>(u))) - mean;
        for (auto w : g.neighbors(static_cast<Graph::Vertex>(u))) {
            const double dw = static_cast<double>(g.degree(w)) - mean;
            cov += du * dw;
            var += du * du;
        }
    }
    return std::clamp(cov / var, -1.0, 1.0);
}

ShellIndex kshell_decompose(const Graph& g) {
    // Bucket-sorted peeling: vertices are processed in nondecreasing current
    // degree and each neighbor with a higher current degree moves down one
    // bucket. The current degree at removal time is the shell index.
    const std::size_t n = g.vertex_count();
    ShellIndex out{std::vector<std::uint32_t>(n, 0), 0};
    if (n == 0) return out;

    std::vector<std::uint32_t> deg(n);
    std::uint32_t max_deg = 0;
    for (std::size_t v = 0; v < n; ++v) {
        deg[v] = static_cast<std::uint32_t>(g.degree(static_cast<Graph::Vertex>(v)));
        max_deg = std::max(max_deg, deg[v]);
    }
    std::vector<std::size_t> bin(max_deg + 1, 0);
    for (auto d : deg) ++bin[d];
    std::size_t start = 0;
    for (auto& b : bin) {
        const std::size_t count = b;
        b = start;
        start += count;
    }
    std::vector<std::size_t> pos(n);
    std::vector<Graph::Vertex> vert(n);
    for (std::size_t v = 0; v < n; ++v) {
        pos[v] = bin[deg[v]]++;
        vert[pos[v]] = static_cast<Graph::Vertex>(v);
    }
    for (std::size_t d = max_deg; d > 0; --d) bin[d] = bin[d - 1];
    bin[0] = 0;

    for (std::size_t i = 0; i < n; ++i) {
        const auto v = vert[i];
        for (auto u : g.neighbors(v)) {
            if (deg[u] > deg[v]) {
                const auto du = deg[u];
                const auto pu = pos[u];
                const auto pw = bin[du];
                const auto w = vert[pw];
                if (u != w) {
                    std::swap(vert[pu], vert[pw]);
                    pos[u] = pw;
                    pos[w] = pu;
                }
                ++bin[du];
                --deg[u];
            }
        }
    }
    for (std::size_t v = 0; v < n; ++v) {
        out.shell[v] = deg[v];
        out.nucleus_index = std::max(out.nucleus_index, deg[v]);
    }
    return out;
}

std::string_view to_string(AsClass c) {
    switch (c) {
        case AsClass::EC: return "EC";
        case AsClass::STP: return "STP";
        case AsClass::LTP: return "LTP";
        case AsClass::CAHP: return "CAHP";
        case AsClass::NA: return "N/A";
    }
    return "N/A";
}

std::optional<AsClass> parse_as_class(std::string_view text) {
    for (auto c : {AsClass::EC, AsClass::STP, AsClass::LTP, AsClass::CAHP, AsClass::NA})
        if (text == to_string(c)) return c;
    return std::nullopt;
}

AsClass AsClassification::label(Asn asn) const {
    auto it = labels_.find(asn);
    return it == labels_.end() ? AsClass::NA : it->second;
}

AsClassification load_classification(std::istream& in) {
    std::map<Asn, AsClass> labels;
    text::for_each_data_line(in, [&](std::size_t n, std::string_view line) {
        auto f = text::split(line, '\t');
        if (f.size() != 2) throw ParseError(n, "expected <asn>\\t<class>");
        auto asn = text::parse_int<std::uint32_t>(f[0]);
        if (!asn || *asn == 0) throw ParseError(n, "invalid AS number '" + std::string(f[0]) + "'");
        auto cls = parse_as_class(f[1]);
        if (!cls || *cls == AsClass::NA) throw ParseError(n, "unknown AS class '" + std::string(f[1]) + "'");
        labels[Asn(*asn)] = *cls;
    });
    return AsClassification(std::move(labels));
}

AsClassification load_classification_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return load_classification(in);
}

std::map<AsClass, LabelShare> nucleus_composition(const Snapshot& s, const ShellIndex& shells,
                                                  const AsClassification& cls) {
    if (shells.shell.size() != s.asns().size())
        throw ConsistencyError("shell index was computed on a different graph");
    std::map<AsClass, LabelShare> out;
    std::size_t total = 0;
    for (std::size_t v = 0; v < shells.shell.size(); ++v) {
        if (shells.shell[v] != shells.nucleus_index) continue;
        ++out[cls.label(s.asns()[v])].count;
        ++total;
    }
    for (auto& [label, share] : out)
        share.fraction = static_cast<double>(share.count) / static_cast<double>(total);
    return out;
}

std::map<AsClass, std::size_t> neighbor_type_distribution(const Snapshot& s, Asn asn, const AsClassification& cls) {
    std::map<AsClass, std::size_t> out;
    for (auto v : s.graph().neighbors(s.require(asn))) ++out[cls.label(s.asns()[v])];
    return out;
}

std::map<std::string, std::size_t> neighbor_country_distribution(const Snapshot& s, Asn asn,
                                                                 const CountryIndex& countries) {
    std::map<std::string, std::size_t> out;
    for (auto v : s.graph().neighbors(s.require(asn))) {
        auto cc = countries.country(s.asns()[v]);
        ++out[cc ? std::string(cc->str()) : std::string("--")];
    }
    return out;
}

std::map<std::string, std::size_t> neighbor_country_distribution(const Snapshot& s, Asn asn,
                                                                 const AsPrefixTable& as_table,
                                                                 const GeoPrefixTable& geo_table) {
    return neighbor_country_distribution(s, asn, CountryIndex(as_table, geo_table));
}

IxpStats ixp_stats(const Snapshot& s, Asn asn) {
    const auto v = s.require(asn);
    IxpStats out;
    std::set<std::string> exchanges;
    for (auto u : s.graph().neighbors(v)) {
        const auto* e = s.edge(asn, s.asns()[u]);
        if (!e || e->via_ixps.empty()) continue;
        ++out.ixp_link_count;
        exchanges.insert(e->via_ixps.begin(), e->via_ixps.end());
    }
    out.ixp_count = exchanges.size();
    if (const auto d = s.graph().degree(v); d > 0)
        out.ixp_link_fraction = static_cast<double>(out.ixp_link_count) / static_cast<double>(d);
    return out;
}

}  // namespace astopo
