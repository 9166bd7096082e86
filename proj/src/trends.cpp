#include "astopo/trends.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <ostream>
#include <tuple>

#include "astopo/error.hpp"
#include "text.hpp"

namespace astopo {

namespace {

struct MetricInfo {
    Metric metric;
    std::string_view name;
    bool graph_level;
};

constexpr std::array<MetricInfo, 14> kMetrics{{
    {Metric::Degree, "degree", false},
    {Metric::AvgNeighborDegree, "avg_neighbor_degree", false},
    {Metric::Cc, "cc", false},
    {Metric::Assortativity, "assortativity", true},
    {Metric::Density, "density", true},
    {Metric::Shell, "shell", false},
    {Metric::NucleusIndex, "nucleus_index", true},
    {Metric::BcRaw, "bc_raw", false},
    {Metric::BcNorm, "bc_norm", false},
    {Metric::TraceBc, "trace_bc", false},
    {Metric::PageRank, "pagerank", false},
    {Metric::IxpCount, "ixp_count", false},
    {Metric::IxpLinks, "ixp_links", false},
    {Metric::IxpLinkFraction, "ixp_link_fraction", false},
}};

constexpr std::array<Metric, 14> kAll = [] {
    std::array<Metric, 14> out{};
    for (std::size_t i = 0; i < kMetrics.size(); ++i) out[i] = kMetrics[i].metric;
    return out;
}();

const MetricInfo& info(Metric m) {
    return kMetrics[static_cast<std::size_t>(m)];
}

}  // namespace

std::string_view metric_name(Metric m) {
    return info(m).name;
}

std::optional<Metric> parse_metric(std::string_view name) {
    for (const auto& mi : kMetrics)
        if (mi.name == name) return mi.metric;
    return std::nullopt;
}

bool is_graph_level(Metric m) {
    return info(m).graph_level;
}

std::span<const Metric> all_metrics() {
    return kAll;
}

SnapshotMetrics::SnapshotMetrics(const Snapshot& s, MetricOptions opts) : snapshot_(&s), opts_(opts) {}

const ShellIndex& SnapshotMetrics::shells() {
    if (!shells_) shells_ = kshell_decompose(snapshot_->graph());
    return *shells_;
}

const Betweenness& SnapshotMetrics::bc() {
    if (!bc_) bc_ = betweenness(snapshot_->graph(), opts_.threads);
    return *bc_;
}

const PageRankVector& SnapshotMetrics::pagerank() {
    if (!pagerank_) pagerank_ = astopo::pagerank(snapshot_->graph(), opts_.pagerank);
    return *pagerank_;
}

std::optional<double> SnapshotMetrics::value(Metric m, std::optional<Asn> asn) {
    const auto& s = *snapshot_;
    const auto& g = s.graph();
    switch (m) {
        case Metric::Assortativity: return assortativity(g);
        case Metric::Density: return graph_stats(g).density;
        case Metric::NucleusIndex:
            if (g.vertex_count() == 0) return std::nullopt;
            return shells().nucleus_index;
        default: break;
    }

    if (!asn) return std::nullopt;
    const auto v = s.index_of(*asn);
    if (!v) return std::nullopt;
    switch (m) {
        case Metric::Degree: return static_cast<double>(g.degree(*v));
        case Metric::AvgNeighborDegree: return avg_neighbor_degree(g, *v);
        case Metric::Cc: return clustering_coefficient(g, *v);
        case Metric::Shell: return shells().shell[*v];
        case Metric::BcRaw: return bc().raw[*v];
        case Metric::BcNorm: return bc().normalized[*v];
        case Metric::TraceBc: return trace_betweenness(s, *asn);
        case Metric::PageRank: return pagerank().score[*v];
        case Metric::IxpCount: return static_cast<double>(ixp_stats(s, *asn).ixp_count);
        case Metric::IxpLinks: return static_cast<double>(ixp_stats(s, *asn).ixp_link_count);
        case Metric::IxpLinkFraction: return ixp_stats(s, *asn).ixp_link_fraction;
        default: return std::nullopt;
    }
}

SeriesBuilder::SeriesBuilder(std::span<const Snapshot> snapshots, MetricOptions opts) {
    for (std::size_t i = 1; i < snapshots.size(); ++i)
        if (!(snapshots[i - 1].label() < snapshots[i].label()))
            throw ParameterError("snapshot labels must be strictly increasing: '" + snapshots[i - 1].label() +
                                 "' then '" + snapshots[i].label() + "'");
    evaluators_.reserve(snapshots.size());
    for (const auto& s : snapshots) evaluators_.emplace_back(s, opts);
}

std::vector<MetricSeries> SeriesBuilder::build(std::string_view metric, std::span<const Asn> targets) {
    const auto m = parse_metric(metric);
    if (!m) throw ParameterError("unknown metric '" + std::string(metric) + "'");

    std::vector<std::optional<Asn>> keys;
    if (is_graph_level(*m)) {
        keys.emplace_back();
    } else {
        std::vector<Asn> sorted(targets.begin(), targets.end());
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        keys.assign(sorted.begin(), sorted.end());
    }

    std::vector<MetricSeries> out;
    out.reserve(keys.size());
    for (const auto& key : keys) {
        MetricSeries series{std::string(metric), key, {}};
        for (auto& eval : evaluators_) series.points.push_back({eval.snapshot().label(), eval.value(*m, key)});
        out.push_back(std::move(series));
    }
    return out;
}

std::vector<MetricSeries> build_series(std::span<const Snapshot> snapshots, std::string_view metric,
                                       std::span<const Asn> targets, MetricOptions opts) {
    return SeriesBuilder(snapshots, opts).build(metric, targets);
}

std::string format_value(double v) {
    if (!std::isfinite(v)) return {};
    if (v == 0.0) return "0";
    char buf[64];
    for (int precision = 1; precision <= 10; ++precision) {
        auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, precision);
        double back = 0.0;
        std::from_chars(buf, res.ptr, back);
        if (back == v || precision == 10) return std::string(buf, res.ptr);
    }
    return {};
}

namespace {

// "-" (none) orders before every AS.
using AsnKey = std::pair<bool, std::uint32_t>;

AsnKey asn_key(const std::optional<Asn>& asn) {
    return asn ? AsnKey{true, asn->value()} : AsnKey{false, 0};
}

std::string asn_field(const std::optional<Asn>& asn) {
    return asn ? std::to_string(asn->value()) : std::string("-");
}

void check_sink(std::ostream& out) {
    if (!out) throw IoError("failed writing CSV output");
}

}  // namespace

void export_csv(std::span<const MetricSeries> series, std::ostream& out) {
    struct Row {
        std::string_view metric;
        AsnKey asn;
        std::string_view snapshot;
        const std::optional<Asn>* asn_value;
        std::optional<double> value;
    };
    std::vector<Row> rows;
    for (const auto& s : series)
        for (const auto& p : s.points) rows.push_back({s.metric, asn_key(s.asn), p.snapshot, &s.asn, p.value});
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return std::tie(a.metric, a.asn, a.snapshot) < std::tie(b.metric, b.asn, b.snapshot);
    });

    out << "metric,asn,snapshot,value\n";
    for (const auto& r : rows) {
        out << r.metric << ',' << asn_field(*r.asn_value) << ',' << r.snapshot << ','
            << (r.value ? format_value(*r.value) : std::string()) << '\n';
    }
    check_sink(out);
}

std::vector<MetricSeries> parse_csv(std::istream& in) {
    std::map<std::pair<std::string, AsnKey>, MetricSeries> grouped;
    bool header = false;
    text::for_each_line(in, [&](std::size_t n, std::string_view line) {
        if (!header) {
            if (line != "metric,asn,snapshot,value") throw ParseError(n, "expected CSV header");
            header = true;
            return;
        }
        auto f = text::split(line, ',');
        if (f.size() != 4) throw ParseError(n, "expected 4 fields");
        std::optional<Asn> asn;
        if (f[1] != "-") {
            auto v = text::parse_int<std::uint32_t>(f[1]);
            if (!v || *v == 0) throw ParseError(n, "invalid asn field");
            asn = Asn(*v);
        }
        std::optional<double> value;
        if (!f[3].empty()) {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(f[3].data(), f[3].data() + f[3].size(), v);
            if (ec != std::errc{} || ptr != f[3].data() + f[3].size()) throw ParseError(n, "invalid value");
            value = v;
        }
        auto& s = grouped[{std::string(f[0]), asn_key(asn)}];
        s.metric = f[0];
        s.asn = asn;
        s.points.push_back({std::string(f[2]), value});
    });
    if (!header) throw ParseError(0, "empty CSV");
    std::vector<MetricSeries> out;
    for (auto& [k, s] : grouped) out.push_back(std::move(s));
    return out;
}

void export_distribution_csv(std::span<const DistributionRow> rows, std::ostream& out) {
    std::vector<const DistributionRow*> sorted;
    for (const auto& r : rows) sorted.push_back(&r);
    std::stable_sort(sorted.begin(), sorted.end(), [](const DistributionRow* a, const DistributionRow* b) {
        return std::tuple(std::string_view(a->metric), asn_key(a->asn), std::string_view(a->snapshot),
                          std::string_view(a->key)) <
               std::tuple(std::string_view(b->metric), asn_key(b->asn), std::string_view(b->snapshot),
                          std::string_view(b->key));
    });
    out << "metric,asn,snapshot,key,value\n";
    for (const auto* r : sorted)
        out << r->metric << ',' << asn_field(r->asn) << ',' << r->snapshot << ',' << r->key << ','
            << format_value(r->value) << '\n';
    check_sink(out);
}

bool is_distribution_metric(std::string_view name) {
    return name == "ntype" || name == "country" || name == "nucleus_count" || name == "nucleus_fraction";
}

std::vector<DistributionRow> distribution_rows(SnapshotMetrics& eval, std::string_view metric,
                                               std::span<const Asn> targets, const DistributionInputs& inputs) {
    if (!is_distribution_metric(metric)) throw ParameterError("unknown distribution '" + std::string(metric) + "'");
    const auto& s = eval.snapshot();
    const AsClassification none;
    const AsClassification& cls = inputs.classes ? *inputs.classes : none;
    std::vector<DistributionRow> rows;
    auto add = [&](std::optional<Asn> asn, std::string key, double value) {
        rows.push_back({std::string(metric), asn, s.label(), std::move(key), value});
    };

    if (metric == "nucleus_count" || metric == "nucleus_fraction") {
        if (s.asns().empty()) return rows;
        for (const auto& [label, share] : nucleus_composition(s, eval.shells(), cls))
            add(std::nullopt, std::string(to_string(label)),
                metric == "nucleus_count" ? static_cast<double>(share.count) : share.fraction);
        return rows;
    }
    if (metric == "country" && !inputs.countries)
        throw ParameterError("country distribution needs AS prefix and geo tables");

    std::vector<Asn> sorted(targets.begin(), targets.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (Asn asn : sorted) {
        if (!s.contains(asn)) continue;
        if (metric == "ntype") {
            for (const auto& [label, count] : neighbor_type_distribution(s, asn, cls))
                add(asn, std::string(to_string(label)), static_cast<double>(count));
        } else {
            for (const auto& [code, count] : neighbor_country_distribution(s, asn, *inputs.countries))
                add(asn, code, static_cast<double>(count));
        }
    }
    return rows;
}

}  // namespace astopo
