#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "astopo/graph.hpp"
#include "astopo/metrics.hpp"

namespace astopo {

// Scalar metrics with their CSV names.
enum class Metric {
    Degree,
    AvgNeighborDegree,
    Cc,
    Assortativity,
    Density,
    Shell,
    NucleusIndex,
    BcRaw,
    BcNorm,
    TraceBc,
    PageRank,
    IxpCount,
    IxpLinks,
    IxpLinkFraction,
};

std::string_view metric_name(Metric m);
std::optional<Metric> parse_metric(std::string_view name);
// Whole-graph metrics are reported with asn "-".
bool is_graph_level(Metric m);
std::span<const Metric> all_metrics();

struct MetricOptions {
    PageRankOptions pagerank;
    unsigned threads = 1;  // betweenness workers, 0 = auto
};

// Evaluates scalar metrics on one snapshot, computing whole-graph results
// (shells, betweenness, PageRank) once on first use. Not thread safe.
class SnapshotMetrics {
public:
    explicit SnapshotMetrics(const Snapshot& s, MetricOptions opts = {});

    const Snapshot& snapshot() const { return *snapshot_; }

    // Graph-level metrics ignore asn. Per-AS metrics return none when the AS
    // is absent from the snapshot or the value is undefined for it.
    std::optional<double> value(Metric m, std::optional<Asn> asn = std::nullopt);

    const ShellIndex& shells();
    const Betweenness& bc();
    const PageRankVector& pagerank();

private:
    const Snapshot* snapshot_;
    MetricOptions opts_;
    std::optional<ShellIndex> shells_;
    std::optional<Betweenness> bc_;
    std::optional<PageRankVector> pagerank_;
};

struct SeriesPoint {
    std::string snapshot;
    std::optional<double> value;  // none: AS absent or metric undefined

    friend bool operator==(const SeriesPoint&, const SeriesPoint&) = default;
};

struct MetricSeries {
    std::string metric;
    std::optional<Asn> asn;  // none for whole-graph metrics
    std::vector<SeriesPoint> points;

    friend bool operator==(const MetricSeries&, const MetricSeries&) = default;
};

// Builds series over snapshots with strictly increasing labels. Per-AS
// metrics give one series per distinct target, in ascending AS order;
// whole-graph metrics give a single series and ignore targets.
// Throws ParameterError for an unknown metric or unordered labels.
class SeriesBuilder {
public:
    explicit SeriesBuilder(std::span<const Snapshot> snapshots, MetricOptions opts = {});

    std::vector<MetricSeries> build(std::string_view metric, std::span<const Asn> targets);

private:
    std::vector<SnapshotMetrics> evaluators_;
};

std::vector<MetricSeries> build_series(std::span<const Snapshot> snapshots, std::string_view metric,
                                       std::span<const Asn> targets, MetricOptions opts = {});

// Shortest general-format rendering that round-trips, capped at 10
// significant digits. Locale independent.
std::string format_value(double v);

// "metric,asn,snapshot,value" with rows sorted by (metric, asn, snapshot);
// "-" sorts before every AS and ASes sort numerically. None is an empty
// field. Throws IoError if the sink fails.
void export_csv(std::span<const MetricSeries> series, std::ostream& out);
// Reads export_csv output back. Throws ParseError.
std::vector<MetricSeries> parse_csv(std::istream& in);

// One bucket of a per-AS (or whole-graph) distribution.
struct DistributionRow {
    std::string metric;
    std::optional<Asn> asn;
    std::string snapshot;
    std::string key;
    double value = 0.0;
};

// "metric,asn,snapshot,key,value", sorted by (metric, asn, snapshot, key).
void export_distribution_csv(std::span<const DistributionRow> rows, std::ostream& out);

// Distribution metrics: ntype, country (per AS); nucleus_count,
// nucleus_fraction (whole graph).
bool is_distribution_metric(std::string_view name);

struct DistributionInputs {
    const AsClassification* classes = nullptr;  // none: every AS is N/A
    const CountryIndex* countries = nullptr;    // required for country
};

// Rows for one distribution metric on one snapshot. Absent ASes yield no
// rows. Throws ParameterError for an unknown name or missing inputs.
std::vector<DistributionRow> distribution_rows(SnapshotMetrics& eval, std::string_view metric,
                                               std::span<const Asn> targets, const DistributionInputs& inputs);

}  // namespace astopo
