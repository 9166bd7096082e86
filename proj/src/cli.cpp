#include "astopo/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "astopo/error.hpp"
#include "astopo/graph.hpp"
#include "astopo/ingest.hpp"
#include "astopo/metrics.hpp"
#include "astopo/parallel.hpp"
#include "astopo/resolution.hpp"
#include "astopo/trends.hpp"
#include "text.hpp"

namespace astopo::cli {

namespace {

namespace fs = std::filesystem;

// Thrown inside a subcommand to leave with a specific exit code.
struct Exit {
    int code;
    std::string message;
};

struct RunConfig {
    std::string as_prefixes;
    std::string ixp_prefixes;
    std::string geo;
    std::string classes;
    std::vector<std::string> traces;
    std::string label;
    bool month_only = false;
    std::vector<std::string> snapshots;
    std::vector<std::string> names;
    std::vector<std::uint32_t> targets;
    double damping = 0.85;
    double tol = 1e-10;
    int max_iter = 100;
    std::string out;
    unsigned threads = 0;
};

// [start, end) of the label's calendar month in seconds since the epoch (UTC).
std::pair<std::int64_t, std::int64_t> month_window(const std::string& label) {
    using namespace std::chrono;
    const int y = std::stoi(label.substr(0, 4));
    const unsigned m = static_cast<unsigned>(std::stoi(label.substr(5, 2)));
    const sys_days first{year{y} / month{m} / day{1}};
    const sys_days next{(year{y} / month{m} + months{1}) / day{1}};
    return {duration_cast<seconds>(first.time_since_epoch()).count(),
            duration_cast<seconds>(next.time_since_epoch()).count()};
}

int cmd_build(const RunConfig& cfg, std::ostream& out) {
    if (!valid_snapshot_label(cfg.label)) throw Exit{kUsageError, "--label must be YYYY-MM"};
    const auto as_table = load_as_prefix_file(cfg.as_prefixes);
    const auto ixp_table = cfg.ixp_prefixes.empty() ? IxpPrefixTable{} : load_ixp_prefix_file(cfg.ixp_prefixes);

    std::optional<std::pair<std::int64_t, std::int64_t>> window;
    if (cfg.month_only) window = month_window(cfg.label);

    std::vector<TracerouteRecord> records;
    TraceParseSummary summary;
    std::size_t outside = 0;
    for (const auto& path : cfg.traces) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open '" + path + "'");
        auto s = parse_trace_stream(in, [&](TracerouteRecord&& r) {
            if (window && (r.timestamp < window->first || r.timestamp >= window->second)) {
                ++outside;
                return;
            }
            records.push_back(std::move(r));
        });
        summary.parsed += s.parsed;
        summary.skipped += s.skipped;
    }
    if (records.empty()) throw Exit{kEmptyResult, "no parseable traceroute records"};

    const unsigned workers = resolve_threads(cfg.threads);
    std::vector<AsPath> paths(records.size());
    parallel_slices(records.size(), workers, [&](std::size_t begin, std::size_t end, unsigned) {
        for (std::size_t i = begin; i < end; ++i) {
            paths[i] = trace_to_as_path(records[i], as_table, ixp_table);
            paths[i].record_index = i;
        }
    });
    const Snapshot snap = build_snapshot(cfg.label, paths, workers);

    fs::create_directories(cfg.out);
    const fs::path target = fs::path(cfg.out) / (cfg.label + ".snap");
    write_snapshot_file(snap, target);

    std::size_t ixp_links = 0;
    for (const auto& e : snap.edges())
        if (!e.info.via_ixps.empty()) ++ixp_links;
    out << "records parsed: " << summary.parsed << '\n'
        << "records skipped: " << summary.skipped << '\n';
    if (window) out << "records outside window: " << outside << '\n';
    out << "nodes: " << snap.asns().size() << '\n'
        << "edges: " << snap.edges().size() << '\n'
        << "ixp links: " << ixp_links << '\n'
        << "snapshot: " << target.string() << '\n';
    return kOk;
}

std::vector<Snapshot> load_snapshots(const std::vector<std::string>& paths) {
    std::vector<Snapshot> snaps;
    for (const auto& p : paths) snaps.push_back(read_snapshot_file(p));
    std::sort(snaps.begin(), snaps.end(), [](const Snapshot& a, const Snapshot& b) { return a.label() < b.label(); });
    for (std::size_t i = 1; i < snaps.size(); ++i)
        if (snaps[i].label() == snaps[i - 1].label())
            throw Exit{kUsageError, "duplicate snapshot label " + snaps[i].label()};
    return snaps;
}

// Expands "all" and checks that the selection is either scalar metrics only
// or distributions only.
std::vector<std::string> resolve_names(const std::vector<std::string>& names, bool& distributions) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    auto add = [&](std::string n) {
        if (seen.insert(n).second) out.push_back(std::move(n));
    };
    for (const auto& n : names) {
        if (n == "all") {
            for (auto m : all_metrics()) add(std::string(metric_name(m)));
        } else if (parse_metric(n) || is_distribution_metric(n)) {
            add(n);
        } else {
            throw Exit{kUsageError, "unknown metric '" + n + "'"};
        }
    }
    const auto dist = std::count_if(out.begin(), out.end(), [](const auto& n) { return is_distribution_metric(n); });
    if (dist != 0 && dist != static_cast<std::ptrdiff_t>(out.size()))
        throw Exit{kUsageError, "scalar metrics and distributions cannot be mixed in one run"};
    distributions = dist != 0;
    return out;
}

int cmd_metric(const RunConfig& cfg, std::size_t min_snapshots, std::ostream& out) {
    if (cfg.snapshots.size() < min_snapshots)
        throw Exit{kUsageError, "need at least " + std::to_string(min_snapshots) + " snapshot files"};
    bool distributions = false;
    const auto names = resolve_names(cfg.names, distributions);

    MetricOptions opts;
    opts.threads = cfg.threads;
    opts.pagerank = {cfg.damping, cfg.tol, cfg.max_iter, 1};
    if (!(opts.pagerank.damping > 0.0 && opts.pagerank.damping < 1.0) || !(opts.pagerank.tol > 0.0) ||
        opts.pagerank.max_iter < 1)
        throw Exit{kUsageError, "invalid PageRank parameters"};

    const auto snaps = load_snapshots(cfg.snapshots);

    std::vector<Asn> targets;
    for (auto t : cfg.targets) targets.emplace_back(t);
    if (cfg.targets.empty()) {
        std::set<Asn> all;
        for (const auto& s : snaps) all.insert(s.asns().begin(), s.asns().end());
        targets.assign(all.begin(), all.end());
    }

    std::ostringstream buffer;
    if (!distributions) {
        SeriesBuilder builder(snaps, opts);
        std::vector<MetricSeries> series;
        for (const auto& n : names) {
            auto part = builder.build(n, targets);
            series.insert(series.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
        }
        export_csv(series, buffer);
    } else {
        std::optional<AsClassification> classes;
        if (!cfg.classes.empty()) classes = load_classification_file(cfg.classes);
        std::optional<CountryIndex> countries;
        if (!cfg.as_prefixes.empty() && !cfg.geo.empty())
            countries.emplace(load_as_prefix_file(cfg.as_prefixes), load_geo_prefix_file(cfg.geo));
        const DistributionInputs inputs{classes ? &*classes : nullptr, countries ? &*countries : nullptr};
        if (std::count(names.begin(), names.end(), "country") && !countries)
            throw Exit{kUsageError, "country needs --as-prefixes and --geo"};

        std::vector<DistributionRow> rows;
        for (const auto& s : snaps) {
            SnapshotMetrics eval(s, opts);
            for (const auto& n : names) {
                auto part = distribution_rows(eval, n, targets, inputs);
                rows.insert(rows.end(), part.begin(), part.end());
            }
        }
        export_distribution_csv(rows, buffer);
    }

    if (cfg.out.empty()) {
        out << buffer.str();
    } else {
        std::ofstream file(cfg.out, std::ios::binary);
        if (!file || !(file << buffer.str())) throw IoError("cannot write '" + cfg.out + "'");
    }
    return kOk;
}

}  // namespace

bool threads_from_env(unsigned& threads) {
    const char* env = std::getenv("ASTOPO_THREADS");
    threads = 0;
    if (!env || !*env) return true;
    auto v = text::parse_int<unsigned>(env);
    if (!v) return false;
    threads = *v;
    return true;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, unsigned threads) {
    CLI::App app{"AS-level topology snapshots and metrics from traceroute corpora", "astopo"};
    app.require_subcommand(1);
    RunConfig cfg;
    cfg.threads = threads;

    auto* build = app.add_subcommand("build", "Build a snapshot from traceroute files");
    build->add_option("--as-prefixes", cfg.as_prefixes, "Prefix to AS table")->required();
    build->add_option("--ixp-prefixes", cfg.ixp_prefixes, "IXP prefix table");
    build->add_option("--traces", cfg.traces, "Traceroute file (repeatable)")->required();
    build->add_option("--label", cfg.label, "Snapshot label, YYYY-MM")->required();
    build->add_option("--out", cfg.out, "Output directory")->required();
    build->add_flag("--month-only", cfg.month_only, "Keep only records inside the label's calendar month");

    auto add_metric_options = [&](CLI::App* sub) {
        sub->add_option("--snapshots", cfg.snapshots, "Snapshot file (repeatable)")->required();
        sub->add_option("--name", cfg.names, "Metric name or 'all' (repeatable)")->required();
        sub->add_option("--as", cfg.targets, "Target AS (repeatable); default every AS");
        sub->add_option("--classes", cfg.classes, "AS classification file");
        sub->add_option("--as-prefixes", cfg.as_prefixes, "Prefix to AS table (country distribution)");
        sub->add_option("--geo", cfg.geo, "Prefix to country table (country distribution)");
        sub->add_option("--damping", cfg.damping, "PageRank damping");
        sub->add_option("--tol", cfg.tol, "PageRank L1 tolerance");
        sub->add_option("--max-iter", cfg.max_iter, "PageRank iteration cap");
        sub->add_option("--out", cfg.out, "Output CSV file; default standard output");
    };
    auto* metric = app.add_subcommand("metric", "Compute metrics on snapshots");
    add_metric_options(metric);
    auto* trend = app.add_subcommand("trend", "Per-AS metric time series across snapshots");
    add_metric_options(trend);

    std::vector<const char*> argv{"astopo"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsageError;
    }

    try {
        if (build->parsed()) return cmd_build(cfg, out);
        if (metric->parsed()) return cmd_metric(cfg, 1, out);
        return cmd_metric(cfg, 2, out);
    } catch (const Exit& e) {
        err << "astopo: " << e.message << '\n';
        return e.code;
    } catch (const std::exception& e) {
        err << "astopo: " << e.what() << '\n';
        return kUsageError;
    }
}

}  // namespace astopo::cli
