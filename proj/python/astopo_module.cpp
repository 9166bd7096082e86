#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "astopo/error.hpp"
#include "astopo/graph.hpp"
#include "astopo/ingest.hpp"
#include "astopo/metrics.hpp"
#include "astopo/resolution.hpp"
#include "astopo/trends.hpp"

namespace py = pybind11;
using namespace astopo;

namespace {

std::uint32_t parse_ip(const std::string& text) {
    auto ip = parse_ipv4(text);
    if (!ip) throw py::value_error("invalid IPv4 address '" + text + "'");
    return ip->value;
}

template <class Loader>
auto from_text(const std::string& text, Loader loader) {
    std::istringstream in(text);
    return loader(in);
}

std::optional<std::uint32_t> as_lookup(const AsPrefixTable& t, const std::string& ip) {
    if (const auto* asn = t.lookup(Ipv4(parse_ip(ip)))) return asn->value();  // 0 = unresolved
    return std::nullopt;
}

py::list path_to_python(const AsPath& path) {
    py::list out;
    for (const auto& el : path.elements) {
        if (const auto* as = std::get_if<AsHop>(&el))
            out.append(py::make_tuple("as", as->asn.value()));
        else if (const auto* ixp = std::get_if<IxpHop>(&el))
            out.append(py::make_tuple("ixp", ixp->ixp.id));
        else
            out.append(py::make_tuple("break", py::none()));
    }
    return out;
}

std::string snapshot_dump(const Snapshot& s) {
    std::ostringstream out;
    write_snapshot(s, out);
    return out.str();
}

}  // namespace

PYBIND11_MODULE(_astopo, m) {
    m.doc() = "AS-level topology snapshots and metrics from traceroute corpora";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<NotFoundError>(m, "NotFoundError", PyExc_KeyError);
    py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ConsistencyError>(m, "ConsistencyError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::class_<AsPrefixTable>(m, "AsPrefixTable")
        .def("__len__", &AsPrefixTable::size)
        .def("lookup", &as_lookup, py::arg("ip"),
             "AS number of the longest covering prefix (0 for MOAS/AS-set), or None");
    py::class_<IxpPrefixTable>(m, "IxpPrefixTable")
        .def("__len__", &IxpPrefixTable::size)
        .def("lookup", [](const IxpPrefixTable& t, const std::string& ip) -> std::optional<std::string> {
            if (const auto* x = t.lookup(Ipv4(parse_ip(ip)))) return x->id;
            return std::nullopt;
        });
    py::class_<GeoPrefixTable>(m, "GeoPrefixTable")
        .def("__len__", &GeoPrefixTable::size)
        .def("lookup", [](const GeoPrefixTable& t, const std::string& ip) -> std::optional<std::string> {
            if (const auto* c = t.lookup(Ipv4(parse_ip(ip)))) return std::string(c->str());
            return std::nullopt;
        });

    m.def("load_as_prefixes", [](const std::string& text) { return from_text(text, load_as_prefix_table); },
          py::arg("text"));
    m.def("load_ixp_prefixes", [](const std::string& text) { return from_text(text, load_ixp_prefix_table); },
          py::arg("text"));
    m.def("load_geo_prefixes", [](const std::string& text) { return from_text(text, load_geo_prefix_table); },
          py::arg("text"));
    m.def(
        "as_country",
        [](const AsPrefixTable& as_table, const GeoPrefixTable& geo, std::uint32_t asn) -> std::optional<std::string> {
            if (auto cc = as_country(as_table, geo, Asn(asn))) return std::string(cc->str());
            return std::nullopt;
        },
        py::arg("as_table"), py::arg("geo_table"), py::arg("asn"));

    py::class_<TracerouteRecord>(m, "TracerouteRecord")
        .def_readonly("timestamp", &TracerouteRecord::timestamp)
        .def_property_readonly("src", [](const TracerouteRecord& r) { return to_string(r.src); })
        .def_property_readonly("dst", [](const TracerouteRecord& r) { return to_string(r.dst); })
        .def_property_readonly("hops",
                               [](const TracerouteRecord& r) {
                                   std::vector<std::pair<std::uint32_t, std::optional<std::string>>> out;
                                   for (const auto& h : r.hops)
                                       out.emplace_back(h.ttl, h.ip ? std::optional(to_string(*h.ip)) : std::nullopt);
                                   return out;
                               })
        .def("__str__", &format_trace_line);

    m.def(
        "parse_traces",
        [](const std::string& text) {
            auto corpus = from_text(text, [](std::istream& in) { return parse_trace_stream(in); });
            return py::make_tuple(corpus.records, corpus.summary.skipped);
        },
        py::arg("text"), "Returns (records, skipped_line_count)");

    py::class_<AsPath>(m, "AsPath")
        .def_property_readonly("elements", &path_to_python)
        .def("__str__", [](const AsPath& p) { return to_string(p); });

    m.def("trace_to_as_path", &trace_to_as_path, py::arg("record"), py::arg("as_table"), py::arg("ixp_table"));

    py::class_<Snapshot>(m, "Snapshot")
        .def_property_readonly("label", &Snapshot::label)
        .def_property_readonly("asns",
                               [](const Snapshot& s) {
                                   std::vector<std::uint32_t> out;
                                   for (auto a : s.asns()) out.push_back(a.value());
                                   return out;
                               })
        .def_property_readonly("edge_count", [](const Snapshot& s) { return s.edges().size(); })
        .def_property_readonly("trace_total", &Snapshot::trace_total)
        .def("degree", [](const Snapshot& s, std::uint32_t asn) { return degree(s, Asn(asn)); })
        .def("neighbors",
             [](const Snapshot& s, std::uint32_t asn) {
                 std::vector<std::uint32_t> out;
                 for (auto a : neighbors(s, Asn(asn))) out.push_back(a.value());
                 return out;
             })
        .def("dump", &snapshot_dump)
        .def("stats", [](const Snapshot& s) {
            auto st = graph_stats(s);
            return py::make_tuple(st.n, st.m, st.density);
        });

    m.def(
        "build_snapshot",
        [](const std::string& label, const std::vector<AsPath>& paths, unsigned threads) {
            py::gil_scoped_release release;
            return build_snapshot(label, paths, threads);
        },
        py::arg("label"), py::arg("paths"), py::arg("threads") = 1);
    m.def(
        "read_snapshot", [](const std::string& text) { return from_text(text, read_snapshot); }, py::arg("text"));

    m.def(
        "metric",
        [](const Snapshot& s, const std::string& name, std::optional<std::uint32_t> asn, double damping, double tol,
           int max_iter) {
            auto metric = parse_metric(name);
            if (!metric) throw ParameterError("unknown metric '" + name + "'");
            MetricOptions opts;
            opts.pagerank = {damping, tol, max_iter, 1};
            SnapshotMetrics eval(s, opts);
            return eval.value(*metric, asn ? std::optional(Asn(*asn)) : std::nullopt);
        },
        py::arg("snapshot"), py::arg("name"), py::arg("asn") = py::none(), py::arg("damping") = 0.85,
        py::arg("tol") = 1e-10, py::arg("max_iter") = 100,
        "Scalar metric by CSV name; None when undefined or the AS is absent");

    m.def(
        "betweenness",
        [](const Snapshot& s, unsigned threads) {
            Betweenness bc;
            {
                py::gil_scoped_release release;
                bc = betweenness(s.graph(), threads);
            }
            py::dict out;
            for (std::size_t v = 0; v < bc.raw.size(); ++v)
                out[py::int_(s.asns()[v].value())] = py::make_tuple(bc.raw[v], bc.normalized[v]);
            return out;
        },
        py::arg("snapshot"), py::arg("threads") = 1, "{asn: (raw, normalized)}");

    m.def(
        "pagerank",
        [](const Snapshot& s, double damping, double tol, int max_iter) {
            auto pr = pagerank(s.graph(), {damping, tol, max_iter, 1});
            py::dict scores;
            for (std::size_t v = 0; v < pr.score.size(); ++v) scores[py::int_(s.asns()[v].value())] = pr.score[v];
            return py::make_tuple(scores, pr.iterations_used, pr.residual);
        },
        py::arg("snapshot"), py::arg("damping") = 0.85, py::arg("tol") = 1e-10, py::arg("max_iter") = 100);

    m.def(
        "kshell",
        [](const Snapshot& s) {
            auto shells = kshell_decompose(s.graph());
            py::dict out;
            for (std::size_t v = 0; v < shells.shell.size(); ++v) out[py::int_(s.asns()[v].value())] = shells.shell[v];
            return py::make_tuple(out, shells.nucleus_index);
        },
        py::arg("snapshot"), "({asn: shell}, nucleus_index)");

    m.def(
        "trend_csv",
        [](const std::vector<const Snapshot*>& snaps, const std::vector<std::string>& names,
           const std::vector<std::uint32_t>& targets) {
            std::vector<Snapshot> copies;
            for (const auto* s : snaps) copies.push_back(*s);
            std::vector<Asn> asns;
            for (auto t : targets) asns.emplace_back(t);
            SeriesBuilder builder(copies);
            std::vector<MetricSeries> series;
            for (const auto& n : names) {
                auto part = builder.build(n, asns);
                series.insert(series.end(), part.begin(), part.end());
            }
            std::ostringstream out;
            export_csv(series, out);
            return out.str();
        },
        py::arg("snapshots"), py::arg("names"), py::arg("targets"),
        "CSV metric,asn,snapshot,value for the given metrics over ordered snapshots");

    m.def("format_value", &format_value, py::arg("value"));
}
