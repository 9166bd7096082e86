"""AS-level topology snapshots and metrics from traceroute corpora."""

from ._astopo import (
    AsPath,
    AsPrefixTable,
    ConsistencyError,
    GeoPrefixTable,
    IoError,
    IxpPrefixTable,
    NotFoundError,
    ParameterError,
    ParseError,
    Snapshot,
    TracerouteRecord,
    as_country,
    betweenness,
    build_snapshot,
    format_value,
    kshell,
    load_as_prefixes,
    load_geo_prefixes,
    load_ixp_prefixes,
    metric,
    pagerank,
    parse_traces,
    read_snapshot,
    trace_to_as_path,
    trend_csv,
)

__all__ = [name for name in dir() if not name.startswith("_")]
