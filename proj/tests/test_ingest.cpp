#include <doctest.h>

#include <random>
#include <sstream>

#include "astopo/error.hpp"
#include "astopo/ingest.hpp"

using namespace astopo;

namespace {

struct Tables {
    AsPrefixTable as;
    IxpPrefixTable ixp;
};

// AS1: 1.0.0.0/16, AS2: 2.0.0.0/16, AS3: 3.0.0.0/16, MOAS: 9.0.0.0/16.
// IXP X: 80.81.1.0/24, IXP Y: 80.81.2.0/24.
Tables tables() {
    std::istringstream as_in("1.0.0.0/16\t1\n2.0.0.0/16\t2\n3.0.0.0/16\t3\n9.0.0.0/16\t5,6\n");
    std::istringstream ixp_in("80.81.1.0/24\tX\tExchange X\n80.81.2.0/24\tY\tExchange Y\n");
    return {load_as_prefix_table(as_in), load_ixp_prefix_table(ixp_in)};
}

TracerouteRecord record(std::vector<const char*> hops) {
    TracerouteRecord r{1288000000, *parse_ipv4("4.4.4.4"), *parse_ipv4("8.8.8.8"), {}};
    std::uint32_t ttl = 1;
    for (const char* h : hops) {
        Hop hop{ttl++, std::nullopt};
        if (std::string_view(h) != "*") hop.ip = parse_ipv4(h);
        r.hops.push_back(hop);
    }
    return r;
}

std::string path_of(std::vector<const char*> hops) {
    const auto t = tables();
    return to_string(trace_to_as_path(record(std::move(hops)), t.as, t.ixp));
}

}  // namespace

TEST_CASE("parse_trace_line") {
    SUBCASE("three hops") {
        auto r = parse_trace_line("1288000000\t4.4.4.4\t8.8.8.8\t1:1.0.0.1,2:1.0.0.2,3:2.0.0.9");
        REQUIRE(r);
        CHECK(r->timestamp == 1288000000);
        REQUIRE(r->hops.size() == 3);
        CHECK(r->hops[0].ttl == 1);
        CHECK(r->hops[1].ttl == 2);
        CHECK(r->hops[2].ttl == 3);
        CHECK(to_string(*r->hops[2].ip) == "2.0.0.9");
    }
    SUBCASE("non-responding hop") {
        auto r = parse_trace_line("1288000000\t4.4.4.4\t8.8.8.8\t1:1.0.0.1,2:*,3:2.0.0.9");
        REQUIRE(r);
        CHECK(!r->hops[1].ip);
        CHECK(r->hops[1].ttl == 2);
    }
    SUBCASE("ttl gaps are fine, repeats and zero are not") {
        CHECK(parse_trace_line("1\t4.4.4.4\t8.8.8.8\t1:1.0.0.1,5:2.0.0.9"));
        CHECK(!parse_trace_line("1\t4.4.4.4\t8.8.8.8\t2:1.0.0.1,2:2.0.0.9"));
        CHECK(!parse_trace_line("1\t4.4.4.4\t8.8.8.8\t3:1.0.0.1,2:2.0.0.9"));
        CHECK(!parse_trace_line("1\t4.4.4.4\t8.8.8.8\t0:1.0.0.1"));
    }
    SUBCASE("malformed lines") {
        for (const char* bad : {"", "1\t4.4.4.4\t8.8.8.8", "1\t4.4.4.4\t8.8.8.8\t", "x\t4.4.4.4\t8.8.8.8\t1:1.0.0.1",
                                "1\t4.4.4\t8.8.8.8\t1:1.0.0.1", "1\t4.4.4.4\t8.8.8.8\t1-1.0.0.1",
                                "1\t4.4.4.4\t8.8.8.8\t1:1.0.0.1,", "1\t4.4.4.4\t8.8.8.8\t1:1.0.0.1\textra"})
            CHECK_MESSAGE(!parse_trace_line(bad), bad);
    }
}

TEST_CASE("parse_trace_stream counts and skips bad lines") {
    std::istringstream in(
        "# header\n"
        "1\t4.4.4.4\t8.8.8.8\t1:1.0.0.1\n"
        "garbage\n"
        "\n"
        "2\t4.4.4.4\t8.8.8.8\t1:*,2:2.0.0.1\n"
        "3\t4.4.4.4\t8.8.8.8\t1:1.0.0.1,1:1.0.0.2\n");
    auto corpus = parse_trace_stream(in);
    CHECK(corpus.summary.parsed == 2);
    CHECK(corpus.summary.skipped == 2);
    REQUIRE(corpus.records.size() == 2);
    CHECK(corpus.records[0].timestamp == 1);
    CHECK(corpus.records[1].timestamp == 2);
}

TEST_CASE("parse_trace_file reports unreadable sources") {
    CHECK_THROWS_AS(parse_trace_file("/nonexistent/traces.txt"), IoError);
}

TEST_CASE("1,000 synthetic records round-trip byte for byte") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::uint32_t> addr;
    std::uniform_int_distribution<int> hops(1, 30), gap(1, 3);
    std::bernoulli_distribution star(0.1);
    std::ostringstream text;
    for (int i = 0; i < 1000; ++i) {
        TracerouteRecord r{1262304000 + i, Ipv4(addr(rng)), Ipv4(addr(rng)), {}};
        std::uint32_t ttl = 0;
        for (int h = hops(rng); h > 0; --h) {
            ttl += static_cast<std::uint32_t>(gap(rng));
            r.hops.push_back({ttl, star(rng) ? std::nullopt : std::optional(Ipv4(addr(rng)))});
        }
        text << format_trace_line(r) << '\n';
    }
    std::istringstream in(text.str());
    auto corpus = parse_trace_stream(in);
    CHECK(corpus.summary.parsed == 1000);
    CHECK(corpus.summary.skipped == 0);
    std::ostringstream again;
    for (const auto& r : corpus.records) again << format_trace_line(r) << '\n';
    CHECK(again.str() == text.str());
}

TEST_CASE("trace_to_as_path: collapse and break rules") {
    CHECK(path_of({"1.0.0.1", "1.0.0.2", "2.0.0.1"}) == "[AS1 AS2]");
    CHECK(path_of({"1.0.0.1", "*", "2.0.0.1"}) == "[AS1 | AS2]");
    CHECK(path_of({"1.0.0.1", "80.81.1.5", "2.0.0.1"}) == "[AS1 IXP:X AS2]");
    CHECK(path_of({"1.0.0.1", "80.81.1.5", "80.81.1.6", "2.0.0.1"}) == "[AS1 IXP:X AS2]");
    CHECK(path_of({"1.0.0.1", "*", "*", "9.0.0.1", "2.0.0.1"}) == "[AS1 | AS2]");
    CHECK(path_of({"1.0.0.1", "2.0.0.1", "1.0.0.9"}) == "[AS1 AS2 AS1]");
}

TEST_CASE("trace_to_as_path: private, unresolved and unknown hops break") {
    CHECK(path_of({"1.0.0.1", "10.0.0.1", "2.0.0.1"}) == "[AS1 | AS2]");
    CHECK(path_of({"1.0.0.1", "192.168.0.1", "2.0.0.1"}) == "[AS1 | AS2]");
    CHECK(path_of({"1.0.0.1", "9.0.0.1", "2.0.0.1"}) == "[AS1 | AS2]");
    CHECK(path_of({"1.0.0.1", "77.0.0.1", "2.0.0.1"}) == "[AS1 | AS2]");
    CHECK(path_of({"192.168.1.1", "1.0.0.1", "2.0.0.1", "*"}) == "[AS1 AS2]");
    CHECK(path_of({"*", "*"}) == "[]");
}

TEST_CASE("trace_to_as_path: IXP hops need a resolved AS on both sides") {
    CHECK(path_of({"1.0.0.1", "80.81.1.5", "*", "2.0.0.1"}) == "[AS1 | AS2]");
    CHECK(path_of({"1.0.0.1", "*", "80.81.1.5", "2.0.0.1"}) == "[AS1 | AS2]");
    CHECK(path_of({"80.81.1.5", "2.0.0.1", "3.0.0.1"}) == "[AS2 AS3]");
    CHECK(path_of({"1.0.0.1", "2.0.0.1", "80.81.1.5"}) == "[AS1 AS2]");
    // Two different exchanges in a row: ambiguous.
    CHECK(path_of({"1.0.0.1", "80.81.1.5", "80.81.2.5", "2.0.0.1"}) == "[AS1 | AS2]");
    // Exchange between two hops of the same AS: merged.
    CHECK(path_of({"1.0.0.1", "80.81.1.5", "1.0.0.2", "2.0.0.1"}) == "[AS1 AS2]");
}

TEST_CASE("trace_to_as_path properties on random records") {
    const auto t = tables();
    const char* pool[] = {"1.0.0.1", "1.0.0.2", "2.0.0.1", "3.0.0.1", "9.0.0.1", "80.81.1.1",
                          "80.81.2.1", "10.1.1.1", "77.7.7.7", "*"};
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> pick(0, 9), len(0, 12);
    for (int iter = 0; iter < 5000; ++iter) {
        std::vector<const char*> hops;
        for (int i = len(rng); i > 0; --i) hops.push_back(pool[pick(rng)]);
        const auto path = trace_to_as_path(record(hops), t.as, t.ixp);
        REQUIRE_NOTHROW(validate(path));

        // Repeating any hop in place leaves the path unchanged.
        if (!hops.empty()) {
            auto dup = hops;
            const auto at = std::uniform_int_distribution<std::size_t>(0, hops.size() - 1)(rng);
            dup.insert(dup.begin() + static_cast<std::ptrdiff_t>(at), hops[at]);
            CHECK(trace_to_as_path(record(dup), t.as, t.ixp).elements == path.elements);
        }
    }
}

TEST_CASE("a trace inside one AS is a single hop") {
    CHECK(path_of({"1.0.0.1", "1.0.0.2", "1.0.0.3"}) == "[AS1]");
    CHECK(path_of({"1.0.0.1"}) == "[AS1]");
}

TEST_CASE("validate rejects broken paths") {
    const IxpIdentity x{"X", ""};
    CHECK_THROWS_AS(validate({{AsHop{Asn(1)}, AsHop{Asn(1)}}}), ConsistencyError);
    CHECK_THROWS_AS(validate({{AsHop{Asn::unresolved()}}}), ConsistencyError);
    CHECK_THROWS_AS(validate({{AsHop{Asn(1)}, Break{}, Break{}, AsHop{Asn(2)}}}), ConsistencyError);
    CHECK_THROWS_AS(validate({{AsHop{Asn(1)}, IxpHop{x}}}), ConsistencyError);
    CHECK_THROWS_AS(validate({{AsHop{Asn(1)}, IxpHop{x}, AsHop{Asn(1)}}}), ConsistencyError);
    CHECK_THROWS_AS(validate({{Break{}, AsHop{Asn(1)}}}), ConsistencyError);
    CHECK_NOTHROW(validate({{AsHop{Asn(1)}, IxpHop{x}, AsHop{Asn(2)}, Break{}, AsHop{Asn(1)}}}));
    CHECK_NOTHROW(validate({}));
}
