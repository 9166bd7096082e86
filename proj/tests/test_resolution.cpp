#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "astopo/error.hpp"
#include "astopo/resolution.hpp"
#include "oracles.hpp"

using namespace astopo;

namespace {

Ipv4 ip(const char* text) {
    return *parse_ipv4(text);
}

AsPrefixTable as_table(const std::string& text) {
    std::istringstream in(text);
    return load_as_prefix_table(in);
}

GeoPrefixTable geo_table(const std::string& text) {
    std::istringstream in(text);
    return load_geo_prefix_table(in);
}

IxpPrefixTable ixp_table(const std::string& text) {
    std::istringstream in(text);
    return load_ixp_prefix_table(in);
}

std::optional<std::uint32_t> resolve(const AsPrefixTable& t, Ipv4 addr) {
    if (const auto* a = t.lookup(addr)) return a->value();
    return std::nullopt;
}

using ScanEntries = std::vector<std::tuple<std::uint32_t, unsigned, std::uint32_t>>;

// Random prefixes, nested and disjoint, as text plus the scan oracle's view.
std::pair<std::string, ScanEntries> random_as_prefixes(std::mt19937_64& rng, std::size_t count) {
    std::ostringstream text;
    ScanEntries entries;
    std::uniform_int_distribution<std::uint32_t> addr;
    std::uniform_int_distribution<unsigned> len(8, 32);
    std::uniform_int_distribution<std::uint32_t> asn(1, 65000);
    std::vector<Prefix> placed;
    for (std::size_t i = 0; i < count; ++i) {
        Prefix p;
        // Half of the prefixes nest inside one already placed.
        if (!placed.empty() && i % 2 == 1) {
            const auto& outer = placed[std::uniform_int_distribution<std::size_t>(0, placed.size() - 1)(rng)];
            const unsigned l = std::min(32u, outer.length() + 1 + len(rng) % 8);
            p = Prefix(Ipv4(outer.base().value | (addr(rng) & ~Prefix::mask(outer.length()))), l);
        } else {
            p = Prefix(Ipv4(addr(rng)), len(rng));
        }
        placed.push_back(p);
        const auto a = asn(rng);
        text << to_string(p) << '\t' << a << '\n';
        entries.emplace_back(p.base().value, p.length(), a);
    }
    return {text.str(), entries};
}

// Probes: half uniform, half inside a known prefix.
std::vector<std::uint32_t> probes_for(std::mt19937_64& rng, const ScanEntries& entries, std::size_t count) {
    std::uniform_int_distribution<std::uint32_t> addr;
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < count; ++i) {
        if (i % 2 == 0 || entries.empty()) {
            out.push_back(addr(rng));
        } else {
            const auto& [base, len, a] = entries[std::uniform_int_distribution<std::size_t>(0, entries.size() - 1)(rng)];
            out.push_back(base | (addr(rng) & ~Prefix::mask(len)));
        }
    }
    return out;
}

}  // namespace

TEST_CASE("ipv4 parsing is strict") {
    CHECK(parse_ipv4("1.2.3.4")->value == 0x01020304u);
    CHECK(parse_ipv4("255.255.255.255")->value == 0xffffffffu);
    for (const char* bad : {"1.2.3", "1.2.3.4.5", "256.1.1.1", "1.2.3.-4", " 1.2.3.4", "1..2.3", "a.b.c.d", ""})
        CHECK_MESSAGE(!parse_ipv4(bad), bad);
    CHECK(to_string(ip("10.0.200.7")) == "10.0.200.7");
}

TEST_CASE("prefixes are canonical") {
    auto p = parse_prefix("1.2.3.4/8");
    REQUIRE(p);
    CHECK(to_string(*p) == "1.0.0.0/8");
    CHECK(parse_prefix("0.0.0.0/0")->size() == (std::uint64_t{1} << 32));
    CHECK(!parse_prefix("1.2.3.4/33"));
    CHECK(!parse_prefix("1.2.3.4"));
    CHECK(Prefix(ip("1.2.3.4"), 32).contains(ip("1.2.3.4")));
    CHECK(!Prefix(ip("1.2.3.4"), 32).contains(ip("1.2.3.5")));
}

TEST_CASE("private and reserved ranges") {
    for (const char* a : {"10.1.2.3", "172.16.0.1", "172.31.255.255", "192.168.4.4", "127.0.0.1", "0.1.2.3",
                          "224.0.0.5", "239.255.255.255"})
        CHECK_MESSAGE(is_private_or_reserved(ip(a)), a);
    for (const char* a : {"172.32.0.1", "11.0.0.1", "192.169.0.1", "8.8.8.8"})
        CHECK_MESSAGE(!is_private_or_reserved(ip(a)), a);
}

TEST_CASE("load_as_prefix_table: single, MOAS and SET entries") {
    auto t = as_table("# comment\n1.0.0.0/8\t10\n2.0.0.0/8\t7,9\n3.0.0.0/8\tSET\n\n");
    CHECK(t.size() == 3);
    CHECK(resolve(t, ip("1.2.3.4")) == 10u);
    REQUIRE(t.lookup(ip("2.0.0.1")));
    CHECK(*t.lookup(ip("2.0.0.1")) == Asn::unresolved());
    CHECK(!t.lookup(ip("3.3.3.3"))->valid());
    CHECK(Asn::unresolved() != Asn(1));
}

TEST_CASE("load_as_prefix_table: errors carry the line number") {
    auto line_of = [](const std::string& text) {
        try {
            as_table(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return std::size_t{0};
    };
    CHECK(line_of("1.0.0.0/8\t10\n1.0.0/8\t10\n") == 2);
    CHECK(line_of("# x\n1.0.0.0/8\tten\n") == 2);
    CHECK(line_of("1.0.0.0/8\t10,x\n") == 1);
    CHECK(line_of("1.0.0.0/8 10\n") == 1);
    CHECK(as_table("").empty());
}

TEST_CASE("duplicate prefix lines keep the last occurrence") {
    auto t = as_table("1.0.0.0/8\t10\n1.0.0.0/8\t11\n1.2.3.4/8\t12\n");
    CHECK(t.size() == 1);
    CHECK(resolve(t, ip("1.9.9.9")) == 12u);
}

TEST_CASE("lookup_ip: longest prefix wins") {
    auto t = as_table("1.0.0.0/8\t10\n1.2.0.0/16\t20\n");
    CHECK(resolve(t, ip("1.2.3.4")) == 20u);
    CHECK(resolve(t, ip("1.3.0.0")) == 10u);
    CHECK(!resolve(t, ip("9.9.9.9")));
    CHECK(!resolve(t, ip("0.255.255.255")));
    CHECK(!resolve(t, ip("2.0.0.0")));
}

TEST_CASE("lookup_ip: edges of the address space") {
    auto t = as_table("0.0.0.0/0\t1\n255.255.255.255/32\t2\n0.0.0.0/32\t3\n128.0.0.0/1\t4\n");
    CHECK(resolve(t, ip("0.0.0.0")) == 3u);
    CHECK(resolve(t, ip("0.0.0.1")) == 1u);
    CHECK(resolve(t, ip("127.255.255.255")) == 1u);
    CHECK(resolve(t, ip("128.0.0.0")) == 4u);
    CHECK(resolve(t, ip("255.255.255.254")) == 4u);
    CHECK(resolve(t, ip("255.255.255.255")) == 2u);
}

TEST_CASE("lookup_ip matches the linear-scan oracle on random tables") {
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
        std::mt19937_64 rng(seed);
        auto [text, entries] = random_as_prefixes(rng, 10000);
        const auto t = as_table(text);
        for (auto probe : probes_for(rng, entries, 10000))
            REQUIRE(resolve(t, Ipv4(probe)) == oracle::lpm_linear_scan(entries, probe));
    }
}

TEST_CASE("a 300,000-prefix corpus loads and matches the oracle") {
    std::mt19937_64 rng(42);
    auto [text, entries] = random_as_prefixes(rng, 300000);
    const auto t = as_table(text);
    CHECK(t.size() <= entries.size());
    for (auto probe : probes_for(rng, entries, 300))
        REQUIRE(resolve(t, Ipv4(probe)) == oracle::lpm_linear_scan(entries, probe));
}

TEST_CASE("a dumped table reloads with identical lookups") {
    std::mt19937_64 rng(7);
    auto [text, entries] = random_as_prefixes(rng, 5000);
    text += "99.0.0.0/8\t1,2\n";
    const auto t = as_table(text);
    std::ostringstream dumped;
    dump(t, dumped);
    const auto again = as_table(dumped.str());
    std::ostringstream dumped_again;
    dump(again, dumped_again);
    CHECK(dumped.str() == dumped_again.str());
    std::uniform_int_distribution<std::uint32_t> addr;
    for (int i = 0; i < 200000; ++i) {
        const Ipv4 a(addr(rng));
        REQUIRE(resolve(t, a) == resolve(again, a));
    }
}

TEST_CASE("MOAS and AS-set entries never leak a concrete AS") {
    std::mt19937_64 rng(11);
    std::ostringstream text;
    std::vector<Prefix> unresolved;
    std::uniform_int_distribution<std::uint32_t> addr;
    for (int i = 0; i < 500; ++i) {
        Prefix p(Ipv4(addr(rng)), 16 + i % 8);
        text << to_string(p) << '\t' << (i % 2 ? "SET" : "64500,64501") << '\n';
        unresolved.push_back(p);
    }
    const auto t = as_table(text.str());
    for (const auto& p : unresolved) {
        const auto* a = t.lookup(Ipv4(p.last().value));
        REQUIRE(a);
        CHECK(!a->valid());
    }
}

TEST_CASE("load_ixp_prefix_table") {
    SUBCASE("prefixes of one exchange share an identity") {
        auto t = ixp_table("80.81.192.0/22\tDECIX\tDE-CIX Frankfurt\n80.81.200.0/24\tDECIX\tDE-CIX Frankfurt\n");
        REQUIRE(t.lookup(ip("80.81.193.1")));
        REQUIRE(t.lookup(ip("80.81.200.9")));
        CHECK(*t.lookup(ip("80.81.193.1")) == *t.lookup(ip("80.81.200.9")));
        CHECK(t.lookup(ip("80.81.193.1"))->name == "DE-CIX Frankfurt");
    }
    SUBCASE("393 prefixes over 278 exchanges") {
        std::ostringstream text;
        for (int i = 0; i < 393; ++i) {
            const int id = i < 278 ? i : i % 278;
            text << "100." << (i / 256) << '.' << (i % 256) << ".0/24\tIX" << id << "\tExchange " << id << '\n';
        }
        auto t = ixp_table(text.str());
        CHECK(t.size() == 393);
        std::set<std::string> ids;
        for (const auto& e : t.entries()) ids.insert(e.payload.id);
        CHECK(ids.size() == 278);
    }
    SUBCASE("empty file gives an empty table") {
        auto t = ixp_table("");
        CHECK(t.empty());
        CHECK(!t.lookup(ip("80.81.193.1")));
    }
    SUBCASE("malformed lines") {
        CHECK_THROWS_AS(ixp_table("80.81.192.0/22\tDECIX\n"), ParseError);
        CHECK_THROWS_AS(ixp_table("80.81.192.0/22\tDE,CIX\tname\n"), ParseError);
        CHECK_THROWS_AS(ixp_table("80.81.192/22\tDECIX\tname\n"), ParseError);
    }
}

TEST_CASE("load_geo_prefix_table") {
    auto t = geo_table("5.0.0.0/24\tDE\n");
    REQUIRE(t.lookup(ip("5.0.0.7")));
    CHECK(t.lookup(ip("5.0.0.7"))->str() == "DE");
    CHECK_THROWS_AS(geo_table("5.0.0.0/24\tde\n"), ParseError);
    CHECK_THROWS_AS(geo_table("5.0.0.0/24\tDEU\n"), ParseError);
    CHECK_THROWS_AS(geo_table("5.0.0.0/24\tD1\n"), ParseError);
}

TEST_CASE("geo table dump equals the canonicalized input set") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::uint32_t> addr;
    std::uniform_int_distribution<unsigned> len(8, 30);
    std::uniform_int_distribution<int> letter(0, 25);
    std::ostringstream text;
    std::map<Prefix, std::string> expected;  // last occurrence wins
    for (int i = 0; i < 1000; ++i) {
        // Non-canonical bases on purpose.
        const Ipv4 base(addr(rng));
        const unsigned l = len(rng);
        std::string cc{static_cast<char>('A' + letter(rng)), static_cast<char>('A' + letter(rng))};
        text << to_string(base) << '/' << l << '\t' << cc << '\n';
        expected[Prefix(base, l)] = cc;
    }
    std::ostringstream dumped;
    dump(geo_table(text.str()), dumped);
    std::ostringstream want;
    for (const auto& [p, cc] : expected) want << to_string(p) << '\t' << cc << '\n';
    CHECK(dumped.str() == want.str());
}

TEST_CASE("as_country: majority of address space") {
    const auto geo = geo_table("1.2.0.0/16\tUS\n5.0.0.0/24\tDE\n6.0.0.0/24\tUS\n7.0.0.0/24\tDE\n");
    SUBCASE("larger prefix wins") {
        const auto t = as_table("1.2.0.0/16\t20\n5.0.0.0/24\t20\n");
        CHECK(as_country(t, geo, Asn(20))->str() == "US");
    }
    SUBCASE("ties go to the smallest code") {
        const auto t = as_table("6.0.0.0/24\t30\n7.0.0.0/24\t30\n");
        CHECK(as_country(t, geo, Asn(30))->str() == "DE");
    }
    SUBCASE("no prefixes or no geolocation") {
        const auto t = as_table("9.0.0.0/24\t40\n");
        CHECK(!as_country(t, geo, Asn(40)));
        CHECK(!as_country(t, geo, Asn(41)));
    }
    SUBCASE("unresolved is a domain error") {
        const auto t = as_table("1.2.0.0/16\t20\n");
        CHECK_THROWS_AS(as_country(t, geo, Asn::unresolved()), DomainError);
    }
}

TEST_CASE("as_country matches a summation oracle and ignores file order") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        std::mt19937_64 rng(seed);
        const char* codes[] = {"US", "DE", "FR", "JP", "BR"};
        std::uniform_int_distribution<int> code(0, 4);
        std::uniform_int_distribution<unsigned> len(16, 28);
        std::vector<std::string> as_lines, geo_lines;
        std::map<std::string, std::uint64_t> space;
        for (std::uint32_t i = 0; i < 50; ++i) {
            const Prefix p(Ipv4((30u + i) << 24), len(rng));
            as_lines.push_back(to_string(p) + "\t77\n");
            // Geolocate via a covering /8 so the prefix base resolves.
            if (i % 7 != 3) {
                const std::string cc = codes[code(rng)];
                geo_lines.push_back(to_string(Prefix(p.base(), 8)) + '\t' + cc + '\n');
                space[cc] += std::uint64_t{1} << (32 - p.length());
            }
        }
        std::string want;
        std::uint64_t best = 0;
        for (const auto& [cc, n] : space)
            if (n > best) {
                best = n;
                want = cc;
            }

        auto join = [](const std::vector<std::string>& lines) {
            std::string s;
            for (const auto& l : lines) s += l;
            return s;
        };
        const auto geo = geo_table(join(geo_lines));
        CHECK(as_country(as_table(join(as_lines)), geo, Asn(77))->str() == want);
        std::shuffle(as_lines.begin(), as_lines.end(), rng);
        const auto shuffled = as_table(join(as_lines));
        CHECK(as_country(shuffled, geo, Asn(77))->str() == want);
        CHECK(CountryIndex(shuffled, geo).country(Asn(77))->str() == want);
    }
}
