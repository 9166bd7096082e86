#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "astopo/ipv4.hpp"

namespace astopo {

// Immutable longest-prefix-match map from IPv4 prefixes to Payload.
//
// The nested prefix set is flattened at construction into sorted, disjoint
// address ranges, each owned by the most specific covering prefix. A lookup
// is then one binary search. Safe for any number of concurrent readers.
template <class Payload>
class PrefixTable {
public:
    struct Entry {
        Prefix prefix;
        Payload payload;
    };

    PrefixTable() = default;

    // Duplicate prefixes are allowed; the last occurrence wins.
    explicit PrefixTable(std::vector<Entry> entries) : entries_(std::move(entries)) {
        std::stable_sort(entries_.begin(), entries_.end(),
                         [](const Entry& a, const Entry& b) { return a.prefix < b.prefix; });
        std::size_t out = 0;
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (out > 0 && entries_[out - 1].prefix == entries_[i].prefix)
                entries_[out - 1] = std::move(entries_[i]);
            else if (out != i)
                entries_[out++] = std::move(entries_[i]);
            else
                ++out;
        }
        entries_.resize(out);
        flatten();
    }

    // Payload of the longest covering prefix, or nullptr.
    const Payload* lookup(Ipv4 ip) const {
        auto it = std::upper_bound(ranges_.begin(), ranges_.end(), ip.value,
                                   [](std::uint32_t v, const Range& r) { return v < r.first; });
        if (it == ranges_.begin()) return nullptr;
        --it;
        if (ip.value > it->last) return nullptr;
        return &entries_[it->entry].payload;
    }

    // Canonical entries, sorted by (base, length), one per prefix.
    std::span<const Entry> entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

private:
    struct Range {
        std::uint32_t first;
        std::uint32_t last;
        std::uint32_t entry;
    };

    void flatten() {
        ranges_.clear();
        struct Open {
            std::uint64_t last;
            std::uint32_t entry;
        };
        std::vector<Open> open;  // chain of nested prefixes covering the cursor
        std::uint64_t cursor = 0;
        auto emit = [&](std::uint64_t from, std::uint64_t to, std::uint32_t entry) {
            if (from <= to)
                ranges_.push_back({static_cast<std::uint32_t>(from), static_cast<std::uint32_t>(to), entry});
        };
        for (std::uint32_t i = 0; i < entries_.size(); ++i) {
            const std::uint64_t first = entries_[i].prefix.base().value;
            const std::uint64_t last = entries_[i].prefix.last().value;
            while (!open.empty() && open.back().last < first) {
                emit(cursor, open.back().last, open.back().entry);
                cursor = open.back().last + 1;
                open.pop_back();
            }
            if (!open.empty() && first > cursor) emit(cursor, first - 1, open.back().entry);
            cursor = first;
            open.push_back({last, i});
        }
        while (!open.empty()) {
            emit(cursor, open.back().last, open.back().entry);
            cursor = open.back().last + 1;
            open.pop_back();
        }
    }

    std::vector<Entry> entries_;
    std::vector<Range> ranges_;
};

}  // namespace astopo
