#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cl3/rank3.hpp"

namespace cl3 {

/// Malformed cache file, conflicting entries or I/O failure.
class CacheError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Persistent r3 table: CSV rows `D,r3` plus a `<path>.json` manifest
/// listing the closed intervals the rows cover completely.
class RankCache {
public:
    using Interval = std::pair<std::int64_t, std::int64_t>;

    RankCache() = default;
    static RankCache from_table(const RankTable& table);

    const std::vector<Interval>& intervals() const { return intervals_; }
    const std::vector<RankRecord>& records() const { return records_; }

    bool covers(std::int64_t lo, std::int64_t hi) const;
    std::optional<int> find(std::int64_t D) const;

    /// Dense table over [lo, hi]; throws CoverageError unless covered.
    RankTable table(std::int64_t lo, std::int64_t hi) const;

    friend bool operator==(const RankCache&, const RankCache&) = default;
    friend RankCache cache_merge(const RankCache& a, const RankCache& b);
    friend RankCache cache_load(const std::string& path);

private:
    std::vector<Interval> intervals_;   // sorted, disjoint
    std::vector<RankRecord> records_;   // ascending D
};

std::string manifest_path(const std::string& csv_path);

RankCache cache_load(const std::string& path);
void cache_store(const RankCache& cache, const std::string& path);
/// Union of coverage and entries; throws CacheError on a conflicting r3.
RankCache cache_merge(const RankCache& a, const RankCache& b);

/// The CSV text alone: header `D,r3`, ascending rows, LF endings.
std::string table_csv(const std::vector<RankRecord>& records);
void write_table_csv(const RankTable& table, const std::string& path);

}  // namespace cl3
