#include "cl3/store.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cl3 {

namespace {

// True when no fundamental discriminant lies strictly between a and b.
bool gap_is_empty(std::int64_t a, std::int64_t b) {
    for (std::int64_t D = a + 1; D < b; ++D)
        if (is_fundamental(D)) return false;
    return true;
}

std::vector<RankCache::Interval> coalesce(std::vector<RankCache::Interval> v) {
    std::sort(v.begin(), v.end());
    std::vector<RankCache::Interval> out;
    for (const auto& iv : v) {
        if (iv.first > iv.second) continue;
        if (!out.empty() && (iv.first <= out.back().second + 1 || gap_is_empty(out.back().second, iv.first))) {
            out.back().second = std::max(out.back().second, iv.second);
        } else {
            out.push_back(iv);
        }
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw CacheError("cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw CacheError("cannot write " + path);
    f << text;
    if (!f.flush()) throw CacheError("write failed: " + path);
}

std::int64_t parse_int(std::string_view s, const std::string& where) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw CacheError(where + ": bad integer '" + std::string(s) + "'");
    return v;
}

}  // namespace

RankCache RankCache::from_table(const RankTable& table) {
    RankCache c;
    if (!table.empty()) c.intervals_ = coalesce({{table.lo(), table.hi()}});
    c.records_ = table.records();
    return c;
}

bool RankCache::covers(std::int64_t lo, std::int64_t hi) const {
    if (lo > hi) return true;
    for (const auto& [a, b] : intervals_)
        if (a <= lo && hi <= b) return true;
    return false;
}

std::optional<int> RankCache::find(std::int64_t D) const {
    const auto it = std::lower_bound(records_.begin(), records_.end(), D,
                                     [](const RankRecord& r, std::int64_t v) { return r.D < v; });
    if (it == records_.end() || it->D != D) return std::nullopt;
    return it->r3;
}

RankTable RankCache::table(std::int64_t lo, std::int64_t hi) const {
    if (!covers(lo, hi))
        throw CoverageError("cache does not cover [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    RankTable t(lo, hi);
    auto it = std::lower_bound(records_.begin(), records_.end(), lo,
                               [](const RankRecord& r, std::int64_t v) { return r.D < v; });
    for (; it != records_.end() && it->D <= hi; ++it) t.set(it->D, it->r3);
    return t;
}

std::string manifest_path(const std::string& csv_path) {
    return csv_path + ".json";
}

std::string table_csv(const std::vector<RankRecord>& records) {
    std::string out = "D,r3\n";
    for (const auto& r : records) {
        out += std::to_string(r.D);
        out += ',';
        out += std::to_string(r.r3);
        out += '\n';
    }
    return out;
}

void write_table_csv(const RankTable& table, const std::string& path) {
    write_file(path, table_csv(table.records()));
}

RankCache cache_load(const std::string& path) {
    RankCache c;
    std::vector<RankCache::Interval> intervals;
    try {
        const auto m = nlohmann::json::parse(read_file(manifest_path(path)));
        if (m.at("format").get<int>() != 1) throw CacheError(path + ": unsupported cache format");
        for (const auto& iv : m.at("intervals")) {
            if (iv.size() != 2) throw CacheError(path + ": interval must be [lo, hi]");
            intervals.emplace_back(iv[0].get<std::int64_t>(), iv[1].get<std::int64_t>());
        }
    } catch (const nlohmann::json::exception& e) {
        throw CacheError(manifest_path(path) + ": " + e.what());
    }

    const std::string text = read_file(path);
    std::vector<RankRecord> records;
    std::size_t pos = 0;
    int lineno = 0;
    while (pos < text.size()) {
        const std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) throw CacheError(path + ": missing final newline");
        const std::string_view line(text.data() + pos, eol - pos);
        pos = eol + 1;
        ++lineno;
        const std::string where = path + ":" + std::to_string(lineno);
        if (lineno == 1) {
            if (line != "D,r3") throw CacheError(where + ": expected header D,r3");
            continue;
        }
        const std::size_t comma = line.find(',');
        if (comma == std::string_view::npos) throw CacheError(where + ": expected D,r3");
        const RankRecord r{parse_int(line.substr(0, comma), where),
                           static_cast<int>(parse_int(line.substr(comma + 1), where))};
        if (r.r3 < 0 || r.r3 > 100) throw CacheError(where + ": r3 out of range");
        if (!records.empty() && r.D <= records.back().D) throw CacheError(where + ": rows not strictly ascending");
        if (!is_fundamental(r.D)) throw CacheError(where + ": " + std::to_string(r.D) + " is not fundamental");
        records.push_back(r);
    }
    if (lineno == 0) throw CacheError(path + ": empty file");

    c.intervals_ = coalesce(intervals);
    c.records_ = std::move(records);
    // every row inside coverage, every fundamental D in coverage present
    std::size_t inside = 0;
    for (const auto& [lo, hi] : c.intervals_) {
        const auto flags = fundamental_flags(lo, hi);
        const auto expected = static_cast<std::size_t>(std::count(flags.begin(), flags.end(), 1));
        const auto first = std::lower_bound(c.records_.begin(), c.records_.end(), lo,
                                            [](const RankRecord& r, std::int64_t v) { return r.D < v; });
        const auto last = std::upper_bound(c.records_.begin(), c.records_.end(), hi,
                                           [](std::int64_t v, const RankRecord& r) { return v < r.D; });
        const auto have = static_cast<std::size_t>(last - first);
        if (have != expected)
            throw CacheError(path + ": interval [" + std::to_string(lo) + ", " + std::to_string(hi) + "] has " +
                             std::to_string(have) + " rows, expected " + std::to_string(expected));
        inside += have;
    }
    if (inside != c.records_.size()) throw CacheError(path + ": rows outside declared coverage");
    return c;
}

void cache_store(const RankCache& cache, const std::string& path) {
    nlohmann::ordered_json m;
    m["intervals"] = nlohmann::ordered_json::array();
    for (const auto& [lo, hi] : cache.intervals()) m["intervals"].push_back({lo, hi});
    m["format"] = 1;
    write_file(path, table_csv(cache.records()));
    write_file(manifest_path(path), m.dump() + "\n");
}

RankCache cache_merge(const RankCache& a, const RankCache& b) {
    RankCache out;
    auto ia = a.records_.begin(), ib = b.records_.begin();
    while (ia != a.records_.end() || ib != b.records_.end()) {
        if (ib == b.records_.end() || (ia != a.records_.end() && ia->D < ib->D)) {
            out.records_.push_back(*ia++);
        } else if (ia == a.records_.end() || ib->D < ia->D) {
            out.records_.push_back(*ib++);
        } else {
            if (ia->r3 != ib->r3)
                throw CacheError("cache merge: conflicting r3 at D = " + std::to_string(ia->D) + " (" +
                                 std::to_string(ia->r3) + " vs " + std::to_string(ib->r3) + ")");
            out.records_.push_back(*ia++);
            ++ib;
        }
    }
    auto all = a.intervals_;
    all.insert(all.end(), b.intervals_.begin(), b.intervals_.end());
    out.intervals_ = coalesce(std::move(all));
    return out;
}

}  // namespace cl3
