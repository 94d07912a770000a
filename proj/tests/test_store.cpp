#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "cl3/store.hpp"

using namespace cl3;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("cl3_store_" + std::to_string(::getpid()))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void spit(const std::string& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    f << text;
}

}  // namespace

TEST_CASE("csv format") {
    const RankTable t = rank_table(30, 2);
    const std::string csv = table_csv(t.records());
    CHECK(csv.rfind("D,r3\n-24,0\n-23,1\n", 0) == 0);
    CHECK(csv.back() == '\n');
    CHECK(csv.find('\r') == std::string::npos);
}

TEST_CASE("store then load round-trips byte for byte") {
    TempDir dir;
    const RankCache c = RankCache::from_table(rank_table(2000, 3000));
    cache_store(c, dir.file("a.csv"));
    const RankCache back = cache_load(dir.file("a.csv"));
    CHECK(back == c);
    cache_store(back, dir.file("b.csv"));
    CHECK(slurp(dir.file("a.csv")) == slurp(dir.file("b.csv")));
    CHECK(slurp(dir.file("a.csv.json")) == slurp(dir.file("b.csv.json")));
    CHECK(slurp(dir.file("a.csv.json")) == "{\"intervals\":[[-1999,2999]],\"format\":1}\n");
}

TEST_CASE("merge of disjoint ranges covers the union") {
    const RankCache neg = RankCache::from_table(rank_table_interval(-1000, -1));
    const RankCache pos = RankCache::from_table(rank_table_interval(1, 1000));
    const RankCache m = cache_merge(neg, pos);
    CHECK(m.covers(-1000, 1000));
    CHECK(m.intervals().size() == 1);
    CHECK(m.table(-1000, 1000) == rank_table_interval(-1000, 1000));
    CHECK(m.find(-23) == 1);
    CHECK_FALSE(m.find(-24 * 1000).has_value());

    const RankCache far = RankCache::from_table(rank_table_interval(5000, 6000));
    const RankCache gap = cache_merge(m, far);
    CHECK(gap.intervals().size() == 2);
    CHECK_FALSE(gap.covers(900, 5100));
    CHECK_THROWS_AS(gap.table(900, 5100), CoverageError);
    CHECK(cache_merge(gap, gap) == gap);
}

TEST_CASE("conflicting entries are rejected") {
    RankTable bad = rank_table_interval(-30, -20);
    bad.set(-23, 0);
    CHECK_THROWS_AS(cache_merge(RankCache::from_table(bad), RankCache::from_table(rank_table_interval(-25, -1))),
                    CacheError);
}

TEST_CASE("malformed files") {
    TempDir dir;
    const std::string p = dir.file("c.csv");
    cache_store(RankCache::from_table(rank_table_interval(-30, -1)), p);
    const std::string good = slurp(p);

    spit(p, "D,r\n");
    CHECK_THROWS_AS(cache_load(p), CacheError);
    spit(p, good.substr(0, good.size() - 1));
    CHECK_THROWS_AS(cache_load(p), CacheError);
    // a missing row breaks completeness
    std::string missing = good;
    missing.erase(missing.find("-23,1\n"), 6);
    spit(p, missing);
    CHECK_THROWS_AS(cache_load(p), CacheError);
    // a non-fundamental row
    spit(p, "D,r3\n-24,0\n-22,0\n");
    CHECK_THROWS_AS(cache_load(p), CacheError);
    spit(p, good);
    spit(p + ".json", "{\"intervals\":[[-30,-1]],\"format\":2}\n");
    CHECK_THROWS_AS(cache_load(p), CacheError);
    spit(p + ".json", "not json");
    CHECK_THROWS_AS(cache_load(p), CacheError);
    CHECK_THROWS_AS(cache_load(dir.file("absent.csv")), CacheError);
}
