#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <numeric>
#include <set>

#include "cl3/bqf.hpp"
#include "cl3/rank3.hpp"

using namespace cl3;

namespace {

// Classes of irreducible forms of discriminant D by brute force: every form
// with coefficients in a box, joined under the GL2(Z) generators whenever
// both ends stay inside the box.
int naive_class_count(std::int64_t D, std::int64_t box) {
    std::vector<BinaryCubicForm> forms;
    for (std::int64_t a = -box; a <= box; ++a)
        for (std::int64_t b = -box; b <= box; ++b)
            for (std::int64_t c = -box; c <= box; ++c)
                for (std::int64_t d = -box; d <= box; ++d) {
                    const BinaryCubicForm f{a, b, c, d};
                    if (f.discriminant() == D && f.is_irreducible()) forms.push_back(f);
                }
    std::map<BinaryCubicForm, std::size_t> index;
    for (std::size_t i = 0; i < forms.size(); ++i) index[forms[i]] = i;
    std::vector<std::size_t> parent(forms.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    const Mat2 gens[] = {{0, 1, 1, 0}, {1, 1, 0, 1}, {1, -1, 0, 1}, {-1, 0, 0, 1}};
    for (std::size_t i = 0; i < forms.size(); ++i)
        for (const Mat2& g : gens) {
            const auto it = index.find(forms[i].transform(g));
            if (it != index.end()) parent[find(i)] = find(it->second);
        }
    std::set<std::size_t> roots;
    for (std::size_t i = 0; i < forms.size(); ++i) roots.insert(find(i));
    return static_cast<int>(roots.size());
}

}  // namespace

TEST_CASE("cubic class counts") {
    CHECK(cubic_class_count(FundamentalDiscriminant(-23)) == 1);
    CHECK(cubic_class_count(FundamentalDiscriminant(5)) == 0);
    CHECK(cubic_class_count(FundamentalDiscriminant(229)) == 1);
    CHECK(cubic_class_count(FundamentalDiscriminant(-3299)) == 4);
}

TEST_CASE("cubic class counts against brute-force orbits") {
    for (std::int64_t D : {-23, -31, -52, -59, 5, 8, 229, 257, 316, 321, -3, -4}) {
        CAPTURE(D);
        CHECK(cubic_class_count(FundamentalDiscriminant(D)) == naive_class_count(D, 7));
    }
}

TEST_CASE("representatives have the right discriminant and are primitive") {
    for (std::int64_t D = -2000; D <= 2000; ++D) {
        if (!is_fundamental(D)) continue;
        for (const auto& f : cubic_class_representatives(FundamentalDiscriminant(D))) {
            REQUIRE(f.discriminant() == D);
            REQUIRE(f.content() == 1);
            REQUIRE(f.is_irreducible());
        }
    }
}

TEST_CASE("three_rank examples") {
    CHECK(three_rank(FundamentalDiscriminant(-4)) == 0);
    CHECK(three_rank(FundamentalDiscriminant(-23)) == 1);
    CHECK(three_rank(FundamentalDiscriminant(-3299)) == 2);
    CHECK(three_rank(FundamentalDiscriminant(-3896)) == 2);
    CHECK(log3_exact(27) == 3);
    CHECK_FALSE(log3_exact(6).has_value());
}

TEST_CASE("no 3-torsion below 23") {
    for (std::int64_t D = -22; D <= 22; ++D)
        if (is_fundamental(D)) CHECK(three_rank(FundamentalDiscriminant(D)) == 0);
}

TEST_CASE("per-D ranks agree with the class group oracle") {
    for (std::int64_t D = -3; D > -8000; --D) {
        if (!is_fundamental(D)) continue;
        const FundamentalDiscriminant F(D);
        REQUIRE(three_rank(F) == bqf::oracle_three_rank(F));
    }
}

TEST_CASE("Scholz reflection for small d") {
    for (std::int64_t d = 2; d <= 2000; ++d) {
        if (!is_squarefree(d)) continue;
        const int rp = three_rank(fundamental_discriminant_of(d));
        const int rm = three_rank(fundamental_discriminant_of(-3 * d));
        CAPTURE(d);
        REQUIRE(rp <= rm);
        REQUIRE(rm <= rp + 1);
    }
}

TEST_CASE("rank_table small example") {
    const RankTable t = rank_table(30, 2);
    std::vector<std::int64_t> Ds;
    for (const auto& r : t.records()) {
        Ds.push_back(r.D);
        CHECK(r.r3 == (r.D == -23 ? 1 : 0));
    }
    CHECK(Ds == std::vector<std::int64_t>{-24, -23, -20, -19, -15, -11, -8, -7, -4, -3});
    CHECK_THROWS_AS(t.rank(5), CoverageError);
    CHECK_THROWS_AS(t.rank(-5), std::invalid_argument);
}

TEST_CASE("empty and oversized tables") {
    CHECK(rank_table_interval(10, 5).size() == 0);
    CHECK(rank_table(1, 1).size() == 0);
    CHECK_THROWS_AS(rank_table_interval(-100, 100, TableOptions{1, 50}), std::length_error);
}

TEST_CASE("table equals per-D on |D| <= 1000") {
    const RankTable t = rank_table(1001, 1001);
    for (std::int64_t D = -1000; D <= 1000; ++D) {
        if (!is_fundamental(D)) {
            REQUIRE_FALSE(t.find(D).has_value());
            continue;
        }
        REQUIRE(t.rank(D) == three_rank(FundamentalDiscriminant(D)));
    }
}

TEST_CASE("table on an offset interval equals the same slice of a larger table") {
    const RankTable big = rank_table_interval(-60'000, 60'000);
    const RankTable part = rank_table_interval(-50'017, -31'000);
    const RankTable part2 = rank_table_interval(41'003, 59'999);
    for (const auto& r : part.records()) REQUIRE(big.rank(r.D) == r.r3);
    for (const auto& r : part2.records()) REQUIRE(big.rank(r.D) == r.r3);
    CHECK(part.size() + 0 > 0);
}

TEST_CASE("thread count does not change the table") {
    const RankTable one = rank_table(100'000, 100'000, TableOptions{1});
    const RankTable four = rank_table(100'000, 100'000, TableOptions{4});
    CHECK(one == four);
}
