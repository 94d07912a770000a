#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "cl3/search.hpp"
#include "oracles.hpp"

using namespace cl3;

namespace {

const RankTable& table() {
    static const RankTable t = rank_table(500'000, 500'000);
    return t;
}

}  // namespace

TEST_CASE("density bound") {
    CHECK(witness_density_bound(1) == Rational(1, 6));
    CHECK(witness_density_bound(2) == Rational(1, 24));
}

TEST_CASE("theorem witnesses for x + 3") {
    const FamilySpec spec = parse_family("n 1\n+ 1 3\n");
    const WitnessReport r = theorem1_witnesses(spec, 1e4, table());
    CHECK(r.satisfied);
    CHECK(r.density.value() > 0.7);
    CHECK(r.density == Rational(static_cast<std::int64_t>(r.witnesses.size()), r.scanned));
    const NormalizedFamily fam = normalize(spec);
    CHECK(r.scanned == count_T(fam, 1e4));
    // every witness re-verifies from scratch and every non-witness fails
    const auto T = enumerate_T(fam, 1e4);
    const std::set<std::int64_t> w(r.witnesses.begin(), r.witnesses.end());
    for (std::int64_t D : T) {
        const WitnessCheck c = verify_witness(fam, D);
        REQUIRE(c.ok == (w.count(D) == 1));
    }
}

TEST_CASE("mixed-sign family and the raw values") {
    const FamilySpec spec = parse_family("n 1\n+ 1 3\n- 1 1\n");
    const WitnessReport r = theorem1_witnesses(spec, 1e4, table());
    CHECK(r.satisfied);
    const NormalizedFamily fam = normalize(spec);
    const WitnessCheck c = verify_witness(fam, r.witnesses.front());
    REQUIRE(c.ok);
    CHECK(c.entries[0].raw == r.witnesses.front() + 3);
    CHECK(c.entries[1].raw == -(r.witnesses.front() + 1));
    for (const auto& e : c.entries) CHECK(oracle::fundamental(e.image));
}

TEST_CASE("large rank bound gives density one, and witnesses grow with n") {
    const FamilySpec spec1 = parse_family("n 1\n+ 1 3\n- 1 1\n");
    FamilySpec spec3 = spec1;
    spec3.n_rank = 3;
    const WitnessReport r1 = theorem1_witnesses(spec1, 2e4, table());
    const WitnessReport r3 = theorem1_witnesses(spec3, 2e4, table());
    CHECK(r3.density == Rational(1));
    const std::set<std::int64_t> big(r3.witnesses.begin(), r3.witnesses.end());
    for (std::int64_t D : r1.witnesses) REQUIRE(big.count(D) == 1);
}

TEST_CASE("invalid specs are rejected before any work") {
    FamilySpec bad;
    bad.n_rank = 1;
    for (int i = 1; i <= 6; ++i) bad.positives.push_back({1, i});
    CHECK_THROWS_AS(theorem1_witnesses(bad, 1e4, table()), std::invalid_argument);
}

TEST_CASE("coverage gaps raise") {
    const RankTable tiny = rank_table(100, 100);
    CHECK_THROWS_AS(theorem1_witnesses(parse_family("n 1\n+ 1 3\n"), 1e4, tiny), CoverageError);
    const auto [lo, hi] = required_coverage(normalize(parse_family("n 1\n+ 1 3\n- 1 1\n")), 1e4);
    CHECK(lo == -4 * ((9'985 + 1) / 2));
    CHECK(hi == (9'985 + 3) / 4);
}

TEST_CASE("corollary families") {
    const FamilySpec p1 = corollary_family(1, 1);
    CHECK(p1.s() == 1);
    CHECK(p1.r() == 0);
    const FamilySpec p2 = corollary_family(1, 2);
    CHECK(p2.r() == 5);
    CHECK(corollary_family(2, 2).r() == 23);
    CHECK(corollary_family(2, 1).s() == 7);
    CHECK_THROWS(corollary_family(1, 3));

    const WitnessReport r1 = corollary_witnesses(1, 1, 1e4, table());
    CHECK(r1.satisfied);
    const WitnessReport r2 = corollary_witnesses(1, 2, 1e5, table());
    CHECK_FALSE(r2.witnesses.empty());
    const WitnessReport tiny = corollary_witnesses(1, 2, 50, table());
    CHECK(tiny.density.value() >= 0);
}

TEST_CASE("json shape and cap") {
    const WitnessReport r = theorem1_witnesses(parse_family("n 1\n+ 1 3\n"), 1e4, table());
    const auto j = r.to_json(5);
    CHECK(j["witnesses"].size() == 5);
    CHECK(j["total"] == r.witnesses.size());
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    CHECK(std::vector<std::string>(keys.begin(), keys.begin() + 6) ==
          std::vector<std::string>{"witnesses", "total", "scanned", "density", "bound", "satisfied"});
}

TEST_CASE("integer-valued polynomials") {
    const auto sq = IntegerValuedPolynomial::from_binomial({0, 1, 2});
    for (std::int64_t d = -20; d <= 20; ++d) CHECK(sq(d) == d * d);
    const auto tri = IntegerValuedPolynomial::from_binomial({0, 0, 1});
    CHECK(tri(5) == 10);
    CHECK(tri(-3) == 6);
    CHECK_THROWS_AS(IntegerValuedPolynomial::from_binomial({1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(IntegerValuedPolynomial::from_binomial({}), std::invalid_argument);
    CHECK_THROWS_AS(IntegerValuedPolynomial::from_binomial({0, 0, 0, 0, 1})(10'000'000), std::overflow_error);
    const auto polys = parse_polys("# d and d^2\n0 1\n0 1 2  # squares\n\n");
    CHECK(polys.size() == 2);
    CHECK_THROWS_AS(parse_polys("0 x\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_polys("3 1\n"), std::invalid_argument);
}

TEST_CASE("polyprog witnesses") {
    const auto d1 = parse_polys("0 1\n");
    const PolyprogResult r = polyprog_witness(d1, 1, 100, 10);
    REQUIRE(r.witness);
    CHECK(*r.witness == std::pair<std::int64_t, std::int64_t>{4, 1});
    CHECK(r.scanned == 4);

    const auto two = parse_polys("0 1\n0 1 2\n");
    const PolyprogResult r2 = polyprog_witness(two, 1, 100, 10);
    REQUIRE(r2.witness);
    const auto [a, d] = *r2.witness;
    CHECK(a <= 100);
    CHECK(d <= 10);
    for (const auto& g : two) {
        const std::int64_t v = a + g(d);
        CHECK(oracle::fundamental(v));
        CHECK(three_rank(FundamentalDiscriminant(v)) == 0);
    }

    const PolyprogResult none = polyprog_witness(d1, 1, 2, 1);
    CHECK_FALSE(none.witness);
    CHECK(none.scanned == 2);

    // with values mapped to fundamental discriminants, a = 1, d = 1 already works (2 -> 8)
    const PolyprogResult mapped = polyprog_witness(d1, 1, 100, 10, PolyprogMode::to_fundamental);
    REQUIRE(mapped.witness);
    CHECK(*mapped.witness == std::pair<std::int64_t, std::int64_t>{1, 1});
    CHECK(mapped.values == std::vector<std::int64_t>{8});
}
