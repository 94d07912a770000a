#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cl3/bqf.hpp"

using namespace cl3;
using namespace cl3::bqf;

namespace {

// reduced forms by the textbook inequalities over a wider search box
std::vector<QuadraticForm> reduced_naive(std::int64_t D) {
    std::vector<QuadraticForm> out;
    for (std::int64_t a = 1; a * a <= -D; ++a)
        for (std::int64_t b = -a; b <= a; ++b) {
            const std::int64_t num = b * b - D;
            if (num % (4 * a)) continue;
            const std::int64_t c = num / (4 * a);
            if (c < a) continue;
            if ((b < 0) && (a == c || -b == a)) continue;
            out.push_back({a, b, c});
        }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("reduced forms examples") {
    const auto f23 = reduced_forms(FundamentalDiscriminant(-23));
    CHECK(f23 == std::vector<QuadraticForm>{{1, 1, 6}, {2, -1, 3}, {2, 1, 3}});
    CHECK(reduced_forms(FundamentalDiscriminant(-4)) == std::vector<QuadraticForm>{{1, 0, 1}});
    CHECK(reduced_forms(FundamentalDiscriminant(-3299)).size() == 27);
    CHECK(reduced_forms(FundamentalDiscriminant(-3)).size() == 1);
    CHECK(reduced_forms(FundamentalDiscriminant(-47)).size() == 5);
    CHECK_THROWS_AS(reduced_forms(FundamentalDiscriminant(5)), std::invalid_argument);
}

TEST_CASE("reduced forms against the textbook inequalities") {
    for (std::int64_t D = -3; D > -3000; --D) {
        if (!is_fundamental(D)) continue;
        REQUIRE(reduced_forms(FundamentalDiscriminant(D)) == reduced_naive(D));
    }
}

TEST_CASE("composition examples") {
    const QuadraticForm id = principal_form(-23);
    for (const auto& g : reduced_forms(FundamentalDiscriminant(-23))) CHECK(compose(id, g) == g);
    CHECK(compose({2, 1, 3}, {2, -1, 3}) == id);
    CHECK_THROWS_AS(compose({1, 1, 6}, {1, 0, 1}), std::invalid_argument);
}

TEST_CASE("group laws on small class groups") {
    for (std::int64_t D = -3; D > -1500; --D) {
        if (!is_fundamental(D)) continue;
        const auto forms = reduced_forms(FundamentalDiscriminant(D));
        if (forms.size() > 30) continue;
        const QuadraticForm id = principal_form(D);
        for (const auto& f : forms) {
            REQUIRE(compose(f, reduce(f.inverse())) == id);
            for (const auto& g : forms) {
                const QuadraticForm fg = compose(f, g);
                REQUIRE(fg.is_reduced());
                REQUIRE(fg == compose(g, f));
                if (forms.size() <= 12)
                    for (const auto& h : forms) REQUIRE(compose(fg, h) == compose(f, compose(g, h)));
            }
        }
    }
}

TEST_CASE("power matches repeated composition and reaches the class number") {
    const FundamentalDiscriminant D(-3299);
    const auto forms = reduced_forms(D);
    const QuadraticForm id = principal_form(D.value());
    for (const auto& f : forms) {
        QuadraticForm acc = id;
        for (int k = 1; k <= 5; ++k) {
            acc = compose(acc, f);
            REQUIRE(power(f, k) == acc);
        }
        REQUIRE(power(f, static_cast<std::int64_t>(forms.size())) == id);
    }
}

TEST_CASE("oracle three-rank examples") {
    CHECK(oracle_three_rank(FundamentalDiscriminant(-23)) == 1);
    CHECK(oracle_three_rank(FundamentalDiscriminant(-4)) == 0);
    CHECK(oracle_three_rank(FundamentalDiscriminant(-3299)) == 2);
}
