#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cl3/arith.hpp"
#include "oracles.hpp"

using namespace cl3;

TEST_CASE("mobius_range small values") {
    CHECK(mobius_range(1, 2) == std::vector<std::int8_t>{1});
    CHECK(mobius_range(4, 7) == std::vector<std::int8_t>{0, -1, 1});
    CHECK(mobius_range(49, 50) == std::vector<std::int8_t>{0});
    CHECK_THROWS_AS(mobius_range(0, 5), std::invalid_argument);
}

TEST_CASE("mobius_range against trial division up to 1e5") {
    const auto mu = mobius_range(1, 100'001);
    for (std::int64_t n = 1; n <= 100'000; ++n) REQUIRE(mu[n - 1] == oracle::mobius(n));
}

TEST_CASE("segmented sieve across a segment boundary") {
    const std::int64_t lo = kSegmentLength - 500, hi = kSegmentLength + 500;
    const auto mu = mobius_range(lo, hi);
    const auto sq = squarefree_flags(lo, hi);
    for (std::int64_t n = lo; n < hi; ++n) {
        REQUIRE(mu[n - lo] == oracle::mobius(n));
        REQUIRE(static_cast<bool>(sq[n - lo]) == oracle::squarefree(n));
    }
}

TEST_CASE("integer roots and bounds") {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 2000; ++k) {
        const std::uint64_t n = rng() >> (rng() % 60);
        const std::uint64_t r = isqrt(n);
        CHECK(static_cast<unsigned __int128>(r) * r <= n);
        CHECK(static_cast<unsigned __int128>(r + 1) * (r + 1) > n);
        const std::uint64_t q = iroot4(n);
        const auto q4 = [](unsigned __int128 v) { return v * v * v * v; };
        CHECK(q4(q) <= n);
        CHECK(q4(q + 1) > n);
    }
    CHECK(strict_limit(10) == 9);
    CHECK(strict_limit(10.5) == 10);
    CHECK(strict_limit(1) == 0);
    CHECK(strict_limit(1e6) == 999'999);
}

TEST_CASE("is_fundamental examples") {
    for (std::int64_t d : {5, 12, 8, -3, -4, -7, -8, -23, 229}) CHECK(is_fundamental(d));
    for (std::int64_t d : {1, 9, -9, 0, -12, 4, 16, 20, -1, 148}) CHECK_FALSE(is_fundamental(d));
    CHECK_THROWS_AS(FundamentalDiscriminant(1), std::invalid_argument);
    CHECK(FundamentalDiscriminant(-23).lambda() == Sign::negative);
    CHECK(FundamentalDiscriminant(5).lambda() == Sign::positive);
}

TEST_CASE("is_fundamental agrees with the definition") {
    for (std::int64_t d = -20'000; d <= 20'000; ++d) REQUIRE(is_fundamental(d) == oracle::fundamental(d));
}

TEST_CASE("fundamental_discriminant_of") {
    CHECK(fundamental_discriminant_of(20).value() == 5);
    CHECK(fundamental_discriminant_of(12).value() == 12);
    CHECK(fundamental_discriminant_of(-23).value() == -23);
    CHECK(fundamental_discriminant_of(75).value() == 12);
    CHECK(fundamental_discriminant_of(-1).value() == -4);
    CHECK(fundamental_discriminant_of(-27).value() == -3);
    for (std::int64_t bad : {0, 1, 4, 49}) CHECK_THROWS_AS(fundamental_discriminant_of(bad), std::invalid_argument);
    // idempotent, and t / D is a rational square
    for (std::int64_t t = -3000; t <= 3000; ++t) {
        if (t == 0) continue;
        if (t > 0 && isqrt(t) * isqrt(t) == static_cast<std::uint64_t>(t)) continue;
        const std::int64_t D = fundamental_discriminant_of(t).value();
        REQUIRE(oracle::fundamental(D));
        REQUIRE(fundamental_discriminant_of(D).value() == D);
        const __int128 prod = static_cast<__int128>(t) * D;
        REQUIRE(prod > 0);
        const auto r = isqrt(static_cast<std::uint64_t>(prod));
        REQUIRE(static_cast<__int128>(r) * r == prod);
    }
}

TEST_CASE("enumerate_S examples") {
    auto values = [](double X, CongruenceClass c, Sign s) {
        std::vector<std::int64_t> v;
        for (const auto& D : enumerate_S(X, c, s)) v.push_back(D.value());
        return v;
    };
    CHECK(values(30, CongruenceClass::make(1, 4), Sign::positive) == std::vector<std::int64_t>{5, 13, 17, 21, 29});
    CHECK(values(20, CongruenceClass::make(0, 4), Sign::negative) == std::vector<std::int64_t>{-4, -8});
    CHECK(values(2, CongruenceClass{}, Sign::positive).empty());
    CHECK(values(2, CongruenceClass{}, Sign::negative).empty());
    CHECK(count_S(30, CongruenceClass::make(1, 4), Sign::positive) == 5);
    CHECK(count_S(2, CongruenceClass{}, Sign::negative) == 0);
}

TEST_CASE("count_S and enumerate_S against brute force") {
    for (const auto& [m, N] : {std::pair{0, 1}, std::pair{1, 4}, std::pair{0, 4}, std::pair{1, 3}, std::pair{5, 8},
                               std::pair{2, 3}, std::pair{7, 12}}) {
        const CongruenceClass c = CongruenceClass::make(m, N);
        for (const Sign s : {Sign::negative, Sign::positive}) {
            std::vector<std::int64_t> expect;
            for (std::int64_t a = 1; a < 5000; ++a) {
                const std::int64_t D = sign_value(s) * a;
                if (oracle::fundamental(D) && oracle::mod(D, N) == m) expect.push_back(D);
            }
            std::vector<std::int64_t> got;
            for (const auto& D : enumerate_S(5000, c, s)) got.push_back(D.value());
            REQUIRE(got == expect);
            REQUIRE(count_S(5000, c, s) == expect.size());
        }
    }
}

TEST_CASE("membership in S matches is_fundamental") {
    for (std::int64_t d = -500; d <= 500; ++d) {
        if (d == 0) continue;
        const auto S = enumerate_S(static_cast<double>(std::abs(d)) + 1, CongruenceClass{}, sign_of(d));
        const bool in = !S.empty() && S.back().value() == d;
        REQUIRE(in == is_fundamental(d));
    }
}

TEST_CASE("count_S density near 3/pi^2") {
    for (const Sign s : {Sign::negative, Sign::positive}) {
        const double ratio = static_cast<double>(count_S(1e6, CongruenceClass{}, s)) / 1e6;
        CHECK(std::abs(ratio / (3 / (M_PI * M_PI)) - 1) < 0.005);
    }
}

TEST_CASE("progression sieve against direct squarefree tests") {
    const std::vector<LinearForm> forms{{16, 1}, {4, 1}, {8, 1}};
    std::vector<std::int64_t> got;
    for_each_jointly_squarefree(forms, 20'000, [&](std::int64_t x) { got.push_back(x); });
    std::vector<std::int64_t> expect;
    for (std::int64_t x = 0; x < 20'000; ++x) {
        bool ok = true;
        for (const auto& f : forms) ok = ok && oracle::squarefree(f(x));
        if (ok) expect.push_back(x);
    }
    CHECK(got == expect);
    CHECK(count_jointly_squarefree(forms, 20'000) == static_cast<std::int64_t>(expect.size()));
}

TEST_CASE("euler_phi and prime_divisors") {
    for (std::int64_t n = 1; n <= 300; ++n) {
        REQUIRE(euler_phi(n) == oracle::phi(n));
        std::vector<std::int64_t> ps;
        for (const auto& [p, e] : oracle::factor(n)) ps.push_back(p);
        REQUIRE(prime_divisors(n) == ps);
    }
}

TEST_CASE("residue convention") {
    CHECK(residue(-1, 4) == 3);
    CHECK(residue(-8, 4) == 0);
    CHECK(CongruenceClass::make(-3, 4).m == 1);
    CHECK(CongruenceClass::make(-3, 4).contains(-7));
    CHECK_THROWS(CongruenceClass::make(0, 0));
}
