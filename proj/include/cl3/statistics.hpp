#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cl3/arith.hpp"
#include "cl3/family.hpp"
#include "cl3/rank3.hpp"

namespace cl3 {

/// Truncation point of the infinite Cohen-Lenstra products.
inline constexpr int kCohenLenstraTerms = 64;

/// Reduced fraction with positive denominator.
class Rational {
public:
    Rational(std::int64_t num = 0, std::int64_t den = 1);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    std::string str() const;

    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& x, const Rational& y) {
        return static_cast<__int128>(x.num_) * y.den_ <=> static_cast<__int128>(y.num_) * x.den_;
    }

private:
    std::int64_t num_, den_;
};

struct DensityReport {
    double X = 0;
    std::int64_t population = 0;
    double statistic = 0;
    double prediction = 0;
    double abs_err = 0;
    double rel_err = 0;
    bool pass = false;
    /// Set by count reports: whether (m, N) is a good pair.
    std::optional<bool> good_pair;

    nlohmann::ordered_json to_json() const;
};

/// Fills abs_err and rel_err from statistic and prediction.
DensityReport make_report(double X, std::int64_t population, double statistic, double prediction);

/// Probability that the p-part of the class group has rank r; rejects p = 2.
double cohen_lenstra_prob(std::int64_t p, int r, Sign lambda);

Rational c_lambda(Sign lambda);

/// 3X / (pi^2 phi(N)) * prod_{p | N} q / (1 + p), q = 4 at p = 2 and q = p otherwise.
double nh_count_prediction(double X, CongruenceClass cls);

/// Good-pair test on a class (m taken in [1, N]).
bool class_is_good(CongruenceClass cls);

/// Empirical count_S against nh_count_prediction; pass iff rel_err <= tolerance.
DensityReport nh_count_report(double X, CongruenceClass cls, Sign lambda, double tolerance = 0.005);

/// Per-rank tallies over S_lambda(X, cls).
struct RankHistogram {
    std::vector<std::int64_t> counts;  ///< counts[r] = #{D : r3(D) = r}
    std::int64_t total = 0;
    std::int64_t sum_pow3 = 0;         ///< sum of 3^r3

    std::int64_t below(int n) const;
};

/// Throws CoverageError when ranks misses part of S.
RankHistogram rank_histogram(double X, CongruenceClass cls, Sign lambda, const RankTable& ranks);

/// Mean of 3^r3 over S against c(lambda). Errors on an empty S.
DensityReport nh_mean_empirical(double X, CongruenceClass cls, Sign lambda, const RankTable& ranks,
                                double tolerance = 0.15);

/// (3^n - c(lambda)) / (3^n - 1), for 1 <= n <= 39.
Rational rank_lt_density_bound(int n, Sign lambda);

/// Share of S with r3 < n; pass iff the share reaches the bound.
DensityReport rank_lt_density_empirical(double X, CongruenceClass cls, Sign lambda, int n,
                                        const RankTable& ranks);

/// Share of S with r3 = r against cohen_lenstra_prob(3, r, lambda); pass iff abs_err <= tolerance.
DensityReport cl_proportion_empirical(double X, CongruenceClass cls, Sign lambda, int r,
                                      const RankTable& ranks, double tolerance = 0.03);

/// (3^n - 1) #{r3 < n} >= 3^n #S - sum 3^r3, in exact integers.
bool partition_inequality_holds(const RankHistogram& h, int n);

/// Number of x mod p^2 at which some progression form of fam vanishes mod p^2.
std::int64_t omega_p(std::int64_t p, const NormalizedFamily& fam);

struct Omega3Result {
    double value = 0;        ///< truncated product, including primes above p_max that divide a coefficient
    double tail_bound = 0;   ///< true product lies in [value - tail_bound, value]
    std::int64_t p_max = 0;
    std::int64_t max_omega = 0;
    std::vector<std::pair<std::int64_t, std::int64_t>> omegas;  ///< (p, omega(p)) for p <= p_max
};

Omega3Result omega3_product(const NormalizedFamily& fam, std::int64_t p_max);

}  // namespace cl3
