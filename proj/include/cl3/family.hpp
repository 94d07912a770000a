#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cl3/arith.hpp"

namespace cl3 {

/// f(x) = m*x + n with m, n >= 1.
struct LinearPolynomial {
    std::int64_t m = 1;
    std::int64_t n = 0;

    std::int64_t operator()(std::int64_t x) const { return m * x + n; }
    friend bool operator==(const LinearPolynomial&, const LinearPolynomial&) = default;
};

/// Input data of a simultaneous small-3-rank family. Polynomials in
/// `positives` give real fields Q(sqrt f(D)); `negatives` give Q(sqrt -f(D)).
struct FamilySpec {
    int n_rank = 1;
    std::vector<LinearPolynomial> positives;
    std::vector<LinearPolynomial> negatives;

    std::size_t r() const { return positives.size(); }
    std::size_t s() const { return negatives.size(); }
    std::size_t size() const { return r() + s(); }
    const LinearPolynomial& poly(std::size_t i) const {
        return i < r() ? positives[i] : negatives[i - r()];
    }

    /// Throws std::invalid_argument naming the first violated invariant.
    void validate() const;
};

enum class GoodPairClause { odd_prime, two_adic };

/// Which clause of the good-pair definition fails, or nullopt when (A, B) is good.
std::optional<GoodPairClause> good_pair_failure(std::int64_t A, std::int64_t B);
bool is_good_pair(std::int64_t A, std::int64_t B);

struct ReducedPolynomial {
    std::int64_t m = 1;
    std::int64_t n = 0;
    int u = 0;        ///< 2^u exactly divides m + n
    int l = 1;        ///< 1 if lambda*f~(1) = 1 (mod 4), else 4
    Sign lambda = Sign::positive;

    /// (m*D + n) / 2^u; throws std::domain_error if the division is inexact.
    std::int64_t at(std::int64_t D) const;
    std::int64_t at_one() const { return (m + n) >> u; }
};

struct NormalizedFamily {
    int n_rank = 1;
    std::size_t r = 0;
    std::size_t s = 0;
    std::vector<ReducedPolynomial> polys;
    int u = 0;
    std::int64_t B = 4;

    std::size_t size() const { return polys.size(); }
    std::int64_t modulus(std::size_t i) const { return std::int64_t{4} << polys[i].u; }
};

NormalizedFamily normalize(const FamilySpec& spec);

/// The congruence class (m, N) = (lambda*l*f~(1) mod 4lm, 4lm) that receives
/// the images lambda*l*f~(D). For lambda = +1 this is (l f~(1), 4 l m).
std::pair<std::int64_t, std::int64_t> image_class(const ReducedPolynomial& p);

/// Membership in T(X) (no index) or T_i(X) for any X > D.
bool in_T(std::int64_t D, const NormalizedFamily& fam, std::optional<std::size_t> which = std::nullopt);

/// lambda_i * l_i * f~_i(D) for D in T_i.
FundamentalDiscriminant image_discriminant(std::int64_t D, const NormalizedFamily& fam, std::size_t i);

/// The forms B*x + 1 and f~_i(B*x + 1) in the variable x (D = B*x + 1).
std::vector<LinearForm> progression_forms(const NormalizedFamily& fam,
                                          std::optional<std::size_t> which = std::nullopt);

/// T(X) (or T_i(X)) in ascending order, via a progression sieve.
std::vector<std::int64_t> enumerate_T(const NormalizedFamily& fam, double X,
                                      std::optional<std::size_t> which = std::nullopt);
std::int64_t count_T(const NormalizedFamily& fam, double X,
                     std::optional<std::size_t> which = std::nullopt);

/// Parses the `n <bound>` / `+ m n` / `- m n` family text format.
FamilySpec parse_family(std::string_view text);
FamilySpec load_family(const std::string& path);

}  // namespace cl3
