#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace cl3 {

enum class Sign : int { negative = -1, positive = 1 };

constexpr int sign_value(Sign s) { return static_cast<int>(s); }
constexpr Sign sign_of(std::int64_t v) { return v < 0 ? Sign::negative : Sign::positive; }
constexpr char sign_char(Sign s) { return s == Sign::negative ? '-' : '+'; }

/// Integer square root: largest r with r*r <= n.
std::uint64_t isqrt(std::uint64_t n);
/// Integer fourth root: largest r with r^4 <= n.
std::uint64_t iroot4(std::uint64_t n);
/// Largest integer strictly below the positive real bound X (0 if X <= 1).
std::int64_t strict_limit(double X);

std::vector<std::int64_t> primes_up_to(std::int64_t n);

/// Mathematical residue ((v mod N) + N) mod N.
constexpr std::int64_t residue(std::int64_t v, std::int64_t N) {
    std::int64_t r = v % N;
    return r < 0 ? r + N : r;
}

/// Trial-division squarefree test for a single value (|n| >= 1).
bool is_squarefree(std::int64_t n);

/// Möbius function on [lo, hi), sieved in fixed-length segments.
std::vector<std::int8_t> mobius_range(std::int64_t lo, std::int64_t hi);

/// Squarefree flags for [lo, hi) (index k - lo), 1 <= lo.
std::vector<std::uint8_t> squarefree_flags(std::int64_t lo, std::int64_t hi);

inline constexpr std::int64_t kSegmentLength = std::int64_t{1} << 20;

/// A linear polynomial alpha*x + beta evaluated at x >= 0. Used to sieve
/// simultaneous squarefreeness along a progression.
struct LinearForm {
    std::int64_t alpha = 1;
    std::int64_t beta = 0;
    std::int64_t operator()(std::int64_t x) const { return alpha * x + beta; }
};

/// Calls visit(x) for every 0 <= x < count at which all forms take
/// squarefree (nonzero) values. Segmented; memory is O(segment).
void for_each_jointly_squarefree(std::span<const LinearForm> forms, std::int64_t count,
                                 const std::function<void(std::int64_t)>& visit);

std::int64_t count_jointly_squarefree(std::span<const LinearForm> forms, std::int64_t count);

/// A validated fundamental discriminant. D = 1 is excluded.
class FundamentalDiscriminant {
public:
    /// Throws std::invalid_argument when d is not fundamental.
    explicit FundamentalDiscriminant(std::int64_t d);

    std::int64_t value() const { return value_; }
    Sign lambda() const { return sign_of(value_); }

    friend auto operator<=>(const FundamentalDiscriminant&, const FundamentalDiscriminant&) = default;

private:
    std::int64_t value_;
};

struct CongruenceClass {
    std::int64_t m = 0;
    std::int64_t N = 1;

    /// Normalizes m into [0, N); rejects N < 1.
    static CongruenceClass make(std::int64_t m, std::int64_t N);
    bool contains(std::int64_t v) const { return residue(v, N) == m; }
};

bool is_fundamental(std::int64_t d);

/// The fundamental discriminant of Q(sqrt t). Rejects 0, 1 and perfect squares.
FundamentalDiscriminant fundamental_discriminant_of(std::int64_t t);

/// S_lambda(X, m, N) in ascending |D|.
std::vector<FundamentalDiscriminant> enumerate_S(double X, CongruenceClass cls, Sign lambda);

/// Streaming form of enumerate_S.
void for_each_S(double X, CongruenceClass cls, Sign lambda,
                const std::function<void(std::int64_t)>& visit);

std::uint64_t count_S(double X, CongruenceClass cls, Sign lambda);

/// Fundamental flags for every D in [lo, hi] (index D - lo).
std::vector<std::uint8_t> fundamental_flags(std::int64_t lo, std::int64_t hi);

std::int64_t euler_phi(std::int64_t n);
std::vector<std::int64_t> prime_divisors(std::int64_t n);

}  // namespace cl3
