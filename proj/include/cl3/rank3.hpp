#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cl3/arith.hpp"
#include "cl3/cubic_form.hpp"

namespace cl3 {

/// Raised when a lookup falls outside the discriminants a table covers.
class CoverageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RankRecord {
    std::int64_t D = 0;
    int r3 = 0;
    friend bool operator==(const RankRecord&, const RankRecord&) = default;
};

/// r3 for every fundamental discriminant in the closed interval [lo, hi].
class RankTable {
public:
    RankTable() = default;
    RankTable(std::int64_t lo, std::int64_t hi);

    std::int64_t lo() const { return lo_; }
    std::int64_t hi() const { return hi_; }
    bool empty() const { return hi_ < lo_; }
    bool covers(std::int64_t D) const { return lo_ <= D && D <= hi_; }
    bool covers(std::int64_t lo, std::int64_t hi) const { return lo > hi || (covers(lo) && covers(hi)); }

    /// Throws CoverageError outside [lo, hi], std::invalid_argument for
    /// non-fundamental D.
    int rank(std::int64_t D) const;
    std::optional<int> find(std::int64_t D) const;

    void set(std::int64_t D, int r3);
    /// Ascending by D.
    std::vector<RankRecord> records() const;
    std::size_t size() const;

    friend bool operator==(const RankTable&, const RankTable&) = default;

private:
    std::int64_t lo_ = 0;
    std::int64_t hi_ = -1;
    std::vector<std::int8_t> ranks_;  // -1 where D is not fundamental
};

/// Number of GL2(Z)-classes of irreducible integral binary cubic forms of
/// discriminant exactly D, for fundamental D. Equals the number of cubic
/// fields of discriminant D.
std::int64_t cubic_class_count(const FundamentalDiscriminant& D);

/// The canonical representatives counted by cubic_class_count.
std::vector<BinaryCubicForm> cubic_class_representatives(const FundamentalDiscriminant& D);

/// r3 with 3^r3 = 2 N(D) + 1. Throws std::logic_error if 2N + 1 is not a power of 3.
int three_rank(const FundamentalDiscriminant& D);

/// Exponent e with 3^e = v, or nullopt.
std::optional<int> log3_exact(std::int64_t v);

struct TableOptions {
    unsigned threads = 1;
    std::int64_t max_range = 100'000'000;
};

/// All fundamental D with -Xneg < D < Xpos.
RankTable rank_table(std::int64_t Xneg, std::int64_t Xpos, const TableOptions& opts = {});

/// All fundamental D in the closed interval [lo, hi].
RankTable rank_table_interval(std::int64_t lo, std::int64_t hi, const TableOptions& opts = {});

/// Calls visit for every reduced form (a > 0) with 0 < |disc| <= X of the
/// given sign whose leading coefficient lies in [a_lo, a_hi]. Exposed for
/// tests; a_hi is clipped to the reduction bound.
void for_each_reduced_form(bool positive_disc, std::int64_t X, std::int64_t a_lo, std::int64_t a_hi,
                           const std::function<void(const BinaryCubicForm&, std::int64_t disc)>& visit);

/// Largest leading coefficient a reduced form of |disc| <= X can have.
std::int64_t reduced_a_bound(bool positive_disc, std::int64_t X);

}  // namespace cl3
