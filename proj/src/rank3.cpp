#include "cl3/rank3.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>

namespace cl3 {

RankTable::RankTable(std::int64_t lo, std::int64_t hi) : lo_(lo), hi_(hi) {
    if (hi >= lo) ranks_.assign(static_cast<std::size_t>(hi - lo + 1), -1);
}

std::optional<int> RankTable::find(std::int64_t D) const {
    if (!covers(D)) return std::nullopt;
    const int r = ranks_[static_cast<std::size_t>(D - lo_)];
    if (r < 0) return std::nullopt;
    return r;
}

int RankTable::rank(std::int64_t D) const {
    if (!covers(D))
        throw CoverageError("rank table [" + std::to_string(lo_) + ", " + std::to_string(hi_) +
                            "] does not cover D = " + std::to_string(D));
    const int r = ranks_[static_cast<std::size_t>(D - lo_)];
    if (r < 0) throw std::invalid_argument("not a fundamental discriminant: " + std::to_string(D));
    return r;
}

void RankTable::set(std::int64_t D, int r3) {
    if (!covers(D)) throw CoverageError("rank table: D = " + std::to_string(D) + " outside table");
    ranks_[static_cast<std::size_t>(D - lo_)] = static_cast<std::int8_t>(r3);
}

std::vector<RankRecord> RankTable::records() const {
    std::vector<RankRecord> out;
    for (std::size_t i = 0; i < ranks_.size(); ++i)
        if (ranks_[i] >= 0) out.push_back({lo_ + static_cast<std::int64_t>(i), ranks_[i]});
    return out;
}

std::size_t RankTable::size() const {
    return static_cast<std::size_t>(std::count_if(ranks_.begin(), ranks_.end(), [](std::int8_t r) { return r >= 0; }));
}

std::optional<int> log3_exact(std::int64_t v) {
    if (v < 1) return std::nullopt;
    int e = 0;
    while (v % 3 == 0) {
        v /= 3;
        ++e;
    }
    if (v != 1) return std::nullopt;
    return e;
}

namespace {

using i128 = __int128;

std::int64_t floor_div(std::int64_t n, std::int64_t d) {
    std::int64_t q = n / d;
    if ((n % d != 0) && ((n < 0) != (d < 0))) --q;
    return q;
}

std::int64_t ceil_div(std::int64_t n, std::int64_t d) {
    return -floor_div(-n, d);
}

// d-interval [lo, hi] on which disc(a, b, c, d) >= L, widened by a margin;
// empty (lo > hi) when the quadratic never reaches L.
std::pair<std::int64_t, std::int64_t> disc_at_least(std::int64_t a, i128 beta, i128 gamma, i128 L) {
    const long double A = 27.0L * a * a;
    const long double disc = static_cast<long double>(beta) * static_cast<long double>(beta) -
                             4.0L * A * static_cast<long double>(L - gamma);
    if (disc < -1.0L) return {1, 0};
    const long double root = std::sqrt(std::max(disc, 0.0L));
    const long double lo = (static_cast<long double>(beta) - root) / (2 * A);
    const long double hi = (static_cast<long double>(beta) + root) / (2 * A);
    return {static_cast<std::int64_t>(std::floor(lo)) - 2, static_cast<std::int64_t>(std::ceil(hi)) + 2};
}

// Integer solutions d of disc(a, b, c, d) = target (at most two).
int solve_disc(std::int64_t a, i128 beta, i128 gamma, std::int64_t target, std::int64_t out[2]) {
    // 27 a^2 d^2 - beta d + (target - gamma) = 0
    const i128 A = static_cast<i128>(27) * a * a;
    const i128 disc = beta * beta - 4 * A * (static_cast<i128>(target) - gamma);
    if (disc < 0) return 0;
    if (disc > static_cast<i128>(INT64_MAX)) {
        // outside the ranges this module is used for
        throw std::overflow_error("solve_disc: coefficient range too large");
    }
    const auto s = static_cast<i128>(isqrt(static_cast<std::uint64_t>(disc)));
    if (s * s != disc) return 0;
    int n = 0;
    for (const i128 num : {beta - s, beta + s}) {
        if (num % (2 * A) != 0) continue;
        const auto d = static_cast<std::int64_t>(num / (2 * A));
        if (n == 1 && out[0] == d) continue;
        out[n++] = d;
    }
    return n;
}

struct Bounds {
    std::int64_t b_max = 0;
    std::int64_t c_lo = 0, c_hi = -1;
};

long double fourth_root(long double v) { return std::sqrt(std::sqrt(v)); }

}  // namespace

std::int64_t reduced_a_bound(bool positive_disc, std::int64_t X) {
    const long double x = static_cast<long double>(X);
    if (positive_disc) {
        // 27 D a^2 <= 4 P^3 and P <= sqrt(D)
        return static_cast<std::int64_t>(std::sqrt(4.0L * std::sqrt(x) / 27.0L)) + 1;
    }
    // 27 a C^3 <= 16 |D| and a <= C
    return static_cast<std::int64_t>(fourth_root(16.0L * x / 27.0L)) + 1;
}

namespace {

// Visits (form, disc) for reduced forms with leading coefficient a and middle
// coefficient b, restricted to |disc| <= X. When `target` is set only forms of
// discriminant exactly `target` are produced.
template <class Visit>
void scan_ab(bool positive_disc, std::int64_t X, std::int64_t a, std::int64_t b,
             std::optional<std::int64_t> target, Visit&& visit) {
    const long double x = static_cast<long double>(X);
    std::int64_t c_lo, c_hi;
    std::int64_t sqrt_x = 0;
    long double theta_max = 0, C_max = 0;
    if (positive_disc) {
        sqrt_x = static_cast<std::int64_t>(isqrt(static_cast<std::uint64_t>(X)));
        // 1 <= P = b^2 - 3ac <= sqrt(X)
        c_lo = ceil_div(b * b - sqrt_x, 3 * a);
        c_hi = floor_div(b * b - 1, 3 * a);
    } else {
        theta_max = 0.5L + fourth_root(x / 3.0L) / a;
        C_max = std::cbrt(16.0L * x / (27.0L * a));
        const auto cb = static_cast<std::int64_t>(std::ceil(C_max + theta_max * a)) + 1;
        c_lo = -cb;
        c_hi = cb;
    }
    const auto d_abs = static_cast<std::int64_t>(std::ceil(theta_max * C_max)) + 1;
    for (std::int64_t c = c_lo; c <= c_hi; ++c) {
        std::int64_t d_lo, d_hi;
        if (positive_disc) {
            const std::int64_t P = b * b - 3 * a * c;
            d_lo = ceil_div(b * c - P, 9 * a);
            d_hi = floor_div(b * c + P, 9 * a);
        } else {
            d_lo = std::max(-d_abs, ceil_div(b * c - (a - b) * (a - b) - a * c, a));
            d_hi = std::min(d_abs, floor_div((a + b) * (a + b) + a * c + b * c, a));
        }
        if (d_lo > d_hi) continue;
        const i128 beta = static_cast<i128>(18) * a * b * c - static_cast<i128>(4) * b * b * b;
        const i128 gamma = static_cast<i128>(b) * b * c * c - static_cast<i128>(4) * a * c * c * c;
        auto consider = [&](std::int64_t d) {
            const BinaryCubicForm f{a, b, c, d};
            const i128 disc = f.discriminant();
            if (positive_disc ? (disc <= 0 || disc > X) : (disc >= 0 || -disc > X)) return;
            if (!is_reduced(f, positive_disc)) return;
            visit(f, static_cast<std::int64_t>(disc));
        };
        if (target) {
            std::int64_t ds[2];
            const int n = solve_disc(a, beta, gamma, *target, ds);
            for (int i = 0; i < n; ++i)
                if (ds[i] >= d_lo && ds[i] <= d_hi) consider(ds[i]);
            continue;
        }
        const auto [q_lo, q_hi] = disc_at_least(a, beta, gamma, positive_disc ? i128{1} : -static_cast<i128>(X));
        for (std::int64_t d = std::max(d_lo, q_lo); d <= std::min(d_hi, q_hi); ++d) consider(d);
    }
}

std::int64_t b_bound(bool positive_disc, std::int64_t X, std::int64_t a) {
    const long double x = static_cast<long double>(X);
    if (positive_disc) {
        // |b| <= sqrt(P) + 3a/2 with P <= sqrt(X)
        return static_cast<std::int64_t>(fourth_root(x) + 1.5L * a) + 1;
    }
    // |b| <= 3a/2 + (|D|/3)^(1/4)
    return static_cast<std::int64_t>(1.5L * a + fourth_root(x / 3.0L)) + 1;
}

}  // namespace

void for_each_reduced_form(bool positive_disc, std::int64_t X, std::int64_t a_lo, std::int64_t a_hi,
                           const std::function<void(const BinaryCubicForm&, std::int64_t)>& visit) {
    if (X < 1) return;
    a_lo = std::max<std::int64_t>(a_lo, 1);
    a_hi = std::min(a_hi, reduced_a_bound(positive_disc, X));
    for (std::int64_t a = a_lo; a <= a_hi; ++a) {
        const std::int64_t bm = b_bound(positive_disc, X, a);
        for (std::int64_t b = -bm; b <= bm; ++b) scan_ab(positive_disc, X, a, b, std::nullopt, visit);
    }
}

std::vector<BinaryCubicForm> cubic_class_representatives(const FundamentalDiscriminant& D) {
    const bool pos = D.value() > 0;
    const std::int64_t X = pos ? D.value() : -D.value();
    std::vector<BinaryCubicForm> reps;
    const std::int64_t a_hi = reduced_a_bound(pos, X);
    for (std::int64_t a = 1; a <= a_hi; ++a) {
        const std::int64_t bm = b_bound(pos, X, a);
        for (std::int64_t b = -bm; b <= bm; ++b) {
            scan_ab(pos, X, a, b, D.value(), [&](const BinaryCubicForm& f, std::int64_t) {
                if (!is_canonical(f, pos) || !f.is_irreducible()) return;
                if (f.content() != 1) throw std::logic_error("cubic form class with content > 1 at fundamental D");
                reps.push_back(f);
            });
        }
    }
    std::sort(reps.begin(), reps.end());
    return reps;
}

std::int64_t cubic_class_count(const FundamentalDiscriminant& D) {
    return static_cast<std::int64_t>(cubic_class_representatives(D).size());
}

int three_rank(const FundamentalDiscriminant& D) {
    const std::int64_t n = cubic_class_count(D);
    const auto r = log3_exact(2 * n + 1);
    if (!r)
        throw std::logic_error("three_rank: 2N+1 = " + std::to_string(2 * n + 1) +
                               " is not a power of 3 at D = " + std::to_string(D.value()));
    return *r;
}

RankTable rank_table_interval(std::int64_t lo, std::int64_t hi, const TableOptions& opts) {
    if (hi < lo) return RankTable(lo, hi);
    if (hi - lo + 1 > opts.max_range)
        throw std::length_error("rank_table: range of " + std::to_string(hi - lo + 1) +
                                " discriminants exceeds the configured maximum " + std::to_string(opts.max_range));
    RankTable table(lo, hi);
    const auto fund = fundamental_flags(lo, hi);
    std::vector<std::uint16_t> counts(fund.size(), 0);

    struct Job {
        bool positive;
        std::int64_t X, a, b;
    };
    std::vector<Job> jobs;
    for (const bool pos : {false, true}) {
        const std::int64_t X = pos ? hi : -lo;
        if (X < 3) continue;
        const std::int64_t a_hi = reduced_a_bound(pos, X);
        for (std::int64_t a = 1; a <= a_hi; ++a) {
            const std::int64_t bm = b_bound(pos, X, a);
            for (std::int64_t b = -bm; b <= bm; ++b) jobs.push_back({pos, X, a, b});
        }
    }

    // Each worker records offsets of canonical forms; counts are summed after
    // the join, so the result does not depend on scheduling.
    const unsigned nthreads = std::max(1u, opts.threads);
    std::vector<std::vector<std::uint32_t>> found(nthreads);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&](unsigned t) {
        try {
            for (std::size_t j; !failed && (j = next.fetch_add(1)) < jobs.size();) {
                const Job& job = jobs[j];
                scan_ab(job.positive, job.X, job.a, job.b, std::nullopt,
                        [&](const BinaryCubicForm& f, std::int64_t disc) {
                            if (disc < lo || disc > hi || !fund[disc - lo]) return;
                            if (!is_canonical(f, job.positive) || !f.is_irreducible()) return;
                            if (f.content() != 1)
                                throw std::logic_error("cubic form class with content > 1 at fundamental D");
                            found[t].push_back(static_cast<std::uint32_t>(disc - lo));
                        });
            }
        } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
        }
    };
    if (nthreads == 1) {
        worker(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
    }
    if (failure) std::rethrow_exception(failure);

    for (const auto& v : found)
        for (std::uint32_t off : v) ++counts[off];
    for (std::size_t i = 0; i < fund.size(); ++i) {
        if (!fund[i]) continue;
        const std::int64_t D = lo + static_cast<std::int64_t>(i);
        const auto r = log3_exact(2 * static_cast<std::int64_t>(counts[i]) + 1);
        if (!r)
            throw std::logic_error("rank_table: 2N+1 is not a power of 3 at D = " + std::to_string(D));
        table.set(D, *r);
    }
    return table;
}

RankTable rank_table(std::int64_t Xneg, std::int64_t Xpos, const TableOptions& opts) {
    if (Xneg < 1 || Xpos < 1) throw std::invalid_argument("rank_table: bounds must be positive");
    return rank_table_interval(-Xneg + 1, Xpos - 1, opts);
}

}  // namespace cl3
