#include "cl3/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace cl3 {

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

nlohmann::ordered_json DensityReport::to_json() const {
    nlohmann::ordered_json j;
    j["X"] = X;
    j["population"] = population;
    j["statistic"] = statistic;
    j["prediction"] = prediction;
    j["abs_err"] = abs_err;
    j["rel_err"] = rel_err;
    j["pass"] = pass;
    if (good_pair) j["good_pair"] = *good_pair;
    return j;
}

DensityReport make_report(double X, std::int64_t population, double statistic, double prediction) {
    DensityReport r;
    r.X = X;
    r.population = population;
    r.statistic = statistic;
    r.prediction = prediction;
    r.abs_err = std::abs(statistic - prediction);
    r.rel_err = prediction != 0 ? r.abs_err / std::abs(prediction) : 0.0;
    return r;
}

double cohen_lenstra_prob(std::int64_t p, int r, Sign lambda) {
    if (p < 3 || p % 2 == 0 || primes_up_to(p).back() != p)
        throw std::invalid_argument("cohen_lenstra_prob: p must be an odd prime");
    if (r < 0) throw std::invalid_argument("cohen_lenstra_prob: r must be non-negative");
    const double q = 1.0 / static_cast<double>(p);
    const bool real = lambda == Sign::positive;
    // leading power p^{-r^2} or p^{-r^2-r}
    double value = std::pow(q, static_cast<double>(r) * r + (real ? r : 0));
    for (int j = r + (real ? 2 : 1); j <= kCohenLenstraTerms; ++j) value *= 1.0 - std::pow(q, j);
    for (int j = 1; j <= r; ++j) value /= 1.0 - std::pow(q, j);
    return value;
}

Rational c_lambda(Sign lambda) {
    return lambda == Sign::positive ? Rational(4, 3) : Rational(2);
}

double nh_count_prediction(double X, CongruenceClass cls) {
    double v = 3.0 * X / (std::numbers::pi * std::numbers::pi * static_cast<double>(euler_phi(cls.N)));
    for (std::int64_t p : prime_divisors(cls.N)) {
        const double q = p == 2 ? 4.0 : static_cast<double>(p);
        v *= q / (1.0 + static_cast<double>(p));
    }
    return v;
}

bool class_is_good(CongruenceClass cls) {
    return is_good_pair(cls.m == 0 ? cls.N : cls.m, cls.N);
}

DensityReport nh_count_report(double X, CongruenceClass cls, Sign lambda, double tolerance) {
    const auto count = static_cast<std::int64_t>(count_S(X, cls, lambda));
    DensityReport r = make_report(X, count, static_cast<double>(count), nh_count_prediction(X, cls));
    r.pass = r.rel_err <= tolerance;
    r.good_pair = class_is_good(cls);
    return r;
}

std::int64_t RankHistogram::below(int n) const {
    std::int64_t s = 0;
    for (int r = 0; r < n && r < static_cast<int>(counts.size()); ++r) s += counts[r];
    return s;
}

RankHistogram rank_histogram(double X, CongruenceClass cls, Sign lambda, const RankTable& ranks) {
    RankHistogram h;
    for_each_S(X, cls, lambda, [&](std::int64_t D) {
        const int r = ranks.rank(D);
        if (static_cast<std::size_t>(r) >= h.counts.size()) h.counts.resize(r + 1, 0);
        ++h.counts[r];
        ++h.total;
        std::int64_t p = 1;
        for (int k = 0; k < r; ++k) p *= 3;
        h.sum_pow3 += p;
    });
    return h;
}

namespace {

RankHistogram nonempty_histogram(double X, CongruenceClass cls, Sign lambda, const RankTable& ranks) {
    RankHistogram h = rank_histogram(X, cls, lambda, ranks);
    if (h.total == 0) throw std::domain_error("statistics: S is empty at this X");
    return h;
}

std::int64_t pow3(int n) {
    if (n < 0 || n > 39) throw std::out_of_range("3^n overflows for n > 39");
    std::int64_t v = 1;
    for (int k = 0; k < n; ++k) v *= 3;
    return v;
}

}  // namespace

DensityReport nh_mean_empirical(double X, CongruenceClass cls, Sign lambda, const RankTable& ranks,
                                double tolerance) {
    const RankHistogram h = nonempty_histogram(X, cls, lambda, ranks);
    DensityReport r = make_report(X, h.total, static_cast<double>(h.sum_pow3) / static_cast<double>(h.total),
                                  c_lambda(lambda).value());
    r.pass = r.rel_err <= tolerance;
    return r;
}

Rational rank_lt_density_bound(int n, Sign lambda) {
    if (n < 1) throw std::invalid_argument("rank_lt_density_bound: n must be positive");
    const std::int64_t t = pow3(n);
    const Rational c = c_lambda(lambda);
    // (t - c) / (t - 1) with c = a/b is (t b - a) / ((t - 1) b)
    return Rational(t * c.den() - c.num(), (t - 1) * c.den());
}

DensityReport rank_lt_density_empirical(double X, CongruenceClass cls, Sign lambda, int n,
                                        const RankTable& ranks) {
    const Rational bound = rank_lt_density_bound(n, lambda);
    const RankHistogram h = nonempty_histogram(X, cls, lambda, ranks);
    const std::int64_t k = h.below(n);
    DensityReport r = make_report(X, h.total, static_cast<double>(k) / static_cast<double>(h.total), bound.value());
    r.pass = Rational(k, h.total) >= bound;
    return r;
}

DensityReport cl_proportion_empirical(double X, CongruenceClass cls, Sign lambda, int r,
                                      const RankTable& ranks, double tolerance) {
    const RankHistogram h = nonempty_histogram(X, cls, lambda, ranks);
    const std::int64_t k = r < static_cast<int>(h.counts.size()) ? h.counts[r] : 0;
    DensityReport rep = make_report(X, h.total, static_cast<double>(k) / static_cast<double>(h.total),
                                    cohen_lenstra_prob(3, r, lambda));
    rep.pass = rep.abs_err <= tolerance;
    return rep;
}

bool partition_inequality_holds(const RankHistogram& h, int n) {
    const __int128 t = pow3(n);
    return (t - 1) * h.below(n) >= t * h.total - h.sum_pow3;
}

namespace {

std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
    std::int64_t r0 = m, r1 = residue(a, m), s0 = 0, s1 = 1;
    while (r1 != 0) {
        const std::int64_t q = r0 / r1;
        std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
        std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
    }
    if (r0 != 1) throw std::logic_error("mod_inverse: not invertible");
    return residue(s0, m);
}

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
    return static_cast<std::int64_t>(static_cast<__int128>(a) * b % m);
}

std::vector<LinearForm> all_forms(const NormalizedFamily& fam) {
    // progression_forms already leads with B x + 1
    return progression_forms(fam);
}

}  // namespace

std::int64_t omega_p(std::int64_t p, const NormalizedFamily& fam) {
    if (p < 2) throw std::invalid_argument("omega_p: p must be prime");
    const std::int64_t pp = p * p;
    std::vector<std::int64_t> roots;
    for (const LinearForm& f : all_forms(fam)) {
        const std::int64_t alpha = residue(f.alpha, pp), beta = residue(f.beta, pp);
        const std::int64_t g = std::gcd(alpha == 0 ? pp : alpha, pp);
        if (beta % g != 0) continue;
        if (g == pp) return pp;
        const std::int64_t mod = pp / g;
        const std::int64_t x0 = mulmod(residue(-(beta / g), mod), mod_inverse(alpha / g, mod), mod);
        for (std::int64_t x = x0; x < pp; x += mod) roots.push_back(x);
    }
    std::sort(roots.begin(), roots.end());
    return std::unique(roots.begin(), roots.end()) - roots.begin();
}

Omega3Result omega3_product(const NormalizedFamily& fam, std::int64_t p_max) {
    if (p_max < 3) throw std::invalid_argument("omega3_product: p_max must be at least 3");
    Omega3Result res;
    res.p_max = p_max;
    res.value = 1.0;
    auto take = [&](std::int64_t p) {
        const std::int64_t w = omega_p(p, fam);
        res.max_omega = std::max(res.max_omega, w);
        res.value *= 1.0 - static_cast<double>(w) / (static_cast<double>(p) * static_cast<double>(p));
        return w;
    };
    for (std::int64_t p : primes_up_to(p_max)) res.omegas.emplace_back(p, take(p));

    // Primes above p_max that divide a slope can have more roots; take them exactly.
    const auto forms = all_forms(fam);
    std::vector<std::int64_t> extra;
    for (const LinearForm& f : forms)
        for (std::int64_t p : prime_divisors(std::abs(f.alpha)))
            if (p > p_max) extra.push_back(p);
    std::sort(extra.begin(), extra.end());
    extra.erase(std::unique(extra.begin(), extra.end()), extra.end());
    for (std::int64_t p : extra) take(p);

    // Every other p > p_max has omega(p) <= k, and sum_{p > P} 1/p^2 < 1/P.
    const double k = static_cast<double>(forms.size());
    res.tail_bound = res.value * std::min(1.0, k / static_cast<double>(p_max));
    return res;
}

}  // namespace cl3
