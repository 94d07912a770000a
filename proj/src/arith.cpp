#include "cl3/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>

namespace cl3 {

std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && static_cast<unsigned __int128>(r) * r > n) --r;
    while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

std::uint64_t iroot4(std::uint64_t n) {
    return isqrt(isqrt(n));
}

std::int64_t strict_limit(double X) {
    if (!(X > 1.0)) return 0;
    const double f = std::ceil(X) - 1.0;
    return static_cast<std::int64_t>(f);
}

std::vector<std::int64_t> primes_up_to(std::int64_t n) {
    std::vector<std::int64_t> primes;
    if (n < 2) return primes;
    std::vector<bool> composite(static_cast<std::size_t>(n) + 1, false);
    for (std::int64_t p = 2; p <= n; ++p) {
        if (composite[p]) continue;
        primes.push_back(p);
        for (std::int64_t q = p * p; q <= n; q += p) composite[q] = true;
    }
    return primes;
}

bool is_squarefree(std::int64_t n) {
    if (n == 0) return false;
    std::uint64_t m = n < 0 ? -static_cast<std::uint64_t>(n) : static_cast<std::uint64_t>(n);
    if (m % 4 == 0) return false;
    if (m % 2 == 0) m /= 2;
    for (std::uint64_t p = 3; p * p <= m; p += 2) {
        if (m % p != 0) continue;
        m /= p;
        if (m % p == 0) return false;
    }
    return true;
}

std::vector<std::int8_t> mobius_range(std::int64_t lo, std::int64_t hi) {
    if (lo < 1) throw std::invalid_argument("mobius_range: lo must be >= 1");
    if (hi <= lo) return {};
    const auto primes = primes_up_to(static_cast<std::int64_t>(isqrt(static_cast<std::uint64_t>(hi - 1))));
    std::vector<std::int8_t> out(static_cast<std::size_t>(hi - lo));
    std::vector<std::int8_t> mu;
    std::vector<std::uint64_t> prod;
    for (std::int64_t s = lo; s < hi; s += kSegmentLength) {
        const std::int64_t e = std::min(hi, s + kSegmentLength);
        const auto len = static_cast<std::size_t>(e - s);
        mu.assign(len, 1);
        prod.assign(len, 1);
        for (std::int64_t p : primes) {
            for (std::int64_t k = (s + p - 1) / p * p; k < e; k += p) {
                mu[k - s] = static_cast<std::int8_t>(-mu[k - s]);
                prod[k - s] *= static_cast<std::uint64_t>(p);
            }
            const std::int64_t p2 = p * p;
            for (std::int64_t k = (s + p2 - 1) / p2 * p2; k < e; k += p2) mu[k - s] = 0;
        }
        for (std::size_t i = 0; i < len; ++i) {
            // one prime factor above sqrt(hi) remains unaccounted for
            if (mu[i] != 0 && prod[i] != static_cast<std::uint64_t>(s) + i)
                mu[i] = static_cast<std::int8_t>(-mu[i]);
            out[static_cast<std::size_t>(s - lo) + i] = mu[i];
        }
    }
    return out;
}

namespace {

void mark_square_multiples(std::span<std::uint8_t> flags, std::int64_t s,
                           std::span<const std::int64_t> primes) {
    const std::int64_t e = s + static_cast<std::int64_t>(flags.size());
    for (std::int64_t p : primes) {
        const std::int64_t p2 = p * p;
        if (p2 >= e) break;
        for (std::int64_t k = (s + p2 - 1) / p2 * p2; k < e; k += p2) flags[k - s] = 0;
    }
}

}  // namespace

std::vector<std::uint8_t> squarefree_flags(std::int64_t lo, std::int64_t hi) {
    if (lo < 1) throw std::invalid_argument("squarefree_flags: lo must be >= 1");
    if (hi <= lo) return {};
    const auto primes = primes_up_to(static_cast<std::int64_t>(isqrt(static_cast<std::uint64_t>(hi - 1))));
    std::vector<std::uint8_t> out(static_cast<std::size_t>(hi - lo), 1);
    for (std::int64_t s = lo; s < hi; s += kSegmentLength) {
        const std::int64_t e = std::min(hi, s + kSegmentLength);
        mark_square_multiples(std::span(out).subspan(static_cast<std::size_t>(s - lo),
                                                     static_cast<std::size_t>(e - s)),
                              s, primes);
    }
    return out;
}

namespace {

std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
    std::int64_t g = m, x = 0, x1 = 1, a1 = residue(a, m);
    while (a1 != 0) {
        const std::int64_t q = g / a1;
        std::tie(g, a1) = std::make_tuple(a1, g - q * a1);
        std::tie(x, x1) = std::make_tuple(x1, x - q * x1);
    }
    if (g != 1) throw std::logic_error("mod_inverse: not invertible");
    return residue(x, m);
}

struct Strike {
    std::int64_t start;
    std::int64_t step;
};

}  // namespace

void for_each_jointly_squarefree(std::span<const LinearForm> forms, std::int64_t count,
                                 const std::function<void(std::int64_t)>& visit) {
    if (count <= 0) return;
    std::int64_t vmax = 1;
    for (const auto& f : forms) {
        if (f.alpha < 1 || f.beta < 1)
            throw std::invalid_argument("for_each_jointly_squarefree: forms must be positive");
        const __int128 v = static_cast<__int128>(f.alpha) * (count - 1) + f.beta;
        if (v > static_cast<__int128>(INT64_MAX) / 2)
            throw std::overflow_error("for_each_jointly_squarefree: value range too large");
        vmax = std::max<std::int64_t>(vmax, static_cast<std::int64_t>(v));
    }
    const auto primes = primes_up_to(static_cast<std::int64_t>(isqrt(static_cast<std::uint64_t>(vmax))));

    // Residue classes x = start (mod step) on which some form is divisible by p^2.
    std::vector<Strike> strikes;
    for (std::int64_t p : primes) {
        const std::int64_t p2 = p * p;
        for (const auto& f : forms) {
            const std::int64_t g = std::gcd(f.alpha, p2);
            if (residue(f.beta, g) != 0) continue;
            const std::int64_t step = p2 / g;
            const std::int64_t x0 =
                step == 1 ? 0
                          : static_cast<std::int64_t>(
                                static_cast<__int128>(residue(-f.beta / g, step)) *
                                mod_inverse(f.alpha / g, step) % step);
            strikes.push_back({x0, step});
        }
    }

    std::vector<std::uint8_t> flags;
    for (std::int64_t s = 0; s < count; s += kSegmentLength) {
        const std::int64_t e = std::min(count, s + kSegmentLength);
        flags.assign(static_cast<std::size_t>(e - s), 1);
        for (const auto& st : strikes) {
            for (std::int64_t x = s + residue(st.start - s, st.step); x < e; x += st.step)
                flags[x - s] = 0;
        }
        for (std::int64_t x = s; x < e; ++x)
            if (flags[x - s]) visit(x);
    }
}

std::int64_t count_jointly_squarefree(std::span<const LinearForm> forms, std::int64_t count) {
    std::int64_t n = 0;
    for_each_jointly_squarefree(forms, count, [&](std::int64_t) { ++n; });
    return n;
}

FundamentalDiscriminant::FundamentalDiscriminant(std::int64_t d) : value_(d) {
    if (!is_fundamental(d))
        throw std::invalid_argument("not a fundamental discriminant: " + std::to_string(d));
}

CongruenceClass CongruenceClass::make(std::int64_t m, std::int64_t N) {
    if (N < 1) throw std::invalid_argument("congruence modulus must be >= 1");
    return {residue(m, N), N};
}

namespace {

// D = lambda * k; sqf_k / sqf_j are squarefree flags for k and k/4.
bool fundamental_from_flags(std::int64_t D, bool sqf_k, bool sqf_j) {
    if (D == 1 || D == 0) return false;
    if (residue(D, 4) == 1) return sqf_k;
    if (residue(D, 4) != 0) return false;
    const std::int64_t r = residue(D / 4, 4);
    return (r == 2 || r == 3) && sqf_j;
}

}  // namespace

bool is_fundamental(std::int64_t d) {
    if (d == 0 || d == 1) return false;
    if (residue(d, 4) == 1) return is_squarefree(d);
    if (residue(d, 4) != 0) return false;
    const std::int64_t r = residue(d / 4, 4);
    return (r == 2 || r == 3) && is_squarefree(d / 4);
}

FundamentalDiscriminant fundamental_discriminant_of(std::int64_t t) {
    if (t == 0 || t == 1) throw std::invalid_argument("fundamental_discriminant_of: t must not be 0 or 1");
    if (t > 0) {
        const auto r = static_cast<std::int64_t>(isqrt(static_cast<std::uint64_t>(t)));
        if (r * r == t) throw std::invalid_argument("fundamental_discriminant_of: t is a perfect square");
    }
    std::int64_t core = t < 0 ? -1 : 1;
    std::int64_t m = t < 0 ? -t : t;
    for (std::int64_t p = 2; p * p <= m; ++p) {
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        if (e % 2 == 1) core *= p;
    }
    core *= m;
    return FundamentalDiscriminant(residue(core, 4) == 1 ? core : 4 * core);
}

void for_each_S(double X, CongruenceClass cls, Sign lambda,
                const std::function<void(std::int64_t)>& visit) {
    const std::int64_t limit = strict_limit(X);
    if (limit < 2) return;
    const auto primes = primes_up_to(static_cast<std::int64_t>(isqrt(static_cast<std::uint64_t>(limit))));
    const std::int64_t sgn = sign_value(lambda);
    std::vector<std::uint8_t> sqf_k, sqf_j;
    for (std::int64_t s = 1; s <= limit; s += kSegmentLength) {
        const std::int64_t e = std::min(limit + 1, s + kSegmentLength);
        sqf_k.assign(static_cast<std::size_t>(e - s), 1);
        mark_square_multiples(sqf_k, s, primes);
        const std::int64_t js = std::max<std::int64_t>(1, s / 4);
        const std::int64_t je = (e - 1) / 4 + 1;
        sqf_j.assign(static_cast<std::size_t>(std::max<std::int64_t>(je - js, 0)), 1);
        mark_square_multiples(sqf_j, js, primes);
        for (std::int64_t k = s; k < e; ++k) {
            const std::int64_t D = sgn * k;
            const bool fj = (k % 4 == 0) && sqf_j[k / 4 - js];
            if (!fundamental_from_flags(D, sqf_k[k - s], fj)) continue;
            if (cls.contains(D)) visit(D);
        }
    }
}

std::vector<FundamentalDiscriminant> enumerate_S(double X, CongruenceClass cls, Sign lambda) {
    std::vector<FundamentalDiscriminant> out;
    for_each_S(X, cls, lambda, [&](std::int64_t D) { out.emplace_back(D); });
    return out;
}

std::uint64_t count_S(double X, CongruenceClass cls, Sign lambda) {
    std::uint64_t n = 0;
    for_each_S(X, cls, lambda, [&](std::int64_t) { ++n; });
    return n;
}

std::vector<std::uint8_t> fundamental_flags(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) return {};
    std::vector<std::uint8_t> out(static_cast<std::size_t>(hi - lo + 1), 0);
    const std::int64_t kmax = std::max(std::abs(lo), std::abs(hi));
    if (kmax < 2) return out;
    const auto sqf = squarefree_flags(1, kmax + 1);
    for (std::int64_t D = lo; D <= hi; ++D) {
        if (D == 0) continue;
        const std::int64_t k = D < 0 ? -D : D;
        const bool fj = (k % 4 == 0) && sqf[k / 4 - 1];
        out[D - lo] = fundamental_from_flags(D, sqf[k - 1], fj);
    }
    return out;
}

std::int64_t euler_phi(std::int64_t n) {
    std::int64_t result = n;
    for (std::int64_t p : prime_divisors(n)) result = result / p * (p - 1);
    return result;
}

std::vector<std::int64_t> prime_divisors(std::int64_t n) {
    std::vector<std::int64_t> out;
    if (n < 0) n = -n;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        out.push_back(p);
        while (n % p == 0) n /= p;
    }
    if (n > 1) out.push_back(n);
    return out;
}

}  // namespace cl3
