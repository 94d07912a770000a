#include "cl3/bqf.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <tuple>

namespace cl3::bqf {

namespace {

std::int64_t floor_div(std::int64_t n, std::int64_t d) {
    std::int64_t q = n / d;
    if ((n % d != 0) && ((n < 0) != (d < 0))) --q;
    return q;
}

// g = gcd(x, y) = u x + v y
std::tuple<std::int64_t, std::int64_t, std::int64_t> xgcd(std::int64_t x, std::int64_t y) {
    std::int64_t r0 = x, r1 = y, u0 = 1, u1 = 0, v0 = 0, v1 = 1;
    while (r1 != 0) {
        const std::int64_t q = floor_div(r0, r1);
        std::tie(r0, r1) = std::make_tuple(r1, r0 - q * r1);
        std::tie(u0, u1) = std::make_tuple(u1, u0 - q * u1);
        std::tie(v0, v1) = std::make_tuple(v1, v0 - q * v1);
    }
    if (r0 < 0) return {-r0, -u0, -v0};
    return {r0, u0, v0};
}

// b into (-a, a], c recomputed from the discriminant
QuadraticForm normalize(QuadraticForm f, std::int64_t D) {
    const std::int64_t k = floor_div(f.a - f.b, 2 * f.a);
    f.b += 2 * f.a * k;
    f.c = (f.b * f.b - D) / (4 * f.a);
    return f;
}

}  // namespace

bool QuadraticForm::is_reduced() const {
    if (a <= 0 || !(-a < b && b <= a) || a > c) return false;
    return !(a == c && b < 0);
}

QuadraticForm reduce(QuadraticForm f) {
    if (f.a <= 0 || f.discriminant() >= 0) throw std::invalid_argument("reduce: form is not positive definite");
    const std::int64_t D = f.discriminant();
    f = normalize(f, D);
    while (f.a > f.c) {
        f = normalize({f.c, -f.b, f.a}, D);
    }
    if (f.a == f.c && f.b < 0) f.b = -f.b;
    return f;
}

QuadraticForm principal_form(std::int64_t D) {
    if (D >= 0 || residue(D, 4) > 1) throw std::invalid_argument("principal_form: bad discriminant");
    const std::int64_t b = residue(D, 2);
    return {1, b, (b * b - D) / 4};
}

std::vector<QuadraticForm> reduced_forms(const FundamentalDiscriminant& D) {
    const std::int64_t d = D.value();
    if (d >= 0) throw std::invalid_argument("reduced_forms: D must be negative");
    std::vector<QuadraticForm> out;
    for (std::int64_t a = 1; 3 * a * a <= -d; ++a) {
        for (std::int64_t b = -a + 1; b <= a; ++b) {
            if (residue(b - d, 2) != 0) continue;
            const std::int64_t num = b * b - d;
            if (num % (4 * a) != 0) continue;
            const QuadraticForm f{a, b, num / (4 * a)};
            if (f.is_reduced()) out.push_back(f);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

QuadraticForm compose(const QuadraticForm& f, const QuadraticForm& g) {
    const std::int64_t D = f.discriminant();
    if (g.discriminant() != D) throw std::invalid_argument("compose: discriminant mismatch");
    const std::int64_t s = (f.b + g.b) / 2;
    const auto [g1, x1, y1] = xgcd(f.a, g.a);
    const auto [e, z, w] = xgcd(g1, s);
    // e = (z x1) a1 + (z y1) a2 + w s; only the a2 coefficient enters b3
    (void)x1;
    const std::int64_t v = z * y1;
    const std::int64_t a3 = f.a / e * (g.a / e);
    // b3 = b2 + 2 (a2/e) (v (s - b2) - w c2), taken mod 2 a3
    const __int128 t = static_cast<__int128>(v) * (s - g.b) - static_cast<__int128>(w) * g.c;
    __int128 b3 = g.b + 2 * static_cast<__int128>(g.a / e) * t;
    const __int128 m = 2 * static_cast<__int128>(a3);
    b3 %= m;
    if (b3 < 0) b3 += m;
    const auto b = static_cast<std::int64_t>(b3);
    const QuadraticForm h{a3, b, (b * b - D) / (4 * a3)};
    if (h.discriminant() != D) throw std::logic_error("compose: discriminant not preserved");
    return reduce(h);
}

QuadraticForm power(const QuadraticForm& f, std::int64_t k) {
    QuadraticForm result = principal_form(f.discriminant());
    QuadraticForm base = reduce(f);
    while (k > 0) {
        if (k & 1) result = compose(result, base);
        base = compose(base, base);
        k >>= 1;
    }
    return result;
}

int oracle_three_rank(const FundamentalDiscriminant& D) {
    const auto forms = reduced_forms(D);
    const QuadraticForm id = principal_form(D.value());
    std::int64_t torsion = 0;
    for (const auto& f : forms)
        if (compose(compose(f, f), f) == id) ++torsion;
    int e = 0;
    std::int64_t v = torsion;
    while (v % 3 == 0) {
        v /= 3;
        ++e;
    }
    if (v != 1)
        throw std::logic_error("oracle_three_rank: 3-torsion count " + std::to_string(torsion) +
                               " is not a power of 3 at D = " + std::to_string(D.value()));
    return e;
}

}  // namespace cl3::bqf
