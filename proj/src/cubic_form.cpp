#include "cl3/cubic_form.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <vector>

#include "cl3/arith.hpp"

namespace cl3 {

__int128 BinaryCubicForm::discriminant() const {
    const __int128 A = a, B = b, C = c, D = d;
    return 18 * A * B * C * D + B * B * C * C - 4 * A * C * C * C - 4 * B * B * B * D - 27 * A * A * D * D;
}

Hessian BinaryCubicForm::hessian() const {
    return {b * b - 3 * a * c, b * c - 9 * a * d, c * c - 3 * b * d};
}

__int128 BinaryCubicForm::operator()(std::int64_t x, std::int64_t y) const {
    const __int128 X = x, Y = y;
    return a * X * X * X + b * X * X * Y + c * X * Y * Y + d * Y * Y * Y;
}

BinaryCubicForm BinaryCubicForm::transform(const Mat2& g) const {
    const std::int64_t p = g.p, q = g.q, r = g.r, s = g.s;
    BinaryCubicForm out;
    out.a = static_cast<std::int64_t>((*this)(p, r));
    out.d = static_cast<std::int64_t>((*this)(q, s));
    out.b = 3 * a * p * p * q + b * (p * p * s + 2 * p * q * r) + c * (r * r * q + 2 * p * r * s) + 3 * d * r * r * s;
    out.c = 3 * a * p * q * q + b * (q * q * r + 2 * p * q * s) + c * (s * s * p + 2 * q * r * s) + 3 * d * r * s * s;
    return out;
}

std::int64_t BinaryCubicForm::content() const {
    return std::gcd(std::gcd(a, b), std::gcd(c, d));
}

namespace {

// M(k) = k^3 + b k^2 + (ac) k + a^2 d; its integer roots k are exactly the
// values a*t for rational roots t of F(t, 1).
struct MonicCubic {
    __int128 c2, c1, c0;
    __int128 operator()(__int128 k) const { return ((k + c2) * k + c1) * k + c0; }
};

bool root_in(const MonicCubic& M, __int128 lo, __int128 hi, bool increasing) {
    while (lo <= hi) {
        const __int128 mid = lo + (hi - lo) / 2;
        const __int128 v = M(mid);
        if (v == 0) return true;
        if ((v < 0) == increasing) lo = mid + 1;
        else hi = mid - 1;
    }
    return false;
}

__int128 floor_div(__int128 n, __int128 d) {
    __int128 q = n / d;
    if ((n % d != 0) && ((n < 0) != (d < 0))) --q;
    return q;
}

}  // namespace

bool BinaryCubicForm::is_irreducible() const {
    if (a == 0 || d == 0) return false;
    const MonicCubic M{b, static_cast<__int128>(a) * c, static_cast<__int128>(a) * a * d};
    auto absv = [](__int128 v) { return v < 0 ? -v : v; };
    const __int128 R = 1 + std::max({absv(M.c2), absv(M.c1), absv(M.c0)});
    const __int128 P = static_cast<__int128>(b) * b - 3 * static_cast<__int128>(a) * c;
    if (P <= 0) return !root_in(M, -R, R, true);

    // critical points (-b -+ sqrt(P)) / 3, bracketed with integer sqrt
    const auto s = static_cast<__int128>(isqrt(static_cast<std::uint64_t>(P)));
    const __int128 c1_lo = floor_div(-b - s - 1, 3) - 1, c1_hi = floor_div(-b - s, 3) + 2;
    const __int128 c2_lo = floor_div(-b + s, 3) - 1, c2_hi = floor_div(-b + s + 1, 3) + 2;
    for (__int128 k = c1_lo; k <= c1_hi; ++k)
        if (M(k) == 0) return false;
    for (__int128 k = c2_lo; k <= c2_hi; ++k)
        if (M(k) == 0) return false;
    if (root_in(M, -R, c1_lo - 1, true)) return false;
    if (root_in(M, c1_hi + 1, c2_lo - 1, false)) return false;
    if (root_in(M, c2_hi + 1, R, true)) return false;
    return true;
}

std::span<const Mat2> small_unimodular() {
    static const std::vector<Mat2> mats = [] {
        std::vector<Mat2> out;
        for (int p = -1; p <= 1; ++p)
            for (int q = -1; q <= 1; ++q)
                for (int r = -1; r <= 1; ++r)
                    for (int s = -1; s <= 1; ++s) {
                        const Mat2 g{p, q, r, s};
                        if (g.det() == 1 || g.det() == -1) out.push_back(g);
                    }
        return out;
    }();
    return mats;
}

bool is_reduced_positive(const BinaryCubicForm& f) {
    if (f.a <= 0) return false;
    const Hessian h = f.hessian();
    return std::abs(h.Q) <= h.P && h.P <= h.R;
}

bool is_reduced_negative(const BinaryCubicForm& f) {
    if (f.a <= 0) return false;
    const __int128 a = f.a, b = f.b, c = f.c, d = f.d;
    const __int128 w = a * d - b * c;
    if (w > (a + b) * (a + b) + a * c) return false;
    if (w < -(a - b) * (a - b) - a * c) return false;
    return d * d - a * a >= b * d - a * c;
}

bool is_reduced(const BinaryCubicForm& f, bool positive_disc) {
    return positive_disc ? is_reduced_positive(f) : is_reduced_negative(f);
}

bool is_canonical(const BinaryCubicForm& f, bool positive_disc) {
    if (!is_reduced(f, positive_disc)) return false;
    for (const Mat2& g : small_unimodular()) {
        const BinaryCubicForm h = f.transform(g);
        if (h.a <= 0 || !is_reduced(h, positive_disc)) continue;
        if (h < f) return false;
    }
    return true;
}

}  // namespace cl3
