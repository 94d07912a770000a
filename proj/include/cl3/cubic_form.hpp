#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace cl3 {

/// Integral 2x2 matrix acting on (x, y) by (x, y) -> (p x + q y, r x + s y).
struct Mat2 {
    std::int64_t p = 1, q = 0, r = 0, s = 1;
    std::int64_t det() const { return p * s - q * r; }
};

/// Hessian covariant (P, Q, R) = (b^2 - 3ac, bc - 9ad, c^2 - 3bd); its
/// discriminant is -3 disc(F).
struct Hessian {
    std::int64_t P = 0, Q = 0, R = 0;
};

/// F(x, y) = a x^3 + b x^2 y + c x y^2 + d y^3.
struct BinaryCubicForm {
    std::int64_t a = 0, b = 0, c = 0, d = 0;

    __int128 discriminant() const;
    Hessian hessian() const;
    /// F(x, y) evaluated exactly.
    __int128 operator()(std::int64_t x, std::int64_t y) const;
    /// The form F(p x + q y, r x + s y).
    BinaryCubicForm transform(const Mat2& g) const;
    BinaryCubicForm negated() const { return {-a, -b, -c, -d}; }
    std::int64_t content() const;
    /// No linear factor over Q.
    bool is_irreducible() const;

    friend auto operator<=>(const BinaryCubicForm&, const BinaryCubicForm&) = default;
};

/// The GL2(Z) matrices with entries in {-1, 0, 1}. Every element of GL2(Z)
/// carrying one reduced representative of a class to another lies here.
std::span<const Mat2> small_unimodular();

/// Positive discriminant, a > 0: the Hessian is reduced, |Q| <= P <= R.
bool is_reduced_positive(const BinaryCubicForm& f);

/// Negative discriminant, a > 0: writing F = (x - t y) q(x, y) with t the real
/// root, the positive definite factor q is reduced. Equivalent to
///   -(a-b)^2 - ac <= ad - bc <= (a+b)^2 + ac  and  d^2 - a^2 >= bd - ac.
bool is_reduced_negative(const BinaryCubicForm& f);

bool is_reduced(const BinaryCubicForm& f, bool positive_disc);

/// F is reduced, a > 0, and F is the lexicographically smallest reduced
/// representative with a > 0 in its GL2(Z) class.
bool is_canonical(const BinaryCubicForm& f, bool positive_disc);

}  // namespace cl3
