#pragma once

#include <cstdint>
#include <vector>

#include "cl3/arith.hpp"

namespace cl3::bqf {

/// Positive definite a x^2 + b x y + c y^2.
struct QuadraticForm {
    std::int64_t a = 1, b = 0, c = 1;

    std::int64_t discriminant() const { return b * b - 4 * a * c; }
    bool is_reduced() const;
    QuadraticForm inverse() const { return {a, -b, c}; }

    friend auto operator<=>(const QuadraticForm&, const QuadraticForm&) = default;
};

QuadraticForm reduce(QuadraticForm f);
QuadraticForm principal_form(std::int64_t D);

/// One reduced representative per class, ascending; size is h(D).
std::vector<QuadraticForm> reduced_forms(const FundamentalDiscriminant& D);

/// Reduced representative of the product class.
QuadraticForm compose(const QuadraticForm& f, const QuadraticForm& g);
QuadraticForm power(const QuadraticForm& f, std::int64_t k);

/// log3 of the number of classes whose cube is the identity.
int oracle_three_rank(const FundamentalDiscriminant& D);

}  // namespace cl3::bqf
