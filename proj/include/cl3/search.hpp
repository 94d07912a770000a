#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cl3/family.hpp"
#include "cl3/rank3.hpp"
#include "cl3/statistics.hpp"

namespace cl3 {

struct WitnessReport {
    double X = 0;
    int n_rank = 1;
    std::vector<std::int64_t> witnesses;  ///< ascending
    std::int64_t scanned = 0;             ///< |T(X)|
    Rational density;                     ///< |witnesses| / scanned
    Rational bound;                       ///< 1 / (3^{n+1} - 3)
    bool satisfied = false;
    double density_per_X = 0;             ///< |witnesses| / X
    double asymptotic_per_X = 0;          ///< Omega(3) / ((3^{n+1} - 3) B)

    /// Witness list truncated to cap entries; "total" carries the full count.
    nlohmann::ordered_json to_json(std::size_t cap = 1000) const;
};

/// 1 / (3^{n+1} - 3).
Rational witness_density_bound(int n);

/// Closed D-interval a rank table must cover for theorem1_witnesses(fam, X).
std::pair<std::int64_t, std::int64_t> required_coverage(const NormalizedFamily& fam, double X);

/// D in T(X) with r3(image_discriminant(D, fam, i)) < n for every i.
/// Throws CoverageError when ranks misses an image.
WitnessReport theorem1_witnesses(const FamilySpec& spec, double X, const RankTable& ranks);

/// Shifts x + i: part 1 takes -(D + i) for 1 <= i <= 3^n - 2, part 2 takes
/// D + i for 1 <= i <= 3^{n+1} - 4.
FamilySpec corollary_family(int n, int part);
WitnessReport corollary_witnesses(int n, int part, double X, const RankTable& ranks);

struct WitnessEntry {
    std::int64_t raw = 0;    ///< lambda_i * f_i(D), before any rescaling
    std::int64_t image = 0;  ///< lambda_i * l_i * f~_i(D)
    int r3 = 0;
};

struct WitnessCheck {
    bool ok = false;
    std::string reason;  ///< empty when ok
    std::vector<WitnessEntry> entries;
};

/// Recomputes membership, fundamentality and per-D ranks without any table.
WitnessCheck verify_witness(const NormalizedFamily& fam, std::int64_t D);

/// g(d) = sum_{j >= 1} c_j C(d, j); no constant term.
class IntegerValuedPolynomial {
public:
    /// coeffs[j] is the coefficient of C(d, j), starting at j = 0; coeffs[0] must be 0.
    static IntegerValuedPolynomial from_binomial(const std::vector<std::int64_t>& coeffs);

    /// Throws std::overflow_error when the value leaves int64.
    std::int64_t operator()(std::int64_t d) const;
    const std::vector<std::int64_t>& coeffs() const { return coeffs_; }
    std::string str() const;

private:
    std::vector<std::int64_t> coeffs_;  // c_0 = 0, c_1, ...
};

/// One polynomial per line as binomial coefficients c_0 c_1 ...; '#' starts a comment.
std::vector<IntegerValuedPolynomial> parse_polys(std::string_view text);
std::vector<IntegerValuedPolynomial> load_polys(const std::string& path);

enum class PolyprogMode {
    fundamental,      ///< every a + g_i(d) must itself be a fundamental discriminant
    to_fundamental,   ///< values are mapped through fundamental_discriminant_of
};

struct PolyprogResult {
    std::optional<std::pair<std::int64_t, std::int64_t>> witness;  ///< (a, d)
    std::int64_t scanned = 0;  ///< grid points examined
    std::vector<std::int64_t> values;  ///< discriminants whose ranks certified the witness
};

/// First (d, a) in d-major order with every value passing and r3 < n.
PolyprogResult polyprog_witness(const std::vector<IntegerValuedPolynomial>& polys, int n, std::int64_t a_max,
                                std::int64_t d_max, PolyprogMode mode = PolyprogMode::fundamental);

}  // namespace cl3
