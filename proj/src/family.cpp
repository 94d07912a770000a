#include "cl3/family.hpp"

#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace cl3 {

namespace {

int two_adic_valuation(std::int64_t v) {
    int u = 0;
    while (v % 2 == 0) {
        v /= 2;
        ++u;
    }
    return u;
}

std::int64_t pow3(int n) {
    std::int64_t p = 1;
    for (int i = 0; i < n; ++i) p *= 3;
    return p;
}

}  // namespace

void FamilySpec::validate() const {
    if (n_rank < 1) throw std::invalid_argument("family: rank bound n must be >= 1");
    if (n_rank > 30) throw std::invalid_argument("family: rank bound n is too large");
    if (size() == 0) throw std::invalid_argument("family: need r + s >= 1 polynomials");
    const auto lhs = 4 + static_cast<std::int64_t>(r()) + 3 * static_cast<std::int64_t>(s());
    if (lhs > pow3(n_rank + 1))
        throw std::invalid_argument("family: 4 + r + 3s exceeds 3^(n+1)");
    for (std::size_t i = 0; i < size(); ++i) {
        const auto& f = poly(i);
        if (f.m < 1 || f.n < 1)
            throw std::invalid_argument("family: coefficients must be positive integers");
        if (!is_good_pair(f.n, f.m))
            throw std::invalid_argument("family: pair (n, m) = (" + std::to_string(f.n) + ", " +
                                        std::to_string(f.m) + ") is not good");
    }
}

std::optional<GoodPairClause> good_pair_failure(std::int64_t A, std::int64_t B) {
    if (A < 1 || B < 1) throw std::invalid_argument("good pair: A and B must be positive");
    std::int64_t g = std::gcd(A, B);
    while (g % 2 == 0) g /= 2;
    for (std::int64_t p : prime_divisors(g)) {
        if (B % (p * p) != 0 || A % (p * p) == 0) return GoodPairClause::odd_prime;
    }
    if (B % 2 == 0) {
        const bool first = A % 4 == 1 && B % 4 == 0;
        const bool second = (A % 16 == 8 || A % 16 == 12) && B % 16 == 0;
        if (!first && !second) return GoodPairClause::two_adic;
    }
    return std::nullopt;
}

bool is_good_pair(std::int64_t A, std::int64_t B) {
    return !good_pair_failure(A, B).has_value();
}

std::int64_t ReducedPolynomial::at(std::int64_t D) const {
    const __int128 v = static_cast<__int128>(m) * D + n;
    const __int128 div = __int128{1} << u;
    if (v % div != 0) throw std::domain_error("reduced polynomial: value not divisible by 2^u");
    return static_cast<std::int64_t>(v / div);
}

std::pair<std::int64_t, std::int64_t> image_class(const ReducedPolynomial& p) {
    const std::int64_t N = 4 * p.l * p.m;
    return {residue(sign_value(p.lambda) * p.l * p.at_one(), N), N};
}

NormalizedFamily normalize(const FamilySpec& spec) {
    spec.validate();
    NormalizedFamily fam;
    fam.n_rank = spec.n_rank;
    fam.r = spec.r();
    fam.s = spec.s();
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const auto& f = spec.poly(i);
        ReducedPolynomial p;
        p.m = f.m;
        p.n = f.n;
        p.u = two_adic_valuation(f.m + f.n);
        // positives come first, then negatives, in every case of the sign table
        p.lambda = i < spec.r() ? Sign::positive : Sign::negative;
        // l is chosen so that lambda * l * f~(D) is a fundamental discriminant
        p.l = residue(sign_value(p.lambda) * p.at_one(), 4) == 1 ? 1 : 4;
        fam.u = std::max(fam.u, p.u);
        fam.polys.push_back(p);
    }
    fam.B = std::int64_t{4} << fam.u;
    for (const auto& p : fam.polys) {
        if (p.at_one() % 2 != 1)
            throw std::logic_error("normalize: f~(1) is not odd");
        const auto [A, N] = image_class(p);
        if (!is_good_pair(A, N))
            throw std::logic_error("normalize: derived pair (l f~(1), 4 l m) is not good");
    }
    return fam;
}

namespace {

// D = 1 is dropped from T_i exactly when its image would be +1, which is
// not a discriminant; the correspondence with S then stays one-to-one.
bool drops_one(const NormalizedFamily& fam, std::optional<std::size_t> which) {
    for (std::size_t i = 0; i < fam.size(); ++i) {
        if (which && *which != i) continue;
        const auto& p = fam.polys[i];
        if (sign_value(p.lambda) * p.l * p.at_one() == 1) return true;
    }
    return false;
}

}  // namespace

bool in_T(std::int64_t D, const NormalizedFamily& fam, std::optional<std::size_t> which) {
    if (D < 1) return false;
    if (D == 1 && drops_one(fam, which)) return false;
    if (which) {
        if (*which >= fam.size()) throw std::out_of_range("in_T: polynomial index");
        const auto& p = fam.polys[*which];
        if (residue(D, fam.modulus(*which)) != 1) return false;
        return is_squarefree(D) && is_squarefree(p.at(D));
    }
    if (residue(D, fam.B) != 1) return false;
    if (!is_squarefree(D)) return false;
    for (const auto& p : fam.polys)
        if (!is_squarefree(p.at(D))) return false;
    return true;
}

FundamentalDiscriminant image_discriminant(std::int64_t D, const NormalizedFamily& fam, std::size_t i) {
    if (!in_T(D, fam, i))
        throw std::invalid_argument("image_discriminant: D = " + std::to_string(D) + " is not in T_i");
    const auto& p = fam.polys[i];
    return FundamentalDiscriminant(sign_value(p.lambda) * p.l * p.at(D));
}

std::vector<LinearForm> progression_forms(const NormalizedFamily& fam, std::optional<std::size_t> which) {
    const std::int64_t B = which ? fam.modulus(*which) : fam.B;
    std::vector<LinearForm> forms{{B, 1}};
    for (std::size_t i = 0; i < fam.size(); ++i) {
        if (which && *which != i) continue;
        const auto& p = fam.polys[i];
        forms.push_back({(p.m * B) >> p.u, (p.m + p.n) >> p.u});
    }
    return forms;
}

namespace {

// number of x >= 0 with B*x + 1 < X
std::int64_t progression_length(std::int64_t B, double X) {
    const std::int64_t limit = strict_limit(X);
    return limit < 1 ? 0 : (limit - 1) / B + 1;
}

}  // namespace

std::vector<std::int64_t> enumerate_T(const NormalizedFamily& fam, double X, std::optional<std::size_t> which) {
    const auto forms = progression_forms(fam, which);
    const std::int64_t B = forms.front().alpha;
    std::vector<std::int64_t> out;
    const bool skip_one = drops_one(fam, which);
    for_each_jointly_squarefree(forms, progression_length(B, X), [&](std::int64_t x) {
        if (x > 0 || !skip_one) out.push_back(B * x + 1);
    });
    return out;
}

std::int64_t count_T(const NormalizedFamily& fam, double X, std::optional<std::size_t> which) {
    const auto forms = progression_forms(fam, which);
    const std::int64_t len = progression_length(forms.front().alpha, X);
    const std::int64_t c = count_jointly_squarefree(forms, len);
    if (len == 0 || !drops_one(fam, which)) return c;
    for (const auto& f : forms)
        if (!is_squarefree(f.beta)) return c;
    return c - 1;
}

FamilySpec parse_family(std::string_view text) {
    FamilySpec spec;
    bool have_header = false;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& what) {
        throw std::invalid_argument("family line " + std::to_string(lineno) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok) || tok[0] == '#') continue;
        if (tok == "n") {
            if (have_header) fail("duplicate header");
            long long v;
            if (!(ls >> v)) fail("expected rank bound after 'n'");
            spec.n_rank = static_cast<int>(v);
            have_header = true;
        } else if (tok == "+" || tok == "-") {
            long long m, n;
            if (!(ls >> m >> n)) fail("expected two integers after sign");
            (tok == "+" ? spec.positives : spec.negatives).push_back({m, n});
        } else {
            fail("unknown token '" + tok + "'");
        }
        std::string extra;
        if (ls >> extra) fail("trailing token '" + extra + "'");
    }
    if (!have_header) throw std::invalid_argument("family: missing 'n <rank bound>' header");
    spec.validate();
    return spec;
}

FamilySpec load_family(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open family file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_family(ss.str());
}

}  // namespace cl3
