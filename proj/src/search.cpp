#include "cl3/search.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace cl3 {

namespace {

std::int64_t pow3(int n) {
    if (n < 0 || n > 38) throw std::out_of_range("rank bound n is too large");
    std::int64_t v = 1;
    for (int k = 0; k < n; ++k) v *= 3;
    return v;
}

std::int64_t image_of(const ReducedPolynomial& p, std::int64_t D) {
    return sign_value(p.lambda) * p.l * p.at(D);
}

}  // namespace

nlohmann::ordered_json WitnessReport::to_json(std::size_t cap) const {
    nlohmann::ordered_json j;
    const std::size_t shown = std::min(cap, witnesses.size());
    j["witnesses"] = std::vector<std::int64_t>(witnesses.begin(), witnesses.begin() + static_cast<std::ptrdiff_t>(shown));
    j["total"] = witnesses.size();
    j["scanned"] = scanned;
    j["density"] = density.value();
    j["bound"] = bound.value();
    j["satisfied"] = satisfied;
    j["X"] = X;
    j["n"] = n_rank;
    j["density_exact"] = density.str();
    j["bound_exact"] = bound.str();
    j["density_per_X"] = density_per_X;
    j["asymptotic_per_X"] = asymptotic_per_X;
    return j;
}

Rational witness_density_bound(int n) {
    if (n < 1) throw std::invalid_argument("rank bound n must be positive");
    return Rational(1, pow3(n + 1) - 3);
}

std::pair<std::int64_t, std::int64_t> required_coverage(const NormalizedFamily& fam, double X) {
    const std::int64_t top = std::max<std::int64_t>(strict_limit(X), 1);
    std::int64_t lo = 0, hi = 0;
    bool first = true;
    for (const auto& p : fam.polys) {
        // images are monotone in D, so the endpoints come from D = 1 and the largest D
        const std::int64_t Dmax = top - residue(top - 1, fam.B);
        for (std::int64_t D : {std::int64_t{1}, Dmax}) {
            const std::int64_t v = image_of(p, D);
            if (first) lo = hi = v;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            first = false;
        }
    }
    return {lo, hi};
}

WitnessReport theorem1_witnesses(const FamilySpec& spec, double X, const RankTable& ranks) {
    const NormalizedFamily fam = normalize(spec);
    WitnessReport rep;
    rep.X = X;
    rep.n_rank = fam.n_rank;
    rep.bound = witness_density_bound(fam.n_rank);
    const auto T = enumerate_T(fam, X);
    rep.scanned = static_cast<std::int64_t>(T.size());
    for (std::int64_t D : T) {
        bool good = true;
        for (const auto& p : fam.polys) {
            if (ranks.rank(image_of(p, D)) >= fam.n_rank) {
                good = false;
                break;
            }
        }
        if (good) rep.witnesses.push_back(D);
    }
    const auto w = static_cast<std::int64_t>(rep.witnesses.size());
    rep.density = rep.scanned > 0 ? Rational(w, rep.scanned) : Rational(0);
    rep.satisfied = rep.scanned > 0 && rep.density >= rep.bound;
    rep.density_per_X = X > 0 ? static_cast<double>(w) / X : 0.0;
    const Omega3Result om = omega3_product(fam, 10'000);
    rep.asymptotic_per_X = om.value * rep.bound.value() / static_cast<double>(fam.B);
    return rep;
}

FamilySpec corollary_family(int n, int part) {
    if (n < 1) throw std::invalid_argument("corollary: n must be positive");
    FamilySpec spec;
    spec.n_rank = n;
    if (part == 1) {
        for (std::int64_t i = 1; i <= pow3(n) - 2; ++i) spec.negatives.push_back({1, i});
    } else if (part == 2) {
        for (std::int64_t i = 1; i <= pow3(n + 1) - 4; ++i) spec.positives.push_back({1, i});
    } else {
        throw std::invalid_argument("corollary: part must be 1 or 2");
    }
    return spec;
}

WitnessReport corollary_witnesses(int n, int part, double X, const RankTable& ranks) {
    return theorem1_witnesses(corollary_family(n, part), X, ranks);
}

WitnessCheck verify_witness(const NormalizedFamily& fam, std::int64_t D) {
    WitnessCheck c;
    if (!in_T(D, fam)) {
        c.reason = "D = " + std::to_string(D) + " is not in T";
        return c;
    }
    for (std::size_t i = 0; i < fam.size(); ++i) {
        const auto& p = fam.polys[i];
        WitnessEntry e;
        e.raw = sign_value(p.lambda) * (p.m * D + p.n);
        e.image = image_of(p, D);
        if (!is_fundamental(e.image)) {
            c.reason = "image " + std::to_string(e.image) + " is not fundamental";
            return c;
        }
        e.r3 = three_rank(FundamentalDiscriminant(e.image));
        c.entries.push_back(e);
        if (e.r3 >= fam.n_rank) {
            c.reason = "r3(" + std::to_string(e.image) + ") = " + std::to_string(e.r3);
            return c;
        }
    }
    c.ok = true;
    return c;
}

IntegerValuedPolynomial IntegerValuedPolynomial::from_binomial(const std::vector<std::int64_t>& coeffs) {
    if (coeffs.empty()) throw std::invalid_argument("polynomial: no coefficients");
    if (coeffs[0] != 0) throw std::invalid_argument("polynomial: constant term must be zero");
    IntegerValuedPolynomial g;
    g.coeffs_ = coeffs;
    while (g.coeffs_.size() > 1 && g.coeffs_.back() == 0) g.coeffs_.pop_back();
    return g;
}

std::int64_t IntegerValuedPolynomial::operator()(std::int64_t d) const {
    __int128 total = 0;
    __int128 binom = 1;  // C(d, j)
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
        if (j > 0) binom = binom * (d - static_cast<std::int64_t>(j) + 1) / static_cast<std::int64_t>(j);
        total += binom * coeffs_[j];
        const __int128 lim = __int128{1} << 62;
        if (total > lim || total < -lim || binom > lim || binom < -lim)
            throw std::overflow_error("polynomial value out of range");
    }
    return static_cast<std::int64_t>(total);
}

std::string IntegerValuedPolynomial::str() const {
    std::string s;
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
        if (j) s += ' ';
        s += std::to_string(coeffs_[j]);
    }
    return s;
}

std::vector<IntegerValuedPolynomial> parse_polys(std::string_view text) {
    std::vector<IntegerValuedPolynomial> out;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::int64_t> coeffs;
        std::string tok;
        while (ls >> tok) {
            std::size_t used = 0;
            std::int64_t v = 0;
            try {
                v = std::stoll(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size())
                throw std::invalid_argument("polys line " + std::to_string(lineno) + ": bad token '" + tok + "'");
            coeffs.push_back(v);
        }
        if (coeffs.empty()) continue;
        try {
            out.push_back(IntegerValuedPolynomial::from_binomial(coeffs));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("polys line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (out.empty()) throw std::invalid_argument("polys: no polynomials");
    return out;
}

std::vector<IntegerValuedPolynomial> load_polys(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_polys(ss.str());
}

PolyprogResult polyprog_witness(const std::vector<IntegerValuedPolynomial>& polys, int n, std::int64_t a_max,
                                std::int64_t d_max, PolyprogMode mode) {
    if (polys.empty()) throw std::invalid_argument("polyprog: need at least one polynomial");
    if (n < 1) throw std::invalid_argument("polyprog: n must be positive");
    std::unordered_map<std::int64_t, int> memo;
    auto rank_of = [&](std::int64_t D) {
        auto it = memo.find(D);
        if (it == memo.end()) it = memo.emplace(D, three_rank(FundamentalDiscriminant(D))).first;
        return it->second;
    };
    // value to discriminant, or nullopt when the value does not qualify
    auto disc_of = [&](std::int64_t v) -> std::optional<std::int64_t> {
        if (mode == PolyprogMode::fundamental) return is_fundamental(v) ? std::optional(v) : std::nullopt;
        if (v == 0) return std::nullopt;
        if (v > 0) {
            const auto r = static_cast<std::int64_t>(isqrt(static_cast<std::uint64_t>(v)));
            if (r * r == v) return std::nullopt;
        }
        return fundamental_discriminant_of(v).value();
    };

    PolyprogResult res;
    std::vector<std::int64_t> g(polys.size());
    for (std::int64_t d = 1; d <= d_max; ++d) {
        for (std::size_t i = 0; i < polys.size(); ++i) g[i] = polys[i](d);
        for (std::int64_t a = 1; a <= a_max; ++a) {
            ++res.scanned;
            std::vector<std::int64_t> values;
            bool ok = true;
            for (std::int64_t gi : g) {
                const auto D = disc_of(a + gi);
                if (!D || rank_of(*D) >= n) {
                    ok = false;
                    break;
                }
                values.push_back(*D);
            }
            if (ok) {
                res.witness = std::pair{a, d};
                res.values = std::move(values);
                return res;
            }
        }
    }
    return res;
}

}  // namespace cl3
