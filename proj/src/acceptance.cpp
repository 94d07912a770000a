#include "cl3/acceptance.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include <unistd.h>

#include "cl3/bqf.hpp"
#include "cl3/search.hpp"
#include "cl3/statistics.hpp"
#include "cl3/store.hpp"

namespace cl3 {

namespace {

constexpr std::int64_t kBig = 1'000'000;

std::string fmt(double v, int digits = 6) {
    std::ostringstream s;
    s.imbue(std::locale::classic());
    s << std::setprecision(digits) << v;
    return s.str();
}

// Shared state: the +-10^6 table is built once and reused.
class Context {
public:
    explicit Context(const AcceptanceOptions& o) : opts(o) {}

    const RankTable& big() {
        if (!big_) big_ = rank_table(kBig, kBig, TableOptions{opts.threads});
        return *big_;
    }

    AcceptanceOptions opts;

private:
    std::optional<RankTable> big_;
};

// Runs f(i) for i in [0, n) on the configured number of threads.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& f) {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) f(i);
    };
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
}

CriterionResult c1_oracle(Context& ctx) {
    std::vector<std::int64_t> Ds;
    for_each_S(1e5, CongruenceClass{}, Sign::negative, [&](std::int64_t D) { Ds.push_back(D); });
    std::atomic<std::size_t> bad{0};
    std::atomic<std::int64_t> first_bad{0};
    parallel_for(Ds.size(), ctx.opts.threads, [&](std::size_t i) {
        const FundamentalDiscriminant D(Ds[i]);
        if (three_rank(D) != bqf::oracle_three_rank(D)) {
            if (bad.fetch_add(1) == 0) first_bad = Ds[i];
        }
    });
    CriterionResult r{1, "oracle equivalence", bad == 0, ""};
    r.detail = std::to_string(Ds.size()) + " discriminants, " + std::to_string(bad.load()) + " mismatches";
    if (bad) r.detail += " (first at D = " + std::to_string(first_bad.load()) + ")";
    return r;
}

CriterionResult c2_scholz(Context& ctx) {
    const RankTable& t = ctx.big();
    std::int64_t checked = 0, bad = 0, first_bad = 0;
    for (std::int64_t d = 2; d <= 10'000; ++d) {
        if (!is_squarefree(d)) continue;
        const int rp = t.rank(fundamental_discriminant_of(d).value());
        const int rm = t.rank(fundamental_discriminant_of(-3 * d).value());
        ++checked;
        if (!(rp <= rm && rm <= rp + 1)) {
            if (bad++ == 0) first_bad = d;
        }
    }
    CriterionResult r{2, "Scholz reflection", bad == 0, ""};
    r.detail = std::to_string(checked) + " squarefree d, " + std::to_string(bad) + " violations";
    if (bad) r.detail += " (first at d = " + std::to_string(first_bad) + ")";
    return r;
}

CriterionResult c3_counts(Context&) {
    CriterionResult r{3, "counting asymptotic", true, ""};
    double worst = 0;
    for (const auto& [m, N] : {std::pair{0, 1}, std::pair{1, 4}, std::pair{1, 3}}) {
        for (const Sign s : {Sign::negative, Sign::positive}) {
            const DensityReport rep = nh_count_report(1e6, CongruenceClass::make(m, N), s, 0.005);
            worst = std::max(worst, rep.rel_err);
            if (!rep.pass) {
                r.pass = false;
                r.detail += "(" + std::to_string(m) + "," + std::to_string(N) + "," + sign_char(s) +
                            ") rel_err " + fmt(rep.rel_err) + "; ";
            }
        }
    }
    r.detail += "max rel_err " + fmt(worst) + " (limit 0.005)";
    return r;
}

CriterionResult c4_mean(Context& ctx) {
    const RankTable& t = ctx.big();
    CriterionResult r{4, "mean of 3^r3", true, ""};
    for (const Sign s : {Sign::negative, Sign::positive}) {
        const DensityReport big = nh_mean_empirical(1e6, CongruenceClass{}, s, t, 0.15);
        const DensityReport small = nh_mean_empirical(1e4, CongruenceClass{}, s, t, 0.15);
        const bool ok = big.pass && big.rel_err < small.rel_err;
        r.pass = r.pass && ok;
        r.detail += std::string(1, sign_char(s)) + ": mean " + fmt(big.statistic) + " vs " + fmt(big.prediction) +
                    ", rel_err 1e6 " + fmt(big.rel_err, 4) + " < 1e4 " + fmt(small.rel_err, 4) + (ok ? "" : " FAIL") +
                    "; ";
    }
    return r;
}

CriterionResult c5_identity(Context& ctx) {
    const RankTable& t = ctx.big();
    int checked = 0, bad = 0;
    for (const auto& [m, N] : {std::pair{0, 1}, std::pair{1, 4}})
        for (const Sign s : {Sign::negative, Sign::positive})
            for (const double X : {1e4, 1e5, 1e6}) {
                const RankHistogram h = rank_histogram(X, CongruenceClass::make(m, N), s, t);
                for (int n = 1; n <= 3; ++n) {
                    ++checked;
                    if (!partition_inequality_holds(h, n)) ++bad;
                }
            }
    return {5, "partition inequality", bad == 0,
            std::to_string(checked) + " cases, " + std::to_string(bad) + " failures"};
}

CriterionResult c6_cohen_lenstra(Context& ctx) {
    const RankTable& t = ctx.big();
    CriterionResult r{6, "Cohen-Lenstra proportion", true, ""};
    for (const Sign s : {Sign::negative, Sign::positive}) {
        const DensityReport rep = cl_proportion_empirical(1e6, CongruenceClass{}, s, 0, t, 0.03);
        double total = 0;
        for (int k = 0; k <= 40; ++k) total += cohen_lenstra_prob(3, k, s);
        const bool ok = rep.pass && std::abs(total - 1.0) <= 1e-9;
        r.pass = r.pass && ok;
        r.detail += std::string(1, sign_char(s)) + ": P(r3=0) " + fmt(rep.statistic, 5) + " vs " +
                    fmt(rep.prediction, 5) + ", sum P " + fmt(total, 12) + (ok ? "" : " FAIL") + "; ";
    }
    return r;
}

// Re-verifies `count` witnesses drawn with a fixed seed.
bool reverify_sample(const FamilySpec& spec, const WitnessReport& rep, int count, std::string& why) {
    const NormalizedFamily fam = normalize(spec);
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<std::size_t> pick(0, rep.witnesses.size() - 1);
    for (int k = 0; k < count; ++k) {
        const std::int64_t D = rep.witnesses[pick(rng)];
        const WitnessCheck c = verify_witness(fam, D);
        if (!c.ok) {
            why = "D = " + std::to_string(D) + ": " + c.reason;
            return false;
        }
    }
    return true;
}

CriterionResult c7_theorem(Context& ctx) {
    const FamilySpec spec = parse_family("n 1\n+ 1 3\n- 1 1\n");
    const WitnessReport rep = theorem1_witnesses(spec, 1e5, ctx.big());
    CriterionResult r{7, "simultaneous small rank", rep.satisfied, ""};
    r.detail = "density " + rep.density.str() + " = " + fmt(rep.density.value(), 4) + " vs bound " + rep.bound.str();
    std::string why;
    if (rep.witnesses.empty() || !reverify_sample(spec, rep, 20, why)) {
        r.pass = false;
        r.detail += "; re-verification failed " + why;
    } else {
        r.detail += "; 20 sampled witnesses re-verified";
    }
    return r;
}

CriterionResult c8_corollary(Context& ctx) {
    const WitnessReport rep = corollary_witnesses(1, 2, 1e5, ctx.big());
    const bool ok = !rep.witnesses.empty() && rep.satisfied;
    return {8, "consecutive shifts", ok,
            std::to_string(rep.witnesses.size()) + " witnesses of " + std::to_string(rep.scanned) + ", density " +
                fmt(rep.density.value(), 4) + " vs bound " + rep.bound.str()};
}

CriterionResult c9_omega(Context&) {
    CriterionResult r{9, "Euler product for T(X)", true, ""};
    const NormalizedFamily fam = normalize(parse_family("n 1\n+ 1 3\n"));
    const double X = 1e7;
    const double empirical = static_cast<double>(count_T(fam, X)) / X;
    const Omega3Result om = omega3_product(fam, 100'000);
    const double predicted = om.value / static_cast<double>(fam.B);
    const double rel = std::abs(empirical - predicted) / predicted;
    r.pass = rel <= 0.01;
    r.detail = "T(X)/X " + fmt(empirical) + " vs " + fmt(predicted) + " rel " + fmt(rel, 3);
    int families = 0;
    std::int64_t max_omega = 0;
    for (const auto& text : family_corpus()) {
        const NormalizedFamily f = normalize(parse_family(text));
        const Omega3Result o = omega3_product(f, 10'000);
        max_omega = std::max(max_omega, o.max_omega);
        ++families;
        if (omega_p(2, f) != 0 || !(o.value - o.tail_bound > 0)) {
            r.pass = false;
            r.detail += "; corpus family " + std::to_string(families) + " fails";
        }
    }
    r.detail += "; " + std::to_string(families) + " corpus families with omega(2) = 0 and Omega(3) > 0, max omega(p) " +
                std::to_string(max_omega);
    return r;
}

CriterionResult c10_polyprog(Context&) {
    const auto polys = parse_polys("0 1\n0 1 2\n");
    const PolyprogResult res = polyprog_witness(polys, 1, 100, 10);
    CriterionResult r{10, "polynomial progression", false, ""};
    if (!res.witness) {
        r.detail = "no witness in " + std::to_string(res.scanned) + " grid points";
        return r;
    }
    const auto [a, d] = *res.witness;
    bool ok = true;
    std::string vals;
    for (const auto& g : polys) {
        const std::int64_t v = a + g(d);
        vals += " " + std::to_string(v);
        ok = ok && is_fundamental(v) && three_rank(FundamentalDiscriminant(v)) == 0;
    }
    r.pass = ok;
    r.detail = "(a, d) = (" + std::to_string(a) + ", " + std::to_string(d) + "), values" + vals +
               (ok ? " fundamental with r3 = 0" : " failed re-verification");
    return r;
}

CriterionResult c11_determinism(Context& ctx) {
    CriterionResult r{11, "determinism", true, ""};
    const RankTable one = rank_table(kBig, kBig, TableOptions{1});
    const RankTable eight = rank_table(kBig, kBig, TableOptions{8});
    const bool same = table_csv(one.records()) == table_csv(eight.records());
    r.detail = std::string("1 vs 8 threads ") + (same ? "identical" : "DIFFER");

    namespace fs = std::filesystem;
    const fs::path dir = ctx.opts.work_dir.empty()
                             ? fs::temp_directory_path() / ("cl3_accept_" + std::to_string(::getpid()))
                             : fs::path(ctx.opts.work_dir);
    fs::create_directories(dir);
    const std::string p1 = (dir / "ranks.csv").string(), p2 = (dir / "ranks2.csv").string();
    cache_store(RankCache::from_table(one), p1);
    const RankCache loaded = cache_load(p1);
    cache_store(loaded, p2);
    auto slurp = [](const std::string& p) {
        std::ifstream f(p, std::ios::binary);
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    };
    const bool round = slurp(p1) == slurp(p2) && slurp(manifest_path(p1)) == slurp(manifest_path(p2)) &&
                       loaded.table(one.lo(), one.hi()) == one;
    r.detail += std::string(", cache round-trip ") + (round ? "byte-identical" : "DIFFERS");
    r.pass = same && round;
    if (ctx.opts.work_dir.empty()) fs::remove_all(dir);
    return r;
}

using Criterion = CriterionResult (*)(Context&);
constexpr Criterion kCriteria[] = {c1_oracle,  c2_scholz,   c3_counts,    c4_mean,
                                   c5_identity, c6_cohen_lenstra, c7_theorem, c8_corollary,
                                   c9_omega,   c10_polyprog, c11_determinism};

std::vector<int> suite_ids(const std::string& suite) {
    if (suite == "acceptance") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
    if (suite == "core") return {1, 2, 11};
    if (suite == "stats") return {3, 4, 5, 6};
    if (suite == "witness") return {7, 8, 9, 10};
    if (suite.size() > 1 && suite[0] == 'c') {
        try {
            std::size_t used = 0;
            const int id = std::stoi(suite.substr(1), &used);
            if (used + 1 == suite.size() && id >= 1 && id <= 11) return {id};
        } catch (const std::exception&) {
        }
    }
    throw std::invalid_argument("unknown suite '" + suite + "'");
}

}  // namespace

const std::vector<std::string>& family_corpus() {
    static const std::vector<std::string> corpus = {
        "n 1\n+ 1 3\n",
        "n 1\n+ 1 5\n",
        "n 1\n- 1 5\n",
        "n 1\n- 1 1\n",
        "n 1\n+ 1 3\n- 1 1\n",
        "n 1\n+ 1 1\n+ 1 2\n+ 1 3\n+ 1 4\n+ 1 5\n",
        "n 1\n+ 9 3\n",
        "n 2\n+ 3 1\n+ 4 1\n- 9 2\n",
        "n 2\n+ 1 7\n+ 1 11\n- 1 2\n- 5 1\n",
    };
    return corpus;
}

std::vector<std::string> suite_names() {
    std::vector<std::string> v{"acceptance", "core", "stats", "witness"};
    for (int i = 1; i <= 11; ++i) v.push_back("c" + std::to_string(i));
    return v;
}

std::string format_result(const CriterionResult& r) {
    std::ostringstream s;
    s.imbue(std::locale::classic());
    s << (r.pass ? "PASS" : "FAIL") << "  criterion " << std::setw(2) << r.id << "  " << r.name << ": " << r.detail
      << "  [" << std::fixed << std::setprecision(1) << r.seconds << "s]";
    return s.str();
}

std::vector<CriterionResult> run_suite(const std::string& suite, const AcceptanceOptions& opts, std::ostream& out) {
    const auto ids = suite_ids(suite);
    Context ctx(opts);
    std::vector<CriterionResult> results;
    for (int id : ids) {
        const auto start = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            r = kCriteria[id - 1](ctx);
        } catch (const std::exception& e) {
            r = {id, "criterion " + std::to_string(id), false, std::string("error: ") + e.what()};
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out << format_result(r) << '\n' << std::flush;
        results.push_back(r);
    }
    return results;
}

}  // namespace cl3
