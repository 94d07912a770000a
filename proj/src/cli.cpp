#include "cl3/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cl3/acceptance.hpp"
#include "cl3/family.hpp"
#include "cl3/rank3.hpp"
#include "cl3/search.hpp"
#include "cl3/statistics.hpp"
#include "cl3/store.hpp"

namespace cl3 {

namespace {

using ojson = nlohmann::ordered_json;

struct Globals {
    unsigned threads = 1;
    std::string cache;
    bool strict = false;
    std::size_t cap = 1000;
    std::string config;
};

Sign parse_sign(const std::string& s) {
    if (s == "+" || s == "+1" || s == "1" || s == "pos") return Sign::positive;
    if (s == "-" || s == "-1" || s == "neg") return Sign::negative;
    throw std::invalid_argument("sign must be + or -, got '" + s + "'");
}

// Flags win; the config file only fills options left unset.
void apply_config(Globals& g, CLI::App& app) {
    if (g.config.empty()) return;
    std::ifstream f(g.config);
    if (!f) throw std::invalid_argument("cannot open config " + g.config);
    const auto j = nlohmann::json::parse(f);
    for (const auto& [key, val] : j.items()) {
        if (key == "threads") {
            if (app.count("--threads") == 0) g.threads = val.get<unsigned>();
        } else if (key == "cache") {
            if (app.count("--cache") == 0) g.cache = val.get<std::string>();
        } else if (key == "strict") {
            if (app.count("--strict") == 0) g.strict = val.get<bool>();
        } else if (key == "cap") {
            if (app.count("--cap") == 0) g.cap = val.get<std::size_t>();
        } else {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
    }
}

std::string default_cache() {
    if (const char* dir = std::getenv("CL3_CACHE_DIR"); dir && *dir)
        return (std::filesystem::path(dir) / "ranks.csv").string();
    return {};
}

// Ranks over [lo, hi], from the cache when it covers the range; fresh
// computations are merged back into the cache.
RankTable obtain_ranks(const Globals& g, std::int64_t lo, std::int64_t hi) {
    const TableOptions opts{std::max(1u, g.threads)};
    if (g.cache.empty()) return rank_table_interval(lo, hi, opts);
    std::optional<RankCache> cache;
    if (std::filesystem::exists(g.cache)) {
        cache = cache_load(g.cache);
        if (cache->covers(lo, hi)) return cache->table(lo, hi);
    }
    RankTable fresh = rank_table_interval(lo, hi, opts);
    RankCache merged = RankCache::from_table(fresh);
    if (cache) merged = cache_merge(*cache, merged);
    if (const auto parent = std::filesystem::path(g.cache).parent_path(); !parent.empty())
        std::filesystem::create_directories(parent);
    cache_store(merged, g.cache);
    return fresh;
}

std::pair<std::int64_t, std::int64_t> s_range(double X, Sign s) {
    const std::int64_t L = std::max<std::int64_t>(strict_limit(X), 5);
    return s == Sign::negative ? std::pair{-L, std::int64_t{-3}} : std::pair{std::int64_t{5}, L};
}

ojson family_json(const NormalizedFamily& fam) {
    ojson j;
    j["n"] = fam.n_rank;
    j["r"] = fam.r;
    j["s"] = fam.s;
    j["u"] = fam.u;
    j["B"] = fam.B;
    j["polys"] = ojson::array();
    for (const auto& p : fam.polys) {
        const auto [m, N] = image_class(p);
        ojson q;
        q["m"] = p.m;
        q["n"] = p.n;
        q["u"] = p.u;
        q["l"] = p.l;
        q["lambda"] = sign_value(p.lambda);
        q["image_class"] = {m, N};
        j["polys"].push_back(q);
    }
    return j;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"3-ranks of quadratic fields: tables, statistics and witness searches", "cl3"};
    app.require_subcommand(1);
    Globals g;
    g.cache = default_cache();
    app.add_option("--threads", g.threads, "Worker threads for table builds")->check(CLI::Range(1u, 256u));
    app.add_option("--cache", g.cache, "Rank cache CSV (default $CL3_CACHE_DIR/ranks.csv)");
    app.add_flag("--strict", g.strict, "Exit 1 when a report is not satisfied");
    app.add_option("--cap", g.cap, "Maximum witnesses listed in JSON output");
    app.add_option("--config", g.config, "JSON file with defaults for the options above");

    std::function<int()> action;

    auto* rank = app.add_subcommand("rank", "r3 of the fundamental discriminant of D");
    std::int64_t rank_D = 0;
    rank->add_option("-D", rank_D)->required()->allow_extra_args(false);
    rank->callback([&] {
        action = [&] {
            const auto D = fundamental_discriminant_of(rank_D);
            out << D.value() << ' ' << three_rank(D) << '\n';
            return 0;
        };
    });

    auto* table = app.add_subcommand("table", "Rank table over [min, max] as CSV");
    std::int64_t t_min = 0, t_max = 0;
    std::string t_out;
    table->add_option("--min", t_min)->required();
    table->add_option("--max", t_max)->required();
    table->add_option("--out", t_out)->required();
    table->callback([&] {
        action = [&] {
            const RankTable t = obtain_ranks(g, t_min, t_max);
            write_table_csv(t, t_out);
            out << t.size() << " discriminants written to " << t_out << '\n';
            return 0;
        };
    });

    auto* good = app.add_subcommand("good-pair", "Good-pair test for (A, B)");
    std::int64_t gA = 0, gB = 0;
    good->add_option("A", gA)->required();
    good->add_option("B", gB)->required();
    good->callback([&] {
        action = [&] {
            const auto fail = good_pair_failure(gA, gB);
            if (!fail) out << "good\n";
            else out << "not-good (clause " << (*fail == GoodPairClause::odd_prime ? "i" : "ii") << ")\n";
            return 0;
        };
    });

    std::string family_path;
    auto* norm = app.add_subcommand("normalize", "Normalized family as JSON");
    norm->add_option("--family", family_path)->required();
    norm->callback([&] {
        action = [&] {
            out << family_json(normalize(load_family(family_path))).dump(2) << '\n';
            return 0;
        };
    });

    double X = 0;
    std::int64_t cm = 0, cN = 1;
    std::string sign_s;
    auto add_class = [&](CLI::App* sc) {
        sc->add_option("--X", X)->required();
        sc->add_option("--m", cm)->required();
        sc->add_option("--N", cN)->required();
        sc->add_option("--sign", sign_s)->required();
    };
    auto finish = [&](const DensityReport& rep) {
        out << rep.to_json().dump(2) << '\n';
        return g.strict && !rep.pass ? 1 : 0;
    };

    auto* mean = app.add_subcommand("mean", "Mean of 3^r3 over S against c(lambda)");
    add_class(mean);
    mean->callback([&] {
        action = [&] {
            const Sign s = parse_sign(sign_s);
            const auto [lo, hi] = s_range(X, s);
            const RankTable t = obtain_ranks(g, lo, hi);
            return finish(nh_mean_empirical(X, CongruenceClass::make(cm, cN), s, t));
        };
    });

    auto* count = app.add_subcommand("count", "Count of S against the predicted main term");
    add_class(count);
    count->callback([&] {
        action = [&] { return finish(nh_count_report(X, CongruenceClass::make(cm, cN), parse_sign(sign_s))); };
    });

    auto* clp = app.add_subcommand("cl-prob", "Cohen-Lenstra probability");
    std::int64_t cp = 3;
    int cr = 0;
    clp->add_option("--p", cp)->required();
    clp->add_option("--r", cr)->required();
    clp->add_option("--sign", sign_s)->required();
    clp->callback([&] {
        action = [&] {
            std::ostringstream s;
            s.imbue(std::locale::classic());
            s << std::setprecision(12) << cohen_lenstra_prob(cp, cr, parse_sign(sign_s));
            out << s.str() << '\n';
            return 0;
        };
    });

    auto* om = app.add_subcommand("omega3", "Truncated Euler product Omega(3)");
    std::int64_t pmax = 100'000;
    std::size_t show = 20;
    om->add_option("--family", family_path)->required();
    om->add_option("--pmax", pmax)->required();
    om->add_option("--show", show, "Number of per-prime omega values listed");
    om->callback([&] {
        action = [&] {
            const NormalizedFamily fam = normalize(load_family(family_path));
            const Omega3Result r = omega3_product(fam, pmax);
            ojson j;
            j["value"] = r.value;
            j["tail_bound"] = r.tail_bound;
            j["lower"] = r.value - r.tail_bound;
            j["p_max"] = r.p_max;
            j["B"] = fam.B;
            j["max_omega"] = r.max_omega;
            j["omega"] = ojson::array();
            for (std::size_t i = 0; i < std::min(show, r.omegas.size()); ++i)
                j["omega"].push_back({r.omegas[i].first, r.omegas[i].second});
            out << j.dump(2) << '\n';
            return 0;
        };
    });

    int n_rank = 0;
    auto report_witnesses = [&](const FamilySpec& spec) {
        const NormalizedFamily fam = normalize(spec);
        const auto [lo, hi] = required_coverage(fam, X);
        const RankTable t = obtain_ranks(g, lo, hi);
        const WitnessReport rep = theorem1_witnesses(spec, X, t);
        out << rep.to_json(g.cap).dump(2) << '\n';
        return g.strict && !rep.satisfied ? 1 : 0;
    };

    auto* wit = app.add_subcommand("witness", "Simultaneous small-rank witnesses for a family");
    wit->add_option("--family", family_path)->required();
    wit->add_option("--n", n_rank, "Rank bound (overrides the family file)");
    wit->add_option("--X", X)->required();
    wit->callback([&] {
        action = [&] {
            FamilySpec spec = load_family(family_path);
            if (n_rank > 0) spec.n_rank = n_rank;
            return report_witnesses(spec);
        };
    });

    auto* cor = app.add_subcommand("corollary", "Witnesses for consecutive shifts");
    int part = 1;
    cor->add_option("--n", n_rank)->required();
    cor->add_option("--part", part)->required()->check(CLI::IsMember({1, 2}));
    cor->add_option("--X", X)->required();
    cor->callback([&] { action = [&] { return report_witnesses(corollary_family(n_rank, part)); }; });

    auto* pp = app.add_subcommand("polyprog", "First (a, d) with small rank along a + g_i(d)");
    std::string polys_path;
    std::int64_t amax = 0, dmax = 0;
    bool to_fund = false;
    pp->add_option("--polys", polys_path)->required();
    pp->add_option("--n", n_rank)->required();
    pp->add_option("--amax", amax)->required();
    pp->add_option("--dmax", dmax)->required();
    pp->add_flag("--to-fundamental", to_fund, "Map values to fundamental discriminants instead of requiring them");
    pp->callback([&] {
        action = [&] {
            const PolyprogResult r = polyprog_witness(load_polys(polys_path), n_rank, amax, dmax,
                                                      to_fund ? PolyprogMode::to_fundamental : PolyprogMode::fundamental);
            if (!r.witness) {
                out << "not-found scanned=" << r.scanned << '\n';
                return g.strict ? 1 : 0;
            }
            out << "a=" << r.witness->first << " d=" << r.witness->second << " scanned=" << r.scanned << '\n';
            return 0;
        };
    });

    auto* ver = app.add_subcommand("verify", "Run a named acceptance suite");
    std::string suite;
    std::string work_dir;
    ver->add_option("--suite", suite)->required();
    ver->add_option("--work-dir", work_dir, "Scratch directory for the cache round-trip");
    ver->callback([&] {
        action = [&] {
            const auto results = run_suite(suite, AcceptanceOptions{std::max(1u, g.threads), work_dir}, out);
            bool ok = true;
            for (const auto& r : results) ok = ok && r.pass;
            return ok ? 0 : 1;
        };
    });

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
        apply_config(g, app);
        return action ? action() : kExitUsage;
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const CoverageError& e) {
        err << "coverage error: " << e.what() << '\n';
        return kExitCache;
    } catch (const CacheError& e) {
        err << "cache error: " << e.what() << '\n';
        return kExitCache;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace cl3
