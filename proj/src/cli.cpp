// cli.cpp

#include "ktuple/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <json.hpp>
#include <new>
#include <optional>
#include <ostream>

#include "ktuple/error.hpp"
#include "ktuple/hl_verify.hpp"
#include "ktuple/moments_tail.hpp"
#include "ktuple/prime_engine.hpp"
#include "ktuple/selberg_sieve.hpp"
#include "ktuple/singular_series.hpp"
#include "ktuple/tuple_averages.hpp"

namespace ktuple::cli {
namespace {

using u64 = std::uint64_t;
using Json = nlohmann::ordered_json;

// Twelve significant digits; non-finite values serialize as null.
Json num(double v) {
    if (!std::isfinite(v)) return nullptr;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

std::string tsv_cell(const Json& v) {
    if (v.is_null()) return "nan";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
        return buf;
    }
    return v.dump();
}

// Integer given as "100000000" or "1e8".
u64 to_integer(double v, const char* name) {
    if (!(v >= 0.0) || v != std::floor(v) || v > 9007199254740992.0) {
        throw DomainError(std::string(name) + " must be a non-negative integer");
    }
    return static_cast<u64>(v);
}

struct Globals {
    std::string format = "json";
    unsigned threads = 1;
    std::string cache;
};

class Emitter {
public:
    Emitter(std::ostream& out, const Globals& g) : out_(out), tsv_(g.format == "tsv") {}

    void header(const Json& config) {
        if (tsv_) {
            out_ << "# " << config.dump() << '\n';
        } else {
            out_ << Json{{"config", config}}.dump() << '\n';
        }
    }

    void record(const Json& row) {
        if (!tsv_) {
            out_ << row.dump() << '\n';
            return;
        }
        if (!columns_written_) {
            out_ << '#';
            bool first = true;
            for (const auto& item : row.items()) {
                out_ << (first ? "" : "\t") << item.key();
                first = false;
            }
            out_ << '\n';
            columns_written_ = true;
        }
        bool first = true;
        for (const auto& item : row.items()) {
            out_ << (first ? "" : "\t") << tsv_cell(item.value());
            first = false;
        }
        out_ << '\n';
    }

private:
    std::ostream& out_;
    bool tsv_;
    bool columns_written_ = false;
};

Json base_config(const std::string& command, const Globals& g) {
    Json c;
    c["command"] = command;
    c["format"] = g.format;
    c["threads"] = g.threads;
    c["cache"] = g.cache.empty() ? Json(nullptr) : Json(g.cache);
    return c;
}

// Table over [0, limit], from the cache when it covers the range; a fresh
// sieve replaces the cache file.
PrimalityTable provide_table(u64 limit, const Globals& g) {
    if (!g.cache.empty() && std::filesystem::exists(g.cache)) {
        auto cached = load_table(g.cache);
        if (cached.base() == 0 && cached.limit() >= limit) return cached;
    }
    auto table = sieve_range(0, std::max<u64>(limit, 1), {kDefaultSegmentBits, g.threads});
    if (!g.cache.empty()) save_table(table, g.cache);
    return table;
}

Json report_json(const HLReport& r) {
    return {{"tuple", r.tuple.to_string()},
            {"x", r.x},
            {"hits", r.hits},
            {"singular", num(r.singular)},
            {"li_k", num(r.li)},
            {"prediction", num(r.prediction)},
            {"abs_error", num(r.abs_error)},
            {"normalized", num(r.normalized)},
            {"normalized_alt", num(r.normalized_alt)},
            {"lambda_form_error", num(r.lambda_form_error)}};
}

struct SweepSpec {
    u64 start, stop, step;
};

SweepSpec parse_sweep(const std::string& text) {
    const auto a = text.find(':');
    const auto b = a == std::string::npos ? a : text.find(':', a + 1);
    if (b == std::string::npos) throw DomainError("--sweep expects A:B:S, got '" + text + "'");
    try {
        return {to_integer(std::stod(text.substr(0, a)), "sweep start"),
                to_integer(std::stod(text.substr(a + 1, b - a - 1)), "sweep stop"),
                to_integer(std::stod(text.substr(b + 1)), "sweep step")};
    } catch (const std::logic_error&) {
        throw DomainError("--sweep expects A:B:S, got '" + text + "'");
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Prime k-tuple experiments", "ktuple"};
    app.set_help_flag("--help", "Print help");
    app.require_subcommand(1);
    Globals g;
    app.add_option("--format", g.format, "Output format")
        ->check(CLI::IsMember({"json", "tsv"}));
    app.add_option("--threads", g.threads, "Worker count")->check(CLI::Range(1U, 1024U));
    app.add_option("--cache", g.cache, "Primality table cache file (PKT1)");

    std::string tuple_text;
    double error = 1e-9;
    auto* singular = app.add_subcommand("singular", "Singular series of a tuple");
    singular->add_option("--tuple", tuple_text, "Offsets, e.g. 0,2,6")->required();
    singular->add_option("--error", error, "Absolute error target");

    unsigned k = 0;
    double h = 0.0, lambda = 0.0, samples = 100000.0;
    u64 seed = 0;
    std::string mode;
    auto* tkh = app.add_subcommand("tkh", "Sum of S over k-tuples in [1, h]");
    tkh->add_option("--k", k)->required();
    tkh->add_option("--h", h)->required();
    tkh->add_option("--mode", mode)->required()->check(CLI::IsMember({"exact", "pair", "mc"}));
    tkh->add_option("--samples", samples);
    tkh->add_option("--seed", seed);

    double x = 0.0;
    unsigned r_max = 0;
    auto* moments = app.add_subcommand("moments", "Moments of primes in short windows");
    moments->add_option("--x", x)->required();
    auto* m_h = moments->add_option("--h", h);
    auto* m_lambda = moments->add_option("--lambda", lambda);
    m_h->excludes(m_lambda);
    moments->add_option("--r-max", r_max)->required();

    unsigned k_max = 0;
    auto* tail = app.add_subcommand("tail", "Window-count distribution against Poisson");
    tail->add_option("--x", x)->required();
    tail->add_option("--h", h)->required();
    tail->add_option("--k-max", k_max)->required();

    std::string sweep;
    auto* hl = app.add_subcommand("hl", "Hardy-Littlewood prediction error");
    hl->add_option("--tuple", tuple_text)->required();
    auto* hl_x = hl->add_option("--x", x);
    auto* hl_sweep_opt = hl->add_option("--sweep", sweep, "start:stop:step");
    hl_x->excludes(hl_sweep_opt);

    double z = 0.0, epsilon = 0.0;
    auto* selberg = app.add_subcommand("selberg", "Selberg sieve upper bound");
    selberg->add_option("--tuple", tuple_text)->required();
    selberg->add_option("--x", x)->required();
    auto* s_z = selberg->add_option("--z", z);
    auto* s_eps = selberg->add_option("--epsilon", epsilon);
    s_z->excludes(s_eps);

    double limit = 0.0;
    std::string out_path;
    auto* cache = app.add_subcommand("sieve-cache", "Write a primality table to disk");
    cache->add_option("--limit", limit)->required();
    cache->add_option("--out", out_path)->required();

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }

    Emitter emit(out, g);
    try {
        if (singular->parsed()) {
            const auto tuple = Tuple::parse(tuple_text);
            auto c = base_config("singular", g);
            c["tuple"] = tuple.to_string();
            c["error"] = num(error);
            emit.header(c);
            const auto s = singular_series(tuple, error);
            emit.record({{"tuple", tuple.to_string()},
                         {"k", tuple.size()},
                         {"value", num(s.value)},
                         {"error_radius", num(s.error_radius)},
                         {"prime_limit", s.prime_limit},
                         {"admissible", s.value > 0.0 || tuple.size() <= 1}});
        } else if (tkh->parsed()) {
            const u64 hi = to_integer(h, "--h");
            const u64 n = to_integer(samples, "--samples");
            auto c = base_config("tkh", g);
            c["k"] = k;
            c["h"] = hi;
            c["mode"] = mode;
            if (mode == "mc") {
                c["samples"] = n;
                c["seed"] = seed;
            }
            emit.header(c);
            AverageOptions opts;
            opts.threads = g.threads;
            const double subsets = std::exp(std::lgamma(static_cast<double>(hi) + 1.0) -
                                            std::lgamma(static_cast<double>(hi - std::min<u64>(k, hi)) + 1.0));
            Json row{{"k", k}, {"h", hi}, {"mode", mode}};
            if (mode == "mc") {
                const auto e = tkh_monte_carlo(k, hi, n, seed, opts);
                row["mean"] = num(e.mean);
                row["std_error"] = num(e.std_error);
                row["samples"] = e.samples;
                row["seed"] = e.seed;
                row["workers"] = e.workers;
                row["value"] = num(e.mean * subsets);
                row["normalized"] = num(e.mean * subsets / std::pow(static_cast<double>(hi), k));
                row["relation"] = "T_k(h) = k! C(h,k) mean";
            } else {
                if (mode == "pair" && k != 2) throw DomainError("--mode pair requires --k 2");
                const auto v = mode == "pair" ? tkh_pair_fast(hi, opts) : tkh_exact(k, hi, opts);
                row["value"] = num(v.value);
                row["error"] = num(v.error);
                row["mean"] = num(k <= hi ? v.value / subsets : 0.0);
                row["normalized"] = num(v.value / std::pow(static_cast<double>(hi), k));
            }
            if (k >= 2) {
                const auto b = allk_bound(k);
                row["allk_euler_product"] = num(b.euler_product);
                row["allk_log_power"] = num(b.log_power);
            }
            emit.record(row);
        } else if (moments->parsed() || tail->parsed()) {
            const u64 xi = to_integer(x, "--x");
            if (xi < 2) throw DomainError("--x must be at least 2");
            if (moments->parsed() && m_lambda->count() > 0) {
                h = lambda * std::log(static_cast<double>(xi));
            } else if (moments->parsed() && m_h->count() == 0) {
                throw CLI::RequiredError("--h or --lambda");
            }
            auto c = base_config(moments->parsed() ? "moments" : "tail", g);
            c["x"] = xi;
            c["h"] = num(h);
            c["lambda"] = num(lambda_of(xi, h));
            if (moments->parsed()) {
                c["r_max"] = r_max;
            } else {
                c["k_max"] = k_max;
            }
            emit.header(c);
            const auto table = provide_table(window_coverage_limit(xi, h), g);
            const auto hist = window_counts(table, xi, h, g.threads);
            if (moments->parsed()) {
                for (const auto& m : moment_reports(hist, r_max)) {
                    emit.record({{"x", m.x},
                                 {"h", num(m.h)},
                                 {"lambda", num(m.lambda)},
                                 {"lambda_eff", num(m.lambda_eff)},
                                 {"r", m.r},
                                 {"empirical", num(m.empirical)},
                                 {"predicted", num(m.predicted)},
                                 {"ratio", num(m.ratio)},
                                 {"predicted_eff", num(m.predicted_eff)},
                                 {"ratio_eff", num(m.ratio_eff)}});
                }
            } else {
                const auto reports = tail_reports(hist, k_max);
                const double tv = total_variation(hist, reports.front().lambda);
                const double tv_eff = total_variation(hist, reports.front().lambda_eff);
                for (const auto& t : reports) {
                    emit.record({{"x", t.x},
                                 {"h", num(t.h)},
                                 {"lambda", num(t.lambda)},
                                 {"lambda_eff", num(t.lambda_eff)},
                                 {"k", t.k},
                                 {"I_count", t.I_count},
                                 {"pi_k_count", t.pi_k_count},
                                 {"poisson_pmf", num(t.poisson_pmf)},
                                 {"poisson_tail", num(t.poisson_tail)},
                                 {"poisson_tail_eff", num(t.poisson_tail_eff)},
                                 {"corollary_bound", num(t.corollary_bound)},
                                 {"corollary_bound_eff", num(t.corollary_bound_eff)},
                                 {"total_variation", num(tv)},
                                 {"total_variation_eff", num(tv_eff)}});
                }
            }
        } else if (hl->parsed()) {
            const auto tuple = Tuple::parse(tuple_text);
            auto c = base_config("hl", g);
            c["tuple"] = tuple.to_string();
            std::optional<SweepSpec> grid;
            if (!sweep.empty()) {
                grid = parse_sweep(sweep);
                c["sweep"] = {{"start", grid->start}, {"stop", grid->stop}, {"step", grid->step}};
            } else if (hl_x->count() > 0) {
                c["x"] = to_integer(x, "--x");
            } else {
                throw CLI::RequiredError("--x or --sweep");
            }
            emit.header(c);
            const u64 top = grid ? grid->stop : to_integer(x, "--x");
            const auto table = provide_table(top + (tuple.empty() ? 0 : tuple.max()), g);
            if (grid) {
                for (const auto& r : hl_sweep(table, tuple, grid->start, grid->stop, grid->step)) {
                    emit.record(report_json(r));
                }
            } else {
                emit.record(report_json(hl_error(table, tuple, top)));
            }
        } else if (selberg->parsed()) {
            const auto tuple = Tuple::parse(tuple_text);
            const u64 xi = to_integer(x, "--x");
            auto c = base_config("selberg", g);
            c["tuple"] = tuple.to_string();
            c["x"] = xi;
            if (s_z->count() > 0) {
                c["z"] = to_integer(z, "--z");
            } else {
                if (s_eps->count() == 0) epsilon = 0.1;
                c["epsilon"] = num(epsilon);
            }
            emit.header(c);
            const auto table = provide_table(xi + (tuple.empty() ? 0 : tuple.max()), g);
            const auto r = s_z->count() > 0
                               ? sieve_report_at(table, tuple, xi, to_integer(z, "--z"))
                               : sieve_report(table, tuple, xi, epsilon);
            emit.record({{"tuple", r.tuple.to_string()},
                         {"x", r.x},
                         {"z", r.z},
                         {"G_z", num(r.G_z)},
                         {"W_z", num(r.W_z)},
                         {"skipped_primes", r.skipped_primes},
                         {"raw_bound", num(r.raw_bound)},
                         {"theorem_bound", num(r.theorem_bound)},
                         {"correction", num(r.correction)},
                         {"actual", r.actual},
                         {"actual_above_z", r.actual_above_z},
                         {"ratio_actual_over_bound", num(r.ratio_actual_over_bound)},
                         {"ratio_raw", num(r.ratio_raw)},
                         {"alpha1", r.omega.alpha1},
                         {"L_estimate", num(r.omega.L_estimate)}});
        } else if (cache->parsed()) {
            const u64 li = to_integer(limit, "--limit");
            auto c = base_config("sieve-cache", g);
            c["limit"] = li;
            c["out"] = out_path;
            emit.header(c);
            const auto table = sieve_range(0, li, {kDefaultSegmentBits, g.threads});
            save_table(table, out_path);
            emit.record({{"limit", li}, {"primes", table.popcount()}, {"path", out_path}});
        }
    } catch (const CLI::Error& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ResourceError& e) {
        err << "resource error: " << e.what() << '\n';
        return kExitResource;
    } catch (const CoverageError& e) {
        err << "resource error: " << e.what() << '\n';
        return kExitResource;
    } catch (const std::bad_alloc&) {
        err << "resource error: out of memory\n";
        return kExitResource;
    } catch (const std::exception& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitOk;
}

}  // namespace ktuple::cli
