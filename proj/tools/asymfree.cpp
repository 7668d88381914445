#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

#include "asymfree/bounds.hpp"
#include "asymfree/experiments.hpp"
#include "asymfree/haarsample.hpp"
#include "asymfree/io.hpp"
#include "asymfree/parallel.hpp"
#include "asymfree/parse.hpp"
#include "asymfree/verify.hpp"
#include "asymfree/weingarten.hpp"

namespace {

using namespace asymfree;

constexpr int kExitOk = 0;
constexpr int kExitInvalidConfig = 1;
constexpr int kExitVerifyFailure = 2;
constexpr int kExitCapExceeded = 3;

struct CommonOpts {
    std::string expr_text;
    long k = 8;
    int n = 0;  // 0 = infer from expression
    double M = 1.0;
    double eps = 0.1;
    std::int64_t samples = 20000;
    std::uint64_t seed = 12345;
    std::string format = "json";
    std::string out_path;
    std::string pattern = "alternating";
    std::vector<std::string> xfiles;
    int threads = 0;
};

// run_id must not depend on wall time or thread count, only the config.
std::string run_id_of(const std::string& canonical) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void emit(const std::vector<io::ResultRecord>& records, const CommonOpts& opt) {
    std::string body = io::render_records(records, opt.format);
    if (opt.out_path.empty())
        std::cout << body;
    else
        io::write_text_file(opt.out_path, body);
}

std::vector<matcore::DiagonalObservable> build_observables(const CommonOpts& opt, long k,
                                                           int slots) {
    std::vector<matcore::DiagonalObservable> out;
    if (!opt.xfiles.empty()) {
        for (const auto& path : opt.xfiles) {
            auto doc = nlohmann::json::parse(io::read_text_file(path));
            out.push_back(io::observable_from_json(doc));
            if (out.back().dim() != k)
                throw_invalid("observable file " + path + " has k = " +
                              std::to_string(out.back().dim()) + ", expected " +
                              std::to_string(k));
        }
        if (static_cast<int>(out.size()) < slots)
            throw_invalid("expression references more observable slots than --xfile entries");
        return out;
    }
    matcore::DiagonalPattern pat = matcore::pattern_from_string(opt.pattern);
    for (int i = 0; i < slots; ++i)
        out.push_back(matcore::DiagonalObservable::make(static_cast<int>(k), pat, opt.M));
    return out;
}

std::vector<weingarten::ExactDiagonal> build_exact_observables(const CommonOpts& opt, long k,
                                                               int slots) {
    std::vector<weingarten::ExactDiagonal> out;
    if (!opt.xfiles.empty()) {
        for (const auto& path : opt.xfiles) {
            auto doc = nlohmann::json::parse(io::read_text_file(path));
            matcore::DiagonalObservable numeric = io::observable_from_json(doc);
            std::vector<RationalComplex> entries;
            entries.reserve(numeric.entries().size());
            for (const auto& e : numeric.entries())
                entries.emplace_back(rational_from_double(e.real()),
                                     rational_from_double(e.imag()));
            out.push_back(weingarten::ExactDiagonal::explicit_list(
                std::move(entries), rational_from_double(numeric.norm_bound())));
            if (out.back().dim() != k)
                throw_invalid("observable file " + path + " has the wrong dimension");
        }
        if (static_cast<int>(out.size()) < slots)
            throw_invalid("expression references more observable slots than --xfile entries");
        return out;
    }
    matcore::DiagonalPattern pat = matcore::pattern_from_string(opt.pattern);
    for (int i = 0; i < slots; ++i)
        out.push_back(weingarten::ExactDiagonal::make(static_cast<int>(k), pat,
                                                      rational_from_double(opt.M)));
    return out;
}

std::vector<weingarten::EntryFactor> parse_factors(const std::string& text) {
    // "i,j,g;i,j,g;..." with 1-based indices.
    std::vector<weingarten::EntryFactor> out;
    std::istringstream groups(text);
    std::string item;
    while (std::getline(groups, item, ';')) {
        if (item.empty()) continue;
        weingarten::EntryFactor f;
        if (std::sscanf(item.c_str(), "%d,%d,%d", &f.row, &f.col, &f.gen) != 3)
            throw_invalid("factor list entries must be i,j,g triples: " + item);
        out.push_back(f);
    }
    return out;
}

int cmd_bound(const CommonOpts& opt, int m, int w, long card_E) {
    bounds::BoundReport rep = bounds::theorem_bounds(m, opt.M, w, opt.k, opt.eps);
    io::ResultRecord rec;
    rec.command = "bound";
    rec.run_id = run_id_of("bound|" + std::to_string(m) + "|" + std::to_string(w) + "|" +
                           std::to_string(opt.k) + "|" + io::format_double(opt.M) + "|" +
                           io::format_double(opt.eps) + "|" + std::to_string(card_E));
    rec.k = opt.k;
    rec.m = m;
    rec.w = w;
    rec.M = opt.M;
    rec.eps = opt.eps;
    rec.mean_bound = rep.mean_bound;
    rec.second_bound = rep.second_moment_bound;
    rec.tail_bound = rep.tail_bound;
    rec.tail_valid = rep.tail_valid;
    if (card_E >= 0) {
        rec.extra["corollary_intersection_bound"] =
            bounds::corollary_intersection_bound(card_E, m, opt.M, w, opt.k, opt.eps);
        rec.extra["card_E"] = card_E;
    }
    emit({rec}, opt);
    return kExitOk;
}

int cmd_exact(const CommonOpts& opt, const std::string& plain, const std::string& conj,
              int order_cap) {
    io::ResultRecord rec;
    rec.command = "exact";
    rec.k = opt.k;
    if (!opt.expr_text.empty()) {
        cli::ParsedExpression parsed = cli::parse_expression(opt.expr_text);
        int n = opt.n > 0 ? opt.n : parsed.expr.max_generator();
        auto obs = build_exact_observables(opt, opt.k, parsed.expr.max_slot());
        ExactScalar z = weingarten::exact_word_moment(parsed.expr, obs, opt.k, n, order_cap);
        std::complex<double> zc = z.to_complex();
        rec.expr = cli::format_expression(parsed.expr);
        rec.n = n;
        rec.m = parsed.expr.total_length();
        rec.w = parsed.expr.word_count();
        rec.M = opt.M;
        rec.mean_re = zc.real();
        rec.mean_im = zc.imag();
        rec.extra["exact"] = z.str();
        rec.run_id = run_id_of("exact|" + rec.expr + "|" + std::to_string(opt.k) + "|" +
                               opt.pattern + "|" + io::format_double(opt.M));
    } else if (!plain.empty() || !conj.empty()) {
        weingarten::EntryMomentSpec spec;
        spec.k = opt.k;
        spec.plain = parse_factors(plain);
        spec.conj = parse_factors(conj);
        Rational mom = weingarten::exact_entry_moment(spec, order_cap);
        rec.expr = "entry-moment";
        rec.mean_re = to_double(mom);
        rec.mean_im = 0.0;
        rec.extra["exact"] = mom.get_str();
        rec.extra["vanishes_by_lemma2"] = weingarten::entry_moment_vanishes(spec);
        rec.run_id = run_id_of("exact-entry|" + plain + "|" + conj + "|" + std::to_string(opt.k));
    } else {
        throw_invalid("exact: provide --expr or --plain/--conj factor lists");
    }
    emit({rec}, opt);
    return kExitOk;
}

int cmd_mc(const CommonOpts& opt, const std::vector<long>& ks) {
    cli::ParsedExpression parsed = cli::parse_expression(opt.expr_text);
    int n = opt.n > 0 ? opt.n : parsed.expr.max_generator();
    haarsample::SeededStream stream{opt.seed, 0};
    std::vector<io::ResultRecord> records;
    auto base_record = [&](long k) {
        io::ResultRecord rec;
        rec.command = "mc";
        rec.expr = cli::format_expression(parsed.expr);
        rec.k = k;
        rec.n = n;
        rec.m = parsed.expr.total_length();
        rec.w = parsed.expr.word_count();
        rec.M = opt.M;
        rec.samples = opt.samples;
        rec.seed = opt.seed;
        rec.run_id = run_id_of("mc|" + rec.expr + "|" + std::to_string(k) + "|" +
                               std::to_string(opt.samples) + "|" + std::to_string(opt.seed) +
                               "|" + opt.pattern);
        return rec;
    };
    if (ks.empty()) {
        auto obs = build_observables(opt, opt.k, parsed.expr.max_slot());
        auto est = experiments::mc_trace_moment(parsed.expr, obs, static_cast<int>(opt.k), n,
                                                opt.samples, stream, opt.threads);
        auto bound = bounds::theorem_bounds(parsed.expr.total_length(), opt.M,
                                            parsed.expr.word_count(), opt.k, opt.eps);
        io::ResultRecord rec = base_record(opt.k);
        rec.mean_re = est.mean.real();
        rec.mean_im = est.mean.imag();
        rec.second_abs = est.second_abs_moment;
        rec.stderr_mean = est.std_error_mean;
        rec.stderr_second = est.std_error_second;
        rec.mean_bound = bound.mean_bound;
        rec.second_bound = bound.second_moment_bound;
        rec.tail_bound = bound.tail_bound;
        rec.tail_valid = bound.tail_valid;
        records.push_back(std::move(rec));
    } else {
        if (!opt.xfiles.empty())
            throw_invalid("mc --ks sweeps rebuild observables per k; use --pattern, not --xfile");
        std::vector<experiments::SweepObservable> slots(
            static_cast<std::size_t>(parsed.expr.max_slot()),
            {matcore::pattern_from_string(opt.pattern), opt.M});
        auto rows = experiments::decay_sweep(parsed.expr, slots, ks, n, opt.samples, stream,
                                             opt.eps > 0 ? std::optional<double>(opt.eps)
                                                         : std::nullopt,
                                             opt.threads);
        for (const auto& row : rows) {
            io::ResultRecord rec = base_record(row.k);
            rec.mean_re = row.estimate.mean.real();
            rec.mean_im = row.estimate.mean.imag();
            rec.second_abs = row.estimate.second_abs_moment;
            rec.stderr_mean = row.estimate.std_error_mean;
            rec.stderr_second = row.estimate.std_error_second;
            rec.mean_bound = row.bound.mean_bound;
            rec.second_bound = row.bound.second_moment_bound;
            rec.tail_bound = row.bound.tail_bound;
            rec.tail_valid = row.bound.tail_valid;
            if (row.has_tail) {
                rec.eps = opt.eps;
                rec.tail_frac = row.tail_fraction;
            }
            records.push_back(std::move(rec));
        }
    }
    emit(records, opt);
    return kExitOk;
}

int cmd_tail(const CommonOpts& opt) {
    cli::ParsedExpression parsed = cli::parse_expression(opt.expr_text);
    int n = opt.n > 0 ? opt.n : parsed.expr.max_generator();
    auto obs = build_observables(opt, opt.k, parsed.expr.max_slot());
    haarsample::SeededStream stream{opt.seed, 0};
    auto tail = experiments::mc_tail_probability(parsed.expr, obs, static_cast<int>(opt.k), n,
                                                 opt.eps, opt.samples, stream, opt.threads);
    auto bound = bounds::theorem_bounds(parsed.expr.total_length(), opt.M,
                                        parsed.expr.word_count(), opt.k, opt.eps);
    io::ResultRecord rec;
    rec.command = "tail";
    rec.expr = cli::format_expression(parsed.expr);
    rec.k = opt.k;
    rec.n = n;
    rec.m = parsed.expr.total_length();
    rec.w = parsed.expr.word_count();
    rec.M = opt.M;
    rec.samples = opt.samples;
    rec.seed = opt.seed;
    rec.eps = opt.eps;
    rec.tail_frac = tail.fraction;
    rec.stderr_mean = tail.std_error;
    rec.mean_bound = bound.mean_bound;
    rec.second_bound = bound.second_moment_bound;
    rec.tail_bound = bound.tail_bound;
    rec.tail_valid = bound.tail_valid;
    rec.run_id = run_id_of("tail|" + rec.expr + "|" + std::to_string(opt.k) + "|" +
                           io::format_double(opt.eps) + "|" + std::to_string(opt.samples) + "|" +
                           std::to_string(opt.seed));
    emit({rec}, opt);
    return kExitOk;
}

int cmd_freeness(const CommonOpts& opt, const std::string& mode, int s, int mono_m, double R) {
    experiments::MicrostateSpec spec;
    spec.m = mono_m;
    spec.eps = opt.eps;
    spec.R = R > 0 ? R : std::max(1.0, opt.M);
    std::vector<matcore::DiagonalObservable> xs;
    if (!opt.xfiles.empty()) {
        for (const auto& path : opt.xfiles) {
            auto doc = nlohmann::json::parse(io::read_text_file(path));
            xs.push_back(io::observable_from_json(doc));
        }
        if (static_cast<int>(xs.size()) != s)
            throw_invalid("freeness: expected s = " + std::to_string(s) + " observable files");
    } else {
        matcore::DiagonalPattern pat = matcore::pattern_from_string(opt.pattern);
        for (int i = 0; i < s; ++i)
            xs.push_back(matcore::DiagonalObservable::make(static_cast<int>(opt.k), pat, opt.M));
    }
    haarsample::SeededStream stream{opt.seed, 0};
    double fraction = 0;
    if (mode == "microstate") {
        int n = opt.n > 0 ? opt.n : 1;
        fraction = experiments::microstate_fraction(static_cast<int>(opt.k), n, s, spec, xs,
                                                    opt.samples, stream, opt.threads);
    } else if (mode == "conjugation") {
        fraction = experiments::conjugation_freeness_fraction(static_cast<int>(opt.k), s, spec,
                                                              xs, opt.samples, stream,
                                                              opt.threads);
    } else {
        throw_invalid("freeness --mode must be microstate or conjugation");
    }
    io::ResultRecord rec;
    rec.command = "freeness";
    rec.expr = mode;
    rec.k = opt.k;
    rec.n = opt.n > 0 ? opt.n : (mode == "microstate" ? 1 : s);
    rec.m = mono_m;
    rec.M = opt.M;
    rec.samples = opt.samples;
    rec.seed = opt.seed;
    rec.eps = opt.eps;
    rec.tail_frac = fraction;  // passing fraction in the shared schema slot
    rec.extra["fraction"] = fraction;
    rec.extra["mode"] = mode;
    rec.extra["s"] = s;
    rec.extra["R"] = spec.R;
    rec.run_id = run_id_of("freeness|" + mode + "|" + std::to_string(opt.k) + "|" +
                           std::to_string(s) + "|" + std::to_string(mono_m) + "|" +
                           io::format_double(opt.eps) + "|" + std::to_string(opt.samples) + "|" +
                           std::to_string(opt.seed));
    emit({rec}, opt);
    return kExitOk;
}

int cmd_sample(const CommonOpts& opt) {
    haarsample::SeededStream stream{opt.seed, 0};
    matcore::UnitaryMatrix u = haarsample::sample_unitary(static_cast<int>(opt.k), stream);
    std::string body = io::matrix_to_json(u.matrix()).dump(2) + "\n";
    if (opt.out_path.empty())
        std::cout << body;
    else
        io::write_text_file(opt.out_path, body);
    return kExitOk;
}

int cmd_verify(const CommonOpts& opt, const std::string& suite, int max_m, int max_k) {
    verify::Options vopt;
    vopt.max_m = max_m;
    vopt.max_k = max_k;
    vopt.samples = opt.samples;
    vopt.seed = opt.seed;
    vopt.threads = opt.threads;
    std::vector<verify::CheckResult> results;
    if (suite == "lemmas")
        results = verify::lemma_suite(vopt);
    else if (suite == "theorem")
        results = verify::theorem_suite(vopt);
    else if (suite == "corollaries")
        results = verify::corollary_suite(vopt);
    else if (suite == "all")
        results = verify::all_suites(vopt);
    else
        throw_invalid("verify --suite must be one of lemmas|theorem|corollaries|all");
    bool all_pass = true;
    for (const auto& r : results) {
        all_pass = all_pass && r.pass;
        std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  [" << r.detail << "]\n";
    }
    std::cout << (all_pass ? "verification passed" : "verification FAILED") << " ("
              << results.size() << " checks)\n";
    return all_pass ? kExitOk : kExitVerifyFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"asymfree: exact and Monte Carlo checks for Haar-unitary trace moments"};
    app.require_subcommand(1);

    CommonOpts opt;
    auto add_common = [&](CLI::App* cmd, bool with_sampling) {
        cmd->add_option("--k", opt.k, "matrix dimension k");
        cmd->add_option("--n", opt.n, "number of generators (default: infer from --expr)");
        cmd->add_option("--M", opt.M, "observable norm bound M");
        cmd->add_option("--eps", opt.eps, "epsilon for tails / bounds");
        cmd->add_option("--format", opt.format, "output format: json|csv");
        cmd->add_option("--out", opt.out_path, "output file (default stdout)");
        cmd->add_option("--pattern", opt.pattern,
                        "observable pattern: alternating|balanced|roots");
        cmd->add_option("--xfile", opt.xfiles, "observable JSON file, one per slot");
        if (with_sampling) {
            cmd->add_option("--samples", opt.samples, "Monte Carlo sample count");
            cmd->add_option("--seed", opt.seed, "master seed");
            cmd->add_option("--threads", opt.threads,
                            "worker threads (0 = ASYMFREE_THREADS or hardware)");
        }
    };

    int m_arg = 2, w_arg = 2;
    long card_E = -1;
    auto* bound = app.add_subcommand("bound", "evaluate the theorem and corollary bounds");
    add_common(bound, false);
    bound->add_option("--m", m_arg, "total word length m");
    bound->add_option("--w", w_arg, "number of alternating terms w");
    bound->add_option("--card-E", card_E, "corollary family size (enables intersection bound)");

    std::string plain_arg, conj_arg;
    int order_cap = weingarten::kDefaultOrderCap;
    auto* exact = app.add_subcommand("exact", "exact oracle: word or entry moments");
    add_common(exact, false);
    exact->add_option("--expr", opt.expr_text, "alternating expression, e.g. 'h1 x1 h1^-1 x2'");
    exact->add_option("--plain", plain_arg, "plain factors 'i,j,g;...' (entry moment)");
    exact->add_option("--conj", conj_arg, "conjugated factors 'i,j,g;...' (entry moment)");
    exact->add_option("--order-cap", order_cap,
                      "Weingarten order cap (default 5, raise to 6 for larger words)");

    std::vector<long> ks_arg;
    auto* mc = app.add_subcommand("mc", "Monte Carlo trace-moment estimate / decay sweep");
    add_common(mc, true);
    mc->add_option("--expr", opt.expr_text, "alternating expression")->required();
    mc->add_option("--ks", ks_arg, "sweep dimensions (replaces --k)");

    auto* tail = app.add_subcommand("tail", "empirical tail probability");
    add_common(tail, true);
    tail->add_option("--expr", opt.expr_text, "alternating expression")->required();

    std::string mode = "microstate";
    int s_arg = 1, mono_m = 2;
    double r_arg = 0;
    auto* freeness = app.add_subcommand("freeness", "microstate / conjugation experiments");
    add_common(freeness, true);
    freeness->add_option("--mode", mode, "microstate|conjugation");
    freeness->add_option("--s", s_arg, "number of fixed matrices");
    freeness->add_option("--m", mono_m, "monomial degree cap of Gamma");
    freeness->add_option("--R", r_arg, "Gamma norm cap (default max(1, M))");

    auto* sample = app.add_subcommand("sample", "dump one Haar sample as matrix JSON");
    add_common(sample, true);

    std::string suite = "all";
    int max_m = 3, max_k = 6;
    auto* verify_cmd = app.add_subcommand("verify", "run verification suites");
    add_common(verify_cmd, true);
    verify_cmd->add_option("--suite", suite, "lemmas|theorem|corollaries|all");
    verify_cmd->add_option("--max-m", max_m, "entry-moment order cap for exhaustive checks");
    verify_cmd->add_option("--max-k", max_k, "dimension cap for exhaustive checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalidConfig;
    }

    try {
        if (bound->parsed()) return cmd_bound(opt, m_arg, w_arg, card_E);
        if (exact->parsed()) return cmd_exact(opt, plain_arg, conj_arg, order_cap);
        if (mc->parsed()) return cmd_mc(opt, ks_arg);
        if (tail->parsed()) return cmd_tail(opt);
        if (freeness->parsed()) return cmd_freeness(opt, mode, s_arg, mono_m, r_arg);
        if (sample->parsed()) return cmd_sample(opt);
        if (verify_cmd->parsed()) return cmd_verify(opt, suite, max_m, max_k);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == ErrorKind::CapExceeded ? kExitCapExceeded : kExitInvalidConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidConfig;
    }
    return kExitInvalidConfig;
}
