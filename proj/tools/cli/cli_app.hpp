#pragma once

// multinom command-line front end.
//
// Exit status: 0 success/agreement, 1 mismatch or verification failure,
// 2 usage error, 3 runtime failure (network, cache, certification).

#include "multinom/circulant.hpp"
#include "multinom/multinomial_core.hpp"
#include "multinom/sequence_registry.hpp"
#include "multinom/spectral.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace multinom::cli {

enum class OutputFormat { plain, csv, json_lines };

inline constexpr int exit_ok = 0;
inline constexpr int exit_mismatch = 1;
inline constexpr int exit_usage = 2;
inline constexpr int exit_runtime = 3;

class usage_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GlobalOptions {
    OutputFormat format = OutputFormat::plain;
    std::string precision = "double";
    std::uint32_t mantissa_bits = 0;

    [[nodiscard]] PrecisionPolicy policy() const {
        auto s = parse_strategy(precision);
        if (!s) throw usage_error("unknown precision '" + precision + "'");
        return PrecisionPolicy{*s, mantissa_bits, 0.25};
    }
};

using json = nlohmann::json;

namespace detail {

inline std::vector<std::string> const all_methods{"conv", "trace", "spectral"};

inline std::vector<std::string> expand_methods(std::vector<std::string> methods) {
    if (methods.empty() || std::find(methods.begin(), methods.end(), "all") != methods.end()) {
        return all_methods;
    }
    return methods;
}

struct MethodValue {
    std::string method;
    BigInt value;
    std::optional<CertifiedInteger> certificate;
};

inline MethodValue compute_one(std::string const& method, Params const& p, std::int64_t l,
                               PrecisionPolicy const& policy) {
    if (method == "conv") return {method, expand_power(p)[l], std::nullopt};
    if (method == "trace") {
        if (l == p.centre()) return {method, central_via_trace(p), std::nullopt};
        return {method, coefficient_via_shift(p, l, multinom::detail::mod(-p.k, p.dim())), std::nullopt};
    }
    if (method == "spectral") {
        auto c = coefficient_via_spectrum(p, l, policy);
        auto v = c.value;
        return {method, std::move(v), std::move(c)};
    }
    throw usage_error("unknown method '" + method + "'");
}

inline std::string csv_row(std::initializer_list<std::string> cells) {
    std::string out;
    bool first = true;
    for (auto const& c : cells) {
        if (!first) out += ',';
        out += c;
        first = false;
    }
    return out;
}

inline std::string fmt_ms(double ms) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << ms;
    return os.str();
}

}  // namespace detail

// ---------------------------------------------------------------------------

struct ComputeArgs {
    std::int64_t k = 1;
    std::int64_t n = 1;
    std::optional<std::int64_t> l;
    std::string method = "conv";
};

inline int cmd_compute(ComputeArgs const& a, GlobalOptions const& g, std::ostream& out) {
    Params const p{a.k, a.n};
    auto const l = a.l.value_or(p.centre());
    multinom::detail::check_index(p, l);
    auto const methods = detail::expand_methods({a.method});
    auto const policy = g.policy();

    std::vector<detail::MethodValue> values;
    for (auto const& m : methods) values.push_back(detail::compute_one(m, p, l, policy));
    bool const agree = std::all_of(values.begin(), values.end(),
                                   [&](auto const& v) { return v.value == values.front().value; });
    bool const verdict = methods.size() > 1;

    switch (g.format) {
        case OutputFormat::plain:
            if (!verdict) {
                out << values.front().value << '\n';
            } else {
                for (auto const& v : values) out << v.method << ": " << v.value << '\n';
                out << (agree ? "AGREE" : "DISAGREE") << '\n';
            }
            break;
        case OutputFormat::csv:
            out << "k,n,l,method,value\n";
            for (auto const& v : values) {
                out << detail::csv_row({std::to_string(p.k), std::to_string(p.n), std::to_string(l),
                                        v.method, v.value.str()})
                    << '\n';
            }
            if (verdict) {
                out << detail::csv_row({std::to_string(p.k), std::to_string(p.n), std::to_string(l),
                                        "verdict", agree ? "AGREE" : "DISAGREE"})
                    << '\n';
            }
            break;
        case OutputFormat::json_lines:
            for (auto const& v : values) {
                json j = {{"command", "compute"}, {"k", p.k},           {"n", p.n},
                          {"l", l},               {"method", v.method}, {"value", v.value.str()}};
                if (v.certificate) {
                    j["residual"] = v.certificate->residual;
                    j["precision"] = std::string(to_string(v.certificate->policy_used.strategy));
                    j["escalations"] = v.certificate->escalations;
                }
                out << j.dump() << '\n';
            }
            if (verdict) {
                out << json{{"command", "compute"}, {"k", p.k}, {"n", p.n}, {"l", l},
                            {"verdict", agree ? "AGREE" : "DISAGREE"}}
                           .dump()
                    << '\n';
            }
            break;
    }
    return agree ? exit_ok : exit_mismatch;
}

// ---------------------------------------------------------------------------

struct SequenceArgs {
    std::int64_t k = 1;
    std::int64_t count = 10;
    std::int64_t start_n = 0;
    std::string method = "conv";
};

inline int cmd_sequence(SequenceArgs const& a, GlobalOptions const& g, std::ostream& out) {
    if (a.count < 1) throw usage_error("--count must be >= 1");
    auto const methods = detail::expand_methods({a.method});
    auto const policy = g.policy();
    bool agree = true;
    if (g.format == OutputFormat::csv) out << "k,n,value\n";
    for (std::int64_t i = 0; i < a.count; ++i) {
        Params const p{a.k, a.start_n + i};
        auto first = detail::compute_one(methods.front(), p, p.centre(), policy).value;
        for (std::size_t m = 1; m < methods.size(); ++m) {
            if (detail::compute_one(methods[m], p, p.centre(), policy).value != first) agree = false;
        }
        switch (g.format) {
            case OutputFormat::plain: out << (i ? " " : "") << first; break;
            case OutputFormat::csv: out << p.k << ',' << p.n << ',' << first << '\n'; break;
            case OutputFormat::json_lines:
                out << json{{"command", "sequence"}, {"k", p.k}, {"n", p.n}, {"value", first.str()}}.dump()
                    << '\n';
                break;
        }
    }
    if (g.format == OutputFormat::plain) out << '\n';
    if (!agree) out << (g.format == OutputFormat::json_lines ? "{\"verdict\":\"DISAGREE\"}\n" : "DISAGREE\n");
    return agree ? exit_ok : exit_mismatch;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
    std::int64_t k_max = 3;
    std::int64_t n_max = 10;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
    bool inject_fault = false;  // corrupts the convolution route, for self-tests
};

struct CaseResult {
    std::int64_t k = 0;
    std::int64_t n = 0;
    std::vector<std::string> failed;
};

inline bool rel_close(double a, double b, double tol = 1e-12) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Every cross-method and structural check for one (k, n).
inline CaseResult verify_case(Params const& p, PrecisionPolicy const& policy, std::uint64_t seed,
                              bool inject_fault) {
    CaseResult res{p.k, p.n, {}};
    auto fail = [&](std::string what) { res.failed.push_back(std::move(what)); };

    auto row = expand_power(p);
    if (inject_fault) row.coeffs[static_cast<std::size_t>(p.centre())] += 1;
    auto const& c = row.coeffs;
    auto const last = static_cast<std::size_t>(2 * p.k * p.n);

    if (expand_power(p, ExpansionRoute::squaring).coeffs != c) fail("squaring-route");
    if (c.front() != 1 || c.back() != 1) fail("endpoints");
    if (p.n >= 1 && c[1] != p.n) fail("p1=n");
    for (std::size_t l = 0; l <= last; ++l) {
        if (c[l] != c[last - l]) {
            fail("symmetry");
            break;
        }
    }
    BigInt sum = 0;
    for (auto const& x : c) sum += x;
    if (sum != base_power(p)) fail("row-sum");

    auto const power = matrix_power(build_central(p), static_cast<std::uint64_t>(p.n));
    auto const tr = trace(power);
    if (tr % p.dim() != 0) {
        fail("trace-divisibility");
    } else if (tr / p.dim() != row.central()) {
        fail("trace!=conv");
    }
    try {
        if (central_via_spectrum(p, policy).value != row.central()) fail("spectral!=conv");
    } catch (certification_failure const&) {
        fail("spectral-certification");
    }

    auto const trig = eigenvalues(p, EigenMethod::trig_ratio);
    auto const cos_sum = eigenvalues(p, EigenMethod::cosine_sum);
    auto const cheb = eigenvalues(p, EigenMethod::chebyshev);
    bool degenerate = true, methods_agree = true;
    for (std::int64_t r = 1; r <= p.dim(); ++r) {
        if (r >= 2) {
            auto const mirror = p.dim() + 2 - r;
            for (auto const* set : {&trig, &cos_sum, &cheb}) {
                if (!rel_close(set->at(r), set->at(mirror))) degenerate = false;
            }
        }
        double const theta = 2.0 * std::numbers::pi * static_cast<double>(r - 1) / static_cast<double>(p.dim());
        double const d = dirichlet_kernel(p.k, theta);
        if (!rel_close(trig.at(r), cos_sum.at(r)) || !rel_close(trig.at(r), cheb.at(r)) ||
            !rel_close(trig.at(r), d)) {
            methods_agree = false;
        }
    }
    if (!degenerate) fail("eigen-degeneracy");
    if (!methods_agree) fail("eigen-methods");

    // one seeded off-centre coefficient through the shift and spectral routes
    std::mt19937_64 rng(seed ^ (static_cast<std::uint64_t>(p.k) << 32) ^ static_cast<std::uint64_t>(p.n));
    auto const l = std::uniform_int_distribution<std::int64_t>(0, 2 * p.k * p.n)(rng);
    auto const m = std::uniform_int_distribution<std::int64_t>(0, p.dim() - 1)(rng);
    if (coefficient_via_shift(p, l, m) != c[static_cast<std::size_t>(l)]) fail("shift-coefficient");
    try {
        if (coefficient_via_spectrum(p, l, policy).value != c[static_cast<std::size_t>(l)]) {
            fail("spectral-coefficient");
        }
    } catch (certification_failure const&) {
        fail("spectral-coefficient-certification");
    }
    return res;
}

inline int cmd_verify(VerifyArgs const& a, GlobalOptions const& g, std::ostream& out) {
    if (a.k_max < 1 || a.n_max < 1) throw usage_error("--k-max and --n-max must be >= 1");
    auto const policy = g.policy();
    auto const seed = a.seed.value_or(0x5eed);

    std::vector<Params> grid;
    for (std::int64_t k = 1; k <= a.k_max; ++k) {
        for (std::int64_t n = 1; n <= a.n_max; ++n) grid.emplace_back(k, n);
    }
    std::vector<CaseResult> results(grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < grid.size();) {
            results[i] = verify_case(grid[i], policy, seed, a.inject_fault);
        }
    };
    unsigned const threads = std::clamp<unsigned>(
        a.threads ? a.threads : std::max(1u, std::thread::hardware_concurrency()), 1u,
        static_cast<unsigned>(grid.size()));
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
        worker();
    }
    // results are stored by grid index, which is already (k, n) order

    std::size_t failures = 0;
    if (g.format == OutputFormat::csv) out << "k,n,ok,failed_checks\n";
    for (auto const& r : results) {
        bool const ok = r.failed.empty();
        if (!ok) ++failures;
        std::string joined;
        for (auto const& f : r.failed) joined += (joined.empty() ? "" : ";") + f;
        switch (g.format) {
            case OutputFormat::plain:
                if (!ok) out << "FAIL k=" << r.k << " n=" << r.n << " " << joined << '\n';
                break;
            case OutputFormat::csv:
                out << r.k << ',' << r.n << ',' << (ok ? "true" : "false") << ',' << joined << '\n';
                break;
            case OutputFormat::json_lines:
                out << json{{"command", "verify"}, {"k", r.k}, {"n", r.n}, {"ok", ok}, {"failed", r.failed}}.dump()
                    << '\n';
                break;
        }
    }
    switch (g.format) {
        case OutputFormat::plain:
            out << results.size() << (results.size() == 1 ? " case, " : " cases, ") << failures
                << (failures == 1 ? " failure" : " failures") << '\n';
            break;
        case OutputFormat::csv: break;
        case OutputFormat::json_lines:
            out << json{{"command", "verify"}, {"cases", results.size()}, {"failures", failures}}.dump() << '\n';
            break;
    }
    return failures == 0 ? exit_ok : exit_mismatch;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
    std::int64_t k = 1;
    std::vector<std::int64_t> n_list;
    std::vector<std::string> methods;
    int repetitions = 3;
};

struct BenchRow {
    std::int64_t k, n;
    std::string method;
    int repetitions;
    double min_ms, median_ms;
};

inline double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    auto const m = xs.size() / 2;
    return xs.size() % 2 ? xs[m] : (xs[m - 1] + xs[m]) / 2.0;
}

inline int cmd_bench(BenchArgs const& a, GlobalOptions const& g, std::ostream& out) {
    if (a.repetitions < 1) throw usage_error("--repetitions must be >= 1");
    if (a.n_list.empty()) throw usage_error("--n needs at least one value");
    auto const methods = detail::expand_methods(a.methods);
    auto const policy = g.policy();

    std::vector<BenchRow> rows;
    for (auto n : a.n_list) {
        Params const p{a.k, n};
        for (auto const& m : methods) {
            std::vector<double> times;
            for (int rep = 0; rep < a.repetitions; ++rep) {
                auto const t0 = std::chrono::steady_clock::now();
                auto v = detail::compute_one(m, p, p.centre(), policy);
                auto const t1 = std::chrono::steady_clock::now();
                (void)v;
                times.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
            }
            rows.push_back({p.k, p.n, m, a.repetitions, *std::min_element(times.begin(), times.end()),
                            median(times)});
        }
    }

    switch (g.format) {
        case OutputFormat::plain:
            out << std::left << std::setw(6) << "k" << std::setw(8) << "n" << std::setw(10) << "method"
                << std::setw(6) << "reps" << std::setw(14) << "min_ms" << "median_ms" << '\n';
            for (auto const& r : rows) {
                out << std::left << std::setw(6) << r.k << std::setw(8) << r.n << std::setw(10) << r.method
                    << std::setw(6) << r.repetitions << std::setw(14) << detail::fmt_ms(r.min_ms)
                    << detail::fmt_ms(r.median_ms) << '\n';
            }
            break;
        case OutputFormat::csv:
            out << "k,n,method,repetitions,min_ms,median_ms\n";
            for (auto const& r : rows) {
                out << detail::csv_row({std::to_string(r.k), std::to_string(r.n), r.method,
                                        std::to_string(r.repetitions), detail::fmt_ms(r.min_ms),
                                        detail::fmt_ms(r.median_ms)})
                    << '\n';
            }
            break;
        case OutputFormat::json_lines:
            for (auto const& r : rows) {
                out << json{{"command", "bench"},         {"k", r.k},           {"n", r.n},
                            {"method", r.method},         {"repetitions", r.repetitions},
                            {"min_ms", r.min_ms},         {"median_ms", r.median_ms}}
                           .dump()
                    << '\n';
            }
            break;
    }
    return exit_ok;
}

// ---------------------------------------------------------------------------

struct OeisArgs {
    std::optional<std::string> id;
    std::optional<std::int64_t> k;
    std::int64_t count = 15;
    bool offline = false;
    std::optional<std::string> base_url;
};

inline int cmd_oeis(OeisArgs const& a, GlobalOptions const& g, std::ostream& out) {
    if (a.count < 1) throw usage_error("--count must be >= 1");
    if (a.id && !is_valid_oeis_id(*a.id)) {
        throw usage_error("malformed OEIS id '" + *a.id + "', expected A followed by 6 digits");
    }
    std::string id;
    std::int64_t k = 0;
    if (a.id) {
        id = *a.id;
        if (a.k) {
            k = *a.k;
        } else if (auto reg = lookup_by_id(id)) {
            k = *reg->k;
        } else {
            throw usage_error(id + " is not registered; pass --k");
        }
    } else if (a.k) {
        auto reg = lookup_by_k(*a.k);
        if (!reg) throw usage_error("no registered sequence for k=" + std::to_string(*a.k) + "; pass --id");
        id = reg->oeis_id;
        k = *a.k;
    } else {
        throw usage_error("pass --id or --k");
    }

    SequenceRecord record;
    auto const registered = lookup_by_id(id);
    if (a.offline && registered) {
        record = *registered;
    } else {
        FetchConfig cfg;
        cfg.network_enabled = !a.offline;
        if (a.base_url) cfg.base_url = *a.base_url;
        record = fetch_bfile(id, static_cast<std::size_t>(a.count), cfg);
    }
    auto const report = compare(record, k, static_cast<std::size_t>(a.count), g.policy());

    std::string const source = std::string(to_string(record.provenance)) + (record.from_cache ? " (cache)" : "");
    switch (g.format) {
        case OutputFormat::plain:
            for (auto const& e : report.entries) {
                out << "n=" << e.n << " expected=" << e.expected << " trace=" << e.via_trace
                    << " spectral=" << e.via_spectrum << (e.equal() ? " ok" : " MISMATCH") << '\n';
            }
            out << id << " k=" << k << " [" << source << "]: ";
            if (report.all_equal()) {
                out << report.entries.size() << "/" << report.entries.size() << " equal\n";
            } else {
                out << "mismatch at n=" << *report.first_mismatch << '\n';
            }
            break;
        case OutputFormat::csv:
            out << "n,expected,trace,spectral,equal\n";
            for (auto const& e : report.entries) {
                out << detail::csv_row({std::to_string(e.n), e.expected.str(), e.via_trace.str(),
                                        e.via_spectrum.str(), e.equal() ? "true" : "false"})
                    << '\n';
            }
            break;
        case OutputFormat::json_lines: {
            for (auto const& e : report.entries) {
                out << json{{"command", "oeis"},
                            {"id", id},
                            {"n", e.n},
                            {"expected", e.expected.str()},
                            {"trace", e.via_trace.str()},
                            {"spectral", e.via_spectrum.str()},
                            {"equal", e.equal()}}
                           .dump()
                    << '\n';
            }
            json summary = {{"command", "oeis"},  {"id", id},
                            {"k", k},             {"count", report.entries.size()},
                            {"all_equal", report.all_equal()},
                            {"paths", report.paths}, {"provenance", source}};
            summary["first_mismatch"] = report.first_mismatch ? json(*report.first_mismatch) : json(nullptr);
            out << summary.dump() << '\n';
            break;
        }
    }
    return report.all_equal() ? exit_ok : exit_mismatch;
}

// ---------------------------------------------------------------------------

/// Parses `args` (without the program name) and runs the chosen subcommand.
inline int run(std::vector<std::string> const& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Central (2k+1)-nomial coefficients by convolution, circulant trace and spectral sum",
                 "multinom"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    std::map<std::string, OutputFormat> const formats{
        {"plain", OutputFormat::plain}, {"csv", OutputFormat::csv}, {"json-lines", OutputFormat::json_lines}};
    app.add_option("--format", g.format, "Output format")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    app.add_option("--precision", g.precision, "Starting precision for spectral sums")
        ->check(CLI::IsMember({"double", "compensated", "arbitrary"}));
    app.add_option("--mantissa-bits", g.mantissa_bits, "Minimum MPFR precision for --precision arbitrary");

    auto const method_check = CLI::IsMember({"conv", "trace", "spectral", "all"});

    ComputeArgs ca;
    auto* compute = app.add_subcommand("compute", "Compute one coefficient p_l of P(x)^n");
    compute->add_option("--k", ca.k, "Half-degree k")->required()->check(CLI::PositiveNumber);
    compute->add_option("--n", ca.n, "Power n")->required()->check(CLI::NonNegativeNumber);
    compute->add_option("--l", ca.l, "Coefficient index (default kn)")->check(CLI::NonNegativeNumber);
    compute->add_option("--method", ca.method, "conv, trace, spectral or all")->check(method_check);

    SequenceArgs sa;
    auto* sequence = app.add_subcommand("sequence", "Emit M^(2k,n) for consecutive n");
    sequence->add_option("--k", sa.k)->required()->check(CLI::PositiveNumber);
    sequence->add_option("--count", sa.count)->required()->check(CLI::PositiveNumber);
    sequence->add_option("--start-n", sa.start_n)->check(CLI::NonNegativeNumber);
    sequence->add_option("--method", sa.method)->check(method_check);

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Run cross-method and structural checks over a (k, n) grid");
    verify->add_option("--k-max", va.k_max)->required()->check(CLI::PositiveNumber);
    verify->add_option("--n-max", va.n_max)->required()->check(CLI::PositiveNumber);
    verify->add_option("--seed", va.seed, "Seed for the off-centre coefficient spot checks");
    verify->add_option("--threads", va.threads, "Worker threads (default: hardware concurrency)");
    verify->add_flag("--inject-fault", va.inject_fault)->group("");

    BenchArgs ba;
    auto* bench = app.add_subcommand("bench", "Time the three routes");
    bench->add_option("--k", ba.k)->required()->check(CLI::PositiveNumber);
    bench->add_option("--n", ba.n_list, "Comma-separated powers")->required()->delimiter(',')->check(
        CLI::NonNegativeNumber);
    bench->add_option("--method", ba.methods, "Comma-separated methods (default all)")
        ->delimiter(',')
        ->check(method_check);
    bench->add_option("--repetitions", ba.repetitions)->check(CLI::PositiveNumber);

    OeisArgs oa;
    auto* oeis = app.add_subcommand("oeis", "Compare an OEIS sequence with computed values");
    oeis->add_option("--id", oa.id, "OEIS id, e.g. A002426");
    oeis->add_option("--k", oa.k)->check(CLI::PositiveNumber);
    oeis->add_option("--count", oa.count)->check(CLI::PositiveNumber);
    oeis->add_flag("--offline", oa.offline, "Use fixtures or the cache only");
    oeis->add_option("--base-url", oa.base_url, "OEIS server (default https://oeis.org)");

    std::vector<char const*> argv{"multinom"};
    for (auto const& s : args) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (CLI::CallForHelp const& e) {
        return app.exit(e, out, err);
    } catch (CLI::CallForAllHelp const& e) {
        return app.exit(e, out, err);
    } catch (CLI::ParseError const& e) {
        app.exit(e, out, err);
        return exit_usage;
    }

    try {
        if (*compute) return cmd_compute(ca, g, out);
        if (*sequence) return cmd_sequence(sa, g, out);
        if (*verify) return cmd_verify(va, g, out);
        if (*bench) return cmd_bench(ba, g, out);
        if (*oeis) return cmd_oeis(oa, g, out);
    } catch (usage_error const& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (std::domain_error const& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (std::out_of_range const& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (invalid_oeis_id const& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (certification_failure const& e) {
        err << "error: " << e.what() << " (residual " << e.residual() << ")\n";
        return exit_runtime;
    } catch (std::exception const& e) {
        err << "error: " << e.what() << '\n';
        return exit_runtime;
    }
    return exit_usage;
}

}  // namespace multinom::cli
