#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "rosenthal3/selftest.hpp"
#include "rosenthal3/serialization.hpp"
#include "rosenthal3/version.hpp"

namespace rosenthal3::cli {

// Exit codes: 0 ok, 1 usage or parse problem, 2 precondition violation,
// 3 a soundness sweep or acceptance criterion failed (an implementation bug,
// never a falsification of the inequalities).
struct UsageError : std::exception {
    explicit UsageError(std::string m) : msg(std::move(m)) {}
    const char* what() const noexcept override { return msg.c_str(); }
    std::string msg;
};

struct SweepFailure : std::exception {
    const char* what() const noexcept override { return "soundness sweep failed"; }
};

namespace detail_cli {

inline double parse_num(const std::string& s) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw UsageError("malformed number: " + s);
        return v;
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception&) {
        throw UsageError("malformed number: " + s);
    }
}

inline std::vector<double> parse_csv(const std::string& s) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t comma = s.find(',', start);
        const std::size_t end = comma == std::string::npos ? s.size() : comma;
        out.push_back(parse_num(s.substr(start, end - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

// --f accepts literals hinge:c,t,alpha / exp:c,lambda / affine:a,b and
// @path for a JSON function document; repeated flags are summed.
inline F3Function parse_f3(const std::vector<std::string>& terms) {
    F3Function f;
    for (const std::string& s : terms) {
        if (!s.empty() && s[0] == '@') {
            std::ifstream in(s.substr(1));
            if (!in) throw UsageError("cannot open function file: " + s.substr(1));
            f = f + f3_from_json(json::parse(in));
            continue;
        }
        const std::size_t colon = s.find(':');
        if (colon == std::string::npos)
            throw UsageError("malformed function literal: " + s);
        const std::string kind = s.substr(0, colon);
        const std::vector<double> v = parse_csv(s.substr(colon + 1));
        if (kind == "hinge" && v.size() == 3)
            f = f + F3Function::hinge(v[0], v[1], v[2]);
        else if (kind == "exp" && v.size() == 2)
            f = f + F3Function::exponential(v[0], v[1]);
        else if (kind == "affine" && v.size() == 2)
            f = f + F3Function::affine(v[0], v[1]);
        else
            throw UsageError("malformed function literal: " + s);
    }
    return f;
}

inline std::string round_3sig(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

inline void print_human(const json& j, std::ostream& out, const std::string& prefix) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items())
            print_human(v, out, prefix.empty() ? k : prefix + "." + k);
    } else if (j.is_array()) {
        std::size_t i = 0;
        for (const auto& v : j) print_human(v, out, prefix + "[" + std::to_string(i++) + "]");
    } else if (j.is_string()) {
        out << prefix << " = " << j.get<std::string>() << "\n";
    } else {
        out << prefix << " = " << j.dump() << "\n";
    }
}

inline void emit(const std::string& format, const std::string& command,
                 const json& payload, std::ostream& out) {
    if (format == "structured") {
        json doc;
        doc["command"] = command;
        doc["version"] = ROSENTHAL3_VERSION;
        doc["result"] = payload;
        out << doc.dump(2) << "\n";
    } else {
        print_human(payload, out, "");
    }
}

inline DistributionSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open spec file: " + path);
    return spec_from_json(json::parse(in));
}

}  // namespace detail_cli

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    using detail_cli::emit;

    CLI::App app{"certified third-moment bounds for sums of independent variables"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "human";
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"human", "structured"}));

    // bound
    CLI::App* sb = app.add_subcommand("bound", "companion bounds for a target function");
    double sb_beta = 0.0, sb_x = 0.0, sb_sum_abs3 = 0.0;
    bool sb_zero_means = false;
    std::vector<std::string> sb_f;
    sb->add_option("--beta", sb_beta, "positive-part third-moment budget")->required();
    sb->add_option("--f", sb_f, "function term (hinge:c,t,alpha | exp:c,lambda | affine:a,b | @file)");
    CLI::Option* sb_x_opt = sb->add_option("--x", sb_x, "threshold for the cubed bounds");
    CLI::Option* sb_abs_opt =
        sb->add_option("--sum-abs3", sb_sum_abs3, "sum of absolute third moments");
    sb->add_flag("--zero-means", sb_zero_means, "assert the zero-means hypothesis");

    // corollary
    CLI::App* sc = app.add_subcommand("corollary", "fractional moment bound E S_+^p");
    double sc_p = 0.0, sc_a = 0.0, sc_beta = 0.0;
    sc->add_option("--p", sc_p, "moment order in (0, 3)")->required();
    CLI::Option* sc_a_opt = sc->add_option("--a", sc_a, "shift parameter (omit to optimize)");
    sc->add_option("--beta", sc_beta, "positive-part third-moment budget")->required();

    // mixture
    CLI::App* sm = app.add_subcommand("mixture", "certified companion-law expectation");
    double sm_beta = 0.0, sm_y = 0.0, sm_eps = 1e-9;
    std::vector<std::string> sm_f;
    sm->add_option("--beta", sm_beta, "positive-part third-moment budget")->required();
    sm->add_option("--y", sm_y, "truncation level, y > beta")->required();
    sm->add_option("--eps", sm_eps, "tail certificate target");
    sm->add_option("--f", sm_f, "function term (default hinge:1,0,3)");

    // verify
    CLI::App* sv = app.add_subcommand("verify", "soundness sweeps on exact finite laws");
    std::string sv_spec_path;
    std::size_t sv_count = 10, sv_n_vars = 0;
    std::uint64_t sv_seed = 0;
    double sv_beta_target = 0.0;
    sv->add_option("--spec", sv_spec_path, "JSON distribution spec to verify");
    sv->add_option("--count", sv_count, "number of random specs");
    sv->add_option("--seed", sv_seed, "seed for the random specs");
    sv->add_option("--n-vars", sv_n_vars, "fixed variable count (default random 1..12)");
    sv->add_option("--beta-target", sv_beta_target, "fixed beta target (default random)");

    // extremal
    CLI::App* se = app.add_subcommand("extremal", "near-extremal spike and filler probe");
    double se_beta = 0.0, se_y = 0.0, se_filler_scale = 1.0, se_x = 0.0;
    std::size_t se_spikes = 8, se_fillers = 128;
    se->add_option("--beta", se_beta, "positive-part third-moment budget")->required();
    se->add_option("--y", se_y, "spike level, y > beta")->required();
    se->add_option("--n-spikes", se_spikes, "number of spike variables");
    se->add_option("--n-fillers", se_fillers, "number of filler variables");
    se->add_option("--filler-scale", se_filler_scale, "cap on the filler atom size");
    se->add_option("--x", se_x, "threshold for the cube-plus comparison");

    // selftest
    CLI::App* st = app.add_subcommand("selftest", "run the acceptance criteria");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    }

    std::string command = "";
    const auto fail_doc = [&](const std::string& msg) {
        if (format == "structured") {
            json doc;
            doc["command"] = command;
            doc["version"] = ROSENTHAL3_VERSION;
            doc["error"] = msg;
            out << doc.dump(2) << "\n";
        }
    };

    try {
        if (app.got_subcommand(sb)) {
            command = "bound";
            const Constraints c(sb_beta, sb_zero_means);
            const bool has_f = !sb_f.empty();
            const bool has_x = sb_x_opt->count() > 0;
            const bool has_abs = sb_abs_opt->count() > 0;
            if (!has_f && !has_x)
                throw UsageError("bound: provide --f terms and/or --x");
            if (has_abs && !has_x)
                throw UsageError("bound: --sum-abs3 needs --x");
            json results = json::array();
            if (has_f) results.push_back(to_json_doc(theorem_bound(detail_cli::parse_f3(sb_f), c)));
            if (has_x) results.push_back(to_json_doc(cube_plus_bound(sb_x, c)));
            if (has_abs) results.push_back(to_json_doc(abs_cube_bound(sb_x, sb_sum_abs3, c)));
            emit(format, command, json{{"results", results}}, out);
            return 0;
        }

        if (app.got_subcommand(sc)) {
            command = "corollary";
            const Constraints c(sc_beta);
            json payload;
            if (sc_a_opt->count() > 0) {
                payload = to_json_doc(corollary_bound(sc_p, sc_a, c));
            } else {
                const OptimizedCorollary opt = optimize_corollary(sc_p, c);
                payload = to_json_doc(opt.bound);
                payload["a_star"] = opt.a_star;
            }
            payload["constant_rounded"] =
                detail_cli::round_3sig(payload.at("parameters").at("constant").get<double>());
            payload["coefficient_rounded"] =
                detail_cli::round_3sig(payload.at("parameters").at("coefficient").get<double>());
            emit(format, command, payload, out);
            return 0;
        }

        if (app.got_subcommand(sm)) {
            command = "mixture";
            const MixtureParams mp(sm_beta, sm_y);
            const F3Function f = sm_f.empty() ? F3Function::hinge(1.0, 0.0, 3.0)
                                              : detail_cli::parse_f3(sm_f);
            emit(format, command, to_json_doc(mixture_expectation(f, mp, sm_eps)), out);
            return 0;
        }

        if (app.got_subcommand(sv)) {
            command = "verify";
            std::vector<std::pair<DistributionSpec, double>> fixtures;
            if (!sv_spec_path.empty()) {
                DistributionSpec spec = detail_cli::load_spec(sv_spec_path);
                const double beta = check_conditions(spec, 1e18).beta_total;
                fixtures.emplace_back(std::move(spec), beta);
            } else {
                for (std::size_t i = 0; i < sv_count; ++i) {
                    const std::uint64_t seed = sv_seed + i;
                    const std::size_t n_vars =
                        sv_n_vars ? sv_n_vars
                                  : 1 + std::size_t(rosenthal3::detail::uniform01(
                                            seed, 0xCAFE, 1) * 12.0) % 12;
                    const double target =
                        sv_beta_target > 0.0
                            ? sv_beta_target
                            : std::pow(10.0, -3.0 + 2.7 * rosenthal3::detail::uniform01(
                                                              seed, 0xCAFE, 2));
                    GeneratedSpec g = random_valid_spec(seed, n_vars, target);
                    fixtures.emplace_back(std::move(g.spec), g.achieved_beta);
                }
            }

            const F3Function hinge = F3Function::hinge(1.0, 0.0, 3.0);
            const F3Function none;
            json per_spec = json::array();
            std::size_t checks = 0;
            double min_margin = std::numeric_limits<double>::infinity();
            for (const auto& [spec, beta] : fixtures) {
                double spec_min = std::numeric_limits<double>::infinity();
                const auto run_check = [&](const char* kind, const DistributionSpec& s,
                                           const F3Function& f, const BoundResult& b) {
                    const VerifyOutcome o = verify_inequality(s, f, b);
                    ++checks;
                    spec_min = std::min(spec_min, o.margin);
                    min_margin = std::min(min_margin, o.margin);
                    if (!o.pass) {
                        err << "soundness failure (" << kind << "):\n";
                        err << json{{"spec", to_json_doc(s)},
                                    {"bound", to_json_doc(b)},
                                    {"outcome", to_json_doc(o)}}
                                   .dump(2)
                            << "\n";
                        throw SweepFailure{};
                    }
                };
                for (double x : {-2.0, -1.0, 0.0, 1.0, 2.0})
                    run_check("cube_plus", spec, none, cube_plus_bound(x, Constraints(beta)));
                run_check("mean_plus", spec, none, mean_plus_bound(Constraints(beta)));
                const DistributionSpec centered = center_spec(spec);
                const ConstraintReport crep = check_conditions(centered, 1e18);
                const Constraints cc(crep.beta_total, true);
                for (double x : {-2.0, -1.0, 0.0, 1.0, 2.0})
                    run_check("abs_cube", centered, none,
                              abs_cube_bound(x, crep.abs_third_total, cc));
                for (double y : {2.0, 5.0, 10.0}) {
                    const double beta_y =
                        check_conditions(truncate_spec(spec, y), 1e18).beta_total;
                    if (!(beta_y < y)) continue;  // mixture undefined there
                    run_check("mixture", spec, hinge,
                              mixture_expectation(hinge, MixtureParams(beta_y, y), 1e-9));
                }
                per_spec.push_back({{"n_vars", spec.variables.size()},
                                    {"achieved_beta", beta},
                                    {"min_margin", spec_min}});
            }
            emit(format, command,
                 json{{"specs", fixtures.size()},
                      {"checks", checks},
                      {"failures", 0},
                      {"min_margin", min_margin},
                      {"per_spec", per_spec}},
                 out);
            return 0;
        }

        if (app.got_subcommand(se)) {
            command = "extremal";
            const ExtremalSpec ex =
                extremal_spec(se_beta, se_y, se_spikes, se_fillers, se_filler_scale);
            const BoundResult bound = cube_plus_bound(se_x, Constraints(ex.effective_beta));
            const double x = se_x;
            const double exact = exact_expectation_fn(ex.spec, [x](double s) {
                const double w = std::max(s - x, 0.0);
                return w * w * w;
            });
            json payload = to_json_doc(ex);
            payload.erase("spec");  // summary only; the law can be huge
            payload["x"] = se_x;
            payload["exact"] = exact;
            payload["bound"] = bound.value;
            payload["margin"] = bound.value - exact;
            payload["ratio"] = exact / bound.value;
            payload["pass"] = exact <= bound.value + 1e-12;
            emit(format, command, payload, out);
            return exact <= bound.value + 1e-12 ? 0 : 3;
        }

        if (app.got_subcommand(st)) {
            command = "selftest";
            const std::vector<CriterionResult> results = run_acceptance_criteria();
            bool all = true;
            if (format == "structured") {
                json arr = json::array();
                for (const CriterionResult& r : results) {
                    all &= r.pass;
                    arr.push_back({{"id", r.id},
                                   {"name", r.name},
                                   {"pass", r.pass},
                                   {"seconds", r.seconds},
                                   {"detail", r.detail}});
                }
                emit(format, command, json{{"criteria", arr}, {"all_pass", all}}, out);
            } else {
                for (const CriterionResult& r : results) {
                    all &= r.pass;
                    out << (r.pass ? "[PASS]" : "[FAIL]") << " criterion " << r.id << ": "
                        << r.name << " (" << rosenthal3::detail::fmt(r.seconds, 3)
                        << " s) - " << r.detail << "\n";
                }
                out << (all ? "acceptance: all criteria passed"
                            : "acceptance: FAILURES present")
                    << "\n";
            }
            return all ? 0 : 3;
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        fail_doc(e.what());
        return 1;
    } catch (const json::exception& e) {
        err << "parse error: " << e.what() << "\n";
        fail_doc(e.what());
        return 1;
    } catch (const SweepFailure& e) {
        // already reported with its fixture on stderr
        fail_doc(e.what());
        return 3;
    } catch (const std::exception& e) {
        err << "precondition violated: " << e.what() << "\n";
        fail_doc(e.what());
        return 2;
    }
    return 1;
}

inline int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace rosenthal3::cli
