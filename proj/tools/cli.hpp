#pragma once

// Command-line front end. Exit codes: 0 ok, 1 invalid input, 2 evaluation
// error, 3 a property check failed.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json_io.hpp"
#include "plambda/bigstep.hpp"
#include "plambda/checks.hpp"
#include "plambda/cps.hpp"
#include "plambda/encodings.hpp"
#include "plambda/expressiveness.hpp"
#include "plambda/parse.hpp"
#include "plambda/sampler.hpp"
#include "plambda/smallstep.hpp"

namespace plambda::cli {

enum Exit { Ok = 0, InvalidInput = 1, EvaluationError = 2, PropertyFail = 3 };

namespace detail {

using io::json;

/// Raised for malformed flags or arguments detected by the front end itself.
struct InputError : Error {
    using Error::Error;
};

inline Strategy strategy_of(const std::string& s) { return s == "cbn" ? Strategy::CbN : Strategy::CbV; }

inline std::string read_all(std::istream& in) { return {std::istreambuf_iterator<char>(in), {}}; }

inline std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot read " + path);
    return read_all(f);
}

/// Closed term from an argument; "-" reads standard input.
inline Term closed_term(const std::string& text, std::istream& in) {
    Term t = parse(text == "-" ? read_all(in) : text);
    if (!t.is_closed()) {
        std::string names;
        for (const auto& n : free_vars(t)) names += " " + n;
        throw OpenTermError("term has free variables:" + names);
    }
    return t;
}

/// Short name for well-known values in text reports.
inline std::string label(const Term& v) {
    for (const auto& name : {"TT", "FF", "ID"}) {
        if (enc::constants().at(name) == v) return name;
    }
    if (auto n = enc::decode_nat(v)) return "NAT " + std::to_string(*n);
    return "";
}

inline void print_dist(std::ostream& out, const SubDist& d, const std::string& indent = "  ") {
    if (d.empty()) {
        out << indent << "(empty)\n";
        return;
    }
    std::vector<std::pair<std::string, const Dyadic*>> rows;
    for (const auto& [v, m] : d) {
        std::string text = print(v);
        std::string l = label(v);
        if (!l.empty()) text += "   [" + l + "]";
        rows.emplace_back(std::move(text), &m);
    }
    std::sort(rows.begin(), rows.end());
    for (const auto& [text, m] : rows) out << indent << m->str() << "  " << text << "\n";
}

}  // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err, std::istream& in) {
    using namespace detail;
    CLI::App cmd{"Workbench for the probabilistic lambda calculus with fair binary choice"};
    cmd.require_subcommand(1);
    cmd.set_help_all_flag("--help-all", "Show help for every subcommand");

    std::string term_text;
    std::string strategy = "cbv";
    std::uint64_t fuel = 100;
    bool as_json = false;
    auto strategies = CLI::IsMember({"cbv", "cbn"});

    auto* parse_cmd = cmd.add_subcommand("parse", "Print the canonical form of a term");
    bool pretty = false;
    parse_cmd->add_option("term", term_text, "Term text, or - for stdin")->required();
    parse_cmd->add_flag("--pretty", pretty, "Keep binder names instead of canonical ones");

    auto* eval_cmd = cmd.add_subcommand("eval", "Approximate the value distribution of a closed term");
    std::string engine = "small";
    eval_cmd->add_option("term", term_text, "Term text, or - for stdin")->required();
    eval_cmd->add_option("--strategy", strategy, "cbv or cbn")->check(strategies);
    eval_cmd->add_option("--engine", engine, "small or big")->check(CLI::IsMember({"small", "big"}));
    eval_cmd->add_option("--fuel", fuel, "Rounds (small) or derivation height (big)");
    eval_cmd->add_flag("--json", as_json, "Machine-readable output");

    auto* div_cmd = cmd.add_subcommand("diverge", "Bracket the probability of divergence");
    div_cmd->add_option("term", term_text, "Term text, or - for stdin")->required();
    div_cmd->add_option("--strategy", strategy, "cbv or cbn")->check(strategies);
    div_cmd->add_option("--fuel", fuel, "Rounds");
    div_cmd->add_flag("--json", as_json, "Machine-readable output");

    auto* cps_cmd = cmd.add_subcommand("cps", "Translate a term into continuation-passing style");
    std::string direction;
    bool apply_id = false;
    bool canon = false;
    cps_cmd->add_option("term", term_text, "Term text, or - for stdin")->required();
    cps_cmd->add_option("--direction", direction, "v2n or n2v")->required()->check(CLI::IsMember({"v2n", "n2v"}));
    cps_cmd->add_flag("--apply-id", apply_id, "Apply the result to the identity continuation");
    cps_cmd->add_flag("--canonical", canon, "Print canonical binder names");

    auto* sample_cmd = cmd.add_subcommand("sample", "Monte Carlo estimate by random runs");
    std::uint64_t samples = 1000;
    std::uint64_t max_steps = 10000;
    std::uint64_t seed = 0;
    sample_cmd->add_option("term", term_text, "Term text, or - for stdin")->required();
    sample_cmd->add_option("--strategy", strategy, "cbv or cbn")->check(strategies);
    sample_cmd->add_option("--samples", samples, "Number of runs")->check(CLI::PositiveNumber);
    sample_cmd->add_option("--max-steps", max_steps, "Step budget per run");
    sample_cmd->add_option("--seed", seed, "Seed");
    sample_cmd->add_flag("--json", as_json, "Machine-readable output");

    auto* encode_cmd = cmd.add_subcommand("encode", "Build encoded terms");
    std::string encode_kind;
    std::string encode_arg;
    encode_cmd->add_option("kind", encode_kind, "nat or fdt")->required()->check(CLI::IsMember({"nat", "fdt"}));
    encode_cmd->add_option("value", encode_arg, "A natural, or a JSON object such as {\"0\":\"1/2\",\"1\":\"1/2\"}")
        ->required();
    encode_cmd->add_flag("--canonical", canon, "Print canonical binder names");

    auto* demo_cmd = cmd.add_subcommand("demo", "Worked examples");
    std::string demo_name;
    demo_cmd->add_option("name", demo_name, "xor, geo, omega or standard-choice")
        ->required()
        ->check(CLI::IsMember({"xor", "geo", "omega", "standard-choice"}));

    auto* check_cmd = cmd.add_subcommand("check", "Run a property suite over a corpus file");
    std::string suite;
    std::string corpus_path;
    std::uint64_t check_fuel = 500;
    check_cmd->add_option("suite", suite, "simulation, bigsmall or duality")
        ->required()
        ->check(CLI::IsMember({"simulation", "bigsmall", "duality"}));
    check_cmd->add_option("--corpus", corpus_path, "One term per line, -- comments")->required();
    check_cmd->add_option("--fuel", check_fuel, "Rounds per term");

    auto* oracle_cmd = cmd.add_subcommand("oracle", "Serve a distribution oracle on stdin/stdout (lines `a n`)");
    std::string oracle_kind;
    std::string oracle_arg;
    oracle_cmd->add_option("kind", oracle_kind, "geometric or dist")->required()->check(CLI::IsMember({"geometric", "dist"}));
    oracle_cmd->add_option("dist", oracle_arg, "JSON distribution for kind dist");

    auto* sound_cmd = cmd.add_subcommand("sound", "Digits of the probability that a term yields a numeral");
    std::uint64_t point = 0;
    std::uint64_t digits = 8;
    std::uint64_t max_fuel = std::uint64_t{1} << 14;
    sound_cmd->add_option("term", term_text, "Term text, or - for stdin")->required();
    sound_cmd->add_option("--point", point, "Numeral whose probability is read");
    sound_cmd->add_option("--digits", digits, "Binary digits")->check(CLI::Range(0, 4096));
    sound_cmd->add_option("--max-fuel", max_fuel, "Largest fuel tried");

    auto* complete_cmd = cmd.add_subcommand("complete", "Build a term approximating a computable distribution");
    std::string complete_dist;
    std::string oracle_command;
    bool complete_geo = false;
    std::uint64_t rounds = 3;
    auto* g_opt = complete_cmd->add_flag("--geometric", complete_geo, "Use the oracle a -> 2^-(a+1)");
    auto* d_opt = complete_cmd->add_option("--dist", complete_dist, "JSON distribution");
    auto* c_opt = complete_cmd->add_option("--oracle-cmd", oracle_command, "Shell command speaking the oracle protocol");
    g_opt->excludes(d_opt)->excludes(c_opt);
    d_opt->excludes(c_opt);
    complete_cmd->add_option("--rounds", rounds, "Split rounds")->check(CLI::Range(0, 64));
    complete_cmd->add_flag("--canonical", canon, "Print canonical binder names");

    std::reverse(args.begin(), args.end());
    try {
        cmd.parse(args);
    } catch (const CLI::CallForHelp& e) {
        out << cmd.help();
        return Ok;
    } catch (const CLI::CallForAllHelp& e) {
        out << cmd.help("", CLI::AppFormatMode::All);
        return Ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return InvalidInput;
    }

    auto show = [&](const Term& t) { return canon ? canonical(t) : print(t); };
    bool evaluating = false;
    try {
        if (parse_cmd->parsed()) {
            Term t = parse(term_text == "-" ? read_all(in) : term_text);
            out << (pretty ? print(t) : canonical(t)) << "\n";
            return Ok;
        }

        if (eval_cmd->parsed()) {
            Term t = closed_term(term_text, in);
            Strategy s = strategy_of(strategy);
            evaluating = true;
            SubDist lower;
            Dyadic residual;
            if (engine == "small") {
                SmallStepEngine e(t, s);
                e.run_to(fuel);
                lower = e.lower();
                residual = e.residual();
            } else {
                lower = eval_big(t, s, fuel);
                residual = Dyadic::one() - lower.mass();
            }
            DivergenceBracket div = divergence_bracket(t, s, fuel);
            div.upper = residual < div.upper ? residual : div.upper;
            if (as_json) {
                json j = io::to_json(lower);
                j["strategy"] = std::string(to_string(s));
                j["engine"] = engine;
                j["fuel"] = fuel;
                j["residual"] = io::to_json(residual);
                j["divergence"] = json{{"lower", io::to_json(div.lower)}, {"upper", io::to_json(div.upper)}};
                out << j.dump(2) << "\n";
            } else {
                out << to_string(s) << ", " << engine << "-step, fuel " << fuel << "\n";
                print_dist(out, lower);
                out << "residual " << residual << "\n";
                out << "divergence in [" << div.lower << ", " << div.upper << "]\n";
            }
            return Ok;
        }

        if (div_cmd->parsed()) {
            Term t = closed_term(term_text, in);
            Strategy s = strategy_of(strategy);
            evaluating = true;
            DivergenceBracket div = divergence_bracket(t, s, fuel);
            if (as_json) {
                out << json{{"strategy", std::string(to_string(s))},
                            {"fuel", fuel},
                            {"lower", io::to_json(div.lower)},
                            {"upper", io::to_json(div.upper)}}
                           .dump(2)
                    << "\n";
            } else {
                out << "divergence in [" << div.lower << ", " << div.upper << "]\n";
            }
            return Ok;
        }

        if (cps_cmd->parsed()) {
            Term t = parse(term_text == "-" ? read_all(in) : term_text);
            Term r = direction == "v2n" ? cps::cps_v_to_n(t) : cps::cps_n_to_v(t);
            if (apply_id) r = app(r, enc::identity());
            out << show(r) << "\n";
            return Ok;
        }

        if (sample_cmd->parsed()) {
            Term t = closed_term(term_text, in);
            Strategy s = strategy_of(strategy);
            evaluating = true;
            Estimate e = estimate(t, s, samples, max_steps, seed);
            std::vector<std::pair<std::string, std::uint64_t>> rows;
            for (const auto& [v, c] : e.counts) rows.emplace_back(canonical(v), c);
            std::sort(rows.begin(), rows.end());
            if (as_json) {
                json counts = json::array();
                for (const auto& [text, c] : rows) {
                    counts.push_back(json{{"value", text}, {"count", c}, {"frequency", double(c) / double(samples)}});
                }
                out << json{{"strategy", std::string(to_string(s))},
                            {"samples", samples},
                            {"max_steps", max_steps},
                            {"seed", seed},
                            {"rng", Estimate::rng_name},
                            {"counts", counts},
                            {"timeouts", e.timeouts},
                            {"timeout_rate", e.timeout_rate()}}
                           .dump(2)
                    << "\n";
            } else {
                out << samples << " runs, " << to_string(s) << ", seed " << seed << " (" << Estimate::rng_name << ")\n";
                std::vector<std::pair<Term, std::uint64_t>> by_count(e.counts.begin(), e.counts.end());
                std::stable_sort(by_count.begin(), by_count.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
                for (const auto& [v, c] : by_count) {
                    std::string l = label(v);
                    out << "  " << c << "  " << print(v) << (l.empty() ? "" : "   [" + l + "]") << "\n";
                }
                out << "timeouts " << e.timeouts << "\n";
            }
            return Ok;
        }

        if (encode_cmd->parsed()) {
            if (encode_kind == "nat") {
                std::size_t used = 0;
                std::uint64_t n = 0;
                try {
                    n = std::stoull(encode_arg, &used);
                } catch (const std::exception&) {
                    used = 0;
                }
                if (used == 0 || used != encode_arg.size() || encode_arg[0] == '-') {
                    throw InputError("not a natural number: " + encode_arg);
                }
                out << show(enc::nat(n)) << "\n";
            } else {
                enc::NatDist d = io::nat_dist_from_json(json::parse(encode_arg));
                out << show(enc::fdt_from_dist(d)) << "\n";
            }
            return Ok;
        }

        if (demo_cmd->parsed()) {
            evaluating = true;
            if (demo_name == "xor") {
                Term t = enc::xor_program();
                out << "program: (\\x. XOR x x) (TT (+) FF)\n";
                for (auto s : {Strategy::CbV, Strategy::CbN}) {
                    SmallStepEngine e(t, s);
                    e.run_until_settled(1000);
                    out << to_string(s) << ":\n";
                    print_dist(out, e.lower());
                }
                out << "call-by-value flips the coin once and passes the outcome to both uses of x;\n"
                       "call-by-name passes the unflipped coin, which is then flipped twice.\n";
            } else if (demo_name == "geo") {
                SmallStepEngine e(enc::geo(), Strategy::CbV);
                while (e.lower().at(enc::nat(7)).is_zero()) e.round();
                out << "GEO under cbv, fuel " << e.fuel() << ":\n";
                for (std::uint64_t n = 0; n < 8; ++n) out << "  P(" << n << ") = " << e.lower().at(enc::nat(n)) << "\n";
                out << "residual " << e.residual() << "\n";
            } else if (demo_name == "omega") {
                for (auto s : {Strategy::CbV, Strategy::CbN}) {
                    DivergenceBracket db = divergence_bracket(enc::omega(), s, 10);
                    out << "OMEGA, " << to_string(s) << ": no values, divergence in [" << db.lower << ", " << db.upper
                        << "]\n";
                }
                Term half = choice(enc::omega(), enc::identity());
                for (auto s : {Strategy::CbV, Strategy::CbN}) {
                    Bracket b = approximate(half, s, 10);
                    DivergenceBracket db = divergence_bracket(half, s, 10);
                    out << "OMEGA (+) (\\x. x), " << to_string(s) << ":\n";
                    print_dist(out, b.lower);
                    out << "  divergence in [" << db.lower << ", " << db.upper << "]\n";
                }
            } else {
                Term std_choice = enc::standard_choice(enc::omega(), enc::identity());
                Term raw = choice(enc::omega(), enc::identity());
                out << "OMEGA + (\\x. x) as (TT (+) FF) (\\z. OMEGA) (\\z. \\x. x) (\\w. w), cbv:\n";
                print_dist(out, approximate(std_choice, Strategy::CbV, 20).lower);
                out << "OMEGA (+) (\\x. x), cbv:\n";
                print_dist(out, approximate(raw, Strategy::CbV, 20).lower);
            }
            return Ok;
        }

        if (check_cmd->parsed()) {
            std::vector<Term> corpus = parse_corpus(read_file(corpus_path));
            for (const auto& t : corpus) {
                if (!t.is_closed()) throw OpenTermError("corpus term is open: " + print(t));
            }
            evaluating = true;
            bool failed = false;
            std::size_t counts[3] = {0, 0, 0};
            auto report = [&](const Term& t, const std::string& what, const CheckResult& r) {
                ++counts[static_cast<int>(r.verdict)];
                failed = failed || r.verdict == cps::Verdict::Fail;
                out << cps::to_string(r.verdict) << "  " << what << "  " << print(t) << "  (" << r.detail << ")\n";
            };
            for (const auto& t : corpus) {
                if (suite == "simulation") {
                    report(t, "cps", check_simulation(t, check_fuel));
                } else {
                    for (auto s : {Strategy::CbV, Strategy::CbN}) {
                        CheckResult r = suite == "bigsmall" ? check_bigsmall(t, s, check_fuel) : check_duality(t, s, check_fuel);
                        report(t, std::string(to_string(s)), r);
                    }
                }
            }
            out << suite << ": " << counts[0] << " pass, " << counts[1] << " bracket-consistent, " << counts[2] << " fail\n";
            return failed ? PropertyFail : Ok;
        }

        if (oracle_cmd->parsed()) {
            expr::DistOracle o = oracle_kind == "geometric" ? expr::geometric_oracle()
                                                            : expr::finite_oracle(io::nat_dist_from_json(json::parse(oracle_arg)));
            std::string line;
            while (std::getline(in, line)) {
                std::istringstream ls(line);
                std::uint64_t a = 0, n = 0;
                if (!(ls >> a >> n)) throw InputError("expected `a n`, got: " + line);
                out << o(a, n) << "\n" << std::flush;
            }
            return Ok;
        }

        if (sound_cmd->parsed()) {
            Term t = closed_term(term_text, in);
            evaluating = true;
            auto r = expr::soundness_approx(t, point, digits, {16, max_fuel});
            out << (r ? *r : "INSUFFICIENT") << "\n";
            return Ok;
        }

        if (complete_cmd->parsed()) {
            expr::DistOracle o;
            if (!complete_dist.empty()) {
                o = expr::finite_oracle(io::nat_dist_from_json(json::parse(complete_dist)));
            } else if (!oracle_command.empty()) {
                o = expr::SubprocessOracle(oracle_command);
            } else if (complete_geo) {
                o = expr::geometric_oracle();
            } else {
                throw InputError("one of --geometric, --dist or --oracle-cmd is required");
            }
            evaluating = true;
            expr::Completion c = expr::completeness_approx(o, rounds);
            out << show(c.term) << "\n";
            err << "mass at least " << c.guarantee << "\n";
            return Ok;
        }
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return InvalidInput;
    } catch (const OpenTermError& e) {
        err << "error: " << e.what() << "\n";
        return InvalidInput;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return InvalidInput;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << "\n";
        return InvalidInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return evaluating ? EvaluationError : InvalidInput;
    }
    return Ok;
}

}  // namespace plambda::cli
