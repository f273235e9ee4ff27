// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "plambda/bigstep.hpp"
#include "plambda/checks.hpp"
#include "plambda/cps.hpp"
#include "plambda/encodings.hpp"
#include "plambda/expressiveness.hpp"
#include "plambda/parse.hpp"
#include "plambda/sampler.hpp"
#include "plambda/smallstep.hpp"
#include "support/random_terms.hpp"

using namespace plambda;

namespace {

struct Failure {
    std::string what;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Failure{what};
}

Dyadic d(std::uint64_t num, std::uint64_t exp) { return Dyadic(BigInt(num), exp); }

std::vector<Term> load(const std::string& name) {
    std::ifstream f(std::string(PLAMBDA_SOURCE_DIR) + "/corpus/" + name);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_corpus(ss.str());
}

std::vector<Term> random_corpus() {
    rnd::TermGen gen(2024);
    std::vector<Term> out;
    for (int i = 0; i < 500; ++i) out.push_back(gen.term(40));
    return out;
}

const Strategy kBoth[] = {Strategy::CbV, Strategy::CbN};

// -- 1 ---------------------------------------------------------------------

std::string golden() {
    Term id = enc::identity();
    require(approximate(app(id, id), Strategy::CbV, 1).lower == SubDist::point(id), "(\\x.x)(\\x.x) cbv");
    require(approximate(app(id, id), Strategy::CbV, 1).residual.is_zero(), "(\\x.x)(\\x.x) residual");
    for (std::uint64_t f : {1, 2, 10, 100}) {
        for (auto s : kBoth) {
            require(approximate(enc::omega(), s, f).lower.empty(), "omega lower");
            auto db = divergence_bracket(enc::omega(), s, f);
            require(db.lower == Dyadic::one() && db.upper == Dyadic::one(), "omega divergence bracket");
        }
    }
    Term half = choice(enc::omega(), id);
    SubDist half_id;
    half_id.add(id, d(1, 1));
    require(approximate(half, Strategy::CbV, 100).lower.empty(), "omega (+) id cbv small");
    require(eval_big_cbv(half, 100).empty(), "omega (+) id cbv big");
    require(approximate(half, Strategy::CbN, 100).lower == half_id, "omega (+) id cbn small");
    require(eval_big_cbn(half, 100) == half_id, "omega (+) id cbn big");
    SubDist coin;
    coin.add(enc::tt(), d(1, 1));
    coin.add(enc::ff(), d(1, 1));
    Bracket xv = approximate(enc::xor_program(), Strategy::CbV, 100);
    Bracket xn = approximate(enc::xor_program(), Strategy::CbN, 100);
    require(xv.lower == SubDist::point(enc::ff()) && xv.residual.is_zero(), "xor cbv");
    require(xn.lower == coin && xn.residual.is_zero(), "xor cbn");
    require(eval_big_cbv(enc::xor_program(), 100) == SubDist::point(enc::ff()), "xor cbv big");
    require(eval_big_cbn(enc::xor_program(), 100) == coin, "xor cbn big");
    return "exact on identity, omega, omega (+) id and xor";
}

// -- 2 ---------------------------------------------------------------------

std::string conservation(const std::vector<Term>& corpus) {
    std::size_t certified = 0;
    for (const auto& t : corpus) {
        for (auto s : kBoth) {
            SmallStepEngine e(t, s, {}, true);
            e.run_to(50);
            require(e.lower().mass() + e.residual() == Dyadic::one(), "conservation: " + print(t));
            require(e.certified_divergent() + e.lower().mass() <= Dyadic::one(), "duality: " + print(t));
            if (!e.certified_divergent().is_zero()) ++certified;
        }
    }
    return std::to_string(corpus.size()) + " terms x 2 strategies at fuel 50, " + std::to_string(certified) +
           " runs with certified divergence";
}

// -- 3 ---------------------------------------------------------------------

std::string small_equals_big(const std::vector<Term>& terminating, const std::vector<Term>& corpus) {
    for (const auto& t : terminating) {
        for (auto s : kBoth) {
            SmallStepEngine e(t, s);
            require(e.run_until_settled(1000), "terminating corpus term did not settle: " + print(t));
            BigStepEvaluator big(s);
            SubDist b = big.eval(t, 2 * e.fuel() + 2);
            require(b == big.eval(t, 2 * e.fuel() + 40), "big-step not stable: " + print(t));
            require(b == e.lower(), "small != big: " + print(t));
        }
    }
    // Heights whose derivations blow past the size cap fall back on the highest
    // height that was computed, which big(2k) dominates by monotonicity.
    std::size_t comparisons = 0;
    std::size_t fallbacks = 0;
    std::size_t unchecked = 0;
    for (const auto& t : corpus) {
        for (auto s : kBoth) {
            SmallStepEngine e(t, s);
            BigStepEvaluator big(s, {std::size_t{1} << 21, std::uint64_t{1} << 20});
            std::uint64_t height = 0;
            SubDist best;
            auto raise = [&](std::uint64_t h) {
                try {
                    best = big.eval(t, h);
                    height = h;
                } catch (const ResourceLimitError&) {
                }
            };
            for (std::uint64_t k = 1; k <= 50; ++k) {
                e.round();
                if (height < 2 * k) raise(2 * k);
                if (height < k + 1) raise(k + 1);
                if (e.lower().empty()) {
                    ++comparisons;
                } else if (height < k + 1) {
                    ++unchecked;
                } else {
                    if (height < 2 * k) ++fallbacks;
                    require(leq(e.lower(), best), "big-step does not dominate small(k): " + print(t));
                    ++comparisons;
                }
                if (e.settled()) break;
            }
        }
    }
    require(unchecked == 0, std::to_string(unchecked) + " comparisons exceeded the big-step size cap");
    return "30 terminating terms exact both strategies, " + std::to_string(comparisons) + " dominance checks for k = 1..50 (" +
           std::to_string(fallbacks) + " below height 2k)";
}

// -- 4 ---------------------------------------------------------------------

std::string cps_simulation(const std::vector<Term>& terminating, const std::vector<Term>& diverging) {
    for (const auto& t : terminating) {
        auto v = cps::check_simulation_v_by_n(t, 500);
        auto n = cps::check_simulation_n_by_v(t, 500);
        require(v.verdict == cps::Verdict::Pass, "v2n not exact: " + print(t));
        require(n.verdict == cps::Verdict::Pass, "n2v not exact: " + print(t));
    }
    std::size_t brackets = 0;
    for (const auto& t : diverging) {
        for (std::uint64_t f : {1, 2, 5, 10, 25, 50, 100, 200, 500}) {
            require(cps::check_simulation_v_by_n(t, f).verdict != cps::Verdict::Fail, "v2n brackets disjoint: " + print(t));
            require(cps::check_simulation_n_by_v(t, f).verdict != cps::Verdict::Fail, "n2v brackets disjoint: " + print(t));
            brackets += 2;
        }
    }
    return "30 exact in both directions at fuel 500, " + std::to_string(brackets) + " overlapping bracket pairs";
}

// -- 5 ---------------------------------------------------------------------

/// Number of single-successor steps from `from` to `to`, or -1.
long administrative_steps(Term from, const Term& to, Strategy s, std::uint64_t bound) {
    for (std::uint64_t i = 0; i <= bound; ++i) {
        if (from == to) return static_cast<long>(i);
        auto r = step(from, s);
        if (!r || r->size() != 1) return -1;
        from = (*r)[0];
    }
    return -1;
}

std::string administrative() {
    rnd::TermGen terms(505);
    rnd::TermGen conts(506);
    long worst = 0;
    for (int i = 0; i < 100; ++i) {
        Term m = terms.term(40);
        Term k = conts.value(10);
        std::uint64_t bound = 10 * m.size();
        long v = administrative_steps(app(cps::cps_v_to_n(m), k), cps::colon_v(m, k), Strategy::CbN, bound);
        long n = administrative_steps(app(cps::cps_n_to_v(m), k), cps::colon_n(m, k), Strategy::CbV, bound);
        require(v >= 0, "v2n does not reach M:K within 10|M|: " + print(m));
        require(n >= 0, "n2v does not reach M:K within 10|M|: " + print(m));
        worst = std::max({worst, v, n});
    }
    return "100 pairs in both directions, longest administrative run " + std::to_string(worst) + " steps";
}

// -- 6 ---------------------------------------------------------------------

std::pair<Term, enc::NatDist> random_fdt(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> coin(0, 2);
    std::uniform_int_distribution<std::uint64_t> leaf(0, 7);
    if (depth == 0 || coin(rng) == 0) {
        std::uint64_t n = leaf(rng);
        return {enc::fdt_leaf(n), {{n, Dyadic::one()}}};
    }
    auto [l, dl] = random_fdt(rng, depth - 1);
    auto [r, dr] = random_fdt(rng, depth - 1);
    enc::NatDist out;
    for (const auto& [n, p] : dl) out[n] += p.half();
    for (const auto& [n, p] : dr) out[n] += p.half();
    return {enc::fdt_node(l, r), out};
}

std::string encodings() {
    rnd::TermGen vals(606);
    for (int i = 0; i < 50; ++i) {
        Term v = vals.value(20);
        Term t = app(enc::fix(), v);
        for (int k = 0; k < 2; ++k) {
            auto r = step_cbv(t);
            require(r && r->size() == 1, "fix unfolding is not deterministic");
            t = (*r)[0];
        }
        require(t == app(v, lam("z", app(enc::fix(), v, var("z")))), "fix unfolding: " + print(v));
    }
    std::mt19937_64 rng(607);
    for (int i = 0; i < 100; ++i) {
        auto [t, dist] = random_fdt(rng, 6);
        SmallStepEngine e(app(enc::mfdt(), t), Strategy::CbV);
        require(e.run_until_settled(5000), "MFDT did not settle");
        SubDist expected;
        for (const auto& [n, p] : dist) expected.add(enc::nat(n), p);
        require(e.lower() == expected && enc::pd(t) == dist, "MFDT result differs from pd: " + print(t));
    }
    SmallStepEngine geo(enc::geo(), Strategy::CbV);
    while (geo.lower().at(enc::nat(7)).is_zero()) {
        geo.round();
        require(geo.fuel() < 10000, "GEO never produced 7");
    }
    for (std::uint64_t n = 0; n < 8; ++n) require(geo.lower().at(enc::nat(n)) == Dyadic::pow2(n + 1), "GEO probability");
    require(geo.lower().size() == 8, "GEO support");
    require(geo.residual() == Dyadic::pow2(8), "GEO residual");
    return "fix on 50 values, MFDT on 100 trees, GEO exact through 7 at fuel " + std::to_string(geo.fuel());
}

// -- 7 ---------------------------------------------------------------------

std::string expressiveness() {
    expr::Completion c = expr::completeness_approx(expr::geometric_oracle(), 5);
    SmallStepEngine e(c.term, Strategy::CbV, {}, true);
    require(e.run_until_settled(100000), "completion term did not settle");
    require(e.lower().mass() >= d(31, 5), "completion mass below 31/32: " + e.lower().mass().str());
    for (const auto& [v, m] : e.lower()) require(enc::decode_nat(v).has_value(), "completion produced a non-numeral");
    for (std::uint64_t a = 0; a < 64; ++a) {
        require(e.lower().at(enc::nat(a)) <= Dyadic::pow2(a + 1), "completion exceeds the oracle at " + std::to_string(a));
    }
    std::mt19937_64 rng(707);
    std::uniform_int_distribution<std::uint64_t> point(0, 5);
    int checked = 0;
    for (int i = 0; i < 20; ++i) {
        enc::NatDist dist;
        for (int k = 0; k < 8; ++k) dist[point(rng)] += d(1, 3);
        expr::Completion ci = expr::completeness_approx(expr::finite_oracle(dist), 4);
        for (std::uint64_t a = 0; a <= 6; ++a) {
            auto it = dist.find(a);
            Dyadic p = it == dist.end() ? Dyadic::zero() : it->second;
            auto digits = expr::soundness_approx(ci.term, a, 3);
            require(digits.has_value(), "soundness ran out of fuel");
            require(*digits == binary_digits(p, 3), "round trip at " + std::to_string(a) + ": " + *digits);
            ++checked;
        }
    }
    return "rounds = 5 mass " + e.lower().mass().str() + ", " + std::to_string(checked) + " three-digit round trips";
}

// -- 8 ---------------------------------------------------------------------

std::string sampler() {
    const std::uint64_t samples = 100000;
    Estimate geo = estimate(enc::geo(), Strategy::CbV, samples, 100000, 20240601);
    Bracket exact = approximate(enc::geo(), Strategy::CbV, 600);
    require(exact.residual < Dyadic::pow2(30), "exact GEO bracket too wide");
    double worst = 0;
    for (const auto& [v, c] : geo.counts) {
        auto n = enc::decode_nat(v);
        require(n.has_value(), "GEO sampled a non-numeral");
        double p = exact.lower.at(v).to_double();
        require(p > 0, "sampled numeral with exact probability 0");
        double z = std::abs(geo.frequency(v) - p) / sampling_sigma(p, samples);
        worst = std::max(worst, z);
        require(z <= 4.0, "numeral " + std::to_string(*n) + " off by " + std::to_string(z) + " sigma");
    }
    for (std::uint64_t n = 0; n < 12; ++n) {
        double p = Dyadic::pow2(n + 1).to_double();
        double z = std::abs(geo.frequency(enc::nat(n)) - p) / sampling_sigma(p, samples);
        require(z <= 4.0, "numeral " + std::to_string(n) + " under-sampled");
    }
    require(geo.timeouts == 0, "GEO runs timed out");
    Estimate half = estimate(choice(enc::omega(), enc::identity()), Strategy::CbN, samples, 1000, 20240602);
    double z = std::abs(half.timeout_rate() - 0.5) / sampling_sigma(0.5, samples);
    require(z <= 4.0, "timeout rate off by " + std::to_string(z) + " sigma");
    char buf[160];
    std::snprintf(buf, sizeof buf, "GEO worst deviation %.2f sigma over %zu numerals, timeout rate %.4f (%.2f sigma)", worst,
                  geo.counts.size(), half.timeout_rate(), z);
    return buf;
}

}  // namespace

int main() {
    std::vector<Term> terminating = load("terminating.l");
    std::vector<Term> diverging = load("diverging.l");
    std::vector<Term> corpus = random_corpus();

    struct Criterion {
        const char* name;
        double limit_seconds;
        std::function<std::string()> run;
    };
    std::vector<Criterion> criteria = {
        {"golden corpus exactness", 5, golden},
        {"conservation and duality", 60, [&] { return conservation(corpus); }},
        {"small-step equals big-step", 0, [&] { return small_equals_big(terminating, corpus); }},
        {"CPS simulation", 120, [&] { return cps_simulation(terminating, diverging); }},
        {"administrative reduction", 0, administrative},
        {"encodings", 0, encodings},
        {"expressiveness pipeline", 0, expressiveness},
        {"sampler consistency", 30, sampler},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        auto start = std::chrono::steady_clock::now();
        std::string verdict;
        bool ok = true;
        try {
            verdict = c.run();
        } catch (const Failure& f) {
            ok = false;
            verdict = f.what;
        } catch (const std::exception& e) {
            ok = false;
            verdict = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (ok && c.limit_seconds > 0 && secs > c.limit_seconds) {
            ok = false;
            verdict += " (over the " + std::to_string(static_cast<int>(c.limit_seconds)) + " s limit)";
        }
        failures += ok ? 0 : 1;
        std::printf("%s  criterion %zu  %-28s %7.2fs  %s\n", ok ? "PASS" : "FAIL", i + 1, c.name, secs, verdict.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
