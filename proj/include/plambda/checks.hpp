#pragma once

// Per-term property checks run over corpora.

#include <cstdint>
#include <string>

#include "plambda/bigstep.hpp"
#include "plambda/cps.hpp"
#include "plambda/smallstep.hpp"

namespace plambda {

struct CheckResult {
    cps::Verdict verdict = cps::Verdict::Fail;
    std::string detail;
};

/// Small-step against big-step. When the small-step run settles within
/// `fuel` rounds at fuel k, the big-step result at height k + 1 must equal
/// it and stay put; otherwise big-step at height k + 1 must dominate.
inline CheckResult check_bigsmall(const Term& t, Strategy s, std::uint64_t fuel, EngineLimits limits = {}) {
    SmallStepEngine engine(t, s, limits);
    bool settled = engine.run_until_settled(fuel);
    BigStepEvaluator big(s);
    std::uint64_t k = engine.fuel() + 1;
    SubDist b = big.eval(t, k);
    if (settled) {
        if (b != engine.lower()) return {cps::Verdict::Fail, "big-step differs at height " + std::to_string(k)};
        if (big.eval(t, k + 8) != b) return {cps::Verdict::Fail, "big-step keeps growing past the settled fuel"};
        return {cps::Verdict::Pass, "settled at fuel " + std::to_string(engine.fuel())};
    }
    if (!leq(engine.lower(), b)) return {cps::Verdict::Fail, "big-step does not dominate at height " + std::to_string(k)};
    return {cps::Verdict::BracketConsistent, "unsettled, residual " + engine.residual().str()};
}

/// Conservation and the divergence duality at every round up to `fuel`.
inline CheckResult check_duality(const Term& t, Strategy s, std::uint64_t fuel, EngineLimits limits = {}) {
    SmallStepEngine engine(t, s, limits, true);
    for (;;) {
        if (engine.lower().mass() + engine.residual() != Dyadic::one()) {
            return {cps::Verdict::Fail, "mass not conserved at fuel " + std::to_string(engine.fuel())};
        }
        if (engine.certified_divergent() + engine.lower().mass() > Dyadic::one()) {
            return {cps::Verdict::Fail, "divergence and convergence exceed 1 at fuel " + std::to_string(engine.fuel())};
        }
        if (engine.fuel() >= fuel || engine.settled()) break;
        engine.round();
    }
    std::string detail = "divergence in [" + engine.certified_divergent().str() + ", " + engine.residual().str() + "]";
    return {engine.settled() ? cps::Verdict::Pass : cps::Verdict::BracketConsistent, detail};
}

/// Both simulation directions at the given fuel; the weaker verdict wins.
inline CheckResult check_simulation(const Term& t, std::uint64_t fuel, EngineLimits limits = {}) {
    auto v = cps::check_simulation_v_by_n(t, fuel, limits);
    auto n = cps::check_simulation_n_by_v(t, fuel, limits);
    CheckResult r;
    r.verdict = std::max(v.verdict, n.verdict);
    r.detail = std::string("v2n ") + cps::to_string(v.verdict) + ", n2v " + cps::to_string(n.verdict);
    return r;
}

}  // namespace plambda
