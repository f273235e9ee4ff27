#pragma once

// Single randomized executions and Monte Carlo estimates.
//
// A step with two successors consumes one fair coin; heads selects the left
// successor. Sample i of an estimate draws its coins from mt19937_64 seeded
// with splitmix64(seed + i), so results do not depend on evaluation order.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>

#include "plambda/reduction.hpp"

namespace plambda {

struct SampleOutcome {
    std::optional<Term> result;  ///< empty on timeout
    std::uint64_t steps_used = 0;
    bool timed_out() const noexcept { return !result; }
};

/// `coin()` returns true for heads.
template <class Coin>
SampleOutcome sample_run(const Term& t, Strategy s, std::uint64_t max_steps, Coin&& coin) {
    detail::require_closed(t);
    SampleOutcome out;
    Term cur = t;
    while (!cur.is_value()) {
        if (out.steps_used == max_steps) return out;
        auto succ = detail::step_unchecked(cur, s);
        cur = succ->size() == 2 ? (*succ)[coin() ? 0 : 1] : (*succ)[0];
        ++out.steps_used;
    }
    out.result = cur;
    return out;
}

inline SampleOutcome sample_run(const Term& t, Strategy s, std::uint64_t max_steps, std::mt19937_64& rng) {
    return sample_run(t, s, max_steps, [&rng] { return (rng() >> 63) != 0; });
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct Estimate {
    static constexpr const char* rng_name = "mt19937_64/splitmix64";

    std::map<Term, std::uint64_t, TermLess> counts;
    std::uint64_t timeouts = 0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;

    double frequency(const Term& v) const {
        auto it = counts.find(v);
        return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(samples);
    }
    double timeout_rate() const { return static_cast<double>(timeouts) / static_cast<double>(samples); }
};

inline Estimate estimate(const Term& t, Strategy s, std::uint64_t samples, std::uint64_t max_steps, std::uint64_t seed) {
    if (samples == 0) throw InvariantViolation("estimate needs at least one sample");
    detail::require_closed(t);
    Estimate e;
    e.samples = samples;
    e.seed = seed;
    for (std::uint64_t i = 0; i < samples; ++i) {
        std::mt19937_64 rng(splitmix64(seed + i));
        SampleOutcome o = sample_run(t, s, max_steps, rng);
        if (o.result) {
            ++e.counts[*o.result];
        } else {
            ++e.timeouts;
        }
    }
    return e;
}

/// Standard deviation of a frequency estimate for probability p.
inline double sampling_sigma(double p, std::uint64_t samples) {
    return std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
}

}  // namespace plambda
