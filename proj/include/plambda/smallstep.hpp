#pragma once

// Fuel-bounded small-step evaluation.
//
// Every round expands all pending terms by one leftmost step, splitting their
// mass uniformly over the successors and merging alpha-equivalent states.
// Successors that are values move to the lower distribution. After k rounds
// the lower distribution is the largest approximant derivable with k nested
// step rules, and the mass still pending is the residual: it bounds from
// above both the probability of divergence and the mass any single value can
// still gain.

#include <cstdint>
#include <deque>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "plambda/reduction.hpp"
#include "plambda/subdist.hpp"

namespace plambda {

struct EngineLimits {
    std::size_t max_frontier = std::size_t{1} << 20;
    std::uint64_t max_term_size = std::uint64_t{1} << 22;
    /// States explored when trying to certify that a term can never reach a value.
    std::size_t certify_budget = 32;
};

/// Lower approximant plus residual mass at a given fuel; lower + residual = 1.
struct Bracket {
    SubDist lower;
    Dyadic residual;
    std::uint64_t fuel = 0;
    Strategy strategy = Strategy::CbV;
};

/// Coinductive upper bound for one value: lower(v) + residual.
inline Dyadic upper_bound(const Bracket& b, const Term& v) { return b.lower.at(v) + b.residual; }

class SmallStepEngine {
public:
    SmallStepEngine(const Term& t, Strategy s, EngineLimits limits = {}, bool certify_divergence = false)
        : strategy_(s), limits_(limits), certify_(certify_divergence) {
        detail::require_closed(t);
        if (t.is_value()) {
            lower_.add(t, Dyadic::one());
        } else {
            pending_.emplace(t, Dyadic::one());
            pending_mass_ = Dyadic::one();
            if (certify_) park_certified();
        }
    }

    Strategy strategy() const noexcept { return strategy_; }
    std::uint64_t fuel() const noexcept { return fuel_; }
    const SubDist& lower() const noexcept { return lower_; }
    /// Mass on non-values, including the part certified divergent.
    Dyadic residual() const { return pending_mass_ + parked_; }
    /// Mass certified to never reach a value.
    const Dyadic& certified_divergent() const noexcept { return parked_; }
    std::size_t frontier_size() const noexcept { return pending_.size(); }
    /// No live states left: further fuel cannot change the lower distribution.
    bool settled() const noexcept { return pending_.empty(); }

    Bracket bracket() const { return Bracket{lower_, residual(), fuel_, strategy_}; }

    void round() {
        std::unordered_map<Term, Dyadic, TermHash> next;
        next.reserve(pending_.size() * 2);
        Dyadic next_mass;
        for (const auto& [term, mass] : pending_) {
            auto succ = detail::step_unchecked(term, strategy_);
            if (!succ) throw StuckTermError("pending state is a value");
            Dyadic share = succ->size() == 2 ? mass.half() : mass;
            for (const auto& s : *succ) {
                if (s.is_value()) {
                    lower_.add(s, share);
                    continue;
                }
                if (s.size() > limits_.max_term_size) {
                    throw ResourceLimitError("term size limit exceeded (" + std::to_string(s.size()) + " nodes)");
                }
                next[s] += share;
                next_mass += share;
            }
            if (next.size() > limits_.max_frontier) {
                throw ResourceLimitError("frontier limit exceeded (" + std::to_string(next.size()) + " states)");
            }
        }
        pending_ = std::move(next);
        pending_mass_ = std::move(next_mass);
        ++fuel_;
        if (certify_) park_certified();
    }

    void run_to(std::uint64_t fuel) {
        while (fuel_ < fuel && !pending_.empty()) round();
        if (fuel_ < fuel) fuel_ = fuel;
    }

    /// Runs until settled or `max_fuel` is reached; returns settled().
    bool run_until_settled(std::uint64_t max_fuel) {
        while (fuel_ < max_fuel && !pending_.empty()) round();
        return settled();
    }

private:
    bool certify(const Term& root) {
        if (auto it = certified_.find(root); it != certified_.end()) return it->second;
        std::unordered_set<Term, TermHash> seen{root};
        std::deque<Term> work{root};
        bool ok = true;
        while (!work.empty()) {
            Term t = std::move(work.front());
            work.pop_front();
            if (auto it = certified_.find(t); it != certified_.end()) {
                if (it->second) continue;
                ok = false;
                break;
            }
            auto succ = detail::step_unchecked(t, strategy_);
            for (const auto& s : *succ) {
                if (s.is_value() || s.size() > limits_.max_term_size) {
                    ok = false;
                    break;
                }
                if (seen.insert(s).second) work.push_back(s);
            }
            if (!ok || seen.size() > limits_.certify_budget) {
                ok = false;
                break;
            }
        }
        if (ok) {
            for (const auto& t : seen) certified_[t] = true;
        } else {
            certified_[root] = false;
        }
        return ok;
    }

    void park_certified() {
        for (auto it = pending_.begin(); it != pending_.end();) {
            if (certify(it->first)) {
                parked_ += it->second;
                pending_mass_ -= it->second;
                it = pending_.erase(it);
            } else {
                ++it;
            }
        }
    }

    Strategy strategy_;
    EngineLimits limits_;
    bool certify_;
    std::uint64_t fuel_ = 0;
    std::unordered_map<Term, Dyadic, TermHash> pending_;
    Dyadic pending_mass_;
    Dyadic parked_;
    SubDist lower_;
    std::unordered_map<Term, bool, TermHash> certified_;
};

/// Bracket after `fuel` expansion rounds.
inline Bracket approximate(const Term& t, Strategy s, std::uint64_t fuel, EngineLimits limits = {}) {
    SmallStepEngine engine(t, s, limits);
    engine.run_to(fuel);
    return engine.bracket();
}

struct DivergenceBracket {
    Dyadic lower;  ///< mass certified never to reach a value
    Dyadic upper;  ///< 1 - mass(lower approximant)
};

/// Bounds on the probability of divergence at the given fuel.
///
/// Certification is conservative: a state counts as divergent only when its
/// whole reachable set is small, closed, and free of values (Ω, cycles).
/// Divergence through ever-growing terms is only reflected in `upper`.
inline DivergenceBracket divergence_bracket(const Term& t, Strategy s, std::uint64_t fuel, EngineLimits limits = {}) {
    SmallStepEngine engine(t, s, limits, true);
    engine.run_to(fuel);
    return DivergenceBracket{engine.certified_divergent(), engine.residual()};
}

}  // namespace plambda
