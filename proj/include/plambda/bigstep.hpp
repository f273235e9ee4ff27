#pragma once

// Inductive big-step evaluation stratified by derivation height.
//
// eval(t, 0) is the empty distribution; otherwise each rule evaluates its
// premises at height - 1. Results are monotone in the height and their
// supremum is the big-step semantics.

#include <cstdint>
#include <unordered_map>

#include "plambda/reduction.hpp"
#include "plambda/subdist.hpp"

namespace plambda {

struct BigStepLimits {
    std::size_t max_memo = std::size_t{1} << 21;
    std::uint64_t max_term_size = std::uint64_t{1} << 22;
};

class BigStepEvaluator {
public:
    explicit BigStepEvaluator(Strategy s, BigStepLimits limits = {}) : strategy_(s), limits_(limits) {}

    SubDist eval(const Term& t, std::uint64_t depth) {
        detail::require_closed(t);
        return run(t, depth);
    }

    std::size_t memo_size() const noexcept { return memo_.size(); }

private:
    struct Key {
        Term term;
        std::uint64_t depth;
        bool operator==(const Key& o) const { return depth == o.depth && term == o.term; }
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept {
            return static_cast<std::size_t>(detail::mix(k.term.hash(), k.depth));
        }
    };

    static const Term& abstraction(const Term& v) {
        if (v.kind() != Kind::Abs) throw StuckTermError("application of a non-abstraction value");
        return v;
    }

    SubDist run(const Term& t, std::uint64_t depth) {
        if (depth == 0) return {};
        if (t.size() > limits_.max_term_size) throw ResourceLimitError("big-step term size limit exceeded");
        if (t.is_value()) return SubDist::point(t);
        Key key{t, depth};
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;

        SubDist out;
        if (t.kind() == Kind::App) {
            SubDist fun = run(t.fun(), depth - 1);
            if (strategy_ == Strategy::CbV) {
                if (!fun.empty()) {
                    SubDist arg = run(t.arg(), depth - 1);
                    for (const auto& [f, p] : fun) {
                        const Term& body = abstraction(f).body();
                        for (const auto& [v, q] : arg) {
                            Dyadic w = p * q;
                            for (const auto& [r, m] : run(instantiate(body, v), depth - 1)) out.add(r, w * m);
                        }
                    }
                }
            } else {
                for (const auto& [f, p] : fun) {
                    const Term& body = abstraction(f).body();
                    for (const auto& [r, m] : run(instantiate(body, t.arg()), depth - 1)) out.add(r, p * m);
                }
            }
        } else {
            SubDist l = run(t.left(), depth - 1);
            SubDist r = run(t.right(), depth - 1);
            if (strategy_ == Strategy::CbV) {
                // both branches must converge before the choice is made
                Dyadic ml = l.mass();
                Dyadic mr = r.mass();
                for (const auto& [v, m] : l) out.add(v, (m * mr).half());
                for (const auto& [v, m] : r) out.add(v, (m * ml).half());
            } else {
                for (const auto& [v, m] : l) out.add(v, m.half());
                for (const auto& [v, m] : r) out.add(v, m.half());
            }
        }
        if (memo_.size() >= limits_.max_memo) throw ResourceLimitError("big-step memo limit exceeded");
        memo_.emplace(std::move(key), out);
        return out;
    }

    Strategy strategy_;
    BigStepLimits limits_;
    std::unordered_map<Key, SubDist, KeyHash> memo_;
};

inline SubDist eval_big_cbv(const Term& t, std::uint64_t depth) { return BigStepEvaluator(Strategy::CbV).eval(t, depth); }

inline SubDist eval_big_cbn(const Term& t, std::uint64_t depth) { return BigStepEvaluator(Strategy::CbN).eval(t, depth); }

inline SubDist eval_big(const Term& t, Strategy s, std::uint64_t depth) { return BigStepEvaluator(s).eval(t, depth); }

}  // namespace plambda
