#pragma once

#include <optional>
#include <string_view>

#include <boost/container/static_vector.hpp>

#include "plambda/print.hpp"
#include "plambda/term.hpp"

namespace plambda {

enum class Strategy { CbV, CbN };

inline std::string_view to_string(Strategy s) { return s == Strategy::CbV ? "cbv" : "cbn"; }

/// Successors of one leftmost step; each is reached with probability 1/size().
using StepResult = boost::container::static_vector<Term, 2>;

namespace detail {

inline Term contract_beta(const Term& fun, const Term& arg) {
    if (fun.kind() != Kind::Abs) {
        throw StuckTermError("application of a non-abstraction: " + print(Term::app(fun, arg)));
    }
    return instantiate(fun.body(), arg);
}

inline std::optional<StepResult> step_cbv_unchecked(const Term& t) {
    switch (t.kind()) {
    case Kind::Bound:
    case Kind::Free:
    case Kind::Abs:
        return std::nullopt;
    case Kind::App: {
        const Term& m = t.fun();
        const Term& n = t.arg();
        if (!m.is_value()) {
            auto inner = step_cbv_unchecked(m);
            StepResult out;
            for (const auto& l : *inner) out.push_back(Term::app(l, n));
            return out;
        }
        if (!n.is_value()) {
            auto inner = step_cbv_unchecked(n);
            StepResult out;
            for (const auto& l : *inner) out.push_back(Term::app(m, l));
            return out;
        }
        return StepResult{contract_beta(m, n)};
    }
    case Kind::Choice: {
        const Term& m = t.left();
        const Term& n = t.right();
        if (!m.is_value()) {
            auto inner = step_cbv_unchecked(m);
            StepResult out;
            for (const auto& l : *inner) out.push_back(Term::choice(l, n));
            return out;
        }
        if (!n.is_value()) {
            auto inner = step_cbv_unchecked(n);
            StepResult out;
            for (const auto& l : *inner) out.push_back(Term::choice(m, l));
            return out;
        }
        return StepResult{m, n};
    }
    }
    return std::nullopt;
}

inline std::optional<StepResult> step_cbn_unchecked(const Term& t) {
    switch (t.kind()) {
    case Kind::Bound:
    case Kind::Free:
    case Kind::Abs:
        return std::nullopt;
    case Kind::App: {
        const Term& m = t.fun();
        if (m.is_value()) return StepResult{contract_beta(m, t.arg())};
        auto inner = step_cbn_unchecked(m);
        StepResult out;
        for (const auto& l : *inner) out.push_back(Term::app(l, t.arg()));
        return out;
    }
    case Kind::Choice:
        return StepResult{t.left(), t.right()};
    }
    return std::nullopt;
}

inline void require_closed(const Term& t) {
    if (!t.is_closed()) throw OpenTermError("term is not closed: " + print(t));
}

}  // namespace detail

/// Leftmost call-by-value step: function position, then argument, then
/// contraction; both branches of a choice are evaluated before choosing.
inline std::optional<StepResult> step_cbv(const Term& t) {
    detail::require_closed(t);
    return detail::step_cbv_unchecked(t);
}

/// Leftmost call-by-name step: arguments are passed unevaluated and a choice
/// fires as soon as it reaches evaluation position.
inline std::optional<StepResult> step_cbn(const Term& t) {
    detail::require_closed(t);
    return detail::step_cbn_unchecked(t);
}

inline std::optional<StepResult> step(const Term& t, Strategy s) {
    return s == Strategy::CbV ? step_cbv(t) : step_cbn(t);
}

namespace detail {
inline std::optional<StepResult> step_unchecked(const Term& t, Strategy s) {
    return s == Strategy::CbV ? step_cbv_unchecked(t) : step_cbn_unchecked(t);
}
}  // namespace detail

}  // namespace plambda
