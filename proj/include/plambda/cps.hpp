#pragma once

// Continuation-passing translations between the two strategies.
//
//   v2n:  call-by-value source, run under call-by-name
//     [x]     = λe.e x
//     [λx.M]  = λe.e (λx.[M])
//     [M N]   = λe.[M] (λa.[N] (λb.a b e))
//     [M ⊕ N] = λe.[M] (λa.[N] (λb.((λg.g a) ⊕ (λg.g b)) e))
//     Ψ(x) = x,  Ψ(λx.M) = λx.[M]
//
//   n2v:  call-by-name source, run under call-by-value
//     [x]     = x
//     [λx.M]  = λe.e (λx.[M])
//     [M N]   = λe.[M] (λa.a [N] e)
//     [M ⊕ N] = λe.((λa.[M] a) ⊕ (λa.[N] a)) e
//     Φ(x) = x (λy.y),  Φ(λx.M) = λx.[M]
//
// Continuation binders carry hints from the reserved `k#` namespace. Source
// binders are opened with names outside the surface syntax, so no
// translation can capture a user variable.

#include <cstdint>
#include <string>

#include "plambda/smallstep.hpp"
#include "plambda/subdist.hpp"
#include "plambda/term.hpp"

namespace plambda::cps {

namespace detail {

class Builder {
public:
    std::string fresh(const char* tag) { return std::string("%") + tag + std::to_string(counter_++); }

    /// Abstraction binding the free name `unique`, printed with `hint`.
    static Term bind(const std::string& unique, const std::string& hint, const Term& body) {
        return Term::abs(hint, abstract(body, unique));
    }

    /// Opens an abstraction: returns (fresh name, body with the bound variable named).
    std::pair<std::string, Term> open(const Term& abs) {
        std::string name = fresh("v");
        return {name, instantiate(abs.body(), Term::free(name))};
    }

    Term v2n(const Term& t) {
        switch (t.kind()) {
        case Kind::Bound:
            throw InvariantViolation("v2n: loose bound variable");
        case Kind::Free: {
            auto e = fresh("e");
            return bind(e, "k#e", Term::app(var(e), t));
        }
        case Kind::Abs: {
            auto e = fresh("e");
            return bind(e, "k#e", Term::app(var(e), psi(t)));
        }
        case Kind::App: {
            auto e = fresh("e");
            auto a = fresh("a");
            auto b = fresh("b");
            Term inner = bind(b, "k#b", app(var(a), var(b), var(e)));
            Term cont = bind(a, "k#a", Term::app(v2n(t.arg()), inner));
            return bind(e, "k#e", Term::app(v2n(t.fun()), cont));
        }
        case Kind::Choice: {
            auto e = fresh("e");
            auto a = fresh("a");
            auto b = fresh("b");
            Term pick = Term::app(choice(select(var(a)), select(var(b))), var(e));
            Term inner = bind(b, "k#b", pick);
            Term cont = bind(a, "k#a", Term::app(v2n(t.right()), inner));
            return bind(e, "k#e", Term::app(v2n(t.left()), cont));
        }
        }
        return t;
    }

    /// λg.g v
    Term select(const Term& v) {
        auto g = fresh("g");
        return bind(g, "k#g", Term::app(var(g), v));
    }

    Term psi(const Term& v) {
        if (v.kind() == Kind::Free) return v;
        if (v.kind() != Kind::Abs) throw InvariantViolation("psi expects a value");
        auto [x, body] = open(v);
        return bind(x, v.name(), v2n(body));
    }

    Term n2v(const Term& t) {
        switch (t.kind()) {
        case Kind::Bound:
            throw InvariantViolation("n2v: loose bound variable");
        case Kind::Free:
            return t;
        case Kind::Abs: {
            auto e = fresh("e");
            return bind(e, "k#e", Term::app(var(e), phi(t)));
        }
        case Kind::App: {
            auto e = fresh("e");
            auto a = fresh("a");
            Term cont = bind(a, "k#a", app(var(a), n2v(t.arg()), var(e)));
            return bind(e, "k#e", Term::app(n2v(t.fun()), cont));
        }
        case Kind::Choice: {
            auto e = fresh("e");
            return bind(e, "k#e", Term::app(choice(forward(n2v(t.left())), forward(n2v(t.right()))), var(e)));
        }
        }
        return t;
    }

    /// λa.M a
    Term forward(const Term& m) {
        auto a = fresh("a");
        return bind(a, "k#a", Term::app(m, var(a)));
    }

    Term phi(const Term& v) {
        if (v.kind() == Kind::Free) return Term::app(v, lam("y", var("y")));
        if (v.kind() != Kind::Abs) throw InvariantViolation("phi expects a value");
        auto [x, body] = open(v);
        return bind(x, v.name(), n2v(body));
    }

private:
    std::uint64_t counter_ = 0;
};

inline void require_closed_value(const Term& k) {
    if (!k.is_closed() || !k.is_value()) throw InvariantViolation("continuation must be a closed value");
}

}  // namespace detail

/// Call-by-value to call-by-name translation.
inline Term cps_v_to_n(const Term& t) { return detail::Builder().v2n(t); }

/// Call-by-name to call-by-value translation.
inline Term cps_n_to_v(const Term& t) { return detail::Builder().n2v(t); }

inline Term psi(const Term& v) { return detail::Builder().psi(v); }

/// Φ. On a variable this yields the application x (λy.y), which is not a
/// value; only closed abstractions occur in distributions.
inline Term phi(const Term& v) { return detail::Builder().phi(v); }

inline SubDist psi_dist(const SubDist& d) {
    SubDist out;
    for (const auto& [v, m] : d) out.add(psi(v), m);
    return out;
}

inline SubDist phi_dist(const SubDist& d) {
    SubDist out;
    for (const auto& [v, m] : d) out.add(phi(v), m);
    return out;
}

/// Administrative normal form M : K for the v2n translation.
inline Term colon_v(const Term& t, const Term& k) {
    detail::require_closed_value(k);
    detail::Builder b;
    Term cur = t;
    Term cont = k;
    // Each clause either terminates or recurses on the left-most non-value.
    for (;;) {
        switch (cur.kind()) {
        case Kind::Bound:
        case Kind::Free:
        case Kind::Abs:
            return Term::app(cont, b.psi(cur));
        case Kind::App: {
            const Term& l = cur.fun();
            const Term& p = cur.arg();
            if (!l.is_value()) {
                auto a = b.fresh("a");
                auto bb = b.fresh("b");
                Term inner = detail::Builder::bind(bb, "k#b", app(var(a), var(bb), cont));
                cont = detail::Builder::bind(a, "k#a", Term::app(b.v2n(p), inner));
                cur = l;
                continue;
            }
            if (!p.is_value()) {
                auto bb = b.fresh("b");
                cont = detail::Builder::bind(bb, "k#b", app(b.psi(l), var(bb), cont));
                cur = p;
                continue;
            }
            return app(b.psi(l), b.psi(p), cont);
        }
        case Kind::Choice: {
            const Term& l = cur.left();
            const Term& p = cur.right();
            if (!l.is_value()) {
                auto a = b.fresh("a");
                auto bb = b.fresh("b");
                Term pick = Term::app(choice(b.select(var(a)), b.select(var(bb))), cont);
                Term inner = detail::Builder::bind(bb, "k#b", pick);
                cont = detail::Builder::bind(a, "k#a", Term::app(b.v2n(p), inner));
                cur = l;
                continue;
            }
            if (!p.is_value()) {
                auto bb = b.fresh("b");
                Term pick = Term::app(choice(b.select(b.psi(l)), b.select(var(bb))), cont);
                cont = detail::Builder::bind(bb, "k#b", pick);
                cur = p;
                continue;
            }
            return Term::app(choice(b.select(b.psi(l)), b.select(b.psi(p))), cont);
        }
        }
    }
}

/// Administrative normal form M : K for the n2v translation.
///
/// The clause for V P applies to every argument P: in call-by-name the
/// argument is never evaluated, so [V P] K reaches Φ(V) [P] K whether or not
/// P is a value.
inline Term colon_n(const Term& t, const Term& k) {
    detail::require_closed_value(k);
    detail::Builder b;
    Term cur = t;
    Term cont = k;
    for (;;) {
        switch (cur.kind()) {
        case Kind::Bound:
        case Kind::Free:
        case Kind::Abs:
            return Term::app(cont, b.phi(cur));
        case Kind::App: {
            const Term& l = cur.fun();
            if (!l.is_value()) {
                auto a = b.fresh("a");
                cont = detail::Builder::bind(a, "k#a", app(var(a), b.n2v(cur.arg()), cont));
                cur = l;
                continue;
            }
            return app(b.phi(l), b.n2v(cur.arg()), cont);
        }
        case Kind::Choice:
            return Term::app(choice(b.forward(b.n2v(cur.left())), b.forward(b.n2v(cur.right()))), cont);
        }
    }
}

// ---------------------------------------------------------------------------
// Distribution-level simulation checks

enum class Verdict { Pass, BracketConsistent, Fail };

inline const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::BracketConsistent: return "BRACKET-CONSISTENT";
    case Verdict::Fail: return "FAIL";
    }
    return "?";
}

struct SimulationReport {
    Verdict verdict = Verdict::Fail;
    Bracket source;  ///< source-side bracket with values already mapped through Ψ or Φ
    Bracket target;  ///< bracket of the translated program applied to λx.x
};

/// Compares two brackets: equal when both have settled, overlapping
/// pointwise otherwise.
inline Verdict compare_brackets(const Bracket& a, const Bracket& b) {
    if (a.residual.is_zero() && b.residual.is_zero()) return a.lower == b.lower ? Verdict::Pass : Verdict::Fail;
    auto overlaps = [&](const Term& v) {
        Dyadic alo = a.lower.at(v);
        Dyadic blo = b.lower.at(v);
        return alo <= blo + b.residual && blo <= alo + a.residual;
    };
    for (const auto& [v, m] : a.lower) {
        if (!overlaps(v)) return Verdict::Fail;
    }
    for (const auto& [v, m] : b.lower) {
        if (!overlaps(v)) return Verdict::Fail;
    }
    return Verdict::BracketConsistent;
}

/// Ψ(⟦M⟧v) against ⟦[M]v2n (λx.x)⟧n, each side run for `fuel` rounds.
inline SimulationReport check_simulation_v_by_n(const Term& t, std::uint64_t fuel, EngineLimits limits = {}) {
    SimulationReport r;
    r.source = approximate(t, Strategy::CbV, fuel, limits);
    r.source.lower = psi_dist(r.source.lower);
    r.target = approximate(Term::app(cps_v_to_n(t), lam("x", var("x"))), Strategy::CbN, fuel, limits);
    r.verdict = compare_brackets(r.source, r.target);
    return r;
}

/// Φ(⟦M⟧n) against ⟦[M]n2v (λx.x)⟧v, each side run for `fuel` rounds.
inline SimulationReport check_simulation_n_by_v(const Term& t, std::uint64_t fuel, EngineLimits limits = {}) {
    SimulationReport r;
    r.source = approximate(t, Strategy::CbN, fuel, limits);
    r.source.lower = phi_dist(r.source.lower);
    r.target = approximate(Term::app(cps_n_to_v(t), lam("x", var("x"))), Strategy::CbV, fuel, limits);
    r.verdict = compare_brackets(r.source, r.target);
    return r;
}

}  // namespace plambda::cps
