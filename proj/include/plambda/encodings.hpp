#pragma once

// Named lambda terms: booleans, xor, Scott numerals, pairs, binary strings,
// the standard (choose-first) sum, the fixed-point combinator H, finite
// distribution terms with their interpreter MFDT, and a geometric generator.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "plambda/print.hpp"
#include "plambda/subdist.hpp"
#include "plambda/term.hpp"

namespace plambda::enc {

inline Term identity() { return lam("x", var("x")); }
inline Term tt() { return lam({"x", "y"}, var("x")); }
inline Term ff() { return lam({"x", "y"}, var("y")); }

inline Term delta() { return lam("x", app(var("x"), var("x"))); }
inline Term omega() { return app(delta(), delta()); }

/// λx.λy.(x (λz.z FF TT) (λz.z TT FF)) y
inline Term xor_term() {
    Term neg = lam("z", app(var("z"), ff(), tt()));
    Term keep = lam("z", app(var("z"), tt(), ff()));
    return lam({"x", "y"}, app(app(var("x"), neg, keep), var("y")));
}

/// (λx. XOR x x) (TT ⊕ FF): chooses before copying under call-by-value.
inline Term xor_program() {
    return app(lam("x", app(xor_term(), var("x"), var("x"))), choice(tt(), ff()));
}

// -- Scott numerals ---------------------------------------------------------

inline Term nat(std::uint64_t n) {
    Term t = lam({"x", "y"}, var("x"));
    for (std::uint64_t i = 0; i < n; ++i) t = Term::abs("x", Term::abs("y", Term::app(Term::bound(0), t)));
    return t;
}

inline std::optional<std::uint64_t> decode_nat(const Term& v) {
    std::uint64_t n = 0;
    const Term* cur = &v;
    for (;;) {
        if (cur->kind() != Kind::Abs || cur->body().kind() != Kind::Abs) return std::nullopt;
        const Term& inner = cur->body().body();
        if (inner.kind() == Kind::Bound && inner.index() == 1) return n;
        if (inner.kind() != Kind::App || inner.fun().kind() != Kind::Bound || inner.fun().index() != 0 ||
            !inner.arg().is_closed()) {
            return std::nullopt;
        }
        ++n;
        cur = &inner.arg();
    }
}

/// λn.λx.λy.y n
inline Term succ() { return lam({"n", "x", "y"}, app(var("y"), var("n"))); }

// -- Pairs and binary strings ----------------------------------------------

inline Term pair(const Term& v, const Term& w) { return Term::abs("x", app(Term::bound(0), v, w)); }

/// λa.λb.λx.x a b
inline Term pair_builder() { return lam({"a", "b", "x"}, app(var("x"), var("a"), var("b"))); }

/// Binary strings: ε = λxyz.x, 0s = λxyz.y s, 1s = λxyz.z s.
inline Term bits(const std::string& s) {
    Term t = lam({"x", "y", "z"}, var("x"));
    for (auto it = s.rbegin(); it != s.rend(); ++it) {
        if (*it != '0' && *it != '1') throw InvariantViolation("binary string expected: " + s);
        std::uint32_t idx = *it == '0' ? 1 : 0;
        t = Term::abs("x", Term::abs("y", Term::abs("z", Term::app(Term::bound(idx), t))));
    }
    return t;
}

// -- Choice and recursion ---------------------------------------------------

/// (TT ⊕ FF)(λz.M)(λz.N)(λw.w): choose first, evaluate the chosen branch after.
inline Term standard_choice(const Term& m, const Term& n) {
    if (m.loose() != 0 || n.loose() != 0) throw InvariantViolation("standard_choice expects standalone terms");
    return app(choice(tt(), ff()), Term::abs("z", m), Term::abs("z", n), lam("w", var("w")));
}

/// W = λx.λy.y(λz.x x y z)
inline Term fix_half() {
    return lam({"x", "y"}, app(var("y"), lam("z", app(var("x"), var("x"), var("y"), var("z")))));
}

/// H = W W, with H V ↦v ↦v V(λz.H V z).
inline Term fix() { return app(fix_half(), fix_half()); }

/// Body of MFDT: λx.λy. y (λz.z) (λz.λw. (x z) ⊕ (x w))
inline Term mfdt_step() {
    Term node = lam({"z", "w"}, choice(app(var("x"), var("z")), app(var("x"), var("w"))));
    return lam({"x", "y"}, app(var("y"), lam("z", var("z")), node));
}

inline Term mfdt() { return app(fix(), mfdt_step()); }

/// Geometric generator: H (λf.λn. ((λs.n) ⊕ (λs.f (SUCC n))) (λs.s)) ⌜0⌝.
/// Both branches of the choice are abstractions so the call-by-value choice
/// fires at once; the recursive call only runs in the chosen branch.
inline Term geo() {
    Term body = app(choice(lam("s", var("n")), lam("s", app(var("f"), app(succ(), var("n"))))), lam("s", var("s")));
    return app(fix(), lam({"f", "n"}, body), nat(0));
}

// -- Finite distribution terms ----------------------------------------------

/// λx.λy.x ⌜n⌝
inline Term fdt_leaf(std::uint64_t n) {
    return Term::abs("x", Term::abs("y", Term::app(Term::bound(1), nat(n))));
}

/// λx.λy.y M N
inline Term fdt_node(const Term& m, const Term& n) {
    if (!m.is_closed() || !n.is_closed()) throw InvariantViolation("fdt_node expects closed subterms");
    return Term::abs("x", Term::abs("y", app(Term::bound(0), m, n)));
}

struct FdtShape {
    enum class Tag { Leaf, Node } tag;
    std::uint64_t leaf = 0;
    const Term* left = nullptr;
    const Term* right = nullptr;
};

inline std::optional<FdtShape> fdt_shape(const Term& t) {
    if (t.kind() != Kind::Abs || t.body().kind() != Kind::Abs) return std::nullopt;
    const Term& b = t.body().body();
    if (b.kind() != Kind::App) return std::nullopt;
    if (b.fun().kind() == Kind::Bound && b.fun().index() == 1) {
        if (auto n = decode_nat(b.arg())) return FdtShape{FdtShape::Tag::Leaf, *n};
        return std::nullopt;
    }
    const Term& f = b.fun();
    if (f.kind() == Kind::App && f.fun().kind() == Kind::Bound && f.fun().index() == 0 && f.arg().is_closed() &&
        b.arg().is_closed()) {
        return FdtShape{FdtShape::Tag::Node, 0, &f.arg(), &b.arg()};
    }
    return std::nullopt;
}

inline bool is_fdt(const Term& t) {
    auto s = fdt_shape(t);
    if (!s) return false;
    if (s->tag == FdtShape::Tag::Leaf) return true;
    return is_fdt(*s->left) && is_fdt(*s->right);
}

/// Distribution over the naturals, keyed by the number itself.
using NatDist = std::map<std::uint64_t, Dyadic>;

/// Underlying distribution of a finite distribution term.
inline NatDist pd(const Term& t) {
    auto s = fdt_shape(t);
    if (!s) throw NotRepresentableError("not a finite distribution term: " + print(t));
    if (s->tag == FdtShape::Tag::Leaf) return NatDist{{s->leaf, Dyadic::one()}};
    NatDist out;
    for (const Term* side : {s->left, s->right}) {
        for (const auto& [n, p] : pd(*side)) out[n] += p.half();
    }
    return out;
}

/// Builds a finite distribution term whose pd is exactly `d`.
///
/// Each mass is split into its binary digits; the resulting power-of-two atoms
/// are paired level by level from the smallest weight up. This succeeds iff
/// the masses sum to exactly one.
inline Term fdt_from_dist(const NatDist& d) {
    Dyadic total;
    std::uint64_t deepest = 0;
    for (const auto& [n, p] : d) {
        if (p.is_zero()) continue;
        total += p;
        deepest = std::max(deepest, p.exponent());
    }
    if (total != Dyadic::one()) {
        std::string msg = "masses sum to " + total.str() + ", not 1:";
        for (const auto& [n, p] : d) msg += " " + std::to_string(n) + "->" + p.str();
        throw NotRepresentableError(msg);
    }
    // level[k] holds subtrees of weight 2^-k
    std::vector<std::vector<Term>> level(deepest + 1);
    for (const auto& [n, p] : d) {
        for (std::uint64_t k = 0; k <= p.exponent(); ++k) {
            unsigned bit = static_cast<unsigned>(p.exponent() - k);
            if (boost::multiprecision::bit_test(p.numerator(), bit)) level[k].push_back(fdt_leaf(n));
        }
    }
    for (std::uint64_t k = deepest; k > 0; --k) {
        auto& cur = level[k];
        if (cur.size() % 2 != 0) throw NotRepresentableError("odd number of atoms at depth " + std::to_string(k));
        for (std::size_t i = 0; i < cur.size(); i += 2) level[k - 1].push_back(fdt_node(cur[i], cur[i + 1]));
    }
    if (level[0].size() != 1) throw NotRepresentableError("malformed atom tree");
    return level[0][0];
}

// -- Constant table used by the parser ------------------------------------

inline const std::map<std::string, Term>& constants() {
    static const std::map<std::string, Term> table = {
        {"ID", identity()},   {"TT", tt()},         {"FF", ff()},         {"XOR", xor_term()},
        {"DELTA", delta()},   {"OMEGA", omega()},   {"H", fix()},         {"MFDT", mfdt()},
        {"GEO", geo()},       {"SUCC", succ()},     {"PAIR", pair_builder()},
    };
    return table;
}

}  // namespace plambda::enc
