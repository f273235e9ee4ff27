#pragma once

// Terms of the probabilistic lambda calculus: variables, abstractions,
// applications and fair binary choice.
//
// Representation is locally nameless. Bound variables are de Bruijn indices,
// free variables keep their names, and abstractions remember the binder name
// only as a printing hint. Two alpha-equivalent terms are therefore
// structurally identical, so equality and hashing need no renaming.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include "plambda/error.hpp"

namespace plambda {

enum class Kind : std::uint8_t { Bound, Free, Abs, App, Choice };

namespace detail {

inline std::uint64_t fnv1a(std::string_view s) noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) noexcept {
    // splitmix64 finaliser over a combined word
    std::uint64_t z = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t name_bit(std::string_view name) noexcept {
    return std::uint64_t{1} << (fnv1a(name) % 64);
}

struct Node;

}  // namespace detail

/// Immutable, shareable term handle. Copying is cheap (reference counted).
class Term {
public:
    Term() = default;

    static Term free(std::string name);
    static Term bound(std::uint32_t index);
    /// Abstraction over an already nameless body; `hint` is only used for printing.
    static Term abs(std::string hint, Term body);
    static Term app(Term fun, Term arg);
    static Term choice(Term left, Term right);

    bool null() const noexcept { return node_ == nullptr; }

    Kind kind() const noexcept;
    /// Free variable name, or binder hint of an abstraction.
    const std::string& name() const noexcept;
    std::uint32_t index() const noexcept;

    const Term& body() const noexcept;   // Abs
    const Term& fun() const noexcept;    // App
    const Term& arg() const noexcept;    // App
    const Term& left() const noexcept;   // Choice
    const Term& right() const noexcept;  // Choice

    std::uint64_t hash() const noexcept;
    /// Number of AST nodes.
    std::uint64_t size() const noexcept;
    /// One more than the largest de Bruijn index escaping the term (0 if none).
    std::uint32_t loose() const noexcept;
    /// Bloom mask of the free names occurring in the term.
    std::uint64_t free_mask() const noexcept;

    bool is_value() const noexcept {
        return kind() == Kind::Abs || kind() == Kind::Free || kind() == Kind::Bound;
    }
    bool is_closed() const noexcept { return loose() == 0 && free_mask() == 0; }

    bool same_node(const Term& other) const noexcept { return node_ == other.node_; }

    friend bool operator==(const Term& a, const Term& b) noexcept;
    friend bool operator!=(const Term& a, const Term& b) noexcept { return !(a == b); }

private:
    explicit Term(std::shared_ptr<const detail::Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const detail::Node> node_;
};

namespace detail {

struct Node {
    Kind kind;
    std::uint32_t index = 0;
    std::uint32_t loose = 0;
    std::uint64_t free_mask = 0;
    std::uint64_t size = 1;
    std::uint64_t hash = 0;
    std::string name;
    Term first;
    Term second;
};

}  // namespace detail

inline Term Term::free(std::string name) {
    auto n = std::make_shared<detail::Node>();
    n->kind = Kind::Free;
    n->free_mask = detail::name_bit(name);
    n->hash = detail::mix(1, detail::fnv1a(name));
    n->name = std::move(name);
    return Term(std::move(n));
}

inline Term Term::bound(std::uint32_t index) {
    auto n = std::make_shared<detail::Node>();
    n->kind = Kind::Bound;
    n->index = index;
    n->loose = index + 1;
    n->hash = detail::mix(2, index);
    return Term(std::move(n));
}

inline Term Term::abs(std::string hint, Term body) {
    auto n = std::make_shared<detail::Node>();
    n->kind = Kind::Abs;
    n->loose = body.loose() == 0 ? 0 : body.loose() - 1;
    n->free_mask = body.free_mask();
    n->size = body.size() + 1;
    n->hash = detail::mix(3, body.hash());
    n->name = std::move(hint);
    n->first = std::move(body);
    return Term(std::move(n));
}

inline Term Term::app(Term fun, Term arg) {
    auto n = std::make_shared<detail::Node>();
    n->kind = Kind::App;
    n->loose = std::max(fun.loose(), arg.loose());
    n->free_mask = fun.free_mask() | arg.free_mask();
    n->size = fun.size() + arg.size() + 1;
    n->hash = detail::mix(detail::mix(4, fun.hash()), arg.hash());
    n->first = std::move(fun);
    n->second = std::move(arg);
    return Term(std::move(n));
}

inline Term Term::choice(Term left, Term right) {
    auto n = std::make_shared<detail::Node>();
    n->kind = Kind::Choice;
    n->loose = std::max(left.loose(), right.loose());
    n->free_mask = left.free_mask() | right.free_mask();
    n->size = left.size() + right.size() + 1;
    n->hash = detail::mix(detail::mix(5, left.hash()), right.hash());
    n->first = std::move(left);
    n->second = std::move(right);
    return Term(std::move(n));
}

inline Kind Term::kind() const noexcept { return node_->kind; }
inline const std::string& Term::name() const noexcept { return node_->name; }
inline std::uint32_t Term::index() const noexcept { return node_->index; }
inline const Term& Term::body() const noexcept { return node_->first; }
inline const Term& Term::fun() const noexcept { return node_->first; }
inline const Term& Term::arg() const noexcept { return node_->second; }
inline const Term& Term::left() const noexcept { return node_->first; }
inline const Term& Term::right() const noexcept { return node_->second; }
inline std::uint64_t Term::hash() const noexcept { return node_->hash; }
inline std::uint64_t Term::size() const noexcept { return node_->size; }
inline std::uint32_t Term::loose() const noexcept { return node_ ? node_->loose : 0; }
inline std::uint64_t Term::free_mask() const noexcept { return node_ ? node_->free_mask : 0; }

inline bool operator==(const Term& a, const Term& b) noexcept {
    if (a.node_ == b.node_) return true;
    if (!a.node_ || !b.node_) return false;
    if (a.hash() != b.hash() || a.size() != b.size() || a.kind() != b.kind()) return false;
    switch (a.kind()) {
    case Kind::Bound: return a.index() == b.index();
    case Kind::Free: return a.name() == b.name();
    case Kind::Abs: return a.body() == b.body();
    case Kind::App:
    case Kind::Choice: return a.node_->first == b.node_->first && a.node_->second == b.node_->second;
    }
    return false;
}

/// Deterministic total order on alpha-classes (hash first, then structure).
struct TermLess {
    bool operator()(const Term& a, const Term& b) const noexcept { return compare(a, b) < 0; }

    static int compare(const Term& a, const Term& b) noexcept {
        if (a.same_node(b)) return 0;
        if (a.hash() != b.hash()) return a.hash() < b.hash() ? -1 : 1;
        if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
        if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
        switch (a.kind()) {
        case Kind::Bound:
            return a.index() == b.index() ? 0 : (a.index() < b.index() ? -1 : 1);
        case Kind::Free:
            return a.name().compare(b.name());
        case Kind::Abs:
            return compare(a.body(), b.body());
        case Kind::App:
            if (int c = compare(a.fun(), b.fun())) return c;
            return compare(a.arg(), b.arg());
        case Kind::Choice:
            if (int c = compare(a.left(), b.left())) return c;
            return compare(a.right(), b.right());
        }
        return 0;
    }
};

struct TermHash {
    std::size_t operator()(const Term& t) const noexcept { return static_cast<std::size_t>(t.hash()); }
};

// ---------------------------------------------------------------------------
// Index manipulation

/// Adds `by` to every bound index >= cutoff.
inline Term shift(const Term& t, std::uint32_t by, std::uint32_t cutoff = 0) {
    if (by == 0 || t.loose() <= cutoff) return t;
    switch (t.kind()) {
    case Kind::Bound: return Term::bound(t.index() + by);
    case Kind::Free: return t;
    case Kind::Abs: return Term::abs(t.name(), shift(t.body(), by, cutoff + 1));
    case Kind::App: return Term::app(shift(t.fun(), by, cutoff), shift(t.arg(), by, cutoff));
    case Kind::Choice: return Term::choice(shift(t.left(), by, cutoff), shift(t.right(), by, cutoff));
    }
    return t;
}

namespace detail {

inline Term instantiate_at(const Term& t, std::uint32_t depth, const Term& repl) {
    if (t.loose() <= depth) return t;
    switch (t.kind()) {
    case Kind::Bound:
        if (t.index() == depth) return shift(repl, depth);
        return Term::bound(t.index() - 1);
    case Kind::Free: return t;
    case Kind::Abs: return Term::abs(t.name(), instantiate_at(t.body(), depth + 1, repl));
    case Kind::App:
        return Term::app(instantiate_at(t.fun(), depth, repl), instantiate_at(t.arg(), depth, repl));
    case Kind::Choice:
        return Term::choice(instantiate_at(t.left(), depth, repl), instantiate_at(t.right(), depth, repl));
    }
    return t;
}

inline Term abstract_at(const Term& t, const std::string& name, std::uint64_t bit, std::uint32_t depth) {
    if ((t.free_mask() & bit) == 0 && t.loose() <= depth) return t;
    switch (t.kind()) {
    case Kind::Bound: return t.index() >= depth ? Term::bound(t.index() + 1) : t;
    case Kind::Free: return t.name() == name ? Term::bound(depth) : t;
    case Kind::Abs: return Term::abs(t.name(), abstract_at(t.body(), name, bit, depth + 1));
    case Kind::App:
        return Term::app(abstract_at(t.fun(), name, bit, depth), abstract_at(t.arg(), name, bit, depth));
    case Kind::Choice:
        return Term::choice(abstract_at(t.left(), name, bit, depth), abstract_at(t.right(), name, bit, depth));
    }
    return t;
}

inline Term substitute_at(const Term& t, const std::string& name, std::uint64_t bit, const Term& repl,
                          std::uint32_t depth) {
    if ((t.free_mask() & bit) == 0) return t;
    switch (t.kind()) {
    case Kind::Bound: return t;
    case Kind::Free: return t.name() == name ? shift(repl, depth) : t;
    case Kind::Abs: return Term::abs(t.name(), substitute_at(t.body(), name, bit, repl, depth + 1));
    case Kind::App:
        return Term::app(substitute_at(t.fun(), name, bit, repl, depth),
                         substitute_at(t.arg(), name, bit, repl, depth));
    case Kind::Choice:
        return Term::choice(substitute_at(t.left(), name, bit, repl, depth),
                            substitute_at(t.right(), name, bit, repl, depth));
    }
    return t;
}

inline void collect_free(const Term& t, std::set<std::string>& out) {
    if (t.free_mask() == 0) return;
    switch (t.kind()) {
    case Kind::Bound: return;
    case Kind::Free: out.insert(t.name()); return;
    case Kind::Abs: collect_free(t.body(), out); return;
    case Kind::App:
    case Kind::Choice:
        collect_free(t.kind() == Kind::App ? t.fun() : t.left(), out);
        collect_free(t.kind() == Kind::App ? t.arg() : t.right(), out);
        return;
    }
}

}  // namespace detail

/// Replaces bound index 0 of an abstraction body by `repl` (the beta contractum).
inline Term instantiate(const Term& body, const Term& repl) { return detail::instantiate_at(body, 0, repl); }

/// Turns free occurrences of `name` into the variable of a new outermost binder.
inline Term abstract(const Term& body, const std::string& name) {
    return detail::abstract_at(body, name, detail::name_bit(name), 0);
}

// ---------------------------------------------------------------------------
// Named construction

inline Term var(std::string name) { return Term::free(std::move(name)); }

/// λname. body, binding the free occurrences of `name` in `body`.
inline Term lam(const std::string& name, const Term& body) { return Term::abs(name, abstract(body, name)); }

inline Term lam(std::initializer_list<std::string> names, Term body) {
    for (auto it = std::rbegin(names); it != std::rend(names); ++it) body = lam(*it, body);
    return body;
}

inline Term app(Term f, Term a) { return Term::app(std::move(f), std::move(a)); }

template <typename... Rest>
Term app(Term f, Term a, Term b, Rest... rest) {
    return app(Term::app(std::move(f), std::move(a)), std::move(b), std::move(rest)...);
}

inline Term choice(Term l, Term r) { return Term::choice(std::move(l), std::move(r)); }

/// Capture-avoiding M{N/x}. `repl` may be open.
inline Term substitute(const Term& body, const std::string& name, const Term& repl) {
    return detail::substitute_at(body, name, detail::name_bit(name), repl, 0);
}

inline std::set<std::string> free_vars(const Term& t) {
    std::set<std::string> out;
    detail::collect_free(t, out);
    return out;
}

inline bool is_value(const Term& t) { return t.is_value(); }

inline bool alpha_eq(const Term& a, const Term& b) { return a == b; }

}  // namespace plambda
