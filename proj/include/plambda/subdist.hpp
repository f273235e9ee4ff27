#pragma once

#include <map>
#include <utility>
#include <vector>

#include "plambda/dyadic.hpp"
#include "plambda/term.hpp"

namespace plambda {

/// Finite sub-distribution over values: every stored mass is positive and
/// the total never exceeds one. Alpha-equivalent values share one entry.
class SubDist {
public:
    using Map = std::map<Term, Dyadic, TermLess>;
    using const_iterator = Map::const_iterator;

    SubDist() = default;

    static SubDist point(const Term& v) {
        SubDist d;
        d.add(v, Dyadic::one());
        return d;
    }

    /// Adds mass to a value. Callers that build intermediate results may exceed
    /// one temporarily; `check()` enforces the bound.
    void add(const Term& v, const Dyadic& m) {
        if (!v.is_value()) throw InvariantViolation("distribution key is not a value");
        if (m.is_zero()) return;
        auto [it, inserted] = entries_.try_emplace(v, m);
        if (!inserted) it->second += m;
    }

    Dyadic at(const Term& v) const {
        auto it = entries_.find(v);
        return it == entries_.end() ? Dyadic::zero() : it->second;
    }

    Dyadic mass() const {
        Dyadic total;
        for (const auto& [v, m] : entries_) total += m;
        return total;
    }

    bool empty() const noexcept { return entries_.empty(); }
    std::size_t size() const noexcept { return entries_.size(); }
    const_iterator begin() const noexcept { return entries_.begin(); }
    const_iterator end() const noexcept { return entries_.end(); }
    const Map& entries() const noexcept { return entries_; }

    std::vector<Term> support() const {
        std::vector<Term> out;
        out.reserve(entries_.size());
        for (const auto& [v, m] : entries_) out.push_back(v);
        return out;
    }

    SubDist scaled(const Dyadic& factor) const {
        SubDist out;
        if (factor.is_zero()) return out;
        for (const auto& [v, m] : entries_) out.entries_.emplace_hint(out.entries_.end(), v, m * factor);
        return out;
    }

    /// Throws InvariantViolation when the total mass exceeds one.
    const SubDist& check() const {
        if (mass() > Dyadic::one()) throw InvariantViolation("sub-distribution mass exceeds 1: " + mass().str());
        return *this;
    }

    friend bool operator==(const SubDist& a, const SubDist& b) { return a.entries_ == b.entries_; }
    friend bool operator!=(const SubDist& a, const SubDist& b) { return !(a == b); }

private:
    Map entries_;
};

/// Pointwise weighted sum. Weights must sum to at most one and the result
/// must remain a sub-distribution.
inline SubDist combine(const std::vector<std::pair<Dyadic, SubDist>>& parts) {
    Dyadic weights;
    SubDist out;
    for (const auto& [w, d] : parts) {
        weights += w;
        for (const auto& [v, m] : d) out.add(v, w * m);
    }
    if (weights > Dyadic::one()) throw InvariantViolation("combine weights exceed 1: " + weights.str());
    out.check();
    return out;
}

/// Pointwise order.
inline bool leq(const SubDist& a, const SubDist& b) {
    for (const auto& [v, m] : a) {
        if (m > b.at(v)) return false;
    }
    return true;
}

inline Dyadic mass(const SubDist& d) { return d.mass(); }

inline SubDist scale_by_mass(const SubDist& d, const Dyadic& m) { return d.scaled(m); }

/// Pointwise minimum; always a sub-distribution.
inline SubDist meet(const SubDist& a, const SubDist& b) {
    SubDist out;
    for (const auto& [v, m] : a) {
        Dyadic other = b.at(v);
        out.add(v, m < other ? m : other);
    }
    return out;
}

/// Pointwise sum without weights (used when merging disjoint contributions).
inline SubDist sum(const SubDist& a, const SubDist& b) {
    SubDist out = a;
    for (const auto& [v, m] : b) out.add(v, m);
    out.check();
    return out;
}

}  // namespace plambda
