#pragma once

#include <cctype>
#include <set>
#include <string>
#include <vector>

#include "plambda/term.hpp"

namespace plambda {

enum class PrintMode {
    Pretty,     ///< binder hints, renamed only when they would clash
    Canonical,  ///< binders named x0, x1, ... by nesting depth
};

namespace detail {

class Printer {
public:
    Printer(const Term& root, PrintMode mode) : mode_(mode), free_(free_vars(root)) {
        if (mode_ == PrintMode::Canonical) {
            while (prefix_clashes()) prefix_ += '_';
        }
    }

    std::string run(const Term& t) {
        emit(t, Pos::Top, true);
        return std::move(out_);
    }

private:
    enum class Pos { Top, ChoiceLeft, ChoiceRight, AppFun, AppArg };

    bool prefix_clashes() const {
        for (const auto& n : free_) {
            if (n.size() > prefix_.size() && n.compare(0, prefix_.size(), prefix_) == 0) {
                bool digits = true;
                for (std::size_t i = prefix_.size(); i < n.size(); ++i) {
                    digits = digits && std::isdigit(static_cast<unsigned char>(n[i]));
                }
                if (digits) return true;
            }
        }
        return false;
    }

    bool in_scope(const std::string& name) const {
        if (free_.count(name)) return true;
        for (const auto& s : scope_) {
            if (s == name) return true;
        }
        return false;
    }

    std::string binder_name(const Term& abs) const {
        if (mode_ == PrintMode::Canonical) return prefix_ + std::to_string(scope_.size());
        std::string base = abs.name().empty() ? "x" : abs.name();
        if (!in_scope(base)) return base;
        for (unsigned i = 1;; ++i) {
            std::string candidate = base + std::to_string(i);
            if (!in_scope(candidate)) return candidate;
        }
    }

    void emit(const Term& t, Pos pos, bool tail) {
        switch (t.kind()) {
        case Kind::Bound:
            if (t.index() < scope_.size()) {
                out_ += scope_[scope_.size() - 1 - t.index()];
            } else {
                out_ += "?" + std::to_string(t.index() - scope_.size());
            }
            return;
        case Kind::Free:
            out_ += t.name();
            return;
        case Kind::Abs: {
            bool paren = !(tail && (pos == Pos::Top || pos == Pos::ChoiceRight));
            if (paren) out_ += '(';
            std::string name = binder_name(t);
            out_ += '\\';
            out_ += name;
            out_ += ". ";
            scope_.push_back(std::move(name));
            emit(t.body(), Pos::Top, true);
            scope_.pop_back();
            if (paren) out_ += ')';
            return;
        }
        case Kind::App: {
            bool paren = pos == Pos::AppArg;
            if (paren) out_ += '(';
            emit(t.fun(), Pos::AppFun, false);
            out_ += ' ';
            emit(t.arg(), Pos::AppArg, false);
            if (paren) out_ += ')';
            return;
        }
        case Kind::Choice: {
            bool paren = pos == Pos::AppFun || pos == Pos::AppArg || pos == Pos::ChoiceRight;
            if (paren) out_ += '(';
            emit(t.left(), Pos::ChoiceLeft, false);
            out_ += " (+) ";
            emit(t.right(), Pos::ChoiceRight, paren || tail);
            if (paren) out_ += ')';
            return;
        }
        }
    }

    PrintMode mode_;
    std::set<std::string> free_;
    std::vector<std::string> scope_;
    std::string prefix_ = "x";
    std::string out_;
};

}  // namespace detail

/// Renders a term in the concrete syntax accepted by `parse`.
inline std::string print(const Term& t, PrintMode mode = PrintMode::Pretty) {
    return detail::Printer(t, mode).run(t);
}

inline std::string canonical(const Term& t) { return print(t, PrintMode::Canonical); }

}  // namespace plambda
