#pragma once

// Concrete syntax:
//
//   term   := lambda | choice
//   lambda := ('\' | 'λ') ident+ '.' term
//   choice := app ('(+)' app)*          left-associative; '⊕' is an alias
//   app    := atom+ [lambda]            left-associative
//   atom   := ident | CONSTANT | 'NAT' integer | '(' term ')'
//
// A lambda extends as far to the right as possible. `--` starts a comment
// running to the end of the line. Upper-case names from the constant table
// (OMEGA, TT, FF, XOR, H, MFDT, GEO, ...) expand to their closed terms.

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "plambda/encodings.hpp"
#include "plambda/term.hpp"

namespace plambda {

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Term parse_all() {
        skip_space();
        Term t = parse_term();
        skip_space();
        if (pos_ < text_.size()) fail("unexpected input");
        return t;
    }

private:
    [[noreturn]] void fail(const std::string& message) const {
        std::size_t line = 1;
        std::size_t col = 1;
        for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                col = 1;
            } else if ((static_cast<unsigned char>(text_[i]) & 0xC0) != 0x80) {
                ++col;
            }
        }
        throw ParseError(message, line, col);
    }

    bool starts_with(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

    void skip_space() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (starts_with("--")) {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    bool at_lambda() const { return starts_with("\\") || starts_with("λ"); }
    bool at_choice_op() const { return starts_with("(+)") || starts_with("⊕"); }

    static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
    static bool ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '#';
    }

    bool at_atom() const {
        if (pos_ >= text_.size()) return false;
        if (at_choice_op()) return false;
        char c = text_[pos_];
        return c == '(' || ident_start(c);
    }

    std::string read_ident() {
        if (pos_ >= text_.size() || !ident_start(text_[pos_])) fail("identifier expected");
        std::size_t start = pos_;
        while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    Term parse_term() {
        if (at_lambda()) return parse_lambda();
        return parse_choice();
    }

    Term parse_lambda() {
        pos_ += starts_with("\\") ? 1 : std::string_view("λ").size();
        skip_space();
        std::vector<std::string> binders;
        binders.push_back(read_ident());
        skip_space();
        while (pos_ < text_.size() && ident_start(text_[pos_])) {
            binders.push_back(read_ident());
            skip_space();
        }
        if (!starts_with(".")) fail("'.' expected after binder");
        ++pos_;
        skip_space();
        for (const auto& b : binders) scope_.push_back(b);
        Term body = parse_term();
        scope_.resize(scope_.size() - binders.size());
        for (auto it = binders.rbegin(); it != binders.rend(); ++it) body = Term::abs(*it, std::move(body));
        return body;
    }

    Term parse_choice() {
        Term left = parse_app();
        skip_space();
        while (at_choice_op()) {
            pos_ += starts_with("(+)") ? 3 : std::string_view("⊕").size();
            skip_space();
            if (at_lambda()) return Term::choice(std::move(left), parse_lambda());
            left = Term::choice(std::move(left), parse_app());
            skip_space();
        }
        return left;
    }

    Term parse_app() {
        if (!at_atom()) fail(pos_ >= text_.size() ? "unexpected end of input" : "term expected");
        Term t = parse_atom();
        skip_space();
        while (true) {
            if (at_lambda()) return Term::app(std::move(t), parse_lambda());
            if (!at_atom()) break;
            t = Term::app(std::move(t), parse_atom());
            skip_space();
        }
        return t;
    }

    Term parse_atom() {
        if (text_[pos_] == '(') {
            ++pos_;
            skip_space();
            Term t = parse_term();
            skip_space();
            if (!starts_with(")")) fail("')' expected");
            ++pos_;
            return t;
        }
        std::string name = read_ident();
        for (std::size_t i = scope_.size(); i-- > 0;) {
            if (scope_[i] == name) return Term::bound(static_cast<std::uint32_t>(scope_.size() - 1 - i));
        }
        if (name == "NAT") {
            skip_space();
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (start == pos_) fail("natural number expected after NAT");
            std::uint64_t n = 0;
            try {
                n = std::stoull(std::string(text_.substr(start, pos_ - start)));
            } catch (const std::exception&) {
                fail("numeral out of range");
            }
            return enc::nat(n);
        }
        const auto& table = enc::constants();
        if (auto it = table.find(name); it != table.end()) return it->second;
        return Term::free(std::move(name));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::vector<std::string> scope_;
};

}  // namespace detail

/// Parses one term. Unbound names become free variables.
inline Term parse(std::string_view text) { return detail::Parser(text).parse_all(); }

/// Splits a corpus (one term per line, `--` comments, blank lines skipped).
inline std::vector<Term> parse_corpus(std::string_view text) {
    std::vector<Term> out;
    std::size_t start = 0;
    std::size_t line_no = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        std::string_view line = text.substr(start, end - start);
        std::string_view code = line.substr(0, line.find("--"));
        bool blank = true;
        for (char c : code) blank = blank && std::isspace(static_cast<unsigned char>(c));
        if (!blank) {
            try {
                out.push_back(parse(line));
            } catch (const ParseError& e) {
                throw ParseError(e.message(), line_no, e.column());
            }
        }
        start = end + 1;
    }
    return out;
}

}  // namespace plambda
